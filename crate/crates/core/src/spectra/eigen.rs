//! Symmetric eigenvalues: Householder reduction to tridiagonal form followed
//! by the implicit-shift QL iteration.
//!
//! Only the upper triangle of a row-major working copy is touched, so every
//! inner loop runs over a contiguous slice.

use crate::ensembles::SymmetricMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// QL sweeps allowed per eigenvalue before giving up.
const MAX_SWEEPS: usize = 60;

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: T = ca.remainder().iter().zip(cb.remainder()).map(|(&x, &y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        acc[0] = acc[0] + x[0] * y[0];
        acc[1] = acc[1] + x[1] * y[1];
        acc[2] = acc[2] + x[2] * y[2];
        acc[3] = acc[3] + x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

/// Reduce to tridiagonal form. Returns `(diagonal, off_diagonal)`, the latter
/// of length `n` with a trailing zero.
pub(crate) fn tridiagonalize<T: Real>(a: &SymmetricMatrix<T>) -> (Vec<T>, Vec<T>) {
    let n = a.size();
    let mut w: Vec<T> = a.as_slice().to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];

    for k in 0..n {
        d[k] = w[k * n + k];
        if k + 1 >= n {
            break;
        }
        let m = n - k - 1;
        let base = k + 1;
        let x = &w[k * n + base..(k + 1) * n];
        let alpha = x[0];
        let sigma = dot(&x[1..], &x[1..]);
        if sigma == T::zero() {
            e[k] = alpha;
            continue;
        }
        let norm = (alpha * alpha + sigma).sqrt();
        let beta = if alpha > T::zero() { -norm } else { norm };
        let tau = (beta - alpha) / beta;
        let scale = T::one() / (alpha - beta);
        let v = &mut v[..m];
        v[0] = T::one();
        for (vi, &xi) in v[1..].iter_mut().zip(&x[1..]) {
            *vi = xi * scale;
        }
        e[k] = beta;

        // p = tau * B v with B the trailing block, read from its upper triangle.
        let p = &mut p[..m];
        p.iter_mut().for_each(|x| *x = T::zero());
        for i in 0..m {
            let row = &w[(base + i) * n + base + i..(base + i + 1) * n];
            let vi = v[i];
            p[i] = p[i] + dot(row, &v[i..]);
            axpy(vi, &row[1..], &mut p[i + 1..]);
        }
        p.iter_mut().for_each(|x| *x = *x * tau);
        let half_k = T::lit(0.5) * tau * dot(p, v);
        axpy(-half_k, v, p);

        // B -= v p^T + p v^T
        for i in 0..m {
            let row = &mut w[(base + i) * n + base + i..(base + i + 1) * n];
            let (vi, pi) = (v[i], p[i]);
            for ((bij, &vj), &pj) in row.iter_mut().zip(&v[i..]).zip(&p[i..]) {
                *bij = *bij - vi * pj - pi * vj;
            }
        }
    }
    (d, e)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[0..n-1]`; `d` is overwritten, unsorted.
pub(crate) fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    let two = T::lit(2.0);
    let eps = T::epsilon();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::Unsupported(format!(
                    "QL iteration did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// All eigenvalues, ascending.
pub(crate) fn symmetric_eigenvalues<T: Real>(a: &SymmetricMatrix<T>) -> Result<Vec<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let (mut d, mut e) = tridiagonalize(a);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(d)
}
