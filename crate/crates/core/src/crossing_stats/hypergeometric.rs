//! Gauss hypergeometric function at `z = -1`.
//!
//! The power series diverges on the unit circle for the parameter families we
//! need, so the value is defined through the Pfaff transformations
//!
//! ```text
//! 2F1(a, b; c; -1) = 2^-b 2F1(c - a, b; c; 1/2)
//!                  = 2^-a 2F1(a, c - b; c; 1/2)
//! ```
//!
//! Both right-hand series converge geometrically. Each is summed and the one
//! with the smaller worst-case rounding bound is returned; when one of them
//! terminates and the estimates tie, the terminating one wins.

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

const MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, Copy)]
struct Partial<T> {
    value: T,
    /// Sum of absolute values of the terms.
    magnitude: T,
    terms: usize,
    terminated: bool,
}

impl<T: Real> Partial<T> {
    /// Worst-case rounding bound `n eps sum|t|`, in units of eps.
    fn error_bound(&self, scale: T) -> T {
        scale * self.magnitude * T::from_usize(self.terms).expect("term count fits")
    }
}

/// Sum `2F1(a, b; c; 1/2)` term by term.
fn series_at_half<T: Real>(a: T, b: T, c: T) -> Result<Partial<T>> {
    let half = T::lit(0.5);
    let tol = T::epsilon();
    // Past this index no factor (a+n), (b+n), (c+n) changes sign, so the term
    // ratio settles towards 1/2 and the tail is dominated by the last term.
    let guard = [a, b, c]
        .iter()
        .map(|x| (-*x).ceil().max(T::zero()).to_usize().unwrap_or(0))
        .max()
        .unwrap_or(0)
        + 1;

    let mut term = T::one();
    let mut value = T::one();
    let mut magnitude = T::one();
    for n in 0..MAX_TERMS {
        let nf = T::from_usize(n).expect("term index fits the float type");
        let num = (a + nf) * (b + nf);
        if num == T::zero() {
            return Ok(Partial { value, magnitude, terms: n + 1, terminated: true });
        }
        term = term * num / ((c + nf) * (nf + T::one())) * half;
        value = value + term;
        magnitude = magnitude + term.abs();
        if n >= guard && term.abs() <= tol * magnitude {
            return Ok(Partial { value, magnitude, terms: n + 2, terminated: false });
        }
    }
    Err(Error::Unsupported(format!(
        "2F1 series at z=1/2 did not converge in {MAX_TERMS} terms"
    )))
}

/// `2F1(a, b; c; -1)`, evaluated through the Pfaff transformation to `z = 1/2`.
pub fn hyp2f1_at_minus_one<T: Real>(a: T, b: T, c: T) -> Result<T> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(invalid("hypergeometric parameters must be finite"));
    }
    if c <= T::zero() && c == c.round() {
        return Err(Error::Pole(c.to_f64().unwrap_or(f64::NAN)));
    }
    let two = T::lit(2.0);
    let scale_b = two.powf(-b);
    let scale_a = two.powf(-a);
    let via_b = series_at_half(c - a, b, c)?;
    let via_a = series_at_half(a, c - b, c)?;

    let err_b = via_b.error_bound(scale_b);
    let err_a = via_a.error_bound(scale_a);
    let pick_a = if err_a == err_b {
        via_a.terminated || !via_b.terminated
    } else {
        err_a < err_b
    };
    Ok(if pick_a {
        scale_a * via_a.value
    } else {
        scale_b * via_b.value
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_upper_and_lower_reduces_to_power() {
        // 2F1(a, b; b; z) = (1 - z)^-a
        for &(a, b) in &[(1.0, 2.5), (1.0, 0.75), (2.0, 3.5), (0.5, 1.5)] {
            let got: f64 = hyp2f1_at_minus_one(a, b, b).unwrap();
            let want = 2f64.powf(-a);
            assert!((got - want).abs() < 1e-14, "a={a} b={b}: {got} vs {want}");
        }
    }

    #[test]
    fn elementary_closed_forms() {
        // 2F1(1, 1; 2; z) = -ln(1 - z) / z
        let got: f64 = hyp2f1_at_minus_one(1.0, 1.0, 2.0).unwrap();
        assert!((got - 2f64.ln()).abs() < 1e-15);
        // 2F1(1/2, 1; 3/2; -z^2) = atan(z) / z
        let got: f64 = hyp2f1_at_minus_one(0.5, 1.0, 1.5).unwrap();
        assert!((got - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        // terminating: 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let (b, c) = (1.5, 2.5);
        let want = 1.0 + 2.0 * b / c + b * (b + 1.0) / (c * (c + 1.0));
        let got: f64 = hyp2f1_at_minus_one(-2.0, b, c).unwrap();
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn first_family_vanishes_at_k2() {
        let got: f64 = hyp2f1_at_minus_one(1.0, 1.5, 0.5).unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn single_precision_is_supported() {
        let got: f32 = hyp2f1_at_minus_one(1.0f32, 1.0, 2.0).unwrap();
        assert!((got - 2f32.ln()).abs() < 1e-6);
    }

    #[test]
    fn poles_and_non_finite_parameters_are_rejected() {
        assert!(matches!(hyp2f1_at_minus_one(1.0, 1.0, -3.0), Err(Error::Pole(c)) if c == -3.0));
        assert!(matches!(hyp2f1_at_minus_one(1.0, 1.0, 0.0), Err(Error::Pole(_))));
        assert!(matches!(
            hyp2f1_at_minus_one(f64::NAN, 1.0, 1.5),
            Err(Error::InvalidArgument(_))
        ));
    }
}
