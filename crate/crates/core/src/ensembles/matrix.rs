use std::io::{self, Write};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Dense symmetric matrix, row-major, both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T> {
    size: usize,
    data: Vec<T>,
}

impl<T: Real> SymmetricMatrix<T> {
    pub fn zeros(size: usize) -> Self {
        SymmetricMatrix { size, data: vec![T::zero(); size * size] }
    }

    /// Build from the upper triangle: `f(i, j)` is called for `i <= j`.
    pub fn from_upper(size: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            for j in i..size {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        Self::from_upper(d.len(), |i, j| if i == j { d[i] } else { T::zero() })
    }

    /// Row-major data; rejected unless exactly symmetric.
    pub fn from_row_major(size: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::DimensionMismatch { left: data.len(), right: size * size });
        }
        let m = SymmetricMatrix { size, data };
        for i in 0..size {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(invalid(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.size + j]
    }

    /// Set `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.size + j] = v;
        self.data[j * self.size + i] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.size)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for i in 0..self.size {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Symmetric matrix of `±1` signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    size: usize,
    data: Vec<i8>,
}

impl SignMatrix {
    pub fn ones(size: usize) -> Self {
        SignMatrix { size, data: vec![1; size * size] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.data[i * self.size + j]
    }

    /// Set `(i, j)` and `(j, i)`; panics unless `s` is `±1`.
    pub fn set(&mut self, i: usize, j: usize, s: i8) {
        assert!(s == 1 || s == -1, "sign must be +1 or -1");
        self.data[i * self.size + j] = s;
        self.data[j * self.size + i] = s;
    }

    pub fn entries(&self) -> &[i8] {
        &self.data
    }

    /// Mean of the entries on and above the diagonal.
    pub fn upper_mean(&self) -> f64 {
        let n = self.size;
        let sum: i64 = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| self.get(i, j) as i64).sum();
        sum as f64 / (n * (n + 1) / 2) as f64
    }
}

/// Entrywise product `A ∘ E`.
pub fn hadamard<T: Real>(a: &SymmetricMatrix<T>, e: &SignMatrix) -> Result<SymmetricMatrix<T>> {
    if a.size != e.size {
        return Err(Error::DimensionMismatch { left: a.size, right: e.size });
    }
    let data = a
        .data
        .iter()
        .zip(&e.data)
        .map(|(&x, &s)| if s < 0 { -x } else { x })
        .collect();
    Ok(SymmetricMatrix { size: a.size, data })
}
