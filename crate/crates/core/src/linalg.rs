//! Small dense matrices: Perron eigendata by two-sided power iteration and
//! the matrix exponential by scaling-and-squaring.
//!
//! Everything here operates on matrices with at most a few hundred rows;
//! no sparsity, no blocking.

use crate::error::{Error, Result};
use crate::num::{flt, Real};

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DenseMatrix<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            a: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let row = &self.a[i * self.n..(i + 1) * self.n];
                row.iter().zip(v).fold(T::zero(), |acc, (m, x)| acc + *m * *x)
            })
            .collect()
    }

    /// Left action `vᵀ M`, returned as a column.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.n);
        let mut out = vec![T::zero(); self.n];
        for (i, vi) in v.iter().enumerate() {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            for (o, m) in out.iter_mut().zip(row) {
                *o = *o + *vi * *m;
            }
        }
        out
    }

    pub fn mat_mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let s = self.get(i, l);
                if s == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] = out.a[i * n + j] + s * other.get(l, j);
                }
            }
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| {
                self.a[i * self.n..(i + 1) * self.n]
                    .iter()
                    .fold(T::zero(), |acc, x| acc + x.abs())
            })
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn scale(&self, c: T) -> Self {
        DenseMatrix {
            n: self.n,
            a: self.a.iter().map(|x| *x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        DenseMatrix {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| *x + *y).collect(),
        }
    }

    pub fn shift_diagonal(&self, s: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i, m.get(i, i) + s);
        }
        m
    }
}

/// Perron eigendata of a primitive nonnegative matrix, normalized so that
/// `Σ right = 1` and `left · right = 1`.
#[derive(Debug, Clone)]
pub(crate) struct PerronData<T> {
    pub lambda: T,
    pub left: Vec<T>,
    pub right: Vec<T>,
    pub residual: T,
}

fn normalize_l1<T: Real>(v: &mut [T]) {
    let s = v.iter().fold(T::zero(), |a, x| a + x.abs());
    for x in v.iter_mut() {
        *x = *x / s;
    }
}

/// Two-sided power iteration for the Perron root of a primitive
/// nonnegative matrix.
///
/// `tol` bounds the relative eigen-residual `‖Mv − λv‖_∞ / (λ ‖v‖_∞)` on
/// both sides.
pub(crate) fn perron<T: Real>(
    m: &DenseMatrix<T>,
    tol: T,
    max_iter: usize,
) -> Result<PerronData<T>> {
    let n = m.size();
    assert!(n > 0, "empty matrix");
    let mut right = vec![T::one() / flt::<T>(n as f64); n];
    let mut left = right.clone();
    let mut residual = T::infinity();
    for _ in 0..max_iter {
        let mut r_next = m.mul_vec(&right);
        let mut l_next = m.vec_mul(&left);
        normalize_l1(&mut r_next);
        normalize_l1(&mut l_next);
        right = r_next;
        left = l_next;
        // Rayleigh estimate with both vectors converges quadratically.
        let mr = m.mul_vec(&right);
        let num = left.iter().zip(&mr).fold(T::zero(), |a, (l, x)| a + *l * *x);
        let den = left
            .iter()
            .zip(&right)
            .fold(T::zero(), |a, (l, r)| a + *l * *r);
        let lambda = num / den;
        let rel = |v: &[T], mv: &[T]| {
            let peak = v.iter().fold(T::zero(), |a, x| a.max(x.abs()));
            let worst = mv
                .iter()
                .zip(v)
                .fold(T::zero(), |a, (y, x)| a.max((*y - lambda * *x).abs()));
            worst / (lambda * peak)
        };
        let ml = m.vec_mul(&left);
        residual = rel(&right, &mr).max(rel(&left, &ml));
        if residual <= tol {
            // Final normalization: Σ right = 1, left · right = 1.
            let rs = right.iter().fold(T::zero(), |a, x| a + *x);
            for x in right.iter_mut() {
                *x = *x / rs;
            }
            let dot = left
                .iter()
                .zip(&right)
                .fold(T::zero(), |a, (l, r)| a + *l * *r);
            for x in left.iter_mut() {
                *x = *x / dot;
            }
            return Ok(PerronData {
                lambda,
                left,
                right,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "power iteration",
        residual: residual.to_f64().unwrap_or(f64::NAN),
        iterations: max_iter,
    })
}

/// `exp(tB)` by scaling-and-squaring with a truncated Taylor series; terms
/// are dropped once below `1e-16` of the running norm.
pub(crate) fn expm<T: Real>(b: &DenseMatrix<T>, t: T) -> DenseMatrix<T> {
    let n = b.size();
    let x = b.scale(t);
    let norm = x.norm_inf();
    let squarings = if norm > flt(0.5) {
        (norm.to_f64().unwrap() / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let xs = x.scale(T::one() / flt(2f64.powi(squarings as i32)));
    let mut sum = DenseMatrix::identity(n);
    let mut term = DenseMatrix::identity(n);
    let cutoff = scaled_term_tol::<T>();
    for k in 1..200 {
        term = term.mat_mul(&xs).scale(T::one() / flt(k as f64));
        sum = sum.add(&term);
        if term.norm_inf() <= cutoff * sum.norm_inf().max(T::one()) {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..squarings {
        result = result.mat_mul(&result);
    }
    result
}

fn scaled_term_tol<T: Real>() -> T {
    crate::num::scaled_tol(1e-16)
}
