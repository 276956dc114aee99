//! Fixed-capacity vectors, matrices and a pivoted LU for the tiny dense systems
//! that appear point-by-point in the solver (p <= 3, s*p <= 12).

use std::fmt;
use std::ops::{Deref, DerefMut};

/// Largest number of conserved components supported.
pub const MAX_P: usize = 3;

/// Largest local system handled by [`Lu`] (four sub-nodes of a three-component system).
pub const MAX_DIM: usize = 12;

/// A short real vector of runtime length `<= MAX_P`, stored inline.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct SVec {
    len: usize,
    v: [f64; MAX_P],
}

impl SVec {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_P, "vector length {len} exceeds {MAX_P}");
        Self { len, v: [0.0; MAX_P] }
    }

    pub fn from_slice(s: &[f64]) -> Self {
        let mut out = Self::zeros(s.len());
        out.v[..s.len()].copy_from_slice(s);
        out
    }

    pub fn scalar(x: f64) -> Self {
        Self::from_slice(&[x])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn map(mut self, f: impl Fn(f64) -> f64) -> Self {
        for x in self.iter_mut() {
            *x = f(*x);
        }
        self
    }

    pub fn zip_with(mut self, other: &SVec, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.len, other.len);
        for (x, y) in self.iter_mut().zip(other.iter()) {
            *x = f(*x, *y);
        }
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Deref for SVec {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.v[..self.len]
    }
}

impl DerefMut for SVec {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.v[..self.len]
    }
}

impl fmt::Debug for SVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// A square real matrix of runtime size `<= MAX_P`, row-major, stored inline.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct SMat {
    n: usize,
    m: [[f64; MAX_P]; MAX_P],
}

impl SMat {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_P, "matrix size {n} exceeds {MAX_P}");
        Self { n, m: [[0.0; MAX_P]; MAX_P] }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.m[i][i] = 1.0;
        }
        out
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let mut out = Self::zeros(rows.len());
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), rows.len());
            out.m[i][..r.len()].copy_from_slice(r);
        }
        out
    }

    pub fn scalar(x: f64) -> Self {
        Self::from_rows(&[&[x]])
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.m[i][j] = x;
    }

    pub fn scale(mut self, s: f64) -> Self {
        for i in 0..self.n {
            for j in 0..self.n {
                self.m[i][j] *= s;
            }
        }
        self
    }

    pub fn plus(mut self, other: &SMat) -> Self {
        for i in 0..self.n {
            for j in 0..self.n {
                self.m[i][j] += other.m[i][j];
            }
        }
        self
    }

    pub fn minus(mut self, other: &SMat) -> Self {
        for i in 0..self.n {
            for j in 0..self.n {
                self.m[i][j] -= other.m[i][j];
            }
        }
        self
    }

    pub fn mul(&self, other: &SMat) -> SMat {
        let mut out = SMat::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let aik = self.m[i][k];
                for j in 0..self.n {
                    out.m[i][j] += aik * other.m[k][j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> SVec {
        let mut out = SVec::zeros(self.n);
        for i in 0..self.n {
            out[i] = (0..self.n).map(|j| self.m[i][j] * v[j]).sum();
        }
        out
    }

    pub fn transpose(&self) -> SMat {
        let mut out = SMat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.m[j][i] = self.m[i][j];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max(self.m[i][j].abs());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.m[i][j] == 0.0))
    }

    /// `self * other^{-1}`, computed as the transpose of `other^{-T} self^T`.
    pub fn right_divide(&self, other: &SMat) -> Option<SMat> {
        let n = self.n;
        let mut flat = [0.0; MAX_DIM * MAX_DIM];
        for i in 0..n {
            for j in 0..n {
                flat[i * n + j] = other.m[j][i];
            }
        }
        let lu = Lu::factor(n, &flat[..n * n])?;
        let mut out = SMat::zeros(n);
        for r in 0..n {
            // row r of the result solves other^T x = (row r of self)^T
            let mut b = [0.0; MAX_DIM];
            b[..n].copy_from_slice(&self.m[r][..n]);
            lu.solve_in_place(&mut b[..n]);
            out.m[r][..n].copy_from_slice(&b[..n]);
        }
        Some(out)
    }
}

impl fmt::Debug for SMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.n).map(|i| &self.m[i][..self.n])).finish()
    }
}

/// LU factorisation with partial pivoting of an `n x n` matrix, `n <= MAX_DIM`.
#[derive(Clone)]
pub struct Lu {
    n: usize,
    lu: [f64; MAX_DIM * MAX_DIM],
    piv: [usize; MAX_DIM],
}

impl Lu {
    /// Factor a row-major matrix. Returns `None` when a pivot vanishes relative
    /// to the largest entry of the input.
    pub fn factor(n: usize, a: &[f64]) -> Option<Self> {
        assert!(n <= MAX_DIM && a.len() >= n * n);
        let mut lu = [0.0; MAX_DIM * MAX_DIM];
        lu[..n * n].copy_from_slice(&a[..n * n]);
        let mut piv = [0usize; MAX_DIM];
        let scale = a[..n * n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !scale.is_finite() || scale == 0.0 {
            return None;
        }
        let tiny = scale * 1e-14;

        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].abs();
            for i in k + 1..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tiny {
                return None;
            }
            piv[k] = p;
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
            }
            let inv = 1.0 / lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] * inv;
                lu[i * n + k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= l * lu[k * n + j];
                    }
                }
            }
        }
        Some(Self { n, lu, piv })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
        }
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * b[j];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * b[j];
            }
            b[i] = s / self.lu[i * n + i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_pivoting_system() {
        // zero leading entry forces a row swap
        let a = [0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let lu = Lu::factor(3, &a).unwrap();
        let x = [1.0, -2.0, 0.5];
        let mut b = [0.0; 3];
        for i in 0..3 {
            b[i] = (0..3).map(|j| a[i * 3 + j] * x[j]).sum();
        }
        lu.solve_in_place(&mut b);
        for i in 0..3 {
            assert!((b[i] - x[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn lu_rejects_singular() {
        let a = [1.0, 2.0, 2.0, 4.0];
        assert!(Lu::factor(2, &a).is_none());
        assert!(Lu::factor(2, &[0.0; 4]).is_none());
    }

    #[test]
    fn right_divide_inverts() {
        let a = SMat::from_rows(&[&[2.0, 1.0, 0.0], &[0.0, 3.0, 1.0], &[1.0, 0.0, 4.0]]);
        let b = SMat::from_rows(&[&[1.0, 0.5, 0.0], &[0.2, 2.0, 0.1], &[0.0, 0.3, 1.5]]);
        let x = a.right_divide(&b).unwrap();
        let back = x.mul(&b);
        assert!(back.minus(&a).max_abs() < 1e-14);
    }

    #[test]
    fn svec_deref_has_runtime_length() {
        let v = SVec::from_slice(&[1.0, -4.0]);
        assert_eq!(v.len(), 2);
        assert_eq!(&v[..], &[1.0, -4.0]);
        assert_eq!(v.max_abs(), 4.0);
    }
}
