use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use super::svd::singular_values;
use super::{Ket, C64, I, ONE, TOL_SINGULAR, ZERO};
use crate::error::{Error, Result};

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if data.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a square matrix from rows of equal length.
    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidParameter("ragged rows".into()));
        }
        Self::new(n, m, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r] } else { ZERO })
    }

    /// `|index⟩⟨index|` on a `dim`-dimensional space.
    pub fn projector(dim: usize, index: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| if r == index && c == index { ONE } else { ZERO })
    }

    /// Matrix unit `|row⟩⟨col|`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| if r == row && c == col { ONE } else { ZERO })
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &Ket, b: &Ket) -> Self {
        Self::from_fn(a.dim(), b.dim(), |r, c| a[r] * b[c].conj())
    }

    /// Pauli matrix `σ_j`, with `σ_0 = I`, `σ_1 = σ_x`, `σ_2 = σ_y`, `σ_3 = σ_z`.
    pub fn pauli(j: usize) -> Self {
        let e: [C64; 4] = match j {
            0 => [ONE, ZERO, ZERO, ONE],
            1 => [ZERO, ONE, ONE, ZERO],
            2 => [ZERO, -I, I, ZERO],
            3 => [ONE, ZERO, ZERO, -ONE],
            _ => panic!("pauli index {j} out of range"),
        };
        Self { rows: 2, cols: 2, data: e.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    /// Kronecker product `self ⊗ other` with `(i_a, i_b) ↦ i_a·dim_b + i_b`.
    #[doc(alias = "tensor")]
    pub fn kron(&self, other: &Operator) -> Operator {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self.get(ar, ac);
                if a == ZERO {
                    continue;
                }
                for br in 0..other.rows {
                    let row = ar * other.rows + br;
                    for bc in 0..other.cols {
                        data[row * cols + ac * other.cols + bc] = a * other.get(br, bc);
                    }
                }
            }
        }
        Operator { rows, cols, data }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        Operator::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Operator {
        Operator::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * factor).collect() }
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Operator::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Ket) -> Result<Ket> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.dim() });
        }
        let amps = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect();
        Ket::new(amps)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `‖self†self − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let prod = &self.dagger() * self;
        (&prod - &Operator::identity(self.rows)).frobenius_norm()
    }

    /// True iff `‖m†m − I‖_F ≤ tol`. Non-square operators are never unitary.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).norm() <= tol))
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// Returns `λ` with `self ≈ λ·W` for a unitary `W`, if such a scale exists.
    ///
    /// Tests `self†self ∝ I` to relative tolerance `tol`. The returned value is
    /// the non-negative magnitude `|λ|`.
    pub fn unitary_scale(&self, tol: f64) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let gram = &self.dagger() * self;
        let mean = gram.trace().re / self.rows as f64;
        if mean <= 0.0 {
            return None;
        }
        let defect = (&gram - &Operator::identity(self.rows).scale(C64::new(mean, 0.0))).frobenius_norm();
        (defect <= tol * mean).then(|| mean.sqrt())
    }

    /// Distance between `self/‖self‖_F` and `other/‖other‖_F` after removing the
    /// best relative phase. Zero iff the operators are proportional.
    pub fn proportionality_defect(&self, other: &Operator) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let na = self.frobenius_norm();
        let nb = other.frobenius_norm();
        if na == 0.0 || nb == 0.0 {
            return if na == nb { 0.0 } else { 1.0 };
        }
        let overlap: C64 = self.data.iter().zip(&other.data).map(|(a, b)| b.conj() * a).sum();
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a / na - b * phase / nb).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Distance `‖self − e^{iφ}·other‖_F` minimized over the global phase `φ`.
    pub fn distance_up_to_phase(&self, other: &Operator) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let overlap: C64 = self.data.iter().zip(&other.data).map(|(a, b)| b.conj() * a).sum();
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
        (self - &other.scale(phase)).frobenius_norm()
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// Fails with [`Error::SingularOperator`] when the smallest singular value
    /// is at most `TOL_SINGULAR` times the largest.
    pub fn inverse(&self) -> Result<Operator> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let sv = singular_values(self);
        let largest = sv.iter().copied().fold(0.0, f64::max);
        let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
        let threshold = TOL_SINGULAR * largest;
        if largest == 0.0 || smallest <= threshold {
            return Err(Error::SingularOperator { smallest, threshold });
        }

        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = Operator::identity(n).data;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .expect("non-empty range");
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[col * n + col];
            for k in 0..n {
                a[col * n + k] /= p;
                inv[col * n + k] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == ZERO {
                    continue;
                }
                for k in 0..n {
                    let (ak, ik) = (a[col * n + k], inv[col * n + k]);
                    a[r * n + k] -= f * ak;
                    inv[r * n + k] -= f * ik;
                }
            }
        }
        Ok(Operator { rows: n, cols: n, data: inv })
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Panics on dimension mismatch; use [`Operator::matmul`] for a fallible product.
impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs).expect("operator product dimension mismatch")
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Operator {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Operator {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}
