use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use super::{C64, ONE, TOL_NORM, ZERO};
use crate::error::{Error, Result};

/// A complex amplitude vector over a finite computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: Vec<C64>,
}

impl Ket {
    /// Builds a ket from raw amplitudes. Rejects empty and non-finite input.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(Self { amps })
    }

    /// Builds a ket from real amplitudes.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis ket `|index⟩` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { amps: vec![ZERO; dim] }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Fails with [`Error::NotNormalized`] unless `|‖ψ‖² − 1| ≤ TOL_NORM`.
    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized(TOL_NORM) {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm_sqr: self.norm_sqr() })
        }
    }

    /// Returns `ψ / ‖ψ‖`.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroOperator);
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Kronecker product `self ⊗ other`.
    #[doc(alias = "tensor")]
    pub fn kron(&self, other: &Ket) -> Ket {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ket { amps }
    }

    pub fn add(&self, other: &Ket) -> Result<Ket> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(Ket { amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect() })
    }

    /// Largest entrywise distance `max |a_i − b_i|`.
    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Euclidean distance to `other` after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &Ket) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let overlap: C64 = self.amps.iter().zip(&other.amps).map(|(a, b)| b.conj() * a).sum();
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b * phase).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<usize> for Ket {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.amps[i]
    }
}
