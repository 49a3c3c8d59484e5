//! Exact success probabilities.

use num_traits::Float;
use alloc::format;

use super::geometric_ratio;
use crate::error::{Error, Result};

/// A family of closed-form success probabilities together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormFamily {
    /// `U(1)` CNOT loop with `rounds` attempts: `1 − 2^{−n}`.
    U1Loop { rounds: u32 },
    /// One pass of the `N`-dimensional cyclic processor for `B(z)` on
    /// `ψ = α|0⟩ + β|1⟩`: `(1 − |z|^{2(N−1)})/(1 − |z|^{2N}) · (|α|² + |z|²|β|²)`.
    BzFinite { z_abs: f64, program_dim: u32, alpha_sqr: f64 },
    /// [`ClosedFormFamily::BzFinite`] averaged over Haar-random data states.
    BzAverage { z_abs: f64, program_dim: u32 },
    /// `N → ∞` limit of [`ClosedFormFamily::BzFinite`].
    BzLimit { z_abs: f64, alpha_sqr: f64 },
    /// One pass of the amplitude modifier for `B₀(z)` with `N`-dim program;
    /// `ground_sqr = |⟨0|ψ⟩|²`.
    B0Qudit { z_abs: f64, program_dim: u32, ground_sqr: f64 },
    /// Diagonal unitary loop on a `dim`-level system: `1 − (1 − 1/dim)^n`.
    DiagonalLoop { dim: u32, rounds: u32 },
    /// Qubit QID loop: `1 − (3/4)^n`.
    Qid2Loop { rounds: u32 },
    /// Qudit QID loop: `1 − (1 − 1/N²)^K`.
    QidNLoop { dim: u32, rounds: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormProb {
    pub family: ClosedFormFamily,
    pub value: f64,
}

fn check_weight(name: &str, w: f64) -> Result<()> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {w} outside [0, 1]")))
    }
}

fn check_z(z_abs: f64) -> Result<()> {
    if z_abs.is_finite() && z_abs > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("|z| = {z_abs} must be positive and finite")))
    }
}

fn check_rounds(rounds: u32) -> Result<()> {
    if rounds >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("at least one round is required".into()))
    }
}

fn loop_success(per_round: f64, rounds: u32) -> f64 {
    // 1 − (1 − p)^n without cancellation for small p·n.
    -(rounds as f64 * (-per_round).ln_1p()).exp_m1()
}

/// Evaluates a closed-form success probability.
pub fn closed_form(family: ClosedFormFamily) -> Result<ClosedFormProb> {
    use ClosedFormFamily::*;
    let value = match family {
        U1Loop { rounds } => {
            check_rounds(rounds)?;
            loop_success(0.5, rounds)
        }
        BzFinite { z_abs, program_dim, alpha_sqr } => {
            check_z(z_abs)?;
            check_weight("|α|²", alpha_sqr)?;
            if program_dim < 2 {
                return Err(Error::InvalidParameter("program dimension < 2".into()));
            }
            let b_norm = alpha_sqr + z_abs * z_abs * (1.0 - alpha_sqr);
            geometric_ratio(z_abs, program_dim - 1, program_dim) * b_norm
        }
        BzAverage { z_abs, program_dim } => {
            return closed_form(BzFinite { z_abs, program_dim, alpha_sqr: 0.5 })
                .map(|c| ClosedFormProb { family, value: c.value });
        }
        BzLimit { z_abs, alpha_sqr } => {
            check_z(z_abs)?;
            check_weight("|α|²", alpha_sqr)?;
            let b_norm = alpha_sqr + z_abs * z_abs * (1.0 - alpha_sqr);
            if z_abs < 1.0 {
                b_norm
            } else if z_abs > 1.0 {
                b_norm / (z_abs * z_abs)
            } else {
                1.0
            }
        }
        B0Qudit { z_abs, program_dim, ground_sqr } => {
            check_z(z_abs)?;
            check_weight("|ψ₀|²", ground_sqr)?;
            if program_dim < 2 {
                return Err(Error::InvalidParameter("program dimension < 2".into()));
            }
            let b_norm = z_abs * z_abs * ground_sqr + (1.0 - ground_sqr);
            geometric_ratio(z_abs, program_dim - 1, program_dim) * b_norm
        }
        DiagonalLoop { dim, rounds } => {
            check_rounds(rounds)?;
            if dim < 2 {
                return Err(Error::InvalidParameter("dimension < 2".into()));
            }
            loop_success(1.0 / dim as f64, rounds)
        }
        Qid2Loop { rounds } => {
            check_rounds(rounds)?;
            loop_success(0.25, rounds)
        }
        QidNLoop { dim, rounds } => {
            check_rounds(rounds)?;
            if dim < 2 {
                return Err(Error::InvalidParameter("dimension < 2".into()));
            }
            loop_success(1.0 / (dim as f64 * dim as f64), rounds)
        }
    };
    // Rounding can push products of ratios a few ulps past 1.
    Ok(ClosedFormProb { family, value: value.clamp(0.0, 1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClosedFormFamily::*;

    fn v(f: ClosedFormFamily) -> f64 {
        closed_form(f).unwrap().value
    }

    #[test]
    fn qid2_values() {
        assert!((v(Qid2Loop { rounds: 2 }) - 7.0 / 16.0).abs() < 1e-15);
        // (3/4)^30 by repeated multiplication.
        let mut fail = 1.0f64;
        for _ in 0..30 {
            fail *= 0.75;
        }
        assert!((1.0 - v(Qid2Loop { rounds: 30 }) - fail).abs() < 1e-15);
        assert!((fail - 1.785e-4).abs() < 1e-6);
    }

    #[test]
    fn qid_n_single_round() {
        assert!((v(QidNLoop { dim: 2, rounds: 1 }) - 0.25).abs() < 1e-15);
        assert!((v(QidNLoop { dim: 2, rounds: 2 }) - 7.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn bz_average_point() {
        assert!((v(BzAverage { z_abs: 0.5f64.sqrt(), program_dim: 4 }) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn unit_modulus_limits() {
        for n in 2..10 {
            let expected = (n as f64 - 1.0) / n as f64;
            assert!((v(BzFinite { z_abs: 1.0, program_dim: n, alpha_sqr: 0.3 }) - expected).abs() < 1e-15);
            assert!((v(B0Qudit { z_abs: 1.0, program_dim: n, ground_sqr: 0.9 }) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(closed_form(U1Loop { rounds: 0 }).is_err());
        assert!(closed_form(BzFinite { z_abs: 0.0, program_dim: 4, alpha_sqr: 0.5 }).is_err());
        assert!(closed_form(BzFinite { z_abs: 0.5, program_dim: 4, alpha_sqr: 1.5 }).is_err());
        assert!(closed_form(QidNLoop { dim: 1, rounds: 3 }).is_err());
    }

    #[test]
    fn values_in_unit_interval() {
        for z in [0.1, 0.5, 0.99, 1.0, 1.01, 2.0, 10.0] {
            for n in 2..12 {
                for a in [0.0, 0.25, 1.0] {
                    let p = v(BzFinite { z_abs: z, program_dim: n, alpha_sqr: a });
                    assert!((0.0..=1.0).contains(&p), "z={z} n={n} a={a} p={p}");
                }
            }
        }
    }
}
