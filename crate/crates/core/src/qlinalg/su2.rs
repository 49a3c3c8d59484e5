use num_traits::Float;
use core::f64::consts::PI;

use super::{cis, Operator, C64, I};
use crate::error::{Error, Result};

/// Tolerance for accepting a 2×2 matrix as unitary in [`su2_log`].
const TOL_UNITARY: f64 = 1e-9;

/// `sin μ / μ`, with the removable singularity at 0.
pub(crate) fn sinc(mu: f64) -> f64 {
    if mu.abs() < 1e-6 {
        1.0 - mu * mu / 6.0
    } else {
        mu.sin() / mu
    }
}

/// `exp(i μ⃗·σ⃗) = cos μ I + i (sin μ/μ) μ⃗·σ⃗` with `μ = |μ⃗|`.
pub fn su2_exp(mu: [f64; 3]) -> Operator {
    let len = (mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2]).sqrt();
    let c = C64::new(len.cos(), 0.0);
    let s = I * sinc(len);
    let mut out = Operator::identity(2).scale(c);
    for (k, &m) in mu.iter().enumerate() {
        out = &out + &Operator::pauli(k + 1).scale(s * m);
    }
    out
}

/// Rotation vector and global phase of a 2×2 unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Log {
    pub mu: [f64; 3],
    pub phase: f64,
}

/// Inverts [`su2_exp`] up to a global phase: `u = e^{iφ}·exp(i μ⃗·σ⃗)`.
///
/// `|μ⃗| ∈ [0, π]`. The phase is half the determinant angle, taken with the
/// angle in `[−π, π)`, so `φ ∈ [−π/2, π/2)`. At `|μ⃗| = π` the axis is not
/// unique and `(0, 0, π)` is returned.
pub fn su2_log(u: &Operator) -> Result<Su2Log> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: u.rows().max(u.cols()) });
    }
    let defect = u.unitarity_defect();
    if defect > TOL_UNITARY {
        return Err(Error::NotUnitary { deviation: defect });
    }
    let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
    let mut theta = det.im.atan2(det.re);
    if theta >= PI - 1e-12 {
        theta -= 2.0 * PI;
    }
    let phase = theta / 2.0;
    let v = u.scale(cis(-phase));

    let c = ((v.get(0, 0) + v.get(1, 1)) / 2.0).re;
    let s = [
        ((v.get(0, 1) + v.get(1, 0)) / 2.0).im,
        ((v.get(0, 1) - v.get(1, 0)) / 2.0).re,
        ((v.get(0, 0) - v.get(1, 1)) / 2.0).im,
    ];
    let s_len = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    let angle = s_len.atan2(c);
    let mu = if s_len > 1e-300 {
        [s[0] / s_len * angle, s[1] / s_len * angle, s[2] / s_len * angle]
    } else if c < 0.0 {
        [0.0, 0.0, PI]
    } else {
        [0.0, 0.0, 0.0]
    };
    Ok(Su2Log { mu, phase })
}

/// `U(α) = exp(iασ_z) = diag(e^{iα}, e^{−iα})`.
pub fn u1_rotation(alpha: f64) -> Operator {
    Operator::diag(&[cis(alpha), cis(-alpha)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{c64, ONE};
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn log_of_identity() {
        let l = su2_log(&Operator::identity(2)).unwrap();
        assert_eq!(l.mu, [0.0, 0.0, 0.0]);
        assert_eq!(l.phase, 0.0);
    }

    #[test]
    fn log_of_u1() {
        let l = su2_log(&u1_rotation(0.3)).unwrap();
        assert!(l.mu[0].abs() < 1e-15 && l.mu[1].abs() < 1e-15);
        assert!((l.mu[2] - 0.3).abs() < 1e-14);
        assert!(l.phase.abs() < 1e-15);
    }

    #[test]
    fn log_of_sigma_x() {
        let l = su2_log(&Operator::pauli(1)).unwrap();
        assert!((l.mu[0] - FRAC_PI_2).abs() < 1e-14);
        assert!(l.mu[1].abs() < 1e-14 && l.mu[2].abs() < 1e-14);
        assert!((l.phase + FRAC_PI_2).abs() < 1e-14);
        let rebuilt = su2_exp(l.mu).scale(cis(l.phase));
        assert!(rebuilt.max_abs_diff(&Operator::pauli(1)) < 1e-14);
    }

    #[test]
    fn log_at_pi_accepts_any_axis() {
        // −I = exp(iπ n⃗·σ⃗) for every unit n⃗.
        let minus = Operator::identity(2).scale(c64(-1.0, 0.0));
        let l = su2_log(&minus).unwrap();
        let rebuilt = su2_exp(l.mu).scale(cis(l.phase));
        assert!(rebuilt.max_abs_diff(&minus) < 1e-14);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Operator::diag(&[ONE, c64(0.5, 0.0)]);
        assert!(matches!(su2_log(&m), Err(Error::NotUnitary { .. })));
    }
}
