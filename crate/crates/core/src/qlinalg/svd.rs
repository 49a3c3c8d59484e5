use num_traits::Float;
use alloc::vec::Vec;

use super::{Operator, C64, ZERO};

const MAX_SWEEPS: usize = 60;

/// Singular values of `m` by one-sided (Hestenes) Jacobi rotations on the columns.
///
/// Returned in no particular order.
pub fn singular_values(m: &Operator) -> Vec<f64> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut columns: Vec<Vec<C64>> =
        (0..cols).map(|c| (0..rows).map(|r| m.get(r, c)).collect()).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = columns[p].iter().map(|a| a.norm_sqr()).sum();
                let beta: f64 = columns[q].iter().map(|a| a.norm_sqr()).sum();
                let gamma: C64 = columns[p].iter().zip(&columns[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rephase column q so that ⟨u_p|u_q⟩ is real, then apply a real rotation.
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (head, tail) = columns.split_at_mut(q);
                for (up, uq) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (a, b) = (*up, *uq * phase);
                    *up = a * c - b * s;
                    *uq = a * s + b * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    columns
        .iter()
        .map(|col| col.iter().fold(ZERO, |acc, a| acc + a.norm_sqr()).re.sqrt())
        .collect()
}
