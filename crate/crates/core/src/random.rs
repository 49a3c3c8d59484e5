//! Random states and unitaries drawn from an externally seeded stream.

use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_core::RngCore;

use crate::qlinalg::{Ket, Operator, C64};

/// Uniform draw in `[0, 1)` with 53 random bits.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard complex Gaussian `(x + iy)/√2` via Box-Muller.
pub fn complex_normal<R: RngCore + ?Sized>(rng: &mut R) -> C64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    let r = (-u1.ln()).sqrt();
    C64::from_polar(r, 2.0 * PI * u2)
}

/// Haar-random pure state of dimension `dim`.
pub fn haar_state<R: RngCore + ?Sized>(dim: usize, rng: &mut R) -> Ket {
    loop {
        let amps: Vec<C64> = (0..dim).map(|_| complex_normal(rng)).collect();
        let k = Ket::new(amps).expect("finite gaussian amplitudes");
        if let Ok(n) = k.normalized() {
            return n;
        }
    }
}

/// Haar-random unitary: Gram-Schmidt on the columns of a complex Ginibre matrix.
pub fn haar_unitary<R: RngCore + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| complex_normal(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, qa) in v.iter_mut().zip(q) {
                    *x -= overlap * qa;
                }
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    Operator::from_fn(dim, dim, |r, c| cols[c][r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn uniform_range() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let u = uniform(&mut rng);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn haar_objects_are_valid() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for dim in 1..6 {
            assert!(haar_state(dim, &mut rng).is_normalized(1e-12));
            assert!(haar_unitary(dim, &mut rng).is_unitary(1e-10));
        }
    }

    #[test]
    fn haar_state_first_weight_mean() {
        // E|ψ_0|² = 1/d for Haar-random states.
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let n = 20_000;
        let mean: f64 = (0..n).map(|_| haar_state(2, &mut rng)[0].norm_sqr()).sum::<f64>() / n as f64;
        // sd of |ψ_0|² for d = 2 is 1/√12.
        assert!((mean - 0.5).abs() < 3.0 * (1.0 / 12f64).sqrt() / (n as f64).sqrt());
    }
}
