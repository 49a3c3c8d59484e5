//! Qubit-data processors built from CNOT-like blocks.

use num_traits::Float;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::geometric_c0_sqr;
use crate::error::{Error, Result};
use crate::processor::{assemble, Encoding, ProcessorDefinition, ProgramState};
use crate::qlinalg::{cis, Ket, Operator, C64};

fn proj(i: usize) -> Operator {
    Operator::projector(2, i)
}

/// `B(z) = |0⟩⟨0| + z|1⟩⟨1|`.
pub fn b_operator(z: C64) -> Operator {
    Operator::diag(&[C64::new(1.0, 0.0), z])
}

/// A single CNOT with the data qubit as control and the program qubit as target.
pub fn u1_cnot() -> ProcessorDefinition {
    assemble("u1-cnot", 2, 2, vec![proj(0), proj(1), proj(1), proj(0)]).expect("CNOT blocks are complete")
}

/// `Ξ(α) = (e^{iα}|0⟩ + e^{−iα}|1⟩)/√2`, which makes outcome 0 apply `U(α)/√2`.
pub fn u1_program(alpha: f64) -> ProgramState {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let ket = Ket::new(vec![cis(alpha).scale(s), cis(-alpha).scale(s)]).expect("finite");
    ProgramState::new(ket, Encoding::U1 { alpha }).expect("normalized by construction")
}

/// CNOT(data → p₁) followed by Toffoli(data, p₁ → p₂), program index `2·p₁ + p₂`.
pub fn vmc3() -> ProcessorDefinition {
    let z = || Operator::zeros(2, 2);
    #[rustfmt::skip]
    let blocks = vec![
        proj(0), z(),     proj(1), z(),
        z(),     proj(0), z(),     proj(1),
        z(),     proj(1), proj(0), z(),
        proj(1), z(),     z(),     proj(0),
    ];
    assemble("vmc3", 2, 4, blocks).expect("CNOT+Toffoli blocks are complete")
}

/// Product program `Ξ(α) ⊗ Ξ(2α)`, amplitudes `½(e^{3iα}, e^{−iα}, e^{iα}, e^{−3iα})`.
///
/// Outcomes 0, 1, 2 then apply `U(α)` up to phase and outcome 3 applies `U(−3α)`.
pub fn vmc3_program(alpha: f64) -> ProgramState {
    let ket = Ket::new(vec![cis(3.0 * alpha), cis(-alpha), cis(alpha), cis(-3.0 * alpha)])
        .expect("finite")
        .scale(C64::new(0.5, 0.0));
    ProgramState::new(ket, Encoding::U1 { alpha }).expect("normalized by construction")
}

/// The amplitudes `½ e^{i(3−2j)α}` as literally printed for the CNOT+Toffoli
/// processor. Labels 1 and 2 are swapped relative to [`vmc3_program`], so the
/// success branches are no longer all proportional to `U(α)`. Kept to
/// document the discrepancy.
pub fn vmc3_literal_program(alpha: f64) -> ProgramState {
    let amps = (0..4).map(|j| cis((3.0 - 2.0 * j as f64) * alpha).scale(0.5)).collect();
    ProgramState::new(Ket::new(amps).expect("finite"), Encoding::Raw).expect("normalized")
}

/// `A_jk = δ_{j,k}|0⟩⟨0| + δ_{j+1,k}|1⟩⟨1|` with the addition mod `n`.
///
/// For `n = 2` this is the same block grid as [`u1_cnot`].
pub fn cyclic_shift_processor(n: usize) -> Result<ProcessorDefinition> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("program dimension {n} < 2")));
    }
    let mut blocks = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let mut a = Operator::zeros(2, 2);
            if j == k {
                a = &a + &proj(0);
            }
            if (j + 1) % n == k {
                a = &a + &proj(1);
            }
            blocks.push(a);
        }
    }
    assemble(format!("cyclic-{n}"), 2, n, blocks)
}

/// `Ξ = c₀ Σ_j z^j |j⟩` on an `n`-dimensional program, `c₀ > 0`.
pub fn geometric_program(z: C64, n: usize) -> Result<ProgramState> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("program dimension {n} < 2")));
    }
    if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidParameter(format!("geometric ratio z = {z} must be finite and non-zero")));
    }
    let c0 = geometric_c0_sqr(z.norm(), n).sqrt();
    let mut amps = Vec::with_capacity(n);
    let mut term = C64::new(c0, 0.0);
    for _ in 0..n {
        amps.push(term);
        term *= z;
    }
    ProgramState::new(Ket::new(amps)?, Encoding::Geometric { z, dim: n })
}
