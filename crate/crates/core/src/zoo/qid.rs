//! The quantum information distributor (QID).
//!
//! On qubits the processor is `G = Σ_j σ_j ⊗ |Ξ_j⟩⟨Ξ_j|` over the Bell basis.
//! On qudits it is the network `P₁₂₃ = D₃₁ D₂₁† D₁₃ D₁₂` of conditional shifts,
//! with qudit 1 as data and qudits 2, 3 as program. Program states are
//! expanded in the maximally entangled basis `|Ξ_mn⟩`, which `P₁₂₃` maps
//! covariantly onto the Weyl operators `U^(m,n)`.

use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::processor::{decompose, BranchDecomposition, Encoding, ProcessorDefinition, ProgramBasis, ProgramState};
use crate::qlinalg::{cis, sinc, Ket, Operator, C64};

/// Outcome labels of [`qid2_basis`]: `|0+⟩, |0−⟩, |1+⟩, |1−⟩`.
pub const QID2_LABELS: [&str; 4] = ["0+", "0-", "1+", "1-"];

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Bell kets `Ξ_0, Ξ_x, Ξ_y, Ξ_z` on two program qubits (index `2a + b`).
fn pauli_bell(j: usize) -> Ket {
    let s = FRAC_1_SQRT_2;
    let amps = match j {
        0 => [s, 0.0, 0.0, s],
        1 => [0.0, s, s, 0.0],
        2 => [0.0, s, -s, 0.0],
        3 => [s, 0.0, 0.0, -s],
        _ => unreachable!(),
    };
    Ket::from_real(&amps).expect("finite")
}

/// `G = Σ_j σ_j ⊗ |Ξ_j⟩⟨Ξ_j|` with one data qubit and two program qubits.
pub fn qid2() -> ProcessorDefinition {
    let mut g = Operator::zeros(8, 8);
    for j in 0..4 {
        let bell = pauli_bell(j);
        g = &g + &Operator::pauli(j).kron(&Operator::outer(&bell, &bell));
    }
    ProcessorDefinition::from_unitary("qid2", 2, 4, &g).expect("QID is unitary")
}

/// `|Ξ(μ⃗)⟩ = cos μ|Ξ₀⟩ + i (sin μ/μ)(μ_x|Ξ_x⟩ + μ_y|Ξ_y⟩ + μ_z|Ξ_z⟩)`.
pub fn su2_program(mu: [f64; 3]) -> ProgramState {
    let len = (mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2]).sqrt();
    let mut amps = pauli_bell(0).scale(r(len.cos())).into_amps();
    let s = C64::new(0.0, sinc(len));
    for (k, &m) in mu.iter().enumerate() {
        for (a, b) in amps.iter_mut().zip(pauli_bell(k + 1).amps()) {
            *a += s * m * b;
        }
    }
    let ket = Ket::new(amps).expect("finite");
    ProgramState::new(ket, Encoding::Su2 { mu }).expect("unit norm for every μ⃗")
}

/// `{|0⟩|+⟩, |0⟩|−⟩, |1⟩|+⟩, |1⟩|−⟩}` labelled by [`QID2_LABELS`].
pub fn qid2_basis() -> ProgramBasis {
    let s = FRAC_1_SQRT_2;
    let vectors = [[s, s, 0.0, 0.0], [s, -s, 0.0, 0.0], [0.0, 0.0, s, s], [0.0, 0.0, s, -s]]
        .iter()
        .map(|a| Ket::from_real(a).expect("finite"))
        .collect();
    ProgramBasis::new(vectors, QID2_LABELS.iter().map(|l| String::from(*l)).collect()).expect("orthonormal")
}

/// Pauli index `j` such that outcome `label` applies `σ_j U_μ σ_j / 2` up to a sign.
pub fn qid2_outcome_pauli(label: &str) -> Option<usize> {
    match label {
        "0+" => Some(0),
        "0-" => Some(3),
        "1+" => Some(1),
        "1-" => Some(2),
        _ => None,
    }
}

fn omega(n: usize, k: i64) -> C64 {
    cis(2.0 * PI * (k.rem_euclid(n as i64)) as f64 / n as f64)
}

fn modn(x: i64, n: usize) -> usize {
    x.rem_euclid(n as i64) as usize
}

/// `D_ab = Σ_{k,m} |k⟩⟨k| ⊗ |(m ± k) mod N⟩⟨m|` on control ⊗ target.
///
/// `forward = true` gives `D_ab`, `false` gives `D_ab†`.
pub fn conditional_shift(n: usize, forward: bool) -> Operator {
    let sign = if forward { 1 } else { -1 };
    Operator::from_fn(n * n, n * n, |row, col| {
        let (k, m) = (col / n, col % n);
        let target = modn(m as i64 + sign * k as i64, n);
        if row == k * n + target { r(1.0) } else { r(0.0) }
    })
}

/// Conditional shift between qudits `control` and `target` of a three-qudit register.
fn shift_on_three(n: usize, control: usize, target: usize, forward: bool) -> Operator {
    let sign = if forward { 1 } else { -1 };
    Operator::from_fn(n * n * n, n * n * n, |row, col| {
        let mut digits = [col / (n * n), (col / n) % n, col % n];
        digits[target] = modn(digits[target] as i64 + sign * digits[control] as i64, n);
        if row == digits[0] * n * n + digits[1] * n + digits[2] { r(1.0) } else { r(0.0) }
    })
}

/// `P₁₂₃ = D₃₁ D₂₁† D₁₃ D₁₂` on the three-qudit space (qudit 1 major).
pub fn qid_n_network(n: usize) -> Operator {
    let d12 = shift_on_three(n, 0, 1, true);
    let d13 = shift_on_three(n, 0, 2, true);
    let d21_dag = shift_on_three(n, 1, 0, false);
    let d31 = shift_on_three(n, 2, 0, true);
    &(&(&d31 * &d21_dag) * &d13) * &d12
}

/// The qudit QID: data dimension `N`, program dimension `N²`.
pub fn qid_n(n: usize) -> Result<ProcessorDefinition> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("qudit dimension {n} < 2")));
    }
    ProcessorDefinition::from_unitary(format!("qid-{n}"), n, n * n, &qid_n_network(n))
}

/// `|Ξ_mn⟩ = N^{−1/2} Σ_k e^{2πimk/N} |k⟩|(k − n) mod N⟩`.
pub fn bell_state(m: usize, n: usize, dim: usize) -> Ket {
    let mut amps = alloc::vec![r(0.0); dim * dim];
    let s = 1.0 / (dim as f64).sqrt();
    for k in 0..dim {
        amps[k * dim + modn(k as i64 - n as i64, dim)] = omega(dim, (m * k) as i64) * s;
    }
    Ket::new(amps).expect("finite")
}

/// `U^(m,n) = Σ_s e^{−2πism/N} |(s − n) mod N⟩⟨s|`.
pub fn weyl(m: usize, n: usize, dim: usize) -> Operator {
    Operator::from_fn(dim, dim, |row, s| {
        if row == modn(s as i64 - n as i64, dim) {
            omega(dim, -((s * m) as i64))
        } else {
            r(0.0)
        }
    })
}

/// `|Φ_rs⟩ = N^{−1} Σ_{m,n} e^{2πi(mr − ns)/N} |Ξ_mn⟩`, labelled `"(r,s)"`, `r` major.
pub fn phi_basis(dim: usize) -> ProgramBasis {
    let bells: Vec<Ket> = (0..dim * dim).map(|i| bell_state(i / dim, i % dim, dim)).collect();
    let mut vectors = Vec::with_capacity(dim * dim);
    let mut labels = Vec::with_capacity(dim * dim);
    for rr in 0..dim {
        for s in 0..dim {
            let mut amps = alloc::vec![r(0.0); dim * dim];
            for m in 0..dim {
                for n in 0..dim {
                    let w = omega(dim, (m * rr) as i64 - (n * s) as i64) / dim as f64;
                    for (a, b) in amps.iter_mut().zip(bells[m * dim + n].amps()) {
                        *a += w * b;
                    }
                }
            }
            vectors.push(Ket::new(amps).expect("finite"));
            labels.push(format!("({rr},{s})"));
        }
    }
    ProgramBasis::new(vectors, labels).expect("Φ basis is orthonormal")
}

/// `|−r⟩ ⊗ N^{−1/2} Σ_n e^{2πins/N} |(n − r) mod N⟩`.
pub fn phi_factorized(rr: usize, s: usize, dim: usize) -> Ket {
    let first = Ket::basis(dim, modn(-(rr as i64), dim));
    let mut second = alloc::vec![r(0.0); dim];
    for n in 0..dim {
        second[modn(n as i64 - rr as i64, dim)] += omega(dim, (n * s) as i64) / (dim as f64).sqrt();
    }
    first.kron(&Ket::new(second).expect("finite"))
}

/// `d_mn = N^{−1} Tr[(U^(m,n))† V]`, row-major in `(m, n)`.
pub fn weyl_expansion(v: &Operator) -> Result<Vec<C64>> {
    if !v.is_square() {
        return Err(Error::NotSquare { rows: v.rows(), cols: v.cols() });
    }
    if v.frobenius_norm() == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let dim = v.rows();
    let mut d = Vec::with_capacity(dim * dim);
    for m in 0..dim {
        for n in 0..dim {
            d.push((&weyl(m, n, dim).dagger() * v).trace() / dim as f64);
        }
    }
    Ok(d)
}

/// `|Ξ_V⟩ = Σ d_mn |Ξ_mn⟩` after rescaling `V` to Frobenius norm `√N`.
///
/// The discarded factor `‖V‖_F/√N` is recorded in the encoding; it is 1 for unitary `V`.
pub fn program_for(v: &Operator) -> Result<ProgramState> {
    let dim = v.rows();
    let norm = v.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let scale = norm / (dim as f64).sqrt();
    let coefficients = weyl_expansion(&v.scale(r(1.0 / scale)))?;
    let mut amps = alloc::vec![r(0.0); dim * dim];
    for m in 0..dim {
        for n in 0..dim {
            let d = coefficients[m * dim + n];
            for (a, b) in amps.iter_mut().zip(bell_state(m, n, dim).amps()) {
                *a += d * b;
            }
        }
    }
    ProgramState::new(Ket::new(amps)?, Encoding::WeylExpansion { dim, coefficients, scale })
}

/// `N^{−1} U^(s,r) V (U^(s,r))†`, the operator outcome `(r, s)` applies.
pub fn qid_n_rotated_target(v: &Operator, rr: usize, s: usize) -> Operator {
    let dim = v.rows();
    let u = weyl(s, rr, dim);
    (&(&u * v) * &u.dagger()).scale(r(1.0 / dim as f64))
}

/// Decomposes the qudit QID programmed with `V` in the `Φ` basis.
pub fn qid_n_branches(v: &Operator, psi: &Ket) -> Result<BranchDecomposition> {
    let dim = v.rows();
    let proc = qid_n(dim)?;
    decompose(&proc, psi, &program_for(v)?, &phi_basis(dim))
}
