//! Concrete processors, program encoders and measurement bases.
//!
//! - [`qubit`]: the single-CNOT `U(1)` processor, the CNOT+Toffoli processor
//!   and the cyclic-shift processors for `B(z) = |0⟩⟨0| + z|1⟩⟨1|`.
//! - [`qudit`]: the cyclic diagonal processor and the amplitude modifier for
//!   `B₀(z) = z|0⟩⟨0| + X`.
//! - [`qid`]: the quantum information distributor on qubits (Pauli/Bell form)
//!   and on qudits (four conditional shifts, Weyl operators).
//! - [`closed_form`]: exact success probabilities of all the above.

pub mod closed_form;
pub mod qid;
pub mod qubit;
pub mod qudit;

pub use closed_form::{closed_form, ClosedFormFamily, ClosedFormProb};
pub use qid::{
    bell_state, conditional_shift, phi_basis, phi_factorized, program_for, qid2, qid2_basis,
    qid2_outcome_pauli, qid_n, qid_n_branches, qid_n_network, qid_n_rotated_target, su2_program,
    weyl, weyl_expansion, QID2_LABELS,
};
pub use qubit::{
    b_operator, cyclic_shift_processor, geometric_program, u1_cnot, u1_program, vmc3,
    vmc3_literal_program, vmc3_program,
};
pub use qudit::{amp_modifier_processor, b0_operator, diagonal_program, qudit_diagonal_processor};

use num_traits::Float;

/// `(1 − r^{2k}) / (1 − r^{2n})`, continuous at `r = 1` where it equals `k/n`.
pub fn geometric_ratio(r: f64, k: u32, n: u32) -> f64 {
    let l = r.ln();
    if l == 0.0 {
        return k as f64 / n as f64;
    }
    (2.0 * k as f64 * l).exp_m1() / (2.0 * n as f64 * l).exp_m1()
}

/// Squared magnitude of the leading amplitude of a geometric program,
/// `|c₀|² = (1 − |z|²)/(1 − |z|^{2N})`, equal to `1/N` at `|z| = 1`.
pub fn geometric_c0_sqr(z_abs: f64, n: usize) -> f64 {
    geometric_ratio(z_abs, 1, n as u32)
}
