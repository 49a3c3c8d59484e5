//! Qudit-data processors for diagonal operators.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::processor::{assemble, Encoding, ProcessorDefinition, ProgramState};
use crate::qlinalg::{Ket, Operator, C64};

/// `A_jk = |m⟩⟨m|` with `m = (k − j) mod D`; the program dimension equals `D`.
///
/// Outcome `j` of a program `Σ c_k|k⟩` applies the diagonal operator whose
/// entry `m` is `c_{(m + j) mod D}`.
pub fn qudit_diagonal_processor(d: usize) -> Result<ProcessorDefinition> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("data dimension {d} < 2")));
    }
    let mut blocks = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            blocks.push(Operator::projector(d, (k + d - j) % d));
        }
    }
    assemble(format!("diagonal-{d}"), d, d, blocks)
}

/// Program whose outcome 0 applies `diag(entries)` up to normalization.
pub fn diagonal_program(entries: &[C64]) -> Result<ProgramState> {
    let ket = Ket::new(entries.to_vec())?;
    if ket.norm() == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let normalized = ket.normalized()?;
    ProgramState::new(normalized, Encoding::Diagonal { entries: entries.to_vec() })
}

/// `B₀(z) = z|0⟩⟨0| + Σ_{k≥1} |k⟩⟨k|` on a `d`-dimensional space.
pub fn b0_operator(z: C64, d: usize) -> Operator {
    let mut entries = alloc::vec![C64::new(1.0, 0.0); d];
    entries[0] = z;
    Operator::diag(&entries)
}

/// `A_jk = δ_jk X + δ_{k, j+1}|0⟩⟨0|` on a `d`-dimensional data space and an
/// `n`-dimensional program, with `X = Σ_{k≥1}|k⟩⟨k|` and the index addition
/// taken mod `n`.
///
/// With [`super::geometric_program`]`(z, n)` every outcome `j ≤ n − 2` applies
/// `c₀ z^j B₀(z)`.
pub fn amp_modifier_processor(d: usize, n: usize) -> Result<ProcessorDefinition> {
    if d < 2 || n < 2 {
        return Err(Error::InvalidParameter(format!("dimensions D = {d}, N = {n} must be ≥ 2")));
    }
    let x = &Operator::identity(d) - &Operator::projector(d, 0);
    let mut blocks = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let mut a = Operator::zeros(d, d);
            if j == k {
                a = &a + &x;
            }
            if (j + 1) % n == k {
                a = &a + &Operator::projector(d, 0);
            }
            blocks.push(a);
        }
    }
    assemble(format!("amp-modifier-{d}x{n}"), d, n, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processor::{decompose, program_operator, ProgramBasis};
    use crate::qlinalg::c64;
    use crate::zoo::geometric_program;
    use alloc::vec;

    #[test]
    fn qutrit_table() {
        // Rows j, columns k of the qutrit table: the projector index m.
        let proc = qudit_diagonal_processor(3).unwrap();
        let table = [[0, 1, 2], [2, 0, 1], [1, 2, 0]];
        for (j, row) in table.iter().enumerate() {
            for (k, &m) in row.iter().enumerate() {
                assert_eq!(proc.block(j, k), &Operator::projector(3, m));
            }
        }
    }

    #[test]
    fn uniform_program_gives_identity_thirds() {
        let proc = qudit_diagonal_processor(3).unwrap();
        let xi = diagonal_program(&[c64(1.0, 0.0); 3]).unwrap();
        let psi = Ket::new(vec![c64(0.5, 0.5), c64(0.0, 0.5), c64(-0.5, 0.0)]).unwrap();
        let dec = decompose(&proc, &psi, &xi, &ProgramBasis::computational(3)).unwrap();
        for b in &dec.branches {
            assert!((b.probability - 1.0 / 3.0).abs() < 1e-14);
            assert!(b.operator.proportionality_defect(&Operator::identity(3)) < 1e-14);
        }
    }

    #[test]
    fn basis_program_is_identity() {
        let proc = qudit_diagonal_processor(3).unwrap();
        let xi = diagonal_program(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]).unwrap();
        let a0 = program_operator(&proc, &xi, 0).unwrap();
        // The uniform sum over outcomes of A_j(|0⟩) is I; outcome 0 alone is |0⟩⟨0|.
        assert_eq!(a0, Operator::projector(3, 0));
        let psi = Ket::basis(3, 0);
        let dec = decompose(&proc, &psi, &xi, &ProgramBasis::computational(3)).unwrap();
        assert!((dec.branches[0].probability - 1.0).abs() < 1e-15);
    }

    #[test]
    fn branch_one_is_cyclic_shift_of_entries() {
        let raw = [c64(0.8, 0.0), c64(0.36, 0.48), c64(0.2, -0.1)];
        let xi = diagonal_program(&raw).unwrap();
        let c = xi.ket().amps();
        let proc = qudit_diagonal_processor(3).unwrap();
        let a1 = program_operator(&proc, &xi, 1).unwrap();
        assert!(a1.max_abs_diff(&Operator::diag(&[c[1], c[2], c[0]])) < 1e-15);
        let a2 = program_operator(&proc, &xi, 2).unwrap();
        assert!(a2.max_abs_diff(&Operator::diag(&[c[2], c[0], c[1]])) < 1e-15);
    }

    #[test]
    fn amp_modifier_branches() {
        let (d, n) = (3, 4);
        let z = c64(0.7, 0.0);
        let proc = amp_modifier_processor(d, n).unwrap();
        let xi = geometric_program(z, n).unwrap();
        let c0 = xi.ket()[0];
        for j in 0..n - 1 {
            let a = program_operator(&proc, &xi, j).unwrap();
            assert!(a.max_abs_diff(&b0_operator(z, d).scale(c0 * z.powu(j as u32))) < 1e-15);
        }
        assert!(amp_modifier_processor(1, 3).is_err());
        assert!(amp_modifier_processor(3, 1).is_err());
    }

    #[test]
    fn b0_of_one_is_identity() {
        assert_eq!(b0_operator(c64(1.0, 0.0), 4), Operator::identity(4));
    }

    #[test]
    fn zero_diagonal_rejected() {
        assert!(matches!(diagonal_program(&[c64(0.0, 0.0); 2]), Err(Error::ZeroOperator)));
    }
}
