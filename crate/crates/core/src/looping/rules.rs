use num_traits::Float;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::processor::{ProcessorDefinition, ProgramBasis, ProgramState};
use crate::qlinalg::{su2_log, Operator, C64};
use crate::zoo::{
    cyclic_shift_processor, diagonal_program, geometric_program, phi_basis, program_for, qid2,
    qid2_basis, qid_n, qudit_diagonal_processor, su2_program, u1_cnot, u1_program,
};

/// Relative tolerance when checking that a target has the shape a family can encode.
const TOL_SHAPE: f64 = 1e-9;

/// Which processor a rule drives and how targets are turned into programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleFamily {
    /// CNOT processor, targets `∝ U(θ)`; the chain runs `α, 2α, 4α, …`.
    U1,
    /// CNOT processor, targets `∝ B(z)`; the chain runs `z, z², z⁴, …`.
    Bz,
    /// `N`-dimensional cyclic processor for `B(z)`. Correcting its failed
    /// branch is an extension; it works whenever the residual is invertible.
    Cyclic { program_dim: usize },
    /// Cyclic diagonal processor on a `dim`-level system.
    Diagonal { dim: usize },
    /// Qubit QID in the `{|0±⟩, |1±⟩}` basis.
    Qid2,
    /// Qudit QID in the `Φ` basis.
    QidN { dim: usize },
}

/// Correction rule of one processor family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrectionRule {
    family: RuleFamily,
}

impl CorrectionRule {
    pub fn u1() -> Self {
        Self { family: RuleFamily::U1 }
    }

    pub fn bz() -> Self {
        Self { family: RuleFamily::Bz }
    }

    pub fn cyclic(program_dim: usize) -> Self {
        Self { family: RuleFamily::Cyclic { program_dim } }
    }

    pub fn diagonal(dim: usize) -> Self {
        Self { family: RuleFamily::Diagonal { dim } }
    }

    pub fn qid2() -> Self {
        Self { family: RuleFamily::Qid2 }
    }

    pub fn qid_n(dim: usize) -> Self {
        Self { family: RuleFamily::QidN { dim } }
    }

    pub fn family(&self) -> RuleFamily {
        self.family
    }

    /// The processor this rule is written for.
    pub fn processor(&self) -> Result<ProcessorDefinition> {
        match self.family {
            RuleFamily::U1 | RuleFamily::Bz => Ok(u1_cnot()),
            RuleFamily::Cyclic { program_dim } => cyclic_shift_processor(program_dim),
            RuleFamily::Diagonal { dim } => qudit_diagonal_processor(dim),
            RuleFamily::Qid2 => Ok(qid2()),
            RuleFamily::QidN { dim } => qid_n(dim),
        }
    }

    /// The measurement basis of the program register.
    pub fn basis(&self) -> ProgramBasis {
        match self.family {
            RuleFamily::U1 | RuleFamily::Bz => ProgramBasis::computational(2),
            RuleFamily::Cyclic { program_dim } => ProgramBasis::computational(program_dim),
            RuleFamily::Diagonal { dim } => ProgramBasis::computational(dim),
            RuleFamily::Qid2 => qid2_basis(),
            RuleFamily::QidN { dim } => phi_basis(dim),
        }
    }

    /// Outcomes whose branch operator is proportional to the encoded target.
    pub fn default_success_labels(&self) -> Vec<String> {
        match self.family {
            RuleFamily::Cyclic { program_dim } => (0..program_dim - 1).map(|j| j.to_string()).collect(),
            RuleFamily::Qid2 => alloc::vec!["0+".to_string()],
            RuleFamily::QidN { .. } => alloc::vec!["(0,0)".to_string()],
            _ => alloc::vec!["0".to_string()],
        }
    }

    /// A program whose success branches are proportional to `target`.
    pub fn encode(&self, target: &Operator) -> Result<ProgramState> {
        match self.family {
            RuleFamily::U1 => {
                let (a, b) = diagonal_pair(target)?;
                if (a.norm() - b.norm()).abs() > TOL_SHAPE * a.norm().max(b.norm()) {
                    return Err(Error::NotEncodable(format!("diag({a}, {b}) is not proportional to U(θ)")));
                }
                Ok(u1_program((a * b.conj()).arg() / 2.0))
            }
            RuleFamily::Bz => geometric_program(diagonal_ratio(target)?, 2),
            RuleFamily::Cyclic { program_dim } => geometric_program(diagonal_ratio(target)?, program_dim),
            RuleFamily::Diagonal { dim } => {
                check_square(target, dim)?;
                if !target.is_diagonal(TOL_SHAPE * target.frobenius_norm()) {
                    return Err(Error::NotEncodable("target is not diagonal".into()));
                }
                diagonal_program(&target.diagonal())
            }
            RuleFamily::Qid2 => {
                check_square(target, 2)?;
                let scale = target
                    .unitary_scale(TOL_SHAPE)
                    .ok_or(Error::NotUnitary { deviation: target.unitarity_defect() })?;
                let log = su2_log(&target.scale(C64::new(1.0 / scale, 0.0)))?;
                Ok(su2_program(log.mu))
            }
            RuleFamily::QidN { dim } => {
                check_square(target, dim)?;
                program_for(target)
            }
        }
    }

    /// `target · residual⁻¹`, rescaled to Frobenius norm `√dim`.
    ///
    /// A singular residual means the failed branch destroyed information; the
    /// diagonal family reports which applied entry vanished.
    pub fn corrected_target(&self, target: &Operator, residual: &Operator) -> Result<Operator> {
        let inv = match residual.inverse() {
            Ok(inv) => inv,
            Err(Error::SingularOperator { smallest, threshold }) => {
                if let RuleFamily::Diagonal { .. } = self.family {
                    let diag = residual.diagonal();
                    let largest = diag.iter().map(|c| c.norm()).fold(0.0, f64::max);
                    if let Some(index) = diag.iter().position(|c| c.norm() <= crate::qlinalg::TOL_SINGULAR * largest) {
                        return Err(Error::SingularProgram { index });
                    }
                }
                return Err(Error::SingularOperator { smallest, threshold });
            }
            Err(e) => return Err(e),
        };
        let next = target.matmul(&inv)?;
        let norm = next.frobenius_norm();
        Ok(next.scale(C64::new((next.rows() as f64).sqrt() / norm, 0.0)))
    }

    /// The program for the round after failures with accumulated operator `residual`.
    pub fn next_program(&self, target: &Operator, residual: &Operator) -> Result<ProgramState> {
        self.encode(&self.corrected_target(target, residual)?)
    }
}

fn check_square(target: &Operator, dim: usize) -> Result<()> {
    if target.rows() != dim || target.cols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: target.rows() });
    }
    Ok(())
}

fn diagonal_pair(target: &Operator) -> Result<(C64, C64)> {
    check_square(target, 2)?;
    if !target.is_diagonal(TOL_SHAPE * target.frobenius_norm()) {
        return Err(Error::NotEncodable("target is not diagonal".into()));
    }
    Ok((target.get(0, 0), target.get(1, 1)))
}

/// `z` with `target ∝ B(z) = diag(1, z)`.
fn diagonal_ratio(target: &Operator) -> Result<C64> {
    let (a, b) = diagonal_pair(target)?;
    if a.norm() <= TOL_SHAPE * b.norm() {
        return Err(Error::NotEncodable("target annihilates |0⟩ and is not of the form B(z)".into()));
    }
    let z = b / a;
    if z.norm() <= TOL_SHAPE {
        return Err(Error::InvalidParameter("B(z) with z = 0".into()));
    }
    Ok(z)
}
