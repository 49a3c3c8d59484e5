//! Generic block-form processor engine.
//!
//! A processor on `data ⊗ program` is stored as its `N×N` grid of `D×D`
//! blocks `A_jk`, so that `G = Σ_jk A_jk ⊗ |j⟩⟨k|`. Running it on `ψ ⊗ Ξ` and
//! measuring the program register in an orthonormal basis `{|b⟩}` leaves the
//! data in `A_b(Ξ)ψ` with `A_b(Ξ) = Σ_jk ⟨b|j⟩⟨k|Ξ⟩ A_jk`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::qlinalg::{Ket, Operator, C64, TOL_NORM};
use crate::random::uniform;

/// Tolerance on the Frobenius defect of each completeness sum.
pub const TOL_PROCESSOR: f64 = 1e-9;

/// Branches below this probability carry no post-state and are never sampled.
pub const PROB_CUTOFF: f64 = 1e-12;

/// A programmable processor in block form.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessorDefinition {
    label: String,
    data_dim: usize,
    program_dim: usize,
    /// Row-major `N×N` grid: `blocks[j * N + k] = A_jk`.
    blocks: Vec<Operator>,
}

/// Validates the blocks and builds a processor.
///
/// `blocks[j * program_dim + k]` is `A_jk`. Both completeness sums
/// `Σ_j A†_{jk₁}A_{jk₂} = δ I` and `Σ_j A_{k₁j}A†_{k₂j} = δ I` must hold within
/// [`TOL_PROCESSOR`]; otherwise [`Error::InvalidProcessor`] is returned.
pub fn assemble(
    label: impl Into<String>,
    data_dim: usize,
    program_dim: usize,
    blocks: Vec<Operator>,
) -> Result<ProcessorDefinition> {
    if data_dim == 0 || program_dim == 0 {
        return Err(Error::InvalidProcessor("dimensions must be positive".into()));
    }
    if blocks.len() != program_dim * program_dim {
        return Err(Error::InvalidProcessor(format!(
            "expected {} blocks, found {}",
            program_dim * program_dim,
            blocks.len()
        )));
    }
    if let Some(b) = blocks.iter().find(|b| b.rows() != data_dim || b.cols() != data_dim) {
        return Err(Error::InvalidProcessor(format!(
            "block is {}x{}, expected {data_dim}x{data_dim}",
            b.rows(),
            b.cols()
        )));
    }
    let proc = ProcessorDefinition { label: label.into(), data_dim, program_dim, blocks };
    let (cols, rows) = proc.completeness_defects();
    if cols > TOL_PROCESSOR || rows > TOL_PROCESSOR {
        return Err(Error::InvalidProcessor(format!(
            "completeness sums violated (column defect {cols:e}, row defect {rows:e})"
        )));
    }
    Ok(proc)
}

impl ProcessorDefinition {
    /// Splits a `(D·N)×(D·N)` unitary into blocks, data index major.
    pub fn from_unitary(
        label: impl Into<String>,
        data_dim: usize,
        program_dim: usize,
        g: &Operator,
    ) -> Result<Self> {
        let n = data_dim * program_dim;
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.rows() });
        }
        let mut blocks = Vec::with_capacity(program_dim * program_dim);
        for j in 0..program_dim {
            for k in 0..program_dim {
                blocks.push(Operator::from_fn(data_dim, data_dim, |a, b| {
                    g.get(a * program_dim + j, b * program_dim + k)
                }));
            }
        }
        assemble(label, data_dim, program_dim, blocks)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn data_dim(&self) -> usize {
        self.data_dim
    }

    pub fn program_dim(&self) -> usize {
        self.program_dim
    }

    /// `A_jk`.
    pub fn block(&self, j: usize, k: usize) -> &Operator {
        &self.blocks[j * self.program_dim + k]
    }

    pub fn blocks(&self) -> &[Operator] {
        &self.blocks
    }

    /// The full `G = Σ A_jk ⊗ |j⟩⟨k|` on `data ⊗ program`.
    pub fn materialize(&self) -> Operator {
        let (d, n) = (self.data_dim, self.program_dim);
        Operator::from_fn(d * n, d * n, |r, c| self.block(r % n, c % n).get(r / n, c / n))
    }

    /// Largest Frobenius defects of the column and row completeness sums.
    pub fn completeness_defects(&self) -> (f64, f64) {
        let (d, n) = (self.data_dim, self.program_dim);
        let id = Operator::identity(d);
        let zero = Operator::zeros(d, d);
        let mut col_defect: f64 = 0.0;
        let mut row_defect: f64 = 0.0;
        for k1 in 0..n {
            for k2 in 0..n {
                let expected = if k1 == k2 { &id } else { &zero };
                let mut cols = Operator::zeros(d, d);
                let mut rows = Operator::zeros(d, d);
                for j in 0..n {
                    cols = &cols + &(&self.block(j, k1).dagger() * self.block(j, k2));
                    rows = &rows + &(self.block(k1, j) * &self.block(k2, j).dagger());
                }
                col_defect = col_defect.max((&cols - expected).frobenius_norm());
                row_defect = row_defect.max((&rows - expected).frobenius_norm());
            }
        }
        (col_defect, row_defect)
    }

    /// Replaces block `A_jk` without revalidating. Used to build negative controls.
    #[doc(hidden)]
    pub fn with_block_unchecked(mut self, j: usize, k: usize, block: Operator) -> Self {
        self.blocks[j * self.program_dim + k] = block;
        self
    }
}

/// Parameters a program state was built from.
#[derive(Debug, Clone, PartialEq)]
pub enum Encoding {
    /// `U(α) = exp(iασ_z)`.
    U1 { alpha: f64 },
    /// `U_μ = exp(i μ⃗·σ⃗)`.
    Su2 { mu: [f64; 3] },
    /// Diagonal target with the given entries (up to normalization).
    Diagonal { entries: Vec<C64> },
    /// Geometric amplitudes `c_j ∝ z^j` on an `dim`-dimensional program.
    Geometric { z: C64, dim: usize },
    /// Weyl coefficients `d_mn` (row-major `N×N`) of the target, rescaled by
    /// `scale` so that `Σ|d_mn|² = 1`; the encoded target is `V / scale`.
    WeylExpansion { dim: usize, coefficients: Vec<C64>, scale: f64 },
    Raw,
}

/// A normalized program ket with the parameters it encodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramState {
    ket: Ket,
    encoding: Encoding,
}

impl ProgramState {
    pub fn new(ket: Ket, encoding: Encoding) -> Result<Self> {
        ket.require_normalized()?;
        if let Encoding::WeylExpansion { coefficients, .. } = &encoding {
            let total: f64 = coefficients.iter().map(|d| d.norm_sqr()).sum();
            if (total - 1.0).abs() > TOL_NORM {
                return Err(Error::NotNormalized { norm_sqr: total });
            }
        }
        Ok(Self { ket, encoding })
    }

    /// An unlabelled program; the ket is normalized here.
    pub fn raw(ket: Ket) -> Result<Self> {
        Self::new(ket.normalized()?, Encoding::Raw)
    }

    pub fn ket(&self) -> &Ket {
        &self.ket
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    pub fn dim(&self) -> usize {
        self.ket.dim()
    }
}

/// An orthonormal measurement basis of the program register with outcome labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramBasis {
    vectors: Vec<Ket>,
    labels: Vec<String>,
}

impl ProgramBasis {
    /// Fails unless the Gram matrix is the identity within `TOL_NORM`.
    pub fn new(vectors: Vec<Ket>, labels: Vec<String>) -> Result<Self> {
        let n = vectors.len();
        if labels.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: labels.len() });
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
        }
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate() {
                let g = a.inner(b)?;
                let expected = if i == j { 1.0 } else { 0.0 };
                if (g - C64::new(expected, 0.0)).norm() > TOL_NORM {
                    return Err(Error::InvalidParameter(format!(
                        "basis vectors {i} and {j} are not orthonormal (overlap {g})"
                    )));
                }
            }
        }
        Ok(Self { vectors, labels })
    }

    /// `{|0⟩, …, |n−1⟩}` labelled `"0"`, …, `"n−1"`.
    pub fn computational(n: usize) -> Self {
        Self {
            vectors: (0..n).map(|i| Ket::basis(n, i)).collect(),
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Ket] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Applies a unitary relabeling `|b⟩ ↦ W|b⟩` to every basis vector.
    pub fn rotated(&self, w: &Operator) -> Result<Self> {
        let vectors = self.vectors.iter().map(|v| w.apply(v)).collect::<Result<Vec<_>>>()?;
        Self::new(vectors, self.labels.clone())
    }
}

/// One measurement outcome of the program register.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub label: String,
    /// `A_b(Ξ)`, independent of the data state.
    pub operator: Operator,
    pub probability: f64,
    /// `A_b(Ξ)ψ / ‖A_b(Ξ)ψ‖`, absent when `probability < PROB_CUTOFF`.
    pub post_state: Option<Ket>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchDecomposition {
    pub branches: Vec<Branch>,
}

impl BranchDecomposition {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    pub fn get(&self, label: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.label == label)
    }

    /// Summed probability of the given outcome labels.
    pub fn probability_of<S: AsRef<str>>(&self, labels: &[S]) -> f64 {
        self.branches
            .iter()
            .filter(|b| labels.iter().any(|l| l.as_ref() == b.label))
            .map(|b| b.probability)
            .sum()
    }

    /// Inverse-CDF draw over the branches in label order. Branches without a
    /// post-state are skipped.
    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> &Branch {
        let eligible = || self.branches.iter().filter(|b| b.post_state.is_some());
        let total: f64 = eligible().map(|b| b.probability).sum();
        let u = uniform(rng) * total;
        let mut acc = 0.0;
        let mut last = None;
        for b in eligible() {
            acc += b.probability;
            last = Some(b);
            if u < acc {
                return b;
            }
        }
        last.expect("decomposition has at least one branch with non-negligible probability")
    }
}

/// `A_j(Ξ) = Σ_k ⟨k|Ξ⟩ A_jk`.
pub fn program_operator(proc: &ProcessorDefinition, xi: &ProgramState, j: usize) -> Result<Operator> {
    let n = proc.program_dim;
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, dim: n });
    }
    if xi.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: xi.dim() });
    }
    let mut out = Operator::zeros(proc.data_dim, proc.data_dim);
    for (k, &c) in xi.ket().amps().iter().enumerate() {
        if c != C64::new(0.0, 0.0) {
            out = &out + &proc.block(j, k).scale(c);
        }
    }
    Ok(out)
}

/// Branch operators `A_b(Ξ) = Σ_j ⟨b|j⟩ A_j(Ξ)` for every vector of `basis`.
pub fn branch_operators(
    proc: &ProcessorDefinition,
    xi: &ProgramState,
    basis: &ProgramBasis,
) -> Result<Vec<Operator>> {
    let n = proc.program_dim;
    if basis.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: basis.len() });
    }
    let computational = (0..n).map(|j| program_operator(proc, xi, j)).collect::<Result<Vec<_>>>()?;
    let zero = C64::new(0.0, 0.0);
    Ok(basis
        .vectors()
        .iter()
        .map(|b| {
            let mut acc = Operator::zeros(proc.data_dim, proc.data_dim);
            for (j, a_j) in computational.iter().enumerate() {
                let w = b[j].conj();
                if w != zero {
                    acc = &acc + &a_j.scale(w);
                }
            }
            acc
        })
        .collect())
}

/// Splits the output of `G(ψ ⊗ Ξ)` into measurement branches of `basis`.
pub fn decompose(
    proc: &ProcessorDefinition,
    psi: &Ket,
    xi: &ProgramState,
    basis: &ProgramBasis,
) -> Result<BranchDecomposition> {
    if psi.dim() != proc.data_dim {
        return Err(Error::DimensionMismatch { expected: proc.data_dim, found: psi.dim() });
    }
    psi.require_normalized()?;
    let ops = branch_operators(proc, xi, basis)?;
    let branches = ops
        .into_iter()
        .zip(basis.labels())
        .map(|(operator, label)| {
            let out = operator.apply(psi)?;
            let probability = out.norm_sqr();
            let post_state = if probability >= PROB_CUTOFF { Some(out.normalized()?) } else { None };
            Ok(Branch { label: label.clone(), operator, probability, post_state })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BranchDecomposition { branches })
}

/// Runs the processor once and measures the program register.
pub fn sample<R: RngCore + ?Sized>(
    proc: &ProcessorDefinition,
    psi: &Ket,
    xi: &ProgramState,
    basis: &ProgramBasis,
    rng: &mut R,
) -> Result<(String, Ket)> {
    let dec = decompose(proc, psi, xi, basis)?;
    let b = dec.draw(rng);
    Ok((b.label.clone(), b.post_state.clone().expect("drawn branches carry a post-state")))
}
