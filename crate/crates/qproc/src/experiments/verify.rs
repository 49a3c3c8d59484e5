//! Invariant suites behind `qproc verify`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use qproc_core::processor::{branch_operators, program_operator};
use qproc_core::qlinalg::{c64, cis, su2_exp, su2_log, u1_rotation, Ket, Operator, C64};
use qproc_core::random::{haar_state, haar_unitary, uniform};
use qproc_core::zoo::*;
use qproc_core::{decompose, exact_success, CorrectionRule, ProcessorDefinition, ProgramBasis};
use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

pub const SUITES: [&str; 5] = ["qlinalg", "processor_core", "processor_zoo", "loop_engine", "errata"];

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Largest accepted deviation for checks without an exact answer.
    pub tol: f64,
    pub seed: u64,
    /// Corrupts one block of the `U(1)` CNOT processor (negative control).
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tol: 1e-9, seed: 42, inject_fault: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A documented misprint that the oracle settles.
    Resolved,
}

impl CheckStatus {
    fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Resolved => "resolved (oracle)",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    /// Per-suite summary followed by one line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<16} {:>6} {:>6} {:>6} {:>9}", "suite", "checks", "pass", "fail", "resolved");
        for suite in SUITES {
            let of = |s: CheckStatus| self.checks.iter().filter(|c| c.suite == suite && c.status == s).count();
            let total = self.checks.iter().filter(|c| c.suite == suite).count();
            let _ = writeln!(
                out,
                "{suite:<16} {total:>6} {:>6} {:>6} {:>9}",
                of(CheckStatus::Pass),
                of(CheckStatus::Fail),
                of(CheckStatus::Resolved)
            );
        }
        out.push('\n');
        for c in &self.checks {
            let _ = writeln!(out, "{:<17} {:<16} {}: {}", c.status.as_str(), c.suite, c.name, c.detail);
        }
        let _ = writeln!(out, "\n{}", if self.passed() { "all invariants hold" } else { "VERIFICATION FAILED" });
        out
    }
}

type Outcome = qproc_core::Result<f64>;

struct Ctx {
    tol: f64,
    rng: ChaCha20Rng,
    u1: ProcessorDefinition,
    checks: Vec<Check>,
}

impl Ctx {
    /// Records a check whose measured deviation must not exceed `tol`.
    fn within(&mut self, suite: &'static str, name: &str, tol: f64, f: impl FnOnce(&mut Self) -> Outcome) {
        let (status, detail) = match f(self) {
            Ok(dev) if dev <= tol => (CheckStatus::Pass, format!("deviation {dev:.1e}")),
            Ok(dev) => (CheckStatus::Fail, format!("deviation {dev:.3e} > {tol:.0e}")),
            Err(e) => (CheckStatus::Fail, format!("error: {e}")),
        };
        self.checks.push(Check { suite, name: name.into(), status, detail });
    }

    fn state(&mut self, dim: usize) -> Ket {
        haar_state(dim, &mut self.rng)
    }
}

fn max_dev(values: impl IntoIterator<Item = f64>, expected: f64) -> f64 {
    values.into_iter().map(|v| (v - expected).abs()).fold(0.0, f64::max)
}

fn qlinalg(ctx: &mut Ctx) {
    let tol = ctx.tol;
    ctx.within("qlinalg", "kron(σx, σz) entries", 0.0, |_| {
        let m = Operator::pauli(1).kron(&Operator::pauli(3));
        Ok((m.get(0, 2) - c64(1.0, 0.0)).norm() + (m.get(1, 3) - c64(-1.0, 0.0)).norm())
    });
    ctx.within("qlinalg", "Haar unitaries are unitary (D ≤ 8)", tol, |c| {
        Ok((2..=8).map(|d| haar_unitary(d, &mut c.rng).unitarity_defect()).fold(0.0, f64::max))
    });
    ctx.within("qlinalg", "inverse · M = 1", tol, |c| {
        let mut worst = 0.0f64;
        for d in 2..=6 {
            let m = Operator::from_fn(d, d, |_, _| c64(uniform(&mut c.rng) - 0.5, uniform(&mut c.rng) - 0.5));
            worst = worst.max((&m.inverse()? * &m).max_abs_diff(&Operator::identity(d)));
        }
        Ok(worst)
    });
    ctx.within("qlinalg", "su2_exp ∘ su2_log = id up to phase", tol, |c| {
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let u = haar_unitary(2, &mut c.rng);
            let log = su2_log(&u)?;
            worst = worst.max(su2_exp(log.mu).scale(cis(log.phase)).max_abs_diff(&u));
        }
        Ok(worst)
    });
}

/// Every constructor with its measurement basis; the `U(1)` processor comes from the context.
fn zoo(ctx: &Ctx) -> qproc_core::Result<Vec<(ProcessorDefinition, ProgramBasis)>> {
    let mut out = vec![
        (ctx.u1.clone(), ProgramBasis::computational(2)),
        (vmc3(), ProgramBasis::computational(4)),
        (qid2(), qid2_basis()),
    ];
    for n in 2..=8 {
        out.push((cyclic_shift_processor(n)?, ProgramBasis::computational(n)));
    }
    for d in 2..=5 {
        out.push((qudit_diagonal_processor(d)?, ProgramBasis::computational(d)));
        out.push((amp_modifier_processor(d, 4)?, ProgramBasis::computational(4)));
    }
    for n in 2..=4 {
        out.push((qid_n(n)?, phi_basis(n)));
    }
    Ok(out)
}

fn processor_core(ctx: &mut Ctx) {
    let tol = ctx.tol;
    let procs = match zoo(ctx) {
        Ok(p) => p,
        Err(e) => {
            ctx.checks.push(Check {
                suite: "processor_core",
                name: "construct processors".into(),
                status: CheckStatus::Fail,
                detail: format!("error: {e}"),
            });
            return;
        }
    };
    for (proc, basis) in &procs {
        let label = proc.label().to_string();
        ctx.within("processor_core", &format!("{label}: Σ A†A = 1, G unitary"), tol, |_| {
            let (cols, rows) = proc.completeness_defects();
            Ok(cols.max(rows).max(proc.materialize().unitarity_defect()))
        });
        ctx.within("processor_core", &format!("{label}: branches sum to 1"), tol, |c| {
            let psi = c.state(proc.data_dim());
            let xi = qproc_core::ProgramState::raw(c.state(proc.program_dim()))?;
            Ok((decompose(proc, &psi, &xi, basis)?.total_probability() - 1.0).abs())
        });
    }
    ctx.within("processor_core", "program operator equals block sum", tol, |c| {
        let proc = c.u1.clone();
        let xi = u1_program(0.4);
        let a0 = program_operator(&proc, &xi, 0)?;
        let amps = xi.ket().amps();
        let direct = &proc.block(0, 0).scale(amps[0]) + &proc.block(0, 1).scale(amps[1]);
        Ok(a0.max_abs_diff(&direct))
    });
}

fn processor_zoo(ctx: &mut Ctx) {
    let tol = ctx.tol;
    ctx.within("processor_zoo", "U(1) CNOT success 1/2", tol, |c| {
        let proc = c.u1.clone();
        let mut probs = Vec::new();
        for i in 0..100 {
            let psi = c.state(2);
            let alpha = -PI + 2.0 * PI * i as f64 / 100.0;
            probs.push(decompose(&proc, &psi, &u1_program(alpha), &ProgramBasis::computational(2))?.probability_of(&["0"]));
        }
        Ok(max_dev(probs, 0.5))
    });
    ctx.within("processor_zoo", "vmc3 success 3/4, branches ∝ U(α)", tol, |c| {
        let (proc, basis) = (vmc3(), ProgramBasis::computational(4));
        let mut worst = 0.0f64;
        for i in 0..64 {
            let alpha = -PI + 2.0 * PI * i as f64 / 64.0;
            let psi = c.state(2);
            let xi = vmc3_program(alpha);
            worst = worst.max((decompose(&proc, &psi, &xi, &basis)?.probability_of(&["0", "1", "2"]) - 0.75).abs());
            for a in branch_operators(&proc, &xi, &basis)?.iter().take(3) {
                worst = worst.max(a.proportionality_defect(&u1_rotation(alpha)));
            }
        }
        Ok(worst)
    });
    ctx.within("processor_zoo", "B(z) N=4 |z|²=1/2 averaged success 0.7", tol, |_| {
        let z = C64::new(0.5f64.sqrt(), 0.0);
        let (proc, xi, basis) = (cyclic_shift_processor(4)?, geometric_program(z, 4)?, ProgramBasis::computational(4));
        let mut sum = 0.0;
        for k in 0..2 {
            sum += decompose(&proc, &Ket::basis(2, k), &xi, &basis)?.probability_of(&["0", "1", "2"]);
        }
        Ok((sum / 2.0 - 0.7).abs())
    });
    ctx.within("processor_zoo", "B₀(z) at |z|=1 gives (N−1)/N", tol, |c| {
        let mut worst = 0.0f64;
        for d in [2, 3, 5] {
            for n in 2..=6 {
                let psi = c.state(d);
                let z = cis(uniform(&mut c.rng) * 2.0 * PI);
                let labels: Vec<String> = (0..n - 1).map(|j| j.to_string()).collect();
                let p = decompose(&amp_modifier_processor(d, n)?, &psi, &geometric_program(z, n)?, &ProgramBasis::computational(n))?
                    .probability_of(&labels);
                worst = worst.max((p - (n - 1) as f64 / n as f64).abs());
            }
        }
        Ok(worst)
    });
    ctx.within("processor_zoo", "qubit QID outcomes 1/4 each", tol, |c| {
        let (proc, basis) = (qid2(), qid2_basis());
        let mut probs = Vec::new();
        for _ in 0..100 {
            let psi = c.state(2);
            let log = su2_log(&haar_unitary(2, &mut c.rng))?;
            probs.extend(decompose(&proc, &psi, &su2_program(log.mu), &basis)?.branches.iter().map(|b| b.probability));
        }
        Ok(max_dev(probs, 0.25))
    });
    ctx.within("processor_zoo", "qudit QID outcomes 1/N², branches = conjugated V", tol, |c| {
        let mut worst = 0.0f64;
        for n in 2..=4 {
            let v = haar_unitary(n, &mut c.rng);
            let psi = c.state(n);
            let dec = qid_n_branches(&v, &psi)?;
            worst = worst.max(max_dev(dec.branches.iter().map(|b| b.probability), 1.0 / (n * n) as f64));
            let ops = branch_operators(&qid_n(n)?, &program_for(&v)?, &phi_basis(n))?;
            for rr in 0..n {
                for s in 0..n {
                    worst = worst.max(ops[rr * n + s].max_abs_diff(&qid_n_rotated_target(&v, rr, s)));
                }
            }
        }
        Ok(worst)
    });
}

fn loop_engine(ctx: &mut Ctx) {
    let tol = ctx.tol;
    let chain = |rule: CorrectionRule, target: Operator, psi: Ket, max: usize, per_round: f64| -> Outcome {
        let proc = rule.processor()?;
        let mut worst = 0.0f64;
        for n in 1..=max {
            let p = exact_success(&proc, &psi, &target, &rule, n)?;
            worst = worst.max((p - (1.0 - (1.0 - per_round).powi(n as i32))).abs());
        }
        Ok(worst)
    };
    ctx.within("loop_engine", "U(1) loop 1 − (1/2)^n, n ≤ 20", tol, |c| {
        let psi = c.state(2);
        chain(CorrectionRule::u1(), u1_rotation(0.3), psi, 20, 0.5)
    });
    ctx.within("loop_engine", "qutrit loop 1 − (2/3)^n, n ≤ 20", tol, |c| {
        let psi = c.state(3);
        chain(CorrectionRule::diagonal(3), Operator::diag(&[cis(0.2), cis(1.1), cis(-2.0)]), psi, 20, 1.0 / 3.0)
    });
    ctx.within("loop_engine", "qubit QID loop 1 − (3/4)^n, n ≤ 40", tol, |c| {
        let psi = c.state(2);
        let v = haar_unitary(2, &mut c.rng);
        chain(CorrectionRule::qid2(), v, psi, 40, 0.25)
    });
    ctx.within("loop_engine", "qudit QID loop 1 − (1 − 1/N²)^K", tol, |c| {
        let mut worst = 0.0f64;
        for n in 2..=4 {
            let psi = c.state(n);
            let v = haar_unitary(n, &mut c.rng);
            worst = worst.max(chain(CorrectionRule::qid_n(n), v, psi, 10, 1.0 / (n * n) as f64)?);
        }
        Ok(worst)
    });
}

/// The two misprints: each must fail as printed and be fixed by the correction.
fn errata(ctx: &mut Ctx) {
    let tol = ctx.tol;
    let mut record = |name: &str, outcome: qproc_core::Result<(bool, bool, String)>| {
        let (status, detail) = match outcome {
            Ok((printed_fails, corrected_holds, detail)) if printed_fails && corrected_holds => {
                (CheckStatus::Resolved, detail)
            }
            Ok((_, _, detail)) => (CheckStatus::Fail, format!("oracle does not settle the misprint: {detail}")),
            Err(e) => (CheckStatus::Fail, format!("error: {e}")),
        };
        ctx.checks.push(Check { suite: "errata", name: name.into(), status, detail });
    };

    record("vmc3 program phases", (|| {
        let (proc, basis) = (vmc3(), ProgramBasis::computational(4));
        let alpha = 0.3;
        let u = u1_rotation(alpha);
        let proportional = |xi| -> qproc_core::Result<usize> {
            Ok(branch_operators(&proc, &xi, &basis)?.iter().take(3).filter(|a| a.proportionality_defect(&u) < tol).count())
        };
        let printed = proportional(vmc3_literal_program(alpha))?;
        let product = proportional(vmc3_program(alpha))?;
        Ok((printed < 3, product == 3, format!("success branches ∝ U(α): printed {printed}/3, product program {product}/3")))
    })());

    record("B(z) denominator sign", (|| {
        let z_abs = 0.5f64.sqrt();
        let n = 4;
        let psi = Ket::from_real(&[1.0, 1.0])?.normalized()?;
        let oracle = decompose(&cyclic_shift_processor(n)?, &psi, &geometric_program(c64(z_abs, 0.0), n)?, &ProgramBasis::computational(n))?
            .probability_of(&["0", "1", "2"]);
        let r2 = z_abs * z_abs;
        let printed = (1.0 - r2.powi(n as i32 - 1)) / (r2.powi(n as i32) - 1.0) * (0.5 + 0.5 * r2);
        let corrected = closed_form(ClosedFormFamily::BzFinite { z_abs, program_dim: n as u32, alpha_sqr: 0.5 })?.value;
        Ok((
            (printed - oracle).abs() > tol,
            (corrected - oracle).abs() <= tol,
            format!("oracle {oracle:.12}, printed {printed:.12}, corrected {corrected:.12}"),
        ))
    })());
}

pub fn run_verify(opts: &VerifyOptions) -> VerifyReport {
    let mut u1 = u1_cnot();
    if opts.inject_fault {
        let corrupted = u1.block(0, 0).scale(c64(1.1, 0.0));
        u1 = u1.with_block_unchecked(0, 0, corrupted);
    }
    let mut ctx = Ctx { tol: opts.tol, rng: ChaCha20Rng::seed_from_u64(opts.seed), u1, checks: Vec::new() };
    qlinalg(&mut ctx);
    processor_core(&mut ctx);
    processor_zoo(&mut ctx);
    loop_engine(&mut ctx);
    errata(&mut ctx);
    VerifyReport { checks: ctx.checks }
}
