//! Grid sweeps: exact success probabilities (and optionally Monte Carlo
//! frequencies) at every point, next to the closed form.

use qproc_core::zoo::{closed_form, ClosedFormFamily};

use super::sample::{run_sample, Setup};
use crate::config::{DataSpec, ExperimentConfig, FamilySpec, SweepConfig, SweepSpec, TargetSpec};
use crate::error::{HarnessError, Result};
use crate::records::ResultRow;

struct Point {
    params: String,
    config: ExperimentConfig,
    closed: ClosedFormFamily,
}

fn diagonal_phases(dim: usize) -> Vec<[f64; 2]> {
    (0..dim).map(|k| {
        let t = 0.7 * k as f64 * k as f64;
        [t.cos(), t.sin()]
    })
    .collect()
}

fn points(cfg: &SweepConfig) -> Vec<Point> {
    let base = |id: &str, family: FamilySpec, rounds: usize| ExperimentConfig {
        id: format!("sweep-{id}"),
        family,
        rounds,
        trials: cfg.trials.max(1),
        seed: cfg.seed,
        experiment_index: 0,
        data: DataSpec::Haar,
        success_labels: None,
        max_traces: Some(0),
        tolerance: None,
    };
    let mut out = Vec::new();
    match &cfg.spec {
        SweepSpec::U1 { rounds } => {
            for n in rounds.iter() {
                out.push(Point {
                    params: format!("n={n}"),
                    config: base("u1", FamilySpec::U1 { alpha: 0.3 }, n),
                    closed: ClosedFormFamily::U1Loop { rounds: n as u32 },
                });
            }
        }
        SweepSpec::Diagonal { dim, rounds } => {
            for n in rounds.iter() {
                out.push(Point {
                    params: format!("D={dim}; n={n}"),
                    config: base("diagonal", FamilySpec::Diagonal { entries: diagonal_phases(*dim) }, n),
                    closed: ClosedFormFamily::DiagonalLoop { dim: *dim as u32, rounds: n as u32 },
                });
            }
        }
        SweepSpec::Qid2 { rounds } => {
            for n in rounds.iter() {
                out.push(Point {
                    params: format!("n={n}"),
                    config: base("qid2", FamilySpec::Qid2 { mu: [0.2, -0.5, 0.9] }, n),
                    closed: ClosedFormFamily::Qid2Loop { rounds: n as u32 },
                });
            }
        }
        SweepSpec::QidN { dims, rounds } => {
            for d in dims.iter() {
                for k in rounds.iter() {
                    out.push(Point {
                        params: format!("N={d}; K={k}"),
                        config: base("qidN", FamilySpec::QidN { dim: d, target: TargetSpec::Haar }, k),
                        closed: ClosedFormFamily::QidNLoop { dim: d as u32, rounds: k as u32 },
                    });
                }
            }
        }
        SweepSpec::Bz { z_abs, program_dims } => {
            for z in z_abs.points() {
                for n in program_dims.iter() {
                    out.push(Point {
                        params: format!("|z|={z}; N={n}"),
                        config: base("bz", FamilySpec::Bz { z: [z, 0.0], program_dim: n }, 1),
                        closed: ClosedFormFamily::BzAverage { z_abs: z, program_dim: n as u32 },
                    });
                }
            }
        }
        SweepSpec::B0 { z_abs, program_dims, data_dim } => {
            for z in z_abs.points() {
                for n in program_dims.iter() {
                    out.push(Point {
                        params: format!("|z|={z}; D={data_dim}; N={n}"),
                        config: base("b0", FamilySpec::B0 { z: [z, 0.0], data_dim: *data_dim, program_dim: n }, 1),
                        closed: ClosedFormFamily::B0Qudit {
                            z_abs: z,
                            program_dim: n as u32,
                            ground_sqr: 1.0 / *data_dim as f64,
                        },
                    });
                }
            }
        }
    }
    for (i, p) in out.iter_mut().enumerate() {
        p.config.experiment_index = i as u32;
    }
    out
}

fn family_name(spec: &SweepSpec) -> &'static str {
    match spec {
        SweepSpec::U1 { .. } => "u1",
        SweepSpec::Diagonal { .. } => "diagonal",
        SweepSpec::Qid2 { .. } => "qid2",
        SweepSpec::QidN { .. } => "qidN",
        SweepSpec::Bz { .. } => "bz",
        SweepSpec::B0 { .. } => "b0",
    }
}

/// One row per grid point, in grid order. An empty range gives no rows.
///
/// Data states are Haar-random; `exact` is the exact state average.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<ResultRow>> {
    let name = family_name(&cfg.spec);
    let invalid = |params: &str, e: &dyn std::fmt::Display| HarnessError::usage(format!("{name} at {params}: {e}"));
    let mut rows = Vec::new();
    for p in points(cfg) {
        p.config.validate()?;
        let setup = Setup::new(&p.config).map_err(|e| invalid(&p.params, &e))?;
        let exact = setup.exact_haar_average(p.config.rounds)?;
        let reference = closed_form(p.closed).map_err(|e| invalid(&p.params, &e))?.value;
        let mut row = ResultRow::new(name, p.params, exact, Some(reference));
        if cfg.trials > 0 {
            row.empirical = Some(run_sample(&p.config)?.summary.empirical);
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Grid, IntRange};

    fn cfg(spec: SweepSpec) -> SweepConfig {
        SweepConfig { spec, trials: 0, seed: 1 }
    }

    #[test]
    fn qid2_sweep_matches_closed_form() {
        let rows = sweep(&cfg(SweepSpec::Qid2 { rounds: IntRange { start: 1, end: 30 } })).unwrap();
        assert_eq!(rows.len(), 30);
        for (n, r) in rows.iter().enumerate() {
            assert!(r.deviation.unwrap() < 1e-12);
            assert!((r.exact - (1.0 - 0.75f64.powi(n as i32 + 1))).abs() < 1e-12);
            assert!(r.empirical.is_none());
        }
    }

    #[test]
    fn empty_range() {
        assert!(sweep(&cfg(SweepSpec::U1 { rounds: IntRange { start: 3, end: 2 } })).unwrap().is_empty());
    }

    #[test]
    fn bz_grid_is_monotone_in_n() {
        let rows = sweep(&cfg(SweepSpec::Bz {
            z_abs: Grid::Linspace { start: 0.25, stop: 2.0, steps: 8 },
            program_dims: IntRange { start: 2, end: 8 },
        }))
        .unwrap();
        assert_eq!(rows.len(), 56);
        for chunk in rows.chunks(7) {
            for w in chunk.windows(2) {
                assert!(w[1].exact > w[0].exact);
            }
            for r in chunk {
                assert!(r.deviation.unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn empirical_column() {
        let mut c = cfg(SweepSpec::QidN { dims: IntRange { start: 2, end: 3 }, rounds: IntRange { start: 1, end: 2 } });
        c.trials = 500;
        let rows = sweep(&c).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.empirical.is_some()));
    }

    #[test]
    fn zero_z_is_usage_error() {
        let c = cfg(SweepSpec::Bz { z_abs: Grid::List(vec![0.0]), program_dims: IntRange { start: 2, end: 2 } });
        assert_eq!(sweep(&c).unwrap_err().exit_code(), 2);
    }
}
