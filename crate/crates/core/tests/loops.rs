use qproc_core::looping::{exact_success_report, DEFAULT_NODE_BUDGET};
use qproc_core::processor::program_operator;
use qproc_core::qlinalg::{c64, su2_exp, u1_rotation, Ket, Operator, C64};
use qproc_core::random::{haar_state, haar_unitary};
use qproc_core::zoo::{b_operator, qid_n_rotated_target, ClosedFormFamily, closed_form};
use qproc_core::{
    decompose, exact_success, run_loop, CorrectionRule, LoopPolicy, LoopStatus, ProcessorDefinition,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn branch(rule: &CorrectionRule, proc: &ProcessorDefinition, xi: &qproc_core::ProgramState, label: &str) -> Operator {
    let psi = {
        let mut amps = vec![c64(1.0, 0.0); proc.data_dim()];
        amps[0] = c64(0.0, 1.0);
        Ket::new(amps).unwrap().normalized().unwrap()
    };
    let dec = decompose(proc, &psi, xi, &rule.basis()).unwrap();
    dec.get(label).unwrap().operator.clone()
}

/// (next success branch)·(failed branch) ∝ target with |constant| ∈ (0, 1].
fn assert_sound(rule: CorrectionRule, target: &Operator) {
    let proc = rule.processor().unwrap();
    let first = rule.encode(target).unwrap();
    let success = rule.default_success_labels();
    for label in rule.basis().labels() {
        if success.contains(label) {
            continue;
        }
        let failed = branch(&rule, &proc, &first, label);
        let next = rule.next_program(target, &failed).unwrap();
        let win = branch(&rule, &proc, &next, &success[0]);
        let composite = &win * &failed;
        assert!(composite.proportionality_defect(target) < 1e-9, "{:?} after {label}", rule.family());
        let ratio = composite.frobenius_norm() / target.frobenius_norm();
        assert!(ratio > 0.0 && ratio <= 1.0 + 1e-12);
    }
}

#[test]
fn corrections_are_sound() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    assert_sound(CorrectionRule::u1(), &u1_rotation(0.77));
    assert_sound(CorrectionRule::bz(), &b_operator(C64::from_polar(0.8, 0.3)));
    for n in 2..=6 {
        assert_sound(CorrectionRule::cyclic(n), &b_operator(C64::from_polar(1.3, -0.2)));
    }
    assert_sound(CorrectionRule::diagonal(3), &Operator::diag(&[c64(1.0, 0.0), c64(0.6, 0.0), c64(0.3, 0.4)]));
    assert_sound(CorrectionRule::diagonal(4), &Operator::diag(&[c64(0.2, 0.9), c64(-1.0, 0.0), c64(0.3, 0.4), c64(0.5, 0.0)]));
    assert_sound(CorrectionRule::qid2(), &su2_exp([0.2, -0.5, 0.9]));
    for n in 2..=4 {
        assert_sound(CorrectionRule::qid_n(n), &haar_unitary(n, &mut rng));
    }
}

#[test]
fn u1_second_round_composes_to_target() {
    let alpha = 0.52;
    let rule = CorrectionRule::u1();
    let proc = rule.processor().unwrap();
    let xi = rule.encode(&u1_rotation(alpha)).unwrap();
    let failed = program_operator(&proc, &xi, 1).unwrap();
    assert!(failed.proportionality_defect(&u1_rotation(-alpha)) < 1e-14);
    let next = rule.next_program(&u1_rotation(alpha), &failed).unwrap();
    let win = program_operator(&proc, &next, 0).unwrap();
    assert!(win.proportionality_defect(&u1_rotation(2.0 * alpha)) < 1e-14);
}

#[test]
fn u1_zero_angle_any_outcome_succeeds() {
    let rule = CorrectionRule::u1();
    let proc = rule.processor().unwrap();
    let psi = Ket::from_real(&[0.8, 0.6]).unwrap();
    let policy = LoopPolicy::new(4).unwrap().with_success_labels(vec!["0".into(), "1".into()]);
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    for _ in 0..100 {
        let t = run_loop(&proc, &psi, &Operator::identity(2), &rule, &policy, &mut rng).unwrap();
        assert_eq!(t.rounds_used(), 1);
        assert!(t.succeeded());
        assert!(t.final_state().unwrap().distance_up_to_phase(&psi) < 1e-12);
    }
}

#[test]
fn bz_first_failure_is_inverse_scaled() {
    let z = C64::from_polar(0.7, 1.1);
    let rule = CorrectionRule::bz();
    let proc = rule.processor().unwrap();
    let xi = rule.encode(&b_operator(z)).unwrap();
    let failed = program_operator(&proc, &xi, 1).unwrap();
    assert!(failed.proportionality_defect(&b_operator(z.inv())) < 1e-14);
    let next = rule.next_program(&b_operator(z), &failed).unwrap();
    assert!(program_operator(&proc, &next, 0).unwrap().proportionality_defect(&b_operator(z * z)) < 1e-14);
}

#[test]
fn bz_unit_z_is_identity_chain() {
    let rule = CorrectionRule::bz();
    let proc = rule.processor().unwrap();
    let psi = Ket::from_real(&[0.6, 0.8]).unwrap();
    let p = exact_success(&proc, &psi, &Operator::identity(2), &rule, 5).unwrap();
    assert!((p - (1.0 - 0.5f64.powi(5))).abs() < 1e-12);
}

#[test]
fn diagonal_two_step_example() {
    let rule = CorrectionRule::diagonal(3);
    let proc = rule.processor().unwrap();
    let target = Operator::diag(&[c64(1.0, 0.0), c64(0.6, 0.0), c64(0.3, 0.4)]);
    let target = target.scale(c64(3f64.sqrt() / target.frobenius_norm(), 0.0));
    let xi = rule.encode(&target).unwrap();
    let failed = program_operator(&proc, &xi, 1).unwrap();
    let next = rule.next_program(&target, &failed).unwrap();
    let composite = &program_operator(&proc, &next, 0).unwrap() * &failed;
    assert!(composite.proportionality_defect(&target) < 1e-9);
}

#[test]
fn diagonal_identity_target_any_outcome() {
    let rule = CorrectionRule::diagonal(3);
    let proc = rule.processor().unwrap();
    let xi = rule.encode(&Operator::identity(3)).unwrap();
    for j in 0..3 {
        assert!(program_operator(&proc, &xi, j).unwrap().proportionality_defect(&Operator::identity(3)) < 1e-15);
    }
}

#[test]
fn singular_failure_ends_loop_as_uncorrectable() {
    // Program (1, 1, 0)/√2: outcomes 1 and 2 apply diag(1, 0, 1)/√2 and diag(0, 1, 1)/√2, neither invertible.
    let rule = CorrectionRule::diagonal(3);
    let proc = rule.processor().unwrap();
    let target = Operator::diag(&[c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
    let psi = Ket::from_real(&[0.6, 0.0, 0.8]).unwrap();
    let policy = LoopPolicy::new(5).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    let mut seen = false;
    for _ in 0..200 {
        let t = run_loop(&proc, &psi, &target, &rule, &policy, &mut rng).unwrap();
        if t.status == LoopStatus::Uncorrectable {
            assert_eq!(t.rounds_used(), 1);
            assert_ne!(t.rounds[0].outcome, "0");
            seen = true;
        }
    }
    assert!(seen);
    // The exact tree drops the uncorrectable path.
    let p = exact_success(&proc, &psi, &target, &rule, 3).unwrap();
    assert!(p < 1.0);
}

#[test]
fn qid2_failure_x_then_success() {
    let mu = [0.2, -0.5, 0.9];
    let target = su2_exp(mu);
    let rule = CorrectionRule::qid2();
    let proc = rule.processor().unwrap();
    let xi = rule.encode(&target).unwrap();
    let failed = branch(&rule, &proc, &xi, "1+");
    let sx = Operator::pauli(1);
    assert!(failed.proportionality_defect(&(&(&sx * &target) * &sx)) < 1e-12);
    let next = rule.next_program(&target, &failed).unwrap();
    let composite = &branch(&rule, &proc, &next, "0+") * &failed;
    assert!(composite.proportionality_defect(&target) < 1e-9);
}

#[test]
fn qid_n_forced_outcome_then_success() {
    let mut rng = ChaCha20Rng::seed_from_u64(31);
    let v = haar_unitary(3, &mut rng);
    let rule = CorrectionRule::qid_n(3);
    let proc = rule.processor().unwrap();
    let xi = rule.encode(&v).unwrap();
    let failed = branch(&rule, &proc, &xi, "(1,2)");
    assert!(failed.max_abs_diff(&qid_n_rotated_target(&v, 1, 2)) < 1e-9);
    let next = rule.next_program(&v, &failed).unwrap();
    let composite = &branch(&rule, &proc, &next, "(0,0)") * &failed;
    assert!(composite.proportionality_defect(&v) < 1e-9);
}

#[test]
fn exact_u1_and_qutrit_chains() {
    let mut rng = ChaCha20Rng::seed_from_u64(37);
    let u1 = CorrectionRule::u1();
    let diag = CorrectionRule::diagonal(3);
    let target3 = Operator::diag(&[c64(1.0, 0.0), C64::from_polar(1.0, 2.1), C64::from_polar(1.0, -0.4)]);
    for n in 1..=20usize {
        let psi = haar_state(2, &mut rng);
        let p = exact_success(&u1.processor().unwrap(), &psi, &u1_rotation(0.3), &u1, n).unwrap();
        assert!((p - (1.0 - 0.5f64.powi(n as i32))).abs() < 1e-12);
        let psi = haar_state(3, &mut rng);
        let p = exact_success(&diag.processor().unwrap(), &psi, &target3, &diag, n).unwrap();
        let cf = closed_form(ClosedFormFamily::DiagonalLoop { dim: 3, rounds: n as u32 }).unwrap().value;
        assert!((p - cf).abs() < 1e-12, "n={n}");
        assert!((p - (1.0 - (2.0f64 / 3.0).powi(n as i32))).abs() < 1e-12);
    }
}

#[test]
fn exact_qid2_chain() {
    let rule = CorrectionRule::qid2();
    let proc = rule.processor().unwrap();
    let psi = Ket::new(vec![c64(0.6, 0.0), c64(0.0, 0.8)]).unwrap();
    let target = su2_exp([0.2, -0.5, 0.9]);
    let p1 = exact_success(&proc, &psi, &target, &rule, 2).unwrap();
    assert!((p1 - 7.0 / 16.0).abs() < 1e-12);
    for n in [1usize, 2, 3, 5, 8, 13, 21, 30, 40] {
        let r = exact_success_report(&proc, &psi, &target, &rule, n, DEFAULT_NODE_BUDGET).unwrap();
        let expected = -(n as f64 * (-0.25f64).ln_1p()).exp_m1();
        assert!((r.probability - expected).abs() < 1e-12, "n={n}: {} vs {expected}", r.probability);
    }
    let fail30 = 1.0 - exact_success(&proc, &psi, &target, &rule, 30).unwrap();
    assert!((fail30 - 0.75f64.powi(30)).abs() < 1e-12);
    assert!((fail30 - 1.79e-4).abs() < 1e-6);
}

#[test]
fn exact_qid_n_chain() {
    let mut rng = ChaCha20Rng::seed_from_u64(41);
    for n in 2..=5usize {
        let rule = CorrectionRule::qid_n(n);
        let proc = rule.processor().unwrap();
        let v = haar_unitary(n, &mut rng);
        let psi = haar_state(n, &mut rng);
        for k in [1usize, 2, 3, 7, 20] {
            let p = exact_success(&proc, &psi, &v, &rule, k).unwrap();
            let cf = closed_form(ClosedFormFamily::QidNLoop { dim: n as u32, rounds: k as u32 }).unwrap().value;
            assert!((p - cf).abs() < 1e-12, "N={n} K={k}: {p} vs {cf}");
        }
    }
}

fn three_sigma(hits: usize, trials: usize, exact: f64) -> bool {
    let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
    (hits as f64 / trials as f64 - exact).abs() <= 3.0 * sigma
}

#[test]
fn bz_monte_carlo_matches_exact_tree() {
    let z = 0.6;
    let rule = CorrectionRule::bz();
    let proc = rule.processor().unwrap();
    let psi = Ket::from_real(&[0.6, 0.8]).unwrap();
    let target = b_operator(c64(z, 0.0));
    let exact = exact_success(&proc, &psi, &target, &rule, 3).unwrap();
    let policy = LoopPolicy::new(3).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(42);
    let trials = 1_000_000;
    let hits = (0..trials)
        .filter(|_| run_loop(&proc, &psi, &target, &rule, &policy, &mut rng).unwrap().succeeded())
        .count();
    assert!(three_sigma(hits, trials, exact), "{hits}/{trials} vs {exact}");
}

#[test]
fn successful_traces_end_in_target_state() {
    let mut rng = ChaCha20Rng::seed_from_u64(43);
    let cases: Vec<(CorrectionRule, Operator)> = vec![
        (CorrectionRule::u1(), u1_rotation(1.2)),
        (CorrectionRule::bz(), b_operator(C64::from_polar(0.5, 0.9))),
        (CorrectionRule::cyclic(4), b_operator(C64::from_polar(1.6, 0.2))),
        (CorrectionRule::diagonal(3), Operator::diag(&[c64(1.0, 0.0), c64(0.6, 0.0), c64(0.3, 0.4)])),
        (CorrectionRule::qid2(), su2_exp([0.2, -0.5, 0.9])),
        (CorrectionRule::qid_n(3), haar_unitary(3, &mut rng)),
    ];
    for (rule, target) in cases {
        let proc = rule.processor().unwrap();
        let policy = LoopPolicy::new(30).unwrap();
        for _ in 0..50 {
            let psi = haar_state(proc.data_dim(), &mut rng);
            let t = run_loop(&proc, &psi, &target, &rule, &policy, &mut rng).unwrap();
            assert!(t.rounds_used() <= 30);
            if t.succeeded() {
                let expected = target.apply(&psi).unwrap().normalized().unwrap();
                let d = t.final_state().unwrap().distance_up_to_phase(&expected);
                assert!(d < 1e-8, "{:?}: {d}", rule.family());
            }
        }
    }
}

#[test]
fn qid2_single_round_frequency() {
    let rule = CorrectionRule::qid2();
    let proc = rule.processor().unwrap();
    let target = su2_exp([0.4, 0.1, -1.3]);
    let psi = Ket::from_real(&[0.8, 0.6]).unwrap();
    let policy = LoopPolicy::new(1).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(44);
    let trials = 100_000;
    let hits = (0..trials)
        .filter(|_| run_loop(&proc, &psi, &target, &rule, &policy, &mut rng).unwrap().succeeded())
        .count();
    assert!(three_sigma(hits, trials, 0.25));
}

#[test]
fn qid_n_rounds_are_geometric() {
    // P(first success at round k) = (1/9)(8/9)^{k−1} for N = 3.
    let mut rng = ChaCha20Rng::seed_from_u64(45);
    let rule = CorrectionRule::qid_n(3);
    let proc = rule.processor().unwrap();
    let v = haar_unitary(3, &mut rng);
    let psi = haar_state(3, &mut rng);
    let policy = LoopPolicy::new(200).unwrap();
    let trials = 20_000;
    let mut counts = [0usize; 6];
    let mut total_rounds = 0usize;
    for _ in 0..trials {
        let t = run_loop(&proc, &psi, &v, &rule, &policy, &mut rng).unwrap();
        assert!(t.succeeded());
        total_rounds += t.rounds_used();
        if t.rounds_used() <= counts.len() {
            counts[t.rounds_used() - 1] += 1;
        }
    }
    for (k, &c) in counts.iter().enumerate() {
        let p = (8.0f64 / 9.0).powi(k as i32) / 9.0;
        assert!(three_sigma(c, trials, p), "k={} {c}", k + 1);
    }
    // Mean of a geometric law with p = 1/9 is 9, variance 72.
    let mean = total_rounds as f64 / trials as f64;
    assert!((mean - 9.0).abs() < 3.0 * (72.0 / trials as f64).sqrt());
}
