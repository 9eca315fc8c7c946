//! End-to-end behavior of the verification suites: verdict logic, witness
//! reporting, hypothesis gating, and reproducibility.

use ri_core::grammar::{parse_param_function, parse_params, parse_space, parse_young};
use ri_core::report::Verdict;
use ri_core::suites::{
    extremal_search, suite_info, verify_classical_young, verify_conv_endpoints,
    verify_gustavsson_peetre, verify_karamata_young, verify_orlicz_young, verify_theta_edge,
    verify_thm21, verify_thm35, verify_thm36, verify_torus_zygmund, BilinearGrid,
    BilinearOpSpec, InequalityInstance, ThetaEdge, CATALOGUE,
};
use ri_core::suites::classical_young_ratio;
use ri_core::varying::SlowlyVarying;
use ri_core::{corpus, Domain, Error, StepFunction};

#[test]
fn catalogue_ids_are_unique_and_resolvable() {
    for info in &CATALOGUE {
        let found = suite_info(info.id).unwrap();
        assert_eq!(found.id, info.id);
        assert!(!found.summary.is_empty());
    }
    assert!(suite_info("no-such-suite").is_none());
    let mut ids: Vec<&str> = CATALOGUE.iter().map(|i| i.id).collect();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), CATALOGUE.len());
}

#[test]
fn conv_endpoints_certifies_on_exact_lebesgue_targets() {
    for domain in [Domain::RealLine, Domain::Torus, Domain::Integers] {
        let space = parse_space("lebesgue(2)", domain).unwrap();
        let pairs = corpus::default_pair_corpus(domain, 20, 5);
        let run = verify_conv_endpoints(&space, &pairs, 5).unwrap();
        assert_eq!(run.report.verdict, Verdict::ConstantExactOk, "{domain}");
        assert!(run.report.max_ratio <= 1.0 + 1e-6);
        assert_eq!(run.report.n_cases, 2 * pairs.len());
    }
}

#[test]
fn conv_endpoints_downgrades_estimated_duals() {
    let space = parse_space("lorentz(2, 1)", Domain::Torus).unwrap();
    let pairs = corpus::default_pair_corpus(Domain::Torus, 12, 7);
    let run = verify_conv_endpoints(&space, &pairs, 7).unwrap();
    assert_eq!(run.report.verdict, Verdict::Conditional);
    assert!(!run.report.notes.is_empty());
}

#[test]
fn conv_endpoints_rejects_the_half_line() {
    let space = parse_space("lebesgue(2)", Domain::HalfLine).unwrap();
    match verify_conv_endpoints(&space, &[], 1) {
        Err(Error::UnsupportedDomain(Domain::HalfLine)) => {}
        other => panic!("expected UnsupportedDomain, got {other:?}"),
    }
}

#[test]
fn classical_young_requires_the_exponent_identity() {
    let pairs = corpus::default_pair_corpus(Domain::RealLine, 4, 3);
    match verify_classical_young(1.5, 3.0, 3.0, &pairs, None, 3) {
        Err(Error::ExponentMismatch { p, q, r }) => {
            assert_eq!((p, q, r), (1.5, 3.0, 3.0));
        }
        other => panic!("expected ExponentMismatch, got {other:?}"),
    }
    match verify_classical_young(0.5, 1.0, 0.5, &pairs, None, 3) {
        Err(Error::InvalidParameter(_)) => {}
        other => panic!("expected InvalidParameter, got {other:?}"),
    }
}

#[test]
fn classical_young_attains_its_constant_on_near_extremal_pairs() {
    let pairs = corpus::default_pair_corpus(Domain::RealLine, 60, 11);
    let run = verify_classical_young(2.0, 2.0, f64::INFINITY, &pairs, None, 11).unwrap();
    assert_eq!(run.report.verdict, Verdict::ConstantExactOk);
    assert!(run.report.max_ratio <= 1.0 + 1e-9);
    assert!(run.report.max_ratio >= 1.0 - 1e-9, "χ ⋆ χ should attain the constant");
}

#[test]
fn planted_false_constant_is_flagged_with_a_witness() {
    let pairs = corpus::default_pair_corpus(Domain::RealLine, 30, 13);
    let run = verify_classical_young(2.0, 2.0, f64::INFINITY, &pairs, Some(0.5), 13).unwrap();
    assert_eq!(run.report.verdict, Verdict::Violated);
    let w1 = run.report.argmax_first.as_ref().expect("witness first factor");
    let w2 = run.report.argmax_second.as_ref().expect("witness second factor");
    let f = StepFunction::from_text(w1).unwrap();
    let g = StepFunction::from_text(w2).unwrap();
    let ratio = classical_young_ratio(2.0, 2.0, f64::INFINITY)(&f, &g).unwrap();
    assert!((ratio - run.report.max_ratio).abs() <= 1e-9 * (1.0 + ratio));
    assert!(ratio > 0.5, "witness must actually exceed the planted constant");
}

#[test]
fn thm21_needs_a_closed_form_associate_space() {
    let space = parse_space("grand(2)", Domain::Torus).unwrap();
    let params = parse_params("params(theta=0.5, T=20, h=0.1)").unwrap();
    let pairs = corpus::default_pair_corpus(Domain::Torus, 4, 17);
    match verify_thm21(&space, &params, &pairs, 17, false) {
        Err(Error::Unsupported(_)) => {}
        other => panic!("expected Unsupported, got {other:?}"),
    }
}

#[test]
fn thm21_holds_and_is_refinement_stable_in_smoke_runs() {
    let space = parse_space("lebesgue(2)", Domain::Torus).unwrap();
    let params = parse_params("params(theta=0.5, E=lebesgue(2), T=30, h=0.05)").unwrap();
    let pairs = corpus::default_pair_corpus(Domain::Torus, 10, 19);
    let run = verify_thm21(&space, &params, &pairs, 19, true).unwrap();
    assert_ne!(run.report.verdict, Verdict::Violated);
    let drift = run.report.refinement_drift.expect("drift requested");
    assert!(drift <= 0.05, "drift {drift} too large for a stable bound");
    assert_eq!(run.report.label, "thm21");
}

#[test]
fn orlicz_theta_construction_certifies_unit_constant() {
    let phi0 = parse_young("t^2").unwrap();
    let pairs = corpus::default_pair_corpus(Domain::RealLine, 24, 23);
    let run = verify_orlicz_young(&phi0, 0.5, &pairs, 23).unwrap();
    assert_eq!(run.report.verdict, Verdict::ConstantExactOk);
    assert_eq!(run.report.label, "cor22");
    assert_eq!(run.report.anchor, "cor 2.2");
}

#[test]
fn rho_hypotheses_gate_the_parameter_function_suite() {
    let phi0 = parse_young("t^2").unwrap();
    let pairs = corpus::default_pair_corpus(Domain::RealLine, 12, 29);

    let good = parse_param_function("t^0.5").unwrap();
    let run = verify_gustavsson_peetre(&phi0, &good, &pairs, 29).unwrap();
    assert_eq!(run.report.verdict, Verdict::Bounded, "notes: {:?}", run.report.notes);

    // ρ(t) = t has s_ρ(t) = t, which is not o(max{1, t})
    let edge = parse_param_function("t^1").unwrap();
    let run = verify_gustavsson_peetre(&phi0, &edge, &pairs, 29).unwrap();
    assert_eq!(run.report.verdict, Verdict::Conditional);
}

#[test]
fn torus_zygmund_suite_accepts_interior_theta_only() {
    let pairs = corpus::default_pair_corpus(Domain::Torus, 10, 31);
    let run = verify_torus_zygmund(0.5, &pairs, 30.0, 0.05, 31, true).unwrap();
    assert_ne!(run.report.verdict, Verdict::Violated);
    assert!(run.report.refinement_drift.is_some());
    match verify_torus_zygmund(1.0, &pairs, 30.0, 0.05, 31, false) {
        Err(Error::InvalidParameter(_)) => {}
        other => panic!("expected InvalidParameter, got {other:?}"),
    }
}

#[test]
fn karamata_suite_runs_with_weighted_targets() {
    let pairs = corpus::default_pair_corpus(Domain::Torus, 10, 37);
    let b = SlowlyVarying::one();
    let e_inner = parse_space("lebesgue(2)", Domain::HalfLine).unwrap();
    let f_outer = parse_space("lebesgue(2)", Domain::HalfLine).unwrap();
    let run = verify_karamata_young(0.5, &b, 2.0, &e_inner, &f_outer, &pairs, 37).unwrap();
    assert_ne!(run.report.verdict, Verdict::Violated);
    assert_eq!(run.report.label, "cor27");
    assert!(run.report.refinement_drift.is_some());
}

#[test]
fn theta_edges_are_always_conditional() {
    let pairs = corpus::default_pair_corpus(Domain::Torus, 8, 41);
    let b = SlowlyVarying::one();
    let f_outer = parse_space("lebesgue(inf)", Domain::HalfLine).unwrap();
    for (edge, label) in [(ThetaEdge::Zero, "cor28"), (ThetaEdge::One, "cor29")] {
        let run = verify_theta_edge(edge, &b, &f_outer, &pairs, 41).unwrap();
        assert_eq!(run.report.verdict, Verdict::Conditional);
        assert_eq!(run.report.label, label);
        assert!(run.report.notes.iter().any(|n| n.contains("no inequality")));
    }
}

#[test]
fn extremal_search_never_loses_to_its_seed_corpus() {
    let pairs = corpus::default_pair_corpus(Domain::RealLine, 20, 43);
    let ratio = classical_young_ratio(2.0, 2.0, f64::INFINITY);
    let corpus_max = pairs
        .iter()
        .map(|(f, g)| ratio(f, g).unwrap())
        .fold(0.0, f64::max);
    let instance = InequalityInstance {
        label: "young-search".into(),
        ratio: Box::new(ratio),
        corpus: &pairs,
    };
    let outcome = extremal_search(&instance, 300, 43).unwrap();
    assert!(outcome.best_ratio >= corpus_max * (1.0 - 1e-12));
    assert!(outcome.best_ratio <= 1.0 + 1e-9, "search must respect the true bound");
    assert!(outcome.evaluations > 0);
    match extremal_search(&instance, 0, 43) {
        Err(Error::EmptyBudget) => {}
        other => panic!("expected EmptyBudget, got {other:?}"),
    }
}

#[test]
fn bilinear_interpolation_suites_hold_in_smoke_runs() {
    let op = BilinearOpSpec::conv_torus_endpoints();
    let phi = SlowlyVarying::one();
    let e_space = parse_space("lebesgue(2)", Domain::HalfLine).unwrap();
    let pairs = corpus::default_pair_corpus(Domain::Torus, 6, 47);
    let grid = BilinearGrid { window: 30.0, step: 0.1, n_terms: 800, slack: 0.10 };
    let run35 = verify_thm35(&op, 0.5, &phi, &e_space, &pairs, &grid, 47).unwrap();
    assert_ne!(run35.report.verdict, Verdict::Violated, "{}", run35.summary_line());
    assert_eq!(run35.report.label, "thm35");
    let run36 = verify_thm36(&op, 0.5, &phi, &e_space, &pairs, &grid, 47).unwrap();
    assert_ne!(run36.report.verdict, Verdict::Violated, "{}", run36.summary_line());
    assert_eq!(run36.report.label, "thm36");
}

#[test]
fn product_operator_also_certifies_endpoints() {
    let op = BilinearOpSpec::product_sup();
    let phi = SlowlyVarying::one();
    let e_space = parse_space("lebesgue(2)", Domain::HalfLine).unwrap();
    let pairs = corpus::default_pair_corpus(Domain::Torus, 5, 53);
    let grid = BilinearGrid { window: 25.0, step: 0.1, n_terms: 600, slack: 0.10 };
    let run = verify_thm35(&op, 0.5, &phi, &e_space, &pairs, &grid, 53).unwrap();
    assert_ne!(run.report.verdict, Verdict::Violated);
}

#[test]
fn suite_reports_are_reproducible_in_process() {
    let pairs = corpus::default_pair_corpus(Domain::Torus, 12, 59);
    let a = verify_torus_zygmund(0.5, &pairs, 25.0, 0.1, 59, true).unwrap();
    let b = verify_torus_zygmund(0.5, &pairs, 25.0, 0.1, 59, true).unwrap();
    assert_eq!(a.to_json_string(), b.to_json_string());
}
