mod common;

use boolsp::experiments::shell::default_depth;
use boolsp::experiments::{
    bad_point_detect, fraction_curve_csv, graph_scan, predictor_orbit, shell_bias, sp_fraction, sp_fraction_curve,
    threshold_constants, CensusCheckpoint, FractionMode, OrbitTerminal, SpFraction,
};
use boolsp::io::{parse_document, table_to_hex, InputDocument};
use boolsp::noise::{closeness_to_sp, optimal_predictor, TieRule};
use boolsp::rational::{self, int, rat};
use boolsp::sp::region::default_epsilon;
use boolsp::sp::{classify, necessary_checks, sp_region, sufficient_thresholds, Endpoint};
use boolsp::BooleanFunction;

use common::*;

#[test]
fn or_region_is_an_upper_ray() {
    for n in 2..=8usize {
        let r = sp_region(&BooleanFunction::or(n).unwrap(), &default_epsilon()).unwrap();
        assert_eq!(r.intervals.len(), 1);
        let iv = &r.intervals[0];
        assert_eq!(iv.hi, Endpoint::exact(int(1)));
        let want = 2f64.powf((n as f64 - 1.0) / n as f64) - 1.0;
        assert!((iv.lo.approx() - want).abs() < 1e-9);
        let t = sufficient_thresholds(&BooleanFunction::or(n).unwrap());
        assert!((t.no_flip.approx() - want).abs() < 1e-9);
        let c = classify(&BooleanFunction::or(n).unwrap());
        assert!(c.monotonically_sp && !c.usp);
    }
}

#[test]
fn or_neighborhoods_and_dominating_points() {
    let or3 = BooleanFunction::or(3).unwrap();
    let friendly = or3.friendly_neighborhood(1).unwrap();
    assert!(!friendly[0]);
    assert!(friendly[1..].iter().all(|&b| b));
    let mut dom = or3.dominating_boundary_points().unwrap();
    dom.sort();
    // the all-+1 point and its three neighbours
    assert_eq!(dom, vec![0, 1, 2, 4]);
    assert!(ltf(&[1, 2, 2]).dominating_boundary_points().is_ok());
    assert!(BooleanFunction::character(2, 3).unwrap().dominating_boundary_points().is_err());
}

#[test]
fn unbalanced_predictor_and_its_orbit() {
    let f = unbalanced_predictor_example();
    let half = rat(1, 2);
    let p = optimal_predictor(&f, &half, TieRule::Zero).unwrap();
    assert_ne!(p.count(1), p.count(-1));
    let c = closeness_to_sp(&f, &half).unwrap();
    assert!(c.distance > int(0) && c.distance <= c.bound);
    let orbit = predictor_orbit(&f, &half, 100).unwrap();
    assert!(!orbit.is_cycle());
    match orbit.terminal {
        OrbitTerminal::Fixpoint { ref table } => {
            assert_eq!(orbit.trajectory.last().unwrap(), table);
        }
        ref other => panic!("unexpected terminal {other:?}"),
    }
}

#[test]
fn sp_functions_are_their_own_predictors() {
    let maj = BooleanFunction::majority(5).unwrap();
    let rho = rat(1, 3);
    let orbit = predictor_orbit(&maj, &rho, 10).unwrap();
    assert_eq!(orbit.terminal, OrbitTerminal::Fixpoint { table: table_to_hex(&maj) });
    assert!(necessary_checks(&maj, &rho).unwrap().basic_ok);
}

#[test]
fn dictator_shells() {
    let n = 9;
    let f = BooleanFunction::character(n, 1).unwrap();
    for d in 1..=n {
        let s = shell_bias(&f, 0, d).unwrap();
        assert_eq!(s.beta, rat(d as i64, n as i64));
        assert_eq!(s.shell_size, num_integer::binomial(n as u64, d as u64));
    }
    assert_eq!(default_depth(9), 4);
    assert!(!bad_point_detect(&f, 0, &rat(1, 20), None).unwrap().bad);
    // the lone +1 point of OR disagrees with every neighbour
    let b = bad_point_detect(&BooleanFunction::or(n).unwrap(), 0, &int(0), None).unwrap();
    assert!(b.bad && b.ell == 4);
    let maj = BooleanFunction::majority(9).unwrap();
    assert!(!bad_point_detect(&maj, 0, &rat(1, 20), None).unwrap().bad);
}

#[test]
fn threshold_constants_report() {
    let t = threshold_constants(Some(&int(2)), Some(&rat(9, 100))).unwrap();
    assert_eq!(t.eta_alpha, Some(rat(1, 4)));
    assert!(t.eta_delta.unwrap() < 0.25);
    let t = threshold_constants(None, Some(&rat(1, 10))).unwrap();
    assert!(t.eta_delta.is_none());
    assert!((t.delta_max - 0.0974).abs() < 1e-3);
    assert!(threshold_constants(Some(&int(1)), None).is_err());
}

#[test]
fn census_matches_direct_counting() {
    let rho = rat(1, 2);
    let direct = (0..256u64).filter(|&id| oracle_is_sp(&BooleanFunction::from_id(3, id).unwrap(), &rho)).count();
    let exact = sp_fraction(3, &rho, FractionMode::Exhaustive).unwrap();
    assert_eq!(exact.count(), direct as u64);
    let est = sp_fraction(3, &rho, FractionMode::Sample { count: 4000, seed: 9 }).unwrap();
    let SpFraction::Estimate { estimate, stderr, .. } = est else { panic!("expected an estimate") };
    assert!((estimate - exact.approx()).abs() < 5.0 * stderr);
    assert!(sp_fraction(5, &rho, FractionMode::Exhaustive).is_err());
}

#[test]
fn census_checkpoint_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.json");
    let rhos = vec![rat(1, 4), rat(3, 4)];
    let first = sp_fraction_curve(4, &rhos, FractionMode::Exhaustive, Some(&path)).unwrap();
    let cp: CensusCheckpoint = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cp.next_id, 1 << 16);
    // a partial checkpoint picks up where it stopped
    let partial = CensusCheckpoint { next_id: 0, counts: vec![0, 0], ..cp };
    std::fs::write(&path, serde_json::to_string(&partial).unwrap()).unwrap();
    assert_eq!(sp_fraction_curve(4, &rhos, FractionMode::Exhaustive, Some(&path)).unwrap(), first);
    let other = vec![rat(1, 2)];
    assert!(sp_fraction_curve(4, &other, FractionMode::Exhaustive, Some(&path)).is_err());
    let csv = fraction_curve_csv(&rhos, &first).unwrap();
    assert!(csv.starts_with("rho_num,rho_den,fraction_num,fraction_den\n1,4,"));
}

#[test]
fn small_graphs_have_no_cycles() {
    for n in 1..=3 {
        let g = graph_scan(n, &rat(1, 3)).unwrap();
        assert!(g.cycles.is_empty());
        assert_eq!(g.num_components, g.num_fixpoints);
    }
}

#[test]
fn documents_round_trip() {
    let text = r#"{"format": "boolsp-ltf-v1", "a0": 0, "a": [1, 1, 1]}"#;
    match parse_document(text) {
        Ok(InputDocument::Ltf(spec)) => {
            assert_eq!(BooleanFunction::from_ltf(&spec).unwrap(), BooleanFunction::majority(3).unwrap());
        }
        Ok(_) => panic!("wrong document kind"),
        Err(e) => panic!("{e}"),
    }
    assert!(parse_document(r#"{"format": "nope"}"#).is_err());
    assert!(rational::parse_rational("3/2").is_ok());
}
