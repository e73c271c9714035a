mod common;

use boolsp::constructs::{character_compose, negate_inputs, random_function, CompositionPlan};
use boolsp::noise::stability_report;
use boolsp::rational::{int, rat};
use boolsp::sp::region::default_epsilon;
use boolsp::sp::{classify, is_sp, sp_region, sufficient_thresholds};
use boolsp::spectrum::{influences, wht};
use boolsp::{BooleanFunction, Rational};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn monotone_functions(n: usize) -> Vec<BooleanFunction> {
    (0..1u64 << (1 << n))
        .map(|id| BooleanFunction::from_id(n, id).unwrap())
        .filter(|f| f.is_monotone())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn region_membership_agrees_with_pointwise_test(n in 1usize..=6, seed: u64, q in 1i64..=500, p in 0i64..=500) {
        let f = random_function(n, seed).unwrap();
        let rho = rat(p % (q + 1), q);
        let region = sp_region(&f, &default_epsilon()).unwrap();
        let sp = is_sp(&f, &rho, false).unwrap().sp;
        prop_assert_eq!(sp, oracle_is_sp(&f, &rho));
        if let Some(inside) = region.contains(&rho) {
            prop_assert_eq!(inside, sp);
        }
    }

    #[test]
    fn character_composition_moves_the_spectrum(n in 1usize..=12, seed: u64, m in 1usize..=4, outer_seed: u64) {
        let m = m.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let width = 1 + (seed as usize) % (n / m);
        let mut coords: Vec<usize> = (0..n).collect();
        coords.shuffle(&mut rng);
        let blocks: Vec<u64> = coords
            .chunks(width)
            .take(m)
            .map(|c| c.iter().fold(0u64, |b, &j| b | 1 << j))
            .collect();
        let outer = random_function(m, outer_seed).unwrap();
        let plan = CompositionPlan::new(n, blocks.clone(), outer.clone()).unwrap();
        let h = character_compose(&plan).unwrap();
        let (sh, so) = (wht(&h), wht(&outer));
        let mut expected = vec![0i64; 1 << n];
        for (t, &c) in so.coeffs.iter().enumerate() {
            let s = (0..m).filter(|i| t >> i & 1 == 1).fold(0usize, |acc, i| acc | blocks[i] as usize);
            expected[s] = c * (sh.scale() / so.scale());
        }
        prop_assert_eq!(sh.coeffs, expected);
    }

    #[test]
    fn balanced_predictability_gain_is_bounded(n in 1usize..=7, seed: u64, q in 1i64..=64, p in 0i64..=64) {
        let g = random_function(n, seed).unwrap();
        let f = BooleanFunction::from_fn(n + 1, |u| g.is_plus(u & ((1 << n) - 1)) != (u >> n == 1)).unwrap();
        prop_assert!(f.is_balanced());
        let rho = rat(p % (q + 1), q);
        let s = stability_report(&f, &rho).unwrap();
        prop_assert!(s.ns.clone() / (int(1) + rho) <= s.ns_star);
    }
}

#[test]
fn negating_inputs_keeps_the_region() {
    let eps = default_epsilon();
    for n in 1..=3usize {
        for id in 0..1u64 << (1 << n) {
            let f = BooleanFunction::from_id(n, id).unwrap();
            let base = sp_region(&f, &eps).unwrap();
            for mask in 0..1usize << n {
                let signs: Vec<i8> = (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
                assert_eq!(sp_region(&negate_inputs(&f, &signs).unwrap(), &eps).unwrap(), base, "n={n} id={id:#x}");
            }
        }
    }
    let f = ltf(&[13, 43, 67, 67, 67, 117, 153, 165, 165, 179, 179]);
    let base = sp_region(&f, &eps).unwrap();
    for signs in [[-1i8, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1], [1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1], [-1; 11]] {
        assert_eq!(sp_region(&negate_inputs(&f, &signs).unwrap(), &eps).unwrap(), base);
    }
}

#[test]
fn monotone_fast_path_matches_full_scan() {
    let grid = rho_grid_63();
    for n in 1..=4 {
        for f in monotone_functions(n) {
            for rho in &grid {
                let fast = is_sp(&f, rho, true).unwrap();
                let full = is_sp(&f, rho, false).unwrap();
                assert_eq!(fast.sp, full.sp, "{f:?} at {rho}");
            }
        }
    }
}

#[test]
fn level_one_equals_influence_for_monotone_functions() {
    let mut fs: Vec<BooleanFunction> = (1..=4).flat_map(monotone_functions).collect();
    fs.extend((1..=6).map(|k| BooleanFunction::majority(2 * k + 1).unwrap()));
    fs.extend((3..=13).map(|n| BooleanFunction::edic(n).unwrap()));
    for f in fs {
        let chow = wht(&f).chow();
        assert_eq!(chow[1..], influences(&f)[..], "{f:?}");
    }
}

#[test]
fn everything_is_sp_past_the_no_flip_threshold() {
    for n in 1..=4usize {
        let t = sufficient_thresholds(&BooleanFunction::constant(n, 1).unwrap()).no_flip;
        let rho = t.hi() + rat(1, 64);
        if rho > int(1) {
            continue;
        }
        for id in 0..1u64 << (1 << n) {
            let f = BooleanFunction::from_id(n, id).unwrap();
            assert!(is_sp(&f, &rho, false).unwrap().sp, "n={n} id={id:#x}");
        }
    }
}

#[test]
fn classification_chain_on_four_variables() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ids: Vec<u64> = (0..1u64 << 16).collect();
    ids.shuffle(&mut rng);
    ids.truncate(1500);
    let fs = ids.into_iter().map(|id| BooleanFunction::from_id(4, id).unwrap()).chain(monotone_functions(4));
    let half = rat(1, 2);
    for f in fs {
        let c = classify(&f);
        assert!(!c.sst || c.lcsp, "{f:?}");
        assert!(!c.lcsp || c.wst, "{f:?}");
        if c.lcsp {
            assert!(f.is_balanced() || f.is_constant(), "{f:?}");
            let w1: Rational = wht(&f).weights()[1].clone();
            assert!(w1 == int(0) || w1 >= half, "{f:?}");
        }
        if c.usp {
            assert!(c.region.is_full());
        }
    }
}
