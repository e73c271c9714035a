//! USP / LCSP / WST / SST classification.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::func::BooleanFunction;
use crate::poly::IntPoly;
use crate::rational::Rational;
use crate::spectrum;
use crate::Result;

use super::region::{default_epsilon, gap_samples, region_from_keys, separate_sorted, Endpoint, SpRegion, StrippedSet};
use super::LevelTable;

/// Least input index violating each property, when it fails.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub usp: Option<usize>,
    pub lcsp: Option<usize>,
    pub wst: Option<usize>,
    pub sst: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpClassification {
    pub usp: bool,
    pub lcsp: bool,
    pub wst: bool,
    pub sst: bool,
    /// The region has the form `[ρ0, 1]` or `(ρ0, 1]`.
    pub monotonically_sp: bool,
    pub rho0: Option<Endpoint>,
    /// `Lev(f)`, ranging over `k ≥ 0`.
    pub level: usize,
    /// Inputs where `f_Lev` vanishes.
    pub lev_zero_count: usize,
    pub witnesses: Witnesses,
    pub region: SpRegion,
}

pub fn classify(f: &BooleanFunction) -> SpClassification {
    classify_with(f, &default_epsilon()).expect("default epsilon is positive")
}

pub fn classify_with(f: &BooleanFunction, epsilon: &Rational) -> Result<SpClassification> {
    let spec = spectrum::wht(f);
    let table = LevelTable::new(&spec);
    let keys = table.adjusted_keys(f);

    let set = StrippedSet::new(keys.keys());
    let mut group_roots = set.group_roots();
    group_roots.par_iter_mut().for_each(|r| separate_sorted(r));
    let group_samples: Vec<Vec<Rational>> = group_roots.iter().map(|r| gap_samples(r)).collect();
    let mut group_of = vec![0usize; set.qs.len()];
    for (g, (_, members)) in set.groups.iter().enumerate() {
        for &qi in members {
            group_of[qi] = g;
        }
    }
    let q_ok: Vec<bool> = set
        .qs
        .par_iter()
        .enumerate()
        .map(|(qi, q)| group_samples[group_of[qi]].iter().all(|s| q.sign_at(s) == Ordering::Greater))
        .collect();
    let q_index: HashMap<&IntPoly, usize> = set.qs.iter().enumerate().map(|(i, q)| (q, i)).collect();

    let mut w = Witnesses::default();
    let min_opt = |slot: &mut Option<usize>, v: usize| {
        *slot = Some(slot.map_or(v, |s: usize| s.min(v)));
    };
    for (key, &v) in &keys {
        let (_, q) = IntPoly::from_i64(key).strip_zero_roots();
        if !q_ok[q_index[&q]] {
            min_opt(&mut w.usp, v);
        }
        let low = key.iter().find(|&&c| c != 0).copied().unwrap_or(0);
        if low <= 0 {
            min_opt(&mut w.lcsp, v);
        }
    }

    let level = spec.level();
    let lev = table.level(level);
    let mut lev_zero_count = 0;
    for v in 0..f.len() {
        let c = lev[v] * f.value(v) as i64;
        if c < 0 && w.wst.is_none() {
            w.wst = Some(v);
        }
        if c == 0 {
            lev_zero_count += 1;
        }
        if c <= 0 && w.sst.is_none() {
            w.sst = Some(v);
        }
    }

    let region = region_from_keys(&keys, epsilon);
    let (monotonically_sp, rho0) = match region.intervals.as_slice() {
        [iv] if iv.hi_closed && iv.hi == Endpoint::exact(Rational::one()) => (true, Some(iv.lo.clone())),
        _ => (false, None),
    };
    debug_assert_eq!(w.usp.is_none(), region.is_full());
    Ok(SpClassification {
        usp: w.usp.is_none(),
        lcsp: w.lcsp.is_none(),
        wst: w.wst.is_none(),
        sst: w.sst.is_none(),
        monotonically_sp,
        rho0,
        level,
        lev_zero_count,
        witnesses: w,
        region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LtfSpec;
    use num_traits::Zero;

    fn ltf(a: &[i64]) -> BooleanFunction {
        BooleanFunction::from_ltf(&LtfSpec::new(0, a.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn majority_and_characters() {
        let c = classify(&BooleanFunction::majority(5).unwrap());
        assert!(c.usp && c.lcsp && c.wst && c.sst && c.monotonically_sp);
        assert_eq!(c.rho0, Some(Endpoint::exact(Rational::zero())));
        let c = classify(&BooleanFunction::character(4, 0b0110).unwrap());
        assert!(c.usp && c.sst);
        assert_eq!(c.level, 2);
    }

    #[test]
    fn tie_breaking_majority() {
        let c = classify(&ltf(&[2, 1, 1, 1]));
        assert!(c.usp && c.lcsp && c.wst && !c.sst);
        assert_eq!(c.lev_zero_count, 2);
    }

    #[test]
    fn usp_ltf_n5() {
        assert!(classify(&ltf(&[1, 1, 3, 3, 5])).usp);
    }

    #[test]
    fn or_is_not_lcsp() {
        let c = classify(&BooleanFunction::or(3).unwrap());
        assert!(!c.lcsp && !c.usp);
        assert_eq!(c.level, 0);
        assert!(c.monotonically_sp);
        let r0 = c.rho0.unwrap();
        assert!((r0.approx() - (4f64.cbrt() - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn constants_are_sst() {
        let c = classify(&BooleanFunction::constant(3, -1).unwrap());
        assert!(c.usp && c.lcsp && c.wst && c.sst);
    }
}
