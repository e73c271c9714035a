//! The set of correlations at which a function is self-predicting.
//!
//! Every sign-adjusted point polynomial `f(v) P_v` is split as `ρ^j q(ρ)`
//! with `q(0) ≠ 0`; `q(1) > 0` always holds because `P_v(1) = 2^n f(v)`.
//! The roots of all `q` in `(0, 1)` are isolated exactly, merged into one
//! sorted list of distinct reals, and each cell of the resulting partition
//! of `[0, 1]` is tested at a single rational sample.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::func::BooleanFunction;
use crate::poly::{isolate_roots, same_root, simplest_between, IntPoly, RealRoot};
use crate::rational::{self, Rational};
use crate::spectrum;
use crate::{Error, Result};

use super::LevelTable;

/// Default isolation width for region endpoints.
pub fn default_epsilon() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

/// A region endpoint: an exact rational or an isolating interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Endpoint {
    Exact {
        #[serde(with = "rational::serde_rational")]
        value: Rational,
    },
    Isolated {
        #[serde(with = "rational::serde_rational")]
        lo: Rational,
        #[serde(with = "rational::serde_rational")]
        hi: Rational,
        approx: f64,
    },
}

impl Endpoint {
    pub fn exact(value: Rational) -> Self {
        Endpoint::Exact { value }
    }

    fn from_root(root: &RealRoot) -> Self {
        match root {
            RealRoot::Exact(r) => Endpoint::exact(r.clone()),
            RealRoot::Isolated { lo, hi, .. } => {
                Endpoint::Isolated { lo: lo.clone(), hi: hi.clone(), approx: root.approx() }
            }
        }
    }

    pub fn lo(&self) -> &Rational {
        match self {
            Endpoint::Exact { value } => value,
            Endpoint::Isolated { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            Endpoint::Exact { value } => value,
            Endpoint::Isolated { hi, .. } => hi,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Endpoint::Exact { value } => rational::to_f64(value),
            Endpoint::Isolated { approx, .. } => *approx,
        }
    }

    /// Whether `x` can be placed relative to this endpoint without further
    /// refinement.
    fn separates(&self, x: &Rational) -> bool {
        match self {
            Endpoint::Exact { .. } => true,
            Endpoint::Isolated { lo, hi, .. } => x <= lo || x >= hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl SpInterval {
    fn contains(&self, x: &Rational) -> Option<bool> {
        if !self.lo.separates(x) || !self.hi.separates(x) {
            return None;
        }
        // An isolating interval holds its root strictly inside.
        let above = match &self.lo {
            Endpoint::Exact { value } => x > value || (x == value && self.lo_closed),
            Endpoint::Isolated { hi, .. } => x >= hi,
        };
        let below = match &self.hi {
            Endpoint::Exact { value } => x < value || (x == value && self.hi_closed),
            Endpoint::Isolated { lo, .. } => x <= lo,
        };
        Some(above && below)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpRegion {
    pub intervals: Vec<SpInterval>,
    #[serde(with = "rational::serde_rational")]
    pub epsilon: Rational,
}

impl SpRegion {
    /// Membership of `ρ`; `None` when `ρ` falls inside an endpoint's
    /// isolating interval.
    pub fn contains(&self, rho: &Rational) -> Option<bool> {
        let mut undecided = false;
        for iv in &self.intervals {
            match iv.contains(rho) {
                Some(true) => return Some(true),
                None => undecided = true,
                Some(false) => {}
            }
        }
        if undecided {
            None
        } else {
            Some(false)
        }
    }

    /// Whether the region is exactly `[0, 1]`.
    pub fn is_full(&self) -> bool {
        match self.intervals.as_slice() {
            [iv] => {
                iv.lo_closed
                    && iv.hi_closed
                    && iv.lo == Endpoint::exact(Rational::zero())
                    && iv.hi == Endpoint::exact(Rational::one())
            }
            _ => false,
        }
    }

    /// Interval endpoints other than `0` and `1`.
    pub fn boundaries(&self) -> Vec<&Endpoint> {
        let (zero, one) = (Endpoint::exact(Rational::zero()), Endpoint::exact(Rational::one()));
        self.intervals
            .iter()
            .flat_map(|iv| [&iv.lo, &iv.hi])
            .filter(|e| **e != zero && **e != one)
            .collect()
    }
}

pub fn sp_region(f: &BooleanFunction, epsilon: &Rational) -> Result<SpRegion> {
    if *epsilon <= Rational::zero() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let table = LevelTable::new(&spectrum::wht(f));
    Ok(region_from_keys(&table.adjusted_keys(f), epsilon))
}

/// Stripped polynomials `q` with their squarefree parts grouped.
pub(crate) struct StrippedSet {
    /// Distinct `q`, in key order.
    pub qs: Vec<IntPoly>,
    /// Distinct squarefree parts and the indices of the `q` sharing each.
    pub groups: Vec<(IntPoly, Vec<usize>)>,
}

impl StrippedSet {
    pub fn new<'a>(keys: impl Iterator<Item = &'a Vec<i64>>) -> Self {
        let mut index: HashMap<IntPoly, usize> = HashMap::new();
        let mut qs = Vec::new();
        for key in keys {
            let (_, q) = IntPoly::from_i64(key).strip_zero_roots();
            index.entry(q.clone()).or_insert_with(|| {
                qs.push(q);
                qs.len() - 1
            });
        }
        let sqf: Vec<IntPoly> = qs.par_iter().map(|q| q.squarefree()).collect();
        let mut gindex: HashMap<IntPoly, usize> = HashMap::new();
        let mut groups: Vec<(IntPoly, Vec<usize>)> = Vec::new();
        for (i, s) in sqf.into_iter().enumerate() {
            match gindex.get(&s) {
                Some(&g) => groups[g].1.push(i),
                None => {
                    gindex.insert(s.clone(), groups.len());
                    groups.push((s, vec![i]));
                }
            }
        }
        StrippedSet { qs, groups }
    }

    /// Roots in `(0, 1)` of every squarefree part, in the group order.
    pub fn group_roots(&self) -> Vec<Vec<RealRoot>> {
        let (zero, one) = (Rational::zero(), Rational::one());
        self.groups.par_iter().map(|(s, _)| isolate_roots(s, &zero, &one)).collect()
    }
}

/// Bisects consecutive roots of one sorted list until they are strictly separated.
pub(crate) fn separate_sorted(roots: &mut [RealRoot]) {
    for i in 1..roots.len() {
        let (left, right) = roots.split_at_mut(i);
        let (a, b) = (&mut left[i - 1], &mut right[0]);
        while a.hi() >= b.lo() {
            a.bisect();
            b.bisect();
        }
    }
}

/// Samples `0`, one rational strictly inside each gap between consecutive
/// separated roots, and `1`.
pub(crate) fn gap_samples(roots: &[RealRoot]) -> Vec<Rational> {
    let mut s = vec![Rational::zero()];
    for w in roots.windows(2) {
        s.push(simplest_between(w[0].hi(), w[1].lo()));
    }
    s.push(Rational::one());
    s
}

struct Entry {
    root: RealRoot,
    groups: Vec<usize>,
}

fn merge_roots(entries: &mut Vec<Entry>) {
    loop {
        entries.sort_by(|a, b| a.root.lo().cmp(b.root.lo()).then_with(|| a.root.hi().cmp(b.root.hi())));
        let mut changed = false;
        let mut i = 0;
        while i + 1 < entries.len() {
            if entries[i].root.hi() < entries[i + 1].root.lo() {
                i += 1;
                continue;
            }
            changed = true;
            let (left, right) = entries.split_at_mut(i + 1);
            let (a, b) = (&mut left[i], &mut right[0]);
            if same_root(&mut a.root, &mut b.root) {
                let keep_b = match (&a.root, &b.root) {
                    (RealRoot::Exact(_), _) => false,
                    (_, RealRoot::Exact(_)) => true,
                    _ => b.root.width() < a.root.width(),
                };
                if keep_b {
                    std::mem::swap(&mut a.root, &mut b.root);
                }
                let moved = std::mem::take(&mut b.groups);
                a.groups.extend(moved);
                entries.remove(i + 1);
            } else {
                while !(a.root.hi() < b.root.lo() || b.root.hi() < a.root.lo()) {
                    a.root.bisect();
                    b.root.bisect();
                }
                i += 2;
            }
        }
        if !changed {
            break;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Cell {
    Zero,
    Gap(usize),
    Root(usize),
    One,
}

pub(crate) fn region_from_keys(keys: &BTreeMap<Vec<i64>, usize>, epsilon: &Rational) -> SpRegion {
    let point0_ok = keys.keys().all(|k| k[0] >= 0);
    let set = StrippedSet::new(keys.keys());
    let pre = Rational::new(BigInt::one(), BigInt::one() << 24);
    let mut entries: Vec<Entry> = set
        .group_roots()
        .into_iter()
        .enumerate()
        .flat_map(|(g, roots)| roots.into_iter().map(move |root| Entry { root, groups: vec![g] }))
        .collect();
    entries.par_iter_mut().for_each(|e| {
        while matches!(e.root, RealRoot::Isolated { .. }) && e.root.width() > pre {
            e.root.bisect();
        }
    });
    merge_roots(&mut entries);

    let m = entries.len();
    let roots: Vec<RealRoot> = entries.iter().map(|e| e.root.clone()).collect();
    let samples = gap_samples(&roots);
    // fails[i][qi]: q negative on gap i
    let fails: Vec<Vec<bool>> = samples
        .par_iter()
        .map(|s| set.qs.iter().map(|q| q.sign_at(s) == Ordering::Less).collect())
        .collect();
    let mut vanish = vec![false; set.qs.len()];
    let root_ok: Vec<bool> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            vanish.iter_mut().for_each(|x| *x = false);
            for &g in &e.groups {
                for &qi in &set.groups[g].1 {
                    vanish[qi] = true;
                }
            }
            fails[i].iter().zip(&vanish).all(|(&fail, &van)| !fail || van)
        })
        .collect();

    let mut cells = vec![(Cell::Zero, point0_ok)];
    for i in 0..=m {
        if i > 0 {
            cells.push((Cell::Root(i - 1), root_ok[i - 1]));
        }
        cells.push((Cell::Gap(i), fails[i].iter().all(|&f| !f)));
    }
    cells.push((Cell::One, true));

    let mut refined: Vec<Option<Endpoint>> = vec![None; m];
    let mut endpoint = |i: usize| -> Endpoint {
        refined[i]
            .get_or_insert_with(|| {
                let mut r = roots[i].clone();
                r.refine(epsilon);
                Endpoint::from_root(&r)
            })
            .clone()
    };
    let mut intervals = Vec::new();
    let mut start: Option<Cell> = None;
    for (idx, &(cell, ok)) in cells.iter().enumerate() {
        if ok && start.is_none() {
            start = Some(cell);
        }
        let next_ok = cells.get(idx + 1).is_some_and(|c| c.1);
        if ok && !next_ok {
            let (lo, lo_closed) = match start.take().unwrap() {
                Cell::Zero => (Endpoint::exact(Rational::zero()), true),
                Cell::Gap(0) => (Endpoint::exact(Rational::zero()), false),
                Cell::Gap(i) => (endpoint(i - 1), false),
                Cell::Root(i) => (endpoint(i), true),
                Cell::One => (Endpoint::exact(Rational::one()), true),
            };
            let (hi, hi_closed) = match cell {
                Cell::One => (Endpoint::exact(Rational::one()), true),
                Cell::Gap(i) if i == m => (Endpoint::exact(Rational::one()), false),
                Cell::Gap(i) => (endpoint(i), false),
                Cell::Root(i) => (endpoint(i), true),
                Cell::Zero => (Endpoint::exact(Rational::zero()), true),
            };
            intervals.push(SpInterval { lo, hi, lo_closed, hi_closed });
        }
    }
    SpRegion { intervals, epsilon: epsilon.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::sp::is_sp;
    use crate::LtfSpec;

    fn eps() -> Rational {
        default_epsilon()
    }

    #[test]
    fn majority_and_characters_are_full() {
        for n in [1, 3, 5] {
            assert!(sp_region(&BooleanFunction::majority(n).unwrap(), &eps()).unwrap().is_full());
        }
        let chi = BooleanFunction::character(4, 0b1011).unwrap();
        assert!(sp_region(&chi, &eps()).unwrap().is_full());
    }

    #[test]
    fn or_region_is_a_closed_ray() {
        for n in 2..=6usize {
            let r = sp_region(&BooleanFunction::or(n).unwrap(), &eps()).unwrap();
            assert_eq!(r.intervals.len(), 1);
            let iv = &r.intervals[0];
            assert!(iv.lo_closed && iv.hi_closed);
            let want = 2f64.powf((n as f64 - 1.0) / n as f64) - 1.0;
            assert!((iv.lo.approx() - want).abs() < 1e-9);
            let width = iv.lo.hi() - iv.lo.lo();
            assert!(width <= eps());
        }
    }

    #[test]
    fn or2_threshold_is_exact() {
        // (1+ρ)^2 = 2 has the irrational root √2 - 1; n = 1 gives ρ = 0.
        let r = sp_region(&BooleanFunction::or(1).unwrap(), &eps()).unwrap();
        assert!(r.is_full());
    }

    #[test]
    fn membership_matches_exact_decision() {
        let fs = [
            BooleanFunction::or(4).unwrap(),
            BooleanFunction::from_ltf(&LtfSpec::new(0, vec![1, 5, 16, 19, 25, 58, 68, 91, 94]).unwrap()).unwrap(),
            crate::constructs::random_function(4, 77).unwrap(),
            crate::constructs::random_function(5, 78).unwrap(),
        ];
        for f in &fs {
            let r = sp_region(f, &eps()).unwrap();
            for k in 0..=97 {
                let rho = rat(k, 97);
                if let Some(inside) = r.contains(&rho) {
                    assert_eq!(inside, is_sp(f, &rho, false).unwrap().sp, "rho = {rho}");
                }
            }
            assert_eq!(r.contains(&int(1)), Some(true));
        }
    }

    #[test]
    fn isolated_zero_point() {
        // x1·x2 on two variables: P_v = ±4ρ², SP everywhere with a tie at 0.
        let f = BooleanFunction::character(2, 3).unwrap();
        assert!(sp_region(&f, &eps()).unwrap().is_full());
        // A random function that is SP only at 0 and near 1 still includes 1.
        let g = crate::constructs::random_function(3, 9).unwrap();
        let r = sp_region(&g, &eps()).unwrap();
        let last = r.intervals.last().unwrap();
        assert_eq!(last.hi, Endpoint::exact(int(1)));
    }
}
