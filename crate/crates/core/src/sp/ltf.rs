//! Linear-threshold structure of low-correlation SP functions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::func::{BooleanFunction, LtfSpec};
use crate::rational::{self, Rational};
use crate::spectrum::{self, influences};
use crate::{Error, Result};

use super::classify::classify;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtfApproximation {
    pub g: LtfSpec,
    #[serde(with = "rational::serde_rational")]
    pub distance: Rational,
    /// Number of nonzero level-1 coefficients.
    pub n_f: usize,
    /// `C(n_f, ⌊n_f/2⌋) / 2^{n_f}`.
    #[serde(with = "rational::serde_rational")]
    pub sperner_bound: Rational,
    /// `√(2/(π n_f))`.
    pub bound: f64,
}

/// `g = sgn(2·L + t)` with `L = Σ f̂_i x_i` reduced to coprime integers and
/// `t` one of `±1, ±x_i`, chosen to agree with `f` most often on the zero
/// set of `L`. Off that set `g = sgn L`.
pub fn ltf_approximation(f: &BooleanFunction) -> Result<LtfApproximation> {
    let spec = spectrum::wht(f);
    let f1 = spec.level_one();
    let g0 = f1.iter().fold(0i64, |g, &a| g.gcd(&a));
    if g0 == 0 {
        return Err(Error::Precondition("ltf approximation needs W^1[f] > 0".into()));
    }
    let base: Vec<i64> = f1.iter().map(|&a| 2 * (a / g0)).collect();
    let form = spec.level_one_form();
    let zeros: Vec<usize> = (0..f.len()).filter(|&u| form[u] == 0).collect();
    let n = f.n();
    // candidate perturbations: (a0 shift, coordinate shifted, sign)
    let mut best: Option<(usize, LtfSpec)> = None;
    let mut consider = |spec: LtfSpec| {
        let agree = zeros.iter().filter(|&&u| (spec.value_at(u) > 0) == f.is_plus(u)).count();
        if best.as_ref().is_none_or(|(a, _)| agree > *a) {
            best = Some((agree, spec));
        }
    };
    for s in [1i64, -1] {
        consider(LtfSpec { a0: s, a: base.clone() });
    }
    for j in 0..n {
        for s in [1i64, -1] {
            let mut a = base.clone();
            a[j] += s;
            consider(LtfSpec { a0: 0, a });
        }
    }
    let (_, g) = best.expect("at least one candidate");
    let gf = BooleanFunction::from_ltf(&g)?;
    let n_f = f1.iter().filter(|&&a| a != 0).count();
    let sperner_bound = Rational::new(
        num_integer::binomial(BigInt::from(n_f), BigInt::from(n_f / 2)),
        BigInt::from(1u8) << n_f,
    );
    Ok(LtfApproximation {
        distance: f.distance(&gf)?,
        g,
        n_f,
        sperner_bound,
        bound: (2.0 / (std::f64::consts::PI * n_f as f64)).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtfRatioCheck {
    pub ratio: f64,
    pub bound: f64,
    pub violates: bool,
}

/// Ratio of the largest to the second-largest coefficient magnitude
/// against `√(2n ln 2n) + 1`.
pub fn ltf_ratio_check(spec: &LtfSpec) -> Result<LtfRatioCheck> {
    let n = spec.n();
    if n < 2 {
        return Err(Error::Precondition("the ratio test needs at least two variables".into()));
    }
    let f = BooleanFunction::from_ltf(spec)?;
    let irrelevant: Vec<usize> =
        influences(&f).iter().enumerate().filter(|(_, inf)| inf.is_zero()).map(|(i, _)| i + 1).collect();
    if !irrelevant.is_empty() {
        return Err(Error::Precondition(format!("the function does not depend on coordinates {irrelevant:?}")));
    }
    let mut mags: Vec<i64> = spec.a.iter().map(|a| a.abs()).collect();
    mags.sort_unstable_by(|a, b| b.cmp(a));
    let ratio = mags[0] as f64 / mags[1] as f64;
    let two_n = 2.0 * n as f64;
    let bound = (two_n * two_n.ln()).sqrt() + 1.0;
    Ok(LtfRatioCheck { ratio, bound, violates: ratio >= bound })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChowGapBound {
    #[serde(with = "rational::serde_rational")]
    pub dist: Rational,
    #[serde(with = "rational::serde_rational")]
    pub chow_sq: Rational,
    #[serde(with = "rational::serde_rational")]
    pub gap: Rational,
    pub bound_ok: bool,
}

fn depends_on_all(f: &BooleanFunction) -> bool {
    influences(f).iter().all(|i| !i.is_zero())
}

/// Checks `Dist(f, g) ≤ d²_Chow(f, g) / (2 Gap[f])`. Every failed
/// precondition is listed in the error.
pub fn chow_gap_bound(f: &BooleanFunction, g: &BooleanFunction) -> Result<ChowGapBound> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch(f.n(), g.n()));
    }
    let mut failed = Vec::new();
    if !f.is_balanced() {
        failed.push("f is not balanced");
    }
    if !g.is_balanced() {
        failed.push("g is not balanced");
    }
    if !classify(f).sst {
        failed.push("f is not SST");
    }
    if !classify(g).lcsp {
        failed.push("g is not LCSP");
    }
    if !depends_on_all(f) {
        failed.push("f does not depend on every variable");
    }
    if !depends_on_all(g) {
        failed.push("g does not depend on every variable");
    }
    let gap = spectrum::wht(f).gap();
    if gap.is_zero() {
        failed.push("Gap[f] = 0");
    }
    if !failed.is_empty() {
        return Err(Error::Precondition(failed.join("; ")));
    }
    let dist = f.distance(g)?;
    let (chow_sq, _) = spectrum::chow_distance(f, g)?;
    let bound_ok = dist <= &chow_sq / (&gap * BigInt::from(2));
    Ok(ChowGapBound { dist, chow_sq, gap, bound_ok })
}
