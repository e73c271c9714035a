//! Sufficient thresholds and necessary conditions for ρ-SP.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::func::BooleanFunction;
use crate::noise::stability;
use crate::poly::{isolate_roots, IntPoly, RealRoot};
use crate::rational::{self, Rational};
use crate::spectrum;
use crate::Result;

use super::region::{default_epsilon, Endpoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficientThresholds {
    /// Root of `(1+ρ)^n = 2^{n-1}`.
    pub no_flip: Endpoint,
    /// `1 - 1/(Deg·min{Deg, Σ|f̂_S|})`, zero for constants.
    #[serde(with = "rational::serde_rational")]
    pub degree_bound: Rational,
    /// Root of `Σ_{S ∈ supp f̂} ρ^{|S|} = s - 1`; absent when the left side
    /// already exceeds `s - 1` at `ρ = 0`.
    pub sparsity_bound: Option<Endpoint>,
}

/// The unique root in `[0, 1)` of a polynomial that is `≤ 0` at 0 and `> 0` at 1.
fn unit_root(p: &IntPoly, eps: &Rational) -> Option<Endpoint> {
    match p.sign_at(&Rational::zero()) {
        Ordering::Greater => None,
        Ordering::Equal => Some(Endpoint::exact(Rational::zero())),
        Ordering::Less => {
            let sf = p.squarefree();
            let mut roots = isolate_roots(&sf, &Rational::zero(), &Rational::one());
            let mut r = roots.pop()?;
            r.refine(eps);
            Some(match &r {
                RealRoot::Exact(x) => Endpoint::exact(x.clone()),
                RealRoot::Isolated { lo, hi, .. } => {
                    Endpoint::Isolated { lo: lo.clone(), hi: hi.clone(), approx: r.approx() }
                }
            })
        }
    }
}

/// `(1+ρ)^n - 2^{n-1}`.
pub fn no_flip_polynomial(n: usize) -> IntPoly {
    let mut c: Vec<BigInt> = (0..=n).map(|k| num_integer::binomial(BigInt::from(n), BigInt::from(k))).collect();
    c[0] -= BigInt::one() << (n - 1);
    IntPoly::new(c)
}

pub fn sufficient_thresholds(f: &BooleanFunction) -> SufficientThresholds {
    sufficient_thresholds_with(f, &default_epsilon())
}

pub fn sufficient_thresholds_with(f: &BooleanFunction, eps: &Rational) -> SufficientThresholds {
    let n = f.n();
    let no_flip = unit_root(&no_flip_polynomial(n), eps).expect("(1+ρ)^n - 2^{n-1} changes sign on [0,1]");
    let spec = spectrum::wht(f);
    let deg = spec.degree();
    let degree_bound = if deg == 0 {
        Rational::zero()
    } else {
        let d = Rational::from_integer(BigInt::from(deg));
        let m = std::cmp::min(d.clone(), spec.spectral_norm());
        Rational::one() - Rational::one() / (d * m)
    };
    let mut h = vec![BigInt::zero(); n + 1];
    let mut s = 0i64;
    for (m, &c) in spec.coeffs.iter().enumerate() {
        if c != 0 {
            h[m.count_ones() as usize] += 1;
            s += 1;
        }
    }
    h[0] -= s - 1;
    let sparsity_bound = unit_root(&IntPoly::new(h), eps);
    SufficientThresholds { no_flip, degree_bound, sparsity_bound }
}

/// Outcome of a test that may fall inside an enclosure gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessaryChecks {
    pub basic_ok: bool,
    /// `None` when the hypercontractive test is indeterminate.
    pub hyper_ok: Option<bool>,
    pub hyper: Verdict,
    #[serde(with = "rational::serde_rational")]
    pub stab: Rational,
    #[serde(with = "rational::serde_rational")]
    pub stab_rho_sq: Rational,
    /// `max_S ρ^{|S|} |f̂_S|`.
    #[serde(with = "rational::serde_rational")]
    pub max_term: Rational,
    pub degree: usize,
    #[serde(with = "rational::serde_rational")]
    pub e_lower: Rational,
    #[serde(with = "rational::serde_rational")]
    pub e_upper: Rational,
}

/// Rational enclosure `lo ≤ e ≤ hi` from the partial sum to `1/terms!`
/// and the tail bound `1/(terms!·terms)`.
pub fn e_bracket(terms: u32) -> (Rational, Rational) {
    let mut sum = Rational::zero();
    let mut fact = BigInt::one();
    for j in 0..=terms {
        if j > 0 {
            fact *= j;
        }
        sum += Rational::new(BigInt::one(), fact.clone());
    }
    let tail = Rational::new(BigInt::one(), fact * terms);
    let hi = &sum + tail;
    (sum, hi)
}

const E_TERMS: u32 = 25;

pub fn necessary_checks(f: &BooleanFunction, rho: &Rational) -> Result<NecessaryChecks> {
    rational::check_unit(rho, "rho")?;
    let spec = spectrum::wht(f);
    let stab = stability(&spec, rho);
    let rho_sq = rho * rho;
    let stab_rho_sq = stability(&spec, &rho_sq);
    let scale = Rational::from_integer(BigInt::from(spec.scale()));
    let max_term = spec
        .coeffs
        .iter()
        .enumerate()
        .map(|(m, &c)| rational::pow(rho, m.count_ones() as usize) * Rational::from_integer(BigInt::from(c).abs()))
        .max()
        .unwrap_or_else(Rational::zero)
        / scale;
    let basic_ok = stab >= max_term;

    // Stab² ≥ e^{-2k} Stab_{ρ²}  ⇔  e^{2k} Stab² ≥ Stab_{ρ²}
    let k = spec.degree();
    let (e_lower, e_upper) = e_bracket(E_TERMS);
    let sq = &stab * &stab;
    let low = rational::pow(&e_lower, 2 * k) * &sq;
    let high = rational::pow(&e_upper, 2 * k) * &sq;
    let hyper = if low >= stab_rho_sq {
        Verdict::Holds
    } else if high < stab_rho_sq {
        Verdict::Fails
    } else {
        Verdict::Indeterminate
    };
    let hyper_ok = match hyper {
        Verdict::Holds => Some(true),
        Verdict::Fails => Some(false),
        Verdict::Indeterminate => None,
    };
    Ok(NecessaryChecks { basic_ok, hyper_ok, hyper, stab, stab_rho_sq, max_term, degree: k, e_lower, e_upper })
}
