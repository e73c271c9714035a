//! The noise operator, the optimal predictor and stability quantities,
//! all evaluated exactly at rational correlation `ρ = p/q`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::func::BooleanFunction;
use crate::rational::{self, Rational};
use crate::spectrum::{self, ScaledSpectrum};
use crate::{Error, Result};

/// `N_v = q^n · 2^n · T_ρ f(v)` for every input, with `ρ = p/q`.
///
/// One transform of the damped spectrum `F_m p^{|m|} q^{n-|m|}`. The
/// i128 path is taken whenever the magnitude bound `4^n q^n` fits.
#[derive(Debug, Clone)]
pub enum NoiseNumerators {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl NoiseNumerators {
    pub fn compute(spec: &ScaledSpectrum, rho: &Rational) -> Self {
        let n = spec.n;
        let (p, q) = (rho.numer(), rho.denom());
        let bits = 2 * n as u64 + n as u64 * q.bits();
        if bits < 120 {
            let (p, q) = (p.to_i128().unwrap(), q.to_i128().unwrap());
            let pp: Vec<i128> = (0..=n).map(|k| p.pow(k as u32) * q.pow((n - k) as u32)).collect();
            let mut a: Vec<i128> = spec
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, &c)| c as i128 * pp[m.count_ones() as usize])
                .collect();
            fwht_i128(&mut a);
            NoiseNumerators::Small(a)
        } else {
            let pp: Vec<BigInt> =
                (0..=n).map(|k| num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), n - k)).collect();
            let mut a: Vec<BigInt> = spec
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, &c)| BigInt::from(c) * &pp[m.count_ones() as usize])
                .collect();
            fwht_big(&mut a);
            NoiseNumerators::Big(a)
        }
    }

    pub fn len(&self) -> usize {
        match self {
            NoiseNumerators::Small(v) => v.len(),
            NoiseNumerators::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sign(&self, v: usize) -> Ordering {
        match self {
            NoiseNumerators::Small(a) => a[v].cmp(&0),
            NoiseNumerators::Big(a) => a[v].cmp(&BigInt::zero()),
        }
    }

    pub fn get(&self, v: usize) -> BigInt {
        match self {
            NoiseNumerators::Small(a) => BigInt::from(a[v]),
            NoiseNumerators::Big(a) => a[v].clone(),
        }
    }

    pub fn abs_sum(&self) -> BigInt {
        match self {
            NoiseNumerators::Small(a) => a.iter().map(|x| BigInt::from(x.unsigned_abs())).sum(),
            NoiseNumerators::Big(a) => a.iter().map(|x| x.abs()).sum(),
        }
    }
}

fn fwht_i128(a: &mut [i128]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
}

fn fwht_big(a: &mut [BigInt]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let d = &*x - &*y;
                *x += &*y;
                *y = d;
            }
        }
        h *= 2;
    }
}

/// Common denominator `2^n q^n` of the noise numerators.
fn noise_denominator(n: usize, rho: &Rational) -> BigInt {
    (BigInt::one() << n) * num_traits::pow(rho.denom().clone(), n)
}

/// `T_ρ f` at every input.
pub fn noise_operator(f: &BooleanFunction, rho: &Rational) -> Result<Vec<Rational>> {
    rational::check_unit(rho, "rho")?;
    let num = NoiseNumerators::compute(&spectrum::wht(f), rho);
    let den = noise_denominator(f.n(), rho);
    Ok((0..num.len()).map(|v| Rational::new(num.get(v), den.clone())).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieRule {
    /// `sgn 0 = 0`.
    Zero,
    /// A tie keeps the value of `f`.
    Keep,
}

/// A function into `{-1, 0, +1}` over the same index convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryFunction {
    pub n: usize,
    pub values: Vec<i8>,
}

impl TernaryFunction {
    pub fn count(&self, value: i8) -> usize {
        self.values.iter().filter(|&&x| x == value).count()
    }

    pub fn is_balanced(&self) -> bool {
        self.count(1) == self.count(-1) && self.count(0) == 0
    }

    pub fn is_monotone(&self) -> bool {
        (0..self.n).all(|j| {
            let bit = 1usize << j;
            (0..self.values.len()).filter(|u| u & bit == 0).all(|u| self.values[u] >= self.values[u | bit])
        })
    }

    pub fn is_odd(&self) -> bool {
        let full = self.values.len() - 1;
        (0..self.values.len()).all(|u| self.values[u ^ full] == -self.values[u])
    }

    pub fn is_even(&self) -> bool {
        let full = self.values.len() - 1;
        (0..self.values.len()).all(|u| self.values[u ^ full] == self.values[u])
    }

    pub fn is_symmetric(&self) -> bool {
        let mut by_weight: Vec<Option<i8>> = vec![None; self.n + 1];
        (0..self.values.len()).all(|u| *by_weight[u.count_ones() as usize].get_or_insert(self.values[u]) == self.values[u])
    }

    /// The Boolean function, if no entry is zero.
    pub fn to_boolean(&self) -> Option<BooleanFunction> {
        if self.values.contains(&0) {
            return None;
        }
        BooleanFunction::from_fn(self.n, |u| self.values[u] > 0).ok()
    }
}

fn sign_i8(o: Ordering) -> i8 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// `sgn T_ρ f` with the chosen tie rule.
pub fn optimal_predictor(f: &BooleanFunction, rho: &Rational, tie: TieRule) -> Result<TernaryFunction> {
    rational::check_unit(rho, "rho")?;
    Ok(predictor_from(f, &spectrum::wht(f), rho, tie))
}

pub(crate) fn predictor_from(f: &BooleanFunction, spec: &ScaledSpectrum, rho: &Rational, tie: TieRule) -> TernaryFunction {
    let num = NoiseNumerators::compute(spec, rho);
    let values = (0..num.len())
        .map(|v| match (sign_i8(num.sign(v)), tie) {
            (0, TieRule::Keep) => f.value(v),
            (s, _) => s,
        })
        .collect();
    TernaryFunction { n: f.n(), values }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    #[serde(with = "rational::serde_rational")]
    pub rho: Rational,
    #[serde(with = "rational::serde_rational")]
    pub stab: Rational,
    #[serde(with = "rational::serde_rational")]
    pub stab_star: Rational,
    #[serde(with = "rational::serde_rational")]
    pub ns: Rational,
    #[serde(with = "rational::serde_rational")]
    pub ns_star: Rational,
}

/// `Stab_ρ[f] = Σ_S ρ^{|S|} f̂_S²` from the spectrum.
pub fn stability(spec: &ScaledSpectrum, rho: &Rational) -> Rational {
    let n = spec.n;
    let (p, q) = (rho.numer(), rho.denom());
    let num: BigInt = spec
        .scaled_weights()
        .into_iter()
        .enumerate()
        .map(|(k, w)| BigInt::from(w) * num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), n - k))
        .sum();
    Rational::new(num, (BigInt::one() << (2 * n)) * num_traits::pow(q.clone(), n))
}

/// `Stab*_ρ[f] = E|T_ρ f|`.
pub fn strong_stability(spec: &ScaledSpectrum, rho: &Rational) -> Rational {
    let num = NoiseNumerators::compute(spec, rho);
    let n = spec.n;
    Rational::new(num.abs_sum(), noise_denominator(n, rho) << n)
}

pub fn stability_report(f: &BooleanFunction, rho: &Rational) -> Result<StabilityReport> {
    rational::check_unit(rho, "rho")?;
    let spec = spectrum::wht(f);
    let stab = stability(&spec, rho);
    let stab_star = strong_stability(&spec, rho);
    let half = rational::rat(1, 2);
    Ok(StabilityReport {
        rho: rho.clone(),
        ns: (Rational::one() - &stab) * &half,
        ns_star: (Rational::one() - &stab_star) * &half,
        stab,
        stab_star,
    })
}

/// How tied inputs count when measuring the distance to the predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieCount {
    Agreement,
    Disagreement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Closeness {
    #[serde(with = "rational::serde_rational")]
    pub distance: Rational,
    #[serde(with = "rational::serde_rational")]
    pub bound: Rational,
}

pub fn closeness_to_sp(f: &BooleanFunction, rho: &Rational) -> Result<Closeness> {
    closeness_to_sp_with(f, rho, TieCount::Agreement)
}

pub fn closeness_to_sp_with(f: &BooleanFunction, rho: &Rational, ties: TieCount) -> Result<Closeness> {
    rational::check_unit(rho, "rho")?;
    let spec = spectrum::wht(f);
    let pred = predictor_from(f, &spec, rho, TieRule::Zero);
    let differ = pred
        .values
        .iter()
        .zip(f.values())
        .filter(|&(&s, fv)| if s == 0 { ties == TieCount::Disagreement } else { s != fv })
        .count();
    Ok(Closeness {
        distance: Rational::new(BigInt::from(differ), BigInt::from(f.len())),
        bound: Rational::one() - stability(&spec, rho),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionGain {
    #[serde(with = "rational::serde_rational")]
    pub ratio: Rational,
    /// `E|Σ_i f̂_i Y_i|`.
    #[serde(with = "rational::serde_rational")]
    pub l1_level1: Rational,
    #[serde(with = "rational::serde_rational")]
    pub w1: Rational,
    /// `W¹/2 ≤ l1² ≤ W¹`; absent when `W¹ = 0`.
    pub khintchine_ok: Option<bool>,
}

pub fn prediction_gain(f: &BooleanFunction, rho: &Rational) -> Result<PredictionGain> {
    rational::check_unit(rho, "rho")?;
    if rho.is_zero() {
        return Err(Error::InvalidArgument("prediction gain needs rho > 0".into()));
    }
    let spec = spectrum::wht(f);
    let stab = stability(&spec, rho);
    if stab.is_zero() {
        return Err(Error::DivisionByZero(format!("Stab_rho[f] = 0 at rho = {rho}")));
    }
    let ratio = strong_stability(&spec, rho) / stab;
    let n = f.n();
    let abs: i128 = spec.level_one_form().iter().map(|&x| (x as i128).abs()).sum();
    let l1_level1 = Rational::new(BigInt::from(abs), BigInt::one() << (2 * n));
    let w1 = spec.weights()[1].clone();
    let khintchine_ok = (!w1.is_zero()).then(|| {
        let sq = &l1_level1 * &l1_level1;
        &w1 / BigInt::from(2) <= sq && sq <= w1
    });
    Ok(PredictionGain { ratio, l1_level1, w1, khintchine_ok })
}
