//! Exact self-predictability decisions.
//!
//! At input `v` the scaled noise value `2^n T_ρ f(y_v)` is the integer
//! polynomial `P_v(ρ) = Σ_k c_k(v) ρ^k` with
//! `c_k(v) = Σ_{|m|=k} F_m (-1)^{|v ∧ m|}`. `f` is ρ-SP at `v` exactly when
//! `f(v) P_v(ρ) ≥ 0`.

pub mod classify;
pub mod conditions;
pub mod ltf;
pub mod region;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::func::{character_sign, BooleanFunction};
use crate::noise::NoiseNumerators;
use crate::poly::IntPoly;
use crate::rational::{self, Rational};
use crate::spectrum::{self, fwht_in_place, ScaledSpectrum};
use crate::{Error, Result};

pub use classify::{classify, classify_with, SpClassification};
pub use conditions::{
    necessary_checks, sufficient_thresholds, sufficient_thresholds_with, NecessaryChecks, SufficientThresholds,
};
pub use ltf::{chow_gap_bound, ltf_approximation, ltf_ratio_check};
pub use region::{sp_region, Endpoint, SpInterval, SpRegion};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpPointPolynomial {
    pub v: usize,
    /// `c_0, ..., c_n`.
    pub c: Vec<i64>,
}

impl SpPointPolynomial {
    /// `q^n P_v(p/q)`.
    pub fn eval_scaled(&self, rho: &Rational) -> BigInt {
        let (p, q) = (rho.numer(), rho.denom());
        let n = self.c.len() - 1;
        self.c
            .iter()
            .enumerate()
            .map(|(k, &ck)| BigInt::from(ck) * num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), n - k))
            .sum()
    }

    pub fn sign_at(&self, rho: &Rational) -> Ordering {
        if let (Some(p), Some(q)) = (rho.numer().to_i128(), rho.denom().to_i128()) {
            if let Some(s) = sign_i128(&self.c, p, q) {
                return s;
            }
        }
        self.eval_scaled(rho).cmp(&BigInt::zero())
    }

    pub fn to_poly(&self) -> IntPoly {
        IntPoly::from_i64(&self.c)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != 0)
    }
}

/// Homogeneous Horner in checked i128 arithmetic; `None` on overflow.
fn sign_i128(c: &[i64], p: i128, q: i128) -> Option<Ordering> {
    let mut acc: i128 = *c.last()? as i128;
    let mut qk: i128 = 1;
    for &ck in c.iter().rev().skip(1) {
        qk = qk.checked_mul(q)?;
        acc = acc.checked_mul(p)?.checked_add((ck as i128).checked_mul(qk)?)?;
    }
    Some(acc.cmp(&0))
}

/// `c_k(v)` for every level `k` and input `v`, one inverse transform per level.
#[derive(Debug, Clone)]
pub struct LevelTable {
    pub n: usize,
    levels: Vec<Vec<i64>>,
}

impl LevelTable {
    pub fn new(spec: &ScaledSpectrum) -> Self {
        let n = spec.n;
        let levels = (0..=n)
            .map(|k| {
                let mut a: Vec<i64> = spec
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(m, &c)| if m.count_ones() as usize == k { c } else { 0 })
                    .collect();
                if a.iter().any(|&x| x != 0) {
                    fwht_in_place(&mut a);
                }
                a
            })
            .collect();
        LevelTable { n, levels }
    }

    pub fn level(&self, k: usize) -> &[i64] {
        &self.levels[k]
    }

    pub fn coeffs(&self, v: usize) -> Vec<i64> {
        self.levels.iter().map(|l| l[v]).collect()
    }

    pub fn point(&self, v: usize) -> SpPointPolynomial {
        SpPointPolynomial { v, c: self.coeffs(v) }
    }

    /// Distinct sign-adjusted coefficient vectors `f(v)·c(v)`, each with the
    /// least input index that produces it.
    pub fn adjusted_keys(&self, f: &BooleanFunction) -> BTreeMap<Vec<i64>, usize> {
        let mut keys = BTreeMap::new();
        for v in 0..f.len() {
            let s = f.value(v) as i64;
            let key: Vec<i64> = self.levels.iter().map(|l| s * l[v]).collect();
            keys.entry(key).or_insert(v);
        }
        keys
    }
}

/// Coefficients at a single input, straight from the spectrum.
fn point_coeffs(spec: &ScaledSpectrum, v: usize) -> Vec<i64> {
    let mut c = vec![0i64; spec.n + 1];
    for (m, &fm) in spec.coeffs.iter().enumerate() {
        if fm != 0 {
            c[m.count_ones() as usize] += fm * character_sign(v, m);
        }
    }
    c
}

fn check_index(f: &BooleanFunction, v: usize) -> Result<()> {
    if v >= f.len() {
        return Err(Error::InvalidArgument(format!("input index {v} outside 0..{}", f.len())));
    }
    Ok(())
}

pub fn sp_polynomial(f: &BooleanFunction, v: usize) -> Result<SpPointPolynomial> {
    check_index(f, v)?;
    Ok(SpPointPolynomial { v, c: point_coeffs(&spectrum::wht(f), v) })
}

pub fn sp_polynomials(f: &BooleanFunction) -> Vec<SpPointPolynomial> {
    let table = LevelTable::new(&spectrum::wht(f));
    (0..f.len()).map(|v| table.point(v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpAt {
    pub sp: bool,
    pub tie: bool,
}

pub fn is_sp_at(f: &BooleanFunction, rho: &Rational, v: usize) -> Result<SpAt> {
    rational::check_unit(rho, "rho")?;
    let p = sp_polynomial(f, v)?;
    Ok(sp_at(f.value(v), p.sign_at(rho)))
}

fn sp_at(fv: i8, s: Ordering) -> SpAt {
    let signed = if fv > 0 { s } else { s.reverse() };
    SpAt { sp: signed != Ordering::Less, tie: s == Ordering::Equal }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpDecision {
    pub sp: bool,
    /// Least failing input index among those checked.
    pub witness: Option<usize>,
}

/// Decides ρ-SP. With `fast_path` only the dominating boundary points of a
/// monotone `f` are examined, and the witness is the least failing one of them.
pub fn is_sp(f: &BooleanFunction, rho: &Rational, fast_path: bool) -> Result<SpDecision> {
    rational::check_unit(rho, "rho")?;
    let spec = spectrum::wht(f);
    if fast_path {
        let points = f.dominating_boundary_points()?;
        let witness = points.into_iter().find(|&v| {
            let p = SpPointPolynomial { v, c: point_coeffs(&spec, v) };
            !sp_at(f.value(v), p.sign_at(rho)).sp
        });
        return Ok(SpDecision { sp: witness.is_none(), witness });
    }
    Ok(is_sp_with(f, &spec, rho))
}

pub(crate) fn is_sp_with(f: &BooleanFunction, spec: &ScaledSpectrum, rho: &Rational) -> SpDecision {
    let num = NoiseNumerators::compute(spec, rho);
    let witness = (0..f.len()).find(|&v| !sp_at(f.value(v), num.sign(v)).sp);
    SpDecision { sp: witness.is_none(), witness }
}
