//! Constants governing the sharp threshold at high correlation.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Binary entropy in nats.
pub fn binary_entropy(t: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    term(t) + term(1.0 - t)
}

/// Binary divergence `D(p‖q)` in nats.
pub fn binary_divergence(p: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| if a <= 0.0 { 0.0 } else { a * (a / b).ln() };
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// `½ ln(1/(δ² + (1-δ)²))`.
pub fn crossover_level(delta: f64) -> f64 {
    0.5 * (1.0 / (delta * delta + (1.0 - delta) * (1.0 - delta))).ln()
}

/// `(α-1)/(2α)`.
pub fn eta_alpha(alpha: &Rational) -> Result<Rational> {
    if *alpha <= Rational::one() {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must exceed 1")));
    }
    Ok((alpha - Rational::one()) / (alpha * BigInt::from(2)))
}

const TOL: f64 = 1e-12;

/// Least `η > δ` with `D(η‖δ) > ½ ln(1/(δ²+(1-δ)²))`, or `None` when that
/// level is not below `ln(1/(1-δ))`.
pub fn eta_delta(delta: f64) -> Option<f64> {
    let c = crossover_level(delta);
    if c.partial_cmp(&-(1.0 - delta).ln()) != Some(std::cmp::Ordering::Less) {
        return None;
    }
    let (mut lo, mut hi) = (delta, 1.0);
    while hi - lo > TOL {
        let mid = 0.5 * (lo + hi);
        if binary_divergence(mid, delta) <= c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Supremum of `δ ∈ (0, 1/2)` with `η_δ < 1/4`.
pub fn delta_max() -> f64 {
    let (mut lo, mut hi) = (1e-6, 0.5 - 1e-9);
    while hi - lo > TOL {
        let mid = 0.5 * (lo + hi);
        if eta_delta(mid).is_some_and(|e| e < 0.25) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConstants {
    #[serde(with = "rational::serde_rational_opt")]
    pub alpha: Option<Rational>,
    #[serde(with = "rational::serde_rational_opt")]
    pub eta_alpha: Option<Rational>,
    #[serde(with = "rational::serde_rational_opt")]
    pub delta: Option<Rational>,
    /// Root of the divergence equation, whenever the level is feasible.
    pub eta_delta_root: Option<f64>,
    /// `η_δ`, defined for `δ < δ_max` where `η_δ < 1/4`.
    pub eta_delta: Option<f64>,
    pub delta_max: f64,
}

pub fn threshold_constants(alpha: Option<&Rational>, delta: Option<&Rational>) -> Result<ThresholdConstants> {
    let eta_a = alpha.map(eta_alpha).transpose()?;
    let mut root = None;
    if let Some(d) = delta {
        if *d <= Rational::zero() || *d >= rational::rat(1, 2) {
            return Err(Error::InvalidArgument(format!("delta = {d} outside (0, 1/2)")));
        }
        root = eta_delta(rational::to_f64(d));
    }
    Ok(ThresholdConstants {
        alpha: alpha.cloned(),
        eta_alpha: eta_a,
        delta: delta.cloned(),
        eta_delta_root: root,
        eta_delta: root.filter(|&e| e < 0.25),
        delta_max: delta_max(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn eta_alpha_values() {
        assert_eq!(eta_alpha(&int(2)).unwrap(), rat(1, 4));
        assert_eq!(eta_alpha(&int(3)).unwrap(), rat(1, 3));
        assert!(eta_alpha(&int(1)).is_err());
        let near_one = eta_alpha(&(int(1) + rat(1, 10_000_000))).unwrap();
        assert!(rational::to_f64(&near_one) < 1e-6);
        let huge = eta_alpha(&int(10_000_000)).unwrap();
        assert!((rational::to_f64(&huge) - 0.5).abs() < 1e-6);
        let mut prev = Rational::zero();
        for k in 3..50 {
            let e = eta_alpha(&rat(k, 2)).unwrap();
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn eta_delta_solves_the_divergence_equation() {
        for delta in [0.01, 0.05, 0.09, 0.2, 0.4] {
            let e = eta_delta(delta).unwrap();
            assert!(e > delta);
            assert!((binary_divergence(e, delta) - crossover_level(delta)).abs() < 1e-8);
        }
    }

    #[test]
    fn entropy_and_divergence() {
        assert!((binary_entropy(0.5) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_divergence(0.3, 0.3), 0.0);
        assert!((binary_divergence(0.0, 0.25) + (0.75f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn delta_max_value() {
        let d = delta_max();
        assert!((d - 0.0974).abs() < 1e-3, "{d}");
        let t = threshold_constants(None, Some(&rat(9, 100))).unwrap();
        assert!(t.eta_delta.is_some());
        let t = threshold_constants(None, Some(&rat(1, 10))).unwrap();
        assert!(t.eta_delta.is_none());
        assert!(t.eta_delta_root.unwrap() > 0.25);
        assert!(threshold_constants(None, Some(&rat(1, 2))).is_err());
    }
}
