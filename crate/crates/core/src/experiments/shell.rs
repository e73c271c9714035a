//! Hamming-shell biases and the bad-point test.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::func::BooleanFunction;
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellBias {
    pub v: usize,
    pub d: usize,
    /// Fraction of the radius-`d` shell where `f` differs from `f(v)`.
    #[serde(with = "rational::serde_rational")]
    pub beta: Rational,
    pub disagree: u64,
    pub shell_size: u64,
}

/// Masks of popcount `d` below `2^n`, in increasing order.
pub(crate) fn shell_masks(n: usize, d: usize) -> impl Iterator<Item = usize> {
    let end = 1usize << n;
    let first = (1usize << d) - 1;
    std::iter::successors(Some(first), move |&m| {
        // next integer with the same popcount
        let c = m & m.wrapping_neg();
        let r = m + c;
        let next = (((r ^ m) >> 2) / c) | r;
        (next < end).then_some(next)
    })
    .take_while(move |&m| m < end && d > 0)
}

fn check_point(f: &BooleanFunction, v: usize) -> Result<()> {
    if v >= f.len() {
        return Err(Error::InvalidArgument(format!("input index {v} outside 0..{}", f.len())));
    }
    Ok(())
}

pub fn shell_bias(f: &BooleanFunction, v: usize, d: usize) -> Result<ShellBias> {
    check_point(f, v)?;
    if d == 0 || d > f.n() {
        return Err(Error::InvalidArgument(format!("radius {d} outside 1..={}", f.n())));
    }
    let own = f.is_plus(v);
    let (mut disagree, mut shell_size) = (0u64, 0u64);
    for m in shell_masks(f.n(), d) {
        shell_size += 1;
        if f.is_plus(v ^ m) != own {
            disagree += 1;
        }
    }
    Ok(ShellBias {
        v,
        d,
        beta: Rational::new(BigInt::from(disagree), BigInt::from(shell_size)),
        disagree,
        shell_size,
    })
}

/// `⌈log₂ n⌉`, at least 1.
pub fn default_depth(n: usize) -> usize {
    (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPoint {
    pub bad: bool,
    pub ell: usize,
    #[serde(with = "rational::serde_rational_vec")]
    pub betas: Vec<Rational>,
}

/// `v` is bad when `β₁ ≥ 1 - η` and `β_d ≥ 1/2` for `2 ≤ d ≤ ℓ`.
pub fn bad_point_detect(f: &BooleanFunction, v: usize, eta: &Rational, ell: Option<usize>) -> Result<BadPoint> {
    if *eta < Rational::zero() || *eta >= rational::rat(1, 2) {
        return Err(Error::InvalidArgument(format!("eta = {eta} outside [0, 1/2)")));
    }
    let ell = ell.unwrap_or_else(|| default_depth(f.n()).min(f.n()));
    if ell == 0 || ell > f.n() {
        return Err(Error::InvalidArgument(format!("depth {ell} outside 1..={}", f.n())));
    }
    let betas = (1..=ell).map(|d| shell_bias(f, v, d).map(|s| s.beta)).collect::<Result<Vec<_>>>()?;
    let half = rational::rat(1, 2);
    let bad = betas[0] >= Rational::one() - eta && betas[1..].iter().all(|b| *b >= half);
    Ok(BadPoint { bad, ell, betas })
}

/// Lower bound on `P[f(X) ≠ f(Y) | Y = v]` at crossover `δ` that every bad
/// point satisfies: `(1-η) n δ (1-δ)^{n-1} + ½ Σ_{d=2}^{ℓ} C(n,d) δ^d (1-δ)^{n-d}`.
/// When it exceeds `1/2`, a bad `v` is not `(1-2δ)`-SP.
pub fn bad_point_disagreement_bound(n: usize, delta: &Rational, eta: &Rational, ell: usize) -> Rational {
    let one = Rational::one();
    let comp = &one - delta;
    let half = rational::rat(1, 2);
    (1..=ell.min(n))
        .map(|d| {
            let binom = Rational::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(d)));
            let w = if d == 1 { &one - eta } else { half.clone() };
            w * binom * rational::pow(delta, d) * rational::pow(&comp, n - d)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn masks_enumerate_shells() {
        for n in 1..=8 {
            for d in 1..=n {
                let got: Vec<usize> = shell_masks(n, d).collect();
                let want: Vec<usize> = (0..1usize << n).filter(|m| m.count_ones() as usize == d).collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn shell_examples() {
        let c = BooleanFunction::constant(4, 1).unwrap();
        for v in 0..16 {
            for d in 1..=4 {
                assert_eq!(shell_bias(&c, v, d).unwrap().beta, int(0));
            }
        }
        let par = BooleanFunction::character(5, 0b11111).unwrap();
        assert_eq!(shell_bias(&par, 7, 1).unwrap().beta, int(1));
        assert_eq!(shell_bias(&par, 7, 2).unwrap().beta, int(0));
        let maj = BooleanFunction::majority(3).unwrap();
        assert_eq!(shell_bias(&maj, 0, 1).unwrap().beta, int(0));
        assert_eq!(shell_bias(&maj, 0, 2).unwrap().beta, int(1));
        let s = shell_bias(&maj, 1, 2).unwrap();
        assert_eq!((s.disagree, s.shell_size), (1, 3));
        assert!(shell_bias(&maj, 0, 0).is_err());
        assert!(shell_bias(&maj, 0, 4).is_err());
    }

    #[test]
    fn bad_points() {
        let maj = BooleanFunction::majority(3).unwrap();
        assert!(!bad_point_detect(&maj, 0, &rat(1, 4), None).unwrap().bad);
        // isolated +1 inside a sea of -1
        let f = BooleanFunction::from_fn(4, |u| u == 5).unwrap();
        for eta in [int(0), rat(1, 3)] {
            for ell in 1..=4 {
                assert!(bad_point_detect(&f, 5, &eta, Some(ell)).unwrap().bad);
            }
        }
        assert_eq!(default_depth(1), 1);
        assert_eq!(default_depth(8), 3);
        assert_eq!(default_depth(9), 4);
        assert!(bad_point_detect(&maj, 0, &rat(1, 2), None).is_err());
    }

    #[test]
    fn depth_one_matches_friendly_neighborhood() {
        for seed in 0..20 {
            let f = crate::constructs::random_function(5, seed).unwrap();
            let friendly = f.friendly_neighborhood(1).unwrap();
            for v in 0..f.len() {
                let b = bad_point_detect(&f, v, &int(0), Some(1)).unwrap();
                assert_eq!(b.bad, b.betas[0] == int(1));
                assert_eq!(b.bad, !friendly[v]);
            }
        }
    }

    #[test]
    fn disagreement_bound_grows_with_n() {
        let alpha = int(3);
        let eta = rat(1, 10);
        let at = |n: usize| {
            let delta = &alpha / Rational::from_integer(BigInt::from(n));
            bad_point_disagreement_bound(n, &delta, &eta, default_depth(n).max(3))
        };
        assert!(at(256) > rat(1, 2));
        assert!(at(8) < at(256));
    }

    #[test]
    fn bad_points_are_not_sp_where_the_bound_exceeds_half() {
        let n = 10;
        let alpha = rat(3, 2);
        let eta = rat(1, 10);
        let delta = &alpha / int(n as i64);
        let rho = int(1) - &delta * int(2);
        let ell = default_depth(n);
        assert!(bad_point_disagreement_bound(n, &delta, &eta, ell) > rat(1, 2));
        let mut checked = 0;
        for seed in 0..12u64 {
            let g = crate::constructs::random_function(n, seed).unwrap();
            let v = (seed as usize * 97) % (1 << n);
            // flip the radius-2 ball around v and leave outer shells random
            let f = BooleanFunction::from_fn(n, |u| {
                let dist = (u ^ v).count_ones();
                if (1..=2).contains(&dist) {
                    !g.is_plus(v)
                } else {
                    g.is_plus(u)
                }
            })
            .unwrap();
            let b = bad_point_detect(&f, v, &eta, Some(ell)).unwrap();
            if b.bad {
                checked += 1;
                assert!(!crate::sp::is_sp_at(&f, &rho, v).unwrap().sp, "seed {seed}");
            }
        }
        assert!(checked > 0);
    }
}
