//! Independent oracles shared by the integration suites.
//!
//! Nothing here goes through the Walsh–Hadamard transform: noise values are
//! summed directly over the cube, point polynomials are expanded from the
//! binomial kernel, and region boundaries come from float bisection.

#![allow(dead_code)]

use boolsp::rational::{int, rat};
use boolsp::{BooleanFunction, LtfSpec, PtfSpec, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub fn ltf(a: &[i64]) -> BooleanFunction {
    BooleanFunction::from_ltf(&LtfSpec::new(0, a.to_vec()).unwrap()).unwrap()
}

/// The balanced function whose optimal predictor at ρ = 1/2 is unbalanced,
/// given by its Fourier expansion with every coefficient scaled by 4.
pub fn unbalanced_predictor_example() -> BooleanFunction {
    let terms = vec![
        (0b0001, 2),
        (0b0100, 1),
        (0b0011, -2),
        (0b0101, 1),
        (0b0110, 1),
        (0b1100, -1),
        (0b0111, 1),
        (0b1101, 1),
        (0b1110, -1),
        (0b1111, 1),
    ];
    BooleanFunction::from_ptf(&PtfSpec::new(4, terms).unwrap()).unwrap()
}

/// `k/63` for `k = 0..=63`.
pub fn rho_grid_63() -> Vec<Rational> {
    (0..=63).map(|k| rat(k, 63)).collect()
}

/// `2^n q^n T_ρ f(y)` for `ρ = p/q`, summed over `x` with the kernel
/// `(q+p)^{n-d} (q-p)^d`, `d` the Hamming distance.
pub fn direct_scaled_noise(f: &BooleanFunction, rho: &Rational) -> Vec<BigInt> {
    let n = f.n();
    let p = rho.numer().clone();
    let q = rho.denom().clone();
    let kernel: Vec<BigInt> =
        (0..=n).map(|d| num_traits::pow(&q + &p, n - d) * num_traits::pow(&q - &p, d)).collect();
    (0..f.len())
        .map(|y| {
            let mut counts = vec![0i64; n + 1];
            for x in 0..f.len() {
                counts[(x ^ y).count_ones() as usize] += f.value(x) as i64;
            }
            counts.iter().zip(&kernel).map(|(&c, k)| BigInt::from(c) * k).sum()
        })
        .collect()
}

/// ρ-SP by direct summation: `f(y) T_ρ f(y) ≥ 0` everywhere.
pub fn oracle_is_sp(f: &BooleanFunction, rho: &Rational) -> bool {
    direct_scaled_noise(f, rho).iter().enumerate().all(|(y, t)| (t * BigInt::from(f.value(y))) >= BigInt::zero())
}

/// Exact `Stab_ρ` and `Stab*_ρ` by direct summation.
pub fn oracle_stabilities(f: &BooleanFunction, rho: &Rational) -> (Rational, Rational) {
    let n = f.n();
    let t = direct_scaled_noise(f, rho);
    let den = (BigInt::from(1) << (2 * n)) * num_traits::pow(rho.denom().clone(), n);
    let corr: BigInt = t.iter().enumerate().map(|(y, v)| v * BigInt::from(f.value(y))).sum();
    let abs: BigInt = t.iter().map(|v| v.abs()).sum();
    (Rational::new(corr, den.clone()), Rational::new(abs, den))
}

/// Coefficients of `(1+ρ)^{n-d} (1-ρ)^d` in `ρ`, low to high.
fn kernel_poly(n: usize, d: usize) -> Vec<i64> {
    let mut c = vec![1i64];
    for j in 0..n {
        let s = if j < d { -1 } else { 1 };
        let mut next = vec![0i64; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k] += ck;
            next[k + 1] += s * ck;
        }
        c = next;
    }
    c
}

/// `f(y) · 2^n T_ρ f(y)` as a polynomial in `ρ`, for every `y`.
pub fn signed_point_polys(f: &BooleanFunction) -> Vec<Vec<i64>> {
    let n = f.n();
    let kernels: Vec<Vec<i64>> = (0..=n).map(|d| kernel_poly(n, d)).collect();
    (0..f.len())
        .map(|y| {
            let mut counts = vec![0i64; n + 1];
            for x in 0..f.len() {
                counts[(x ^ y).count_ones() as usize] += f.value(x) as i64;
            }
            let s = f.value(y) as i64;
            (0..=n).map(|k| s * (0..=n).map(|d| counts[d] * kernels[d][k]).sum::<i64>()).collect()
        })
        .collect()
}

fn horner(c: &[i64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck as f64)
}

/// Float estimate of where the SP status changes on `(0, 1)`.
///
/// `min_y f(y) P_y(ρ)` is scanned on a uniform grid of `steps` cells and
/// every sign change of its negativity is bisected to `1e-12`. Tangential
/// zeros are invisible to this oracle by construction.
pub fn float_sp_boundaries(f: &BooleanFunction, steps: usize) -> Vec<f64> {
    let polys = signed_point_polys(f);
    let scale = (1u64 << f.n()) as f64;
    // the float margin guards against rounding of the exact zero at ties
    let bad = |x: f64| polys.iter().any(|c| horner(c, x) / scale < -1e-9);
    let mut out = Vec::new();
    let mut prev = bad(1e-7);
    for i in 1..=steps {
        let x = i as f64 / steps as f64 * (1.0 - 2e-7) + 1e-7;
        let cur = bad(x);
        if cur != prev {
            let (mut lo, mut hi) = ((i - 1) as f64 / steps as f64 * (1.0 - 2e-7) + 1e-7, x);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if bad(mid) == prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
            prev = cur;
        }
    }
    out
}

/// `(1+r)^n` compared with `2^{n-1}`: the exact position of `r` relative
/// to the OR threshold `2^{(n-1)/n} - 1`.
pub fn or_threshold_cmp(n: usize, r: &Rational) -> std::cmp::Ordering {
    let lhs = boolsp::rational::pow(&(r + int(1)), n);
    lhs.cmp(&Rational::from_integer(BigInt::from(1) << (n - 1)))
}

/// Level-`k` part of `f` scaled by `2^n`, by direct correlation with each
/// character of weight `k`.
pub fn direct_level(f: &BooleanFunction, k: usize) -> Vec<i64> {
    let masks: Vec<(usize, i64)> = (0..f.len())
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| {
            let c: i64 = (0..f.len())
                .map(|x| f.value(x) as i64 * if (x & m).count_ones() % 2 == 1 { -1 } else { 1 })
                .sum();
            (m, c)
        })
        .filter(|&(_, c)| c != 0)
        .collect();
    (0..f.len())
        .map(|y| masks.iter().map(|&(m, c)| c * if (y & m).count_ones() % 2 == 1 { -1 } else { 1 }).sum())
        .collect()
}
