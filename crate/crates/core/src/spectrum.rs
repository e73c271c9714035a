//! Exact Fourier data: the scaled Walsh–Hadamard spectrum, level weights,
//! Chow parameters, Chow distance and the level-1 gap.
//!
//! Coefficients are kept as integers `F_m = 2^n · f̂_{S(m)}`; rationals are
//! produced only when a value leaves the module.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::func::{BooleanFunction, SubsetSums};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// `coeffs[m] = 2^n · f̂_S` where bit `j` of `m` marks coordinate `j+1` in `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledSpectrum {
    pub n: usize,
    #[serde(rename = "scaled_coeffs")]
    pub coeffs: Vec<i64>,
}

const PAR_THRESHOLD: usize = 1 << 14;

/// Unnormalised in-place Walsh–Hadamard butterfly. Applying it twice
/// multiplies the input by `2^n`.
pub fn fwht_in_place(a: &mut [i64]) {
    let len = a.len();
    assert!(len.is_power_of_two(), "transform length must be a power of two");
    let mut h = 1;
    while h < len {
        let butterfly = |block: &mut [i64]| {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        };
        if len >= PAR_THRESHOLD {
            a.par_chunks_mut(2 * h).for_each(butterfly);
        } else {
            a.chunks_mut(2 * h).for_each(butterfly);
        }
        h *= 2;
    }
}

/// Scaled spectrum of `f` by the fast transform.
pub fn wht(f: &BooleanFunction) -> ScaledSpectrum {
    let mut a: Vec<i64> = f.values().map(i64::from).collect();
    fwht_in_place(&mut a);
    ScaledSpectrum { n: f.n(), coeffs: a }
}

impl ScaledSpectrum {
    pub fn from_coeffs(n: usize, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::Format(format!("spectrum for n = {n} needs {} entries", 1usize << n)));
        }
        Ok(ScaledSpectrum { n, coeffs })
    }

    pub fn scale(&self) -> i64 {
        1 << self.n
    }

    /// `f̂_S` as an exact rational.
    pub fn coefficient(&self, mask: usize) -> Rational {
        Rational::new(BigInt::from(self.coeffs[mask]), BigInt::from(self.scale()))
    }

    /// `4^n · W^k` for every level `k`.
    pub fn scaled_weights(&self) -> Vec<i128> {
        let mut w = vec![0i128; self.n + 1];
        for (m, &c) in self.coeffs.iter().enumerate() {
            w[m.count_ones() as usize] += c as i128 * c as i128;
        }
        w
    }

    pub fn weights(&self) -> Vec<Rational> {
        let denom = BigInt::from(1u8) << (2 * self.n);
        self.scaled_weights()
            .into_iter()
            .map(|w| Rational::new(BigInt::from(w), denom.clone()))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.scaled_weights().iter().rposition(|&w| w > 0).unwrap_or(0)
    }

    /// Lowest level carrying weight; level 0 counts.
    pub fn level(&self) -> usize {
        self.scaled_weights().iter().position(|&w| w > 0).unwrap_or(0)
    }

    /// `Σ_S |f̂_S|`.
    pub fn spectral_norm(&self) -> Rational {
        let total: i128 = self.coeffs.iter().map(|&c| (c as i128).abs()).sum();
        Rational::new(BigInt::from(total), BigInt::from(self.scale()))
    }

    /// Scaled level-1 coefficients `F_{i}` for `i = 1..=n`.
    pub fn level_one(&self) -> Vec<i64> {
        (0..self.n).map(|j| self.coeffs[1 << j]).collect()
    }

    /// `(f̂_∅, f̂_1, ..., f̂_n)`.
    pub fn chow(&self) -> Vec<Rational> {
        std::iter::once(0).chain((0..self.n).map(|j| 1 << j)).map(|m| self.coefficient(m)).collect()
    }

    /// `2^n · Σ_i f̂_i x_i` at every input index.
    pub fn level_one_form(&self) -> Vec<i64> {
        let f1 = self.level_one();
        let sums = SubsetSums::new(&f1);
        let total: i128 = f1.iter().map(|&a| a as i128).sum();
        (0..1usize << self.n).map(|u| (total - 2 * sums.get(u)) as i64).collect()
    }

    /// Smallest positive value of `Σ_i f̂_i x_i`, or zero when level one is empty.
    pub fn gap(&self) -> Rational {
        let min = self.level_one_form().into_iter().filter(|&v| v > 0).min().unwrap_or(0);
        Rational::new(BigInt::from(min), BigInt::from(self.scale()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    #[serde(with = "rational::serde_rational_vec")]
    pub weights: Vec<Rational>,
    pub degree: usize,
    pub level: usize,
    #[serde(with = "rational::serde_rational")]
    pub spectral_norm: Rational,
    #[serde(with = "rational::serde_rational_vec")]
    pub chow: Vec<Rational>,
    #[serde(with = "rational::serde_rational")]
    pub gap: Rational,
    /// Per-coordinate influences, present only for monotone functions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub influences: Option<Vec<RationalList>>,
}

/// Wrapper so optional rational lists serialize uniformly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalList(#[serde(with = "rational::serde_rational")] pub Rational);

/// `Inf_i[f]` by direct flip counting.
pub fn influences(f: &BooleanFunction) -> Vec<Rational> {
    let len = f.len();
    (0..f.n())
        .map(|j| {
            let flips = (0..len).filter(|&u| f.is_plus(u) != f.is_plus(u ^ (1 << j))).count();
            Rational::new(BigInt::from(flips), BigInt::from(len))
        })
        .collect()
}

impl SpectralSummary {
    pub fn compute(spec: &ScaledSpectrum, f: &BooleanFunction) -> Result<Self> {
        if spec.n != f.n() {
            return Err(Error::DimensionMismatch(spec.n, f.n()));
        }
        let influences = f
            .is_monotone()
            .then(|| influences(f).into_iter().map(RationalList).collect());
        Ok(SpectralSummary {
            weights: spec.weights(),
            degree: spec.degree(),
            level: spec.level(),
            spectral_norm: spec.spectral_norm(),
            chow: spec.chow(),
            gap: spec.gap(),
            influences,
        })
    }
}

pub fn spectral_summary(f: &BooleanFunction) -> SpectralSummary {
    SpectralSummary::compute(&wht(f), f).expect("spectrum built from f")
}

/// Squared Chow distance over the degree-1 coefficients and its square root.
pub fn chow_distance(f: &BooleanFunction, g: &BooleanFunction) -> Result<(Rational, f64)> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch(f.n(), g.n()));
    }
    let (sf, sg) = (wht(f), wht(g));
    let sum: i128 = sf
        .level_one()
        .iter()
        .zip(sg.level_one())
        .map(|(&a, b)| {
            let d = a as i128 - b as i128;
            d * d
        })
        .sum();
    let d2 = Rational::new(BigInt::from(sum), BigInt::from(1u8) << (2 * f.n()));
    let root = rational::to_f64(&d2).sqrt();
    Ok((d2, root))
}

/// `⟨f, g⟩ = E[f g]`, computed on the tables.
pub fn inner_product(f: &BooleanFunction, g: &BooleanFunction) -> Result<Rational> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch(f.n(), g.n()));
    }
    let agree: i64 = (0..f.len()).map(|u| i64::from(f.value(u) * g.value(u))).sum();
    Ok(Rational::new(BigInt::from(agree), BigInt::from(f.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn brute_coeffs(f: &BooleanFunction) -> Vec<i64> {
        (0..f.len())
            .map(|m| (0..f.len()).map(|u| i64::from(f.value(u)) * crate::func::character_sign(u, m)).sum())
            .collect()
    }

    #[test]
    fn character_spectrum_is_a_spike() {
        let f = BooleanFunction::character(4, 0b0110).unwrap();
        let s = wht(&f);
        for (m, &c) in s.coeffs.iter().enumerate() {
            assert_eq!(c, if m == 0b0110 { 16 } else { 0 });
        }
    }

    #[test]
    fn majority3_spectrum() {
        let f = BooleanFunction::majority(3).unwrap();
        let s = wht(&f);
        assert_eq!(s.coeffs, brute_coeffs(&f));
        let expected = [0, 4, 4, 0, 4, 0, 0, -4];
        assert_eq!(s.coeffs, expected);
    }

    #[test]
    fn or_empty_coefficient() {
        for n in 1..=8 {
            let f = BooleanFunction::or(n).unwrap();
            let s = wht(&f);
            assert_eq!(s.coeffs, brute_coeffs(&f));
            // f̂_∅ = 2^{1-n} - 1, so |f̂_∅| = 1 - 2^{1-n}
            assert_eq!(s.coeffs[0], 2 - (1i64 << n));
        }
    }

    #[test]
    fn summaries() {
        let maj = spectral_summary(&BooleanFunction::majority(3).unwrap());
        assert_eq!(maj.weights, vec![int(0), rat(3, 4), int(0), rat(1, 4)]);
        assert_eq!((maj.degree, maj.level), (3, 1));
        assert_eq!(maj.gap, rat(1, 2));
        assert_eq!(maj.spectral_norm, int(2));
        assert!(maj.influences.is_some());

        let chi = spectral_summary(&BooleanFunction::character(2, 0b11).unwrap());
        assert_eq!(chi.weights[2], int(1));
        assert_eq!((chi.degree, chi.level), (2, 2));
        assert_eq!(chi.gap, int(0));
        assert!(chi.influences.is_none());

        let c = spectral_summary(&BooleanFunction::constant(3, -1).unwrap());
        assert_eq!((c.degree, c.level), (0, 0));
    }

    #[test]
    fn chow_distances() {
        let maj = BooleanFunction::majority(3).unwrap();
        let x1 = BooleanFunction::character(3, 1).unwrap();
        assert_eq!(chow_distance(&maj, &maj).unwrap().0, int(0));
        assert_eq!(chow_distance(&maj, &x1).unwrap().0, rat(3, 4));
        let d1 = BooleanFunction::character(1, 1).unwrap();
        assert_eq!(chow_distance(&d1, &d1.negated()).unwrap().0, int(4));
        assert!(chow_distance(&maj, &d1).is_err());
    }

    #[test]
    fn balanced_ltfs_have_heavy_level_one() {
        // every balanced LTF with small integer weights on n <= 4
        for n in 1..=4usize {
            let mut weights = vec![1i64; n];
            loop {
                for signs in 0..1u32 << n {
                    let a: Vec<i64> =
                        weights.iter().enumerate().map(|(j, &w)| if signs >> j & 1 == 1 { -w } else { w }).collect();
                    if let Ok(f) = BooleanFunction::from_ltf(&crate::LtfSpec { a0: 0, a }) {
                        assert!(f.is_balanced());
                        assert!(wht(&f).weights()[1] >= rat(1, 2));
                    }
                }
                // odometer over weights in 1..=5
                let mut j = 0;
                while j < n && weights[j] == 5 {
                    weights[j] = 1;
                    j += 1;
                }
                if j == n {
                    break;
                }
                weights[j] += 1;
            }
        }
    }
}
