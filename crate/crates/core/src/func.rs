//! Dense truth tables, named constructors, threshold constructors and
//! structural predicates over the Hamming cube.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::{check_dim, Error, Result};

/// A Boolean function `{-1,1}^n -> {-1,1}` stored as a bit table.
///
/// Bit `u` of the table is set exactly when `f = +1` at input index `u`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

/// Families available through [`BooleanFunction::named`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedKind {
    /// `x^S` for the coordinate mask `S` (bit `j` is coordinate `j+1`).
    Character(u64),
    Majority,
    /// `+1` only at the all-`+1` point.
    Or,
    /// `sgn((n-2) x_1 + x_2 + ... + x_n)`.
    Edic,
}

/// Integer linear threshold form `a0 + Σ a_i x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtfSpec {
    pub a0: i64,
    pub a: Vec<i64>,
}

/// Integer polynomial threshold form `Σ c_S x^S`, terms keyed by coordinate mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtfSpec {
    pub n: usize,
    pub terms: Vec<(u64, i64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub balanced: bool,
    pub monotone: bool,
    pub odd: bool,
    pub even: bool,
    pub symmetric: bool,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n={}, ", self.n)?;
        if self.n <= 6 {
            write!(f, "table={:#x})", self.words[0])
        } else {
            write!(f, "{} words)", self.words.len())
        }
    }
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

fn last_word_mask(n: usize) -> u64 {
    let len = 1usize << n;
    if len.is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Decodes an input index into its ±1 coordinates.
pub fn decode_point(n: usize, u: usize) -> Vec<i8> {
    (0..n).map(|j| if (u >> j) & 1 == 1 { -1 } else { 1 }).collect()
}

/// Inverse of [`decode_point`].
pub fn encode_point(x: &[i8]) -> usize {
    x.iter().enumerate().fold(0, |u, (j, &xj)| if xj < 0 { u | (1 << j) } else { u })
}

/// `(-1)^{|u ∧ m|}`: value of the character with mask `m` at index `u`.
#[inline]
pub fn character_sign(u: usize, mask: usize) -> i64 {
    if (u & mask).count_ones() & 1 == 1 {
        -1
    } else {
        1
    }
}

impl BooleanFunction {
    /// Builds a table from a predicate returning `true` where `f = +1`.
    pub fn from_fn(n: usize, mut plus: impl FnMut(usize) -> bool) -> Result<Self> {
        check_dim(n)?;
        let mut words = vec![0u64; word_count(n)];
        for u in 0..1usize << n {
            if plus(u) {
                words[u >> 6] |= 1 << (u & 63);
            }
        }
        Ok(BooleanFunction { n, words })
    }

    pub fn from_words(n: usize, mut words: Vec<u64>) -> Result<Self> {
        check_dim(n)?;
        if words.len() != word_count(n) {
            return Err(Error::Format(format!(
                "expected {} table words for n = {n}, got {}",
                word_count(n),
                words.len()
            )));
        }
        let last = words.len() - 1;
        if words[last] & !last_word_mask(n) != 0 {
            return Err(Error::Format("table has bits set beyond 2^n".into()));
        }
        words[last] &= last_word_mask(n);
        Ok(BooleanFunction { n, words })
    }

    /// Builds a function with `n <= 6` from its table packed in one word.
    pub fn from_id(n: usize, id: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::InvalidArgument("function ids exist only for n <= 6".into()));
        }
        Self::from_words(n, vec![id])
    }

    pub fn constant(n: usize, value: i8) -> Result<Self> {
        Self::from_fn(n, |_| value > 0)
    }

    pub fn character(n: usize, mask: u64) -> Result<Self> {
        check_dim(n)?;
        if n < 64 && mask >> n != 0 {
            return Err(Error::InvalidArgument(format!("character mask {mask:#b} is not a subset of [{n}]")));
        }
        Self::from_fn(n, |u| character_sign(u, mask as usize) > 0)
    }

    pub fn majority(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("majority needs an odd number of inputs, got {n}")));
        }
        check_dim(n)?;
        Self::from_fn(n, |u| 2 * (u.count_ones() as usize) < n)
    }

    pub fn or(n: usize) -> Result<Self> {
        Self::from_fn(n, |u| u == 0)
    }

    pub fn edic(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("edic needs n >= 3, got {n}")));
        }
        check_dim(n)?;
        Self::from_ltf(&LtfSpec::edic(n))
    }

    pub fn named(kind: NamedKind, n: usize) -> Result<Self> {
        match kind {
            NamedKind::Character(mask) => Self::character(n, mask),
            NamedKind::Majority => Self::majority(n),
            NamedKind::Or => Self::or(n),
            NamedKind::Edic => Self::edic(n),
        }
    }

    /// Signs the affine form at every input; any zero is rejected with its witness.
    pub fn from_ltf(spec: &LtfSpec) -> Result<Self> {
        let n = spec.a.len();
        check_dim(n)?;
        let sums = SubsetSums::new(&spec.a);
        let total: i128 = spec.a0 as i128 + spec.a.iter().map(|&a| a as i128).sum::<i128>();
        let mut zero = None;
        let f = Self::from_fn(n, |u| {
            let v = total - 2 * sums.get(u);
            if v == 0 && zero.is_none() {
                zero = Some(u);
            }
            v > 0
        })?;
        match zero {
            Some(index) => Err(Error::ZeroOfForm { index, point: decode_point(n, index) }),
            None => Ok(f),
        }
    }

    pub fn from_ptf(spec: &PtfSpec) -> Result<Self> {
        check_dim(spec.n)?;
        let spec = spec.normalized()?;
        let mut zero = None;
        let f = Self::from_fn(spec.n, |u| {
            let v: i128 = spec
                .terms
                .iter()
                .map(|&(m, c)| c as i128 * character_sign(u, m as usize) as i128)
                .sum();
            if v == 0 && zero.is_none() {
                zero = Some(u);
            }
            v > 0
        })?;
        match zero {
            Some(index) => Err(Error::ZeroOfForm { index, point: decode_point(spec.n, index) }),
            None => Ok(f),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of inputs, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The packed table for `n <= 6`.
    pub fn id(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    #[inline]
    pub fn is_plus(&self, u: usize) -> bool {
        (self.words[u >> 6] >> (u & 63)) & 1 == 1
    }

    /// `f(u)` as `±1`.
    #[inline]
    pub fn value(&self, u: usize) -> i8 {
        if self.is_plus(u) {
            1
        } else {
            -1
        }
    }

    pub fn values(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len()).map(|u| self.value(u))
    }

    pub fn eval(&self, x: &[i8]) -> Result<i8> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(x.len(), self.n));
        }
        Ok(self.value(encode_point(x)))
    }

    pub fn count_plus(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.count_plus() == 1u64 << (self.n - 1)
    }

    pub fn is_constant(&self) -> bool {
        let c = self.count_plus();
        c == 0 || c == self.len() as u64
    }

    pub fn negated(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let last = words.len() - 1;
        words[last] &= last_word_mask(self.n);
        BooleanFunction { n: self.n, words }
    }

    /// Fraction of inputs on which `self` and `other` disagree.
    pub fn distance(&self, other: &Self) -> Result<Rational> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let diff: u64 = self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as u64).sum();
        Ok(Rational::new(BigInt::from(diff), BigInt::from(self.len() as u64)))
    }

    pub fn is_monotone(&self) -> bool {
        // Setting bit j lowers coordinate j, so the value may only drop.
        (0..self.n).all(|j| {
            let bit = 1usize << j;
            (0..self.len()).filter(|u| u & bit == 0).all(|u| self.is_plus(u) || !self.is_plus(u | bit))
        })
    }

    pub fn properties(&self) -> PropertyRecord {
        let full = self.len() - 1;
        let odd = (0..self.len()).all(|u| self.is_plus(u) != self.is_plus(u ^ full));
        let even = (0..self.len()).all(|u| self.is_plus(u) == self.is_plus(u ^ full));
        let mut by_weight: Vec<Option<bool>> = vec![None; self.n + 1];
        let symmetric = (0..self.len()).all(|u| {
            let w = u.count_ones() as usize;
            let v = self.is_plus(u);
            *by_weight[w].get_or_insert(v) == v
        });
        PropertyRecord { balanced: self.is_balanced(), monotone: self.is_monotone(), odd, even, symmetric }
    }

    /// Dominating boundary points of a monotone function.
    ///
    /// A point `x` with `f(x) = +1` qualifies when every strictly smaller
    /// point maps to `-1`, and a point with `f(x) = -1` when every strictly
    /// larger point maps to `+1`; in both cases `x` must also be a boundary
    /// point (some single flip changes the value).
    pub fn dominating_boundary_points(&self) -> Result<Vec<usize>> {
        if !self.is_monotone() {
            return Err(Error::Precondition("dominating boundary points need a monotone function".into()));
        }
        let full = self.len() - 1;
        let points = (0..self.len())
            .filter(|&u| {
                if self.is_plus(u) {
                    // Lower covers set one more bit.
                    u != full && (0..self.n).filter(|j| u >> j & 1 == 0).all(|j| !self.is_plus(u | 1 << j))
                } else {
                    u != 0 && (0..self.n).filter(|j| u >> j & 1 == 1).all(|j| self.is_plus(u & !(1 << j)))
                }
            })
            .collect();
        Ok(points)
    }

    /// Bit `u` is set when some point at Hamming distance `1..=d` from `u`
    /// shares the value `f(u)`.
    pub fn friendly_neighborhood(&self, d: usize) -> Result<Vec<bool>> {
        if d == 0 || d > self.n {
            return Err(Error::InvalidArgument(format!("radius {d} outside 1..={}", self.n)));
        }
        let masks: Vec<usize> = (1..self.len()).filter(|m| m.count_ones() as usize <= d).collect();
        Ok((0..self.len()).map(|u| masks.iter().any(|&m| self.is_plus(u ^ m) == self.is_plus(u))).collect())
    }
}

/// Subset sums `Σ_{j ∈ u} a_j` via two half-size lookup tables.
pub(crate) struct SubsetSums {
    split: usize,
    lo: Vec<i128>,
    hi: Vec<i128>,
}

impl SubsetSums {
    pub(crate) fn new(a: &[i64]) -> Self {
        let split = a.len() / 2;
        let table = |coeffs: &[i64]| {
            let mut t = vec![0i128; 1 << coeffs.len()];
            for u in 1..t.len() {
                let j = u.trailing_zeros() as usize;
                t[u] = t[u & (u - 1)] + coeffs[j] as i128;
            }
            t
        };
        SubsetSums { split, lo: table(&a[..split]), hi: table(&a[split..]) }
    }

    #[inline]
    pub(crate) fn get(&self, u: usize) -> i128 {
        self.lo[u & ((1 << self.split) - 1)] + self.hi[u >> self.split]
    }
}

impl LtfSpec {
    pub fn new(a0: i64, a: Vec<i64>) -> Result<Self> {
        let spec = LtfSpec { a0, a };
        spec.validate()?;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Canonical representation `((n-2), 1, ..., 1)` of the enlightened dictator.
    pub fn edic(n: usize) -> Self {
        let mut a = vec![1; n];
        a[0] = n as i64 - 2;
        LtfSpec { a0: 0, a }
    }

    pub fn value_at(&self, u: usize) -> i128 {
        self.a0 as i128
            + self.a.iter().enumerate().map(|(j, &a)| if u >> j & 1 == 1 { -(a as i128) } else { a as i128 }).sum::<i128>()
    }

    /// Checks that the affine form never vanishes on the cube.
    pub fn validate(&self) -> Result<()> {
        BooleanFunction::from_ltf(self).map(|_| ())
    }
}

impl PtfSpec {
    pub fn new(n: usize, terms: Vec<(u64, i64)>) -> Result<Self> {
        PtfSpec { n, terms }.normalized()
    }

    /// Merges repeated masks and drops zero coefficients; masks are sorted.
    pub fn normalized(&self) -> Result<Self> {
        let mut terms: Vec<(u64, i64)> = Vec::new();
        let mut sorted = self.terms.clone();
        sorted.sort_by_key(|t| t.0);
        for (m, c) in sorted {
            if self.n < 64 && m >> self.n != 0 {
                return Err(Error::InvalidArgument(format!("term mask {m:#b} is not a subset of [{}]", self.n)));
            }
            match terms.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|t| t.1 != 0);
        Ok(PtfSpec { n: self.n, terms })
    }

    pub fn sparsity(&self) -> usize {
        self.normalized().map(|s| s.terms.len()).unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.normalized()
            .map(|s| s.terms.iter().map(|t| t.0.count_ones() as usize).max().unwrap_or(0))
            .unwrap_or(0)
    }
}
