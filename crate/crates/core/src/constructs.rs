//! SP-preserving constructions and seeded random functions.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::func::BooleanFunction;
use crate::{check_dim, Error, Result};

/// `outer(x^{S_1}, ..., x^{S_m})` for disjoint blocks `S_t` of a common size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionPlan {
    n: usize,
    blocks: Vec<u64>,
    outer: BooleanFunction,
}

impl CompositionPlan {
    pub fn new(n: usize, blocks: Vec<u64>, outer: BooleanFunction) -> Result<Self> {
        check_dim(n)?;
        if blocks.len() != outer.n() {
            return Err(Error::DimensionMismatch(blocks.len(), outer.n()));
        }
        let w = blocks[0].count_ones();
        let mut seen = 0u64;
        for (t, &b) in blocks.iter().enumerate() {
            if b == 0 {
                return Err(Error::InvalidArgument(format!("block {} is empty", t + 1)));
            }
            if n < 64 && b >> n != 0 {
                return Err(Error::InvalidArgument(format!("block {} uses coordinates beyond {n}", t + 1)));
            }
            if b.count_ones() != w {
                return Err(Error::InvalidArgument(format!(
                    "block {} has size {}, expected {w}",
                    t + 1,
                    b.count_ones()
                )));
            }
            if seen & b != 0 {
                return Err(Error::InvalidArgument(format!("block {} overlaps an earlier block", t + 1)));
            }
            seen |= b;
        }
        Ok(CompositionPlan { n, blocks, outer })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn outer(&self) -> &BooleanFunction {
        &self.outer
    }

    /// Common block size.
    pub fn width(&self) -> usize {
        self.blocks[0].count_ones() as usize
    }

    /// The input index of `outer` read off at `u`.
    pub fn outer_index(&self, u: usize) -> usize {
        self.blocks
            .iter()
            .enumerate()
            .fold(0, |acc, (t, &b)| acc | ((((u as u64) & b).count_ones() as usize & 1) << t))
    }
}

/// `x ↦ f(signs ∘ x)`.
pub fn negate_inputs(f: &BooleanFunction, signs: &[i8]) -> Result<BooleanFunction> {
    if signs.len() != f.n() {
        return Err(Error::DimensionMismatch(signs.len(), f.n()));
    }
    if let Some(s) = signs.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::InvalidArgument(format!("sign {s} is not ±1")));
    }
    let mask = signs.iter().enumerate().filter(|(_, &s)| s < 0).fold(0usize, |m, (j, _)| m | 1 << j);
    BooleanFunction::from_fn(f.n(), |u| f.is_plus(u ^ mask))
}

/// `g(x_1..x_k) · h(x_{k+1}..x_n)`.
pub fn product_compose(g: &BooleanFunction, h: &BooleanFunction) -> Result<BooleanFunction> {
    let k = g.n();
    let low = (1usize << k) - 1;
    BooleanFunction::from_fn(k + h.n(), |u| g.is_plus(u & low) == h.is_plus(u >> k))
}

pub fn character_compose(plan: &CompositionPlan) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(plan.n, |u| plan.outer.is_plus(plan.outer_index(u)))
}

/// Uniformly random function on `n` variables.
///
/// The table is filled word by word, low index first, from
/// `ChaCha8Rng::seed_from_u64(seed).next_u64()`; for `n < 6` the unused
/// high bits of the single word are discarded.
pub fn random_function(n: usize, seed: u64) -> Result<BooleanFunction> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = (1usize << n).div_ceil(64);
    let mut words: Vec<u64> = (0..count).map(|_| rng.next_u64()).collect();
    if n < 6 {
        words[0] &= (1u64 << (1 << n)) - 1;
    }
    BooleanFunction::from_words(n, words)
}
