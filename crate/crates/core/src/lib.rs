//! Exact analysis of self-predicting Boolean functions.
//!
//! A Boolean function `f: {-1,1}^n -> {-1,1}` is *ρ-self-predicting* when it
//! coincides, at every input where the prediction is not tied, with its
//! optimal predictor `sgn T_ρ f`. This crate computes the noise operator
//! and the optimal predictor exactly, decides ρ-SP / USP / LCSP / WST / SST
//! with integer arithmetic and Sturm-sequence root isolation, and provides
//! SP-preserving constructions plus small exhaustive experiments.
//!
//! Inputs are indexed so that bit `j` of an index `u` is set exactly when
//! coordinate `x_{j+1}` equals `-1`; index `0` is the all-`+1` point.

pub mod constructs;
pub mod error;
pub mod experiments;
pub mod func;
pub mod io;
pub mod noise;
pub mod poly;
pub mod rational;
pub mod sp;
pub mod spectrum;

use std::sync::atomic::{AtomicUsize, Ordering};

pub use error::{Error, Result};
pub use func::{BooleanFunction, LtfSpec, PropertyRecord, PtfSpec};
pub use rational::Rational;
pub use spectrum::ScaledSpectrum;

/// Default upper bound on the dimension of dense truth tables.
pub const DEFAULT_DENSE_CAP: usize = 24;

static DENSE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DENSE_CAP);

/// Current cap on `n` for dense truth tables.
pub fn dense_cap() -> usize {
    DENSE_CAP.load(Ordering::Relaxed)
}

/// Changes the dense cap. Values above 30 are clamped since a table of
/// `2^31` bits no longer fits the index arithmetic used throughout.
pub fn set_dense_cap(n: usize) {
    DENSE_CAP.store(n.clamp(1, 30), Ordering::Relaxed);
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    let cap = dense_cap();
    if n == 0 || n > cap {
        return Err(Error::Capacity { n, cap });
    }
    Ok(())
}
