//! Fractions of ρ-SP functions: exhaustive at tiny `n`, sampled beyond.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructs::random_function;
use crate::func::BooleanFunction;
use crate::rational::{self, Rational};
use crate::sp::is_sp_with;
use crate::spectrum::wht;
use crate::{check_dim, Error, Result};

/// Largest `n` for exhaustive enumeration.
pub const EXHAUSTIVE_MAX_N: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum FractionMode {
    Exhaustive,
    /// Sample `i` is `random_function(n, seed + i)`.
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SpFraction {
    Exact {
        #[serde(with = "rational::serde_rational")]
        fraction: Rational,
        count: u64,
        total: u64,
    },
    Estimate {
        estimate: f64,
        stderr: f64,
        count: u64,
        samples: u64,
    },
}

impl SpFraction {
    fn exact(count: u64, total: u64) -> Self {
        SpFraction::Exact { fraction: Rational::new(BigInt::from(count), BigInt::from(total)), count, total }
    }

    fn estimate(count: u64, samples: u64) -> Self {
        let p = count as f64 / samples as f64;
        SpFraction::Estimate { estimate: p, stderr: (p * (1.0 - p) / samples as f64).sqrt(), count, samples }
    }

    pub fn count(&self) -> u64 {
        match self {
            SpFraction::Exact { count, .. } | SpFraction::Estimate { count, .. } => *count,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            SpFraction::Exact { fraction, .. } => rational::to_f64(fraction),
            SpFraction::Estimate { estimate, .. } => *estimate,
        }
    }
}

fn check_rhos(rhos: &[Rational]) -> Result<()> {
    rhos.iter().try_for_each(|r| rational::check_unit(r, "rho"))
}

fn check_exhaustive(n: usize) -> Result<()> {
    check_dim(n)?;
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::Capacity { n, cap: EXHAUSTIVE_MAX_N });
    }
    Ok(())
}

/// Which of `rhos` the function is SP at.
fn sp_flags(f: &BooleanFunction, rhos: &[Rational]) -> Vec<bool> {
    let spec = wht(f);
    rhos.iter().map(|r| is_sp_with(f, &spec, r).sp).collect()
}

/// SP counts over the function ids `range`, one per `rho`.
fn count_range(n: usize, range: std::ops::Range<u64>, rhos: &[Rational]) -> Vec<u64> {
    range
        .into_par_iter()
        .map(|id| sp_flags(&BooleanFunction::from_id(n, id).expect("n <= 4"), rhos))
        .fold(
            || vec![0u64; rhos.len()],
            |mut acc, flags| {
                for (a, s) in acc.iter_mut().zip(flags) {
                    *a += s as u64;
                }
                acc
            },
        )
        .reduce(|| vec![0u64; rhos.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
}

pub fn sp_fraction(n: usize, rho: &Rational, mode: FractionMode) -> Result<SpFraction> {
    Ok(sp_fraction_curve(n, std::slice::from_ref(rho), mode, None)?.remove(0))
}

/// Fractions for several `rho` from a single pass over the functions.
/// Exhaustive runs resume from and update `checkpoint` when given.
pub fn sp_fraction_curve(
    n: usize,
    rhos: &[Rational],
    mode: FractionMode,
    checkpoint: Option<&Path>,
) -> Result<Vec<SpFraction>> {
    check_rhos(rhos)?;
    match mode {
        FractionMode::Exhaustive => {
            check_exhaustive(n)?;
            let total = 1u64 << (1 << n);
            let counts = exhaustive_counts(n, rhos, total, checkpoint)?;
            Ok(counts.into_iter().map(|c| SpFraction::exact(c, total)).collect())
        }
        FractionMode::Sample { count, seed } => {
            check_dim(n)?;
            if count == 0 {
                return Err(Error::InvalidArgument("sample count must be positive".into()));
            }
            let counts = (0..count)
                .into_par_iter()
                .map(|i| sp_flags(&random_function(n, seed.wrapping_add(i)).expect("checked"), rhos))
                .fold(
                    || vec![0u64; rhos.len()],
                    |mut acc, flags| {
                        for (a, s) in acc.iter_mut().zip(flags) {
                            *a += s as u64;
                        }
                        acc
                    },
                )
                .reduce(|| vec![0u64; rhos.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
            Ok(counts.into_iter().map(|c| SpFraction::estimate(c, count)).collect())
        }
    }
}

/// Resumable progress of an exhaustive census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCheckpoint {
    pub n: usize,
    pub rhos: Vec<String>,
    /// Functions `0..next_id` are already counted.
    pub next_id: u64,
    pub counts: Vec<u64>,
}

const CHUNK: u64 = 4096;

fn exhaustive_counts(n: usize, rhos: &[Rational], total: u64, checkpoint: Option<&Path>) -> Result<Vec<u64>> {
    let Some(path) = checkpoint else {
        return Ok(count_range(n, 0..total, rhos));
    };
    let labels: Vec<String> = rhos.iter().map(|r| r.to_string()).collect();
    let mut state = match fs::read_to_string(path) {
        Ok(text) => {
            let cp: CensusCheckpoint =
                serde_json::from_str(&text).map_err(|e| Error::Format(format!("checkpoint {}: {e}", path.display())))?;
            if cp.n != n || cp.rhos != labels || cp.counts.len() != rhos.len() || cp.next_id > total {
                return Err(Error::Format(format!("checkpoint {} belongs to a different census", path.display())));
            }
            cp
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            CensusCheckpoint { n, rhos: labels, next_id: 0, counts: vec![0; rhos.len()] }
        }
        Err(e) => return Err(e.into()),
    };
    while state.next_id < total {
        let end = (state.next_id + CHUNK).min(total);
        let part = count_range(n, state.next_id..end, rhos);
        for (c, p) in state.counts.iter_mut().zip(part) {
            *c += p;
        }
        state.next_id = end;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(&state).expect("serializable"))?;
        fs::rename(&tmp, path)?;
    }
    Ok(state.counts)
}

/// CSV rows `rho_num,rho_den,fraction_num,fraction_den` for exact results
/// and `rho_num,rho_den,estimate,stderr,samples` for estimates.
pub fn fraction_curve_csv(rhos: &[Rational], fractions: &[SpFraction]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let exact = matches!(fractions.first(), Some(SpFraction::Exact { .. }));
    let header: &[&str] = if exact {
        &["rho_num", "rho_den", "fraction_num", "fraction_den"]
    } else {
        &["rho_num", "rho_den", "estimate", "stderr", "samples"]
    };
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for (r, f) in rhos.iter().zip(fractions) {
        let mut row = vec![r.numer().to_string(), r.denom().to_string()];
        match f {
            SpFraction::Exact { fraction, .. } => {
                row.push(fraction.numer().to_string());
                row.push(fraction.denom().to_string());
            }
            SpFraction::Estimate { estimate, stderr, samples, .. } => {
                row.push(format!("{estimate}"));
                row.push(format!("{stderr}"));
                row.push(samples.to_string());
            }
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn one_variable_is_always_sp() {
        for rho in [int(0), rat(1, 3), int(1)] {
            assert_eq!(sp_fraction(1, &rho, FractionMode::Exhaustive).unwrap(), SpFraction::exact(4, 4));
        }
    }

    #[test]
    fn two_variables_by_hand() {
        // f(v) T_ρ f(v) ≥ 0 everywhere, read off the exact noise operator
        let rho = rat(1, 8);
        let mut count = 0;
        for id in 0..16u64 {
            let f = BooleanFunction::from_id(2, id).unwrap();
            let t = crate::noise::noise_operator(&f, &rho).unwrap();
            if (0..4).all(|v| t[v].clone() * int(f.value(v) as i64) >= int(0)) {
                count += 1;
            }
        }
        assert_eq!(sp_fraction(2, &rho, FractionMode::Exhaustive).unwrap(), SpFraction::exact(count, 16));
    }

    #[test]
    fn exhaustive_is_capped() {
        assert!(matches!(sp_fraction(5, &rat(1, 2), FractionMode::Exhaustive), Err(Error::Capacity { .. })));
    }

    #[test]
    fn sampling_is_reproducible() {
        let mode = FractionMode::Sample { count: 200, seed: 9 };
        let a = sp_fraction(5, &rat(1, 2), mode).unwrap();
        assert_eq!(a, sp_fraction(5, &rat(1, 2), mode).unwrap());
        let b = sp_fraction(5, &rat(63, 64), mode).unwrap();
        assert_eq!(b.approx(), 1.0);
    }

    #[test]
    fn checkpoints_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.json");
        let rhos = vec![rat(1, 4), rat(3, 4)];
        let direct = sp_fraction_curve(4, &rhos, FractionMode::Exhaustive, None).unwrap();
        let partial = CensusCheckpoint {
            n: 4,
            rhos: rhos.iter().map(|r| r.to_string()).collect(),
            next_id: 8192,
            counts: count_range(4, 0..8192, &rhos),
        };
        fs::write(&path, serde_json::to_string(&partial).unwrap()).unwrap();
        let resumed = sp_fraction_curve(4, &rhos, FractionMode::Exhaustive, Some(&path)).unwrap();
        assert_eq!(resumed, direct);
        let done: CensusCheckpoint = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(done.next_id, 65536);
        assert!(sp_fraction_curve(4, &[rat(1, 2)], FractionMode::Exhaustive, Some(&path)).is_err());
    }

    #[test]
    fn csv_layout() {
        let rhos = vec![rat(1, 2)];
        let text = fraction_curve_csv(&rhos, &[SpFraction::exact(3, 4)]).unwrap();
        assert_eq!(text, "rho_num,rho_den,fraction_num,fraction_den\n1,2,3,4\n");
        let text = fraction_curve_csv(&rhos, &[SpFraction::estimate(1, 4)]).unwrap();
        assert!(text.starts_with("rho_num,rho_den,estimate,stderr,samples\n1,2,0.25,"));
    }
}
