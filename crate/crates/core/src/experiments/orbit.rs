//! Iterating the optimal predictor and the functional graph it induces.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::func::BooleanFunction;
use crate::io::table_to_hex;
use crate::noise::{predictor_from, TieRule};
use crate::rational::{self, Rational};
use crate::spectrum::wht;
use crate::{check_dim, Error, Result};

use super::census::EXHAUSTIVE_MAX_N;

/// `sgn T_ρ f`, keeping `f` at ties.
pub fn predictor_step(f: &BooleanFunction, rho: &Rational) -> BooleanFunction {
    predictor_from(f, &wht(f), rho, TieRule::Keep).to_boolean().expect("the keep rule never yields zero")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum OrbitTerminal {
    Fixpoint { table: String },
    /// The walk returned to trajectory entry `entry`; the cycle has `length` functions.
    Cycle { entry: usize, length: usize },
    Budget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub n: usize,
    #[serde(with = "rational::serde_rational")]
    pub rho: Rational,
    pub start: String,
    /// Distinct functions visited, in order, as hex tables.
    pub trajectory: Vec<String>,
    pub length: usize,
    pub terminal: OrbitTerminal,
}

impl OrbitReport {
    pub fn is_cycle(&self) -> bool {
        matches!(self.terminal, OrbitTerminal::Cycle { .. })
    }
}

pub fn predictor_orbit(f: &BooleanFunction, rho: &Rational, max_steps: usize) -> Result<OrbitReport> {
    rational::check_unit(rho, "rho")?;
    if max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
    }
    let mut seen: HashMap<BooleanFunction, usize> = HashMap::new();
    let mut trajectory = Vec::new();
    let mut g = f.clone();
    let terminal = loop {
        seen.insert(g.clone(), trajectory.len());
        trajectory.push(table_to_hex(&g));
        let next = predictor_step(&g, rho);
        if next == g {
            break OrbitTerminal::Fixpoint { table: table_to_hex(&g) };
        }
        if let Some(&entry) = seen.get(&next) {
            break OrbitTerminal::Cycle { entry, length: trajectory.len() - entry };
        }
        if trajectory.len() >= max_steps {
            break OrbitTerminal::Budget;
        }
        g = next;
    };
    Ok(OrbitReport {
        n: f.n(),
        rho: rho.clone(),
        start: table_to_hex(f),
        length: trajectory.len(),
        trajectory,
        terminal,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphScan {
    pub n: usize,
    #[serde(with = "rational::serde_rational")]
    pub rho: Rational,
    pub num_functions: u64,
    pub num_fixpoints: u64,
    /// Weakly connected components of the functional graph.
    pub num_components: u64,
    /// Longest path from any function into its terminal cycle.
    pub max_depth: u64,
    /// Cycles of length at least two, each listed from its least id.
    pub cycles: Vec<Vec<u64>>,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb) as usize] = ra.min(rb);
        }
        ra != rb
    }
}

/// Exhaustive statistics of `f ↦ sgn T_ρ f` (keep rule) over all functions of `n ≤ 4` variables.
pub fn graph_scan(n: usize, rho: &Rational) -> Result<GraphScan> {
    rational::check_unit(rho, "rho")?;
    check_dim(n)?;
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::Capacity { n, cap: EXHAUSTIVE_MAX_N });
    }
    let total = 1u64 << (1 << n);
    let succ: Vec<u32> = (0..total)
        .into_par_iter()
        .map(|id| {
            let f = BooleanFunction::from_id(n, id).expect("n <= 4");
            predictor_step(&f, rho).id().expect("n <= 4") as u32
        })
        .collect();

    // 0 = unvisited, 1 = on the current walk, 2 = done
    let len = total as usize;
    let mut state = vec![0u8; len];
    let mut depth = vec![0u64; len];
    let mut cycles = Vec::new();
    let mut num_cycles = 0u64;
    let mut num_fixpoints = 0u64;
    let mut walk = Vec::new();
    for start in 0..len {
        if state[start] != 0 {
            continue;
        }
        walk.clear();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            walk.push(x);
            x = succ[x] as usize;
        }
        let mut base = if state[x] == 1 {
            // closed a new cycle at x
            let pos = walk.iter().position(|&w| w == x).expect("on walk");
            let cycle: Vec<usize> = walk.drain(pos..).collect();
            num_cycles += 1;
            if cycle.len() == 1 {
                num_fixpoints += 1;
            } else {
                let lo = (0..cycle.len()).min_by_key(|&i| cycle[i]).expect("nonempty");
                cycles.push(cycle[lo..].iter().chain(&cycle[..lo]).map(|&c| c as u64).collect());
            }
            for &c in &cycle {
                state[c] = 2;
                depth[c] = 0;
            }
            0
        } else {
            depth[x]
        };
        for &w in walk.iter().rev() {
            base += 1;
            depth[w] = base;
            state[w] = 2;
        }
    }
    cycles.sort();

    let mut uf = UnionFind((0..total as u32).collect());
    let mut components = total;
    for (x, &y) in succ.iter().enumerate() {
        if uf.union(x as u32, y) {
            components -= 1;
        }
    }
    assert_eq!(components, num_cycles, "each component of a functional graph holds one cycle");
    debug_assert!(num_fixpoints <= components);
    debug_assert_eq!(num_fixpoints == components, cycles.is_empty());

    Ok(GraphScan {
        n,
        rho: rho.clone(),
        num_functions: total,
        num_fixpoints,
        num_components: components,
        max_depth: depth.iter().copied().max().unwrap_or(0),
        cycles,
    })
}
