//! Simulated annealing over qubit assignments, the best-of-n random baseline,
//! and cost-landscape locality.
//!
//! The move set is the reversal-augmented bounded-set-difference neighborhood
//! from the device-graph module. Cost queries go through a memoizing oracle;
//! the number of distinct assignments evaluated (`n_s`) is the experimental
//! budget unit and never counts a repeated query.

use std::collections::HashMap;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Assignment, NeighborTable, Population};

#[derive(Debug, Error, PartialEq)]
pub enum AnnealError {
    #[error("neighborhood is empty")]
    EmptyNeighborhood,
    #[error("initial assignment is not in the population")]
    UnknownInitial,
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error("requested {requested} draws from a population of {available}")]
    InsufficientStates { requested: usize, available: usize },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("cost table length {table} does not match population size {population}")]
    TableSizeMismatch { table: usize, population: usize },
}

// ---------------------------------------------------------------------------
// Cooling schedules
// ---------------------------------------------------------------------------

/// Temperature as a function of the iteration index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// `T_i = T0 * alpha^i`
    Exponential { t0: f64, alpha: f64 },
    /// `T_i = T0 / (1 + ln(1 + i))`
    Logarithmic { t0: f64 },
}

impl Schedule {
    pub fn validate(&self) -> Result<(), AnnealError> {
        match *self {
            Schedule::Exponential { t0, alpha } => {
                if t0 <= 0.0 || !t0.is_finite() {
                    return Err(AnnealError::InvalidSchedule(format!("t0 = {t0}")));
                }
                if !(0.0 < alpha && alpha < 1.0) {
                    return Err(AnnealError::InvalidSchedule(format!("alpha = {alpha}")));
                }
            }
            Schedule::Logarithmic { t0 } => {
                if t0 <= 0.0 || !t0.is_finite() {
                    return Err(AnnealError::InvalidSchedule(format!("t0 = {t0}")));
                }
            }
        }
        Ok(())
    }

    pub fn temperature(&self, i: usize) -> f64 {
        match *self {
            Schedule::Exponential { t0, alpha } => t0 * alpha.powi(i as i32),
            Schedule::Logarithmic { t0 } => t0 / (1.0 + (1.0 + i as f64).ln()),
        }
    }
}

/// Metropolis acceptance: certain for downhill or flat moves, otherwise
/// `exp(-(c_new - c_old)/t)`.
pub fn acceptance_probability(delta: f64, t: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else if t <= 0.0 {
        0.0
    } else {
        (-delta / t).exp()
    }
}

// ---------------------------------------------------------------------------
// Cost oracles
// ---------------------------------------------------------------------------

enum CostSource<'a> {
    /// Offline mode: every cost precomputed, indexed by population position.
    Table(&'a [f64]),
    /// Online mode: evaluate on demand.
    Func(Box<dyn FnMut(&Assignment) -> f64 + 'a>),
}

/// Memoizing cost evaluator. `n_s` counts distinct assignments queried;
/// repeated queries hit the cache and do not grow the budget.
pub struct CostOracle<'a> {
    source: CostSource<'a>,
    cache: HashMap<usize, f64>,
}

impl<'a> CostOracle<'a> {
    pub fn from_table(costs: &'a [f64]) -> Self {
        Self { source: CostSource::Table(costs), cache: HashMap::new() }
    }

    pub fn from_fn(f: impl FnMut(&Assignment) -> f64 + 'a) -> Self {
        Self { source: CostSource::Func(Box::new(f)), cache: HashMap::new() }
    }

    pub fn eval(&mut self, pop: &Population, idx: usize) -> f64 {
        if let Some(&c) = self.cache.get(&idx) {
            return c;
        }
        let c = match &mut self.source {
            CostSource::Table(t) => t[idx],
            CostSource::Func(f) => f(&pop.paths()[idx]),
        };
        self.cache.insert(idx, c);
        c
    }

    /// Number of unique assignments evaluated so far.
    pub fn n_s(&self) -> usize {
        self.cache.len()
    }
}

// ---------------------------------------------------------------------------
// Annealing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    pub temperature: f64,
    /// Population index of the proposed assignment.
    pub proposal: usize,
    pub proposal_cost: f64,
    pub accepted: bool,
    /// Current cost after the accept/reject decision.
    pub current_cost: f64,
    /// Unique assignments evaluated up to and including this step.
    pub n_s: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealTrace {
    pub init: usize,
    pub init_cost: f64,
    pub steps: Vec<TraceStep>,
    /// Lowest-cost assignment among all evaluated ones.
    pub best: usize,
    pub best_cost: f64,
    pub n_s: usize,
}

/// One annealing run: at each step propose a uniform neighbor, accept
/// downhill moves, accept uphill moves with the Metropolis probability at the
/// current temperature.
pub fn anneal<R: Rng>(
    pop: &Population,
    table: &NeighborTable,
    oracle: &mut CostOracle,
    schedule: Schedule,
    steps: usize,
    init: usize,
    rng: &mut R,
) -> Result<AnnealTrace, AnnealError> {
    schedule.validate()?;
    assert!(steps >= 1);
    if init >= pop.len() {
        return Err(AnnealError::UnknownInitial);
    }
    if let CostSource::Table(t) = &oracle.source {
        if t.len() != pop.len() {
            return Err(AnnealError::TableSizeMismatch { table: t.len(), population: pop.len() });
        }
    }

    let mut current = init;
    let mut current_cost = oracle.eval(pop, init);
    let mut best = current;
    let mut best_cost = current_cost;
    let mut trace = Vec::with_capacity(steps);

    for i in 1..=steps {
        let t = schedule.temperature(i - 1);
        let neighbors = table.neighbors(current);
        if neighbors.is_empty() {
            return Err(AnnealError::EmptyNeighborhood);
        }
        let proposal = neighbors[rng.gen_range(0..neighbors.len())];
        let proposal_cost = oracle.eval(pop, proposal);
        let delta = proposal_cost - current_cost;
        let accepted = rng.gen::<f64>() < acceptance_probability(delta, t);
        if accepted {
            current = proposal;
            current_cost = proposal_cost;
        }
        if proposal_cost < best_cost {
            best = proposal;
            best_cost = proposal_cost;
        }
        trace.push(TraceStep {
            step: i,
            temperature: t,
            proposal,
            proposal_cost,
            accepted,
            current_cost,
            n_s: oracle.n_s(),
        });
    }

    Ok(AnnealTrace {
        init,
        init_cost: oracle.eval(pop, init),
        steps: trace,
        best,
        best_cost,
        n_s: oracle.n_s(),
    })
}

/// Convenience form of [`anneal`] working directly on a graph: enumerates the
/// population for the initial assignment's length, builds the neighbor table
/// for `spec.k`, and evaluates costs through a fresh memoizing oracle.
pub fn anneal_on_graph<R: Rng>(
    g: &crate::graph::NoiseGraph,
    spec: crate::graph::NeighborhoodSpec,
    cost: impl FnMut(&Assignment) -> f64,
    schedule: Schedule,
    steps: usize,
    init: &Assignment,
    rng: &mut R,
) -> Result<(AnnealTrace, Population), AnnealError> {
    let pop = Population::enumerate(g, init.len())?;
    let init_idx = pop.index_of(init).ok_or(AnnealError::UnknownInitial)?;
    let table = NeighborTable::build(&pop, spec.k);
    let mut oracle = CostOracle::from_fn(cost);
    let trace = anneal(&pop, &table, &mut oracle, schedule, steps, init_idx, rng)?;
    Ok((trace, pop))
}

// ---------------------------------------------------------------------------
// Random baseline
// ---------------------------------------------------------------------------

/// Best-of-`n_s` random search: for each trial, draw `n_s` assignments
/// without replacement and keep the lowest cost. Returns one best cost per
/// trial.
pub fn random_baseline<R: Rng>(
    costs: &[f64],
    n_s: usize,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<f64>, AnnealError> {
    if n_s == 0 || n_s > costs.len() {
        return Err(AnnealError::InsufficientStates { requested: n_s, available: costs.len() });
    }
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let best = sample_indices(rng, costs.len(), n_s)
            .into_iter()
            .map(|i| costs[i])
            .fold(f64::INFINITY, f64::min);
        out.push(best);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Locality
// ---------------------------------------------------------------------------

/// Mean absolute metric change across neighborhoods, one value per `k`:
/// the expectation over assignments of the mean |v - v'| over each
/// assignment's neighborhood. Assignments with empty neighborhoods are
/// skipped.
pub fn locality(pop: &Population, values: &[f64], ks: &[usize]) -> Vec<f64> {
    assert_eq!(values.len(), pop.len());
    ks.iter()
        .map(|&k| {
            let table = NeighborTable::build(pop, k);
            let mut outer = 0.0;
            let mut outer_count = 0usize;
            for i in 0..pop.len() {
                let nb = table.neighbors(i);
                if nb.is_empty() {
                    continue;
                }
                let inner: f64 =
                    nb.iter().map(|&j| (values[i] - values[j]).abs()).sum::<f64>() / nb.len() as f64;
                outer += inner;
                outer_count += 1;
            }
            if outer_count == 0 {
                0.0
            } else {
                outer / outer_count as f64
            }
        })
        .collect()
}
