//! Colour Refinement with exact round accounting.
//!
//! Rounds are synchronous: the partition after round `i + 1` is computed
//! entirely from the partition after round `i`. Engines are interchangeable
//! strategies behind [`RefinementEngine`] and are looked up by name through
//! [`engine`]. Every engine must produce identical partitions at every round
//! index; the `naive` engine serves as the reference for the others.

mod naive;
mod split;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::partition::Partition;

pub use naive::NaiveEngine;
pub use split::SplitEngine;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefineError {
    #[error("colour refinement needs at least one vertex")]
    EmptyGraph,
    #[error("partition covers {partition} vertices but the graph has {graph}")]
    InvalidPartition { partition: usize, graph: usize },
    #[error("unknown refinement engine '{0}'")]
    UnknownEngine(String),
}

/// Mutable per-run state of an engine.
pub trait RoundState {
    fn class_count(&self) -> usize;
    /// Current partition in canonical form.
    fn partition(&self) -> Partition;
    /// Applies one refinement round; returns whether any class split.
    fn step(&mut self) -> bool;
}

/// A Colour Refinement strategy.
pub trait RefinementEngine: Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Prepares a run starting from `initial`, which must partition the
    /// vertices of `graph`.
    fn start<'g>(&self, graph: &'g Graph, initial: &Partition) -> Box<dyn RoundState + 'g>;
}

static SPLIT: SplitEngine = SplitEngine;
static NAIVE: NaiveEngine = NaiveEngine;
static ENGINES: [&dyn RefinementEngine; 2] = [&SPLIT, &NAIVE];

/// All registered engines; the first is the default.
pub fn engines() -> &'static [&'static dyn RefinementEngine] {
    &ENGINES
}

pub fn engine(name: &str) -> Result<&'static dyn RefinementEngine, RefineError> {
    ENGINES
        .iter()
        .copied()
        .find(|e| e.name() == name)
        .ok_or_else(|| RefineError::UnknownEngine(name.to_string()))
}

pub fn default_engine() -> &'static dyn RefinementEngine {
    ENGINES[0]
}

/// The sequence of partitions `π⁰, π¹, …, π^{j+1}` computed on a graph, where
/// `j` is the first round with `π^j = π^{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringTrace {
    rounds: Vec<Partition>,
}

impl ColouringTrace {
    pub fn order(&self) -> usize {
        self.rounds[0].order()
    }

    /// Number of iterations until stabilisation.
    pub fn wl1(&self) -> usize {
        self.rounds.len() - 2
    }

    pub fn rounds(&self) -> &[Partition] {
        &self.rounds
    }

    pub fn stable_partition(&self) -> &Partition {
        self.rounds.last().expect("a trace holds at least two rounds")
    }

    pub fn class_counts(&self) -> Vec<usize> {
        self.rounds.iter().map(Partition::len).collect()
    }

    pub fn to_document(&self) -> TraceDocument {
        TraceDocument {
            n: self.order(),
            wl1: self.wl1(),
            stable: true,
            rounds: self.rounds.iter().map(|p| p.classes().to_vec()).collect(),
        }
    }
}

/// Serialised form of a [`ColouringTrace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub n: usize,
    pub wl1: usize,
    pub stable: bool,
    pub rounds: Vec<Vec<Vec<usize>>>,
}

/// The partition a run starts from: the graph's own colouring if it has one,
/// the unit partition otherwise.
pub fn initial_partition(g: &Graph) -> Partition {
    match g.colouring() {
        Some(c) => Partition::from_colouring(c),
        None => Partition::unit(g.order()),
    }
}

fn check(g: &Graph, p: &Partition) -> Result<(), RefineError> {
    if g.order() == 0 {
        return Err(RefineError::EmptyGraph);
    }
    if p.order() != g.order() {
        return Err(RefineError::InvalidPartition {
            partition: p.order(),
            graph: g.order(),
        });
    }
    Ok(())
}

/// One refinement round applied to `p`.
pub fn refine_round(g: &Graph, p: &Partition) -> Result<Partition, RefineError> {
    refine_round_with(default_engine(), g, p)
}

pub fn refine_round_with(
    engine: &dyn RefinementEngine,
    g: &Graph,
    p: &Partition,
) -> Result<Partition, RefineError> {
    check(g, p)?;
    let mut state = engine.start(g, p);
    state.step();
    Ok(state.partition())
}

pub fn run(g: &Graph, initial: Option<&Partition>) -> Result<ColouringTrace, RefineError> {
    run_with(default_engine(), g, initial)
}

pub fn run_with(
    engine: &dyn RefinementEngine,
    g: &Graph,
    initial: Option<&Partition>,
) -> Result<ColouringTrace, RefineError> {
    let start = initial.cloned().unwrap_or_else(|| initial_partition(g));
    check(g, &start)?;
    let mut state = engine.start(g, &start);
    let mut rounds = vec![start];
    loop {
        let changed = state.step();
        rounds.push(state.partition());
        if !changed {
            break;
        }
    }
    Ok(ColouringTrace { rounds })
}

/// Number of iterations until stabilisation from the graph's initial
/// colouring, without materialising intermediate partitions.
pub fn wl1_iterations(g: &Graph) -> Result<usize, RefineError> {
    wl1_iterations_with(default_engine(), g)
}

pub fn wl1_iterations_with(engine: &dyn RefinementEngine, g: &Graph) -> Result<usize, RefineError> {
    let start = initial_partition(g);
    check(g, &start)?;
    let mut state = engine.start(g, &start);
    let mut rounds = 0;
    while state.step() {
        rounds += 1;
    }
    Ok(rounds)
}

/// Stable partition reached from the graph's initial colouring.
pub fn stable_partition(g: &Graph) -> Result<Partition, RefineError> {
    let start = initial_partition(g);
    check(g, &start)?;
    let mut state = default_engine().start(g, &start);
    while state.step() {}
    Ok(state.partition())
}

/// Whether Colour Refinement needs `n - 1` iterations on `g`.
///
/// Aborts as soon as a round adds two or more classes or the partition
/// stabilises before becoming discrete; either rules out `n - 1` iterations.
pub fn is_long_refinement(g: &Graph) -> Result<bool, RefineError> {
    is_long_refinement_with(default_engine(), g)
}

pub fn is_long_refinement_with(
    engine: &dyn RefinementEngine,
    g: &Graph,
) -> Result<bool, RefineError> {
    let start = initial_partition(g);
    check(g, &start)?;
    let n = g.order();
    if start.len() != 1 {
        return Ok(false);
    }
    if n >= 2 {
        let degrees = g.degree_summary();
        if degrees.distinct() != 2 {
            return Ok(false);
        }
    }
    let mut state = engine.start(g, &start);
    let mut classes = 1;
    while classes < n {
        if !state.step() {
            return Ok(false);
        }
        let now = state.class_count();
        if now != classes + 1 {
            return Ok(false);
        }
        classes = now;
    }
    Ok(true)
}

/// Checks directly that every class induces a regular graph and every pair
/// of classes a biregular one, i.e. all vertices of a class have the same
/// number of neighbours in each class.
pub fn verify_equitable(g: &Graph, p: &Partition) -> Result<bool, RefineError> {
    check(g, p)?;
    let colours = p.colours();
    let k = p.len();
    let mut reference = vec![0usize; k];
    let mut counts = vec![0usize; k];
    for class in p.classes() {
        for (i, &v) in class.iter().enumerate() {
            counts.iter_mut().for_each(|c| *c = 0);
            for &w in g.neighbours(v) {
                counts[colours[w]] += 1;
            }
            if i == 0 {
                reference.copy_from_slice(&counts);
            } else if counts != reference {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
