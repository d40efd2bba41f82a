//! Canonical augmentation by vertex addition.
//!
//! A graph on `k + 1` vertices is produced from a parent on `k` vertices by
//! adding vertex `k` adjacent to a subset `S` of the parent's vertices. Only
//! one subset per orbit of the parent's automorphism group is tried, and a
//! child is kept only if the new vertex lies in the automorphism orbit of a
//! canonically chosen vertex of the child. Every isomorphism class is then
//! produced exactly once from its unique canonical parent.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::canon::{canonical_labelling, BitGraph};
use crate::refine::is_long_refinement;

/// Largest order the generator accepts (one 64-bit adjacency word per row).
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("order must be between 1 and {MAX_ORDER}, got {0}")]
    Order(usize),
    #[error("degree {degree} is impossible on {n} vertices")]
    Degree { degree: usize, n: usize },
    #[error("degree set must not be empty")]
    EmptyDegreeSet,
}

/// What to generate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConstraints {
    pub order: usize,
    pub connected: bool,
    /// Exact set of distinct vertex degrees.
    pub degree_set: Option<Vec<usize>>,
    pub max_degree: Option<usize>,
    /// Drop intermediate graphs whose maximum degree already exceeds the
    /// bound implied by `max_degree` or `degree_set`.
    pub prune_degrees: bool,
    /// Keep only long-refinement graphs.
    pub long_refinement: bool,
}

impl SearchConstraints {
    pub fn all(order: usize) -> Self {
        SearchConstraints {
            order,
            connected: false,
            degree_set: None,
            max_degree: None,
            prune_degrees: false,
            long_refinement: false,
        }
    }

    pub fn connected(order: usize) -> Self {
        SearchConstraints {
            connected: true,
            ..SearchConstraints::all(order)
        }
    }

    pub fn validate(&self) -> Result<(), ConstraintError> {
        let n = self.order;
        if n == 0 || n > MAX_ORDER {
            return Err(ConstraintError::Order(n));
        }
        if let Some(set) = &self.degree_set {
            if set.is_empty() {
                return Err(ConstraintError::EmptyDegreeSet);
            }
            if let Some(&degree) = set.iter().find(|&&d| d >= n) {
                return Err(ConstraintError::Degree { degree, n });
            }
        }
        if let Some(degree) = self.max_degree {
            if degree >= n && n > 1 {
                return Err(ConstraintError::Degree { degree, n });
            }
        }
        Ok(())
    }

    fn degree_bound(&self) -> Option<usize> {
        if !self.prune_degrees {
            return None;
        }
        let from_set = self.degree_set.as_ref().and_then(|s| s.iter().max().copied());
        match (self.max_degree, from_set) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Counters reported by a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub order: usize,
    /// Isomorphism classes accepted at each order `1..=order`; the last
    /// entry counts only classes passing the filters.
    pub nodes_per_level: Vec<u64>,
    /// Candidate extensions examined at the final level.
    pub candidates: u64,
    /// Graphs passed to the visitor.
    pub emitted: u64,
}

/// Compact graph with one adjacency word per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseGraph {
    n: usize,
    rows: Vec<u64>,
}

impl DenseGraph {
    fn single() -> Self {
        DenseGraph { n: 1, rows: vec![0] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn row(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    fn with_vertex(&self, mask: u64) -> DenseGraph {
        let mut rows = self.rows.clone();
        for (u, row) in rows.iter_mut().enumerate() {
            *row |= (mask >> u & 1) << self.n;
        }
        rows.push(mask);
        DenseGraph { n: self.n + 1, rows }
    }

    pub fn to_bits(&self) -> BitGraph {
        let mut b = BitGraph::empty(self.n);
        for u in 0..self.n {
            let mut r = self.rows[u] >> (u + 1) << (u + 1);
            while r != 0 {
                let v = r.trailing_zeros() as usize;
                r &= r - 1;
                b.add_edge(u, v);
            }
        }
        b
    }

    pub fn to_graph(&self) -> crate::graph::Graph {
        self.to_bits().to_graph()
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.rows[v] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == all
    }
}

fn apply(perm: &[usize], mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        out |= 1 << perm[v];
    }
    out
}

/// One subset of `0..k` per orbit under the group generated by `gens`.
fn orbit_representatives(k: usize, gens: &[Vec<usize>]) -> Vec<u64> {
    let total = 1usize << k;
    if gens.is_empty() {
        return (0..total as u64).collect();
    }
    let mut seen = vec![false; total];
    let mut reps = Vec::new();
    let mut stack = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        reps.push(start as u64);
        seen[start] = true;
        stack.push(start as u64);
        while let Some(m) = stack.pop() {
            for g in gens {
                let img = apply(g, m) as usize;
                if !seen[img] {
                    seen[img] = true;
                    stack.push(img as u64);
                }
            }
        }
    }
    reps
}

/// Decides whether `child` (new vertex `n - 1`) is the canonical extension.
/// On acceptance returns the child's automorphism generators when they were
/// computed along the way.
fn accept(child: &DenseGraph) -> Option<Option<Vec<Vec<usize>>>> {
    let n = child.n;
    let v = n - 1;
    let key = |u: usize| -> u64 {
        let mut r = child.rows[u];
        let mut sum = 0u64;
        while r != 0 {
            let w = r.trailing_zeros() as usize;
            r &= r - 1;
            sum += child.rows[w].count_ones() as u64;
        }
        (child.degree(u) as u64) << 32 | sum
    };
    let keys: Vec<u64> = (0..n).map(key).collect();
    let top = keys[v];
    let mut ties = 0;
    for &k in &keys {
        if k > top {
            return None;
        }
        if k == top {
            ties += 1;
        }
    }
    if ties == 1 {
        return Some(None);
    }
    let mut ranks: Vec<u64> = keys.clone();
    ranks.sort_unstable();
    ranks.dedup();
    let colours: Vec<u32> = keys
        .iter()
        .map(|k| ranks.binary_search(k).expect("key is ranked") as u32)
        .collect();
    let lab = canonical_labelling(&child.to_bits(), Some(&colours));
    let m = *lab
        .order
        .iter()
        .find(|&&u| keys[u] == top)
        .expect("a vertex has the top key");
    let orbits = lab.orbits();
    if orbits[m] == orbits[v] {
        Some(Some(lab.generators))
    } else {
        None
    }
}

fn generators_of(g: &DenseGraph) -> Vec<Vec<usize>> {
    let degrees: Vec<u32> = (0..g.n).map(|v| g.degree(v) as u32).collect();
    canonical_labelling(&g.to_bits(), Some(&degrees)).generators
}

struct Run<'a, F> {
    c: &'a SearchConstraints,
    bound: Option<usize>,
    visit: &'a F,
    levels: Vec<AtomicU64>,
    candidates: AtomicU64,
    emitted: AtomicU64,
}

impl<F: Fn(&DenseGraph) + Sync> Run<'_, F> {
    fn final_filter(&self, child: &DenseGraph) -> bool {
        let n = child.n;
        if let Some(set) = &self.c.degree_set {
            let mut present = 0u128;
            for v in 0..n {
                present |= 1 << child.degree(v);
            }
            let wanted = set.iter().fold(0u128, |acc, &d| acc | 1 << d);
            if present != wanted {
                return false;
            }
        }
        if let Some(bound) = self.c.max_degree {
            if (0..n).any(|v| child.degree(v) > bound) {
                return false;
            }
        }
        if self.c.connected && !child.is_connected() {
            return false;
        }
        if self.c.long_refinement {
            if n >= 2 {
                let mut present = 0u128;
                for v in 0..n {
                    present |= 1 << child.degree(v);
                }
                if present.count_ones() != 2 {
                    return false;
                }
            }
            if !is_long_refinement(&child.to_graph()).expect("non-empty graph") {
                return false;
            }
        }
        true
    }

    fn children(&self, parent: &DenseGraph, gens: &[Vec<usize>]) -> Vec<(DenseGraph, Vec<Vec<usize>>)> {
        let k = parent.n;
        let last = k + 1 == self.c.order;
        let mut out = Vec::new();
        for mask in orbit_representatives(k, gens) {
            if let Some(bound) = self.bound {
                if mask.count_ones() as usize > bound
                    || (0..k).any(|u| parent.degree(u) + (mask >> u & 1) as usize > bound)
                {
                    continue;
                }
            }
            let child = parent.with_vertex(mask);
            if last {
                self.candidates.fetch_add(1, Ordering::Relaxed);
                if !self.final_filter(&child) {
                    continue;
                }
            }
            let Some(found) = accept(&child) else { continue };
            self.levels[k].fetch_add(1, Ordering::Relaxed);
            if last {
                self.emitted.fetch_add(1, Ordering::Relaxed);
                (self.visit)(&child);
            } else {
                let gens = found.unwrap_or_else(|| generators_of(&child));
                out.push((child, gens));
            }
        }
        out
    }

    fn descend(&self, g: DenseGraph, gens: Vec<Vec<usize>>) {
        if g.n == self.c.order {
            return;
        }
        for (child, child_gens) in self.children(&g, &gens) {
            self.descend(child, child_gens);
        }
    }
}

/// Calls `visit` once per isomorphism class satisfying `c`, possibly from
/// several threads and in no particular order.
pub fn enumerate<F>(c: &SearchConstraints, visit: F) -> Result<SearchStats, ConstraintError>
where
    F: Fn(&DenseGraph) + Sync,
{
    c.validate()?;
    let n = c.order;
    let run = Run {
        c,
        bound: c.degree_bound(),
        visit: &visit,
        levels: (0..n).map(|_| AtomicU64::new(0)).collect(),
        candidates: AtomicU64::new(0),
        emitted: AtomicU64::new(0),
    };
    let root = DenseGraph::single();
    run.levels[0].store(1, Ordering::Relaxed);
    if n == 1 {
        run.candidates.store(1, Ordering::Relaxed);
        if run.final_filter(&root) {
            run.emitted.store(1, Ordering::Relaxed);
            visit(&root);
        }
    } else {
        // Expand breadth first until there is enough independent work.
        let mut frontier = vec![(root, Vec::new())];
        while frontier.len() < 64 && frontier[0].0.n + 1 < n {
            frontier = frontier
                .iter()
                .flat_map(|(g, gens)| run.children(g, gens))
                .collect();
            if frontier.is_empty() {
                break;
            }
        }
        frontier
            .into_par_iter()
            .for_each(|(g, gens)| run.descend(g, gens));
    }
    Ok(SearchStats {
        order: n,
        nodes_per_level: run.levels.iter().map(|a| a.load(Ordering::Relaxed)).collect(),
        candidates: run.candidates.load(Ordering::Relaxed),
        emitted: run.emitted.load(Ordering::Relaxed),
    })
}
