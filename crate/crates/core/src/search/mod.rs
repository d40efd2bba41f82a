//! Isomorph-free generation of small graphs, canonical certificates, and
//! long-refinement filtering of graph6 streams.

pub mod canon;
pub mod enumerate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

use crate::graph::Graph;
use crate::graph6::{self, FormatError};
use crate::refine;

pub use canon::{canonical_labelling, BitGraph, Labelling};
pub use enumerate::{enumerate, ConstraintError, DenseGraph, SearchConstraints, SearchStats, MAX_ORDER};

/// Certificate equal for two graphs exactly when they are isomorphic.
///
/// The bytes are the graph6 encoding of the canonically relabelled graph,
/// so codes compare as strings and print as valid graph6.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("graph6 is ASCII")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Canonical form of `g` (any vertex colouring on `g` is ignored).
pub fn canonical_form(g: &Graph) -> Graph {
    let bits = BitGraph::from_graph(g);
    let degrees: Vec<u32> = (0..g.order()).map(|v| g.degree(v) as u32).collect();
    let lab = canonical_labelling(&bits, Some(&degrees));
    bits.relabel(&lab.positions()).to_graph()
}

pub fn canonical_code(g: &Graph) -> CanonicalCode {
    CanonicalCode(graph6::encode(&canonical_form(g)))
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order() && a.size() == b.size() && canonical_code(a) == canonical_code(b)
}

/// Long-refinement graphs found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LongRefinementCount {
    pub order: usize,
    pub count: usize,
    /// Canonical graph6 forms, sorted.
    pub graphs: Vec<String>,
    pub stats: SearchStats,
}

/// Counts isomorphism classes of long-refinement graphs of order `n` that
/// also satisfy `constraints` (whose order and long-refinement flag are
/// overridden). Survivors of the early-abort check are confirmed by a full
/// refinement run.
pub fn count_long_refinement(
    n: usize,
    constraints: &SearchConstraints,
) -> Result<LongRefinementCount, ConstraintError> {
    let c = SearchConstraints {
        order: n,
        long_refinement: true,
        ..constraints.clone()
    };
    let found = Mutex::new(Vec::new());
    let stats = enumerate(&c, |g| {
        let graph = g.to_graph();
        let trace = refine::run(&graph, None).expect("non-empty graph");
        assert_eq!(trace.wl1() + 1, n, "early-abort check disagrees with a full run");
        let code = canonical_code(&graph);
        found.lock().expect("no panics while holding the lock").push(code.to_string());
    })?;
    let mut graphs = found.into_inner().expect("lock is not poisoned");
    graphs.sort();
    Ok(LongRefinementCount {
        order: n,
        count: graphs.len(),
        graphs,
        stats,
    })
}

/// Outcome of filtering a graph6 stream.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub scanned: usize,
    /// Input lines (trimmed) of the long-refinement graphs, in input order.
    pub matched: Vec<String>,
    /// Degree summary of each match, with multiplicities.
    pub degree_histogram: BTreeMap<String, usize>,
    /// Malformed lines with their 1-based line numbers.
    pub errors: Vec<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {error}")]
pub struct StreamError {
    pub line: usize,
    pub error: FormatError,
}

/// Keeps the long-refinement graphs of a newline-separated graph6 stream.
/// Malformed lines are recorded and skipped, or abort the scan when
/// `strict` is set.
pub fn filter_stream(text: &str, strict: bool) -> Result<FilterReport, StreamError> {
    let mut report = FilterReport::default();
    let lines: Vec<&str> = text.lines().collect();
    for (line, parsed) in graph6::decode_lines(text) {
        let g = match parsed {
            Ok(g) => g,
            Err(error) if strict => return Err(StreamError { line, error }),
            Err(error) => {
                report.errors.push((line, error.to_string()));
                continue;
            }
        };
        report.scanned += 1;
        if g.order() > 0 && refine::is_long_refinement(&g).expect("non-empty graph") {
            report.matched.push(lines[line - 1].trim().to_string());
            *report
                .degree_histogram
                .entry(g.degree_summary().to_string())
                .or_default() += 1;
        }
    }
    Ok(report)
}
