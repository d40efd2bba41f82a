//! Simple undirected graphs on dense vertex identifiers `0..n`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {0}) is a self-loop")]
    InvalidEdge(usize),
    #[error("vertex {vertex} out of range for a graph of order {n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("colouring has {got} entries, expected {n}")]
    ColouringLength { got: usize, n: usize },
}

/// A finite simple undirected graph, optionally carrying an initial vertex
/// colouring. Adjacency lists are sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    colouring: Option<Vec<usize>>,
}

/// Distinct degrees of a graph with the number of vertices of each degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSummary {
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeSummary {
    pub fn degrees(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn count(&self, degree: usize) -> usize {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }
}

impl std::fmt::Display for DegreeSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            colouring: None,
        }
    }

    /// Builds a graph from unordered vertex pairs. Repeated pairs collapse
    /// into a single edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::InvalidEdge(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph {
            adj,
            colouring: None,
        })
    }

    /// Builds a graph from per-vertex neighbour lists. Lists need not be
    /// symmetric; the union of both directions is taken.
    pub fn from_adjacency_lists(lists: &[Vec<usize>]) -> Result<Self, GraphError> {
        let n = lists.len();
        let edges = lists
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().map(move |&v| (u, v)));
        Self::from_edges(n, edges)
    }

    pub fn with_colouring(mut self, colouring: Vec<usize>) -> Result<Self, GraphError> {
        if colouring.len() != self.order() {
            return Err(GraphError::ColouringLength {
                got: colouring.len(),
                n: self.order(),
            });
        }
        self.colouring = Some(colouring);
        Ok(self)
    }

    pub fn colouring(&self) -> Option<&[usize]> {
        self.colouring.as_deref()
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let mut adj = vec![Vec::new(); n];
        for (u, list) in adj.iter_mut().enumerate() {
            let mut it = self.adj[u].iter().peekable();
            for v in 0..n {
                if it.peek() == Some(&&v) {
                    it.next();
                } else if v != u {
                    list.push(v);
                }
            }
        }
        Graph {
            adj,
            colouring: self.colouring.clone(),
        }
    }

    /// True when the graph has a single connected component. The empty graph
    /// and the single vertex both count as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.order();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == n
    }

    pub fn degree_summary(&self) -> DegreeSummary {
        let mut counts = BTreeMap::new();
        for list in &self.adj {
            *counts.entry(list.len()).or_insert(0) += 1;
        }
        DegreeSummary { counts }
    }

    /// Applies a vertex relabelling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let n = self.order();
        assert_eq!(perm.len(), n, "permutation length must match the order");
        let mut adj = vec![Vec::new(); n];
        for (u, list) in self.adj.iter().enumerate() {
            adj[perm[u]] = list.iter().map(|&v| perm[v]).collect();
            adj[perm[u]].sort_unstable();
        }
        let colouring = self.colouring.as_ref().map(|c| {
            let mut out = vec![0; n];
            for (v, &col) in c.iter().enumerate() {
                out[perm[v]] = col;
            }
            out
        });
        Graph { adj, colouring }
    }

    /// Copy of the graph with vertex `v` removed; later vertices shift down.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        let shift = |w: usize| if w > v { w - 1 } else { w };
        let adj = self
            .adj
            .iter()
            .enumerate()
            .filter(|&(u, _)| u != v)
            .map(|(_, ns)| ns.iter().filter(|&&w| w != v).map(|&w| shift(w)).collect())
            .collect();
        let colouring = self.colouring.as_ref().map(|c| {
            c.iter()
                .enumerate()
                .filter(|&(u, _)| u != v)
                .map(|(_, &col)| col)
                .collect()
        });
        Graph { adj, colouring }
    }

    /// Copy of the graph with one extra vertex (identifier `n`) adjacent to
    /// `neighbours`.
    pub fn add_vertex(&self, neighbours: &[usize]) -> Result<Graph, GraphError> {
        let n = self.order();
        let edges = self
            .edges()
            .chain(neighbours.iter().map(|&u| (u, n)))
            .collect::<Vec<_>>();
        Graph::from_edges(n + 1, edges)
    }

    /// Copy with the edge `{u, v}` inserted.
    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let edges = self.edges().chain(std::iter::once((u, v))).collect::<Vec<_>>();
        let mut g = Graph::from_edges(self.order(), edges)?;
        g.colouring = self.colouring.clone();
        Ok(g)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.order();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|ns| ns.iter().map(|&v| v + off).collect()),
        );
        Graph {
            adj,
            colouring: None,
        }
    }

    /// Graphviz DOT rendering. With a partition, every vertex is filled with
    /// the colour of its class.
    pub fn to_dot(&self, partition: Option<&Partition>) -> String {
        const PALETTE: [&str; 12] = [
            "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69",
            "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
        ];
        let mut out = String::from("graph G {\n  node [shape=circle, style=filled];\n");
        match partition {
            Some(p) => {
                for (i, class) in p.classes().iter().enumerate() {
                    let fill = PALETTE[i % PALETTE.len()];
                    let _ = writeln!(out, "  // class {i}");
                    for &v in class {
                        let _ = writeln!(out, "  {v} [fillcolor=\"{fill}\", group={i}];");
                    }
                }
            }
            None => {
                for v in 0..self.order() {
                    let _ = writeln!(out, "  {v} [fillcolor=\"white\"];");
                }
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
}

/// Complete graph on `n` vertices.
pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        .expect("complete graph edges are valid")
}

/// Path on `n` vertices, `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star edges are valid")
}

/// Erdős–Rényi sample: each of the `n(n-1)/2` pairs is an edge with
/// probability `p`, drawn in the order `(0,1), (0,2), ..., (n-2,n-1)`.
pub fn gnp<R: rand::Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("sampled edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_builds_path() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.neighbours(1), &[0, 2]);
        assert_eq!(g.degree_summary().degrees(), vec![1, 2]);
    }

    #[test]
    fn single_vertex() {
        let g = Graph::from_edges(1, []).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.size(), 0);
        assert!(g.is_connected());
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        assert_eq!(
            Graph::from_edges(3, [(1, 1)]),
            Err(GraphError::InvalidEdge(1))
        );
        assert_eq!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::OutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn duplicate_pairs_collapse() {
        let g = Graph::from_edges(2, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.size(), 1);
        assert_eq!(g.neighbours(0), &[1]);
    }

    #[test]
    fn complement_of_k4_is_empty() {
        let g = complete(4).complement();
        assert_eq!(g.size(), 0);
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn complement_edge_count() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3), (3, 4), (0, 5)]).unwrap();
        assert_eq!(g.size() + g.complement().size(), 15);
        assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn two_triangles_are_disconnected() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!g.is_connected());
        assert!(Graph::empty(0).is_connected());
    }

    #[test]
    fn degree_summary_of_p4() {
        let s = path(4).degree_summary();
        assert_eq!(s.count(1), 2);
        assert_eq!(s.count(2), 2);
        assert_eq!(s.to_string(), "{1:2, 2:2}");
    }

    #[test]
    fn remove_and_add_vertex() {
        let g = path(4);
        let h = g.remove_vertex(1);
        assert_eq!(h.order(), 3);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        let k = h.add_vertex(&[0, 2]).unwrap();
        assert_eq!(k.neighbours(3), &[0, 2]);
    }

    #[test]
    fn gnp_is_reproducible_and_extreme_densities_are_exact() {
        use rand::SeedableRng;
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        assert_eq!(gnp(30, 0.3, &mut a), gnp(30, 0.3, &mut b));
        assert_eq!(gnp(6, 1.0, &mut a), complete(6));
        assert_eq!(gnp(6, 0.0, &mut a).size(), 0);
    }

    #[test]
    fn dot_groups_by_partition() {
        let g = path(3);
        let p = Partition::from_classes(3, vec![vec![0, 2], vec![1]]).unwrap();
        let dot = g.to_dot(Some(&p));
        assert!(dot.starts_with("graph G {"));
        assert!(dot.contains("0 -- 1;"));
        assert!(dot.contains("2 [fillcolor=\"#8dd3c7\", group=0];"));
        assert!(dot.contains("1 [fillcolor=\"#ffffb3\", group=1];"));
    }
}
