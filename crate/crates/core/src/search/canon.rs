//! Canonical labelling by individualisation and refinement.
//!
//! The search tree is explored depth first. Every node refines an ordered
//! partition to an equitable one and records a hash of the refinement trace;
//! leaves are ranked by `(trace sequence, relabelled adjacency matrix)` and
//! the maximum leaf defines the canonical labelling. Leaves that reproduce
//! the first or the best leaf certificate yield automorphisms, which prune
//! sibling subtrees lying in the same orbit of the stabiliser of the current
//! path. The automorphisms found generate the full automorphism group.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::graph::Graph;

/// Adjacency matrix with bitset rows of `words` 64-bit words each.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut b = BitGraph::empty(g.order());
        for (u, v) in g.edges() {
            b.add_edge(u, v);
        }
        b
    }

    pub fn to_graph(&self) -> Graph {
        let edges = (0..self.n).flat_map(|u| {
            (u + 1..self.n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        });
        Graph::from_edges(self.n, edges.collect::<Vec<_>>()).expect("bit rows describe a simple graph")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn count_in(&self, v: usize, set: &[u64]) -> u32 {
        self.row(v)
            .iter()
            .zip(set)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Image under the vertex map `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> BitGraph {
        let mut out = BitGraph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.add_edge(perm[u], perm[v]);
                }
            }
        }
        out
    }
}

/// Ordered partition: cells are contiguous ranges of `lab`.
#[derive(Clone)]
struct Cells {
    lab: Vec<usize>,
    /// For a cell starting at `s`, `end[s]` is one past its last position.
    end: Vec<usize>,
    /// Start of the cell containing each vertex.
    cell_of: Vec<usize>,
    count: usize,
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x0100_0000_01b3).rotate_left(17) ^ 0x9e37_79b9_7f4a_7c15
}

impl Cells {
    fn new(n: usize, colours: Option<&[u32]>) -> (Self, Vec<usize>) {
        let mut lab: Vec<usize> = (0..n).collect();
        if let Some(c) = colours {
            lab.sort_by_key(|&v| (c[v], v));
        }
        let mut end = vec![0; n];
        let mut cell_of = vec![0; n];
        let mut starts = Vec::new();
        let mut s = 0;
        while s < n {
            let mut e = s + 1;
            if let Some(c) = colours {
                while e < n && c[lab[e]] == c[lab[s]] {
                    e += 1;
                }
            } else {
                e = n;
            }
            end[s] = e;
            for &v in &lab[s..e] {
                cell_of[v] = s;
            }
            starts.push(s);
            s = e;
        }
        let count = starts.len();
        (
            Cells {
                lab,
                end,
                cell_of,
                count,
            },
            starts,
        )
    }

    fn is_discrete(&self) -> bool {
        self.count == self.lab.len()
    }

    fn target_cell(&self) -> usize {
        let n = self.lab.len();
        let mut s = 0;
        while s < n {
            if self.end[s] - s > 1 {
                return s;
            }
            s = self.end[s];
        }
        unreachable!("target_cell on a discrete partition")
    }

    /// Splits `v` off the front of its cell.
    fn individualize(&mut self, v: usize) -> usize {
        let s = self.cell_of[v];
        let e = self.end[s];
        let p = self.lab[s..e].iter().position(|&x| x == v).expect("v in its cell") + s;
        self.lab.swap(s, p);
        self.end[s] = s + 1;
        self.end[s + 1] = e;
        for &w in &self.lab[s + 1..e] {
            self.cell_of[w] = s + 1;
        }
        self.count += 1;
        s
    }

    /// Refines to the coarsest equitable partition below the current one,
    /// given the cells whose counts may be non-uniform. Returns a trace hash.
    fn refine(&mut self, g: &BitGraph, initial: &[usize]) -> u64 {
        let n = self.lab.len();
        let mut queue: VecDeque<usize> = initial.iter().copied().collect();
        let mut queued = vec![false; n];
        for &s in initial {
            queued[s] = true;
        }
        let mut trace = 0xcbf2_9ce4_8422_2325u64;
        let mut splitter = vec![0u64; g.words];
        let mut keyed: Vec<(u32, usize)> = Vec::with_capacity(n);
        while let Some(w) = queue.pop_front() {
            if self.is_discrete() {
                break;
            }
            queued[w] = false;
            splitter.iter_mut().for_each(|x| *x = 0);
            for &v in &self.lab[w..self.end[w]] {
                splitter[v / 64] |= 1 << (v % 64);
            }
            let mut s = 0;
            while s < n {
                let e = self.end[s];
                if e - s > 1 {
                    keyed.clear();
                    keyed.extend(self.lab[s..e].iter().map(|&v| (g.count_in(v, &splitter), v)));
                    let first = keyed[0].0;
                    if keyed.iter().any(|&(c, _)| c != first) {
                        keyed.sort_unstable();
                        for (i, &(_, v)) in keyed.iter().enumerate() {
                            self.lab[s + i] = v;
                        }
                        trace = mix(trace, (s as u64) << 32 | w as u64);
                        let mut frags: Vec<(usize, usize)> = Vec::new();
                        let mut fs = s;
                        for i in 1..=keyed.len() {
                            if i == keyed.len() || keyed[i].0 != keyed[i - 1].0 {
                                frags.push((fs, s + i));
                                trace = mix(trace, (keyed[i - 1].0 as u64) << 32 | (s + i - fs) as u64);
                                fs = s + i;
                            }
                        }
                        let largest = frags
                            .iter()
                            .enumerate()
                            .max_by(|a, b| (a.1 .1 - a.1 .0).cmp(&(b.1 .1 - b.1 .0)).then(b.0.cmp(&a.0)))
                            .map(|(k, _)| k)
                            .expect("split has fragments");
                        let was_queued = queued[s];
                        for (k, &(a, b)) in frags.iter().enumerate() {
                            self.end[a] = b;
                            for &v in &self.lab[a..b] {
                                self.cell_of[v] = a;
                            }
                            let enqueue = if was_queued { k > 0 } else { k != largest };
                            if enqueue && !queued[a] {
                                queued[a] = true;
                                queue.push_back(a);
                            }
                        }
                        self.count += frags.len() - 1;
                    }
                }
                s = e;
            }
        }
        mix(trace, self.count as u64)
    }
}

struct Leaf {
    lab: Vec<usize>,
    path: Vec<usize>,
    traces: Vec<u64>,
    cert: Vec<u64>,
}

fn certificate(g: &BitGraph, lab: &[usize]) -> Vec<u64> {
    let n = g.n;
    let mut pos = vec![0; n];
    for (i, &v) in lab.iter().enumerate() {
        pos[v] = i;
    }
    let mut cert = vec![0u64; n * g.words];
    for (i, &v) in lab.iter().enumerate() {
        let row = &mut cert[i * g.words..(i + 1) * g.words];
        for (wi, &word) in g.row(v).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let u = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                row[pos[u] / 64] |= 1 << (pos[u] % 64);
            }
        }
    }
    cert
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller element as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

struct Search<'a> {
    g: &'a BitGraph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
}

fn prefix_cmp(a: &[u64], b: &[u64]) -> Ordering {
    let k = a.len().min(b.len());
    a[..k].cmp(&b[..k])
}

impl Search<'_> {
    fn visit(&mut self, cells: Cells, path: &mut Vec<usize>, traces: &mut Vec<u64>) -> Option<usize> {
        if cells.is_discrete() {
            return self.leaf(&cells, path, traces);
        }
        let depth = path.len();
        let t = cells.target_cell();
        let mut candidates = cells.lab[t..cells.end[t]].to_vec();
        candidates.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for v in candidates {
            if self.in_explored_orbit(v, path, &explored) {
                continue;
            }
            explored.push(v);
            let mut child = cells.clone();
            let s = child.individualize(v);
            let tr = child.refine(self.g, &[s]);
            path.push(v);
            traces.push(tr);
            let prune = !self.matches_first(traces) && self.below_best(traces);
            let jump = if prune { None } else { self.visit(child, path, traces) };
            path.pop();
            traces.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn matches_first(&self, traces: &[u64]) -> bool {
        match &self.first {
            Some(f) => f.traces.len() >= traces.len() && f.traces[..traces.len()] == *traces,
            None => true,
        }
    }

    fn below_best(&self, traces: &[u64]) -> bool {
        match &self.best {
            Some(b) => prefix_cmp(traces, &b.traces) == Ordering::Less,
            None => false,
        }
    }

    fn in_explored_orbit(&self, v: usize, path: &[usize], explored: &[usize]) -> bool {
        if explored.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.g.n);
        let mut any = false;
        for gen in &self.generators {
            if path.iter().all(|&p| gen[p] == p) {
                any = true;
                for (x, &y) in gen.iter().enumerate() {
                    uf.union(x, y);
                }
            }
        }
        if !any {
            return false;
        }
        let rv = uf.find(v);
        explored.iter().any(|&u| uf.find(u) == rv)
    }

    fn leaf(&mut self, cells: &Cells, path: &[usize], traces: &[u64]) -> Option<usize> {
        let cert = certificate(self.g, &cells.lab);
        let leaf = Leaf {
            lab: cells.lab.clone(),
            path: path.to_vec(),
            traces: traces.to_vec(),
            cert,
        };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                lab: leaf.lab.clone(),
                path: leaf.path.clone(),
                traces: leaf.traces.clone(),
                cert: leaf.cert.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.traces == leaf.traces && first.cert == leaf.cert {
            let gen = map_between(&first.lab, &leaf.lab);
            let common = first
                .path
                .iter()
                .zip(&leaf.path)
                .take_while(|(a, b)| a == b)
                .count();
            self.push_generator(gen);
            return Some(common);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match (leaf.traces.as_slice(), leaf.cert.as_slice()).cmp(&(best.traces.as_slice(), best.cert.as_slice())) {
            Ordering::Equal => {
                let gen = map_between(&best.lab, &leaf.lab);
                self.push_generator(gen);
            }
            Ordering::Greater => self.best = Some(leaf),
            Ordering::Less => {}
        }
        None
    }

    fn push_generator(&mut self, gen: Vec<usize>) {
        if gen.iter().enumerate().any(|(i, &x)| i != x) {
            self.generators.push(gen);
        }
    }
}

/// The permutation sending `from[i]` to `to[i]` for every position `i`.
fn map_between(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut gen = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gen[a] = b;
    }
    gen
}

/// Result of a canonical labelling run.
#[derive(Debug, Clone)]
pub struct Labelling {
    /// `order[i]` is the vertex placed at canonical position `i`.
    pub order: Vec<usize>,
    /// Generators of the automorphism group (of the coloured graph).
    pub generators: Vec<Vec<usize>>,
}

impl Labelling {
    /// Canonical position of every vertex.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Orbit representative (smallest member) of every vertex.
    pub fn orbits(&self) -> Vec<usize> {
        let n = self.order.len();
        let mut uf = UnionFind::new(n);
        for gen in &self.generators {
            for (x, &y) in gen.iter().enumerate() {
                uf.union(x, y);
            }
        }
        (0..n).map(|v| uf.find(v)).collect()
    }
}

/// Canonical labelling of `g`, optionally respecting a vertex colouring
/// (cells ordered by colour value).
pub fn canonical_labelling(g: &BitGraph, colours: Option<&[u32]>) -> Labelling {
    let n = g.n;
    if n == 0 {
        return Labelling {
            order: Vec::new(),
            generators: Vec::new(),
        };
    }
    let (mut cells, starts) = Cells::new(n, colours);
    let root = cells.refine(g, &starts);
    let mut search = Search {
        g,
        first: None,
        best: None,
        generators: Vec::new(),
    };
    let mut path = Vec::new();
    let mut traces = vec![root];
    search.visit(cells, &mut path, &mut traces);
    Labelling {
        order: search.best.expect("search reaches a leaf").lab,
        generators: search.generators,
    }
}
