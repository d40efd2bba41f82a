use super::{RefinementEngine, RoundState};
use crate::graph::Graph;
use crate::partition::Partition;

/// Split-driven refinement with per-round batching.
///
/// After the first round, a class can only split because of a class that
/// split in the previous round. For a class `C` broken into fragments
/// `C_1..C_k`, neighbour counts into `C` are already uniform on every class,
/// so counts into all fragments but the largest determine the rest. Each
/// round therefore scans only the neighbourhoods of the non-largest fragments
/// produced by the previous round, and all splits it finds are applied
/// together to form the next partition.
pub struct SplitEngine;

impl RefinementEngine for SplitEngine {
    fn name(&self) -> &'static str {
        "split"
    }

    fn summary(&self) -> &'static str {
        "worklist engine: smaller-fragment splitters, batched per round"
    }

    fn start<'g>(&self, graph: &'g Graph, initial: &Partition) -> Box<dyn RoundState + 'g> {
        let n = graph.order();
        let mut elems = Vec::with_capacity(n);
        let mut bounds = Vec::with_capacity(initial.len());
        let mut class_of = vec![0; n];
        for (c, class) in initial.classes().iter().enumerate() {
            let start = elems.len();
            for &v in class {
                class_of[v] = c;
                elems.push(v);
            }
            bounds.push((start, elems.len()));
        }
        let mut loc = vec![0; n];
        for (i, &v) in elems.iter().enumerate() {
            loc[v] = i;
        }
        Box::new(SplitState {
            graph,
            elems,
            loc,
            class_of,
            bounds,
            pending: (0..initial.len()).collect(),
            count: vec![0; n],
            signature: vec![Vec::new(); n],
        })
    }
}

struct SplitState<'g> {
    graph: &'g Graph,
    /// Vertices grouped so every class is a contiguous range.
    elems: Vec<usize>,
    loc: Vec<usize>,
    class_of: Vec<usize>,
    /// Range `[start, end)` of each class in `elems`.
    bounds: Vec<(usize, usize)>,
    /// Classes whose neighbourhoods are scanned next round.
    pending: Vec<usize>,
    count: Vec<u32>,
    signature: Vec<Vec<(u32, u32)>>,
}

impl SplitState<'_> {
    /// Moves `members` (all in class `c`) to the tail of the class range in
    /// the given order; returns the start of the tail.
    fn move_to_tail(&mut self, c: usize, members: &[usize]) -> usize {
        let (_, end) = self.bounds[c];
        let mut bound = end;
        for &v in members {
            bound -= 1;
            let (p, q) = (self.loc[v], bound);
            let other = self.elems[q];
            self.elems.swap(p, q);
            self.loc[other] = p;
            self.loc[v] = q;
        }
        for (i, &v) in members.iter().enumerate() {
            self.elems[bound + i] = v;
            self.loc[v] = bound + i;
        }
        bound
    }
}

impl RoundState for SplitState<'_> {
    fn class_count(&self) -> usize {
        self.bounds.len()
    }

    fn partition(&self) -> Partition {
        let n = self.class_of.len();
        let mut map = vec![usize::MAX; self.bounds.len()];
        let mut classes: Vec<Vec<usize>> = Vec::with_capacity(self.bounds.len());
        for v in 0..n {
            let c = self.class_of[v];
            if map[c] == usize::MAX {
                map[c] = classes.len();
                classes.push(Vec::new());
            }
            classes[map[c]].push(v);
        }
        Partition::from_classes(n, classes).expect("engine state is a partition")
    }

    fn step(&mut self) -> bool {
        if self.pending.is_empty() {
            return false;
        }
        let splitters = std::mem::take(&mut self.pending);
        let mut touched = Vec::new();
        let mut local = Vec::new();
        for &s in &splitters {
            let (start, end) = self.bounds[s];
            for i in start..end {
                let u = self.elems[i];
                for &w in self.graph.neighbours(u) {
                    if self.count[w] == 0 {
                        local.push(w);
                    }
                    self.count[w] += 1;
                }
            }
            for &w in &local {
                if self.signature[w].is_empty() {
                    touched.push(w);
                }
                self.signature[w].push((s as u32, self.count[w]));
                self.count[w] = 0;
            }
            local.clear();
        }

        {
            let class_of = &self.class_of;
            let sig = &self.signature;
            touched.sort_by(|&a, &b| {
                class_of[a]
                    .cmp(&class_of[b])
                    .then_with(|| sig[a].cmp(&sig[b]))
            });
        }

        let mut changed = false;
        let mut i = 0;
        while i < touched.len() {
            let c = self.class_of[touched[i]];
            let mut j = i;
            while j < touched.len() && self.class_of[touched[j]] == c {
                j += 1;
            }
            let members = &touched[i..j];
            let (start, end) = self.bounds[c];
            let untouched = (end - start) - members.len();
            // group boundaries inside `members`
            let mut cuts = vec![0];
            for k in 1..members.len() {
                if self.signature[members[k]] != self.signature[members[k - 1]] {
                    cuts.push(k);
                }
            }
            cuts.push(members.len());
            let groups = cuts.len() - 1;
            if untouched > 0 || groups > 1 {
                changed = true;
                let members = members.to_vec();
                let tail = self.move_to_tail(c, &members);
                let mut fragments: Vec<(usize, usize)> = Vec::with_capacity(groups + 1);
                if untouched > 0 {
                    fragments.push((start, tail));
                }
                for g in 0..groups {
                    fragments.push((tail + cuts[g], tail + cuts[g + 1]));
                }
                let largest = fragments
                    .iter()
                    .enumerate()
                    .max_by(|a, b| {
                        (a.1 .1 - a.1 .0)
                            .cmp(&(b.1 .1 - b.1 .0))
                            .then_with(|| b.0.cmp(&a.0))
                    })
                    .map(|(k, _)| k)
                    .expect("at least two fragments");
                for (k, &(fs, fe)) in fragments.iter().enumerate() {
                    let id = if k == 0 {
                        c
                    } else {
                        self.bounds.push((fs, fe));
                        self.bounds.len() - 1
                    };
                    if k == 0 {
                        self.bounds[c] = (fs, fe);
                    } else {
                        for p in fs..fe {
                            self.class_of[self.elems[p]] = id;
                        }
                    }
                    if k != largest {
                        self.pending.push(id);
                    }
                }
            }
            i = j;
        }
        for &w in &touched {
            self.signature[w].clear();
        }
        changed
    }
}
