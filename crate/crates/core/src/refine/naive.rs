use super::{RefinementEngine, RoundState};
use crate::graph::Graph;
use crate::partition::Partition;

/// Recomputes every vertex's colour from scratch each round by sorting
/// `(own colour, sorted neighbour colours)` signatures.
pub struct NaiveEngine;

impl RefinementEngine for NaiveEngine {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn summary(&self) -> &'static str {
        "reference engine: full signature recomputation every round"
    }

    fn start<'g>(&self, graph: &'g Graph, initial: &Partition) -> Box<dyn RoundState + 'g> {
        Box::new(NaiveState {
            graph,
            colours: initial.colours(),
            classes: initial.len(),
        })
    }
}

struct NaiveState<'g> {
    graph: &'g Graph,
    colours: Vec<usize>,
    classes: usize,
}

impl RoundState for NaiveState<'_> {
    fn class_count(&self) -> usize {
        self.classes
    }

    fn partition(&self) -> Partition {
        Partition::from_colouring(&self.colours)
    }

    fn step(&mut self) -> bool {
        let n = self.colours.len();
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut ns: Vec<usize> = self
                    .graph
                    .neighbours(v)
                    .iter()
                    .map(|&w| self.colours[w])
                    .collect();
                ns.sort_unstable();
                (self.colours[v], ns)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| signatures[a].cmp(&signatures[b]));
        let mut raw = vec![0; n];
        let mut id = 0;
        for w in order.windows(2) {
            if signatures[w[0]] != signatures[w[1]] {
                id += 1;
            }
            raw[w[1]] = id;
        }
        // renumber by smallest member
        let mut map = vec![usize::MAX; id + 1];
        let mut next = 0;
        for v in 0..n {
            if map[raw[v]] == usize::MAX {
                map[raw[v]] = next;
                next += 1;
            }
            self.colours[v] = map[raw[v]];
        }
        let changed = next != self.classes;
        self.classes = next;
        changed
    }
}
