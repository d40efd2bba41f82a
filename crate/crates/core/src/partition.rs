//! Vertex partitions in canonical form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("vertex {0} appears in more than one class")]
    Overlap(usize),
    #[error("vertex {0} is not covered by any class")]
    Uncovered(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("empty class")]
    EmptyClass,
}

/// A partition of `0..n` into non-empty classes. Each class is sorted and
/// classes are ordered by their smallest vertex, so two partitions are equal
/// as values exactly when they are equal as set partitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    pub fn unit(n: usize) -> Self {
        let classes = if n == 0 { vec![] } else { vec![(0..n).collect()] };
        Partition { n, classes }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            n,
            classes: (0..n).map(|v| vec![v]).collect(),
        }
    }

    /// Partition induced by a colouring: vertices with equal colour values
    /// share a class.
    pub fn from_colouring<T: Eq + std::hash::Hash + Copy>(colours: &[T]) -> Self {
        let mut index = std::collections::HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (v, c) in colours.iter().enumerate() {
            let next = classes.len();
            let id = *index.entry(*c).or_insert(next);
            if id == next {
                classes.push(Vec::new());
            }
            classes[id].push(v);
        }
        Partition {
            n: colours.len(),
            classes,
        }
    }

    /// Validates and normalises an arbitrary list of classes over `0..n`.
    pub fn from_classes(n: usize, classes: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(classes.len());
        for mut class in classes {
            if class.is_empty() {
                return Err(PartitionError::EmptyClass);
            }
            for &v in &class {
                if v >= n {
                    return Err(PartitionError::OutOfRange { vertex: v, n });
                }
                if seen[v] {
                    return Err(PartitionError::Overlap(v));
                }
                seen[v] = true;
            }
            class.sort_unstable();
            out.push(class);
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(PartitionError::Uncovered(v));
        }
        out.sort_unstable_by_key(|c| c[0]);
        Ok(Partition { n, classes: out })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.n
    }

    /// Canonical colour of every vertex: the index of its class.
    pub fn colours(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, class) in self.classes.iter().enumerate() {
            for &v in class {
                out[v] = i;
            }
        }
        out
    }

    /// True if every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.n != coarser.n {
            return false;
        }
        let outer = coarser.colours();
        self.classes
            .iter()
            .all(|c| c.iter().all(|&v| outer[v] == outer[c[0]]))
    }

    /// Image of the partition under the vertex map `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Partition {
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().map(|&v| perm[v]).collect())
            .collect();
        Partition::from_classes(self.n, classes).expect("a permutation maps partitions to partitions")
    }
}
