#![allow(dead_code)]

use longref::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Edge slots of the complete graph on `n` vertices, in a fixed order.
fn slots(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Number of isomorphism classes of graphs on `n <= 7` vertices satisfying
/// `keep`, by labelled enumeration: every labelled graph not yet seen starts
/// a new class, and its whole orbit under all `n!` vertex permutations is
/// marked as seen.
pub fn labelled_class_count(n: usize, keep: impl Fn(&Graph) -> bool) -> u64 {
    assert!(n <= 7, "the labelled oracle is exponential in n^2");
    let slots = slots(n);
    let index = |u: usize, v: usize| slots.iter().position(|&e| e == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| slots.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let total = 1usize << slots.len();
    let mut seen = vec![false; total];
    let mut count = 0;
    for mask in 0..total {
        if seen[mask] {
            continue;
        }
        for image in &images {
            let mut m = 0usize;
            for (e, &target) in image.iter().enumerate() {
                m |= (mask >> e & 1) << target;
            }
            seen[m] = true;
        }
        let edges: Vec<(usize, usize)> = (0..slots.len()).filter(|e| mask >> e & 1 == 1).map(|e| slots[e]).collect();
        if keep(&Graph::from_edges(n, edges).unwrap()) {
            count += 1;
        }
    }
    count
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
