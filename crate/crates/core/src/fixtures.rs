//! Embedded example graphs.

use crate::graph::Graph;
use crate::graph6;

fn from_lists(lists: &[&[usize]]) -> Graph {
    let owned: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
    Graph::from_adjacency_lists(&owned).expect("fixture adjacency lists are symmetric")
}

/// Long-refinement graph on 12 vertices with degrees 1 and 5.
pub fn degree_1_5() -> Graph {
    from_lists(&[
        &[1],
        &[0, 2, 3, 4, 5],
        &[1, 3, 5, 7, 10],
        &[1, 2, 4, 6, 10],
        &[1, 3, 5, 9, 11],
        &[1, 2, 4, 8, 11],
        &[3, 7, 8, 9, 11],
        &[2, 6, 8, 9, 10],
        &[5, 6, 7, 10, 11],
        &[4, 6, 7, 10, 11],
        &[2, 3, 7, 8, 9],
        &[4, 5, 6, 8, 9],
    ])
}

/// Long-refinement graph on 14 vertices with degrees 1 and 3.
pub fn degree_1_3() -> Graph {
    from_lists(&[
        &[1],
        &[0, 2, 3],
        &[1, 11, 13],
        &[1, 10, 12],
        &[5, 7, 10],
        &[4, 6, 10],
        &[5, 9, 11],
        &[4, 8, 11],
        &[7, 9, 13],
        &[6, 8, 12],
        &[3, 4, 5],
        &[2, 6, 7],
        &[3, 9, 13],
        &[2, 8, 12],
    ])
}

/// Long-refinement graph of order 10 with degrees 2 and 4: the smallest
/// canonical graph6 string among the 16 found by `count_long_refinement(10)`.
pub const ORDER10_G6: &str = "I?OipqUdO";

pub fn order10() -> Graph {
    graph6::decode_str(ORDER10_G6).expect("embedded graph6 is valid")
}

/// Long-refinement graph of order 11 with degrees 2 and 3, the smallest of
/// the 24 found by `count_long_refinement(11)`. It is isomorphic to the graph
/// of `S0X1X^`, which ties the search output to the code construction.
pub const ORDER11_G6: &str = "J?D@AgkccS?";

pub fn order11() -> Graph {
    graph6::decode_str(ORDER11_G6).expect("embedded graph6 is valid")
}
