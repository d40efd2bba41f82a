//! String codes for long-refinement graphs with degrees 2 and 3.
//!
//! A code is `S` followed by one letter per further vertex pair: `0` for a
//! pair of degree-2 vertices, `1` for an adjacent pair of degree-3 vertices,
//! and `X` for the two pairs wired to the `S` pair. A `^` after a `1` or `X`
//! subdivides that pair's edge with an extra "hat" vertex. Positions are
//! 1-based throughout; pair `i` consists of vertices `2(i-1)` and `2(i-1)+1`
//! and the hat vertex, if any, is `2ℓ`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::Graph;
use crate::partition::Partition;
use crate::refine;
use crate::search;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Zero,
    One,
    S,
    X,
}

impl Letter {
    pub fn symbol(self) -> char {
        match self {
            Letter::Zero => '0',
            Letter::One => '1',
            Letter::S => 'S',
            Letter::X => 'X',
        }
    }

    fn from_symbol(c: char) -> Option<Letter> {
        match c {
            '0' => Some(Letter::Zero),
            '1' => Some(Letter::One),
            'S' => Some(Letter::S),
            'X' => Some(Letter::X),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("code must start with 'S'")]
    MissingS,
    #[error("'S' at position {position}; it may only appear at position 1")]
    MisplacedS { position: usize },
    #[error("unexpected character {found:?} at position {position}")]
    InvalidCharacter { position: usize, found: char },
    #[error("code needs exactly two X letters, found {found}")]
    WrongXCount { found: usize },
    #[error("hat on a 0 at position {position}")]
    HatOnZero { position: usize },
    #[error("hat on S at position {position}")]
    HatOnS { position: usize },
    #[error("second hat at position {position}; at most one is allowed")]
    MultipleHats { position: usize },
    #[error("'^' at position {position} does not follow a letter")]
    StrayHat { position: usize },
    #[error("code has length {length}; at least 3 letters are needed")]
    TooShort { length: usize },
    #[error("code is not realizable: {0}")]
    NotRealizable(String),
    #[error("graph is not encodable: {0}")]
    NotEncodable(String),
    #[error("graph violates the pair-chain structure: {0}")]
    StructureError(String),
}

/// A validated code string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Code {
    letters: Vec<Letter>,
    /// 0-based index of the hatted letter.
    hat: Option<usize>,
}

impl Code {
    /// Validates `letters` with an optional hat at 1-based `hat_position`.
    pub fn new(letters: Vec<Letter>, hat_position: Option<usize>) -> Result<Code, CodeError> {
        if letters.first() != Some(&Letter::S) {
            return Err(CodeError::MissingS);
        }
        if let Some(i) = letters.iter().skip(1).position(|&l| l == Letter::S) {
            return Err(CodeError::MisplacedS { position: i + 2 });
        }
        if let Some(p) = hat_position {
            match letters.get(p.wrapping_sub(1)) {
                Some(Letter::Zero) => return Err(CodeError::HatOnZero { position: p }),
                Some(Letter::S) => return Err(CodeError::HatOnS { position: p }),
                Some(_) => {}
                None => return Err(CodeError::StrayHat { position: p }),
            }
        }
        let xs = letters.iter().filter(|&&l| l == Letter::X).count();
        if xs != 2 {
            return Err(CodeError::WrongXCount { found: xs });
        }
        if letters.len() < 3 {
            return Err(CodeError::TooShort {
                length: letters.len(),
            });
        }
        Ok(Code {
            letters,
            hat: hat_position.map(|p| p - 1),
        })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The length ℓ, counting `S`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// 1-based position of the hatted letter.
    pub fn hat_position(&self) -> Option<usize> {
        self.hat.map(|i| i + 1)
    }

    /// 1-based positions `r < r'` of the two X letters.
    pub fn x_positions(&self) -> (usize, usize) {
        let mut it = self
            .letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == Letter::X)
            .map(|(i, _)| i + 1);
        (it.next().expect("two X"), it.next().expect("two X"))
    }

    /// Number of vertices of the built graph.
    pub fn order(&self) -> usize {
        2 * self.letters.len() + self.hat.is_some() as usize
    }
}

pub fn parse_code(text: &str) -> Result<Code, CodeError> {
    let mut letters = Vec::new();
    let mut hat = None;
    for c in text.trim().chars() {
        let position = letters.len();
        if c == '^' {
            match letters.last() {
                None => return Err(CodeError::StrayHat { position: 1 }),
                Some(Letter::Zero) => return Err(CodeError::HatOnZero { position }),
                Some(Letter::S) => return Err(CodeError::HatOnS { position }),
                Some(_) if hat == Some(position) => return Err(CodeError::StrayHat { position }),
                Some(_) if hat.is_some() => return Err(CodeError::MultipleHats { position }),
                Some(_) => hat = Some(position),
            }
            continue;
        }
        match Letter::from_symbol(c) {
            Some(l) => letters.push(l),
            None => {
                return Err(CodeError::InvalidCharacter {
                    position: position + 1,
                    found: c,
                })
            }
        }
    }
    Code::new(letters, hat)
}

pub fn render_code(code: &Code) -> String {
    let mut out = String::with_capacity(code.len() + 1);
    for (i, l) in code.letters.iter().enumerate() {
        out.push(l.symbol());
        if code.hat == Some(i) {
            out.push('^');
        }
    }
    out
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_code(self))
    }
}

impl FromStr for Code {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_code(s)
    }
}

pub fn code_order(code: &Code) -> usize {
    code.order()
}

fn vertex(i: usize, j: usize) -> usize {
    2 * i + j
}

struct EdgeSet(BTreeSet<(usize, usize)>);

impl EdgeSet {
    fn add(&mut self, u: usize, v: usize) -> Result<(), CodeError> {
        let e = (u.min(v), u.max(v));
        if !self.0.insert(e) {
            return Err(CodeError::NotRealizable(format!(
                "edge {{{}, {}}} arises twice",
                e.0, e.1
            )));
        }
        Ok(())
    }
}

/// Builds the graph of a code with the fixed vertex numbering.
///
/// The last pair has no successor, so it receives its own intra-pair edge
/// when its letter is `0` or `X`. A terminal unhatted `1` already has that
/// edge and cannot reach degree 3. A terminal `1^` keeps the completion edge
/// in addition to its subdivided letter edge, so its pair and hat form a
/// triangle.
pub fn build_graph(code: &Code) -> Result<Graph, CodeError> {
    let l = code.len();
    let last = l - 1;
    let mut edges = EdgeSet(BTreeSet::new());
    let mut hat_base = None;
    for (i, &letter) in code.letters.iter().enumerate() {
        if letter == Letter::One {
            if code.hat == Some(i) {
                hat_base = Some(i);
            } else if i != last {
                edges.add(vertex(i, 0), vertex(i, 1))?;
            }
        }
    }
    for i in 0..last {
        for j in 0..2 {
            edges.add(vertex(i, j), vertex(i + 1, j))?;
        }
    }
    let (r, r2) = code.x_positions();
    for j in 0..2 {
        edges.add(vertex(r - 1, j), vertex(0, 0))?;
    }
    for j in 0..2 {
        edges.add(vertex(r2 - 1, j), vertex(0, 1))?;
    }
    match (code.letters[last], code.hat == Some(last)) {
        (Letter::X, true) => hat_base = Some(last),
        (Letter::Zero | Letter::X, false) | (Letter::One, true) => {
            edges.add(vertex(last, 0), vertex(last, 1))?
        }
        (Letter::One, false) => {
            return Err(CodeError::NotRealizable(
                "terminal letter 1 without a hat cannot reach degree 3".into(),
            ))
        }
        (letter, _) => {
            return Err(CodeError::NotRealizable(format!(
                "terminal letter {} is not allowed",
                letter.symbol()
            )))
        }
    }
    let mut n = 2 * l;
    if let Some(p) = code.hat {
        let Some(base) = hat_base else {
            return Err(CodeError::NotRealizable(format!(
                "hatted pair at position {} is not adjacent",
                p + 1
            )));
        };
        edges.add(vertex(base, 0), n)?;
        edges.add(vertex(base, 1), n)?;
        n += 1;
    }
    let g = Graph::from_edges(n, edges.0).expect("code edges are in range");
    let degrees = g.degree_summary();
    if degrees.degrees().iter().any(|&d| d != 2 && d != 3) {
        return Err(CodeError::NotRealizable(format!(
            "degrees {degrees} are not within {{2, 3}}"
        )));
    }
    if !g.is_connected() {
        return Err(CodeError::NotRealizable("graph is disconnected".into()));
    }
    Ok(g)
}

/// Pairs of a decoded graph in splitting order, with their letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairChain {
    pub pairs: Vec<[usize; 2]>,
    pub letters: Vec<Letter>,
    pub hat: Option<usize>,
    /// Index into `pairs` of the pair adjacent to the hat.
    pub hat_base: Option<usize>,
}

impl PairChain {
    /// Reads the pair chain off the refinement trace of `g`.
    pub fn extract(g: &Graph) -> Result<PairChain, CodeError> {
        let n = g.order();
        let degrees = g.degree_summary();
        if n == 0 || degrees.degrees().iter().any(|&d| d != 2 && d != 3) {
            return Err(CodeError::NotEncodable(format!(
                "degrees {degrees} are not within {{2, 3}}"
            )));
        }
        let trace = refine::run(g, Some(&Partition::unit(n)))
            .map_err(|e| CodeError::NotEncodable(e.to_string()))?;
        if trace.wl1() + 1 != n {
            return Err(CodeError::NotEncodable(format!(
                "not a long-refinement graph (wl1 = {}, order = {n})",
                trace.wl1()
            )));
        }
        let rounds = trace.rounds();
        let paired = rounds.iter().position(|p| {
            let singles = p.classes().iter().filter(|c| c.len() == 1).count();
            p.classes().iter().all(|c| c.len() <= 2) && singles == n % 2
        });
        let Some(start) = paired else {
            return Err(CodeError::NotEncodable("no round consists of pairs".into()));
        };
        let hat = rounds[start]
            .classes()
            .iter()
            .find(|c| c.len() == 1)
            .map(|c| c[0]);
        let mut pairs = Vec::new();
        for t in start..rounds.len() - 1 {
            let next = rounds[t + 1].classes();
            let split: Vec<&Vec<usize>> = rounds[t]
                .classes()
                .iter()
                .filter(|c| c.len() == 2 && !next.contains(c))
                .collect();
            match split.as_slice() {
                [] => {}
                [c] => pairs.push([c[0], c[1]]),
                _ => {
                    return Err(CodeError::StructureError(format!(
                        "{} pairs split in round {}",
                        split.len(),
                        t + 1
                    )))
                }
            }
        }
        if pairs.len() != n / 2 {
            return Err(CodeError::StructureError(format!(
                "{} of {} pairs split",
                pairs.len(),
                n / 2
            )));
        }
        let mut index = vec![usize::MAX; n];
        for (i, p) in pairs.iter().enumerate() {
            index[p[0]] = i;
            index[p[1]] = i;
        }
        // Orient pairs so that consecutive pairs match position by position.
        for i in 0..pairs.len() - 1 {
            let [a, b] = pairs[i];
            let next = pairs[i + 1];
            let na = next.iter().filter(|&&w| g.has_edge(a, w)).count();
            let nb = next.iter().filter(|&&w| g.has_edge(b, w)).count();
            if na != 1 || nb != 1 {
                return Err(CodeError::StructureError(format!(
                    "pairs {} and {} do not induce a perfect matching",
                    i + 1,
                    i + 2
                )));
            }
            let partner_of_a = *next.iter().find(|&&w| g.has_edge(a, w)).expect("counted");
            if partner_of_a != next[0] {
                pairs[i + 1].swap(0, 1);
            }
            if g.has_edge(b, pairs[i + 1][0]) {
                return Err(CodeError::StructureError(format!(
                    "pairs {} and {} do not induce a perfect matching",
                    i + 1,
                    i + 2
                )));
            }
        }
        let s = pairs[0];
        let mut letters = vec![Letter::S];
        for (i, p) in pairs.iter().enumerate().skip(1) {
            let wired = i != 1 && p.iter().any(|&v| s.iter().any(|&w| g.has_edge(v, w)));
            let letter = if g.degree(p[0]) == 2 && g.degree(p[1]) == 2 {
                Letter::Zero
            } else if wired {
                Letter::X
            } else {
                Letter::One
            };
            letters.push(letter);
        }
        let hat_base = match hat {
            Some(h) => {
                let ns = g.neighbours(h);
                if ns.len() != 2 || index[ns[0]] != index[ns[1]] {
                    return Err(CodeError::StructureError(
                        "hat vertex is not attached to a single pair".into(),
                    ));
                }
                Some(index[ns[0]])
            }
            None => None,
        };
        let chain = PairChain {
            pairs,
            letters,
            hat,
            hat_base,
        };
        chain.check_s_wiring(g)?;
        Ok(chain)
    }

    /// The first pair has exactly two neighbour pairs besides its successor,
    /// and each of its vertices is adjacent to the whole of one of them.
    fn check_s_wiring(&self, g: &Graph) -> Result<(), CodeError> {
        let s = self.pairs[0];
        let mut wired = BTreeSet::new();
        for (i, p) in self.pairs.iter().enumerate().skip(2) {
            if p.iter().any(|&v| s.iter().any(|&w| g.has_edge(v, w))) {
                wired.insert(i);
            }
        }
        let fits = wired.len() == 2
            && wired.iter().all(|&i| {
                let p = self.pairs[i];
                s.iter().any(|&w| g.has_edge(w, p[0]) && g.has_edge(w, p[1]))
            });
        if !fits {
            return Err(CodeError::StructureError(
                "first pair is not wired to exactly two whole pairs".into(),
            ));
        }
        Ok(())
    }

    pub fn code(&self) -> Result<Code, CodeError> {
        Code::new(self.letters.clone(), self.hat_base.map(|i| i + 1))
            .map_err(|e| CodeError::StructureError(format!("decoded letters are invalid: {e}")))
    }
}

/// Recovers the code of a long-refinement graph with degrees 2 and 3.
///
/// The decoded code is checked by rebuilding it and comparing canonical
/// forms, so a returned code always describes a graph isomorphic to `g`.
pub fn decode_graph(g: &Graph) -> Result<Code, CodeError> {
    let chain = PairChain::extract(g)?;
    let code = chain.code()?;
    let rebuilt = build_graph(&code)
        .map_err(|e| CodeError::StructureError(format!("decoded code {code} does not build: {e}")))?;
    if !search::is_isomorphic(&rebuilt, g) {
        return Err(CodeError::StructureError(format!(
            "decoded code {code} builds a non-isomorphic graph"
        )));
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;
    use crate::refine::wl1_iterations;

    fn built(text: &str) -> Graph {
        build_graph(&parse_code(text).unwrap()).unwrap()
    }

    #[test]
    fn parses_plain_and_hatted_codes() {
        let c = parse_code("S011XX").unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.x_positions(), (5, 6));
        assert_eq!(c.hat_position(), None);
        let h = parse_code("S1^11XX").unwrap();
        assert_eq!(h.hat_position(), Some(2));
        assert_eq!(render_code(&h), "S1^11XX");
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse_code("S01X"), Err(CodeError::WrongXCount { found: 1 }));
        assert_eq!(parse_code("011XX"), Err(CodeError::MissingS));
        assert_eq!(parse_code("S0^1XX"), Err(CodeError::HatOnZero { position: 2 }));
        assert_eq!(parse_code("S^01XX"), Err(CodeError::HatOnS { position: 1 }));
        assert_eq!(
            parse_code("S1^1^XX"),
            Err(CodeError::MultipleHats { position: 3 })
        );
        assert_eq!(parse_code("S1^^XX"), Err(CodeError::StrayHat { position: 2 }));
        assert_eq!(parse_code("^S1XX"), Err(CodeError::StrayHat { position: 1 }));
        assert_eq!(parse_code("S0SXX"), Err(CodeError::MisplacedS { position: 3 }));
        assert_eq!(
            parse_code("S0aXX"),
            Err(CodeError::InvalidCharacter { position: 3, found: 'a' })
        );
        assert_eq!(parse_code("SXX"), Ok(Code::new(vec![Letter::S, Letter::X, Letter::X], None).unwrap()));
    }

    #[test]
    fn orders() {
        assert_eq!(code_order(&parse_code("S011XX").unwrap()), 12);
        assert_eq!(code_order(&parse_code("S1^11XX").unwrap()), 13);
        assert_eq!(code_order(&parse_code("S0X1X^").unwrap()), 11);
    }

    #[test]
    fn built_iteration_counts() {
        assert_eq!(wl1_iterations(&built("S011XX")).unwrap(), 11);
        assert_eq!(wl1_iterations(&built("S00X1X0")).unwrap(), 13);
        assert_eq!(wl1_iterations(&built("S11100111X1X1110")).unwrap(), 31);
        assert_eq!(wl1_iterations(&built("S1^11XX")).unwrap(), 12);
        assert_eq!(wl1_iterations(&built("S0X1X^")).unwrap(), 10);
    }

    #[test]
    fn s0x1x_hat_has_three_degree_two_vertices() {
        let g = built("S0X1X^");
        assert_eq!(g.order(), 11);
        assert_eq!(g.degree_summary().count(2), 3);
        assert_eq!(g.degree(10), 2);
    }

    #[test]
    fn unrealizable_codes() {
        for text in ["S0XX1", "SX0X", "S1X0X1", "S0X^1X"] {
            let code = parse_code(text).unwrap();
            assert!(
                matches!(build_graph(&code), Err(CodeError::NotRealizable(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn decode_round_trips() {
        for text in ["S011XX", "S0X1X^", "S1^11XX", "S00X1X0", "S11100111X1X1110"] {
            assert_eq!(decode_graph(&built(text)).unwrap().to_string(), text);
        }
    }

    #[test]
    fn decode_rejects_regular_graphs() {
        assert!(matches!(decode_graph(&cycle(6)), Err(CodeError::NotEncodable(_))));
        assert!(matches!(
            decode_graph(&crate::graph::star(3)),
            Err(CodeError::NotEncodable(_))
        ));
    }
}
