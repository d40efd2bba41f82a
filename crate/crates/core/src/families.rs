//! The eleven code families, the order-raising constructions, and a witness
//! builder that produces a verified slow-refining graph for every order from
//! 10 upwards.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::codec::{build_graph, parse_code, Code, CodeError};
use crate::fixtures;
use crate::graph::Graph;
use crate::refine::{is_long_refinement, wl1_iterations};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family {family} has no member with k = {k}")]
    InvalidMember { family: FamilyId, k: i64 },
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("no witness below order 10 (requested {0})")]
    OutOfRange(usize),
    #[error("construction failed verification: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FamilyId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    O1,
    O2,
    O3,
    O4,
    O5,
}

impl FamilyId {
    pub const ALL: [FamilyId; 11] = [
        FamilyId::E1,
        FamilyId::E2,
        FamilyId::E3,
        FamilyId::E4,
        FamilyId::E5,
        FamilyId::E6,
        FamilyId::O1,
        FamilyId::O2,
        FamilyId::O3,
        FamilyId::O4,
        FamilyId::O5,
    ];

    pub fn is_parametric(self) -> bool {
        !matches!(self, FamilyId::E1 | FamilyId::O1)
    }

    /// Smallest admissible `k`; the extra singleton members of O2 and O3
    /// are addressed as `k = -1`.
    pub fn min_k(self) -> i64 {
        match self {
            FamilyId::O2 | FamilyId::O3 => -1,
            _ => 0,
        }
    }

    /// The code template with `k` written symbolically.
    pub fn pattern(self) -> &'static str {
        match self {
            FamilyId::E1 => "S011XX",
            FamilyId::E2 => "S1^k001^kX1X1^k0",
            FamilyId::E3 => "S1^k11001^kXX1^k0",
            FamilyId::E4 => "S1^k0011^kXX1^k10",
            FamilyId::E5 => "S011(011)^k00(110)^kXX(011)^k0",
            FamilyId::E6 => "S(011)^k00(110)^k1X0X1(011)^k0",
            FamilyId::O1 => "S1\u{302}11XX",
            FamilyId::O2 => "S0X1X\u{302} | S1^k1011^kX1X1^k1\u{302}",
            FamilyId::O3 => "S110XX\u{302} | S111^k1011^kXX1^k1\u{302}",
            FamilyId::O4 => "S1^k01^k1XX1^k1\u{302}",
            FamilyId::O5 => "S(011)^k00(110)^kX1\u{302}X(011)^k0",
        }
    }

    /// Order of the member with parameter `k`.
    pub fn order(self, k: i64) -> Result<usize, FamilyError> {
        Ok(family_member(self, k)?.order())
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// The code of member `k` of `family`.
pub fn family_member(family: FamilyId, k: i64) -> Result<Code, FamilyError> {
    let invalid = FamilyError::InvalidMember { family, k };
    if k < family.min_k() || (!family.is_parametric() && k != 0) {
        return Err(invalid);
    }
    let ones = "1".repeat(k.max(0) as usize);
    let a = "011".repeat(k.max(0) as usize);
    let b = "110".repeat(k.max(0) as usize);
    let text = match (family, k) {
        (FamilyId::E1, _) => "S011XX".to_string(),
        (FamilyId::E2, _) => format!("S{ones}00{ones}X1X{ones}0"),
        (FamilyId::E3, _) => format!("S{ones}1100{ones}XX{ones}0"),
        (FamilyId::E4, _) => format!("S{ones}001{ones}XX{ones}10"),
        (FamilyId::E5, _) => format!("S011{a}00{b}XX{a}0"),
        (FamilyId::E6, _) => format!("S{a}00{b}1X0X1{a}0"),
        (FamilyId::O1, _) => "S1^11XX".to_string(),
        (FamilyId::O2, -1) => "S0X1X^".to_string(),
        (FamilyId::O2, _) => format!("S{ones}101{ones}X1X{ones}1^"),
        (FamilyId::O3, -1) => "S110XX^".to_string(),
        (FamilyId::O3, _) => format!("S11{ones}101{ones}XX{ones}1^"),
        (FamilyId::O4, _) => format!("S{ones}0{ones}1XX{ones}1^"),
        (FamilyId::O5, _) => format!("S{a}00{b}X1^X{a}0"),
    };
    Ok(parse_code(&text)?)
}

/// One catalogue row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogueEntry {
    pub family: FamilyId,
    pub k: i64,
    pub code: String,
    pub order: usize,
    pub achieved: usize,
}

/// Every member with `k <= max_k`, built and run through the engine.
pub fn catalogue(max_k: i64) -> Result<Vec<CatalogueEntry>, FamilyError> {
    let mut rows = Vec::new();
    for family in FamilyId::ALL {
        let top = if family.is_parametric() { max_k } else { 0 };
        for k in family.min_k()..=top {
            let code = family_member(family, k)?;
            let g = build_graph(&code)?;
            rows.push(CatalogueEntry {
                family,
                k,
                code: code.to_string(),
                order: g.order(),
                achieved: wl1_iterations(&g).expect("built graphs are non-empty"),
            });
        }
    }
    Ok(rows)
}

pub fn catalogue_csv(rows: &[CatalogueEntry]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8")
}

/// The uncoloured path on `n` vertices.
pub fn path_graph(n: usize) -> Graph {
    crate::graph::path(n)
}

fn require_long_refinement(g: &Graph, what: &str) -> Result<(), FamilyError> {
    if g.order() == 0 || !is_long_refinement(g).expect("non-empty graph") {
        return Err(FamilyError::NotApplicable(format!(
            "{what} needs a long-refinement input"
        )));
    }
    Ok(())
}

/// Adds a vertex adjacent to every vertex of degree `d`.
///
/// The input must be long-refinement with degrees exactly `{d, d+1}`, and
/// the number of degree-`d` vertices must differ from `d + 1` (otherwise
/// the result is `(d+1)`-regular).
pub fn apex_extension(g: &Graph, d: usize) -> Result<Graph, FamilyError> {
    require_long_refinement(g, "apex extension")?;
    let degrees = g.degree_summary();
    if degrees.degrees() != [d, d + 1] {
        return Err(FamilyError::NotApplicable(format!(
            "degrees {degrees} are not {{{d}, {}}}",
            d + 1
        )));
    }
    let low: Vec<usize> = (0..g.order()).filter(|&v| g.degree(v) == d).collect();
    if low.len() == d + 1 {
        return Err(FamilyError::NotApplicable(format!(
            "{} vertices of degree {d} would make the result regular",
            low.len()
        )));
    }
    let out = g.add_vertex(&low).expect("neighbours are in range");
    if !is_long_refinement(&out).expect("non-empty graph") {
        return Err(FamilyError::VerificationFailed(
            "apex extension is not long-refinement".into(),
        ));
    }
    Ok(out)
}

/// Adds an isolated vertex to a long-refinement graph, giving `n - 2`
/// iterations on `n` vertices.
pub fn add_isolated(g: &Graph) -> Result<Graph, FamilyError> {
    require_long_refinement(g, "adding an isolated vertex")?;
    let out = g.add_vertex(&[]).expect("no neighbours");
    let achieved = wl1_iterations(&out).expect("non-empty graph");
    if achieved + 2 != out.order() {
        return Err(FamilyError::VerificationFailed(format!(
            "isolated extension reached {achieved} iterations on {} vertices",
            out.order()
        )));
    }
    Ok(out)
}

/// Turns a long-refinement graph with degrees `{1, 3}` into one with degrees
/// `{2, 3}`: two degree-1 vertices are joined by an edge, a single one is
/// deleted.
pub fn degree1_transform(g: &Graph) -> Result<Graph, FamilyError> {
    let degrees = g.degree_summary();
    if degrees.degrees() != [1, 3] {
        return Err(FamilyError::NotApplicable(format!(
            "degrees {degrees} are not {{1, 3}}"
        )));
    }
    require_long_refinement(g, "the degree-1 transform")?;
    let ones: Vec<usize> = (0..g.order()).filter(|&v| g.degree(v) == 1).collect();
    let out = match ones.as_slice() {
        [v] => g.remove_vertex(*v),
        [u, v] => g
            .add_edge(*u, *v)
            .map_err(|e| FamilyError::NotApplicable(e.to_string()))?,
        _ => {
            return Err(FamilyError::NotApplicable(format!(
                "{} vertices of degree 1",
                ones.len()
            )))
        }
    };
    if out.degree_summary().degrees() != [2, 3] || !is_long_refinement(&out).expect("non-empty") {
        return Err(FamilyError::VerificationFailed(
            "transformed graph is not a {2, 3} long-refinement graph".into(),
        ));
    }
    Ok(out)
}

/// How a witness graph was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Family { family: FamilyId, k: i64, code: String },
    Fixture(&'static str),
    Apex(Box<Provenance>),
    Isolated(Box<Provenance>),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Family { family, k, code } => write!(f, "{family}(k={k}) {code}"),
            Provenance::Fixture(name) => write!(f, "fixture {name}"),
            Provenance::Apex(inner) => write!(f, "apex({inner})"),
            Provenance::Isolated(inner) => write!(f, "isolated({inner})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub graph: Graph,
    pub order: usize,
    pub achieved: usize,
    pub provenance: Provenance,
}

/// Family members indexed by order, first catalogue entry winning.
pub fn members_by_order(max_order: usize) -> BTreeMap<usize, Vec<(FamilyId, i64)>> {
    let mut table: BTreeMap<usize, Vec<(FamilyId, i64)>> = BTreeMap::new();
    for family in FamilyId::ALL {
        let mut k = family.min_k();
        while let Ok(order) = family.order(k) {
            if order > max_order {
                break;
            }
            table.entry(order).or_default().push((family, k));
            if !family.is_parametric() {
                break;
            }
            k += 1;
        }
    }
    table
}

fn member_graph(family: FamilyId, k: i64) -> Result<(Graph, Provenance), FamilyError> {
    let code = family_member(family, k)?;
    let g = build_graph(&code)?;
    Ok((
        g,
        Provenance::Family {
            family,
            k,
            code: code.to_string(),
        },
    ))
}

fn candidate(n: usize, table: &BTreeMap<usize, Vec<(FamilyId, i64)>>) -> Result<(Graph, Provenance), FamilyError> {
    if n == 10 {
        return Ok((fixtures::order10(), Provenance::Fixture("order-10 search result")));
    }
    if let Some(&(family, k)) = table.get(&n).and_then(|m| m.first()) {
        return member_graph(family, k);
    }
    for &(family, k) in table.get(&(n - 1)).into_iter().flatten() {
        let (g, prov) = member_graph(family, k)?;
        if let Ok(out) = apex_extension(&g, 2) {
            return Ok((out, Provenance::Apex(Box::new(prov))));
        }
    }
    let (g, prov) = candidate(n - 1, table)?;
    Ok((add_isolated(&g)?, Provenance::Isolated(Box::new(prov))))
}

/// A graph of order `n` on which refinement needs `n - 1` iterations, or
/// `n - 2` where no construction reaches `n - 1`.
pub fn witness(n: usize) -> Result<Witness, FamilyError> {
    if n < 10 {
        return Err(FamilyError::OutOfRange(n));
    }
    let table = members_by_order(n);
    let (graph, provenance) = candidate(n, &table)?;
    let achieved = wl1_iterations(&graph).expect("non-empty graph");
    if graph.order() != n || achieved + 2 < n {
        return Err(FamilyError::VerificationFailed(format!(
            "{provenance} gives {achieved} iterations on {} vertices",
            graph.order()
        )));
    }
    Ok(Witness {
        graph,
        order: n,
        achieved,
        provenance,
    })
}
