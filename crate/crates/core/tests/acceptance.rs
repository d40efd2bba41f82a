//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Set `LONGREF_EXTENDED=1` to add the order-11 exhaustive count.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use longref::codec::{build_graph, decode_graph, parse_code};
use longref::families::{catalogue, family_member, path_graph, witness, FamilyId};
use longref::graph::gnp;
use longref::refine::{self, engine, run, run_with, wl1_iterations};
use longref::search::{self, count_long_refinement, SearchConstraints};
use longref::{fixtures, graph6, Graph};

type Outcome = Result<String, String>;

type Keep = Box<dyn Fn(&Graph) -> bool>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn closed_form(family: FamilyId, k: i64) -> usize {
    let k6 = 6 * k;
    let k18 = 18 * k;
    (match family {
        FamilyId::E1 => 12,
        FamilyId::E2 => k6 + 14,
        FamilyId::E3 | FamilyId::E4 => k6 + 16,
        FamilyId::E5 | FamilyId::E6 => k18 + 18,
        FamilyId::O1 => 13,
        FamilyId::O2 if k == -1 => 11,
        FamilyId::O2 => k6 + 17,
        FamilyId::O3 if k == -1 => 13,
        FamilyId::O3 => k6 + 19,
        FamilyId::O4 => k6 + 13,
        FamilyId::O5 => k18 + 15,
    }) as usize
}

fn c1_families() -> Outcome {
    let start = Instant::now();
    let rows = catalogue(8).map_err(|e| e.to_string())?;
    for row in &rows {
        ensure(row.achieved + 1 == row.order, || {
            format!("{} k={} {}: wl1 {} on {} vertices", row.family, row.k, row.code, row.achieved, row.order)
        })?;
        ensure(row.order == closed_form(row.family, row.k), || {
            format!("{} k={}: order {} differs from closed form", row.family, row.k, row.order)
        })?;
    }
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("{} members, all wl1 = n-1, orders match closed forms ({t:.2?})", rows.len()))
}

fn c2_fixtures() -> Outcome {
    let start = Instant::now();
    let cases = [
        ("S011XX", 11),
        ("S00X1X0", 13),
        ("S11100111X1X1110", 31),
        ("S1^11XX", 12),
        ("S0X1X^", 10),
    ];
    for (code, expected) in cases {
        let g = build_graph(&parse_code(code).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let got = wl1_iterations(&g).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("{code}: wl1 {got}, expected {expected}"))?;
    }
    for (name, g, expected) in [
        ("degree {1,5} table graph", fixtures::degree_1_5(), 11),
        ("degree {1,3} table graph", fixtures::degree_1_3(), 13),
    ] {
        let got = wl1_iterations(&g).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("{name}: wl1 {got}, expected {expected}"))?;
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("7 fixtures exact ({t:.2?})"))
}

fn c3_paths() -> Outcome {
    let start = Instant::now();
    for n in 1..=100 {
        let got = wl1_iterations(&path_graph(n)).map_err(|e| e.to_string())?;
        ensure(got == (n - 1) / 2, || format!("P{n}: wl1 {got}"))?;
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("P1..P100 match floor((n-1)/2) ({t:.2?})"))
}

fn c4_negative(survivors: &mut Vec<Graph>) -> Outcome {
    let start = Instant::now();
    for n in 2..=8 {
        let r = count_long_refinement(n, &SearchConstraints::all(n)).map_err(|e| e.to_string())?;
        ensure(r.count == 0, || format!("n = {n}: {} long-refinement graphs", r.count))?;
    }
    let found = std::sync::Mutex::new(Vec::new());
    let stats = search::enumerate(&SearchConstraints::all(9), |g| {
        let graph = g.to_graph();
        if refine::is_long_refinement(&graph).unwrap() {
            found.lock().unwrap().push(graph);
        }
    })
    .map_err(|e| e.to_string())?;
    let found = found.into_inner().unwrap();
    ensure(stats.emitted == 274_668, || format!("n = 9 enumerated {} classes", stats.emitted))?;
    ensure(found.is_empty(), || format!("n = 9: {} long-refinement graphs", found.len()))?;
    survivors.extend(found);
    Ok(format!(
        "0 long-refinement graphs for n in [2,9]; 274668 classes enumerated at n = 9 ({:.2?})",
        start.elapsed()
    ))
}

/// Order-10 long-refinement graphs in canonical graph6, each checked
/// independently (9 iterations, pairwise non-isomorphic).
const ORDER10: [&str; 16] = [
    "I?OipqUdO",
    "I?h\\bbkso",
    "I?h\\bbksw",
    "I@iRY}w\\G",
    "IINcvjjfw",
    "IQ`@W~GLG",
    "IQ`@W~MNO",
    "IQiZzzy|O",
    "IRaIQGjDo",
    "I_G^Uqu\\O",
    "I_G^Uuu\\W",
    "I_lvUuu\\W",
    "I``@OmoRG",
    "I`iRY}w\\G",
    "IqG]X~y|O",
    "Ir`@W~MNO",
];

const ORDER11: [&str; 24] = [
    "J?D@AgkccS?",
    "J?EQPkmfar?",
    "J@hkafmvVe?",
    "J@hkafmv^f_",
    "JALXrlm}VL?",
    "JALzubHhTD_",
    "JD^Ul\\n~Vt?",
    "JIL_}Ibd{^?",
    "JJWOYknxCs_",
    "JJ^U\\mmv\\v?",
    "JQ~ellurXv_",
    "JRl~e^y|]^_",
    "JRr@OirRv}?",
    "JRr@OmrR~w?",
    "JSP@OkKgI`_",
    "J[dYsHBLXV?",
    "J[dYslMLXV_",
    "J_GO^VYlrl?",
    "J_GSQSeD^_?",
    "J``@OgBkIX?",
    "J``@OirR~w?",
    "J``DthmVVw?",
    "J``LA_kC~}?",
    "JwEQPkmfar?",
];

fn c5_positive(survivors: &mut Vec<Graph>) -> Outcome {
    let start = Instant::now();
    let r = count_long_refinement(10, &SearchConstraints::all(10)).map_err(|e| e.to_string())?;
    ensure(r.count == 16, || format!("n = 10: {} long-refinement graphs", r.count))?;
    ensure(r.graphs == ORDER10, || "n = 10: graph list differs from the frozen list".into())?;
    for g6 in &r.graphs {
        survivors.push(graph6::decode_str(g6).map_err(|e| e.to_string())?);
    }
    let t = within(start, Duration::from_secs(3600))?;
    Ok(format!("16 long-refinement graphs at n = 10 ({t:.2?})"))
}

fn c5_extended(survivors: &mut Vec<Graph>) -> Option<Outcome> {
    if std::env::var("LONGREF_EXTENDED").as_deref() != Ok("1") {
        return None;
    }
    let start = Instant::now();
    Some((|| {
        let r = count_long_refinement(11, &SearchConstraints::all(11)).map_err(|e| e.to_string())?;
        ensure(r.count == 24, || format!("n = 11: {} long-refinement graphs", r.count))?;
        ensure(r.graphs == ORDER11, || "n = 11: graph list differs from the frozen list".into())?;
        for g6 in &r.graphs {
            survivors.push(graph6::decode_str(g6).map_err(|e| e.to_string())?);
        }
        Ok(format!("24 long-refinement graphs at n = 11 ({:.2?})", start.elapsed()))
    })())
}

fn c6_witnesses() -> Outcome {
    let start = Instant::now();
    let mut short = 0;
    for n in 10..=200 {
        let w = witness(n).map_err(|e| format!("n = {n}: {e}"))?;
        let expected = if n == 12 || !matches!(n % 18, 6 | 12) { n - 1 } else { n - 2 };
        let achieved = wl1_iterations(&w.graph).map_err(|e| e.to_string())?;
        ensure(w.graph.order() == n && achieved == expected && w.achieved == achieved, || {
            format!("n = {n}: achieved {achieved}, expected {expected} ({})", w.provenance)
        })?;
        short += (expected == n - 2) as usize;
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("191 witnesses verified, {short} at n-2 ({t:.2?})"))
}

fn c7_engines() -> Outcome {
    let start = Instant::now();
    let naive = engine("naive").map_err(|e| e.to_string())?;
    let split = engine("split").map_err(|e| e.to_string())?;
    let mut rng = common::rng(0x5eed_0007);
    for i in 0..10_000 {
        let p = [0.05, 0.5, 0.95][i % 3];
        let n = rng.gen_range(1..=200);
        let g = gnp(n, p, &mut rng);
        let a = run_with(naive, &g, None).map_err(|e| e.to_string())?;
        let b = run_with(split, &g, None).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("sample {i} (n = {n}, p = {p}): engines disagree"))?;
    }
    Ok(format!("10000 samples, identical per-round partitions ({:.2?})", start.elapsed()))
}

fn c8_complement() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(0x5eed_0008);
    for i in 0..1_000 {
        let n = rng.gen_range(1..=100);
        let p = rng.gen_range(0.0..=1.0);
        let g = gnp(n, p, &mut rng);
        let a = run(&g, None).map_err(|e| e.to_string())?;
        let b = run(&g.complement(), None).map_err(|e| e.to_string())?;
        ensure(a.rounds() == b.rounds(), || format!("sample {i} (n = {n}): partitions differ"))?;
    }
    Ok(format!("1000 samples, identical per-round partitions ({:.2?})", start.elapsed()))
}

fn c9_random() -> Outcome {
    let mut rng = common::rng(0x5eed_0009);
    let samples = 1000;
    let fast = (0..samples)
        .filter(|_| wl1_iterations(&gnp(100, 0.5, &mut rng)).unwrap() <= 2)
        .count();
    let share = fast as f64 / samples as f64;
    ensure(share >= 0.95, || format!("only {fast}/{samples} samples have wl1 <= 2"))?;
    Ok(format!("{fast}/{samples} samples of G(100, 1/2) have wl1 <= 2 (threshold 95%)"))
}

fn c10_round_trips() -> Outcome {
    let rows = catalogue(8).map_err(|e| e.to_string())?;
    for row in &rows {
        let code = family_member(row.family, row.k).map_err(|e| e.to_string())?;
        let g = build_graph(&code).map_err(|e| e.to_string())?;
        let back = decode_graph(&g).map_err(|e| format!("{}: {e}", row.code))?;
        ensure(back == code, || format!("{} decodes to {back}", row.code))?;
        ensure(graph6::decode(&graph6::encode(&g)).as_ref() == Ok(&g), || {
            format!("{}: graph6 round trip", row.code)
        })?;
    }
    let mut fixtures = vec![fixtures::degree_1_5(), fixtures::degree_1_3(), fixtures::order10()];
    let mut rng = common::rng(0x5eed_0010);
    for _ in 0..1000 {
        let n = rng.gen_range(0..=120);
        let p = rng.gen_range(0.0..=1.0);
        fixtures.push(gnp(n, p, &mut rng));
    }
    for (i, g) in fixtures.iter().enumerate() {
        ensure(graph6::decode(&graph6::encode(g)).as_ref() == Ok(g), || format!("graph {i}: graph6 round trip"))?;
    }
    Ok(format!(
        "{} codes decode to themselves; {} graph6 round trips",
        rows.len(),
        rows.len() + fixtures.len()
    ))
}

fn c11_oracle() -> Outcome {
    let start = Instant::now();
    let degree_set = |set: &'static [usize]| {
        move |g: &Graph| g.degree_summary().degrees() == set
    };
    let mut checked = 0;
    for n in 1..=7 {
        let cases: Vec<(SearchConstraints, Keep)> = vec![
            (SearchConstraints::all(n), Box::new(|_: &Graph| true)),
            (SearchConstraints::connected(n), Box::new(|g: &Graph| g.is_connected())),
            (
                SearchConstraints {
                    degree_set: Some(vec![2, 3]),
                    ..SearchConstraints::connected(n)
                },
                Box::new(move |g: &Graph| g.is_connected() && degree_set(&[2, 3])(g)),
            ),
            (
                SearchConstraints {
                    degree_set: Some(vec![1, 3]),
                    prune_degrees: true,
                    ..SearchConstraints::all(n)
                },
                Box::new(degree_set(&[1, 3])),
            ),
            (
                SearchConstraints {
                    max_degree: Some(2.min(n.saturating_sub(1))),
                    prune_degrees: true,
                    ..SearchConstraints::all(n)
                },
                Box::new(move |g: &Graph| (0..g.order()).all(|v| g.degree(v) <= 2.min(n.saturating_sub(1)))),
            ),
        ];
        for (c, keep) in cases {
            if c.validate().is_err() {
                continue;
            }
            let got = search::enumerate(&c, |_| {}).map_err(|e| e.to_string())?.emitted;
            let expected = common::labelled_class_count(n, keep);
            ensure(got == expected, || format!("n = {n}, {c:?}: generator {got}, oracle {expected}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} constraint combinations for n <= 7 match the labelled oracle ({:.2?})", start.elapsed()))
}

fn c12_audit(survivors: &[Graph]) -> Outcome {
    ensure(!survivors.is_empty(), || "no survivors to audit".into())?;
    for g in survivors {
        let degrees = g.degree_summary();
        ensure(g.is_connected() && degrees.distinct() == 2 && degrees.count(1) <= 2, || {
            format!("{} violates a necessary condition ({degrees})", graph6::encode_string(g))
        })?;
    }
    Ok(format!(
        "{} survivors connected, two distinct degrees, at most two of degree 1",
        survivors.len()
    ))
}

fn main() -> ExitCode {
    let mut survivors = Vec::new();
    let mut results: Vec<(&str, &str, Option<Outcome>)> = vec![
        ("1", "family verification", Some(c1_families())),
        ("2", "fixed fixtures", Some(c2_fixtures())),
        ("3", "paths", Some(c3_paths())),
        ("4", "exhaustive negative result", Some(c4_negative(&mut survivors))),
        ("5", "exhaustive positive count", Some(c5_positive(&mut survivors))),
    ];
    results.push(("5x", "order-11 count (extended)", c5_extended(&mut survivors)));
    results.extend([
        ("6", "witness coverage", Some(c6_witnesses())),
        ("7", "engine equivalence", Some(c7_engines())),
        ("8", "complement invariance", Some(c8_complement())),
        ("9", "random-graph stabilisation", Some(c9_random())),
        ("10", "codec round trips", Some(c10_round_trips())),
        ("11", "enumerator oracle", Some(c11_oracle())),
        ("12", "necessary-condition audit", Some(c12_audit(&survivors))),
    ]);
    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Some(Ok(detail)) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Some(Err(reason)) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {reason}");
            }
            None => println!("criterion {id:>2} SKIP  {name}: set LONGREF_EXTENDED=1"),
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
