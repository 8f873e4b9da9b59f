//! The acceptance checks: each compares the library against an independent
//! computation (exhaustive search, truncations, vertex-set rules) and
//! reports a pass/fail line.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abstract_sep::{observation_check, padding_demo};
use crate::axioms::{axiom_check, uniform_star, witness_star};
use crate::blocks::{aleph0_blocks, build_tk, is_inseparable, min_vertex_cut, verify_tk};
use crate::components::components;
use crate::ends::{end_count_on_truncation, ends_below, EndClass, EndRep};
use crate::error::Result;
use crate::finite::FiniteGraph;
use crate::finite_tangle::{
    connected_graphs_up_to, count_tangles, join_closure_check, star_t_equivalence,
};
use crate::sampling::Sampler;
use crate::schema::{find_schema, suite_graphs, suite_schemas, SchemaRef, Vertex};
use crate::semilinear::SemilinearSet;
use crate::symset::SymVertexSet;
use crate::tangle::{census, representative_tangles, Tangle};
use crate::topology::{
    closure_probe, extract_subcover, non_closure_target, parse_cover, ProbeOutcome, SpacePoint,
    Verdict,
};
use crate::ultrafilter::{CommitLog, Policy};

/// Depths of the truncations used as `Z` by the limit-point probes.
pub const PROBE_SCHEDULE: [u64; 5] = [2, 4, 8, 16, 32];

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckConfig {
    pub seed: u64,
    /// Overrides the per-check sample counts when set.
    pub samples: Option<usize>,
}

impl CheckConfig {
    fn n(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn sampler(&self, schema: &SchemaRef, salt: u64) -> Sampler {
        Sampler::new(
            schema,
            self.seed.wrapping_mul(1_000_003).wrapping_add(salt),
            6,
        )
    }
}

pub const CHECKS: [(u8, &str); 14] = [
    (1, "finite-tangle-counts"),
    (2, "star-reduction"),
    (3, "corner-join-closure"),
    (4, "components-vs-truncations"),
    (5, "inverse-system-laws"),
    (6, "tangle-limit-round-trip"),
    (7, "census"),
    (8, "minimal-witness"),
    (9, "sampled-tangle-axioms"),
    (10, "closedness"),
    (11, "subcover-extraction"),
    (12, "subdivided-complete-graphs"),
    (13, "star-supremum-reformulation"),
    (14, "determinism"),
];

pub fn check_name(id: u8) -> Option<&'static str> {
    CHECKS.iter().find(|c| c.0 == id).map(|c| c.1)
}

/// Looks a check up by number or name.
pub fn parse_check(text: &str) -> Option<u8> {
    text.parse::<u8>()
        .ok()
        .filter(|id| check_name(*id).is_some())
        .or_else(|| CHECKS.iter().find(|c| c.1 == text).map(|c| c.0))
}

pub fn run_check(id: u8, cfg: &CheckConfig) -> CheckResult {
    let name = check_name(id).unwrap_or("unknown");
    let outcome = match id {
        1 => finite_tangle_counts(),
        2 => star_reduction(),
        3 => corner_join_closure(),
        4 => components_vs_truncations(cfg),
        5 => inverse_system_laws(cfg),
        6 => tangle_limit_round_trip(cfg),
        7 => census_check(),
        8 => minimal_witness(cfg),
        9 => sampled_axioms(cfg),
        10 => closedness(cfg),
        11 => subcover_extraction(),
        12 => subdivided_complete_graphs(cfg),
        13 => star_supremum(cfg),
        14 => determinism(cfg),
        _ => Ok(Outcome::fail(vec![format!("no check {id}")], String::new())),
    };
    match outcome {
        Ok(o) => {
            let passed = o.failures.is_empty();
            let detail = if passed {
                o.summary
            } else {
                let shown: Vec<&String> = o.failures.iter().take(3).collect();
                let more = o.failures.len().saturating_sub(3);
                let mut d = shown
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join("; ");
                if more > 0 {
                    d.push_str(&format!("; and {more} more"));
                }
                d
            };
            CheckResult {
                id,
                name,
                passed,
                detail,
            }
        }
        Err(e) => CheckResult {
            id,
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run_all(cfg: &CheckConfig) -> Vec<CheckResult> {
    CHECKS.iter().map(|&(id, _)| run_check(id, cfg)).collect()
}

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn fail(failures: Vec<String>, summary: String) -> Self {
        Outcome { failures, summary }
    }
}

fn infinite_suite() -> Vec<SchemaRef> {
    suite_schemas().iter().map(|s| s.schema()).collect()
}

fn suite_tangles() -> Vec<Tangle> {
    infinite_suite()
        .iter()
        .flat_map(|s| representative_tangles(s, Policy::Canonical))
        .collect()
}

fn finite_tangle_counts() -> Result<Outcome> {
    let mut failures = Vec::new();
    let cases = [
        ("K3", FiniteGraph::complete(3), 3, 0),
        ("K4", FiniteGraph::complete(4), 2, 1),
        ("C4", FiniteGraph::cycle(4), 2, 1),
    ];
    for (name, g, k, want) in &cases {
        let got = count_tangles(g, *k)?;
        if got != *want {
            failures.push(format!("{name} order {k}: {got} tangles, expected {want}"));
        }
    }
    Ok(Outcome::fail(
        failures,
        "K3/3 → 0, K4/2 → 1, C4/2 → 1".into(),
    ))
}

fn star_reduction() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut checked = 0;
    let graphs = connected_graphs_up_to(5);
    for g in &graphs {
        for k in 1..=3 {
            let rep = star_t_equivalence(g, k)?;
            checked += rep.orientations_checked;
            if let Some(c) = rep.counterexample {
                failures.push(format!(
                    "{} order {k}: {c:?}",
                    g.to_text().replace('\n', " ")
                ));
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        format!(
            "{} graphs, {checked} orientations, no counterexample",
            graphs.len()
        ),
    ))
}

fn corner_join_closure() -> Result<Outcome> {
    let mut failures = Vec::new();
    let (mut tangles, mut joins) = (0, 0);
    for sg in suite_graphs() {
        for k in 1..=4 {
            let rep = join_closure_check(&sg.graph, k)?;
            tangles += rep.tangles;
            joins += rep.joins_checked;
            for (s, t) in rep.violations.iter().take(1) {
                failures.push(format!(
                    "{} order {k}: join of {s:?} and {t:?} missing",
                    sg.name
                ));
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        format!("{tangles} tangles, {joins} corner joins, all members"),
    ))
}

/// Components of the truncation minus `X` correspond one to one to the
/// symbolic components meeting the truncation.
fn compare_with_truncation(
    schema: &SchemaRef,
    x: &BTreeSet<Vertex>,
    n: u64,
) -> Result<Option<String>> {
    let comps = components(schema, x)?;
    let t = schema.truncate(n);
    let removed: Vec<bool> = t.vertices.iter().map(|v| x.contains(v)).collect();
    let mut seen = BTreeSet::new();
    for c in t.graph.components_avoiding(&removed) {
        let refs: BTreeSet<_> = c.iter().map(|&i| comps.locate(&t.vertices[i])).collect();
        let Some(&Some(r)) = refs.iter().next().filter(|_| refs.len() == 1) else {
            return Ok(Some(format!(
                "{} X={} n={n}: truncated component at {} spans {} symbolic components",
                schema.name,
                schema.vertex_list_text(x),
                t.graph.name(c[0]),
                refs.len()
            )));
        };
        if !seen.insert(r) {
            return Ok(Some(format!(
                "{} X={} n={n}: symbolic component {} is split in the truncation",
                schema.name,
                schema.vertex_list_text(x),
                comps.selection_text(&comps.single(r))
            )));
        }
    }
    Ok(None)
}

fn components_vs_truncations(cfg: &CheckConfig) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for (salt, name) in ["RAY", "DRAY", "STAR", "SPIDER", "COMB", "CLIQ"]
        .iter()
        .enumerate()
    {
        let schema = find_schema(name).expect("suite schema");
        let mut smp = cfg.sampler(&schema, salt as u64);
        for _ in 0..cfg.n(30) {
            let x = smp.vertex_set(5);
            for n in [10, 20, 40] {
                cases += 1;
                failures.extend(compare_with_truncation(&schema, &x, n)?);
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        format!("{cases} separator/truncation pairs agree"),
    ))
}

fn inverse_system_laws(cfg: &CheckConfig) -> Result<Outcome> {
    let mut failures = Vec::new();
    let (mut chains, mut probes, mut pairs) = (0, 0, 0);
    for (salt, schema) in infinite_suite().iter().enumerate() {
        let tangles = representative_tangles(schema, Policy::Canonical);
        if tangles.is_empty() {
            continue;
        }
        let mut smp = cfg.sampler(schema, 100 + salt as u64);
        for i in 0..cfg.n(50) {
            let t = &tangles[i % tangles.len()];
            let z = smp.vertex_set(5);
            let y = smp.subset(&z);
            let x = smp.subset(&y);
            let hz = t.induced_uf(&z)?;
            chains += 1;
            if hz.restrict(&x)? != hz.restrict(&y)?.restrict(&x)? {
                failures.push(format!(
                    "{}: restriction along {} ⊇ {} ⊇ {} is not functorial",
                    t.id(),
                    schema.vertex_list_text(&z),
                    schema.vertex_list_text(&y),
                    schema.vertex_list_text(&x)
                ));
            }

            let (y, y2) = (smp.vertex_set(4), smp.vertex_set(4));
            let y2: BTreeSet<Vertex> = y.union(&y2).copied().collect();
            let lim = t.limit()?;
            pairs += 1;
            if lim.eval(&y2)?.restrict(&y)? != lim.eval(&y)? {
                failures.push(format!(
                    "{}: limit members at {} and {} are incompatible",
                    t.id(),
                    schema.vertex_list_text(&y),
                    schema.vertex_list_text(&y2)
                ));
            }
        }
        for t in tangles.iter().filter(|t| matches!(t, Tangle::Uf { .. })) {
            let base = t.minimal_witness()?;
            for _ in 0..cfg.n(100) {
                let x = smp.superset(&base, 2);
                let h = t.induced_uf(&x)?;
                let x2 = smp.superset(&x, 3);
                let back = h.lift(&x2)?.restrict(&x)?;
                let sel = smp.selection(h.comps());
                probes += 1;
                if back != h || back.membership(&sel) != h.membership(&sel) {
                    failures.push(format!(
                        "{}: lifting {} to {} and back changes it",
                        t.id(),
                        h.text(),
                        schema.vertex_list_text(&x2)
                    ));
                }
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        format!("{chains} chains, {probes} lift probes, {pairs} limit pairs"),
    ))
}

fn tangle_limit_round_trip(cfg: &CheckConfig) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (salt, schema) in infinite_suite().iter().enumerate() {
        let mut smp = cfg.sampler(schema, 200 + salt as u64);
        for t in representative_tangles(schema, Policy::Canonical) {
            let lim = t.limit()?;
            let back = Tangle::from_limit(&lim);
            for _ in 0..cfg.n(50) {
                let s = smp.separation(4)?;
                let direct = t.contains(&s);
                let via_limit = lim.eval(s.separator())?.membership(s.to_b());
                let via_back = back.contains(&s);
                let by_sides = t.contains_by_sides(&s);
                checked += 1;
                if !(direct == via_limit && direct == via_back && direct == by_sides) {
                    failures.push(format!(
                        "{} on {}: tangle {direct}, limit {via_limit}, rebuilt {via_back}, sides {by_sides}",
                        t.id(),
                        s.text()
                    ));
                }
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        format!("{checked} separations oriented alike four ways"),
    ))
}

fn census_check() -> Result<Outcome> {
    let mut failures = Vec::new();
    let expect = |name: &str, ends: Vec<EndClass>, ufs: Vec<&str>, failures: &mut Vec<String>| {
        let schema = find_schema(name).expect("suite schema");
        let c = census(&schema);
        let witnesses: Vec<String> = c
            .uf_classes
            .iter()
            .map(|u| schema.vertex_list_text(&u.witness))
            .collect();
        if c.ends != ends || witnesses != ufs {
            failures.push(format!(
                "{name}: {} end classes, UF witnesses {witnesses:?}",
                c.ends.len()
            ));
        }
    };
    expect(
        "RAY",
        vec![EndClass::Single(EndRep::Ray(0))],
        vec![],
        &mut failures,
    );
    expect(
        "DRAY",
        vec![
            EndClass::Single(EndRep::Ray(0)),
            EndClass::Single(EndRep::Ray(1)),
        ],
        vec![],
        &mut failures,
    );
    expect("STAR", vec![], vec!["{c}"], &mut failures);
    expect(
        "SPIDER",
        vec![EndClass::PerCopy { fam: 0, ray: 0 }],
        vec!["{c}"],
        &mut failures,
    );
    expect(
        "CLIQ",
        vec![EndClass::Single(EndRep::Clique(0))],
        vec![],
        &mut failures,
    );
    for schema in infinite_suite() {
        if census(&schema).is_empty() {
            failures.push(format!("{}: no tangles", schema.name));
        }
        for n in [20, 40] {
            let symbolic = ends_below(&schema, n).len();
            let truncated = end_count_on_truncation(&schema, n);
            if symbolic != truncated {
                failures.push(format!(
                    "{} n={n}: {symbolic} ends, truncation shows {truncated}",
                    schema.name
                ));
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        "suite censuses as expected; end counts match truncations at 20 and 40".into(),
    ))
}

fn minimal_witness(cfg: &CheckConfig) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut count = 0;
    for (salt, schema) in infinite_suite().iter().enumerate() {
        let mut smp = cfg.sampler(schema, 300 + salt as u64);
        for t in representative_tangles(schema, Policy::Canonical) {
            if !matches!(t, Tangle::Uf { .. }) {
                continue;
            }
            count += 1;
            let w = t.minimal_witness()?;
            let text = |x: &BTreeSet<Vertex>| schema.vertex_list_text(x);
            for _ in 0..cfg.n(20) {
                let x = smp.superset(&w, 4);
                if t.induced_uf(&x)?.is_principal() {
                    failures.push(format!("{}: principal at superset {}", t.id(), text(&x)));
                }
            }
            let wv: Vec<Vertex> = w.iter().copied().collect();
            for mask in 0u32..(1 << wv.len()) - 1 {
                let x: BTreeSet<Vertex> = (0..wv.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| wv[i])
                    .collect();
                if !t.induced_uf(&x)?.is_principal() {
                    failures.push(format!(
                        "{}: non-principal at proper subset {}",
                        t.id(),
                        text(&x)
                    ));
                }
            }
            let mut found = 0;
            for _ in 0..50 * cfg.n(20) {
                if found == cfg.n(20) {
                    break;
                }
                let x = smp.vertex_set(4);
                if x.is_subset(&w) || w.is_subset(&x) {
                    continue;
                }
                found += 1;
                if !t.induced_uf(&x)?.is_principal() {
                    failures.push(format!(
                        "{}: non-principal at incomparable {}",
                        t.id(),
                        text(&x)
                    ));
                }
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        format!("{count} ultrafilter tangles, witnesses minimal"),
    ))
}

fn sampled_axioms(cfg: &CheckConfig) -> Result<Outcome> {
    let mut failures = Vec::new();
    let (mut stars, mut perturbations) = (0, 0);
    for (salt, schema) in infinite_suite().iter().enumerate() {
        let mut smp = cfg.sampler(schema, 400 + salt as u64);
        for t in representative_tangles(schema, Policy::Canonical) {
            let rep = axiom_check(&t, &mut smp, cfg.n(200))?;
            stars += rep.stars;
            perturbations += rep.perturbations;
            if !rep.passed() {
                let first = rep
                    .star_violations
                    .iter()
                    .chain(&rep.perturbation_violations)
                    .chain(&rep.finite_b)
                    .chain(&rep.inconsistent)
                    .chain(&rep.small_violations)
                    .next()
                    .cloned()
                    .unwrap_or_default();
                failures.push(format!("{}: {first}", t.id()));
            }
            match &t {
                Tangle::Uf { .. } => match witness_star(&t)? {
                    Some(star)
                        if star.is_infinite()
                            && star.meet().is_finite()
                            && star.contained_in(&t, 10) => {}
                    _ => failures.push(format!("{}: no infinite star with finite meet", t.id())),
                },
                Tangle::End { .. } => {
                    let mut probes = Tangle::witness_candidates(schema);
                    probes.extend((0..5).map(|_| smp.vertex_set(4)));
                    for x in probes {
                        let star = uniform_star(&t, &x)?;
                        if star.is_infinite()
                            && star.contained_in(&t, 10)
                            && star.meet().is_finite()
                        {
                            failures.push(format!("{}: {} has finite meet", t.id(), star.text()));
                        }
                    }
                }
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        format!("{stars} stars, {perturbations} perturbations, no violation"),
    ))
}

fn closedness(cfg: &CheckConfig) -> Result<Outcome> {
    let mut failures = Vec::new();
    let (mut open, mut closed) = (0, 0);
    let blocks: Vec<(String, Vec<SymVertexSet>)> = infinite_suite()
        .iter()
        .map(|s| (s.name.clone(), aleph0_blocks(s)))
        .collect();
    for (salt, t) in suite_tangles().into_iter().enumerate() {
        let schema = t.schema().clone();
        let kernel = t.kernel();
        if t.is_closed() {
            closed += 1;
            let schema_blocks = &blocks
                .iter()
                .find(|b| b.0 == schema.name)
                .expect("suite schema")
                .1;
            if !schema_blocks.contains(&kernel) {
                failures.push(format!(
                    "{}: kernel {} is not an ℵ0-block",
                    t.id(),
                    kernel.describe(&schema)
                ));
            }
            let mut smp = cfg.sampler(&schema, 500 + salt as u64);
            for _ in 0..cfg.n(200) {
                let s = smp.separation(4)?;
                if t.contains(&s) != kernel.is_subset(s.b()) {
                    failures.push(format!(
                        "{}: {} disagrees with the kernel rule",
                        t.id(),
                        s.text()
                    ));
                }
            }
            if matches!(t, Tangle::Uf { .. }) {
                failures.push(format!("{}: ultrafilter tangle reported closed", t.id()));
            }
            continue;
        }
        open += 1;
        let Some(target) = non_closure_target(&t)? else {
            failures.push(format!("{}: not closed but no probe target", t.id()));
            continue;
        };
        if t.contains(&target) {
            failures.push(format!(
                "{}: probe target {} lies in the tangle",
                t.id(),
                target.text()
            ));
        }
        for level in closure_probe(&t, &target, &PROBE_SCHEDULE)? {
            if !matches!(level.outcome, ProbeOutcome::Agreeing(_)) {
                failures.push(format!(
                    "{}: no agreeing member at depth {}",
                    t.id(),
                    level.depth
                ));
            }
        }
    }
    let clique = find_schema("CLIQ").expect("suite schema");
    let k = Tangle::parse_id(&clique, "end:K")?;
    if !k.is_closed() || k.kernel() != SymVertexSet::clique_part(0, SemilinearSet::naturals()) {
        failures.push("CLIQ end: not closed with the clique as kernel".into());
    }
    Ok(Outcome::fail(
        failures,
        format!(
            "{closed} closed with kernel rule, {open} not closed with limit points at 5 depths"
        ),
    ))
}

struct CoverCase {
    schema: &'static str,
    text: &'static str,
    confirmed: bool,
}

const COVERS: &[CoverCase] = &[
    CoverCase {
        schema: "STAR",
        text: "open X={c} C={L{0+2n}}\nopen X={c} C={L{1+2n}}\npiece {c}\n",
        confirmed: true,
    },
    CoverCase {
        schema: "RAY",
        text: "open X={R[0]} C={@R[1]}\npiece {R[0]}\n",
        confirmed: true,
    },
    CoverCase {
        schema: "DRAY",
        text: "open X={o} C={@L[0]}\nopen X={o} C={@R[0]}\npiece {o}\n",
        confirmed: true,
    },
    CoverCase {
        schema: "SPIDER",
        text: "open X={c} C={legs{0+1n}}\npiece {c}\n",
        confirmed: true,
    },
    CoverCase {
        schema: "STAR",
        text: "open X={c} C={L{0+2n}}\n",
        confirmed: false,
    },
    CoverCase {
        schema: "RAY",
        text: "open X={R[0]} C={@R[1]}\n",
        confirmed: false,
    },
];

fn subcover_extraction() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut points = 0;
    for case in COVERS {
        let schema = find_schema(case.schema).expect("suite schema");
        let cover = parse_cover(&schema, case.text)?;
        let covered = |p: &SpacePoint| -> Result<bool> {
            for c in &cover {
                if c.contains(p)? {
                    return Ok(true);
                }
            }
            Ok(false)
        };
        let label = format!(
            "{} cover `{}`",
            case.schema,
            case.text.trim().replace('\n', " / ")
        );
        match extract_subcover(&schema, &cover)? {
            Verdict::Confirmed { .. } => {
                if !case.confirmed {
                    failures.push(format!("{label}: confirmed"));
                }
                let t = schema.truncate(50);
                let mut pts: Vec<SpacePoint> =
                    t.vertices.iter().map(|v| SpacePoint::Vertex(*v)).collect();
                pts.extend(
                    t.graph
                        .edges()
                        .into_iter()
                        .map(|(u, v)| SpacePoint::EdgePoint(t.vertices[u], t.vertices[v], 0.5)),
                );
                let mut tangles = representative_tangles(&schema, Policy::Canonical);
                for seed in 0..3 {
                    tangles.extend(representative_tangles(&schema, Policy::Seeded(seed)));
                }
                for (f, fam) in schema.families.iter().enumerate() {
                    for p in 0..fam.pieces.len() as u32 {
                        for m in ["{1+2n}", "{0+3n}"] {
                            let log = CommitLog::with_concentration(
                                f as u32,
                                p,
                                Policy::Canonical,
                                m.parse()?,
                            )?;
                            tangles.push(Tangle::Uf {
                                schema: schema.clone(),
                                fam: f as u32,
                                piece: p,
                                log: log.into(),
                            });
                        }
                    }
                }
                pts.extend(tangles.into_iter().map(SpacePoint::Tangle));
                for p in &pts {
                    points += 1;
                    if !covered(p)? {
                        failures.push(format!("{label}: confirmed but misses {}", p.text(&schema)));
                        break;
                    }
                }
            }
            Verdict::Refuted { witness } => {
                if case.confirmed {
                    failures.push(format!("{label}: refuted by {}", witness.text(&schema)));
                }
                if covered(&witness)? {
                    failures.push(format!(
                        "{label}: witness {} is covered",
                        witness.text(&schema)
                    ));
                }
                if case.schema == "STAR" && !matches!(witness, SpacePoint::Tangle(_)) {
                    failures.push(format!("{label}: witness is not a tangle"));
                }
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        format!(
            "{} covers decided, {points} points of confirmed covers checked",
            COVERS.len()
        ),
    ))
}

/// Certificates on K5 and K5 minus an edge with every vertex a branch
/// vertex, then random dense 8-vertex graphs with a random 4-set.
fn subdivided_complete_graphs(cfg: &CheckConfig) -> Result<Outcome> {
    let mut failures = Vec::new();
    let k5 = FiniteGraph::complete(5);
    let all: Vec<usize> = (0..5).collect();
    for (name, g) in [("K5", k5.clone()), ("K5-e", k5.without_edge(0, 1))] {
        match build_tk(&g, &all) {
            Ok(cert) => {
                if let Err(e) = verify_tk(&g, &cert) {
                    failures.push(format!("{name}: certificate rejected: {e}"));
                }
            }
            Err(f) => failures.push(format!(
                "{name} with all vertices as branch set: {}",
                f.reason
            )),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(12));
    let (mut built, mut refused) = (0, 0);
    for _ in 0..cfg.n(40) {
        let mut g = FiniteGraph::with_vertices(8);
        for u in 0..8 {
            for v in u + 1..8 {
                if rng.gen_bool(0.7) {
                    g.add_edge(u, v)?;
                }
            }
        }
        let mut verts: Vec<usize> = (0..8).collect();
        verts.shuffle(&mut rng);
        let mut branch = verts[..4].to_vec();
        branch.sort_unstable();
        let k = branch.len();
        match build_tk(&g, &branch) {
            Ok(cert) => {
                built += 1;
                if let Err(e) = verify_tk(&g, &cert) {
                    failures.push(format!("random graph: certificate rejected: {e}"));
                }
                for (i, &a) in branch.iter().enumerate() {
                    for &b in &branch[i + 1..] {
                        if min_vertex_cut(&g, a, b, k).is_some_and(|c| c < k - 1) {
                            failures.push(format!(
                                "random graph: {a}-{b} cut below the {} paths of the certificate",
                                k - 1
                            ));
                        }
                    }
                }
            }
            Err(f) => {
                if is_inseparable(&g, &branch, k) {
                    failures.push(format!("random graph: precondition holds but {}", f.reason));
                } else {
                    refused += 1;
                }
            }
        }
    }
    Ok(Outcome::fail(
        failures,
        format!(
            "K5, K5-e and {built} random instances verified, {refused} refused by precondition"
        ),
    ))
}

fn star_supremum(cfg: &CheckConfig) -> Result<Outcome> {
    let mut failures = Vec::new();
    let (mut stars, mut padded) = (0, 0);
    for (salt, schema) in infinite_suite().iter().enumerate() {
        let mut smp = cfg.sampler(schema, 600 + salt as u64);
        for t in representative_tangles(schema, Policy::Canonical) {
            let rep = observation_check(&t, &mut smp, cfg.n(300))?;
            stars += rep.stars;
            padded += rep.padded;
            failures.extend(
                rep.violations
                    .into_iter()
                    .take(1)
                    .map(|v| format!("{}: {v}", t.id())),
            );
            if rep.small_inverse != rep.finite_meet {
                failures.push(format!(
                    "{}: {} small inverses, {} finite meets",
                    t.id(),
                    rep.small_inverse,
                    rep.finite_meet
                ));
            }
        }
    }
    let demo = padding_demo(&find_schema("RAY").expect("suite schema"))?;
    if !demo.inverse_small {
        failures.push(format!(
            "RAY: supremum {} of a star and its inverse has no small inverse",
            demo.supremum
        ));
    }
    Ok(Outcome::fail(
        failures,
        format!("{stars} stars inside tangles, {padded} padded free stars, all agree"),
    ))
}

/// A JSON document built from seeded sampling and lazily decided
/// ultrafilters.
pub fn determinism_document(seed: u64) -> Result<String> {
    let schema = find_schema("SPIDER").expect("suite schema");
    let mut smp = Sampler::new(&schema, seed, 6);
    let t = Tangle::ultrafilter(&schema, 0, 0, Policy::Seeded(seed))?;
    let mut seps = Vec::new();
    for _ in 0..20 {
        let s = smp.separation(4)?;
        seps.push((s.text(), t.contains(&s)));
    }
    let obs = observation_check(&t, &mut smp, 10)?;
    let log = match &t {
        Tangle::Uf { log, .. } => log.dump(),
        Tangle::End { .. } => unreachable!(),
    };
    let doc =
        serde_json::json!({ "seed": seed, "separations": seps, "observation": obs, "log": log });
    Ok(serde_json::to_string_pretty(&doc).expect("serializable"))
}

fn determinism(cfg: &CheckConfig) -> Result<Outcome> {
    let a = determinism_document(cfg.seed)?;
    let b = determinism_document(cfg.seed)?;
    let failures = if a == b {
        vec![]
    } else {
        vec!["two runs with the same seed differ".to_string()]
    };
    Ok(Outcome::fail(
        failures,
        format!("{} identical bytes", a.len()),
    ))
}
