use std::collections::BTreeSet;
use std::fmt::Write;
use std::sync::Arc;

use serde_json::{json, Value};
use tangles::abstract_sep::{observation_check, padding_demo};
use tangles::blocks::{build_tk, k_blocks};
use tangles::checks::{parse_check, run_check, CheckConfig, CHECKS, PROBE_SCHEDULE};
use tangles::components::components;
use tangles::ends::{end_count_on_truncation, ends_below};
use tangles::finite::FiniteGraph;
use tangles::finite_tangle::{enumerate_tangles, FiniteSep};
use tangles::sampling::Sampler;
use tangles::schema::{Schema, SchemaRef};
use tangles::separation::Separation;
use tangles::tangle::{census, representative_tangles, Tangle};
use tangles::topology::{
    closure_probe, extract_subcover, non_closure_target, parse_cover, ProbeOutcome, SpacePoint,
    Verdict,
};
use tangles::ultrafilter::{CommitLog, LogDump, Policy, UltrafilterHandle};

use crate::input::{self, Input};
use crate::{CliError, Command, Global, Report};

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Finite { .. } => "finite",
        Command::Census { .. } => "census",
        Command::Orient { .. } => "orient",
        Command::Classify { .. } => "classify",
        Command::Witness { .. } => "witness",
        Command::Uf { .. } => "uf",
        Command::Closed { .. } => "closed",
        Command::Subcover { .. } => "subcover",
        Command::Blocks { .. } => "blocks",
        Command::Tk { .. } => "tk",
        Command::Observation { .. } => "observation",
        Command::Check { .. } => "check",
        Command::Dot { .. } => "dot",
    }
}

pub fn run(cmd: &Command, g: &Global) -> Result<Report, CliError> {
    match cmd {
        Command::Finite {
            graph,
            order,
            count_only,
        } => finite(graph, *order, *count_only),
        Command::Census { schema } => census_cmd(schema, g),
        Command::Orient {
            schema,
            tangle,
            sep,
        } => orient(schema, tangle, sep),
        Command::Classify { schema, tangle } => classify(schema, tangle),
        Command::Witness { schema, tangle } => witness(schema, tangle),
        Command::Uf {
            schema,
            at,
            kind,
            query,
            replay,
        } => uf(schema, at, kind, query, replay.as_deref(), g),
        Command::Closed { schema, tangle } => closed(schema, tangle),
        Command::Subcover { schema, cover } => subcover(schema, cover),
        Command::Blocks { graph, k } => blocks(graph, *k),
        Command::Tk { graph, set } => tk(graph, set),
        Command::Observation { input } => observation(input, g),
        Command::Check { suite, only } => check(suite, only, g),
        Command::Dot { input } => dot(input, g),
    }
}

fn ok(source: input::Source, result: Value, text: String) -> Result<Report, CliError> {
    Ok(Report {
        source,
        result,
        text,
        ok: true,
    })
}

fn mask_names(g: &FiniteGraph, m: u64) -> Vec<&str> {
    (0..g.vertex_count())
        .filter(|&v| m >> v & 1 == 1)
        .map(|v| g.name(v))
        .collect()
}

fn sep_text(g: &FiniteGraph, s: FiniteSep) -> String {
    format!(
        "({{{}}}, {{{}}})",
        mask_names(g, s.a).join(","),
        mask_names(g, s.b).join(",")
    )
}

fn finite(arg: &str, order: usize, count_only: bool) -> Result<Report, CliError> {
    let (g, src) = input::graph(arg)?;
    let tangles = enumerate_tangles(&g, order)?;
    let mut text = format!("{}\n", tangles.len());
    if !count_only {
        for (i, t) in tangles.iter().enumerate() {
            let seps: Vec<String> = t.seps.iter().map(|&s| sep_text(&g, s)).collect();
            writeln!(text, "tangle {i}: {}", seps.join(" ")).unwrap();
        }
    }
    let listed: Vec<Vec<Value>> = if count_only {
        Vec::new()
    } else {
        tangles
            .iter()
            .map(|t| {
                t.seps
                    .iter()
                    .map(|&s| json!({ "a": mask_names(&g, s.a), "b": mask_names(&g, s.b) }))
                    .collect()
            })
            .collect()
    };
    ok(
        src,
        json!({ "order": order, "count": tangles.len(), "tangles": listed }),
        text,
    )
}

fn census_cmd(arg: &str, g: &Global) -> Result<Report, CliError> {
    let (schema, src) = input::schema(arg)?;
    let c = census(&schema);
    let ends: Vec<String> = c.ends.iter().map(|e| e.text(&schema)).collect();
    let ufs: Vec<Value> = c
        .uf_classes
        .iter()
        .map(|u| {
            let f = &schema.families[u.fam as usize];
            json!({ "family": f.name, "piece": u.piece, "witness": schema.vertex_list_text(&u.witness) })
        })
        .collect();
    let mut text = format!(
        "ends: {}\n",
        if ends.is_empty() {
            "none".to_string()
        } else {
            ends.join(", ")
        }
    );
    writeln!(text, "ultrafilter classes: {}", ufs.len()).unwrap();
    for u in &ufs {
        writeln!(
            text,
            "  {} piece {} at {}",
            u["family"].as_str().unwrap(),
            u["piece"],
            u["witness"].as_str().unwrap()
        )
        .unwrap();
    }
    let mut result = json!({ "ends": ends, "uf_classes": ufs });
    if let Some(n) = g.truncation {
        let symbolic = ends_below(&schema, n).len();
        let truncated = end_count_on_truncation(&schema, n);
        writeln!(
            text,
            "ends below {n}: {symbolic} (truncation shows {truncated})"
        )
        .unwrap();
        result["truncation"] =
            json!({ "depth": n, "ends": symbolic, "truncation_ends": truncated });
    }
    ok(src, result, text)
}

fn tangle(schema: &SchemaRef, id: &str) -> Result<Tangle, CliError> {
    Ok(Tangle::parse_id(schema, id)?)
}

fn orient(arg: &str, id: &str, sep: &str) -> Result<Report, CliError> {
    let (schema, src) = input::schema(arg)?;
    let t = tangle(&schema, id)?;
    let s = Separation::parse(&schema, sep)?;
    let contains = t.contains(&s);
    let o = t.orient(&s);
    let text = format!("{}\n", o.text());
    ok(
        src,
        json!({ "tangle": t.id(), "separation": s.text(), "contains": contains, "oriented": o.text() }),
        text,
    )
}

fn classify(arg: &str, id: &str) -> Result<Report, CliError> {
    let (schema, src) = input::schema(arg)?;
    let t = tangle(&schema, id)?;
    let kind = t.classify(&[])?.text();
    ok(
        src,
        json!({ "tangle": t.id(), "kind": kind }),
        format!("{kind}\n"),
    )
}

fn witness(arg: &str, id: &str) -> Result<Report, CliError> {
    let (schema, src) = input::schema(arg)?;
    let t = tangle(&schema, id)?;
    let w = schema.vertex_list_text(&t.minimal_witness()?);
    ok(
        src,
        json!({ "tangle": t.id(), "witness": w }),
        format!("{w}\n"),
    )
}

fn policy(g: &Global) -> Policy {
    g.seed.map_or(Policy::Canonical, Policy::Seeded)
}

fn uf(
    arg: &str,
    at: &str,
    kind: &str,
    queries: &[String],
    replay: Option<&str>,
    g: &Global,
) -> Result<Report, CliError> {
    let (schema, src) = input::schema(arg)?;
    let x = schema.parse_vertex_list(at)?;
    let comps = components(&schema, &x)?;
    let handle = if let Some(comp) = kind.strip_prefix("principal:") {
        let sel = comps.parse_selection(&format!("{{{comp}}}"))?;
        let refs = comps.refs(&sel).unwrap_or_default();
        let [r] = refs.as_slice() else {
            return Err(CliError::input(format!(
                "`{comp}` is not a single component"
            )));
        };
        UltrafilterHandle::principal(comps.clone(), *r)
    } else if kind == "lazy" || kind.starts_with("lazy:") {
        let log = match replay {
            Some(path) => {
                let text = input::file(path)?.text;
                let dump: LogDump = serde_json::from_str(&text)
                    .map_err(|e| CliError::input(format!("bad log `{path}`: {e}")))?;
                CommitLog::replay(&dump)?
            }
            None => {
                let label = kind.strip_prefix("lazy:");
                let (f, p) = lazy_class(&schema, &comps, label)?;
                CommitLog::new(f, p, policy(g))
            }
        };
        UltrafilterHandle::lazy(comps.clone(), Arc::new(log))?
    } else {
        return Err(CliError::input(format!(
            "unknown ultrafilter kind `{kind}`"
        )));
    };
    let mut text = format!("{}\n", handle.text());
    let mut answers = Vec::new();
    for q in queries {
        let sel = comps.parse_selection(q)?;
        let member = handle.membership(&sel);
        writeln!(
            text,
            "{} {}",
            comps.selection_text(&sel),
            if member { "in" } else { "out" }
        )
        .unwrap();
        answers.push(json!({ "query": comps.selection_text(&sel), "member": member }));
    }
    let log = handle
        .log()
        .map(|l| serde_json::to_value(l.dump()).expect("serializable"));
    ok(
        src,
        json!({ "ultrafilter": handle.text(), "answers": answers, "log": log }),
        text,
    )
}

/// The family piece whose copies are separate components at `comps`, by
/// label (`L` or `L#1`) or the first one.
fn lazy_class(
    schema: &Schema,
    comps: &tangles::components::ComponentSet,
    label: Option<&str>,
) -> Result<(u32, u32), CliError> {
    for (f, fam) in schema.families.iter().enumerate() {
        for p in 0..fam.pieces.len() as u32 {
            let name = if p == 0 {
                fam.name.clone()
            } else {
                format!("{}#{p}", fam.name)
            };
            if comps.class_desc(f as u32, p).is_some() && label.is_none_or(|l| l == name) {
                return Ok((f as u32, p));
            }
        }
    }
    Err(CliError::input(
        "no class of components at this separator carries a non-principal ultrafilter",
    ))
}

fn probe_text(o: &ProbeOutcome, schema: &Schema) -> (String, Value) {
    match o {
        ProbeOutcome::Agreeing(s) => ("agreeing".into(), json!(s.text())),
        ProbeOutcome::Certified(v) => ("certified".into(), json!(schema.vertex_text(v))),
        ProbeOutcome::Unresolved => ("unresolved".into(), Value::Null),
    }
}

fn closed(arg: &str, id: &str) -> Result<Report, CliError> {
    let (schema, src) = input::schema(arg)?;
    let t = tangle(&schema, id)?;
    let kernel = t.kernel().describe(&schema);
    let is_closed = t.is_closed();
    let mut text = format!(
        "{}: {}\nkernel: {kernel}\n",
        t.id(),
        if is_closed { "closed" } else { "not closed" }
    );
    let mut result = json!({ "tangle": t.id(), "closed": is_closed, "kernel": kernel });
    if let Some(target) = non_closure_target(&t)? {
        writeln!(
            text,
            "limit point of the tangle outside it: {}",
            target.text()
        )
        .unwrap();
        let mut levels = Vec::new();
        for l in closure_probe(&t, &target, &PROBE_SCHEDULE)? {
            let (outcome, evidence) = probe_text(&l.outcome, &schema);
            writeln!(
                text,
                "  depth {} |Z|={}: {outcome} {}",
                l.depth,
                l.z_size,
                evidence.as_str().unwrap_or("")
            )
            .unwrap();
            levels.push(json!({ "depth": l.depth, "z_size": l.z_size, "outcome": outcome, "evidence": evidence }));
        }
        result["target"] = json!(target.text());
        result["probes"] = json!(levels);
    }
    ok(src, result, text)
}

fn tangle_json(t: &Tangle) -> Value {
    match t {
        Tangle::Uf { log, .. } => json!({ "id": t.id(), "log": log.dump() }),
        Tangle::End { .. } => json!({ "id": t.id() }),
    }
}

fn subcover(arg: &str, cover_path: &str) -> Result<Report, CliError> {
    let (schema, mut src) = input::schema(arg)?;
    let cover_src = input::file(cover_path)?;
    let cover = parse_cover(&schema, &cover_src.text)?;
    src.text.push_str(&cover_src.text);
    src.name = format!("{} {}", src.name, cover_src.name);
    let (text, result) = match extract_subcover(&schema, &cover)? {
        Verdict::Confirmed {
            comps,
            rewritten,
            leftover,
        } => {
            let x = schema.vertex_list_text(comps.separator());
            let parts: Vec<String> = rewritten.iter().map(|s| comps.selection_text(s)).collect();
            let left = comps.selection_text(&leftover);
            let mut text = format!("CONFIRMED\nrewritten at X'={x}\n");
            for p in &parts {
                writeln!(text, "  {p}").unwrap();
            }
            writeln!(text, "leftover {left}").unwrap();
            (
                text,
                json!({ "verdict": "confirmed", "separator": x, "rewritten": parts, "leftover": left }),
            )
        }
        Verdict::Refuted { witness } => {
            let w = witness.text(&schema);
            let point = match &witness {
                SpacePoint::Tangle(t) => tangle_json(t),
                _ => json!(w),
            };
            (
                format!("REFUTED\nuncovered point: {w}\n"),
                json!({ "verdict": "refuted", "witness": point }),
            )
        }
    };
    ok(src, result, text)
}

fn blocks(arg: &str, k: usize) -> Result<Report, CliError> {
    let (g, src) = input::graph(arg)?;
    let found: Vec<Vec<&str>> = k_blocks(&g, k)
        .iter()
        .map(|b| b.iter().map(|&v| g.name(v)).collect())
        .collect();
    let text = found
        .iter()
        .map(|b| format!("{{{}}}\n", b.join(",")))
        .collect();
    ok(src, json!({ "k": k, "blocks": found }), text)
}

fn tk(arg: &str, set: &str) -> Result<Report, CliError> {
    let (g, src) = input::graph(arg)?;
    let branch: Vec<usize> = set
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            g.lookup(s)
                .ok_or_else(|| CliError::input(format!("unknown vertex `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    let names = |p: &[usize]| p.iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>();
    match build_tk(&g, &branch) {
        Ok(cert) => {
            let paths: Vec<Vec<String>> = cert.paths.iter().map(|p| names(p)).collect();
            let text = paths.iter().map(|p| format!("{}\n", p.join("-"))).collect();
            ok(
                src,
                json!({ "branch": names(&branch), "paths": paths }),
                text,
            )
        }
        Err(f) => {
            let pair = [g.name(f.pair.0), g.name(f.pair.1)];
            Ok(Report {
                source: src,
                result: json!({ "branch": names(&branch), "failure": f.reason, "pair": pair }),
                text: format!("no subdivision: {}\n", f.reason),
                ok: false,
            })
        }
    }
}

fn observation(arg: &str, g: &Global) -> Result<Report, CliError> {
    let (input, src) = input::any(arg)?;
    let schema: SchemaRef = match input {
        Input::Schema(s) => s,
        Input::Graph(graph) => Arc::new(Schema::from_finite(&src.name, &graph)),
    };
    let samples = g.samples.unwrap_or(300);
    let mut smp = Sampler::new(&schema, g.seed.unwrap_or(0), 6);
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut all_ok = true;
    for t in representative_tangles(&schema, policy(g)) {
        let rep = observation_check(&t, &mut smp, samples)?;
        all_ok &= rep.passed();
        writeln!(
            text,
            "{}: {} stars, {} with small-inverse supremum, {} with finite meet, {} padded, {} violations",
            t.id(),
            rep.stars,
            rep.small_inverse,
            rep.finite_meet,
            rep.padded,
            rep.violations.len()
        )
        .unwrap();
        reports.push(json!({ "tangle": t.id(), "report": rep }));
    }
    if reports.is_empty() {
        writeln!(text, "no tangles of order ℵ0").unwrap();
    }
    let mut result = json!({ "samples": samples, "tangles": reports });
    if !schema.top.rays.is_empty() {
        let demo = padding_demo(&schema)?;
        writeln!(
            text,
            "star {{{}}}: supremum {}, inverse small: {}",
            demo.star.join(" ; "),
            demo.supremum,
            demo.inverse_small
        )
        .unwrap();
        result["padding_demo"] = serde_json::to_value(&demo).expect("serializable");
    }
    Ok(Report {
        source: src,
        result,
        text,
        ok: all_ok,
    })
}

fn check(suite: &str, only: &[String], g: &Global) -> Result<Report, CliError> {
    if suite != "all" {
        return Err(CliError::input(format!(
            "unknown suite `{suite}`; only `all` is bundled"
        )));
    }
    let ids: BTreeSet<u8> = if only.is_empty() {
        CHECKS.iter().map(|c| c.0).collect()
    } else {
        only.iter()
            .map(|o| parse_check(o).ok_or_else(|| CliError::input(format!("unknown check `{o}`"))))
            .collect::<Result<_, _>>()?
    };
    let cfg = CheckConfig {
        seed: g.seed.unwrap_or(0),
        samples: g.samples,
    };
    let results: Vec<_> = ids.iter().map(|&id| run_check(id, &cfg)).collect();
    let text = results
        .iter()
        .map(|r| {
            format!(
                "{} {:>2} {}: {}\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.id,
                r.name,
                r.detail
            )
        })
        .collect();
    let all_ok = results.iter().all(|r| r.passed);
    Ok(Report {
        source: input::suite(),
        result: json!({ "checks": results }),
        text,
        ok: all_ok,
    })
}

fn dot(arg: &str, g: &Global) -> Result<Report, CliError> {
    let (input, src) = input::any(arg)?;
    let graph = match input {
        Input::Graph(graph) => graph,
        Input::Schema(s) => s.truncate(g.truncation.unwrap_or(5)).graph,
    };
    let text = graph.to_dot();
    ok(src, json!({ "dot": text }), text)
}
