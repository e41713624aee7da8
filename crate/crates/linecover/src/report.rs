//! JSON renderings of the core results.
//!
//! Maps are `serde_json`'s sorted maps, so equal results serialize to equal
//! bytes. Wall-clock data only ever appears under `timings` keys.

use linecover_core::arrangement::{ClosureStep, HeartLayout, IncidenceTable, RabcReport};
use linecover_core::certify::{AmpleReport, Certificate, Invariants, SweepResult, Verdict};
use linecover_core::cover::{LabelMap, ValidationReport};
use linecover_core::incidence::{Action, EliminationTrace, IncidenceProblem, Object, Slot, TriangleMatch};
use linecover_core::triangle::{Mat2, TriangleClassification, TriangleSolution};
use linecover_core::{ProjectiveLine, ProjectivePoint};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn point(x: &ProjectivePoint) -> Value {
    Value::String(x.to_string())
}

pub fn line(l: &ProjectiveLine) -> Value {
    Value::String(l.to_string())
}

pub fn points(xs: &[ProjectivePoint]) -> Value {
    xs.iter().map(point).collect()
}

pub fn lines(ls: &[ProjectiveLine]) -> Value {
    ls.iter().map(line).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest of the canonical coordinates, one line per row.
pub fn lines_digest(ls: &[ProjectiveLine]) -> String {
    let text: String = ls.iter().map(|l| format!("{l}\n")).collect();
    sha256_hex(text.as_bytes())
}

pub fn lambda_digest(lambda: &LabelMap) -> String {
    let g = lambda.group;
    let mut text = format!("{} {}\n", g.p(), g.r());
    for l in lambda.all() {
        text.push_str(&format!("{l}\n"));
    }
    sha256_hex(text.as_bytes())
}

pub fn closure(steps: &[ClosureStep]) -> Value {
    let max_height = |v: Vec<num_bigint::BigInt>| v.into_iter().max().map(|h| h.to_string());
    Value::Array(
        steps
            .iter()
            .enumerate()
            .map(|(k, s)| {
                json!({
                    "iteration": k + 1,
                    "line_count": s.lines.len(),
                    "point_count": s.points.len(),
                    "max_line_height": max_height(s.lines.iter().map(|l| l.height()).collect()),
                    "max_point_height": max_height(s.points.iter().map(|x| x.height()).collect()),
                    "min_entry_height_of_points": max_height(s.points.iter().map(|x| x.min_abs_entry()).collect()),
                    "lines": lines(&s.lines),
                    "points": points(&s.points),
                })
            })
            .collect(),
    )
}

pub fn table(t: &IncidenceTable) -> Value {
    let hist: serde_json::Map<String, Value> = t.mu_histogram().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "lines": t.num_lines(),
        "singular_points": t.num_points(),
        "double_points": t.double_points().len(),
        "mu_histogram": hist,
        "points": (0..t.num_points()).map(|nu| json!({
            "point": point(&t.points()[nu]),
            "mu": t.mu(nu),
            "lines": t.lines_through(nu).iter().map(|i| i + 1).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn rabc(r: &RabcReport, layout: &HeartLayout) -> Value {
    let row = |i: usize| i + 1;
    json!({
        "pass": r.pass(),
        "aux_lines_through_two_closure_points": {
            "pass": r.aux_through_closure.pass,
            "witnesses": r.aux_through_closure.witnesses.iter().map(|(i, xs)| json!({"row": row(*i), "closure_points": points(xs)})).collect::<Vec<_>>(),
        },
        "aux_pairs_meet_at_centers": {
            "pass": r.pairs_meet_at_centers.pass,
            "witnesses": r.pairs_meet_at_centers.witnesses.iter().map(|(k, x)| json!({
                "center": point(&layout.centers[*k]),
                "meet": x.as_ref().map(point),
            })).collect::<Vec<_>>(),
        },
        "triangle_lines_avoid_plus_points": {
            "pass": r.triangle_lines_clean.pass,
            "witnesses": r.triangle_lines_clean.witnesses.iter().map(|(i, x)| json!({"row": row(*i), "point": point(x)})).collect::<Vec<_>>(),
        },
    })
}

pub fn matrix(m: &Mat2) -> Value {
    json!([[m[0][0].to_string(), m[0][1].to_string()], [m[1][0].to_string(), m[1][1].to_string()]])
}

pub fn classification(c: &TriangleClassification) -> Value {
    json!({
        "kind": c.kind.as_str(),
        "discriminant": c.discriminant.to_string(),
        "fixed_points": points(&c.fixed_points),
        "irrational_pair": c.irrational_pair,
        "reason": c.reason,
    })
}

pub fn solution(s: &TriangleSolution) -> Value {
    json!({
        "X": point(&s.x), "Y": point(&s.y), "Z": point(&s.z),
        "L_P": line(&s.lp), "L_Q": line(&s.lq), "L_R": line(&s.lr),
    })
}

fn slot(prob: &IncidenceProblem, s: Slot) -> Value {
    Value::String(prob.name(s).to_string())
}

fn object(o: &Object) -> Value {
    match o {
        Object::Point(x) => json!({"point": point(x)}),
        Object::Line(l) => json!({"line": line(l)}),
    }
}

/// The trace with slot names resolved against the problem after elimination.
pub fn trace(reduced: &IncidenceProblem, t: &EliminationTrace) -> Value {
    Value::Array(
        t.steps
            .iter()
            .enumerate()
            .map(|(k, s)| {
                json!({
                    "step": k,
                    "action": match s.action { Action::Fix => "fix", Action::Admit => "admit" },
                    "slot": s.name,
                    "witnesses": s.witnesses.iter().map(|&w| slot(reduced, w)).collect::<Vec<_>>(),
                    "value": object(&s.value),
                    "wave": s.wave,
                })
            })
            .collect(),
    )
}

pub fn residue(reduced: &IncidenceProblem) -> Value {
    let (vars, rels) = reduced.residue_signature();
    json!({
        "variables": vars,
        "relations": rels.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "relation_count": rels.len(),
    })
}

pub fn triangle_match(reduced: &IncidenceProblem, m: &TriangleMatch) -> Value {
    json!({
        "P": point(&m.p), "Q": point(&m.q), "R": point(&m.r),
        "X": reduced.points()[m.xyz[0]].name,
        "Y": reduced.points()[m.xyz[1]].name,
        "Z": reduced.points()[m.xyz[2]].name,
        "L_P": reduced.lines()[m.lines[0]].name,
        "L_Q": reduced.lines()[m.lines[1]].name,
        "L_R": reduced.lines()[m.lines[2]].name,
    })
}

pub fn validation(r: &ValidationReport) -> Value {
    let check = |c: &linecover_core::cover::Check| json!({"pass": c.pass, "witnesses": c.witnesses});
    json!({
        "pass": r.pass(),
        "divisibility": check(&r.divisibility),
        "nonzero": check(&r.nonzero),
        "injectivity": check(&r.injectivity),
        "spanning": check(&r.spanning),
        "normal_crossings": check(&r.normal_crossings),
        "smooth_pairs": check(&r.smooth_pairs),
        "distinct_classes": r.distinct_classes,
        "pairs_checked": r.pairs_checked,
    })
}

pub fn labels(lambda: &LabelMap, t: &IncidenceTable) -> Value {
    json!({
        "group": {"p": lambda.group.p(), "r": lambda.group.r()},
        "lines": lambda.lines.iter().map(|g| g.0.clone()).collect::<Vec<_>>(),
        "exceptional": (0..t.num_points()).map(|nu| json!({"point": point(&t.points()[nu]), "label": lambda.exceptional[nu].0})).collect::<Vec<_>>(),
    })
}

fn verdict(v: &Verdict) -> Value {
    json!({"verdict": if v.pass { "pass" } else { "fail" }, "checked": v.checked, "witnesses": v.witnesses})
}

pub fn ampleness(a: &AmpleReport) -> Value {
    json!({
        "verdict": if a.pass() { "pass" } else { "fail" },
        "p": a.p,
        "n": a.n,
        "p_at_least_3": a.p_at_least_3,
        "delta_square": a.delta_square.to_string(),
        "delta_square_positive": a.delta_square > 0,
        "mu_bound": format!("{}/{}", a.mu_bound.0, a.mu_bound.1),
        "max_mu": a.max_mu,
        "mu_below_bound": a.mu_ok,
        "n_above_bound": a.n_ok,
    })
}

pub fn invariants(i: &Invariants) -> Value {
    json!({
        "K2": i.k2,
        "chi": i.chi,
        "pg": i.pg,
        "q": i.q,
        "h1_sum": i.h1_sum,
        "q_from_h1_vanishing": i.h1_sum == 0,
        "slope": format!("{:.4}", i.slope),
        "bmy_ok": i.bmy_ok,
        "kuranishi_bound": i.kuranishi_bound,
        "chi_matches_published": i.matches_reference,
    })
}

pub fn sweep_sections(s: &SweepResult) -> (Value, Value, Value, Value) {
    let a = json!({
        "verdict": verdict(&s.a.verdict),
        "min_margin": s.a.min_margin,
        "line_certificates": s.a.line_certificates,
        "exact_rank_twists": s.a.exact_rank_twists,
    });
    let b = json!({
        "verdict": verdict(&s.b.verdict),
        "max_value": s.b.max_value,
        "exceptional_curves": {
            "skipped_because": "exceptional coefficients of L_chi are nonpositive",
            "checked_anyway": verdict(&s.b.exceptional),
        },
    });
    let c = json!({
        "verdict": verdict(&s.c.verdict),
        "binding_pairs": s.c.binding,
        "critical_bound_per_triple_point": s.c.critical_bound,
        "critical": s.c.critical.iter().map(|(x, direct, solved)| json!({"point": point(x), "counted": direct, "from_linear_systems": solved})).collect::<Vec<_>>(),
    });
    (a, b, c, invariants(&s.invariants))
}

/// Per-character `(χ, d, reg)` rows for TSV output.
pub fn sweep_tsv(s: &SweepResult, chars: &[linecover_core::cover::Character]) -> String {
    let mut out = String::from("# chi\td\treg\n");
    for (chi, (reg, d)) in chars.iter().zip(&s.a.values) {
        out.push_str(&format!("{chi}\t{d}\t{reg}\n"));
    }
    out
}

/// The certificate; `timings` is the only nondeterministic field.
pub fn certificate(cert: &Certificate, arrangement: &[ProjectiveLine], lambda: &LabelMap, timings: Value) -> Value {
    let incidence = match &cert.incidence {
        Ok(c) => json!({
            "verdict": "pass",
            "residue": residue(&c.reduced),
            "triangle": triangle_match(&c.reduced, &c.pattern),
            "classification": classification(&c.classification),
            "steps": c.trace.steps.len(),
            "extra_points": c.extra_points,
            "scheme": "Spec C[t]/(t^2)",
        }),
        Err(e) => json!({"verdict": "fail", "error": e.to_string()}),
    };
    let mut sections = serde_json::Map::new();
    sections.insert("incidence".into(), incidence);
    if let Some(v) = &cert.building_data {
        sections.insert("building_data".into(), validation(v));
    }
    if let Some(s) = &cert.sweep {
        let (a, b, c, inv) = sweep_sections(s);
        sections.insert("condition_a".into(), a);
        sections.insert("condition_b".into(), b);
        sections.insert("condition_c".into(), c);
        sections.insert("invariants".into(), inv);
        sections.insert("characters".into(), json!({"count": s.characters, "distinct_classes": s.distinct_classes}));
    }
    if let Some(a) = &cert.ampleness {
        sections.insert("ampleness".into(), ampleness(a));
    }
    json!({
        "tool": "linecover",
        "version": VERSION,
        "inputs": {
            "arrangement_sha256": lines_digest(arrangement),
            "lambda_sha256": lambda_digest(lambda),
        },
        "overall": {
            "verdict": if cert.pass() { "rigid, not infinitesimally rigid, K ample" } else { "fail" },
            "pass": cert.pass(),
            "failed_stage": cert.failed.map(|s| s.as_str()),
        },
        "sections": sections,
        "timings": timings,
    })
}
