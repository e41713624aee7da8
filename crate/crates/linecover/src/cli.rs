//! Argument parsing, subcommand dispatch and exit codes.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use linecover_core::arrangement::{base_points, build_heart, check_rabc, closure, Arrangement, HeartLayout, IncidenceTable};
use linecover_core::certify::{self, check_ample, full_certificate_with, CoverContext};
use linecover_core::cover::{
    self, acceptance_count, birthday_model, critical_chi_solutions, l_chi, pairing_lift, random_lambda_search, validate,
    Character, Group, LabelMap,
};
use linecover_core::incidence::{eliminate, match_triangle, EliminationOptions, IncidenceProblem, Schedule};
use linecover_core::picard::{intersect, strict_transform, DivisorClass};
use linecover_core::triangle::{self, classify, composite_projectivity, discriminant, solve_realization, SearchConfig};
use linecover_core::ProjectivePoint;
use serde_json::{json, Value};

use crate::input::{load_arrangement, Dataset, InputError};
use crate::{report, svg, sweep};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Certify rigidity of abelian covers of the plane branched over line arrangements.
#[derive(Parser, Debug)]
#[command(name = "linecover", version)]
pub struct Cli {
    /// Worker threads for the character sweep (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Progress on stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Iterate the join/meet closure of the four frame points.
    Closure {
        #[arg(long, default_value_t = 3)]
        iters: usize,
    },
    /// Rebuild the heart arrangement and compare it with the data table.
    Heart,
    /// Triangle schemes: classification, rational solutions, search.
    Triangle {
        #[command(subcommand)]
        command: TriangleCommand,
    },
    /// Incidence-scheme elimination.
    Incidence {
        #[command(subcommand)]
        command: IncidenceCommand,
    },
    /// Building data: search, validation, rates and worked values.
    Lambda {
        #[command(subcommand)]
        command: LambdaCommand,
    },
    /// The full rigidity and ampleness certificate.
    Certify {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Numerical invariants from the character sweep.
    Invariants {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Draw an arrangement as SVG.
    Plot {
        #[command(flatten)]
        input: InputArgs,
        /// Half-width of the affine window.
        #[arg(long, default_value_t = 5.0)]
        window: f64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Arrangement JSON; the bundled heart data when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TripleArgs {
    #[arg(long, value_parser = parse_point)]
    pub p: Option<ProjectivePoint>,
    #[arg(long, value_parser = parse_point)]
    pub q: Option<ProjectivePoint>,
    #[arg(long, value_parser = parse_point)]
    pub r: Option<ProjectivePoint>,
}

#[derive(Subcommand, Debug)]
pub enum TriangleCommand {
    /// Composite projectivity, discriminant and kind.
    Classify(TripleArgs),
    /// All rational realizations.
    Solve(TripleArgs),
    /// Seeded search for double-point triples of bounded height.
    Search {
        #[arg(long, default_value_t = 20)]
        height: i64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_attempts: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Worklist,
    Waves,
    Random,
}

#[derive(Subcommand, Debug)]
pub enum IncidenceCommand {
    /// Eliminate fixed objects and report the residue.
    Eliminate {
        #[command(flatten)]
        input: InputArgs,
        /// Also write the full elimination trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Worklist)]
        schedule: ScheduleArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Admit meets of fixed lines instead of listing extra points.
        #[arg(long)]
        admit: bool,
        /// Additional random orders whose residues must agree.
        #[arg(long, default_value_t = 0)]
        orders: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    #[arg(long, default_value_t = 7)]
    pub p: u32,
    #[arg(long, default_value_t = 4)]
    pub r: usize,
}

#[derive(Subcommand, Debug)]
pub enum LambdaCommand {
    /// Draw line labels at random until the cover is admissible.
    Search {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_attempts: u64,
    },
    /// Check the labels of an arrangement.
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Monte Carlo acceptance rate against the birthday model.
    Rate {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        attempts: u64,
    },
    /// `L_χ` coefficients, intersections and critical characters for the bundled labels.
    Inspect {
        /// Character as comma-separated coordinates.
        #[arg(long, value_parser = parse_vector)]
        chi: Option<Coords>,
        #[arg(long, value_parser = parse_point)]
        point: Option<ProjectivePoint>,
        /// 1-based table row; reports `L̄·(σ*H − L_χ)`.
        #[arg(long)]
        line: Option<usize>,
    },
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    s.split([':', ','])
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer")))
        .collect()
}

/// `a:b:c` or `a,b,c`, optionally parenthesised.
pub fn parse_point(s: &str) -> Result<ProjectivePoint, String> {
    let v = parse_ints(s)?;
    let v: [i64; 3] = v.try_into().map_err(|v: Vec<i64>| format!("expected 3 coordinates, got {}", v.len()))?;
    ProjectivePoint::from_i64(v).map_err(|e| e.to_string())
}

/// Nonnegative coordinates of a group element.
#[derive(Clone, Debug)]
pub struct Coords(pub Vec<u32>);

fn parse_vector(s: &str) -> Result<Coords, String> {
    let v = parse_ints(s)?.into_iter().map(|x| u32::try_from(x).map_err(|_| format!("`{x}` is negative")));
    Ok(Coords(v.collect::<Result<_, _>>()?))
}

/// A finished subcommand: the report and whether it verified.
pub struct Outcome {
    pub report: Value,
    pub tsv: Option<String>,
    pub raw: Option<String>,
    pub pass: bool,
}

impl Outcome {
    fn json(report: Value, pass: bool) -> Self {
        Outcome { report, tsv: None, raw: None, pass }
    }
}

/// Errors that are the caller's fault.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn log(cli: &Cli, level: u8, msg: impl AsRef<str>) {
    if cli.verbose >= level {
        eprintln!("linecover: {}", msg.as_ref());
    }
}

fn group(g: &GroupArgs) -> anyhow::Result<Group> {
    Group::new(g.p, g.r).map_err(|e| usage(e.to_string()))
}

fn triple(args: &TripleArgs, data: &Dataset) -> [ProjectivePoint; 3] {
    let [p, q, r] = data.triangle.clone();
    [args.p.clone().unwrap_or(p), args.q.clone().unwrap_or(q), args.r.clone().unwrap_or(r)]
}

/// Arrangement, extra points and labels; the bundled heart data when no file is given.
struct Subject {
    source: String,
    arrangement: Arrangement,
    extra_points: Option<Vec<ProjectivePoint>>,
    labels: Option<LabelMap>,
    table: IncidenceTable,
}

fn subject(input: &InputArgs) -> anyhow::Result<Subject> {
    match &input.input {
        Some(path) => {
            let f = load_arrangement(path)?;
            let table = f.arrangement.incidence_table();
            let labels = match f.labels {
                Some((g, l)) => Some(lambda_for(g, &l, &table).map_err(|e| InputError::Rejected { path: f.path.clone(), msg: e })?),
                None => None,
            };
            Ok(Subject { source: f.path, arrangement: f.arrangement, extra_points: f.extra_points, labels, table })
        }
        None => {
            let data = Dataset::load()?;
            let arrangement = data.arrangement()?;
            let table = arrangement.incidence_table();
            let labels = Some(data.lambda(&table)?);
            let extra = HeartLayout::from_table(data.lines()).ok().map(|h| h.plus_points());
            Ok(Subject { source: data.source, arrangement, extra_points: extra, labels, table })
        }
    }
}

/// One label per line, or one fewer with the last completed by divisibility.
fn lambda_for(g: Group, labels: &[cover::GroupElement], table: &IncidenceTable) -> Result<LabelMap, String> {
    let n = table.num_lines();
    let r = if labels.len() == n {
        cover::lambda_from_lines(g, labels, table)
    } else if labels.len() + 1 == n {
        cover::complete_lambda(g, labels, table)
    } else {
        return Err(format!("{} labels for {n} lines", labels.len()));
    };
    r.map_err(|e| e.to_string())
}

fn require_labels(s: &Subject) -> anyhow::Result<&LabelMap> {
    s.labels.as_ref().ok_or_else(|| usage(format!("{}: no labels given", s.source)))
}

fn run_closure(iters: usize) -> anyhow::Result<Outcome> {
    if iters == 0 {
        return Err(usage("--iters must be at least 1"));
    }
    let t = Instant::now();
    let steps = closure(&base_points(), iters)?;
    let counts: Vec<Value> = steps.iter().enumerate().map(|(k, s)| json!([k + 1, s.lines.len(), s.points.len()])).collect();
    let tsv = steps.iter().enumerate().fold(String::from("# iteration\tlines\tpoints\n"), |mut acc, (k, s)| {
        acc.push_str(&format!("{}\t{}\t{}\n", k + 1, s.lines.len(), s.points.len()));
        acc
    });
    let report = json!({
        "base_points": report::points(&base_points()),
        "counts": counts,
        "steps": report::closure(&steps),
        "elapsed_ms": t.elapsed().as_millis() as u64,
    });
    Ok(Outcome { report, tsv: Some(tsv), raw: None, pass: true })
}

fn run_heart() -> anyhow::Result<Outcome> {
    let data = Dataset::load()?;
    let t = Instant::now();
    let layout = build_heart()?;
    let rebuilt = layout.arrangement.lines().to_vec();
    let given = data.lines();
    let mismatched: Vec<usize> = (0..rebuilt.len().max(given.len()))
        .filter(|&k| rebuilt.get(k) != given.get(k))
        .map(|k| k + 1)
        .collect();
    let table = layout.arrangement.incidence_table();
    let rabc = check_rabc(&layout)?;
    let origin = ProjectivePoint::from_i64([1, 0, 0])?;
    let mu_origin = table.index_of(&origin).map(|nu| table.mu(nu));
    let pass = mismatched.is_empty() && rabc.pass();
    let report = json!({
        "source": data.source,
        "table_match": mismatched.is_empty(),
        "mismatched_rows": mismatched,
        "lines_sha256": report::lines_digest(&rebuilt),
        "lines": report::lines(&rebuilt),
        "arrangement": report::table(&table),
        "mu_at_1_0_0": mu_origin,
        "rabc": report::rabc(&rabc, &layout),
        "elapsed_ms": t.elapsed().as_millis() as u64,
    });
    let mut tsv = String::from("# row\ta\tb\tc\n");
    for (k, l) in rebuilt.iter().enumerate() {
        let [a, b, c] = l.coords();
        tsv.push_str(&format!("{}\t{a}\t{b}\t{c}\n", k + 1));
    }
    Ok(Outcome { report, tsv: Some(tsv), raw: None, pass })
}

fn run_triangle(cmd: &TriangleCommand) -> anyhow::Result<Outcome> {
    match cmd {
        TriangleCommand::Classify(args) => {
            let [p, q, r] = triple(args, &Dataset::load()?);
            let c = classify(&p, &q, &r);
            let m = composite_projectivity(&p, &q, &r).ok();
            let report = json!({
                "P": report::point(&p), "Q": report::point(&q), "R": report::point(&r),
                "composite_row_convention": m.as_ref().map(report::matrix),
                "delta": discriminant(&p, &q, &r).to_string(),
                "classification": report::classification(&c),
            });
            Ok(Outcome::json(report, c.kind != triangle::TriangleKind::Degenerate))
        }
        TriangleCommand::Solve(args) => {
            let [p, q, r] = triple(args, &Dataset::load()?);
            let sols = solve_realization(&p, &q, &r)?;
            let checked = sols.iter().all(|s| s.incidences(&p, &q, &r).iter().all(|(_, ok)| *ok));
            let report = json!({
                "P": report::point(&p), "Q": report::point(&q), "R": report::point(&r),
                "solutions": sols.iter().map(report::solution).collect::<Vec<_>>(),
                "incidences_hold": checked,
            });
            Ok(Outcome::json(report, checked))
        }
        TriangleCommand::Search { height, count, seed, max_attempts } => {
            if *height < 1 {
                return Err(usage("--height must be at least 1"));
            }
            let cfg = SearchConfig { height_bound: *height, count: *count, seed: *seed, max_attempts: *max_attempts, hints: vec![] };
            let found = triangle::search_double_point(&cfg)?;
            let report = json!({
                "height": height,
                "seed": seed,
                "triples": found.iter().map(|t| json!({
                    "P": report::point(&t[0]), "Q": report::point(&t[1]), "R": report::point(&t[2]),
                    "delta": discriminant(&t[0], &t[1], &t[2]).to_string(),
                })).collect::<Vec<_>>(),
            });
            Ok(Outcome::json(report, true))
        }
    }
}

fn schedule(s: ScheduleArg, seed: u64) -> Schedule {
    match s {
        ScheduleArg::Worklist => Schedule::Worklist,
        ScheduleArg::Waves => Schedule::Waves,
        ScheduleArg::Random => Schedule::Random(seed),
    }
}

fn run_incidence(cli: &Cli, cmd: &IncidenceCommand) -> anyhow::Result<Outcome> {
    let IncidenceCommand::Eliminate { input, trace, schedule: sched, seed, admit, orders } = cmd;
    let s = subject(input)?;
    let extra = if *admit { Vec::new() } else { s.extra_points.clone().unwrap_or_default() };
    let admit_intersections = *admit || s.extra_points.is_none();
    let prob = IncidenceProblem::from_arrangement(&s.arrangement, &extra)?;
    let opts = EliminationOptions { schedule: schedule(*sched, *seed), admit_intersections };
    let (reduced, tr) = eliminate(&prob, opts)?;
    let signature = reduced.residue_signature();
    let mut agree = 0u64;
    for k in 0..*orders {
        let o = EliminationOptions { schedule: Schedule::Random(seed.wrapping_add(k + 1)), admit_intersections };
        let (other, _) = eliminate(&prob, o)?;
        agree += u64::from(other.residue_signature() == signature);
        log(cli, 2, format!("order {}: {}", k + 1, other.residue_signature() == signature));
    }
    let m = match_triangle(&reduced);
    let c = m.as_ref().map(|m| classify(&m.p, &m.q, &m.r));
    if let Some(path) = trace {
        let text = serde_json::to_string_pretty(&report::trace(&reduced, &tr))?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let waves: Vec<Value> = tr.waves().iter().map(|(w, steps)| json!({"wave": w, "fixed": steps.len()})).collect();
    let report = json!({
        "source": s.source,
        "variables": prob.variable_count(),
        "relations": prob.relations().len(),
        "extra_points": extra.len(),
        "admit_intersections": admit_intersections,
        "steps": tr.steps.len(),
        "waves": waves,
        "residue": report::residue(&reduced),
        "unlisted_incidences": reduced.unlisted_incidences(),
        "triangle": m.as_ref().map(|m| report::triangle_match(&reduced, m)),
        "classification": c.as_ref().map(report::classification),
        "confluence": {"orders": orders, "agreeing": agree},
    });
    let pass = m.is_some() && agree == *orders && reduced.unlisted_incidences().is_empty();
    Ok(Outcome::json(report, pass))
}

fn run_lambda(cli: &Cli, cmd: &LambdaCommand) -> anyhow::Result<Outcome> {
    match cmd {
        LambdaCommand::Search { group: g, seed, max_attempts } => {
            let g = group(g)?;
            let data = Dataset::load()?;
            let table = data.arrangement()?.incidence_table();
            let out = random_lambda_search(&table, g, *seed, *max_attempts)?;
            log(cli, 1, format!("accepted after {} attempts", out.attempts));
            let report = json!({
                "p": g.p(), "r": g.r(), "seed": seed,
                "attempts": out.attempts,
                "labels": report::labels(&out.lambda, &table),
                "lambda_sha256": report::lambda_digest(&out.lambda),
                "validation": report::validation(&validate(&out.lambda, &table)),
            });
            Ok(Outcome::json(report, true))
        }
        LambdaCommand::Validate { input } => {
            let s = subject(input)?;
            let lambda = require_labels(&s)?;
            let v = validate(lambda, &s.table);
            let report = json!({
                "source": s.source,
                "lambda_sha256": report::lambda_digest(lambda),
                "validation": report::validation(&v),
                "labels": report::labels(lambda, &s.table),
            });
            Ok(Outcome::json(report, v.pass()))
        }
        LambdaCommand::Rate { group: g, seed, attempts } => {
            let g = group(g)?;
            if *attempts == 0 {
                return Err(usage("--attempts must be positive"));
            }
            let data = Dataset::load()?;
            let table = data.arrangement()?.incidence_table();
            let t = Instant::now();
            let accepted = acceptance_count(&table, g, *seed, *attempts)?;
            let drawn = (table.num_lines() - 1) as u64;
            let computed = (table.num_points() + 1) as u64;
            let model = birthday_model(g.projective_classes(), drawn, computed);
            let n = *attempts as f64;
            let sigma = (n * model * (1.0 - model)).sqrt();
            let z = (accepted as f64 - n * model) / sigma;
            let report = json!({
                "p": g.p(), "r": g.r(), "seed": seed,
                "attempts": attempts,
                "accepted": accepted,
                "rate": accepted as f64 / n,
                "model_rate": model,
                "model_one_in": (1.0 / model).round(),
                "z_score": z,
                "within_3_sigma": z.abs() <= 3.0,
                "elapsed_ms": t.elapsed().as_millis() as u64,
            });
            Ok(Outcome::json(report, z.abs() <= 3.0))
        }
        LambdaCommand::Inspect { chi, point, line } => {
            let data = Dataset::load()?;
            let table = data.arrangement()?.incidence_table();
            let lambda = data.lambda(&table)?;
            inspect(&lambda, &table, chi.as_ref().map(|c| c.0.as_slice()), point.as_ref(), *line)
        }
    }
}

fn inspect(
    lambda: &LabelMap,
    table: &IncidenceTable,
    chi: Option<&[u32]>,
    point: Option<&ProjectivePoint>,
    line: Option<usize>,
) -> anyhow::Result<Outcome> {
    let g = lambda.group;
    let nu = match point {
        Some(x) => Some(table.index_of(x).ok_or_else(|| usage(format!("{x} is not a singular point")))?),
        None => None,
    };
    if let Some(i) = line {
        if i == 0 || i > table.num_lines() {
            return Err(usage(format!("--line must be in 1..={}", table.num_lines())));
        }
    }
    let mut report = serde_json::Map::new();
    if let Some(nu) = nu {
        let through = table.lines_through(nu);
        report.insert("point".into(), report::point(&table.points()[nu]));
        report.insert("mu".into(), json!(through.len()));
        report.insert("lines_through".into(), json!(through.iter().map(|i| i + 1).collect::<Vec<_>>()));
        if through.len() == 3 {
            let labels: [cover::GroupElement; 3] = std::array::from_fn(|k| lambda.lines[through[k]].clone());
            let sols = critical_chi_solutions(&labels, g.p());
            report.insert(
                "critical_characters".into(),
                json!(sols
                    .iter()
                    .map(|s| json!({
                        "distinguished_row": through[s.distinguished] + 1,
                        "particular": s.particular,
                        "kernel": s.kernel,
                        "count": s.count(g.p()),
                    }))
                    .collect::<Vec<_>>()),
            );
        }
    }
    if let Some(chi) = chi {
        let chi: Character = g.element(chi).map_err(|e| usage(e.to_string()))?;
        let l = l_chi(lambda, table, &chi)?;
        let pairings: Vec<u32> = lambda.lines.iter().map(|x| pairing_lift(&chi, x, g.p())).collect();
        let mut c = serde_json::Map::new();
        c.insert("chi".into(), json!(chi.0));
        c.insert("line_pairing_sum".into(), json!(pairings.iter().map(|&x| x as u64).sum::<u64>()));
        c.insert("h".into(), json!(l.h));
        c.insert("degree".into(), json!(l.h - 3));
        if let Some(nu) = nu {
            let s: u64 = table.lines_through(nu).iter().map(|&i| pairings[i] as u64).sum();
            c.insert("pairing_sum_at_point".into(), json!(s));
            c.insert("e_at_point".into(), json!(l.e[nu]));
        }
        if let Some(i) = line {
            let h = DivisorClass::hyperplane(table.num_points());
            let v = intersect(&strict_transform(i - 1, table), &(&h - &l));
            c.insert("row".into(), json!(i));
            c.insert("strict_transform_dot_h_minus_l".into(), json!(v));
        }
        report.insert("character".into(), Value::Object(c));
    }
    if report.is_empty() {
        return Err(usage("give at least one of --chi, --point"));
    }
    Ok(Outcome::json(Value::Object(report), true))
}

fn threads(cli: &Cli) -> usize {
    cli.threads.map(|t| t as usize).unwrap_or(0)
}

fn run_certify(cli: &Cli, input: &InputArgs) -> anyhow::Result<Outcome> {
    let s = subject(input)?;
    let lambda = require_labels(&s)?;
    let start = Instant::now();
    let mut sweep_ms = 0u64;
    log(cli, 1, format!("certifying {} ({} lines)", s.source, s.arrangement.len()));
    let cert = sweep::with_threads(threads(cli), || {
        full_certificate_with(&s.arrangement, s.extra_points.as_deref(), lambda, |ctx, reps| {
            let t = Instant::now();
            let r = sweep::parallel(ctx, reps);
            sweep_ms = t.elapsed().as_millis() as u64;
            r
        })
    })??;
    let timings = json!({"total_ms": start.elapsed().as_millis() as u64, "sweep_ms": sweep_ms});
    log(cli, 1, format!("done: {}", if cert.pass() { "pass" } else { "fail" }));
    let report = report::certificate(&cert, s.arrangement.lines(), lambda, timings);
    let tsv = cert.sweep.as_ref().map(|sw| report::sweep_tsv(sw, &CoverContext::new(&s.table, lambda).map(|c| c.characters()).unwrap_or_default()));
    Ok(Outcome { report, tsv, raw: None, pass: cert.pass() })
}

fn run_invariants(cli: &Cli, input: &InputArgs) -> anyhow::Result<Outcome> {
    let s = subject(input)?;
    let lambda = require_labels(&s)?;
    let v = validate(lambda, &s.table);
    if !v.pass() {
        let report = json!({"source": s.source, "validation": report::validation(&v)});
        return Ok(Outcome::json(report, false));
    }
    let start = Instant::now();
    let ctx = CoverContext::new(&s.table, lambda)?;
    let sw = sweep::with_threads(threads(cli), || certify::sweep_with(&ctx, sweep::parallel))??;
    let ample = check_ample(lambda.group.p(), &s.table);
    let (_, _, _, inv) = report::sweep_sections(&sw);
    let report = json!({
        "source": s.source,
        "invariants": inv,
        "ampleness": report::ampleness(&ample),
        "characters": {"count": sw.characters, "distinct_classes": sw.distinct_classes},
        "elapsed_ms": start.elapsed().as_millis() as u64,
    });
    let i = &sw.invariants;
    let pass = i.q == 0 && i.h1_sum == 0 && i.bmy_ok;
    Ok(Outcome::json(report, pass))
}

fn run_plot(input: &InputArgs, window: f64) -> anyhow::Result<Outcome> {
    if !(window.is_finite() && window > 0.0) {
        return Err(usage("--window must be positive"));
    }
    let s = subject(input)?;
    let text = svg::render(&s.table, window);
    Ok(Outcome { report: json!({"source": s.source, "lines": s.arrangement.len()}), tsv: None, raw: Some(text), pass: true })
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Closure { iters } => run_closure(*iters),
        Command::Heart => run_heart(),
        Command::Triangle { command } => run_triangle(command),
        Command::Incidence { command } => run_incidence(cli, command),
        Command::Lambda { command } => run_lambda(cli, command),
        Command::Certify { input } => run_certify(cli, input),
        Command::Invariants { input } => run_invariants(cli, input),
        Command::Plot { input, window } => run_plot(input, *window),
    }
}

fn emit(cli: &Cli, o: &Outcome) -> anyhow::Result<()> {
    let text = match (&o.raw, cli.format, &o.tsv) {
        (Some(raw), _, _) => raw.clone(),
        (None, Format::Tsv, Some(tsv)) => tsv.clone(),
        (None, Format::Tsv, None) => return Err(usage("this subcommand has no TSV output")),
        (None, Format::Json, _) => serde_json::to_string_pretty(&o.report)? + "\n",
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn is_input_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.is::<InputError>() || c.is::<UsageError>())
        || matches!(e.downcast_ref::<linecover_core::Error>(), Some(linecover_core::Error::InvalidInput(_)))
}

/// Run a parsed command line and return the exit status.
pub fn run(cli: &Cli) -> i32 {
    match dispatch(cli).and_then(|o| emit(cli, &o).map(|_| o.pass)) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("linecover: error: {e:#}");
            if is_input_error(&e) {
                EXIT_INPUT
            } else {
                EXIT_FAIL
            }
        }
    }
}

/// Parse `argv` and run; clap's own usage errors exit with status 2.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            code
        }
    }
}
