//! The verification pipeline: rigidity conditions, ampleness, invariants and
//! the staged certificate.
//!
//! The per-character work splits into an expensive part that depends only on
//! the class `L_χ` ([`TwistData`]) and cheap combinatorial checks. Callers
//! supply the map over distinct classes, so the std crate can run it in
//! parallel; the reduction is always in character order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arrangement::{Arrangement, IncidenceTable};
use crate::cohomology::{forms, h0_h1, ideal_of_chi, regularity_report, H1Evidence};
use crate::cover::{critical_chi_solutions, l_chi, pairing_lift, validate, Character, LabelMap, ValidationReport};
use crate::error::{Error, Result};
use crate::geom::ProjectivePoint;
use crate::incidence::{certify_double_point, DoublePointCertificate, EliminationOptions};
use crate::picard::{branch_class, canonical_class, intersect, strict_transform, DivisorClass};

/// The two published values of `χ(O)` for the heart surface.
pub const REFERENCE_CHI: [i64; 2] = [151_802, 151_851];

/// Inputs shared by every character.
#[derive(Clone, Debug)]
pub struct CoverContext<'a> {
    pub table: &'a IncidenceTable,
    pub lambda: &'a LabelMap,
    strict: Vec<DivisorClass>,
}

impl<'a> CoverContext<'a> {
    pub fn new(table: &'a IncidenceTable, lambda: &'a LabelMap) -> Result<Self> {
        if lambda.lines.len() != table.num_lines() || lambda.exceptional.len() != table.num_points() {
            return Err(Error::InvalidInput(format!(
                "labels for {} lines and {} points, table has {} and {}",
                lambda.lines.len(),
                lambda.exceptional.len(),
                table.num_lines(),
                table.num_points()
            )));
        }
        let strict = (0..table.num_lines()).map(|i| strict_transform(i, table)).collect();
        Ok(CoverContext { table, lambda, strict })
    }

    pub fn p(&self) -> u32 {
        self.lambda.group.p()
    }

    pub fn characters(&self) -> Vec<Character> {
        self.lambda.group.elements().collect()
    }

    pub fn strict_transforms(&self) -> &[DivisorClass] {
        &self.strict
    }
}

/// `𝒜(χ)`: strict transforms `D` with `⟨χ, λ(D)⟩ ≠ p − 1` and `(H − L_χ)·D < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSet {
    pub chi: Character,
    pub members: Vec<usize>,
}

pub fn admissible_set(ctx: &CoverContext, chi: &Character, l: &DivisorClass) -> AdmissibleSet {
    let p = ctx.p();
    let h_minus_l = &DivisorClass::hyperplane(ctx.table.num_points()) - l;
    let members = (0..ctx.table.num_lines())
        .filter(|&i| pairing_lift(chi, &ctx.lambda.lines[i], p) != p - 1 && intersect(&h_minus_l, &ctx.strict[i]) < 0)
        .collect();
    AdmissibleSet { chi: chi.clone(), members }
}

/// Everything computed from the fat-point scheme of one class `L_χ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistData {
    pub d: i64,
    pub degree: u64,
    pub points: usize,
    pub regularity: i64,
    /// `h0`, `h1` of `I_χ(d)`.
    pub h0: u64,
    pub h1: u64,
    /// Twists whose `h1 > 0` needed an exact rank rather than a line.
    pub exact_rank_twists: usize,
    pub line_certificates: usize,
}

/// The expensive part of a character, keyed by its class.
pub fn twist_data(ctx: &CoverContext, chi: &Character) -> Result<TwistData> {
    let (z, d) = ideal_of_chi(ctx.lambda, ctx.table, chi)?;
    let rep = regularity_report(&z)?;
    let (h0, h1) = h0_h1(&z, d);
    if d >= 0 && h0 as i64 - h1 as i64 != forms(d) as i64 - z.degree() as i64 {
        return Err(Error::Internal(format!("Euler bookkeeping fails for {chi} at t = {d}")));
    }
    let count = |f: fn(&H1Evidence) -> bool| rep.checks.iter().filter(|c| f(&c.evidence)).count();
    Ok(TwistData {
        d,
        degree: z.degree(),
        points: z.points().len(),
        regularity: rep.regularity,
        h0,
        h1,
        exact_rank_twists: count(|e| matches!(e, H1Evidence::Deficient { .. })),
        line_certificates: count(|e| matches!(e, H1Evidence::Line { .. })),
    })
}

/// The cheap per-character checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterReport {
    pub chi: Character,
    pub l: DivisorClass,
    /// Largest `D·(D − L_χ)` over strict transforms.
    pub b_max: i64,
    /// Largest `E·(E − L_χ)` over exceptional curves.
    pub b_max_exceptional: i64,
    pub admissible: usize,
    /// `(ν, required, found)` where the requirement of (c) binds.
    pub c_binding: Vec<(usize, i64, i64)>,
    /// Triple points where this character is critical.
    pub critical_at: Vec<usize>,
}

impl CharacterReport {
    pub fn b_pass(&self) -> bool {
        self.b_max < 0
    }

    pub fn c_failures(&self) -> impl Iterator<Item = &(usize, i64, i64)> {
        self.c_binding.iter().filter(|(_, req, got)| got < req)
    }
}

pub fn character_report(ctx: &CoverContext, chi: &Character, l: &DivisorClass) -> CharacterReport {
    let m = ctx.table.num_points();
    let p = ctx.p();
    let b_max = ctx.strict.iter().map(|d| intersect(d, &(d - l))).max().unwrap_or(i64::MIN);
    let b_max_exceptional = (0..m)
        .map(|nu| {
            let e = DivisorClass::exceptional(m, nu);
            intersect(&e, &(&e - l))
        })
        .max()
        .unwrap_or(i64::MIN);
    let adm = admissible_set(ctx, chi, l);
    let mut c_binding = Vec::new();
    let mut critical_at = Vec::new();
    for nu in 0..m {
        let through = ctx.table.lines_through(nu);
        let required = 2 - intersect(l, &DivisorClass::exceptional(m, nu));
        if required > 0 {
            let found = through.iter().filter(|i| adm.members.contains(i)).count() as i64;
            c_binding.push((nu, required, found));
        }
        if through.len() == 3 {
            let mut pl: Vec<u32> = through.iter().map(|&i| pairing_lift(chi, &ctx.lambda.lines[i], p)).collect();
            pl.sort();
            if pl == [0, 0, p - 1] {
                critical_at.push(nu);
            }
        }
    }
    CharacterReport { chi: chi.clone(), l: l.clone(), b_max, b_max_exceptional, admissible: adm.members.len(), c_binding, critical_at }
}

/// A verdict with a bounded list of failure witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub checked: usize,
    pub witnesses: Vec<String>,
}

const MAX_WITNESSES: usize = 16;

impl Verdict {
    fn new() -> Self {
        Verdict { pass: true, checked: 0, witnesses: Vec::new() }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.pass = false;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionA {
    pub verdict: Verdict,
    /// Smallest `d^χ − reg(I_χ)` over `χ ≠ 0`.
    pub min_margin: i64,
    /// `(reg, d)` for every character, in character order.
    pub values: Vec<(i64, i64)>,
    pub exact_rank_twists: usize,
    pub line_certificates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionB {
    pub verdict: Verdict,
    pub max_value: i64,
    /// The skipped exceptional curves, checked anyway.
    pub exceptional: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionC {
    pub verdict: Verdict,
    /// Pairs `(χ, E_ν)` where the requirement is positive.
    pub binding: usize,
    /// Per triple point: critical characters counted directly and from the linear systems.
    pub critical: Vec<(ProjectivePoint, u64, u64)>,
    pub critical_bound: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Invariants {
    pub k2: i64,
    pub chi: i64,
    pub pg: i64,
    pub q: i64,
    /// `Σ_{χ≠0} h1(I_χ(d^χ))`.
    pub h1_sum: u64,
    pub slope: f64,
    pub bmy_ok: bool,
    pub kuranishi_bound: i64,
    pub matches_reference: Option<i64>,
}

/// Conditions (a)(b)(c) and the invariants from one sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub a: ConditionA,
    pub b: ConditionB,
    pub c: ConditionC,
    pub invariants: Invariants,
    pub characters: usize,
    pub distinct_classes: usize,
}

/// `L_χ` for every character, the distinct classes, and the class index of each character.
pub fn classes(ctx: &CoverContext) -> Result<(Vec<Character>, Vec<DivisorClass>, Vec<Character>, Vec<usize>)> {
    let chars = ctx.characters();
    let mut ls = Vec::with_capacity(chars.len());
    let mut index: BTreeMap<DivisorClass, usize> = BTreeMap::new();
    let mut reps = Vec::new();
    let mut of = Vec::with_capacity(chars.len());
    for chi in &chars {
        let l = l_chi(ctx.lambda, ctx.table, chi)?;
        let k = *index.entry(l.clone()).or_insert_with(|| {
            reps.push(chi.clone());
            reps.len() - 1
        });
        of.push(k);
        ls.push(l);
    }
    Ok((chars, ls, reps, of))
}

/// Sequential map over representatives.
pub fn sequential(ctx: &CoverContext, reps: &[Character]) -> Vec<Result<TwistData>> {
    reps.iter().map(|chi| twist_data(ctx, chi)).collect()
}

/// Run the sweep with `map` computing [`TwistData`] for each representative.
pub fn sweep_with<F>(ctx: &CoverContext, map: F) -> Result<SweepResult>
where
    F: FnOnce(&CoverContext, &[Character]) -> Vec<Result<TwistData>>,
{
    let (chars, ls, reps, of) = classes(ctx)?;
    let twists: Vec<TwistData> = map(ctx, &reps).into_iter().collect::<Result<_>>()?;
    if twists.len() != reps.len() {
        return Err(Error::Internal("map returned the wrong number of results".into()));
    }
    let m = ctx.table.num_points();
    let g = ctx.lambda.group;
    let k = canonical_class(m);

    let mut a = ConditionA { verdict: Verdict::new(), min_margin: i64::MAX, values: Vec::new(), exact_rank_twists: 0, line_certificates: 0 };
    for t in &twists {
        a.exact_rank_twists += t.exact_rank_twists;
        a.line_certificates += t.line_certificates;
    }
    let mut b = ConditionB { verdict: Verdict::new(), max_value: i64::MIN, exceptional: Verdict::new() };
    let mut c = ConditionC { verdict: Verdict::new(), binding: 0, critical: Vec::new(), critical_bound: 0 };
    let mut critical_direct: BTreeMap<usize, u64> = BTreeMap::new();
    let (mut chi_sum, mut pg, mut h1_sum) = (0i64, 0i64, 0u64);

    for ((chi, l), &ki) in chars.iter().zip(&ls).zip(&of) {
        let t = &twists[ki];
        let twice = intersect(l, &(l + &k)) + 2;
        if twice % 2 != 0 {
            return Err(Error::Internal(format!("χ(L^-1) is not integral for {chi}")));
        }
        chi_sum += twice / 2;
        pg += t.h0 as i64;
        a.values.push((t.regularity, t.d));
        if chi.is_zero() {
            if !l.is_zero() || twice != 2 || t.h0 != 0 {
                return Err(Error::Internal("the trivial character must contribute L = 0 and χ = 1".into()));
            }
            continue;
        }
        h1_sum += t.h1;
        a.min_margin = a.min_margin.min(t.d - t.regularity);
        a.verdict.record(t.regularity < t.d, || format!("{chi}: reg {} ≥ d {}", t.regularity, t.d));

        let r = character_report(ctx, chi, l);
        b.max_value = b.max_value.max(r.b_max);
        b.verdict.record(r.b_pass(), || format!("{chi}: D·(D − L) = {}", r.b_max));
        b.exceptional.record(r.b_max_exceptional < 0, || format!("{chi}: E·(E − L) = {}", r.b_max_exceptional));
        c.binding += r.c_binding.len();
        let fails: Vec<_> = r.c_failures().collect();
        c.verdict.record(fails.is_empty(), || {
            let (nu, req, got) = fails[0];
            format!("{chi} at {}: {got} admissible lines, need {req}", ctx.table.points()[*nu])
        });
        for nu in r.critical_at {
            *critical_direct.entry(nu).or_default() += 1;
        }
    }

    let p = g.p();
    c.critical_bound = 3 * (p as u64).pow(g.r().saturating_sub(3) as u32);
    for nu in 0..m {
        let through = ctx.table.lines_through(nu);
        if through.len() != 3 {
            continue;
        }
        let labels = [through[0], through[1], through[2]].map(|i| ctx.lambda.lines[i].clone());
        let solved: u64 = critical_chi_solutions(&labels, p).iter().map(|s| s.count(p)).sum();
        let direct = critical_direct.get(&nu).copied().unwrap_or(0);
        if direct != solved || direct > c.critical_bound {
            return Err(Error::Internal(format!(
                "critical characters at {}: {direct} counted, {solved} from the linear systems",
                ctx.table.points()[nu]
            )));
        }
        c.critical.push((ctx.table.points()[nu].clone(), direct, solved));
    }

    let delta = &(p as i64 * &k) + &((p as i64 - 1) * &branch_class(ctx.table));
    let k2 = delta.square() * (p as i64).pow(g.r().saturating_sub(2) as u32);
    let q = 1 - chi_sum + pg;
    if q < 0 {
        return Err(Error::Internal(format!("q = {q} < 0")));
    }
    let invariants = Invariants {
        k2,
        chi: chi_sum,
        pg,
        q,
        h1_sum,
        slope: k2 as f64 / chi_sum as f64,
        bmy_ok: k2 <= 9 * chi_sum,
        kuranishi_bound: 10 * chi_sum - 2 * k2,
        matches_reference: REFERENCE_CHI.iter().copied().find(|&v| v == chi_sum),
    };
    Ok(SweepResult { a, b, c, invariants, characters: chars.len(), distinct_classes: reps.len() })
}

/// The four numerical hypotheses of the ampleness criterion, decided exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleReport {
    pub p: u32,
    pub n: usize,
    pub p_at_least_3: bool,
    /// `[(p−1)n − 3p]² − Σ [(p−1)μ_ν − (2p−1)]²`.
    pub delta_square: i128,
    /// Bound `(2p−1)n / 3p` as a fraction, and the largest `μ_ν`.
    pub mu_bound: (i128, i128),
    pub max_mu: usize,
    pub mu_ok: bool,
    pub n_ok: bool,
}

impl AmpleReport {
    pub fn pass(&self) -> bool {
        self.p_at_least_3 && self.delta_square > 0 && self.mu_ok && self.n_ok
    }
}

pub fn check_ample(p: u32, table: &IncidenceTable) -> AmpleReport {
    let (pi, n) = (p as i128, table.num_lines() as i128);
    let head = (pi - 1) * n - 3 * pi;
    let tail: i128 = (0..table.num_points())
        .map(|nu| {
            let v = (pi - 1) * table.mu(nu) as i128 - (2 * pi - 1);
            v * v
        })
        .sum();
    let max_mu = (0..table.num_points()).map(|nu| table.mu(nu)).max().unwrap_or(0);
    AmpleReport {
        p,
        n: table.num_lines(),
        p_at_least_3: p >= 3,
        delta_square: head * head - tail,
        mu_bound: ((2 * pi - 1) * n, 3 * pi),
        max_mu,
        mu_ok: (max_mu as i128) * 3 * pi < (2 * pi - 1) * n,
        n_ok: n * (pi - 1) > 3 * pi,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Incidence,
    BuildingData,
    Conditions,
    Ampleness,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Incidence => "incidence",
            Stage::BuildingData => "building_data",
            Stage::Conditions => "conditions",
            Stage::Ampleness => "ampleness",
        }
    }
}

/// The staged certificate. Stages after the first failure are absent.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub incidence: core::result::Result<DoublePointCertificate, Error>,
    pub building_data: Option<ValidationReport>,
    pub sweep: Option<SweepResult>,
    pub ampleness: Option<AmpleReport>,
    pub failed: Option<Stage>,
}

impl Certificate {
    pub fn pass(&self) -> bool {
        self.failed.is_none()
    }
}

/// Chain the incidence certificate, building data validation, the sweep and
/// ampleness, stopping at the first failing stage.
///
/// Without `extra_points`, meets of fixed lines are admitted during elimination.
pub fn full_certificate_with<F>(
    a: &Arrangement,
    extra_points: Option<&[ProjectivePoint]>,
    lambda: &LabelMap,
    map: F,
) -> Result<Certificate>
where
    F: FnOnce(&CoverContext, &[Character]) -> Vec<Result<TwistData>>,
{
    let mut cert = Certificate { incidence: Err(Error::Internal("not run".into())), building_data: None, sweep: None, ampleness: None, failed: None };
    let opts = EliminationOptions { admit_intersections: extra_points.is_none(), ..EliminationOptions::default() };
    cert.incidence = certify_double_point(a, extra_points.unwrap_or(&[]), opts);
    if cert.incidence.is_err() {
        cert.failed = Some(Stage::Incidence);
        return Ok(cert);
    }
    let table = a.incidence_table();
    let report = validate(lambda, &table);
    let ok = report.pass();
    cert.building_data = Some(report);
    if !ok {
        cert.failed = Some(Stage::BuildingData);
        return Ok(cert);
    }
    let ctx = CoverContext::new(&table, lambda)?;
    let sweep = sweep_with(&ctx, map)?;
    let ok = sweep.a.verdict.pass && sweep.b.verdict.pass && sweep.c.verdict.pass;
    cert.sweep = Some(sweep);
    if !ok {
        cert.failed = Some(Stage::Conditions);
        return Ok(cert);
    }
    let amp = check_ample(lambda.group.p(), &table);
    if !amp.pass() {
        cert.failed = Some(Stage::Ampleness);
    }
    cert.ampleness = Some(amp);
    Ok(cert)
}

pub fn full_certificate(a: &Arrangement, extra_points: Option<&[ProjectivePoint]>, lambda: &LabelMap) -> Result<Certificate> {
    full_certificate_with(a, extra_points, lambda, sequential)
}
