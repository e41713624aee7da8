//! Building data of abelian covers with group `G = (Z/p)^r`.
//!
//! Labels live on the strict transforms `L̄_1..L̄_n` and the exceptional
//! curves `E_1..E_m`; characters are identified with `G` through the dot
//! product.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::IncidenceTable;
use crate::error::{Error, Result};
use crate::linalg::{is_prime_u32, pow_mod, rank_mod, solve_affine_mod};
use crate::picard::DivisorClass;

/// `(Z/p)^r` with `p` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    p: u32,
    r: usize,
}

impl Group {
    pub fn new(p: u32, r: usize) -> Result<Self> {
        if !is_prime_u32(p) {
            return Err(Error::InvalidInput(format!("group order {p} is not prime")));
        }
        if r == 0 {
            return Err(Error::InvalidInput("group rank must be at least 1".into()));
        }
        if (p as u64).checked_pow(r as u32).is_none_or(|n| n > u32::MAX as u64) {
            return Err(Error::InvalidInput(format!("group ({p})^{r} is too large to enumerate")));
        }
        Ok(Group { p, r })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.r as u32)
    }

    /// `|P^{r-1}(F_p)|`.
    pub fn projective_classes(&self) -> u64 {
        (self.order() - 1) / (self.p as u64 - 1)
    }

    pub fn element(&self, v: &[u32]) -> Result<GroupElement> {
        if v.len() != self.r || v.iter().any(|&x| x >= self.p) {
            return Err(Error::InvalidInput(format!("{v:?} is not an element of (Z/{})^{}", self.p, self.r)));
        }
        Ok(GroupElement(v.to_vec()))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.r])
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |mut k| {
            let mut v = vec![0u32; self.r];
            for x in v.iter_mut().rev() {
                *x = (k % self.p as u64) as u32;
                k /= self.p as u64;
            }
            GroupElement(v)
        })
    }

    /// Representative of the projective class: first nonzero entry is 1.
    pub fn projective_class(&self, g: &GroupElement) -> Option<GroupElement> {
        let lead = *g.0.iter().find(|&&x| x != 0)?;
        let inv = pow_mod(lead as u64, self.p as u64 - 2, self.p as u64);
        Some(GroupElement(g.0.iter().map(|&x| (x as u64 * inv % self.p as u64) as u32).collect()))
    }

    fn random_nonzero<R: Rng>(&self, rng: &mut R) -> GroupElement {
        loop {
            let v: Vec<u32> = (0..self.r).map(|_| rng.gen_range(0..self.p)).collect();
            if v.iter().any(|&x| x != 0) {
                return GroupElement(v);
            }
        }
    }
}

/// An element of `G` (or, through the pairing, of its dual).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<u32>);

/// Characters are identified with group elements.
pub type Character = GroupElement;

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `⟨⟨χ, g⟩⟩ = Σ χ_k g_k mod p`, lifted to `0..p`.
pub fn pairing_lift(chi: &Character, g: &GroupElement, p: u32) -> u32 {
    (chi.0.iter().zip(&g.0).map(|(a, b)| *a as u64 * *b as u64).sum::<u64>() % p as u64) as u32
}

/// Labels of all strict transforms and exceptional curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    pub group: Group,
    pub lines: Vec<GroupElement>,
    pub exceptional: Vec<GroupElement>,
}

impl LabelMap {
    /// All labels, strict transforms first.
    pub fn all(&self) -> impl Iterator<Item = &GroupElement> {
        self.lines.iter().chain(self.exceptional.iter())
    }

    fn line_pairings(&self, chi: &Character) -> Vec<u32> {
        self.lines.iter().map(|g| pairing_lift(chi, g, self.group.p)).collect()
    }
}

/// Labels for every strict transform as given; the exceptional labels are
/// the sums over the lines through each point. Divisibility is not enforced.
pub fn lambda_from_lines(group: Group, lines: &[GroupElement], table: &IncidenceTable) -> Result<LabelMap> {
    if lines.len() != table.num_lines() {
        return Err(Error::InvalidInput(format!("{} labels given for {} lines", lines.len(), table.num_lines())));
    }
    for g in lines {
        group.element(&g.0)?;
    }
    let exceptional = (0..table.num_points())
        .map(|nu| table.lines_through(nu).iter().fold(group.zero(), |s, &i| group.add(&s, &lines[i])))
        .collect();
    Ok(LabelMap { group, lines: lines.to_vec(), exceptional })
}

/// The unique labelling satisfying divisibility with the given values on
/// the first `n − 1` strict transforms.
pub fn complete_lambda(group: Group, partial: &[GroupElement], table: &IncidenceTable) -> Result<LabelMap> {
    if partial.len() + 1 != table.num_lines() {
        return Err(Error::InvalidInput(format!(
            "{} labels given for {} lines; expected one fewer",
            partial.len(),
            table.num_lines()
        )));
    }
    for (i, g) in partial.iter().enumerate() {
        group.element(&g.0)?;
        if g.is_zero() {
            return Err(Error::InvalidInput(format!("label of line {} is zero", i + 1)));
        }
    }
    let mut lines = partial.to_vec();
    let sum = partial.iter().fold(group.zero(), |s, g| group.add(&s, g));
    lines.push(group.neg(&sum));
    let exceptional = (0..table.num_points())
        .map(|nu| table.lines_through(nu).iter().fold(group.zero(), |s, &i| group.add(&s, &lines[i])))
        .collect();
    Ok(LabelMap { group, lines, exceptional })
}

/// One validated property with human-readable witnesses of failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub pass: bool,
    pub witnesses: Vec<String>,
}

impl Check {
    fn from_witnesses(witnesses: Vec<String>) -> Self {
        Check { pass: witnesses.is_empty(), witnesses }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub divisibility: Check,
    pub nonzero: Check,
    pub injectivity: Check,
    pub spanning: Check,
    /// Every point on three or more lines is blown up, so `B` has normal crossings.
    pub normal_crossings: Check,
    /// Labels of meeting divisors are linearly independent.
    pub smooth_pairs: Check,
    pub distinct_classes: usize,
    pub pairs_checked: usize,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        [&self.divisibility, &self.nonzero, &self.injectivity, &self.spanning, &self.normal_crossings, &self.smooth_pairs]
            .iter()
            .all(|c| c.pass)
    }
}

fn divisor_name(table: &IncidenceTable, k: usize) -> String {
    if k < table.num_lines() {
        format!("L{}", k + 1)
    } else {
        format!("E{}", table.points()[k - table.num_lines()])
    }
}

/// `Σ_D ⟨⟨χ, λ(D)⟩⟩·D` in the Picard lattice.
pub fn weighted_branch_sum(lambda: &LabelMap, table: &IncidenceTable, chi: &Character) -> DivisorClass {
    let p = lambda.group.p;
    let pl = lambda.line_pairings(chi);
    let mut c = DivisorClass::zero(table.num_points());
    c.h = pl.iter().map(|&x| x as i64).sum();
    for nu in 0..table.num_points() {
        let on: i64 = table.lines_through(nu).iter().map(|&i| pl[i] as i64).sum();
        c.e[nu] = pairing_lift(chi, &lambda.exceptional[nu], p) as i64 - on;
    }
    c
}

/// Check divisibility, injectivity, spanning and smoothness of the cover.
pub fn validate(lambda: &LabelMap, table: &IncidenceTable) -> ValidationReport {
    let g = lambda.group;
    let p = g.p;
    let labels: Vec<&GroupElement> = lambda.all().collect();

    if lambda.lines.len() != table.num_lines() || lambda.exceptional.len() != table.num_points() {
        let msg = format!(
            "label counts {}+{} do not match {} lines and {} points",
            lambda.lines.len(),
            lambda.exceptional.len(),
            table.num_lines(),
            table.num_points()
        );
        let failed = Check { pass: false, witnesses: vec![msg] };
        return ValidationReport {
            divisibility: failed.clone(),
            nonzero: failed.clone(),
            injectivity: failed.clone(),
            spanning: failed.clone(),
            normal_crossings: failed.clone(),
            smooth_pairs: failed,
            distinct_classes: 0,
            pairs_checked: 0,
        };
    }

    let mut div = Vec::new();
    for chi in g.elements() {
        if !weighted_branch_sum(lambda, table, &chi).divisible_by(p as i64) {
            div.push(format!("character {chi}"));
            if div.len() >= 8 {
                break;
            }
        }
    }

    let nonzero: Vec<String> =
        labels.iter().enumerate().filter(|(_, l)| l.is_zero()).map(|(k, _)| divisor_name(table, k)).collect();

    let mut seen: alloc::collections::BTreeMap<GroupElement, usize> = alloc::collections::BTreeMap::new();
    let mut inj = Vec::new();
    for (k, l) in labels.iter().enumerate() {
        let Some(c) = g.projective_class(l) else { continue };
        if let Some(&first) = seen.get(&c) {
            inj.push(format!("{} and {} share class {c}", divisor_name(table, first), divisor_name(table, k)));
        } else {
            seen.insert(c, k);
        }
    }

    let rows: Vec<Vec<u32>> = labels.iter().map(|l| l.0.clone()).collect();
    let rank = rank_mod(&rows, p);
    let span = if rank == g.r { vec![] } else { vec![format!("labels span a subgroup of rank {rank} < {}", g.r)] };

    // Points on three or more lines must all be blown up.
    let mut nc = Vec::new();
    let blown: BTreeSet<_> = table.points().iter().collect();
    for (x, through) in crate::arrangement::Arrangement::new(table.lines().to_vec())
        .map(|a| a.intersection_classes())
        .unwrap_or_default()
    {
        if through.len() >= 3 && !blown.contains(&x) {
            nc.push(format!("{x} lies on {} lines but is not blown up", through.len()));
        }
    }

    let independent = |a: &GroupElement, b: &GroupElement| match (g.projective_class(a), g.projective_class(b)) {
        (Some(x), Some(y)) => x != y,
        _ => false,
    };
    let mut pairs = Vec::new();
    let mut checked = 0;
    for (x, i, j) in table.double_points() {
        checked += 1;
        if !independent(&lambda.lines[*i], &lambda.lines[*j]) {
            pairs.push(format!("L{} and L{} at {x}", i + 1, j + 1));
        }
    }
    for nu in 0..table.num_points() {
        for &i in table.lines_through(nu) {
            checked += 1;
            if !independent(&lambda.lines[i], &lambda.exceptional[nu]) {
                pairs.push(format!("L{} and E{}", i + 1, table.points()[nu]));
            }
        }
    }

    ValidationReport {
        divisibility: Check::from_witnesses(div),
        nonzero: Check::from_witnesses(nonzero),
        injectivity: Check::from_witnesses(inj),
        spanning: Check::from_witnesses(span),
        normal_crossings: Check::from_witnesses(nc),
        smooth_pairs: Check::from_witnesses(pairs),
        distinct_classes: seen.len(),
        pairs_checked: checked,
    }
}

/// `L_χ = (1/p) Σ_D ⟨⟨χ, λ(D)⟩⟩·D`, via the closed form for each coefficient.
pub fn l_chi(lambda: &LabelMap, table: &IncidenceTable, chi: &Character) -> Result<DivisorClass> {
    let p = lambda.group.p as i64;
    let pl = lambda.line_pairings(chi);
    let total: i64 = pl.iter().map(|&x| x as i64).sum();
    if total % p != 0 {
        return Err(Error::DivisibilityViolation {
            character: format!("{chi}"),
            detail: format!("sum of line pairings {total} is not divisible by {p}"),
        });
    }
    let e = (0..table.num_points())
        .map(|nu| -(table.lines_through(nu).iter().map(|&i| pl[i] as i64).sum::<i64>() / p))
        .collect();
    Ok(DivisorClass { h: total / p, e })
}

/// The heart labels read from the bundled table.
pub fn table_labels() -> (Group, Vec<GroupElement>) {
    let g = Group::new(crate::data::HEART_P, crate::data::HEART_R).expect("bundled group is valid");
    (g, crate::data::TABLE.iter().map(|(_, l)| GroupElement(l.to_vec())).collect())
}

/// `λ♥`: the bundled labels on lines `1..n−1`, completed.
pub fn heart_lambda(table: &IncidenceTable) -> Result<LabelMap> {
    let (g, labels) = table_labels();
    complete_lambda(g, &labels[..labels.len() - 1], table)
}

/// Whether `λ` is accepted by the search: nonzero, injective and spanning.
pub fn accepts(lambda: &LabelMap) -> bool {
    let g = lambda.group;
    let mut seen = BTreeSet::new();
    for l in lambda.all() {
        match g.projective_class(l) {
            Some(c) => {
                if !seen.insert(c) {
                    return false;
                }
            }
            None => return false,
        }
    }
    let rows: Vec<Vec<u32>> = lambda.all().map(|l| l.0.clone()).collect();
    rank_mod(&rows, g.p) == g.r
}

fn draw_partial<R: Rng>(rng: &mut R, group: Group, n: usize) -> Vec<GroupElement> {
    let mut used = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = group.random_nonzero(rng);
        if used.insert(group.projective_class(&x).expect("nonzero")) {
            out.push(x);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub lambda: LabelMap,
    pub attempts: u64,
}

/// Draw labels for lines `1..n−1` with distinct projective classes, complete,
/// and accept the first labelling whose labels are all distinct classes and
/// span `G`. Deterministic in `seed`.
pub fn random_lambda_search(table: &IncidenceTable, group: Group, seed: u64, max_attempts: u64) -> Result<SearchOutcome> {
    if (table.num_lines() as u64) > group.projective_classes() + 1 {
        return Err(Error::InvalidInput("more lines than projective classes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let partial = draw_partial(&mut rng, group, table.num_lines() - 1);
        let lambda = complete_lambda(group, &partial, table)?;
        if accepts(&lambda) {
            return Ok(SearchOutcome { lambda, attempts: attempt });
        }
    }
    Err(Error::SearchExhausted { attempts: max_attempts })
}

/// Number of accepted draws among `attempts` independent draws.
pub fn acceptance_count(table: &IncidenceTable, group: Group, seed: u64, attempts: u64) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..attempts {
        let partial = draw_partial(&mut rng, group, table.num_lines() - 1);
        hits += accepts(&complete_lambda(group, &partial, table)?) as u64;
    }
    Ok(hits)
}

/// Acceptance probability when the `n − 1 + m` computed labels are modelled as
/// independent uniform projective classes after `n − 1` distinct draws.
pub fn birthday_model(classes: u64, drawn: u64, computed: u64) -> f64 {
    (0..=computed).map(|k| (classes - drawn - k) as f64 / classes as f64).product()
}

/// Solutions of `⟨χ, g_a⟩ = ⟨χ, g_b⟩ = 0`, `⟨χ, g_c⟩ = p − 1` for a triple point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSolutions {
    /// Position (0..3) of the line paired to `p − 1`.
    pub distinguished: usize,
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
}

impl CriticalSolutions {
    pub fn count(&self, p: u32) -> u64 {
        (p as u64).pow(self.kernel.len() as u32)
    }
}

/// For each choice of distinguished line among the three, the affine space
/// of critical characters, or nothing if the system is inconsistent.
pub fn critical_chi_solutions(labels: &[GroupElement; 3], p: u32) -> Vec<CriticalSolutions> {
    let mut out = Vec::new();
    for d in 0..3 {
        let order: Vec<usize> = (0..3).filter(|&k| k != d).chain(core::iter::once(d)).collect();
        let rows: Vec<Vec<u32>> = order.iter().map(|&k| labels[k].0.clone()).collect();
        if let Some((particular, kernel)) = solve_affine_mod(&rows, &[0, 0, p - 1], p) {
            out.push(CriticalSolutions { distinguished: d, particular, kernel });
        }
    }
    out
}
