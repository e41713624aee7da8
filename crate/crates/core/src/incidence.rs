//! Generalized incidence schemes and the elimination calculus.
//!
//! A problem has point and line slots. Fixed slots carry their coordinates;
//! variable slots carry a realization. Two rules are applied until neither
//! fires: a variable line through two distinct fixed points is fixed at their
//! join, and a variable point on two distinct fixed lines is fixed at their
//! meet. Each fixing is checked exactly against the realization.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{base_points, Arrangement};
use crate::error::{Error, Result};
use crate::geom::{incident, join, meet, ProjectiveLine, ProjectivePoint};
use crate::triangle::{classify, TriangleClassification, TriangleKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Point(usize),
    Line(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Object {
    Point(ProjectivePoint),
    Line(ProjectiveLine),
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Point(x) => write!(f, "point {x}"),
            Object::Line(l) => write!(f, "line {l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSlot {
    pub name: String,
    pub coords: ProjectivePoint,
    pub fixed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSlot {
    pub name: String,
    pub coords: ProjectiveLine,
    pub fixed: bool,
}

/// Relations are `(point slot, line slot)` pairs. Coordinates of a variable
/// slot are its realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceProblem {
    points: Vec<PointSlot>,
    lines: Vec<LineSlot>,
    relations: BTreeSet<(usize, usize)>,
}

/// The canonical name of a point slot created from coordinates.
pub fn coordinate_name(x: &ProjectivePoint) -> String {
    x.to_string()
}

impl IncidenceProblem {
    pub fn new(points: Vec<PointSlot>, lines: Vec<LineSlot>, relations: BTreeSet<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &relations {
            let (Some(x), Some(l)) = (points.get(a), lines.get(b)) else {
                return Err(Error::InvalidInput(format!("relation ({a}, {b}) references a missing slot")));
            };
            if !incident(&x.coords, &l.coords) {
                return Err(Error::InvalidInput(format!("relation {} on {} fails in the realization", x.name, l.name)));
            }
        }
        let mut seen = BTreeSet::new();
        for x in &points {
            if !seen.insert(&x.coords) {
                return Err(Error::InvalidInput(format!("point {} appears twice", x.coords)));
            }
        }
        let mut seen = BTreeSet::new();
        for l in &lines {
            if !seen.insert(&l.coords) {
                return Err(Error::InvalidInput(format!("line {} appears twice", l.coords)));
            }
        }
        Ok(IncidenceProblem { points, lines, relations })
    }

    /// Variable lines for every line of `a`, fixed points `q1..q4`, variable
    /// points for the other singular points and for `extra_points`, and a
    /// relation for every actual incidence.
    pub fn from_arrangement(a: &Arrangement, extra_points: &[ProjectivePoint]) -> Result<Self> {
        let classes = a.intersection_classes();
        let q = base_points();
        let mut points = Vec::new();
        for (k, x) in q.iter().enumerate() {
            if classes.get(x).is_none_or(|t| t.len() < 3) {
                return Err(Error::InvalidInput(format!("base point q{} = {x} is not a singular point", k + 1)));
            }
            points.push(PointSlot { name: format!("q{}", k + 1), coords: x.clone(), fixed: true });
        }
        let mut known: BTreeSet<ProjectivePoint> = q.iter().cloned().collect();
        let singular = classes.iter().filter(|(_, t)| t.len() >= 3).map(|(x, _)| x);
        for x in singular.chain(extra_points.iter()) {
            if known.insert(x.clone()) {
                points.push(PointSlot { name: coordinate_name(x), coords: x.clone(), fixed: false });
            }
        }
        let lines: Vec<LineSlot> = a
            .lines()
            .iter()
            .enumerate()
            .map(|(i, l)| LineSlot { name: format!("L{}", i + 1), coords: l.clone(), fixed: false })
            .collect();
        let mut relations = BTreeSet::new();
        for (i, x) in points.iter().enumerate() {
            for (j, l) in lines.iter().enumerate() {
                if incident(&x.coords, &l.coords) {
                    relations.insert((i, j));
                }
            }
        }
        IncidenceProblem::new(points, lines, relations)
    }

    pub fn points(&self) -> &[PointSlot] {
        &self.points
    }

    pub fn lines(&self) -> &[LineSlot] {
        &self.lines
    }

    pub fn relations(&self) -> &BTreeSet<(usize, usize)> {
        &self.relations
    }

    pub fn name(&self, s: Slot) -> &str {
        match s {
            Slot::Point(i) => &self.points[i].name,
            Slot::Line(i) => &self.lines[i].name,
        }
    }

    pub fn is_fixed(&self, s: Slot) -> bool {
        match s {
            Slot::Point(i) => self.points[i].fixed,
            Slot::Line(i) => self.lines[i].fixed,
        }
    }

    pub fn variable_points(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.points.len()).filter(|&i| !self.points[i].fixed)
    }

    pub fn variable_lines(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.lines.len()).filter(|&i| !self.lines[i].fixed)
    }

    pub fn variable_count(&self) -> usize {
        self.variable_points().count() + self.variable_lines().count()
    }

    /// Names of the variable slots and the relations as name pairs.
    pub fn residue_signature(&self) -> (BTreeSet<String>, BTreeSet<(String, String)>) {
        let vars = self
            .variable_points()
            .map(|i| self.points[i].name.clone())
            .chain(self.variable_lines().map(|i| self.lines[i].name.clone()))
            .collect();
        let rels = self
            .relations
            .iter()
            .map(|&(a, b)| (self.points[a].name.clone(), self.lines[b].name.clone()))
            .collect();
        (vars, rels)
    }

    /// Incidences in the realization that involve a variable slot and are
    /// not listed as relations.
    pub fn unlisted_incidences(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, x) in self.points.iter().enumerate() {
            for (j, l) in self.lines.iter().enumerate() {
                if (x.fixed && l.fixed) || self.relations.contains(&(i, j)) {
                    continue;
                }
                if incident(&x.coords, &l.coords) {
                    out.push((x.name.clone(), l.name.clone()));
                }
            }
        }
        out
    }
}

/// Firing order of the rewriting rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// First come, first served.
    Worklist,
    /// Rounds: everything firable at the start of a round fires in it.
    Waves,
    /// Uniformly random among the firable candidates.
    Random(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EliminationOptions {
    pub schedule: Schedule,
    /// Add every meet of two fixed lines as a fixed point slot.
    pub admit_intersections: bool,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        EliminationOptions { schedule: Schedule::Worklist, admit_intersections: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// A variable slot was fixed from its two witnesses.
    Fix,
    /// A new fixed point slot was created as the meet of two fixed lines.
    Admit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationStep {
    pub action: Action,
    pub slot: Slot,
    pub name: String,
    pub witnesses: [Slot; 2],
    pub value: Object,
    /// Round number under [`Schedule::Waves`], starting at 1.
    pub wave: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EliminationTrace {
    pub steps: Vec<EliminationStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Candidate {
    Fix(Slot),
    Admit(usize, usize),
}

struct Eliminator {
    prob: IncidenceProblem,
    point_lines: Vec<Vec<usize>>,
    line_points: Vec<Vec<usize>>,
    point_index: BTreeMap<ProjectivePoint, usize>,
    queued: BTreeSet<Slot>,
    pending: VecDeque<Candidate>,
    trace: EliminationTrace,
    admit: bool,
}

impl Eliminator {
    fn new(prob: IncidenceProblem, admit: bool) -> Self {
        let mut point_lines = vec![Vec::new(); prob.points.len()];
        let mut line_points = vec![Vec::new(); prob.lines.len()];
        for &(a, b) in &prob.relations {
            point_lines[a].push(b);
            line_points[b].push(a);
        }
        let point_index = prob.points.iter().enumerate().map(|(i, x)| (x.coords.clone(), i)).collect();
        Eliminator {
            prob,
            point_lines,
            line_points,
            point_index,
            queued: BTreeSet::new(),
            pending: VecDeque::new(),
            trace: EliminationTrace::default(),
            admit,
        }
    }

    fn fixed_neighbours(&self, s: Slot) -> Vec<Slot> {
        match s {
            Slot::Point(i) => {
                self.point_lines[i].iter().filter(|&&j| self.prob.lines[j].fixed).map(|&j| Slot::Line(j)).collect()
            }
            Slot::Line(j) => {
                self.line_points[j].iter().filter(|&&i| self.prob.points[i].fixed).map(|&i| Slot::Point(i)).collect()
            }
        }
    }

    fn neighbours(&self, s: Slot) -> Vec<Slot> {
        match s {
            Slot::Point(i) => self.point_lines[i].iter().map(|&j| Slot::Line(j)).collect(),
            Slot::Line(j) => self.line_points[j].iter().map(|&i| Slot::Point(i)).collect(),
        }
    }

    /// The first pair of fixed neighbours with distinct coordinates, and their join or meet.
    fn witnesses(&self, s: Slot) -> Option<([Slot; 2], Object)> {
        let fixed = self.fixed_neighbours(s);
        for a in 0..fixed.len() {
            for b in a + 1..fixed.len() {
                let value = match (fixed[a], fixed[b]) {
                    (Slot::Point(x), Slot::Point(y)) => {
                        join(&self.prob.points[x].coords, &self.prob.points[y].coords).ok().map(Object::Line)
                    }
                    (Slot::Line(x), Slot::Line(y)) => {
                        meet(&self.prob.lines[x].coords, &self.prob.lines[y].coords).ok().map(Object::Point)
                    }
                    _ => None,
                };
                if let Some(v) = value {
                    return Some(([fixed[a], fixed[b]], v));
                }
            }
        }
        None
    }

    fn consider(&mut self, s: Slot) {
        if !self.prob.is_fixed(s) && !self.queued.contains(&s) && self.witnesses(s).is_some() {
            self.queued.insert(s);
            self.pending.push_back(Candidate::Fix(s));
        }
    }

    fn seed(&mut self) {
        for i in 0..self.prob.points.len() {
            self.consider(Slot::Point(i));
        }
        for j in 0..self.prob.lines.len() {
            self.consider(Slot::Line(j));
        }
        if self.admit {
            let fixed: Vec<usize> = (0..self.prob.lines.len()).filter(|&j| self.prob.lines[j].fixed).collect();
            for (k, &a) in fixed.iter().enumerate() {
                for &b in &fixed[k + 1..] {
                    self.pending.push_back(Candidate::Admit(a, b));
                }
            }
        }
    }

    fn fire(&mut self, c: Candidate, wave: Option<usize>) -> Result<()> {
        match c {
            Candidate::Fix(s) => self.fix(s, wave),
            Candidate::Admit(a, b) => self.admit_meet(a, b, wave),
        }
    }

    fn fix(&mut self, s: Slot, wave: Option<usize>) -> Result<()> {
        if self.prob.is_fixed(s) {
            return Ok(());
        }
        let (witnesses, value) = self.witnesses(s).ok_or_else(|| Error::Internal(format!("{} queued without witnesses", self.prob.name(s))))?;
        let step = self.trace.steps.len();
        let inconsistent = |prob: &IncidenceProblem, computed: String, realization: String| Error::InconsistentElimination {
            step,
            slot: prob.name(s).to_string(),
            computed,
            realization,
        };
        match (&value, s) {
            (Object::Line(l), Slot::Line(j)) => {
                if *l != self.prob.lines[j].coords {
                    return Err(inconsistent(&self.prob, l.to_string(), self.prob.lines[j].coords.to_string()));
                }
                self.prob.lines[j].fixed = true;
            }
            (Object::Point(x), Slot::Point(i)) => {
                if *x != self.prob.points[i].coords {
                    return Err(inconsistent(&self.prob, x.to_string(), self.prob.points[i].coords.to_string()));
                }
                self.prob.points[i].fixed = true;
            }
            _ => return Err(Error::Internal("witness kind mismatch".into())),
        }
        for n in self.fixed_neighbours(s) {
            let ok = match (s, n) {
                (Slot::Point(i), Slot::Line(j)) | (Slot::Line(j), Slot::Point(i)) => {
                    incident(&self.prob.points[i].coords, &self.prob.lines[j].coords)
                }
                _ => false,
            };
            if !ok {
                return Err(inconsistent(&self.prob, format!("{value} off {}", self.prob.name(n)), "incident".into()));
            }
        }
        let name = self.prob.name(s).to_string();
        self.trace.steps.push(EliminationStep { action: Action::Fix, slot: s, name, witnesses, value, wave });
        for n in self.neighbours(s) {
            self.consider(n);
        }
        if let (Slot::Line(j), true) = (s, self.admit) {
            for k in 0..self.prob.lines.len() {
                if k != j && self.prob.lines[k].fixed {
                    self.pending.push_back(Candidate::Admit(k.min(j), k.max(j)));
                }
            }
        }
        Ok(())
    }

    fn admit_meet(&mut self, a: usize, b: usize, wave: Option<usize>) -> Result<()> {
        let x = meet(&self.prob.lines[a].coords, &self.prob.lines[b].coords)?;
        if self.point_index.contains_key(&x) {
            return Ok(());
        }
        let i = self.prob.points.len();
        let name = coordinate_name(&x);
        self.prob.points.push(PointSlot { name: name.clone(), coords: x.clone(), fixed: true });
        self.point_lines.push(Vec::new());
        for j in 0..self.prob.lines.len() {
            if incident(&x, &self.prob.lines[j].coords) {
                self.prob.relations.insert((i, j));
                self.point_lines[i].push(j);
                self.line_points[j].push(i);
            }
        }
        self.point_index.insert(x.clone(), i);
        self.trace.steps.push(EliminationStep {
            action: Action::Admit,
            slot: Slot::Point(i),
            name,
            witnesses: [Slot::Line(a), Slot::Line(b)],
            value: Object::Point(x),
            wave,
        });
        for j in self.point_lines[i].clone() {
            self.consider(Slot::Line(j));
        }
        Ok(())
    }

    fn run(&mut self, schedule: Schedule) -> Result<()> {
        self.seed();
        match schedule {
            Schedule::Worklist => {
                while let Some(c) = self.pending.pop_front() {
                    self.fire(c, None)?;
                }
            }
            Schedule::Waves => {
                let mut wave = 0;
                while !self.pending.is_empty() {
                    wave += 1;
                    let round: Vec<Candidate> = self.pending.drain(..).collect();
                    for c in round {
                        self.fire(c, Some(wave))?;
                    }
                }
            }
            Schedule::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                while !self.pending.is_empty() {
                    let k = rng.gen_range(0..self.pending.len());
                    let c = self.pending.swap_remove_back(k).expect("index in range");
                    self.fire(c, None)?;
                }
            }
        }
        Ok(())
    }

    fn into_reduced(self) -> (IncidenceProblem, EliminationTrace) {
        let mut prob = self.prob;
        let (points, lines) = (&prob.points, &prob.lines);
        prob.relations.retain(|&(a, b)| !(points[a].fixed && lines[b].fixed));
        (prob, self.trace)
    }
}

/// Apply the rules to a fixpoint. The reduced problem keeps every slot and
/// drops the relations between two fixed slots.
pub fn eliminate(prob: &IncidenceProblem, opts: EliminationOptions) -> Result<(IncidenceProblem, EliminationTrace)> {
    let mut e = Eliminator::new(prob.clone(), opts.admit_intersections);
    e.run(opts.schedule)?;
    Ok(e.into_reduced())
}

impl EliminationTrace {
    /// Re-execute the steps on `prob`, checking each recorded value.
    pub fn replay(&self, prob: &IncidenceProblem) -> Result<IncidenceProblem> {
        let mut e = Eliminator::new(prob.clone(), false);
        for (k, step) in self.steps.iter().enumerate() {
            let bad = |why: &str| Error::InconsistentElimination {
                step: k,
                slot: step.name.clone(),
                computed: why.to_string(),
                realization: step.value.to_string(),
            };
            for w in step.witnesses {
                if !e.prob.is_fixed(w) {
                    return Err(bad("witness not fixed"));
                }
            }
            match step.action {
                Action::Fix => {
                    if e.prob.is_fixed(step.slot) {
                        return Err(bad("slot already fixed"));
                    }
                    e.fix(step.slot, None)?;
                    if e.trace.steps.last().map(|s| &s.value) != Some(&step.value) {
                        return Err(bad("different value"));
                    }
                }
                Action::Admit => {
                    let [Slot::Line(a), Slot::Line(b)] = step.witnesses else {
                        return Err(bad("admission needs two lines"));
                    };
                    let before = e.prob.points.len();
                    e.admit_meet(a, b, None)?;
                    if e.prob.points.len() != before + 1 || Object::Point(e.prob.points[before].coords.clone()) != step.value {
                        return Err(bad("admission did not create the recorded point"));
                    }
                }
            }
        }
        Ok(e.into_reduced().0)
    }

    /// Slot names fixed or admitted in each wave, in wave order.
    pub fn waves(&self) -> BTreeMap<usize, Vec<&EliminationStep>> {
        let mut out: BTreeMap<usize, Vec<&EliminationStep>> = BTreeMap::new();
        for s in &self.steps {
            if let Some(w) = s.wave {
                out.entry(w).or_default().push(s);
            }
        }
        out
    }
}

/// Residual slots identified with the triangle scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleMatch {
    pub p: ProjectivePoint,
    pub q: ProjectivePoint,
    pub r: ProjectivePoint,
    /// Point slots `X, Y, Z`.
    pub xyz: [usize; 3],
    /// Line slots `L_P, L_Q, L_R`.
    pub lines: [usize; 3],
}

/// Recognize the twelve-relation triangle pattern in a reduced problem.
pub fn match_triangle(reduced: &IncidenceProblem) -> Option<TriangleMatch> {
    let vp: Vec<usize> = reduced.variable_points().collect();
    let vl: Vec<usize> = reduced.variable_lines().collect();
    if vp.len() != 3 || vl.len() != 3 || reduced.relations.len() != 12 {
        return None;
    }
    let coord_line = |j: usize| -> Option<usize> {
        let c = reduced.lines[j].coords.coords();
        let nz: Vec<usize> = (0..3).filter(|&k| c[k] != BigInt::from(0)).collect();
        (nz.len() == 1).then(|| nz[0])
    };
    let mut xyz = [usize::MAX; 3];
    for &i in &vp {
        let fixed: Vec<usize> =
            reduced.relations.iter().filter(|&&(a, b)| a == i && reduced.lines[b].fixed).map(|&(_, b)| b).collect();
        let [j] = fixed[..] else { return None };
        let k = coord_line(j)?;
        if xyz[k] != usize::MAX {
            return None;
        }
        xyz[k] = i;
    }
    let on = |i: usize, j: usize| reduced.relations.contains(&(i, j));
    let mut lines = [usize::MAX; 3];
    let mut centers: [Option<ProjectivePoint>; 3] = [None, None, None];
    // L_P through X, Y; L_Q through X, Z; L_R through Y, Z
    let pairs = [(0, 1), (0, 2), (1, 2)];
    for &j in &vl {
        let through: Vec<usize> = (0..3).filter(|&k| on(xyz[k], j)).collect();
        let [a, b] = through[..] else { return None };
        let k = pairs.iter().position(|&pr| pr == (a, b))?;
        let fixed: Vec<usize> =
            reduced.relations.iter().filter(|&&(i, b)| b == j && reduced.points[i].fixed).map(|&(i, _)| i).collect();
        let [c] = fixed[..] else { return None };
        if lines[k] != usize::MAX {
            return None;
        }
        lines[k] = j;
        centers[k] = Some(reduced.points[c].coords.clone());
    }
    let [Some(p), Some(q), Some(r)] = centers else { return None };
    Some(TriangleMatch { p, q, r, xyz, lines })
}

/// Evidence that the incidence scheme of an arrangement is a double point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublePointCertificate {
    pub trace: EliminationTrace,
    pub reduced: IncidenceProblem,
    pub pattern: TriangleMatch,
    pub classification: TriangleClassification,
    pub extra_points: usize,
}

/// Eliminate, recognize the triangle pattern and classify it.
pub fn certify_double_point(
    a: &Arrangement,
    extra_points: &[ProjectivePoint],
    opts: EliminationOptions,
) -> Result<DoublePointCertificate> {
    let prob = IncidenceProblem::from_arrangement(a, extra_points)?;
    let (reduced, trace) = eliminate(&prob, opts)?;
    let unlisted = reduced.unlisted_incidences();
    if !unlisted.is_empty() {
        return Err(Error::Internal(format!("unlisted incidences in the residue: {unlisted:?}")));
    }
    let pattern = match_triangle(&reduced)
        .ok_or(Error::NoTrianglePattern { variables: reduced.variable_count(), relations: reduced.relations.len() })?;
    let classification = classify(&pattern.p, &pattern.q, &pattern.r);
    if classification.kind != TriangleKind::DoublePoint {
        return Err(Error::NotDoublePoint(classification.kind.as_str().into()));
    }
    Ok(DoublePointCertificate { trace, reduced, pattern, classification, extra_points: extra_points.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_heart, closure, table_lines, HeartLayout};
    use crate::data;
    use crate::geom::{ln, pt};
    use proptest::prelude::*;

    fn heart() -> HeartLayout {
        HeartLayout::from_table(table_lines()).unwrap()
    }

    fn heart_problem() -> IncidenceProblem {
        let h = heart();
        IncidenceProblem::from_arrangement(&h.arrangement, &h.plus_points()).unwrap()
    }

    fn expected_pqr() -> [ProjectivePoint; 3] {
        data::TRIANGLE.map(pt)
    }

    #[test]
    fn heart_problem_shape() {
        let prob = heart_problem();
        assert_eq!(prob.lines().len(), 34);
        assert!(prob.lines().iter().all(|l| !l.fixed));
        assert_eq!(prob.points().iter().filter(|x| x.fixed).count(), 4);
        assert!(prob.unlisted_incidences().is_empty());
    }

    #[test]
    fn heart_reduces_to_triangle() {
        let (reduced, trace) = eliminate(&heart_problem(), EliminationOptions::default()).unwrap();
        let (vars, rels) = reduced.residue_signature();
        assert_eq!(vars.len(), 6, "{vars:?}");
        assert_eq!(rels.len(), 12);
        let m = match_triangle(&reduced).unwrap();
        assert_eq!([m.p.clone(), m.q.clone(), m.r.clone()], expected_pqr());
        let h = heart();
        let names: Vec<&str> = m.lines.iter().map(|&j| reduced.lines()[j].name.as_str()).collect();
        let expected: Vec<String> = h.triangle.iter().map(|i| format!("L{}", i + 1)).collect();
        assert_eq!(names, expected);
        assert_eq!(trace.replay(&heart_problem()).unwrap(), reduced);
    }

    #[test]
    fn admitted_route_agrees() {
        let h = heart();
        let bare = IncidenceProblem::from_arrangement(&h.arrangement, &[]).unwrap();
        let opts = EliminationOptions { schedule: Schedule::Worklist, admit_intersections: true };
        let (reduced, trace) = eliminate(&bare, opts).unwrap();
        let (explicit, _) = eliminate(&heart_problem(), EliminationOptions::default()).unwrap();
        assert_eq!(reduced.residue_signature(), explicit.residue_signature());
        assert!(trace.steps.iter().any(|s| s.action == Action::Admit));
        assert_eq!(trace.replay(&bare).unwrap(), reduced);
        let admitted: BTreeSet<_> = reduced.points().iter().map(|x| x.coords.clone()).collect();
        assert!(h.plus_points().iter().all(|x| admitted.contains(x)));
    }

    #[test]
    fn waves_follow_the_closure() {
        let (_, trace) = eliminate(&heart_problem(), EliminationOptions { schedule: Schedule::Waves, admit_intersections: false }).unwrap();
        let steps = closure(&base_points(), 3).unwrap();
        let waves = trace.waves();
        let h = heart();
        let aux: BTreeSet<ProjectiveLine> = h.aux.iter().map(|&i| h.arrangement.lines()[i].clone()).collect();
        let mut lines_so_far = BTreeSet::new();
        let mut points_so_far: BTreeSet<ProjectivePoint> = base_points().into_iter().collect();
        for (k, step) in steps.iter().enumerate() {
            for s in &waves[&(2 * k + 1)] {
                let Object::Line(l) = &s.value else { panic!("lines in odd waves") };
                lines_so_far.insert(l.clone());
            }
            assert_eq!(lines_so_far, step.lines.iter().cloned().collect(), "wave {}", 2 * k + 1);
            for s in &waves[&(2 * k + 2)] {
                let Object::Point(x) = &s.value else { panic!("points in even waves") };
                points_so_far.insert(x.clone());
            }
            assert_eq!(points_so_far, step.points.iter().cloned().collect(), "wave {}", 2 * k + 2);
        }
        let seventh: BTreeSet<ProjectiveLine> = waves[&7]
            .iter()
            .map(|s| match &s.value {
                Object::Line(l) => l.clone(),
                Object::Point(_) => panic!("lines in odd waves"),
            })
            .collect();
        assert_eq!(seventh, aux);
        assert!(waves.keys().all(|&w| w <= 8));
    }

    #[test]
    fn random_orders_are_confluent() {
        let prob = heart_problem();
        let (base, _) = eliminate(&prob, EliminationOptions::default()).unwrap();
        for seed in 0..20 {
            let opts = EliminationOptions { schedule: Schedule::Random(seed), admit_intersections: seed % 2 == 1 };
            let (r, t) = eliminate(&prob, opts).unwrap();
            assert_eq!(r.residue_signature(), base.residue_signature(), "seed {seed}");
            assert_eq!(t.replay(&prob).unwrap(), r);
        }
    }

    #[test]
    fn single_line_eliminates() {
        let points = vec![
            PointSlot { name: "q1".into(), coords: pt([1, 0, 0]), fixed: true },
            PointSlot { name: "q2".into(), coords: pt([0, 1, 0]), fixed: true },
        ];
        let lines = vec![LineSlot { name: "L".into(), coords: ln([0, 0, 1]), fixed: false }];
        let prob = IncidenceProblem::new(points, lines, [(0, 0), (1, 0)].into_iter().collect()).unwrap();
        let (r, t) = eliminate(&prob, EliminationOptions::default()).unwrap();
        assert_eq!(r.variable_count(), 0);
        assert!(r.relations().is_empty());
        assert_eq!(t.steps.len(), 1);
        assert!(match_triangle(&r).is_none());
    }

    #[test]
    fn inconsistent_realization_is_reported() {
        // the realization claims the line is x2 = 0 but the points force x1 = 0
        let points = vec![
            PointSlot { name: "q1".into(), coords: pt([1, 0, 0]), fixed: true },
            PointSlot { name: "q3".into(), coords: pt([0, 0, 1]), fixed: true },
        ];
        let lines = vec![LineSlot { name: "L".into(), coords: ln([0, 1, 0]), fixed: false }];
        let mut prob = IncidenceProblem::new(points, lines, [(0, 0), (1, 0)].into_iter().collect()).unwrap();
        prob.lines[0].coords = ln([0, 0, 1]);
        let err = eliminate(&prob, EliminationOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InconsistentElimination { step: 0, .. }), "{err}");
    }

    #[test]
    fn rejects_unsatisfied_relations_and_missing_base_points() {
        let points = vec![PointSlot { name: "x".into(), coords: pt([1, 1, 1]), fixed: true }];
        let lines = vec![LineSlot { name: "L".into(), coords: ln([0, 0, 1]), fixed: false }];
        assert!(IncidenceProblem::new(points, lines, [(0, 0)].into_iter().collect()).is_err());
        let tri = Arrangement::new(vec![ln([1, 0, 0]), ln([0, 1, 0]), ln([0, 0, 1])]).unwrap();
        assert!(IncidenceProblem::from_arrangement(&tri, &[]).is_err());
    }

    #[test]
    fn extra_relation_breaks_the_pattern() {
        let (mut reduced, _) = eliminate(&heart_problem(), EliminationOptions::default()).unwrap();
        let m = match_triangle(&reduced).unwrap();
        let q1 = 0;
        reduced.relations.insert((q1, m.lines[0]));
        assert!(match_triangle(&reduced).is_none());
    }

    #[test]
    fn heart_certificate() {
        let h = build_heart().unwrap();
        let cert = certify_double_point(&h.arrangement, &h.plus_points(), EliminationOptions::default()).unwrap();
        assert_eq!(cert.classification.kind, TriangleKind::DoublePoint);
        assert_eq!(cert.classification.discriminant, BigInt::from(0));
        assert_eq!(cert.reduced.relations().len(), 12);
    }

    #[test]
    fn generic_line_through_p_has_no_certificate() {
        let h = heart();
        let mut lines = h.arrangement.lines().to_vec();
        let p = &h.centers[0];
        let lp = h.triangle[0];
        let g = (1..)
            .map(|c| join(p, &pt([c, 1, 0])).unwrap())
            .find(|g| !lines.contains(g))
            .unwrap();
        lines[lp] = g;
        let a = Arrangement::new(lines).unwrap();
        let err = certify_double_point(&a, &h.plus_points(), EliminationOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoTrianglePattern { .. }), "{err}");
    }

    #[test]
    fn closure_lines_alone_eliminate_completely() {
        let l3 = closure(&base_points(), 3).unwrap().pop().unwrap().lines;
        let a = Arrangement::new(l3).unwrap();
        let prob = IncidenceProblem::from_arrangement(&a, &[]).unwrap();
        let (r, _) = eliminate(&prob, EliminationOptions::default()).unwrap();
        assert_eq!(r.variable_count(), 0);
        let err = certify_double_point(&a, &[], EliminationOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoTrianglePattern { variables: 0, relations: 0 }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn confluent_on_subarrangements(drop in proptest::collection::btree_set(6usize..25, 0..8), s1: u64, s2: u64) {
            let l3 = closure(&base_points(), 3).unwrap().pop().unwrap().lines;
            let l1: BTreeSet<_> = closure(&base_points(), 1).unwrap()[0].lines.iter().cloned().collect();
            let rest = l3.iter().filter(|l| !l1.contains(*l));
            let kept: Vec<_> = l1
                .iter()
                .cloned()
                .chain(rest.enumerate().filter(|(k, _)| !drop.contains(&(k + 6))).map(|(_, l)| l.clone()))
                .collect();
            let a = Arrangement::new(kept).unwrap();
            let prob = IncidenceProblem::from_arrangement(&a, &[]).unwrap();
            let opts = |seed| EliminationOptions { schedule: Schedule::Random(seed), admit_intersections: true };
            let (r1, t1) = eliminate(&prob, opts(s1)).unwrap();
            let (r2, _) = eliminate(&prob, opts(s2)).unwrap();
            prop_assert_eq!(r1.residue_signature(), r2.residue_signature());
            prop_assert_eq!(t1.replay(&prob).unwrap(), r1);
        }
    }
}
