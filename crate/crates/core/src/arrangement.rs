//! Line arrangements: incidence tables, the iterative closure and the heart
//! arrangement with its side conditions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::data;
use crate::error::{Error, Result};
use crate::geom::{incident, join, meet, ln, pt, ProjectiveLine, ProjectivePoint};
use crate::triangle;

/// An ordered list of pairwise distinct lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    lines: Vec<ProjectiveLine>,
}

impl Arrangement {
    pub fn new(lines: Vec<ProjectiveLine>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, l) in lines.iter().enumerate() {
            if !seen.insert(l) {
                return Err(Error::InvalidInput(format!("line {} {} is repeated", i + 1, l)));
            }
        }
        Ok(Arrangement { lines })
    }

    pub fn lines(&self) -> &[ProjectiveLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Every intersection point with the sorted indices of the lines through it.
    pub fn intersection_classes(&self) -> BTreeMap<ProjectivePoint, Vec<usize>> {
        intersection_classes(&self.lines)
    }

    pub fn incidence_table(&self) -> IncidenceTable {
        IncidenceTable::of_lines(&self.lines)
    }
}

fn intersection_classes(lines: &[ProjectiveLine]) -> BTreeMap<ProjectivePoint, Vec<usize>> {
    let mut classes: BTreeMap<ProjectivePoint, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let x = meet(&lines[i], &lines[j]).expect("distinct lines");
            let set = classes.entry(x).or_default();
            set.insert(i);
            set.insert(j);
        }
    }
    classes.into_iter().map(|(x, s)| (x, s.into_iter().collect())).collect()
}

/// Singular points (on at least three lines) of an arrangement, in
/// lexicographic order of canonical coordinates, with their incidences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceTable {
    lines: Vec<ProjectiveLine>,
    points: Vec<ProjectivePoint>,
    lines_through: Vec<Vec<usize>>,
    points_on: Vec<Vec<usize>>,
    double_points: Vec<(ProjectivePoint, usize, usize)>,
}

impl IncidenceTable {
    pub fn of_lines(lines: &[ProjectiveLine]) -> Self {
        let mut points = Vec::new();
        let mut lines_through = Vec::new();
        let mut double_points = Vec::new();
        for (x, through) in intersection_classes(lines) {
            if through.len() >= 3 {
                points.push(x);
                lines_through.push(through);
            } else {
                double_points.push((x, through[0], through[1]));
            }
        }
        let mut points_on = alloc::vec![Vec::new(); lines.len()];
        for (nu, through) in lines_through.iter().enumerate() {
            for &i in through {
                points_on[i].push(nu);
            }
        }
        IncidenceTable { lines: lines.to_vec(), points, lines_through, points_on, double_points }
    }

    pub fn lines(&self) -> &[ProjectiveLine] {
        &self.lines
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// `μ_ν`, the number of lines through the singular point `ν`.
    pub fn mu(&self, nu: usize) -> usize {
        self.lines_through[nu].len()
    }

    pub fn lines_through(&self, nu: usize) -> &[usize] {
        &self.lines_through[nu]
    }

    pub fn points_on(&self, i: usize) -> &[usize] {
        &self.points_on[i]
    }

    pub fn contains(&self, i: usize, nu: usize) -> bool {
        self.lines_through[nu].binary_search(&i).is_ok()
    }

    pub fn index_of(&self, x: &ProjectivePoint) -> Option<usize> {
        self.points.binary_search(x).ok()
    }

    /// Intersection points on exactly two lines, with those two line indices.
    pub fn double_points(&self) -> &[(ProjectivePoint, usize, usize)] {
        &self.double_points
    }

    /// Histogram `μ ↦ number of singular points with that multiplicity`.
    pub fn mu_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for nu in 0..self.num_points() {
            *h.entry(self.mu(nu)).or_insert(0) += 1;
        }
        h
    }
}

/// One round of the closure: `L_i` and `P_i`, both sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureStep {
    pub lines: Vec<ProjectiveLine>,
    pub points: Vec<ProjectivePoint>,
}

/// Alternately take all lines through two known points and all points on two
/// known lines, starting from `p0`.
pub fn closure(p0: &[ProjectivePoint], iters: usize) -> Result<Vec<ClosureStep>> {
    let start: BTreeSet<ProjectivePoint> = p0.iter().cloned().collect();
    if start.len() != p0.len() {
        return Err(Error::InvalidInput("closure seed points must be distinct".to_string()));
    }
    if start.len() < 2 {
        return Err(Error::InvalidInput("closure needs at least two seed points".to_string()));
    }
    let mut points: Vec<ProjectivePoint> = start.into_iter().collect();
    let mut steps = Vec::with_capacity(iters);
    for _ in 0..iters {
        let mut lines = BTreeSet::new();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                lines.insert(join(&points[i], &points[j])?);
            }
        }
        let lines: Vec<ProjectiveLine> = lines.into_iter().collect();
        let mut next = BTreeSet::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                next.insert(meet(&lines[i], &lines[j])?);
            }
        }
        points = next.into_iter().collect();
        steps.push(ClosureStep { lines, points: points.clone() });
    }
    Ok(steps)
}

pub fn base_points() -> Vec<ProjectivePoint> {
    data::BASE_POINTS.iter().map(|&v| pt(v)).collect()
}

/// The bundled table lines, in table order.
pub fn table_lines() -> Vec<ProjectiveLine> {
    data::TABLE.iter().map(|(l, _)| ln(*l)).collect()
}

/// Incidence table of the bundled heart arrangement.
pub fn heart_table() -> IncidenceTable {
    IncidenceTable::of_lines(&table_lines())
}

/// An arrangement with designated auxiliary and triangle lines.
///
/// `aux[2k]` and `aux[2k+1]` are expected to meet at `centers[k]`, and
/// `triangle[k]` is the triangle line through `centers[k]`.
#[derive(Clone, Debug)]
pub struct HeartLayout {
    pub arrangement: Arrangement,
    pub closure_lines: Vec<usize>,
    pub aux: [usize; 6],
    pub triangle: [usize; 3],
    pub centers: [ProjectivePoint; 3],
}

impl HeartLayout {
    /// The bundled table read with its fixed row layout.
    pub fn from_table(lines: Vec<ProjectiveLine>) -> Result<Self> {
        if lines.len() != data::TABLE.len() {
            return Err(Error::InvalidInput(format!("expected {} lines, got {}", data::TABLE.len(), lines.len())));
        }
        Ok(HeartLayout {
            arrangement: Arrangement::new(lines)?,
            closure_lines: (0..data::CLOSURE_ROWS).collect(),
            aux: core::array::from_fn(|k| data::CLOSURE_ROWS + k),
            triangle: core::array::from_fn(|k| data::TRIANGLE_ROW + k),
            centers: data::TRIANGLE.map(pt),
        })
    }

    /// Lines of `L+`, i.e. everything except the triangle lines.
    pub fn plus_lines(&self) -> Vec<ProjectiveLine> {
        let lines = self.arrangement.lines();
        self.closure_lines.iter().chain(self.aux.iter()).map(|&i| lines[i].clone()).collect()
    }

    /// `P+`: all intersection points of `L+`.
    pub fn plus_points(&self) -> Vec<ProjectivePoint> {
        intersection_classes(&self.plus_lines()).into_keys().collect()
    }
}

/// Recompute the heart arrangement from the frame, the auxiliary lines and
/// the triangle triple, and check it against the bundled table.
pub fn build_heart() -> Result<HeartLayout> {
    let steps = closure(&base_points(), 3)?;
    let l3 = &steps[2].lines;
    let aux: Vec<ProjectiveLine> = data::AUX_LINES.iter().map(|&v| ln(v)).collect();
    let [p, q, r] = data::TRIANGLE.map(pt);
    let solutions = triangle::solve_realization(&p, &q, &r)?;
    if solutions.len() != 1 {
        return Err(Error::Internal(format!("triangle triple has {} rational solutions, expected 1", solutions.len())));
    }
    let s = &solutions[0];
    let tri = [s.lp.clone(), s.lq.clone(), s.lr.clone()];

    let table = table_lines();
    let closure_rows: BTreeSet<_> = table[..data::CLOSURE_ROWS].iter().cloned().collect();
    let recomputed: BTreeSet<_> = l3.iter().cloned().collect();
    let mut missing = Vec::new();
    let mut unexpected = Vec::new();
    for l in recomputed.difference(&closure_rows) {
        missing.push(format!("closure line {l}"));
    }
    for l in closure_rows.difference(&recomputed) {
        unexpected.push(format!("row line {l} not in closure"));
    }
    let tail = &table[data::CLOSURE_ROWS..];
    for (k, l) in aux.iter().chain(tri.iter()).enumerate() {
        if &tail[k] != l {
            missing.push(format!("row {}: expected {l}", data::CLOSURE_ROWS + k + 1));
            unexpected.push(format!("row {}: found {}", data::CLOSURE_ROWS + k + 1, tail[k]));
        }
    }
    if !missing.is_empty() || !unexpected.is_empty() {
        return Err(Error::HeartMismatch { missing, unexpected });
    }
    HeartLayout::from_table(table)
}

/// Outcome of one side condition, with the objects that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck<W> {
    pub pass: bool,
    pub witnesses: Vec<W>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RabcReport {
    /// Per auxiliary line: the closure points on it (needs at least two).
    pub aux_through_closure: ConditionCheck<(usize, Vec<ProjectivePoint>)>,
    /// Per centre: the meet of its auxiliary pair.
    pub pairs_meet_at_centers: ConditionCheck<(usize, Option<ProjectivePoint>)>,
    /// Points of `P+` found on a triangle line other than its centre.
    pub triangle_lines_clean: ConditionCheck<(usize, ProjectivePoint)>,
}

impl RabcReport {
    pub fn pass(&self) -> bool {
        self.aux_through_closure.pass && self.pairs_meet_at_centers.pass && self.triangle_lines_clean.pass
    }
}

/// The three side conditions that make the elimination go through.
pub fn check_rabc(layout: &HeartLayout) -> Result<RabcReport> {
    let p3 = closure(&base_points(), 3)?.pop().expect("three steps").points;
    let lines = layout.arrangement.lines();

    let mut w1 = Vec::new();
    let mut pass1 = true;
    for &i in &layout.aux {
        let on: Vec<_> = p3.iter().filter(|x| incident(x, &lines[i])).cloned().collect();
        pass1 &= on.len() >= 2;
        w1.push((i, on));
    }

    let mut w2 = Vec::new();
    let mut pass2 = true;
    for k in 0..3 {
        let (a, b) = (&lines[layout.aux[2 * k]], &lines[layout.aux[2 * k + 1]]);
        let x = meet(a, b).ok();
        pass2 &= x.as_ref() == Some(&layout.centers[k]);
        w2.push((k, x));
    }

    let plus = layout.plus_points();
    let mut w3 = Vec::new();
    for (k, &i) in layout.triangle.iter().enumerate() {
        for x in &plus {
            if incident(x, &lines[i]) && x != &layout.centers[k] {
                w3.push((i, x.clone()));
            }
        }
    }
    Ok(RabcReport {
        aux_through_closure: ConditionCheck { pass: pass1, witnesses: w1 },
        pairs_meet_at_centers: ConditionCheck { pass: pass2, witnesses: w2 },
        triangle_lines_clean: ConditionCheck { pass: w3.is_empty(), witnesses: w3 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn closure_counts() {
        let steps = closure(&base_points(), 3).unwrap();
        let counts: Vec<_> = steps.iter().map(|s| (s.lines.len(), s.points.len())).collect();
        assert_eq!(counts, [(6, 7), (9, 13), (25, 97)]);
        let five = BigInt::from(5);
        assert!(steps[2].points.iter().all(|x| x.height() <= five));
        let bound = BigInt::from(25);
        assert!(steps[2].lines.iter().all(|l| l.height() <= bound));
    }

    #[test]
    fn closure_is_monotone() {
        let steps = closure(&base_points(), 3).unwrap();
        for w in steps.windows(2) {
            assert!(w[0].lines.iter().all(|l| w[1].lines.binary_search(l).is_ok()));
            assert!(w[0].points.iter().all(|x| w[1].points.binary_search(x).is_ok()));
        }
    }

    #[test]
    fn closure_of_two_points() {
        let steps = closure(&[pt([1, 0, 0]), pt([0, 1, 0])], 1).unwrap();
        assert_eq!(steps[0].lines, [ln([0, 0, 1])]);
        assert!(steps[0].points.is_empty());
        assert!(closure(&[pt([1, 0, 0])], 1).is_err());
        assert!(closure(&[pt([1, 0, 0]), pt([2, 0, 0])], 1).is_err());
    }

    #[test]
    fn heart_incidences() {
        let t = heart_table();
        assert_eq!(t.num_lines(), 34);
        assert_eq!(t.num_points(), 51);
        assert_eq!(t.mu(t.index_of(&pt([1, 0, 0])).unwrap()), 6);
        let hist: Vec<_> = t.mu_histogram().into_iter().collect();
        assert_eq!(hist, [(3, 31), (4, 9), (5, 1), (6, 9), (7, 1)]);
        for nu in 0..t.num_points() {
            assert!(t.mu(nu) >= 3);
            for &i in t.lines_through(nu) {
                assert!(incident(&t.points()[nu], &t.lines()[i]));
                assert!(t.points_on(i).contains(&nu));
            }
        }
    }

    #[test]
    fn generic_lines_have_no_singular_points() {
        let t = IncidenceTable::of_lines(&[ln([1, 0, 0]), ln([0, 1, 0]), ln([1, 1, 1])]);
        assert_eq!(t.num_points(), 0);
        assert_eq!(t.double_points().len(), 3);
    }

    #[test]
    fn build_heart_matches_table() {
        let h = build_heart().unwrap();
        assert_eq!(h.arrangement.len(), 34);
        let lines = h.arrangement.lines();
        assert_eq!(lines[31], ln([8, 9, -22]));
        assert_eq!(lines[32], ln([20, -9, 22]));
        assert_eq!(lines[33], ln([20, -9, -55]));
        for (k, c) in h.centers.iter().enumerate() {
            assert!(incident(c, &lines[h.triangle[k]]));
        }
    }

    #[test]
    fn rabc_on_heart() {
        let h = build_heart().unwrap();
        let r = check_rabc(&h).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn rabc_detects_dirty_triangle_line() {
        let mut h = build_heart().unwrap();
        let p = h.centers[0].clone();
        // a line through P and a closure point
        let bad = join(&p, &pt([1, 1, 1])).unwrap();
        let mut lines = h.arrangement.lines().to_vec();
        lines[h.triangle[0]] = bad.clone();
        h.arrangement = Arrangement::new(lines).unwrap();
        let r = check_rabc(&h).unwrap();
        assert!(!r.triangle_lines_clean.pass);
        assert!(r.triangle_lines_clean.witnesses.contains(&(h.triangle[0], pt([1, 1, 1]))));
    }

    #[test]
    fn rabc_detects_aux_lines_off_closure() {
        let mut h = build_heart().unwrap();
        let mut lines = h.arrangement.lines().to_vec();
        for k in 0..3 {
            let c = &h.centers[k];
            lines[h.aux[2 * k]] = join(c, &pt([97, 89, 83 + k as i64])).unwrap();
            lines[h.aux[2 * k + 1]] = join(c, &pt([71, -67, 61 + k as i64])).unwrap();
        }
        h.arrangement = Arrangement::new(lines).unwrap();
        let r = check_rabc(&h).unwrap();
        assert!(r.pairs_meet_at_centers.pass);
        assert!(!r.aux_through_closure.pass);
    }

    fn lines_strategy() -> impl Strategy<Value = Vec<ProjectiveLine>> {
        proptest::collection::btree_set(
            [-3i64..4, -3i64..4, -3i64..4].prop_filter("nonzero", |v| v.iter().any(|x| *x != 0)).prop_map(ln),
            2..12,
        )
        .prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn pair_count_bookkeeping(lines in lines_strategy()) {
            let a = Arrangement::new(lines).unwrap();
            let classes = a.intersection_classes();
            let n = a.len();
            let pairs: usize = classes.values().map(|c| c.len() * (c.len() - 1) / 2).sum();
            prop_assert_eq!(pairs, n * (n - 1) / 2);
            let t = a.incidence_table();
            let singular: usize = (0..t.num_points()).map(|nu| t.mu(nu)).sum();
            let incidences: usize = classes.values().map(|c| c.len()).sum();
            prop_assert_eq!(singular + 2 * t.double_points().len(), incidences);
        }
    }
}
