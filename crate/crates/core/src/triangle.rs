//! Triangle schemes: three centres `P, Q, R` and the coordinate lines
//! `L_X: x0 = 0`, `L_Y: x1 = 0`, `L_Z: x2 = 0`.
//!
//! A solution is `X ∈ L_X`, `Y ∈ L_Y`, `Z ∈ L_Z` with `P ∈ XY`, `Q ∈ XZ`,
//! `R ∈ YZ`. Projecting `L_Y → L_Z` from `R`, `L_Z → L_X` from `Q` and
//! `L_X → L_Y` from `P` gives a projectivity of `L_Y` whose fixed points are
//! exactly the `Y` coordinates of the solutions.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{incident, join, ln, ProjectiveLine, ProjectivePoint};

/// A 2×2 integer matrix, `m[row][col]`.
pub type Mat2 = [[BigInt; 2]; 2];

fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    core::array::from_fn(|i| core::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j]))
}

fn apply(m: &Mat2, v: &[BigInt; 2]) -> [BigInt; 2] {
    [&m[0][0] * &v[0] + &m[0][1] * &v[1], &m[1][0] * &v[0] + &m[1][1] * &v[1]]
}

fn transpose(m: &Mat2) -> Mat2 {
    [[m[0][0].clone(), m[1][0].clone()], [m[0][1].clone(), m[1][1].clone()]]
}

/// Whether `a = c·b` for some nonzero rational `c`.
pub fn projectively_equal(a: &Mat2, b: &Mat2) -> bool {
    let fa: Vec<&BigInt> = a.iter().flatten().collect();
    let fb: Vec<&BigInt> = b.iter().flatten().collect();
    if fa.iter().all(|x| x.is_zero()) || fb.iter().all(|x| x.is_zero()) {
        return false;
    }
    (0..4).all(|i| (0..4).all(|j| fa[i] * fb[j] == fa[j] * fb[i]))
}

fn coords(x: &ProjectivePoint) -> [BigInt; 3] {
    x.coords().clone()
}

/// The three projections in column convention, acting on
/// `(a, b) ↔ (a:0:b)`, `(a:b:0)`, `(0:a:b)` respectively.
fn projections(p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> Result<[Mat2; 3]> {
    let [p0, p1, p2] = coords(p);
    let [q0, q1, q2] = coords(q);
    let [r0, r1, r2] = coords(r);
    let z = BigInt::zero;
    let degenerate = |c: &ProjectivePoint, l: &str| Err(Error::DegenerateProjection { center: format!("{c}"), line: l.into() });
    if r1.is_zero() {
        return degenerate(r, "L_Y");
    }
    if r2.is_zero() {
        return degenerate(r, "L_Z");
    }
    if q2.is_zero() {
        return degenerate(q, "L_Z");
    }
    if q0.is_zero() {
        return degenerate(q, "L_X");
    }
    if p0.is_zero() {
        return degenerate(p, "L_X");
    }
    if p1.is_zero() {
        return degenerate(p, "L_Y");
    }
    // Y = (a:0:b) ↦ R2·Y − b·R, which lies on x2 = 0.
    let y_to_z = [[r2.clone(), -&r0], [z(), -&r1]];
    // Z = (a:b:0) ↦ Q0·Z − a·Q, which lies on x0 = 0.
    let z_to_x = [[-&q1, q0.clone()], [-&q2, z()]];
    // X = (0:s:t) ↦ P1·X − s·P, which lies on x1 = 0.
    let x_to_y = [[-&p0, z()], [-&p2, p1.clone()]];
    Ok([y_to_z, z_to_x, x_to_y])
}

/// The composite projectivity of `L_Y`, in row-vector convention: the point
/// `(a:0:b)` maps to `(a, b)·M`.
pub fn composite_projectivity(p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> Result<Mat2> {
    Ok(transpose(&column_composite(p, q, r)?))
}

fn column_composite(p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> Result<Mat2> {
    let [m1, m2, m3] = projections(p, q, r)?;
    Ok(mul2(&m3, &mul2(&m2, &m1)))
}

/// `(P0Q1R2 + P1Q2R0 + P2Q0R1 − P2Q1R0)² − 4·P0P1Q0Q2R1R2`.
pub fn discriminant(p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> BigInt {
    let [p0, p1, p2] = coords(p);
    let [q0, q1, q2] = coords(q);
    let [r0, r1, r2] = coords(r);
    let t = &p0 * &q1 * &r2 + &p1 * &q2 * &r0 + &p2 * &q0 * &r1 - &p2 * &q1 * &r0;
    &t * &t - BigInt::from(4) * p0 * p1 * q0 * q2 * r1 * r2
}

/// `tr² − 4·det` of a 2×2 matrix.
pub fn char_discriminant(m: &Mat2) -> BigInt {
    let tr = &m[0][0] + &m[1][1];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    &tr * &tr - BigInt::from(4) * det
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriangleKind {
    TwoReducedPoints,
    DoublePoint,
    Degenerate,
}

impl TriangleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TriangleKind::TwoReducedPoints => "TwoReducedPoints",
            TriangleKind::DoublePoint => "DoublePoint",
            TriangleKind::Degenerate => "Degenerate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleClassification {
    pub kind: TriangleKind,
    /// Rational fixed points on `L_Y`, sorted.
    pub fixed_points: Vec<ProjectivePoint>,
    /// Two distinct fixed points that are conjugate and not rational.
    pub irrational_pair: bool,
    pub discriminant: BigInt,
    pub reason: Option<String>,
}

fn y_point(v: &[BigInt; 2]) -> Result<ProjectivePoint> {
    ProjectivePoint::new([v[0].clone(), BigInt::zero(), v[1].clone()])
}

/// Eigenvector of the column matrix `c` for the eigenvalue `(tr + s)/2`.
fn eigenvector(c: &Mat2, s: &BigInt) -> [BigInt; 2] {
    let two = BigInt::from(2);
    let tr = &c[0][0] + &c[1][1];
    let twice_lambda = &tr + s;
    if !c[0][1].is_zero() {
        [&two * &c[0][1], &twice_lambda - &two * &c[0][0]]
    } else if !c[1][0].is_zero() {
        [&twice_lambda - &two * &c[1][1], &two * &c[1][0]]
    } else if &two * &c[0][0] == twice_lambda {
        [BigInt::one(), BigInt::zero()]
    } else {
        [BigInt::zero(), BigInt::one()]
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Classify by the eigenstructure of the composite projectivity.
pub fn classify(p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> TriangleClassification {
    let delta = discriminant(p, q, r);
    let degenerate = |reason: String, delta: BigInt| TriangleClassification {
        kind: TriangleKind::Degenerate,
        fixed_points: vec![],
        irrational_pair: false,
        discriminant: delta,
        reason: Some(reason),
    };
    let c = match column_composite(p, q, r) {
        Ok(c) => c,
        Err(e) => return degenerate(format!("{e}"), delta),
    };
    if c[0][1].is_zero() && c[1][0].is_zero() && c[0][0] == c[1][1] {
        return degenerate("composite projectivity is scalar".into(), delta);
    }
    let d = char_discriminant(&c);
    debug_assert_eq!(d, delta);
    if d.is_zero() {
        let v = eigenvector(&c, &BigInt::zero());
        return TriangleClassification {
            kind: TriangleKind::DoublePoint,
            fixed_points: vec![y_point(&v).expect("eigenvector is nonzero")],
            irrational_pair: false,
            discriminant: delta,
            reason: None,
        };
    }
    let (fixed_points, irrational_pair) = match exact_sqrt(&d) {
        Some(s) => {
            let mut f = vec![
                y_point(&eigenvector(&c, &s)).expect("eigenvector is nonzero"),
                y_point(&eigenvector(&c, &-&s)).expect("eigenvector is nonzero"),
            ];
            f.sort();
            (f, false)
        }
        None => (vec![], true),
    };
    TriangleClassification { kind: TriangleKind::TwoReducedPoints, fixed_points, irrational_pair, discriminant: delta, reason: None }
}

/// One rational point of a triangle scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleSolution {
    pub x: ProjectivePoint,
    pub y: ProjectivePoint,
    pub z: ProjectivePoint,
    pub lp: ProjectiveLine,
    pub lq: ProjectiveLine,
    pub lr: ProjectiveLine,
}

/// The coordinate lines `L_X, L_Y, L_Z`.
pub fn coordinate_lines() -> [ProjectiveLine; 3] {
    [ln([1, 0, 0]), ln([0, 1, 0]), ln([0, 0, 1])]
}

impl TriangleSolution {
    /// The twelve defining incidences, each as `(point, line, holds)`.
    pub fn incidences(&self, p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> [(&'static str, bool); 12] {
        let [lx, ly, lz] = coordinate_lines();
        [
            ("X on L_X", incident(&self.x, &lx)),
            ("Y on L_Y", incident(&self.y, &ly)),
            ("Z on L_Z", incident(&self.z, &lz)),
            ("P on L_P", incident(p, &self.lp)),
            ("Q on L_Q", incident(q, &self.lq)),
            ("R on L_R", incident(r, &self.lr)),
            ("X on L_P", incident(&self.x, &self.lp)),
            ("Y on L_P", incident(&self.y, &self.lp)),
            ("X on L_Q", incident(&self.x, &self.lq)),
            ("Z on L_Q", incident(&self.z, &self.lq)),
            ("Y on L_R", incident(&self.y, &self.lr)),
            ("Z on L_R", incident(&self.z, &self.lr)),
        ]
    }
}

/// All rational solutions, reconstructed from the rational fixed points.
pub fn solve_realization(p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> Result<Vec<TriangleSolution>> {
    let cls = classify(p, q, r);
    if cls.kind == TriangleKind::Degenerate {
        return Err(Error::InvalidInput(format!(
            "degenerate triangle scheme: {}",
            cls.reason.unwrap_or_default()
        )));
    }
    let [m1, m2, _] = projections(p, q, r)?;
    let mut out = Vec::new();
    for y in &cls.fixed_points {
        let [y0, _, y2] = coords(y);
        let zab = apply(&m1, &[y0, y2]);
        let z = ProjectivePoint::new([zab[0].clone(), zab[1].clone(), BigInt::zero()])?;
        let xst = apply(&m2, &zab);
        let x = ProjectivePoint::new([BigInt::zero(), xst[0].clone(), xst[1].clone()])?;
        let consistency = |e: Error| Error::Internal(format!("triangle solution through {y}: {e}"));
        let sol = TriangleSolution {
            lp: join(&x, y).map_err(consistency)?,
            lq: join(&x, &z).map_err(consistency)?,
            lr: join(y, &z).map_err(consistency)?,
            x,
            y: y.clone(),
            z,
        };
        if let Some((name, _)) = sol.incidences(p, q, r).iter().find(|(_, ok)| !ok) {
            return Err(Error::Internal(format!("triangle solution through {y} violates {name}")));
        }
        out.push(sol);
    }
    Ok(out)
}

/// Points `R = (R0·k : R1·k : R2)` with the given first two coordinates (up
/// to the common factor) for which `Δ(P, Q, R) = 0`.
///
/// With `A = P1Q2R0 + P2Q0R1 − P2Q1R0`, `B = P0Q1`, `C = 4P0P1Q0Q2R1`, the
/// condition is `B²x² + (2AB − C)x + A² = 0` in `x = R2`.
pub fn double_point_completions(p: &ProjectivePoint, q: &ProjectivePoint, r0: i64, r1: i64) -> Vec<ProjectivePoint> {
    let [p0, p1, p2] = coords(p);
    let [q0, q1, q2] = coords(q);
    let (r0, r1) = (BigInt::from(r0), BigInt::from(r1));
    let a = &p1 * &q2 * &r0 + &p2 * &q0 * &r1 - &p2 * &q1 * &r0;
    let b = &p0 * &q1;
    let c = BigInt::from(4) * &p0 * &p1 * &q0 * &q2 * &r1;
    if b.is_zero() {
        return vec![];
    }
    let Some(s) = exact_sqrt(&(&c * (&c - BigInt::from(4) * &a * &b))) else {
        return vec![];
    };
    let den = BigInt::from(2) * &b * &b;
    let mut out = Vec::new();
    for num in [&c - BigInt::from(2) * &a * &b + &s, &c - BigInt::from(2) * &a * &b - &s] {
        if let Ok(x) = ProjectivePoint::new([&r0 * &den, &r1 * &den, num]) {
            if discriminant(p, q, &x).is_zero() && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Parameters of the randomized double-point search.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub height_bound: i64,
    pub count: usize,
    pub seed: u64,
    pub max_attempts: u64,
    /// `(P, Q)` pairs scanned exhaustively over `R0, R1` before random draws.
    pub hints: Vec<[ProjectivePoint; 2]>,
}

fn random_point<R: Rng>(rng: &mut R, bound: i64) -> ProjectivePoint {
    loop {
        let v: [i64; 3] = core::array::from_fn(|_| rng.gen_range(-bound..=bound));
        if let Ok(x) = ProjectivePoint::from_i64(v) {
            return x;
        }
    }
}

fn consider(out: &mut Vec<[ProjectivePoint; 3]>, p: &ProjectivePoint, q: &ProjectivePoint, r0: i64, r1: i64, bound: &BigInt) {
    if r0 == 0 && r1 == 0 {
        return;
    }
    for r in double_point_completions(p, q, r0, r1) {
        if r.height() <= *bound && classify(p, q, &r).kind == TriangleKind::DoublePoint {
            let t = [p.clone(), q.clone(), r];
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
}

/// Triples with a double-point triangle scheme and all heights at most the
/// bound, sorted canonically. Deterministic in the seed.
pub fn search_double_point(cfg: &SearchConfig) -> Result<Vec<[ProjectivePoint; 3]>> {
    if cfg.height_bound < 1 {
        return Err(Error::InvalidInput("height bound must be at least 1".into()));
    }
    let b = cfg.height_bound;
    let bound = BigInt::from(b);
    let mut out = Vec::new();
    for [p, q] in &cfg.hints {
        for r0 in -b..=b {
            for r1 in -b..=b {
                consider(&mut out, p, q, r0, r1, &bound);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut attempts = 0u64;
    while out.len() < cfg.count {
        if attempts >= cfg.max_attempts {
            return Err(Error::SearchExhausted { attempts });
        }
        attempts += 1;
        let p = random_point(&mut rng, b);
        let q = random_point(&mut rng, b);
        let (r0, r1) = (rng.gen_range(-b..=b), rng.gen_range(-b..=b));
        consider(&mut out, &p, &q, r0, r1, &bound);
    }
    out.sort();
    Ok(out)
}
