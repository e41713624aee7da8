//! Hilbert functions, `h0`/`h1` and Castelnuovo–Mumford regularity of
//! fat-point ideal sheaves on the plane.
//!
//! A fat point of multiplicity `h` at `x` imposes `h(h+1)/2` conditions on
//! forms of degree `t`: in the affine chart where the first nonzero
//! coordinate `c` of `x` is held fixed, all Taylor coefficients of order `< h`
//! in the two other coordinates vanish.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arrangement::IncidenceTable;
use crate::cover::{l_chi, Character, LabelMap};
use crate::error::{Error, Result};
use crate::geom::{join, ProjectiveLine, ProjectivePoint};
use crate::linalg::{bareiss_rank, big_mod, hadamard_bound_sq, large_primes, multimodular_rank, ModMatrix};

/// Distinct points with multiplicities `h ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FatPointScheme {
    points: Vec<(ProjectivePoint, u32)>,
}

impl FatPointScheme {
    pub fn new(mut points: Vec<(ProjectivePoint, u32)>) -> Result<Self> {
        points.sort();
        for w in points.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidInput(format!("point {} repeated in fat-point scheme", w[0].0)));
            }
        }
        if let Some((x, _)) = points.iter().find(|(_, h)| *h == 0) {
            return Err(Error::InvalidInput(format!("point {x} has multiplicity 0")));
        }
        Ok(FatPointScheme { points })
    }

    pub fn empty() -> Self {
        FatPointScheme { points: vec![] }
    }

    pub fn points(&self) -> &[(ProjectivePoint, u32)] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `deg Z = Σ h(h+1)/2`.
    pub fn degree(&self) -> u64 {
        self.points.iter().map(|&(_, h)| h as u64 * (h as u64 + 1) / 2).sum()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.points.iter().map(|&(_, h)| h as u64).sum()
    }
}

/// `C(t+2, 2)` for `t ≥ 0`, else 0.
pub fn forms(t: i64) -> u64 {
    if t < 0 {
        0
    } else {
        let t = t as u64;
        (t + 1) * (t + 2) / 2
    }
}

/// Exponent vectors of the degree-`t` monomials, in a fixed order.
pub fn monomials(t: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(forms(t as i64) as usize);
    for a0 in (0..=t).rev() {
        for a1 in (0..=t - a0).rev() {
            out.push([a0, a1, t - a0 - a1]);
        }
    }
    out
}

/// The chart coordinate and the two free ones.
fn chart(x: &ProjectivePoint) -> (usize, usize, usize) {
    let c = x.coords().iter().position(|v| !v.is_zero()).expect("nonzero point");
    let others: Vec<usize> = (0..3).filter(|&k| k != c).collect();
    (c, others[0], others[1])
}

/// `(j, k)` with `j + k < h`, one per condition row.
fn orders(h: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..h).flat_map(move |j| (0..h - j).map(move |k| (j, k)))
}

/// The integer condition matrix of `Z` in degree `t`.
pub fn condition_rows(z: &FatPointScheme, t: u32) -> Vec<Vec<BigInt>> {
    let mons = monomials(t);
    let binom = |n: u32, k: u32| -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        let mut b = BigInt::one();
        for i in 0..k {
            b = b * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        b
    };
    let mut rows = Vec::new();
    for (x, h) in &z.points {
        let (c, o1, o2) = chart(x);
        let v = x.coords();
        for (j, k) in orders(*h) {
            rows.push(
                mons.iter()
                    .map(|a| {
                        if a[o1] < j || a[o2] < k {
                            return BigInt::zero();
                        }
                        binom(a[o1], j)
                            * binom(a[o2], k)
                            * num_traits::pow(v[c].clone(), a[c] as usize)
                            * num_traits::pow(v[o1].clone(), (a[o1] - j) as usize)
                            * num_traits::pow(v[o2].clone(), (a[o2] - k) as usize)
                    })
                    .collect(),
            );
        }
    }
    rows
}

/// The condition matrix reduced modulo the prime `q`, built without big integers.
pub fn condition_matrix_mod(z: &FatPointScheme, t: u32, q: u32) -> ModMatrix {
    let qq = q as u64;
    let mons = monomials(t);
    let n = t as usize + 1;
    let mut pascal = vec![vec![0u64; n]; n];
    for i in 0..n {
        pascal[i][0] = 1;
        for k in 1..=i {
            pascal[i][k] = (pascal[i - 1][k - 1] + if k < i { pascal[i - 1][k] } else { 0 }) % qq;
        }
    }
    let mut m = ModMatrix::zeros(z.degree() as usize, mons.len(), q);
    let mut row = 0;
    for (x, h) in &z.points {
        let (c, o1, o2) = chart(x);
        let powers: Vec<Vec<u64>> = x
            .coords()
            .iter()
            .map(|v| {
                let b = big_mod(v, q);
                let mut p = vec![1u64; n];
                for e in 1..n {
                    p[e] = p[e - 1] * b % qq;
                }
                p
            })
            .collect();
        for (j, k) in orders(*h) {
            for (col, a) in mons.iter().enumerate() {
                if a[o1] < j || a[o2] < k {
                    continue;
                }
                let (j, k) = (j as usize, k as usize);
                let (a0, a1, a2) = (a[c] as usize, a[o1] as usize, a[o2] as usize);
                let v = pascal[a1][j] * pascal[a2][k] % qq * powers[c][a0] % qq * powers[o1][a1 - j] % qq
                    * powers[o2][a2 - k]
                    % qq;
                m.set(row, col, v);
            }
            row += 1;
        }
    }
    m
}

/// How a rank is computed; both are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RankMethod {
    /// One large prime, falling back to a multimodular rank when not full.
    #[default]
    Modular,
    /// Bareiss elimination over the integers.
    FractionFree,
}

/// First prime of the fast path.
pub fn fast_prime() -> u32 {
    large_primes().next().expect("primes exist")
}

/// Rank of the conditions of `Z` on degree-`t` forms.
pub fn hilbert_rank(z: &FatPointScheme, t: u32) -> usize {
    hilbert_rank_with(z, t, RankMethod::Modular)
}

pub fn hilbert_rank_with(z: &FatPointScheme, t: u32, method: RankMethod) -> usize {
    let rows = z.degree() as usize;
    let cols = forms(t as i64) as usize;
    let full = rows.min(cols);
    match method {
        RankMethod::FractionFree => bareiss_rank(condition_rows(z, t)),
        RankMethod::Modular => {
            let r = condition_matrix_mod(z, t, fast_prime()).rank();
            if r == full {
                return r;
            }
            let bound = hadamard_bound_sq(&condition_rows(z, t));
            multimodular_rank(full, &bound, |q| condition_matrix_mod(z, t, q))
        }
    }
}

/// `(h0, h1)` of `I_Z(t)`.
pub fn h0_h1(z: &FatPointScheme, t: i64) -> (u64, u64) {
    if t < 0 {
        return (0, z.degree());
    }
    let rank = hilbert_rank(z, t as u32) as u64;
    let (h0, h1) = (forms(t) - rank, z.degree() - rank);
    debug_assert_eq!(h0 as i64 - h1 as i64, forms(t) as i64 - z.degree() as i64);
    (h0, h1)
}

/// Why `h1(I_Z(t))` is known to be positive or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum H1Evidence {
    /// Fewer forms than conditions: `h1 ≥ deg Z − C(t+2,2)`.
    TooFewForms { forms: u64, degree: u64 },
    /// `Z` meets this line in length `> t + 1`.
    Line { line: ProjectiveLine, length: u64 },
    /// The conditions are dependent: exact rank below `deg Z`.
    Deficient { rank: u64 },
    /// The conditions are independent.
    Independent,
}

/// One twist examined by the regularity scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistCheck {
    pub t: i64,
    pub h1_vanishes: bool,
    pub evidence: H1Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub regularity: i64,
    /// Twists `t ≥ 0` where `h1` was shown positive, then the first vanishing twist.
    pub checks: Vec<TwistCheck>,
}

fn line_witness(z: &FatPointScheme, t: i64) -> Option<(ProjectiveLine, u64)> {
    let pts = z.points();
    let mut best: Option<(ProjectiveLine, u64)> = None;
    let mut seen: BTreeMap<ProjectiveLine, ()> = BTreeMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let l = join(&pts[i].0, &pts[j].0).expect("distinct points");
            if seen.insert(l.clone(), ()).is_some() {
                continue;
            }
            let len: u64 = pts.iter().filter(|(x, _)| l.contains(x)).map(|&(_, h)| h as u64).sum();
            if len as i64 > t + 1 && best.as_ref().is_none_or(|(_, b)| len > *b) {
                best = Some((l, len));
            }
        }
    }
    best
}

/// Regularity with the evidence for every twist that was examined.
///
/// For nonempty `Z` this is `1 + min{t ≥ 0 : h1(I_Z(t)) = 0}`; `h1`
/// stays zero afterwards. The scan is capped at `3 + Σ h`.
pub fn regularity_report(z: &FatPointScheme) -> Result<RegularityReport> {
    if z.is_empty() {
        return Ok(RegularityReport { regularity: 0, checks: vec![] });
    }
    let deg = z.degree();
    let mut checks = Vec::new();
    let mut t = 0i64;
    while forms(t) < deg {
        t += 1;
    }
    if t > 0 {
        checks.push(TwistCheck { t: t - 1, h1_vanishes: false, evidence: H1Evidence::TooFewForms { forms: forms(t - 1), degree: deg } });
    }
    let bound = 3 + z.total_multiplicity() as i64;
    while t <= bound {
        let tu = t as u32;
        let quick = condition_matrix_mod(z, tu, fast_prime()).rank() as u64;
        if quick == deg {
            checks.push(TwistCheck { t, h1_vanishes: true, evidence: H1Evidence::Independent });
            return Ok(RegularityReport { regularity: t + 1, checks });
        }
        if let Some((line, length)) = line_witness(z, t) {
            checks.push(TwistCheck { t, h1_vanishes: false, evidence: H1Evidence::Line { line, length } });
        } else {
            let rank = hilbert_rank(z, tu) as u64;
            if rank == deg {
                checks.push(TwistCheck { t, h1_vanishes: true, evidence: H1Evidence::Independent });
                return Ok(RegularityReport { regularity: t + 1, checks });
            }
            checks.push(TwistCheck { t, h1_vanishes: false, evidence: H1Evidence::Deficient { rank } });
        }
        t += 1;
    }
    Err(Error::Internal(format!("regularity scan passed the bound {bound}")))
}

pub fn regularity(z: &FatPointScheme) -> Result<i64> {
    regularity_report(z).map(|r| r.regularity)
}

/// `(I_χ, d^χ)` from `L_χ ⊗ K_S = d·H − Σ h_ν E_ν`.
pub fn ideal_of_chi(lambda: &LabelMap, table: &IncidenceTable, chi: &Character) -> Result<(FatPointScheme, i64)> {
    let l = l_chi(lambda, table, chi)?;
    let d = l.h - 3;
    let mut pts = Vec::new();
    for (nu, &e) in l.e.iter().enumerate() {
        let h = -e - 1;
        if h < -1 {
            return Err(Error::Internal(format!("h = {h} < -1 at {} for {chi}", table.points()[nu])));
        }
        if h >= 1 {
            pts.push((table.points()[nu].clone(), h as u32));
        }
    }
    Ok((FatPointScheme::new(pts)?, d))
}

/// `h0(S, L_χ ⊗ K_S ⊗ σ*(aH)) = h0(I_χ(d^χ + a))`.
pub fn h0_ks_twist(lambda: &LabelMap, table: &IncidenceTable, chi: &Character, a: i64) -> Result<u64> {
    let (z, d) = ideal_of_chi(lambda, table, chi)?;
    Ok(h0_h1(&z, d + a).0)
}
