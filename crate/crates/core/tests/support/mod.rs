//! Independent oracles shared by the integration tests and the acceptance suite.

#![allow(dead_code)]

use linecover_core::arrangement::IncidenceTable;
use linecover_core::certify::{classes, CoverContext};
use linecover_core::cohomology::{forms, h0_h1, hilbert_rank, ideal_of_chi, regularity_report, FatPointScheme};
use linecover_core::cover::{l_chi, pairing_lift, Character, GroupElement, LabelMap};
use linecover_core::picard::{strict_transform, DivisorClass};
use linecover_core::ProjectivePoint;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn rank_q(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(p, rank);
        let pivot = rows[rank][c].clone();
        for i in rank + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &pivot;
            for j in c..cols {
                let s = &f * &rows[rank][j];
                rows[i][j] -= s;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the interpolation conditions of `z` in degree `t`, computed in an
/// affine chart around each point with Hasse derivatives of the
/// dehomogenized monomials.
pub fn oracle_rank(z: &[([i64; 3], u32)], t: u32) -> usize {
    let mut mons = Vec::new();
    for a in 0..=t {
        for b in 0..=t - a {
            mons.push([a, b, t - a - b]);
        }
    }
    let mut rows = Vec::new();
    for &(v, h) in z {
        let k = (0..3).find(|&i| v[i] != 0).expect("nonzero point");
        let [i1, i2] = match k {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        let u1 = BigRational::new(v[i1].into(), v[k].into());
        let u2 = BigRational::new(v[i2].into(), v[k].into());
        for j1 in 0..h {
            for j2 in 0..h - j1 {
                rows.push(
                    mons.iter()
                        .map(|m| {
                            let (a1, a2) = (m[i1], m[i2]);
                            if a1 < j1 || a2 < j2 {
                                return BigRational::zero();
                            }
                            BigRational::from_integer(binom(a1, j1) * binom(a2, j2))
                                * num_traits::pow(u1.clone(), (a1 - j1) as usize)
                                * num_traits::pow(u2.clone(), (a2 - j2) as usize)
                        })
                        .collect(),
                );
            }
        }
    }
    rank_q(rows)
}

/// A scheme of 1 to 5 distinct points with small coordinates and multiplicities 1 to 3.
pub fn random_scheme<R: Rng>(rng: &mut R) -> Vec<([i64; 3], u32)> {
    let n = rng.gen_range(1..=5);
    let mut out: Vec<([i64; 3], u32)> = Vec::new();
    while out.len() < n {
        let v: [i64; 3] = [rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-4..=4)];
        let Ok(x) = ProjectivePoint::from_i64(v) else { continue };
        if out.iter().any(|(w, _)| ProjectivePoint::from_i64(*w).unwrap() == x) {
            continue;
        }
        out.push((v, rng.gen_range(1..=3)));
    }
    out
}

pub fn scheme(z: &[([i64; 3], u32)]) -> FatPointScheme {
    FatPointScheme::new(z.iter().map(|&(v, h)| (ProjectivePoint::from_i64(v).unwrap(), h)).collect()).unwrap()
}

/// Compare the library rank with the oracle on `n` random schemes over all
/// twists up to two past the total multiplicity. Returns the number of
/// `(scheme, twist)` pairs compared.
pub fn check_oracle(n: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared = 0;
    for _ in 0..n {
        let z = random_scheme(&mut rng);
        let s = scheme(&z);
        let top = s.total_multiplicity() as u32 + 2;
        for t in 0..=top.min(9) {
            let (lib, oracle) = (hilbert_rank(&s, t), oracle_rank(&z, t));
            if lib != oracle {
                return Err(format!("{z:?} at t = {t}: library {lib}, oracle {oracle}"));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

/// `Σ ⌊(⟨χ,λ(D)⟩ + ⟨χ',λ(D)⟩)/p⌋·D` over all branch components.
pub fn pardini_rhs(lambda: &LabelMap, table: &IncidenceTable, a: &Character, b: &Character) -> DivisorClass {
    let p = lambda.group.p();
    let carry = |g| (pairing_lift(a, g, p) + pairing_lift(b, g, p)) / p;
    let mut c = DivisorClass::zero(table.num_points());
    for (i, g) in lambda.lines.iter().enumerate() {
        if carry(g) == 1 {
            c = &c + &strict_transform(i, table);
        }
    }
    for (nu, g) in lambda.exceptional.iter().enumerate() {
        if carry(g) == 1 {
            c = &c + &DivisorClass::exceptional(table.num_points(), nu);
        }
    }
    c
}

/// `L_χ + L_χ' − L_{χ+χ'}` against the carries on `pairs` random pairs.
pub fn check_pardini(lambda: &LabelMap, table: &IncidenceTable, pairs: usize, seed: u64) -> Result<usize, String> {
    let g = lambda.group;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = || GroupElement((0..g.r()).map(|_| rng.gen_range(0..g.p())).collect());
    for _ in 0..pairs {
        let (a, b) = (random(), random());
        let sum = g.add(&a, &b);
        let l = |c: &Character| l_chi(lambda, table, c).map_err(|e| e.to_string());
        let lhs = &(&l(&a)? + &l(&b)?) - &l(&sum)?;
        let rhs = pardini_rhs(lambda, table, &a, &b);
        if lhs != rhs {
            return Err(format!("pair {a}, {b}: L_a + L_b − L_(a+b) = {lhs:?}, carries give {rhs:?}"));
        }
    }
    Ok(pairs)
}

/// `h0 − h1 = C(t+2,2) − deg Z` at `d` and at every twist the regularity
/// scan examined, for one character per class. Returns the twists checked.
pub fn check_euler(ctx: &CoverContext) -> Result<usize, String> {
    let (_, _, reps, _) = classes(ctx).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for chi in &reps {
        let (z, d) = ideal_of_chi(ctx.lambda, ctx.table, chi).map_err(|e| e.to_string())?;
        let rep = regularity_report(&z).map_err(|e| e.to_string())?;
        let twists = rep.checks.iter().map(|c| c.t).chain(std::iter::once(d)).filter(|&t| t >= 0);
        for t in twists {
            let (h0, h1) = h0_h1(&z, t);
            if h0 as i64 - h1 as i64 != forms(t) as i64 - z.degree() as i64 {
                return Err(format!("{chi} at t = {t}: h0 = {h0}, h1 = {h1}, deg = {}", z.degree()));
            }
            if let Some(c) = rep.checks.iter().find(|c| c.t == t) {
                if c.h1_vanishes != (h1 == 0) {
                    return Err(format!("{chi} at t = {t}: scan says h1 = 0 is {}, rank says h1 = {h1}", c.h1_vanishes));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}
