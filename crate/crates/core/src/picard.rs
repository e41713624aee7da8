//! The Picard lattice of the blowup `S` of the plane at the singular points.
//!
//! A class is `h·H + Σ e_ν E_ν` with `H` the pullback of a line; the form is
//! `H² = 1`, `E_ν² = −1`, `H·E_ν = 0`. Exceptional indices follow the
//! canonical singular-point order of [`IncidenceTable`].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::arrangement::IncidenceTable;

/// A divisor class with signed coefficients, stored as written.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass {
    pub h: i64,
    pub e: Vec<i64>,
}

impl DivisorClass {
    pub fn zero(m: usize) -> Self {
        DivisorClass { h: 0, e: vec![0; m] }
    }

    /// `H` on a blowup at `m` points.
    pub fn hyperplane(m: usize) -> Self {
        DivisorClass { h: 1, e: vec![0; m] }
    }

    /// `E_ν` on a blowup at `m` points.
    pub fn exceptional(m: usize, nu: usize) -> Self {
        let mut e = vec![0; m];
        e[nu] = 1;
        DivisorClass { h: 0, e }
    }

    /// Number of blown-up points.
    pub fn rank_minus_one(&self) -> usize {
        self.e.len()
    }

    pub fn is_zero(&self) -> bool {
        self.h == 0 && self.e.iter().all(|&x| x == 0)
    }

    /// Whether every coefficient is divisible by `p`.
    pub fn divisible_by(&self, p: i64) -> bool {
        self.h % p == 0 && self.e.iter().all(|x| x % p == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        DivisorClass { h: self.h * k, e: self.e.iter().map(|x| x * k).collect() }
    }

    /// Intersection number with `other`.
    pub fn dot(&self, other: &DivisorClass) -> i64 {
        intersect(self, other)
    }

    /// Self-intersection.
    pub fn square(&self) -> i64 {
        intersect(self, self)
    }
}

/// `a.h·b.h − Σ a.e_ν·b.e_ν`.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> i64 {
    assert_eq!(a.e.len(), b.e.len(), "classes on different blowups");
    a.h * b.h - a.e.iter().zip(&b.e).map(|(x, y)| x * y).sum::<i64>()
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.e.len(), rhs.e.len(), "classes on different blowups");
        DivisorClass { h: self.h + rhs.h, e: self.e.iter().zip(&rhs.e).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self + &(-rhs)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scaled(-1)
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scaled(self)
    }
}

/// `H − Σ_{p_ν ∈ L_i} E_ν`.
pub fn strict_transform(i: usize, table: &IncidenceTable) -> DivisorClass {
    let mut c = DivisorClass::hyperplane(table.num_points());
    for &nu in table.points_on(i) {
        c.e[nu] = -1;
    }
    c
}

/// `K_S = −3H + Σ E_ν`.
pub fn canonical_class(m: usize) -> DivisorClass {
    DivisorClass { h: -3, e: vec![1; m] }
}

/// `B = n·H − Σ (μ_ν − 1) E_ν`, the sum of all strict transforms and exceptional curves.
pub fn branch_class(table: &IncidenceTable) -> DivisorClass {
    DivisorClass {
        h: table.num_lines() as i64,
        e: (0..table.num_points()).map(|nu| 1 - table.mu(nu) as i64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::heart_table;
    use crate::geom::pt;
    use proptest::prelude::*;

    #[test]
    fn basic_form() {
        let h = DivisorClass::hyperplane(3);
        let e = DivisorClass::exceptional(3, 1);
        assert_eq!(intersect(&h, &h), 1);
        assert_eq!(intersect(&e, &e), -1);
        assert_eq!(intersect(&h, &e), 0);
        assert_eq!(canonical_class(0), DivisorClass { h: -3, e: vec![] });
        for m in [0usize, 1, 9, 51] {
            assert_eq!(canonical_class(m).square(), 9 - m as i64);
        }
    }

    #[test]
    fn heart_classes() {
        let t = heart_table();
        assert_eq!(t.num_points(), 51);
        // L26 meets only two blown-up points.
        let l26 = strict_transform(25, &t);
        let mut expect = DivisorClass::hyperplane(51);
        expect.e[t.index_of(&pt([1, -1, -2])).unwrap()] = -1;
        expect.e[t.index_of(&pt([1, 4, 2])).unwrap()] = -1;
        assert_eq!(l26, expect);
        assert_eq!(l26.square(), -1);

        let x = t.index_of(&pt([1, 0, 0])).unwrap();
        assert_eq!(strict_transform(0, &t).e[x], -1);
        let b = branch_class(&t);
        assert_eq!(b.h, 34);
        assert_eq!(b.e[x], -5);
        assert_eq!(canonical_class(51).e, vec![1; 51]);
    }

    #[test]
    fn empty_arrangement_branch_class_is_zero() {
        let t = IncidenceTable::of_lines(&[]);
        assert!(branch_class(&t).is_zero());
    }

    #[test]
    fn branch_class_is_sum_of_components() {
        let t = heart_table();
        let m = t.num_points();
        let mut sum = DivisorClass::zero(m);
        for i in 0..t.num_lines() {
            let s = strict_transform(i, &t);
            assert_eq!(s.square(), 1 - t.points_on(i).len() as i64);
            sum = &sum + &s;
        }
        for nu in 0..m {
            sum = &sum + &DivisorClass::exceptional(m, nu);
        }
        assert_eq!(sum, branch_class(&t));
    }

    #[test]
    fn delta_against_exceptional() {
        let t = heart_table();
        let m = t.num_points() as i64;
        let p = 7i64;
        let delta = &canonical_class(m as usize).scaled(p) + &branch_class(&t).scaled(p - 1);
        for nu in 0..t.num_points() {
            let mu = t.mu(nu) as i64;
            assert_eq!(delta.dot(&DivisorClass::exceptional(t.num_points(), nu)), (p - 1) * mu - (2 * p - 1));
        }
    }

    fn class(m: usize) -> impl Strategy<Value = DivisorClass> {
        (-50i64..50, proptest::collection::vec(-50i64..50, m)).prop_map(|(h, e)| DivisorClass { h, e })
    }

    proptest! {
        #[test]
        fn bilinear_and_symmetric(a in class(5), b in class(5), c in class(5), k in -9i64..9) {
            prop_assert_eq!(intersect(&a, &b), intersect(&b, &a));
            prop_assert_eq!(intersect(&(&a + &b), &c), intersect(&a, &c) + intersect(&b, &c));
            prop_assert_eq!(intersect(&(k * &a), &b), k * intersect(&a, &b));
        }
    }
}
