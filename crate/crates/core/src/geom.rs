//! Exact points and lines of the rational projective plane.
//!
//! Both kinds of object are stored as primitive integer triples whose first
//! nonzero entry is positive, so projective equality is structural equality
//! and the derived `Ord` is the lexicographic order on canonical triples.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduce a nonzero integer triple to its primitive, sign-canonical form.
pub fn normalize(mut v: [BigInt; 3]) -> Result<[BigInt; 3]> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    let negate = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
    Ok(v)
}

fn cross(a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &[BigInt; 3], b: &[BigInt; 3]) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn max_abs(v: &[BigInt; 3]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

fn min_abs(v: &[BigInt; 3]) -> BigInt {
    v.iter().map(|x| x.abs()).min().unwrap_or_default()
}

fn write_triple(f: &mut fmt::Formatter<'_>, v: &[BigInt; 3]) -> fmt::Result {
    write!(f, "({}:{}:{})", v[0], v[1], v[2])
}

macro_rules! projective_type {
    ($name:ident) => {
        impl $name {
            /// Normalizes `v`; fails on the zero vector.
            pub fn new(v: [BigInt; 3]) -> Result<Self> {
                normalize(v).map($name)
            }

            pub fn from_i64(v: [i64; 3]) -> Result<Self> {
                Self::new(v.map(BigInt::from))
            }

            /// Canonical coordinates.
            pub fn coords(&self) -> &[BigInt; 3] {
                &self.0
            }

            pub fn to_i64(&self) -> Option<[i64; 3]> {
                Some([self.0[0].to_i64()?, self.0[1].to_i64()?, self.0[2].to_i64()?])
            }

            /// Largest absolute entry of the primitive representative.
            pub fn height(&self) -> BigInt {
                max_abs(&self.0)
            }

            /// Smallest absolute entry of the primitive representative.
            pub fn min_abs_entry(&self) -> BigInt {
                min_abs(&self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_triple(f, &self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", stringify!($name))?;
                write_triple(f, &self.0)
            }
        }
    };
}

/// A point of P^2(Q).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint([BigInt; 3]);

/// A line of P^2(Q), given by its dual coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectiveLine([BigInt; 3]);

projective_type!(ProjectivePoint);
projective_type!(ProjectiveLine);

impl ProjectivePoint {
    /// Whether this point lies on `line`.
    pub fn lies_on(&self, line: &ProjectiveLine) -> bool {
        incident(self, line)
    }

    /// The line with the same coordinate triple.
    pub fn dual(&self) -> ProjectiveLine {
        ProjectiveLine(self.0.clone())
    }
}

impl ProjectiveLine {
    pub fn contains(&self, point: &ProjectivePoint) -> bool {
        incident(point, self)
    }

    /// Value of the linear form at an integer representative of `point`.
    pub fn evaluate(&self, point: &ProjectivePoint) -> BigInt {
        dot(&point.0, &self.0)
    }

    pub fn dual(&self) -> ProjectivePoint {
        ProjectivePoint(self.0.clone())
    }
}

pub fn incident(p: &ProjectivePoint, l: &ProjectiveLine) -> bool {
    dot(&p.0, &l.0).is_zero()
}

/// The line through two distinct points.
pub fn join(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<ProjectiveLine> {
    ProjectiveLine::new(cross(&p.0, &q.0)).map_err(|_| Error::CoincidentInputs)
}

/// The intersection point of two distinct lines.
pub fn meet(l: &ProjectiveLine, m: &ProjectiveLine) -> Result<ProjectivePoint> {
    ProjectivePoint::new(cross(&l.0, &m.0)).map_err(|_| Error::CoincidentInputs)
}

/// Whether three points lie on a common line.
pub fn collinear(p: &ProjectivePoint, q: &ProjectivePoint, r: &ProjectivePoint) -> bool {
    dot(&cross(&p.0, &q.0), &r.0).is_zero()
}

/// Shorthand used throughout the tests and the bundled data.
pub fn pt(v: [i64; 3]) -> ProjectivePoint {
    ProjectivePoint::from_i64(v).expect("nonzero point")
}

pub fn ln(v: [i64; 3]) -> ProjectiveLine {
    ProjectiveLine::from_i64(v).expect("nonzero line")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(pt([2, 4, 6]), pt([1, 2, 3]));
        assert_eq!(pt([0, -3, 3]).to_i64(), Some([0, 1, -1]));
        assert_eq!(ln([20, -9, -55]).to_i64(), Some([20, -9, -55]));
        assert_eq!(ProjectivePoint::from_i64([0, 0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn incidence_examples() {
        assert!(incident(&pt([1, 0, 0]), &ln([0, 0, 1])));
        assert!(incident(&pt([2, 1, 0]), &ln([1, -2, 1])));
        assert!(incident(&pt([1, 4, 2]), &ln([8, 9, -22])));
        assert!(!incident(&pt([1, 1, 1]), &ln([1, 1, 1])));
    }

    #[test]
    fn join_and_meet_examples() {
        assert_eq!(join(&pt([1, 0, 0]), &pt([0, 1, 0])).unwrap(), ln([0, 0, 1]));
        // Table lines 32 and 34 meet on x1 = 0; the cross product carries a factor 63.
        let l32 = ln([8, 9, -22]);
        let l34 = ln([20, -9, -55]);
        let raw = cross(l32.coords(), l34.coords());
        assert_eq!(raw, [BigInt::from(-693), BigInt::from(0), BigInt::from(-252)]);
        assert_eq!(meet(&l32, &l34).unwrap(), pt([11, 0, 4]));
        let (a, b) = (pt([1, 1, 2]), pt([1, 4, 2]));
        let l = join(&a, &b).unwrap();
        assert!(l.contains(&a) && l.contains(&b));
        assert_eq!(join(&a, &pt([2, 2, 4])), Err(Error::CoincidentInputs));
    }

    #[test]
    fn heights() {
        assert_eq!(pt([1, 0, 0]).height(), BigInt::from(1));
        assert_eq!(pt([14, 25, 1]).height(), BigInt::from(25));
        assert_eq!(pt([14, 25, 1]).min_abs_entry(), BigInt::from(1));
    }

    fn triple() -> impl Strategy<Value = [i64; 3]> {
        [-40i64..40, -40i64..40, -40i64..40].prop_filter("nonzero", |v| v.iter().any(|x| *x != 0))
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(v in triple()) {
            let p = pt(v);
            prop_assert_eq!(ProjectivePoint::new(p.coords().clone()).unwrap(), p.clone());
            // scaling does not change the canonical form
            prop_assert_eq!(pt([v[0] * -3, v[1] * -3, v[2] * -3]), p);
        }

        #[test]
        fn join_is_incident(a in triple(), b in triple()) {
            let (p, q) = (pt(a), pt(b));
            prop_assume!(p != q);
            let l = join(&p, &q).unwrap();
            prop_assert!(l.contains(&p) && l.contains(&q));
        }

        #[test]
        fn meet_of_joins_recovers_point(a in triple(), b in triple(), c in triple()) {
            let (p, q, r) = (pt(a), pt(b), pt(c));
            prop_assume!(p != q && p != r && q != r && !collinear(&p, &q, &r));
            let m = meet(&join(&p, &q).unwrap(), &join(&p, &r).unwrap()).unwrap();
            prop_assert_eq!(m, p);
        }
    }
}
