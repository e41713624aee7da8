//! Exact computations for covers of the plane branched over line arrangements.
//!
//! The crate is `no_std` and needs only `alloc`. Every quantity is computed
//! with exact integers: projective geometry over `Q`, the Picard lattice of
//! the blowup, building data over `(Z/p)^r` and the cohomology of fat-point
//! ideal sheaves. IO, threading and file formats live in the `linecover`
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arrangement;
pub mod certify;
pub mod cohomology;
pub mod cover;
pub mod data;
pub mod error;
pub mod geom;
pub mod incidence;
pub mod linalg;
pub mod picard;
pub mod triangle;

pub use error::{Error, Result};
pub use geom::{ProjectiveLine, ProjectivePoint};
