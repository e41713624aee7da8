use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the exact computations of this crate.
///
/// Verification *failures* (a condition that does not hold) are reported in
/// the various report structs; this type is for rejected inputs and broken
/// internal consistency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The zero vector does not represent a projective object.
    ZeroVector,
    /// Two equal points were joined, or two equal lines were met.
    CoincidentInputs,
    /// An input was rejected before any computation started.
    InvalidInput(String),
    /// A projection centre lies on a line it has to project from or onto.
    DegenerateProjection { center: String, line: String },
    /// The recomputed heart arrangement disagrees with the bundled table.
    HeartMismatch { missing: Vec<String>, unexpected: Vec<String> },
    /// An elimination step fixed an object at coordinates that differ from the realization.
    InconsistentElimination { step: usize, slot: String, computed: String, realization: String },
    /// The elimination residue does not have the shape of a triangle scheme.
    NoTrianglePattern { variables: usize, relations: usize },
    /// The residual triangle scheme is not a double point.
    NotDoublePoint(String),
    /// `sum <<chi, lambda(D)>> D` is not divisible by `p`.
    DivisibilityViolation { character: String, detail: String },
    /// The randomized search ran out of attempts.
    SearchExhausted { attempts: u64 },
    /// A computed quantity violated an invariant that must hold by construction.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroVector => write!(f, "the zero vector is not a projective point or line"),
            Error::CoincidentInputs => write!(f, "join/meet of coincident inputs"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DegenerateProjection { center, line } => {
                write!(f, "projection centre {center} lies on line {line}")
            }
            Error::HeartMismatch { missing, unexpected } => write!(
                f,
                "recomputed arrangement differs from bundled table: missing {missing:?}, unexpected {unexpected:?}"
            ),
            Error::InconsistentElimination { step, slot, computed, realization } => write!(
                f,
                "elimination step {step} fixed {slot} at {computed}, but the realization is {realization}"
            ),
            Error::NoTrianglePattern { variables, relations } => write!(
                f,
                "residue ({variables} variable slots, {relations} relations) is not a triangle scheme"
            ),
            Error::NotDoublePoint(kind) => write!(f, "residual triangle scheme is {kind}, not a double point"),
            Error::DivisibilityViolation { character, detail } => {
                write!(f, "divisibility fails for character {character}: {detail}")
            }
            Error::SearchExhausted { attempts } => write!(f, "search gave up after {attempts} attempts"),
            Error::Internal(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
