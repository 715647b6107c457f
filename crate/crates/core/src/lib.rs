//! Exact symbolic engine for almost Lie algebroids over polynomial
//! coefficient rings: anchors and brackets, E-connections, the derived
//! bundle, the exterior differential complex, and characteristic forms.

pub mod algebroid;
pub mod builtins;
pub mod charclass;
pub mod connection;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod poly;
pub mod random;

pub use algebroid::{Algebroid, BaseSpace, Section, VectorField};
pub use connection::EConnection;
pub use error::{Error, Result};
pub use forms::Form;
pub use poly::{Poly, Scalar};

/// Outcome of an existential search that may be bounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<W> {
    /// Holds, with a witness.
    Yes(W),
    /// Exactly refuted.
    No,
    /// No witness exists with coefficient degree at most the bound.
    NoWitnessWithin(u32),
}

impl<W> Decision<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Decision::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Decision<V> {
        match self {
            Decision::Yes(w) => Decision::Yes(f(w)),
            Decision::No => Decision::No,
            Decision::NoWitnessWithin(d) => Decision::NoWitnessWithin(d),
        }
    }
}
