//! Milnor invariants of string links, linear tree generators for the
//! concordance quotients of two-strand string links, and the algebra of chord
//! diagrams on two strands.

pub mod diagalg;
pub mod error;
pub mod fixtures;
pub mod freegroup;
pub mod magnus;
pub mod scalar;
pub mod linalg;
pub mod stringlink;
pub mod treegen;

pub use diagalg::{ChordDiagram2, DiagramVector, JacobiDiagram2};
pub use error::{Error, Result};
pub use freegroup::{BraidLetter, FreeWord, Letter};
pub use magnus::{expand, Monomial, TruncSeries};
pub use stringlink::{Braid, MorseLetter, MorseWord};

/// Integer Magnus series.
pub type Series = TruncSeries<num_bigint::BigInt>;

/// Chord diagram combinations with exact rational coefficients.
pub type DiagramVectorQ = DiagramVector<num_rational::BigRational>;
