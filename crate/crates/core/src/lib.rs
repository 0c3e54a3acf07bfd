//! Cyclic Kaplansky invariants of n-cycles of linear maps over ℚ and 𝔽_p.
//!
//! The crate computes the chain filtration and invariants of a cycle,
//! decides isomorphism and builds explicit certificates, realizes invariant
//! tables by canonical cells and produces adapted bases.

pub mod admissible;
pub mod batch;
pub mod card;
pub mod classify;
pub mod cyclerep;
pub mod error;
pub mod extension;
pub mod field;
pub mod filtration;
pub mod gen;
pub mod matrix;
pub mod ordinal;
pub mod poly;
pub mod selfcheck;
pub mod subspace;
pub mod terminal;
mod text;

pub use admissible::{AdmissibleFamily, SupportSet};
pub use card::Card;
pub use classify::{adapted_basis, decide_isomorphic, decompose, realize_finite, AdaptedBasis, CellMultiset, Verdict};
pub use cyclerep::{AnyCycleRep, CycleRep, MorphismFamily};
pub use error::{Error, Result};
pub use extension::{build_isomorphism, CoherentGraph};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use filtration::{Filtration, InvariantTable};
pub use matrix::Matrix;
pub use ordinal::{Ordinal, OrdinalOrInfinity};
pub use subspace::Subspace;
pub use terminal::{DiscreteTable, TerminalRep};
