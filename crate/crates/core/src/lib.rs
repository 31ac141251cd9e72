//! Exact matrix-space workbench over prime fields.
//!
//! The crate decides structural properties of linear spaces of matrices over
//! GF(p) by exact elimination and exhaustive enumeration: upper rank,
//! primitivity conditions, trivial spectrum, irreducibility, the duality from
//! trivial-spectrum spaces to bounded-rank spaces, and recognition of the
//! extremal spaces (alternating congruence classes, strictly upper-triangular
//! similarity classes, and the wedge space).

pub mod constructions;
pub mod duality;
pub mod error;
pub mod field;
pub mod grassmann;
pub mod matrix;
pub mod primitivity;
pub mod recognition;
pub mod space;
pub mod spacefile;
pub mod spectral;
pub mod subspace;
pub mod theorems;

pub use error::{MswError, Result};
pub use field::FieldSpec;
pub use grassmann::{gaussian_binomial, Grassmannian, MatrixGrassmannian};
pub use matrix::{Matrix, Rref};
pub use space::{MatrixSpace, RankProfile, DEFAULT_CAP};
pub use subspace::VectorSubspace;
