//! Exact computational engine for finite dimensional associative algebras,
//! their module categories and homological invariants: Hom and Ext spaces,
//! syzygies, dominant and codominant dimension, Auslander-Reiten translates,
//! minimal approximations, and endomorphism algebras of generators.

pub mod approximation;
pub mod algebra;
pub mod endo;
pub mod error;
pub mod families;
pub mod homological;
pub mod io;
pub mod matrix;
pub mod module;
pub mod report;

pub use error::EngineError;
pub use matrix::{Matrix, RowSolver, RowSpan};
pub use scalar::{Field, Scalar};

pub mod scalar;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
