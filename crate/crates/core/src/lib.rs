//! Exact structure-constant computations for transposed Poisson structures
//! on 3-Lie algebras: identity checkers, derivation spaces, automorphism
//! transport and normal forms over ℚ.

pub mod algebra;
pub mod classify;
pub mod cli;
pub mod cubic;
pub mod derivations;
pub mod document;
pub mod error;
pub mod families;
pub mod linalg;
pub mod morphisms;
pub mod rational;

pub use error::{Error, Result};
