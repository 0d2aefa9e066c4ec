//! Exact-arithmetic toolkit for the classification of low-dimensional
//! nonassociative algebras: identity checks, second-cohomology extensions,
//! derivation algebras, degeneration witnesses, and a verifiable catalog.

pub mod algebra;
pub mod catalog;
pub mod cohomology;
pub mod degeneration;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod scalar;

pub use error::{Error, Result};
