//! Exact computation of triple Massey products in graded-commutative
//! differential algebras, together with the equivariant transfer checks for
//! fixed-point components of circle actions: Euler-class multiplication in
//! the Cartan model of a trivial action, and Gysin transfer data.
//!
//! All arithmetic is over the rationals and exact; every verdict is an
//! exact subspace-membership test.

pub mod algebra;
pub mod cohomology;
pub mod document;
pub mod equivariant;
pub mod error;
pub mod linalg;
pub mod massey;
pub mod models;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;
