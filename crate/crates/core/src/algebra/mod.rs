//! Graded-commutative differential algebras with explicit bases.
//!
//! Two presentations are supported: free algebras on generators (Sullivan
//! style models such as the Heisenberg nilmanifold) and finite
//! multiplication tables (cohomology rings, truncated polynomial rings).
//! Polynomial extensions `A ⊗ Q[h]` are built on top of either.

mod cochain;
mod extension;
mod morphism;
pub(crate) mod presentation;

pub use cochain::{bar, build_free_cdga, build_table_algebra, CochainAlgebra, Element, Presentation, PresentationKind};
pub use extension::{cartan_model_trivial, tensor_polynomial_generator};
pub use morphism::{base_inclusion, build_morphism, AlgebraMorphism, MorphismImages};
pub use presentation::{BasisRef, FreePresentation, GeneratorDecl, Polynomial, TableSpec};
