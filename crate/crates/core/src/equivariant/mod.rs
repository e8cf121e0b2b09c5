//! Transfer of Massey products from a fixed-point component of a circle
//! action to the equivariant cohomology of the whole space.
//!
//! The fixed component `F` carries the trivial action, so its Cartan model
//! is `A ⊗ Q[h]`. Its equivariant normal bundle contributes the Euler class
//! `χ = ∏(c1(L_j) + k_j h)`. The ambient space enters only through a
//! [`HamiltonianTransferDatum`]: restriction and Gysin maps on cohomology,
//! validated rather than derived from geometry.

mod datum;
mod euler;
mod lemmas;
mod model;
mod pipeline;

pub use datum::{DatumCheck, DatumCheckKind, DatumValidation, HamiltonianTransferDatum};
pub use euler::{euler_class, verify_not_zero_divisor, EulerClass, WeightedLineBundle, ZeroDivisorReport};
pub use lemmas::{
    check_lemma_3_1, check_lemma_3_1_embedded, check_lemma_3_2, check_lemma_3_2_in, h_coefficient_comparison,
    required_cap, HCoefficientComparison, Lemma31Outcome, Lemma31Report, Lemma32Report,
};
pub use model::{HCoefficientDecomposition, TrivialCartanModel};
pub use pipeline::{
    resolve_datum, scan_families, theorem_1_1_pipeline, theorem_1_1_pipeline_in, AuditEntry, ConfigurationSummary, DatumSource, FamilySpec,
    ScanConfiguration, ScanFinding, ScanReport, TheoremOutcome, TheoremReport,
};
