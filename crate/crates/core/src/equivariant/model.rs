use std::sync::Arc;

use crate::algebra::{base_inclusion, cartan_model_trivial, AlgebraMorphism, CochainAlgebra};
use crate::cohomology::{compute_cohomology, CohomologyClass, CohomologyRing};
use crate::error::{Error, Result};

/// Cartan model `A ⊗ Q[h]` of a trivial circle action on a space modelled
/// by `A`, together with both cohomology rings and the inclusion
/// `a ↦ a ⊗ 1`.
///
/// Class coordinates on the base refer to the canonical class basis, which
/// does not depend on the cap in degrees below it, so classes computed
/// from `A` at its own cap can be passed in directly.
#[derive(Debug, Clone)]
pub struct TrivialCartanModel {
    base_ring: CohomologyRing,
    ring: CohomologyRing,
    inclusion: AlgebraMorphism,
}

/// `c = Σ_j a_j h^j` with `a_j` of degree `n - 2j` in the base ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HCoefficientDecomposition {
    pub degree: usize,
    pub coefficients: Vec<CohomologyClass>,
}

impl HCoefficientDecomposition {
    /// Coefficient of `h^j`, or `None` past the end.
    pub fn coefficient(&self, j: usize) -> Option<&CohomologyClass> {
        self.coefficients.get(j)
    }
}

impl TrivialCartanModel {
    pub fn new(a: &CochainAlgebra, cap: usize) -> Result<Self> {
        let ext = Arc::new(cartan_model_trivial(a, cap)?);
        let inclusion = base_inclusion(ext.clone())?;
        let base_ring = compute_cohomology(inclusion.source().clone())?;
        let ring = compute_cohomology(ext)?;
        Ok(TrivialCartanModel {
            base_ring,
            ring,
            inclusion,
        })
    }

    pub fn cap(&self) -> usize {
        self.ring.algebra().cap()
    }

    pub fn base_ring(&self) -> &CohomologyRing {
        &self.base_ring
    }

    pub fn ring(&self) -> &CohomologyRing {
        &self.ring
    }

    pub fn inclusion(&self) -> &AlgebraMorphism {
        &self.inclusion
    }

    /// `u ⊗ 1`.
    pub fn embed(&self, u: &CohomologyClass) -> Result<CohomologyClass> {
        self.base_ring.apply_induced(&self.inclusion, &self.ring, u)
    }

    /// The class of `h^j`.
    pub fn h_class(&self, j: usize) -> Result<CohomologyClass> {
        self.ring.project(&self.ring.algebra().h_power(j)?)
    }

    /// Splits a class by powers of `h`. Well defined on classes because the
    /// differential preserves the `h`-grading.
    pub fn h_coefficients(&self, c: &CohomologyClass) -> Result<HCoefficientDecomposition> {
        let cochain = self.ring.lift(c)?;
        let coefficients = self
            .ring
            .algebra()
            .split_h_components(&cochain)?
            .iter()
            .map(|part| self.base_ring.project(part))
            .collect::<Result<Vec<_>>>()?;
        Ok(HCoefficientDecomposition {
            degree: c.degree(),
            coefficients,
        })
    }

    /// `Σ_j (a_j ⊗ 1)·h^j`.
    pub fn reconstruct(&self, d: &HCoefficientDecomposition) -> Result<CohomologyClass> {
        let mut acc = self.ring.zero(d.degree)?;
        for (j, a) in d.coefficients.iter().enumerate() {
            if a.degree() + 2 * j != d.degree {
                return Err(Error::DimensionMismatch {
                    context: "h-coefficient degree",
                    expected: d.degree - 2 * j,
                    found: a.degree(),
                });
            }
            let term = self.ring.cup(&self.embed(a)?, &self.h_class(j)?)?;
            acc = self.ring.add(&acc, &term)?;
        }
        Ok(acc)
    }
}
