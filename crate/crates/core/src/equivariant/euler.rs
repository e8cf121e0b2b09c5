use crate::cohomology::{CohomologyClass, CohomologyRing};
use crate::equivariant::model::TrivialCartanModel;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Scalar;

/// A circle-invariant complex line bundle on the fixed component, reduced to
/// its first Chern class and the weight of the circle action on its fibres.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedLineBundle {
    /// Degree-2 class in the base ring.
    pub c1: CohomologyClass,
    pub weight: i64,
}

impl WeightedLineBundle {
    pub fn new(c1: CohomologyClass, weight: i64) -> Self {
        WeightedLineBundle { c1, weight }
    }
}

/// `χ = ∏_j (c1(L_j) + k_j h)` in the equivariant ring of the fixed component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerClass {
    pub class: CohomologyClass,
    /// Number of line bundles; `χ` has degree `2m`.
    pub m: usize,
    /// `∏_j k_j`, the coefficient of `h^m`.
    pub leading: Scalar,
}

pub fn euler_class(model: &TrivialCartanModel, bundles: &[WeightedLineBundle]) -> Result<EulerClass> {
    for (index, b) in bundles.iter().enumerate() {
        if b.weight == 0 {
            return Err(Error::InvalidBundle {
                index,
                reason: "weight must be nonzero".into(),
            });
        }
        if b.c1.degree() != 2 {
            return Err(Error::InvalidBundle {
                index,
                reason: format!("c1 must have degree 2, found degree {}", b.c1.degree()),
            });
        }
    }
    let m = bundles.len();
    let ring = model.ring();
    if 2 * m > ring.trusted_degree() {
        return Err(Error::Untrusted {
            degree: 2 * m,
            trusted: ring.trusted_degree(),
        });
    }
    let h = model.h_class(1)?;
    let mut chi = ring.unit()?;
    let mut leading = Scalar::one();
    for b in bundles {
        let k = Scalar::from(b.weight);
        let factor = ring.add(&model.embed(&b.c1)?, &ring.scale(&k, &h))?;
        chi = ring.cup(&chi, &factor)?;
        leading *= &k;
    }
    let top = model.h_coefficients(&chi)?;
    let base = model.base_ring();
    if top.coefficient(m) != Some(&base.scale(&leading, &base.unit()?)) {
        return Err(Error::Inconsistent(format!(
            "coefficient of h^{m} in the Euler class is not {leading}"
        )));
    }
    Ok(EulerClass {
        class: chi,
        m,
        leading,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroDivisorReport {
    pub holds: bool,
    /// Highest source degree checked: `trusted - |χ|`.
    pub checked_through: Option<usize>,
    pub first_failing_degree: Option<usize>,
    /// A nonzero class `x` with `χx = 0`, when one exists.
    pub kernel_witness: Option<CohomologyClass>,
}

/// Full column rank of multiplication by `chi` from `H^n` to `H^{n+|χ|}`,
/// for every `n` with `n + |χ|` trusted.
pub fn verify_not_zero_divisor(ring: &CohomologyRing, chi: &CohomologyClass) -> Result<ZeroDivisorReport> {
    let trusted = ring.trusted_degree();
    if chi.degree() > trusted {
        return Ok(ZeroDivisorReport {
            holds: true,
            checked_through: None,
            first_failing_degree: None,
            kernel_witness: None,
        });
    }
    let top = trusted - chi.degree();
    for n in 0..=top {
        let m = ring.left_multiplication(chi, n)?;
        let kernel = m.kernel_basis();
        if let Some(v) = kernel.basis().first() {
            return Ok(ZeroDivisorReport {
                holds: false,
                checked_through: Some(top),
                first_failing_degree: Some(n),
                kernel_witness: Some(CohomologyClass::new(n, Vector::clone(v))),
            });
        }
    }
    Ok(ZeroDivisorReport {
        holds: true,
        checked_through: Some(top),
        first_failing_degree: None,
        kernel_witness: None,
    })
}
