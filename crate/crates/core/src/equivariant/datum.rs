use crate::cohomology::{CohomologyClass, CohomologyRing};
use crate::equivariant::euler::{verify_not_zero_divisor, EulerClass};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Restriction to a fixed component and the Gysin map back, given on
/// cohomology class coordinates.
///
/// `restrict[n]` maps `H^n(ambient)` to `H^n(fixed)` for `n <= trust`;
/// `push[n]` maps `H^n(fixed)` to `H^{n+2m}(ambient)` for `n + 2m <= trust`,
/// where `trust` is the smaller trusted degree of the two rings.
#[derive(Debug, Clone)]
pub struct HamiltonianTransferDatum {
    ambient: CohomologyRing,
    fixed: CohomologyRing,
    chi: EulerClass,
    restrict: Vec<Matrix>,
    push: Vec<Matrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatumCheckKind {
    RestrictionInjective,
    RestrictionMultiplicative,
    ProjectionFormula,
    EulerNotZeroDivisor,
    GysinInjective,
}

impl DatumCheckKind {
    pub fn name(self) -> &'static str {
        match self {
            DatumCheckKind::RestrictionInjective => "restriction-injective",
            DatumCheckKind::RestrictionMultiplicative => "restriction-multiplicative",
            DatumCheckKind::ProjectionFormula => "projection-formula",
            DatumCheckKind::EulerNotZeroDivisor => "euler-not-zero-divisor",
            DatumCheckKind::GysinInjective => "gysin-injective",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatumCheck {
    pub kind: DatumCheckKind,
    pub passed: bool,
    /// Degrees examined, inclusive.
    pub degrees: Option<(usize, usize)>,
    /// Offending class (in the ring the check is about) and a description.
    pub witness: Option<(CohomologyClass, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatumValidation {
    pub checks: Vec<DatumCheck>,
}

impl DatumValidation {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&DatumCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&self, kind: DatumCheckKind) -> Option<&DatumCheck> {
        self.checks.iter().find(|c| c.kind == kind)
    }

    /// Comma-separated names of the failed checks.
    pub fn failure_summary(&self) -> String {
        self.failures()
            .iter()
            .map(|c| c.kind.name())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl HamiltonianTransferDatum {
    pub fn new(
        ambient: CohomologyRing,
        fixed: CohomologyRing,
        chi: EulerClass,
        restrict: Vec<Matrix>,
        push: Vec<Matrix>,
    ) -> Result<Self> {
        let d = HamiltonianTransferDatum {
            ambient,
            fixed,
            chi,
            restrict,
            push,
        };
        d.check_shapes()?;
        Ok(d)
    }

    /// Ambient equal to the fixed ring, identity restriction, push equal to
    /// multiplication by `χ`.
    pub fn tautological(ring: CohomologyRing, chi: EulerClass) -> Result<Self> {
        let trust = ring.trusted_degree();
        let restrict = (0..=trust)
            .map(|n| Ok(Matrix::identity(ring.betti(n)?)))
            .collect::<Result<Vec<_>>>()?;
        let shift = chi.class.degree();
        let push = (0..=trust.saturating_sub(shift))
            .take_while(|n| n + shift <= trust)
            .map(|n| ring.left_multiplication(&chi.class, n))
            .collect::<Result<Vec<_>>>()?;
        HamiltonianTransferDatum::new(ring.clone(), ring, chi, restrict, push)
    }

    /// Same datum with the Gysin map replaced by zero in source degree `n`.
    pub fn with_push_zeroed(&self, n: usize) -> Result<Self> {
        let mut d = self.clone();
        let m = d.push.get_mut(n).ok_or_else(|| {
            Error::InvalidArgument(format!("push has no degree {n}"))
        })?;
        *m = Matrix::zeros(m.rows(), m.cols());
        Ok(d)
    }

    pub fn ambient(&self) -> &CohomologyRing {
        &self.ambient
    }

    pub fn fixed(&self) -> &CohomologyRing {
        &self.fixed
    }

    pub fn chi(&self) -> &EulerClass {
        &self.chi
    }

    pub fn shift(&self) -> usize {
        self.chi.class.degree()
    }

    /// Highest degree where both rings are trusted.
    pub fn trust(&self) -> usize {
        self.ambient.trusted_degree().min(self.fixed.trusted_degree())
    }

    pub fn restrict_matrix(&self, n: usize) -> Result<&Matrix> {
        self.restrict.get(n).ok_or(Error::Untrusted {
            degree: n,
            trusted: self.trust(),
        })
    }

    pub fn push_matrix(&self, n: usize) -> Result<&Matrix> {
        self.push.get(n).ok_or(Error::Untrusted {
            degree: n + self.shift(),
            trusted: self.trust(),
        })
    }

    pub fn restrict(&self, u: &CohomologyClass) -> Result<CohomologyClass> {
        let m = self.restrict_matrix(u.degree())?;
        Ok(CohomologyClass::new(u.degree(), m.mul_vec(u.coords())?))
    }

    pub fn push(&self, u: &CohomologyClass) -> Result<CohomologyClass> {
        let m = self.push_matrix(u.degree())?;
        Ok(CohomologyClass::new(u.degree() + self.shift(), m.mul_vec(u.coords())?))
    }

    fn check_shapes(&self) -> Result<()> {
        let trust = self.trust();
        let shift = self.shift();
        if self.chi.class.degree() != 2 * self.chi.m {
            return Err(Error::DatumMismatch("Euler class degree is not 2m".into()));
        }
        if self.fixed.betti(self.chi.class.degree()).ok() != Some(self.chi.class.coords().len()) {
            return Err(Error::DatumMismatch(
                "Euler class does not belong to the fixed ring".into(),
            ));
        }
        if self.restrict.len() != trust + 1 {
            return Err(Error::DatumMismatch(format!(
                "restriction needs degrees 0..={trust}, got {} matrices",
                self.restrict.len()
            )));
        }
        let push_len = if shift <= trust { trust - shift + 1 } else { 0 };
        if self.push.len() != push_len {
            return Err(Error::DatumMismatch(format!(
                "Gysin map needs {push_len} source degrees, got {} matrices",
                self.push.len()
            )));
        }
        for (n, m) in self.restrict.iter().enumerate() {
            let (rows, cols) = (self.fixed.betti(n)?, self.ambient.betti(n)?);
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::DatumMismatch(format!(
                    "restrict[{n}] must be {rows}x{cols}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (n, m) in self.push.iter().enumerate() {
            let (rows, cols) = (self.ambient.betti(n + shift)?, self.fixed.betti(n)?);
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::DatumMismatch(format!(
                    "push[{n}] must be {rows}x{cols}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(())
    }

    /// Checks every structural property on all class-basis elements within
    /// the trusted range. The Gysin injectivity check follows the argument
    /// that a kernel vector `x` of push would give `χx = restrict(push x) = 0`.
    pub fn validate(&self) -> Result<DatumValidation> {
        let trust = self.trust();
        let shift = self.shift();
        let mut checks = Vec::new();

        let mut injective = DatumCheck {
            kind: DatumCheckKind::RestrictionInjective,
            passed: true,
            degrees: Some((0, trust)),
            witness: None,
        };
        for (n, m) in self.restrict.iter().enumerate() {
            if let Some(v) = m.kernel_basis().basis().first() {
                let class = CohomologyClass::new(n, v.clone());
                let text = format!(
                    "{} restricts to zero in degree {n}",
                    self.ambient.format_class(&class)
                );
                injective.passed = false;
                injective.witness = Some((class, text));
                break;
            }
        }
        checks.push(injective);

        checks.push(self.check_multiplicative(trust)?);

        let mut projection = DatumCheck {
            kind: DatumCheckKind::ProjectionFormula,
            passed: true,
            degrees: (shift <= trust).then(|| (0, trust - shift)),
            witness: None,
        };
        'outer: for n in 0..self.push.len() {
            for x in self.fixed.class_basis(n)? {
                let lhs = self.restrict(&self.push(&x)?)?;
                let rhs = self.fixed.cup(&self.chi.class, &x)?;
                if lhs != rhs {
                    let text = format!(
                        "restrict(push({})) = {} but chi*x = {}",
                        self.fixed.format_class(&x),
                        self.fixed.format_class(&lhs),
                        self.fixed.format_class(&rhs)
                    );
                    projection.passed = false;
                    projection.witness = Some((x, text));
                    break 'outer;
                }
            }
        }
        checks.push(projection);

        let zd = verify_not_zero_divisor(&self.fixed, &self.chi.class)?;
        checks.push(DatumCheck {
            kind: DatumCheckKind::EulerNotZeroDivisor,
            passed: zd.holds,
            degrees: zd.checked_through.map(|t| (0, t)),
            witness: zd.kernel_witness.map(|x| {
                let text = format!("chi*{} = 0", self.fixed.format_class(&x));
                (x, text)
            }),
        });

        let mut gysin = DatumCheck {
            kind: DatumCheckKind::GysinInjective,
            passed: true,
            degrees: (shift <= trust).then(|| (0, trust - shift)),
            witness: None,
        };
        for (n, m) in self.push.iter().enumerate() {
            if let Some(v) = m.kernel_basis().basis().first() {
                let x = CohomologyClass::new(n, v.clone());
                let chi_x = self.fixed.cup(&self.chi.class, &x)?;
                let via = self.restrict(&self.push(&x)?)?;
                let text = format!(
                    "push({}) = 0, so restrict(push x) = {} while chi*x = {}",
                    self.fixed.format_class(&x),
                    self.fixed.format_class(&via),
                    self.fixed.format_class(&chi_x)
                );
                gysin.passed = false;
                gysin.witness = Some((x, text));
                break;
            }
        }
        checks.push(gysin);

        Ok(DatumValidation { checks })
    }

    fn check_multiplicative(&self, trust: usize) -> Result<DatumCheck> {
        let mut check = DatumCheck {
            kind: DatumCheckKind::RestrictionMultiplicative,
            passed: true,
            degrees: Some((0, trust)),
            witness: None,
        };
        let unit = self.ambient.unit()?;
        if self.restrict(&unit)? != self.fixed.unit()? {
            check.passed = false;
            check.witness = Some((unit, "unit is not restricted to the unit".into()));
            return Ok(check);
        }
        for p in 1..=trust {
            for q in p..=trust - p {
                for u in self.ambient.class_basis(p)? {
                    for v in self.ambient.class_basis(q)? {
                        let lhs = self.restrict(&self.ambient.cup(&u, &v)?)?;
                        let rhs = self.fixed.cup(&self.restrict(&u)?, &self.restrict(&v)?)?;
                        if lhs != rhs {
                            let text = format!(
                                "restrict({}*{}) != restrict({0})*restrict({1})",
                                self.ambient.format_class(&u),
                                self.ambient.format_class(&v)
                            );
                            check.passed = false;
                            check.witness = Some((u, text));
                            return Ok(check);
                        }
                    }
                }
            }
        }
        Ok(check)
    }
}
