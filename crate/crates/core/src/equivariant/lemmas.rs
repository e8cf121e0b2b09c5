use crate::algebra::CochainAlgebra;
use crate::cohomology::{ideal_degree_piece, CohomologyClass};
use crate::equivariant::datum::{DatumValidation, HamiltonianTransferDatum};
use crate::equivariant::euler::{euler_class, verify_not_zero_divisor, EulerClass, WeightedLineBundle, ZeroDivisorReport};
use crate::equivariant::model::{HCoefficientDecomposition, TrivialCartanModel};
use crate::error::{Error, Result};
use crate::linalg::AffineCoset;
use crate::massey::{check_functoriality, check_scaling_law, triple_massey, FunctorialityReport, MasseyResult, ScalingReport, Verdict};

/// Smallest cap that keeps `⟨χu,χv,χw⟩` (degree `6m + |u|+|v|+|w| - 1`)
/// inside the trusted range.
pub fn required_cap(m: usize, degrees: [usize; 3]) -> usize {
    6 * m + degrees.iter().sum::<usize>()
}

/// Outcome of comparing `h`-coefficients of `χ²x`.
///
/// The top coefficient of `χ²` is `K² = (∏k_j)²`, so the `h^{2m}` coefficient
/// of `χ²x` is `K²x`. If `χ²x = ua + wb` with `u, w` pulled back from the
/// base, that coefficient would lie in `(u, w)`. The argument fires, i.e.
/// rules out `χ³x ∈ (χu, χw)`, exactly when it does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HCoefficientComparison {
    pub chi_squared_x: HCoefficientDecomposition,
    pub top_power: usize,
    pub top_coefficient: CohomologyClass,
    /// `top_coefficient == K²·x`.
    pub top_is_scaled_x: bool,
    pub x_in_ideal: bool,
    pub top_in_ideal: bool,
    pub fires: bool,
}

pub fn h_coefficient_comparison(
    model: &TrivialCartanModel,
    chi: &EulerClass,
    x: &CohomologyClass,
    u: &CohomologyClass,
    w: &CohomologyClass,
) -> Result<HCoefficientComparison> {
    let ring = model.ring();
    let base = model.base_ring();
    let ex = model.embed(x)?;
    let chi2x = ring.cup(&chi.class, &ring.cup(&chi.class, &ex)?)?;
    let chi_squared_x = model.h_coefficients(&chi2x)?;
    let top_power = 2 * chi.m;
    let top_coefficient = chi_squared_x
        .coefficient(top_power)
        .cloned()
        .ok_or_else(|| Error::Inconsistent("χ²x has no top h-coefficient".into()))?;
    let k2 = &chi.leading * &chi.leading;
    let top_is_scaled_x = top_coefficient == base.scale(&k2, x);
    let ideal = ideal_degree_piece(base, &[u.clone(), w.clone()], x.degree())?;
    let x_in_ideal = ideal.contains(x.coords())?;
    let top_in_ideal = ideal.contains(top_coefficient.coords())?;
    Ok(HCoefficientComparison {
        chi_squared_x,
        top_power,
        top_coefficient,
        top_is_scaled_x,
        x_in_ideal,
        top_in_ideal,
        fires: !top_in_ideal,
    })
}

#[derive(Debug, Clone)]
pub struct Lemma32Report {
    pub cap: usize,
    pub required_cap: usize,
    pub chi: EulerClass,
    pub chi_not_zero_divisor: ZeroDivisorReport,
    /// `⟨u,v,w⟩` in the base ring.
    pub base_product: MasseyResult,
    /// `⟨u,v,w⟩` after `a ↦ a ⊗ 1`, via functoriality.
    pub embedding: FunctorialityReport,
    /// `h^0`-projection of the embedded coset equals the base coset.
    pub embedding_projects_back: bool,
    pub embedded_non_vanishing: bool,
    /// `⟨χu,χv,χw⟩`.
    pub scaled_product: MasseyResult,
    /// The non-ideal element `x` of `⟨u,v,w⟩` used as the witness seed.
    pub x: CohomologyClass,
    pub chi_cubed_x: CohomologyClass,
    /// `χ⟨u,v,w⟩ ⊆ ⟨χu,v,w⟩`, then slot 2, then slot 3.
    pub scaling_steps: Vec<ScalingReport>,
    pub scaling_chain_holds: bool,
    pub witness_in_coset: bool,
    pub witness_in_ideal: bool,
    pub comparison: HCoefficientComparison,
    pub non_vanishing: bool,
}

/// Checks that `⟨χu,χv,χw⟩` does not vanish in the Cartan model of a
/// trivial action, given that `⟨u,v,w⟩` does not vanish in `H(a)`.
pub fn check_lemma_3_2(
    a: &CochainAlgebra,
    triple: [&CohomologyClass; 3],
    bundles: &[WeightedLineBundle],
    cap: usize,
) -> Result<Lemma32Report> {
    let model = TrivialCartanModel::new(a, cap.max(a.cap()))?;
    check_lemma_3_2_in(&model, triple, bundles)
}

/// Same as [`check_lemma_3_2`] on an already built model.
pub fn check_lemma_3_2_in(
    model: &TrivialCartanModel,
    [u, v, w]: [&CohomologyClass; 3],
    bundles: &[WeightedLineBundle],
) -> Result<Lemma32Report> {
    let m = bundles.len();
    let cap = model.cap();
    let required = required_cap(m, [u.degree(), v.degree(), w.degree()]);
    if cap < required {
        return Err(Error::CapTooSmall {
            required,
            given: cap,
        });
    }
    let ring = model.ring();
    let base = model.base_ring();

    let base_product = match triple_massey(base, u, v, w) {
        Ok(r) if r.vanishes() => {
            return Err(Error::PremiseViolated(format!(
                "⟨{}, {}, {}⟩ vanishes",
                base.format_class(u),
                base.format_class(v),
                base.format_class(w)
            )))
        }
        Ok(r) => r,
        Err(Error::MasseyUndefined { left, right }) => {
            return Err(Error::PremiseViolated(format!(
                "⟨{}, {}, {}⟩ is not defined: {}",
                base.format_class(u),
                base.format_class(v),
                base.format_class(w),
                Error::MasseyUndefined { left, right }
            )))
        }
        Err(e) => return Err(e),
    };

    let embedding = check_functoriality(model.inclusion(), base, ring, &base_product)?;
    let embedded_non_vanishing = !embedding.target.vanishes();
    let embedding_projects_back = {
        let coset = embedding.target.coset();
        let project = |c: &[crate::scalar::Scalar]| -> Result<Vec<crate::scalar::Scalar>> {
            let class = CohomologyClass::new(base_product.degree, c.to_vec());
            let d = model.h_coefficients(&class)?;
            Ok(d.coefficients[0].coords().to_vec())
        };
        let point = project(coset.point())?;
        let direction = coset
            .direction()
            .basis()
            .iter()
            .map(|b| project(b))
            .collect::<Result<Vec<_>>>()?;
        let projected = AffineCoset::new(
            point,
            crate::linalg::Subspace::span(base.betti(base_product.degree)?, direction)?,
        )?
        .canonical();
        projected == base_product.coset().canonical()
    };

    let chi = euler_class(model, bundles)?;
    let chi_not_zero_divisor = verify_not_zero_divisor(ring, &chi.class)?;

    let (eu, ev, ew) = (model.embed(u)?, model.embed(v)?, model.embed(w)?);
    let times_chi = |c: &CohomologyClass| ring.cup(&chi.class, c);
    let scaled_product = triple_massey(ring, &times_chi(&eu)?, &times_chi(&ev)?, &times_chi(&ew)?)?;

    let x = base_product.representative.clone();
    let ex = model.embed(&x)?;
    let chi_cubed_x = times_chi(&times_chi(&times_chi(&ex)?)?)?;

    let mut scaling_steps = Vec::with_capacity(3);
    let mut current = embedding.target.clone();
    let mut chain_coset = current.coset().canonical();
    let mut chain_holds = true;
    for slot in 1..=3 {
        let step = check_scaling_law(ring, &chi.class, &current, slot)?;
        chain_holds &= step.contained;
        chain_coset = step.target.coset().canonical();
        current = step.target.clone();
        scaling_steps.push(step);
    }
    let scaling_chain_holds = chain_holds && chain_coset == scaled_product.coset().canonical();

    let witness_in_coset = scaled_product.coset().contains(chi_cubed_x.coords())?;
    let ideal = ideal_degree_piece(ring, &[times_chi(&eu)?, times_chi(&ew)?], chi_cubed_x.degree())?;
    let witness_in_ideal = ideal.contains(chi_cubed_x.coords())?;

    let comparison = h_coefficient_comparison(model, &chi, &x, u, w)?;
    if comparison.fires == comparison.x_in_ideal || !comparison.top_is_scaled_x {
        return Err(Error::Inconsistent(
            "h-coefficient comparison disagrees with direct ideal membership of x".into(),
        ));
    }
    if chi_not_zero_divisor.holds && comparison.fires && witness_in_ideal {
        return Err(Error::Inconsistent(
            "h-coefficient comparison fired but χ³x lies in (χu, χw)".into(),
        ));
    }

    let non_vanishing = scaled_product.verdict() == Verdict::DoesNotVanish
        && witness_in_coset
        && !witness_in_ideal
        && embedded_non_vanishing;

    Ok(Lemma32Report {
        cap,
        required_cap: required,
        chi,
        chi_not_zero_divisor,
        base_product,
        embedding,
        embedding_projects_back,
        embedded_non_vanishing,
        scaled_product,
        x,
        chi_cubed_x,
        scaling_steps,
        scaling_chain_holds,
        witness_in_coset,
        witness_in_ideal,
        comparison,
        non_vanishing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma31Outcome {
    /// Downstairs product does not vanish and neither does the ambient one.
    Confirmed,
    /// `⟨χu,χv,χw⟩` vanishes, so the lemma says nothing.
    Inconclusive,
    /// Downstairs product does not vanish but the ambient one does.
    Contradicted,
}

impl Lemma31Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Lemma31Outcome::Confirmed => "confirmed",
            Lemma31Outcome::Inconclusive => "inconclusive",
            Lemma31Outcome::Contradicted => "contradicted",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Lemma31Report {
    pub validation: DatumValidation,
    pub pushed: [CohomologyClass; 3],
    /// `restrict(push u · push v)` and `χu·χv`; both must vanish.
    pub left_product_restricted: CohomologyClass,
    pub left_product_downstairs: CohomologyClass,
    pub right_product_restricted: CohomologyClass,
    pub right_product_downstairs: CohomologyClass,
    /// Products computed directly in the ambient ring.
    pub left_product_direct_zero: bool,
    pub right_product_direct_zero: bool,
    pub downstairs: MasseyResult,
    pub ambient: MasseyResult,
    pub restricted_image: AffineCoset,
    pub containment: bool,
    pub outcome: Lemma31Outcome,
}

/// Transfers `⟨χu,χv,χw⟩` from the fixed ring to `⟨push u, push v, push w⟩`
/// in the ambient ring.
pub fn check_lemma_3_1(
    datum: &HamiltonianTransferDatum,
    [u, v, w]: [&CohomologyClass; 3],
) -> Result<Lemma31Report> {
    let validation = datum.validate()?;
    if !validation.is_valid() {
        return Err(Error::DatumInvalid(format!(
            "failed checks: {}",
            validation.failure_summary()
        )));
    }
    let fixed = datum.fixed();
    let ambient = datum.ambient();
    let chi = &datum.chi().class;
    let times_chi = |c: &CohomologyClass| fixed.cup(chi, c);
    let (cu, cv, cw) = (times_chi(u)?, times_chi(v)?, times_chi(w)?);

    let downstairs = triple_massey(fixed, &cu, &cv, &cw)?;

    let pushed = [datum.push(u)?, datum.push(v)?, datum.push(w)?];
    let [pu, pv, pw] = &pushed;
    let left_up = ambient.cup(pu, pv)?;
    let right_up = ambient.cup(pv, pw)?;
    let left_product_restricted = datum.restrict(&left_up)?;
    let right_product_restricted = datum.restrict(&right_up)?;
    let left_product_downstairs = fixed.cup(&cu, &cv)?;
    let right_product_downstairs = fixed.cup(&cv, &cw)?;
    if left_product_restricted != left_product_downstairs || right_product_restricted != right_product_downstairs {
        return Err(Error::Inconsistent(
            "restriction of pushed products differs from the χ-scaled products".into(),
        ));
    }

    let ambient_product = triple_massey(ambient, pu, pv, pw)?;
    let restricted_image = ambient_product
        .coset()
        .image(datum.restrict_matrix(ambient_product.degree)?)?
        .canonical();
    let containment = restricted_image.is_contained_in(&downstairs.coset())?;

    let outcome = match (downstairs.verdict(), ambient_product.verdict()) {
        (Verdict::Vanishes, _) => Lemma31Outcome::Inconclusive,
        (Verdict::DoesNotVanish, Verdict::DoesNotVanish) => Lemma31Outcome::Confirmed,
        (Verdict::DoesNotVanish, Verdict::Vanishes) => Lemma31Outcome::Contradicted,
    };

    Ok(Lemma31Report {
        validation,
        pushed: pushed.clone(),
        left_product_restricted,
        left_product_downstairs,
        right_product_restricted,
        right_product_downstairs,
        left_product_direct_zero: left_up.is_zero(),
        right_product_direct_zero: right_up.is_zero(),
        downstairs,
        ambient: ambient_product,
        restricted_image,
        containment,
        outcome,
    })
}

/// [`check_lemma_3_1`] for classes of the base algebra of a Cartan model,
/// embedded first. The datum's fixed ring must be the model's ring.
pub fn check_lemma_3_1_embedded(
    datum: &HamiltonianTransferDatum,
    model: &TrivialCartanModel,
    [u, v, w]: [&CohomologyClass; 3],
) -> Result<Lemma31Report> {
    if datum.fixed().algebra().as_ref() != model.ring().algebra().as_ref() {
        return Err(Error::DatumMismatch(
            "the datum's fixed ring is not the Cartan model's ring".into(),
        ));
    }
    let (eu, ev, ew) = (model.embed(u)?, model.embed(v)?, model.embed(w)?);
    check_lemma_3_1(datum, [&eu, &ev, &ew])
}
