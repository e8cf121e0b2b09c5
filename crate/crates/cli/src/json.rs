//! Conversion of computation results into report payloads.

use massey_core::algebra::{CochainAlgebra, Element};
use massey_core::cohomology::{CohomologyClass, CohomologyRing};
use massey_core::equivariant::{
    AuditEntry, DatumValidation, EulerClass, HCoefficientComparison, HCoefficientDecomposition,
    HamiltonianTransferDatum, Lemma31Report, Lemma32Report, ScanReport, TrivialCartanModel, ZeroDivisorReport,
};
use massey_core::linalg::{AffineCoset, Subspace};
use massey_core::massey::{FunctorialityReport, MasseyResult, ScalingReport};
use massey_core::Scalar;
use serde_json::{json, Value};

pub fn coords(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.to_string())).collect())
}

pub fn class(ring: &CohomologyRing, c: &CohomologyClass) -> Value {
    json!({
        "degree": c.degree(),
        "coords": coords(c.coords()),
        "class": ring.format_class(c),
    })
}

pub fn element(alg: &CochainAlgebra, e: &Element) -> Value {
    json!({
        "degree": e.degree(),
        "coords": coords(e.coords()),
        "cochain": alg.format_element(e),
    })
}

pub fn subspace(ring: &CohomologyRing, degree: usize, s: &Subspace) -> Value {
    Value::Array(
        s.basis()
            .iter()
            .map(|v| class(ring, &CohomologyClass::new(degree, v.clone())))
            .collect(),
    )
}

pub fn coset(ring: &CohomologyRing, degree: usize, c: &AffineCoset) -> Value {
    json!({
        "point": class(ring, &CohomologyClass::new(degree, c.point().to_vec())),
        "direction": subspace(ring, degree, c.direction()),
    })
}

pub fn massey(ring: &CohomologyRing, r: &MasseyResult) -> Value {
    let alg = ring.algebra();
    json!({
        "inputs": r.inputs.iter().map(|c| class(ring, c)).collect::<Vec<_>>(),
        "degree": r.degree,
        "left_witness": element(alg, &r.left_witness),
        "right_witness": element(alg, &r.right_witness),
        "representative_cochain": element(alg, &r.representative_cochain),
        "representative": class(ring, &r.representative),
        "indeterminacy": subspace(ring, r.degree, &r.indeterminacy),
        "zero_test": r.zero_test.as_str(),
        "ideal_test": r.ideal_test.as_str(),
        "verdict": r.verdict().as_str(),
    })
}

pub fn scaling(ring: &CohomologyRing, s: &ScalingReport) -> Value {
    json!({
        "slot": s.slot,
        "scaled_source": coset(ring, s.target.degree, &s.scaled_source),
        "target_representative": class(ring, &s.target.representative),
        "target_indeterminacy": subspace(ring, s.target.degree, &s.target.indeterminacy),
        "contained": s.contained,
        "equal": s.equal,
        "target_contains_zero": s.target_contains_zero,
    })
}

pub fn functoriality(target: &CohomologyRing, f: &FunctorialityReport) -> Value {
    json!({
        "image": coset(target, f.target.degree, &f.image),
        "target_representative": class(target, &f.target.representative),
        "target_indeterminacy": subspace(target, f.target.degree, &f.target.indeterminacy),
        "contained": f.contained,
        "equal": f.equal,
    })
}

pub fn zero_divisor(ring: &CohomologyRing, z: &ZeroDivisorReport) -> Value {
    json!({
        "not_a_zero_divisor": z.holds,
        "checked_through_degree": z.checked_through,
        "first_failing_degree": z.first_failing_degree,
        "kernel_witness": z.kernel_witness.as_ref().map(|c| class(ring, c)),
    })
}

pub fn h_coefficients(base: &CohomologyRing, d: &HCoefficientDecomposition) -> Value {
    Value::Array(
        d.coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| json!({"h_power": j, "coefficient": class(base, c)}))
            .collect(),
    )
}

pub fn euler(model: &TrivialCartanModel, chi: &EulerClass) -> Value {
    let h = model
        .h_coefficients(&chi.class)
        .map(|d| h_coefficients(model.base_ring(), &d))
        .unwrap_or(Value::Null);
    json!({
        "chi": class(model.ring(), &chi.class),
        "m": chi.m,
        "leading_coefficient": chi.leading.to_string(),
        "h_coefficients": h,
    })
}

pub fn comparison(model: &TrivialCartanModel, c: &HCoefficientComparison) -> Value {
    let base = model.base_ring();
    json!({
        "chi_squared_x_h_coefficients": h_coefficients(base, &c.chi_squared_x),
        "top_power": c.top_power,
        "top_coefficient": class(base, &c.top_coefficient),
        "top_is_scaled_x": c.top_is_scaled_x,
        "x_in_ideal_u_w": c.x_in_ideal,
        "top_in_ideal_u_w": c.top_in_ideal,
        "fires": c.fires,
    })
}

pub fn lemma32(model: &TrivialCartanModel, r: &Lemma32Report) -> Value {
    let ring = model.ring();
    let base = model.base_ring();
    json!({
        "cap": r.cap,
        "required_cap": r.required_cap,
        "euler_class": euler(model, &r.chi),
        "euler_class_zero_divisor_check": zero_divisor(ring, &r.chi_not_zero_divisor),
        "base_product": massey(base, &r.base_product),
        "embedding": functoriality(ring, &r.embedding),
        "embedding_projects_back": r.embedding_projects_back,
        "embedded_non_vanishing": r.embedded_non_vanishing,
        "scaled_product": massey(ring, &r.scaled_product),
        "x": class(base, &r.x),
        "chi_cubed_x": class(ring, &r.chi_cubed_x),
        "chi_cubed_x_h_coefficients": model
            .h_coefficients(&r.chi_cubed_x)
            .map(|d| h_coefficients(base, &d))
            .unwrap_or(Value::Null),
        "scaling_steps": r.scaling_steps.iter().map(|s| scaling(ring, s)).collect::<Vec<_>>(),
        "scaling_chain_holds": r.scaling_chain_holds,
        "witness_in_coset": r.witness_in_coset,
        "witness_in_ideal_chi_u_chi_w": r.witness_in_ideal,
        "h_coefficient_comparison": comparison(model, &r.comparison),
        "non_vanishing": r.non_vanishing,
    })
}

pub fn validation(datum: &HamiltonianTransferDatum, v: &DatumValidation) -> Value {
    json!({
        "valid": v.is_valid(),
        "trusted_degree": datum.trust(),
        "gysin_shift": datum.shift(),
        "checks": v.checks.iter().map(|c| json!({
            "check": c.kind.name(),
            "passed": c.passed,
            "degrees": c.degrees.map(|(a, b)| vec![a, b]),
            "witness": c.witness.as_ref().map(|(class, text)| json!({
                "degree": class.degree(),
                "coords": coords(class.coords()),
                "detail": text,
            })),
        })).collect::<Vec<_>>(),
    })
}

pub fn lemma31(datum: &HamiltonianTransferDatum, r: &Lemma31Report) -> Value {
    let fixed = datum.fixed();
    let ambient = datum.ambient();
    json!({
        "validation": validation(datum, &r.validation),
        "pushed": r.pushed.iter().map(|c| class(ambient, c)).collect::<Vec<_>>(),
        "left_product_restricted": class(fixed, &r.left_product_restricted),
        "left_product_downstairs": class(fixed, &r.left_product_downstairs),
        "right_product_restricted": class(fixed, &r.right_product_restricted),
        "right_product_downstairs": class(fixed, &r.right_product_downstairs),
        "left_product_direct_zero": r.left_product_direct_zero,
        "right_product_direct_zero": r.right_product_direct_zero,
        "downstairs": massey(fixed, &r.downstairs),
        "ambient": massey(ambient, &r.ambient),
        "restricted_image": coset(fixed, r.downstairs.degree, &r.restricted_image),
        "containment": r.containment,
        "outcome": r.outcome.as_str(),
    })
}

pub fn trail(entries: &[AuditEntry]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| json!({"step": e.step, "detail": e.detail}))
            .collect(),
    )
}

pub fn scan(r: &ScanReport) -> Value {
    json!({
        "configurations": r.configurations.iter().map(|c| json!({
            "name": c.name,
            "datum_valid": c.datum_valid,
            "datum_failures": c.datum_failures,
            "fixed_non_vanishing": c.fixed_non_vanishing,
            "ambient_checked": c.ambient_checked,
            "ambient_non_vanishing": c.ambient_non_vanishing,
        })).collect::<Vec<_>>(),
        "findings": r.findings.iter().map(|f| json!({
            "configuration": f.configuration,
            "triple": f.triple,
            "trail": trail(&f.trail),
        })).collect::<Vec<_>>(),
        "invalid_data": r.invalid_data(),
        "massey_evaluations": r.massey_evaluations,
    })
}
