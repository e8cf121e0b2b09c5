use std::sync::Arc;

use crate::algebra::CochainAlgebra;
use crate::cohomology::{CohomologyClass, CohomologyRing};
use crate::equivariant::datum::HamiltonianTransferDatum;
use crate::equivariant::euler::{euler_class, EulerClass, WeightedLineBundle};
use crate::equivariant::lemmas::{check_lemma_3_1_embedded, check_lemma_3_2_in, required_cap, Lemma31Outcome, Lemma31Report, Lemma32Report};
use crate::equivariant::model::TrivialCartanModel;
use crate::error::{Error, Result};
use crate::massey::triple_massey;

/// Where the transfer datum for the last step comes from.
#[derive(Debug, Clone)]
pub enum DatumSource {
    /// Skip the transfer step.
    None,
    /// Ambient equal to the fixed ring, push equal to multiplication by `χ`.
    Tautological,
    /// The tautological datum with push zeroed in one source degree.
    CorruptedTautological { push_degree: usize },
    /// An explicit datum whose fixed ring must be the Cartan model's ring.
    Explicit(Box<HamiltonianTransferDatum>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub step: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoremOutcome {
    /// Non-vanishing transferred all the way to the ambient ring (or to the
    /// equivariant ring of the fixed component when no datum is given).
    Confirmed,
    /// The input product is undefined or vanishes: nothing to transfer.
    PremiseFailed(String),
    /// The transfer step could not conclude.
    Inconclusive(String),
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub outcome: TheoremOutcome,
    pub trail: Vec<AuditEntry>,
    pub lemma32: Option<Lemma32Report>,
    pub lemma31: Option<Lemma31Report>,
}

fn entry(step: &str, detail: String) -> AuditEntry {
    AuditEntry {
        step: step.to_string(),
        detail,
    }
}

/// Non-vanishing of `⟨u,v,w⟩` in `H(F)`, then in the Cartan model after
/// multiplying by `χ`, then (with a datum) in the ambient ring.
pub fn theorem_1_1_pipeline(
    model_f: &CochainAlgebra,
    triple: [&CohomologyClass; 3],
    bundles: &[WeightedLineBundle],
    cap: usize,
    datum: DatumSource,
) -> Result<TheoremReport> {
    let required = required_cap(bundles.len(), triple.map(CohomologyClass::degree));
    if cap < required {
        return Err(Error::CapTooSmall {
            required,
            given: cap,
        });
    }
    let model = TrivialCartanModel::new(model_f, cap.max(model_f.cap()))?;
    theorem_1_1_pipeline_in(&model, triple, bundles, datum)
}

/// Same as [`theorem_1_1_pipeline`] on an already built Cartan model.
pub fn theorem_1_1_pipeline_in(
    model: &TrivialCartanModel,
    triple: [&CohomologyClass; 3],
    bundles: &[WeightedLineBundle],
    datum: DatumSource,
) -> Result<TheoremReport> {
    let cap = model.cap();
    let required = required_cap(bundles.len(), triple.map(CohomologyClass::degree));
    let mut trail = vec![entry("cap", format!("required {required}, given {cap}"))];
    if cap < required {
        return Err(Error::CapTooSmall {
            required,
            given: cap,
        });
    }
    let lemma32 = match check_lemma_3_2_in(model, triple, bundles) {
        Ok(r) => r,
        Err(Error::PremiseViolated(reason)) => {
            trail.push(entry("fixed-product", reason.clone()));
            return Ok(TheoremReport {
                outcome: TheoremOutcome::PremiseFailed(reason),
                trail,
                lemma32: None,
                lemma31: None,
            });
        }
        Err(e) => return Err(e),
    };
    let base = model.base_ring();
    let ring = model.ring();
    trail.push(entry(
        "fixed-product",
        format!(
            "⟨u,v,w⟩ = {} + span of {} classes, does not vanish",
            base.format_class(&lemma32.base_product.representative),
            lemma32.base_product.indeterminacy.dim()
        ),
    ));
    trail.push(entry(
        "embedding",
        format!(
            "image coset contained: {}, non-vanishing after embedding: {}, h^0 projection recovers the base coset: {}",
            lemma32.embedding.contained, lemma32.embedded_non_vanishing, lemma32.embedding_projects_back
        ),
    ));
    trail.push(entry(
        "euler-class",
        format!(
            "chi = {} (m = {}, leading coefficient {}), not a zero divisor: {}",
            ring.format_class(&lemma32.chi.class),
            lemma32.chi.m,
            lemma32.chi.leading,
            lemma32.chi_not_zero_divisor.holds
        ),
    ));
    trail.push(entry(
        "scaled-product",
        format!(
            "⟨χu,χv,χw⟩ representative {}, indeterminacy dimension {}, verdict {}",
            ring.format_class(&lemma32.scaled_product.representative),
            lemma32.scaled_product.indeterminacy.dim(),
            lemma32.scaled_product.verdict().as_str()
        ),
    ));
    trail.push(entry(
        "witness",
        format!(
            "χ³x = {}, in coset: {}, in (χu, χw): {}, scaling chain holds: {}",
            ring.format_class(&lemma32.chi_cubed_x),
            lemma32.witness_in_coset,
            lemma32.witness_in_ideal,
            lemma32.scaling_chain_holds
        ),
    ));
    trail.push(entry(
        "h-coefficients",
        format!(
            "coefficient of h^{} in χ²x is {}, equals K²x: {}, in (u, w): {}, argument fires: {}",
            lemma32.comparison.top_power,
            base.format_class(&lemma32.comparison.top_coefficient),
            lemma32.comparison.top_is_scaled_x,
            lemma32.comparison.top_in_ideal,
            lemma32.comparison.fires
        ),
    ));
    if !lemma32.non_vanishing {
        return Err(Error::Inconsistent(
            "⟨χu,χv,χw⟩ vanishes although ⟨u,v,w⟩ does not".into(),
        ));
    }

    let Some(datum) = resolve_datum(ring, &lemma32.chi, datum)? else {
        return Ok(TheoremReport {
            outcome: TheoremOutcome::Confirmed,
            trail,
            lemma32: Some(lemma32),
            lemma31: None,
        });
    };

    let lemma31 = check_lemma_3_1_embedded(&datum, model, triple)?;
    trail.push(entry(
        "transfer-datum",
        format!(
            "all checks pass ({})",
            lemma31
                .validation
                .checks
                .iter()
                .map(|c| c.kind.name())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));
    trail.push(entry(
        "ambient-product",
        format!(
            "⟨push u, push v, push w⟩ representative {}, verdict {}, restriction lands in ⟨χu,χv,χw⟩: {}",
            datum.ambient().format_class(&lemma31.ambient.representative),
            lemma31.ambient.verdict().as_str(),
            lemma31.containment
        ),
    ));
    let outcome = match lemma31.outcome {
        Lemma31Outcome::Confirmed => TheoremOutcome::Confirmed,
        Lemma31Outcome::Inconclusive => {
            TheoremOutcome::Inconclusive("⟨χu,χv,χw⟩ vanishes in the datum's fixed ring".into())
        }
        Lemma31Outcome::Contradicted => {
            return Err(Error::Inconsistent(
                "ambient product vanishes although its restriction does not".into(),
            ))
        }
    };
    Ok(TheoremReport {
        outcome,
        trail,
        lemma32: Some(lemma32),
        lemma31: Some(lemma31),
    })
}

/// The concrete datum over `ring` (the Cartan model's ring) with Euler
/// class `chi`, or `None` when the source skips the transfer step.
pub fn resolve_datum(
    ring: &CohomologyRing,
    chi: &EulerClass,
    source: DatumSource,
) -> Result<Option<HamiltonianTransferDatum>> {
    Ok(Some(match source {
        DatumSource::None => return Ok(None),
        DatumSource::Tautological => HamiltonianTransferDatum::tautological(ring.clone(), chi.clone())?,
        DatumSource::CorruptedTautological { push_degree } => {
            HamiltonianTransferDatum::tautological(ring.clone(), chi.clone())?.with_push_zeroed(push_degree)?
        }
        DatumSource::Explicit(d) => {
            if d.fixed().algebra().as_ref() != ring.algebra().as_ref() {
                return Err(Error::DatumMismatch(
                    "the datum's fixed ring is not the Cartan model of the given algebra".into(),
                ));
            }
            if d.chi().class != chi.class {
                return Err(Error::DatumMismatch(
                    "the datum's Euler class differs from the one given by the bundles".into(),
                ));
            }
            *d
        }
    }))
}

/// One configuration of a family scan.
#[derive(Debug, Clone)]
pub struct ScanConfiguration {
    pub name: String,
    pub model: Arc<TrivialCartanModel>,
    /// Chern classes live in `model.base_ring()`.
    pub bundles: Vec<WeightedLineBundle>,
    pub datum: DatumSource,
}

#[derive(Debug, Clone, Default)]
pub struct FamilySpec {
    pub configurations: Vec<ScanConfiguration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanFinding {
    pub configuration: String,
    pub triple: [String; 3],
    pub trail: Vec<AuditEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationSummary {
    pub name: String,
    pub datum_valid: bool,
    pub datum_failures: String,
    pub fixed_non_vanishing: usize,
    pub ambient_checked: usize,
    pub ambient_non_vanishing: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScanReport {
    pub configurations: Vec<ConfigurationSummary>,
    pub findings: Vec<ScanFinding>,
    pub massey_evaluations: usize,
}

impl ScanReport {
    pub fn invalid_data(&self) -> usize {
        self.configurations.iter().filter(|c| !c.datum_valid).count()
    }
}

/// Looks for a fixed component with a non-vanishing triple product whose
/// transferred ambient products all vanish. Theorem-consistent data give no
/// findings. Invalid data are flagged and not searched.
pub fn scan_families(spec: &FamilySpec, budget: usize) -> Result<ScanReport> {
    let mut report = ScanReport::default();
    let total = spec.configurations.len();
    for (done, config) in spec.configurations.iter().enumerate() {
        let summary = scan_one(config, budget, &mut report).map_err(|e| match e {
            Error::BudgetExhausted { budget, .. } => Error::BudgetExhausted {
                budget,
                configurations_done: done,
                configurations_total: total,
            },
            other => other,
        })?;
        report.configurations.push(summary);
    }
    Ok(report)
}

fn spend(report: &mut ScanReport, budget: usize) -> Result<()> {
    if report.massey_evaluations >= budget {
        return Err(Error::BudgetExhausted {
            budget,
            configurations_done: 0,
            configurations_total: 0,
        });
    }
    report.massey_evaluations += 1;
    Ok(())
}

fn scan_one(config: &ScanConfiguration, budget: usize, report: &mut ScanReport) -> Result<ConfigurationSummary> {
    let model = config.model.as_ref();
    let base = model.base_ring();
    let chi = euler_class(model, &config.bundles)?;
    let source = match &config.datum {
        DatumSource::None => DatumSource::Tautological,
        other => other.clone(),
    };
    let datum = resolve_datum(model.ring(), &chi, source)?.expect("a datum source other than None");

    let mut summary = ConfigurationSummary {
        name: config.name.clone(),
        datum_valid: true,
        datum_failures: String::new(),
        fixed_non_vanishing: 0,
        ambient_checked: 0,
        ambient_non_vanishing: 0,
    };
    let validation = datum.validate()?;
    if !validation.is_valid() {
        summary.datum_valid = false;
        summary.datum_failures = validation.failure_summary();
        return Ok(summary);
    }

    let triples = basis_triples(base, chi.m)?;
    let mut non_vanishing_triples = Vec::new();
    for [u, v, w] in triples {
        spend(report, budget)?;
        match triple_massey(base, &u, &v, &w) {
            Ok(r) if !r.vanishes() => non_vanishing_triples.push([u, v, w]),
            Ok(_) | Err(Error::MasseyUndefined { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    summary.fixed_non_vanishing = non_vanishing_triples.len();

    let mut trails = Vec::new();
    for [u, v, w] in &non_vanishing_triples {
        spend(report, budget)?;
        let r = check_lemma_3_1_embedded(&datum, model, [u, v, w])?;
        summary.ambient_checked += 1;
        let names = [base.format_class(u), base.format_class(v), base.format_class(w)];
        let detail = format!(
            "ambient representative {}, verdict {}",
            datum.ambient().format_class(&r.ambient.representative),
            r.ambient.verdict().as_str()
        );
        if !r.ambient.vanishes() {
            summary.ambient_non_vanishing += 1;
        }
        trails.push((names, entry("ambient-product", detail)));
    }
    if summary.fixed_non_vanishing > 0 && summary.ambient_non_vanishing == 0 {
        for (names, e) in trails {
            report.findings.push(ScanFinding {
                configuration: config.name.clone(),
                triple: names,
                trail: vec![e],
            });
        }
    }
    Ok(summary)
}

/// All triples of class-basis elements of positive degree whose transferred
/// product `⟨χu,χv,χw⟩` stays trusted.
fn basis_triples(base: &CohomologyRing, m: usize) -> Result<Vec<[CohomologyClass; 3]>> {
    let trusted = base.trusted_degree();
    let mut by_degree = Vec::new();
    for n in 1..=trusted {
        for c in base.class_basis(n)? {
            by_degree.push(c);
        }
    }
    let mut out = Vec::new();
    for u in &by_degree {
        for v in &by_degree {
            for w in &by_degree {
                let n = u.degree() + v.degree() + w.degree();
                if n - 1 <= trusted && 6 * m + n <= trusted + 1 {
                    out.push([u.clone(), v.clone(), w.clone()]);
                }
            }
        }
    }
    Ok(out)
}
