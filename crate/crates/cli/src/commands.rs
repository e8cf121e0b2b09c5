use std::sync::Arc;

use massey_core::algebra::CochainAlgebra;
use massey_core::cohomology::{compute_cohomology, CohomologyClass, CohomologyRing};
use massey_core::document::{bundles_in, eval_element, parse_document, parse_expr, BundleLine, ConfigBlock, Document};
use massey_core::equivariant::{
    check_lemma_3_1, check_lemma_3_2_in, euler_class, required_cap, resolve_datum, scan_families,
    theorem_1_1_pipeline_in, verify_not_zero_divisor, DatumSource, FamilySpec, Lemma31Outcome, TheoremOutcome, TrivialCartanModel,
    WeightedLineBundle,
};
use massey_core::massey::triple_massey;
use massey_core::{models, Error, Result};
use serde_json::json;

use crate::json;
use crate::report::{Report, Status};

/// A parsed input document plus the defaults implied by how it was named.
#[derive(Debug, Clone)]
pub struct Input {
    pub doc: Document,
    pub default_algebra: Option<String>,
    pub default_config: Option<String>,
}

/// Reads `builtin:<name>` or a file path. `builtin:families` is every
/// bundled config.
pub fn load_input(spec: &str) -> Result<Input> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let doc = models::bundled_document();
        let has_algebra = doc.algebras.iter().any(|a| a.name == name);
        let has_config = doc.configs.iter().any(|c| c.name == name);
        if !has_algebra && !has_config && name != "families" {
            let names: Vec<&str> = models::BUNDLED.iter().map(|(n, _)| *n).collect();
            return Err(Error::InvalidArgument(format!(
                "unknown bundled model `{name}`; available: {}, two_points, sphere_equivariant",
                names.join(", ")
            )));
        }
        return Ok(Input {
            doc,
            default_algebra: has_algebra.then(|| name.to_string()),
            default_config: has_config.then(|| name.to_string()),
        });
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::InvalidArgument(format!("cannot read `{spec}`: {e}")))?;
    Ok(Input {
        doc: parse_document(&text)?,
        default_algebra: None,
        default_config: None,
    })
}

/// Flags shared by the commands that work on a fixed component.
#[derive(Debug, Clone, Default)]
pub struct FixedArgs {
    pub algebra: Option<String>,
    pub config: Option<String>,
    pub cap: Option<usize>,
    /// `C1:WEIGHT` strings.
    pub bundles: Vec<String>,
}

pub fn error_status(e: &Error) -> Status {
    match e {
        Error::Parse(_) => Status::ParseError,
        Error::MasseyUndefined { .. } => Status::Undefined,
        Error::CapTooSmall { .. } => Status::CapTooSmall,
        Error::PremiseViolated(_) => Status::PremiseFailed,
        Error::DatumInvalid(_) => Status::InvalidDatum,
        Error::BudgetExhausted { .. } => Status::BudgetExhausted,
        Error::VerdictDisagreement { .. } | Error::Inconsistent(_) => Status::Failure,
        _ => Status::InvalidInput,
    }
}

pub fn error_report(command: &str, e: &Error) -> Report {
    let mut payload = json!({ "error": e.to_string() });
    match e {
        Error::Parse(p) => {
            payload["line"] = json!(p.line);
            payload["column"] = json!(p.column);
        }
        Error::CapTooSmall { required, given } => {
            payload["required_cap"] = json!(required);
            payload["given_cap"] = json!(given);
        }
        Error::BudgetExhausted {
            budget,
            configurations_done,
            configurations_total,
        } => {
            payload["budget"] = json!(budget);
            payload["configurations_done"] = json!(configurations_done);
            payload["configurations_total"] = json!(configurations_total);
        }
        _ => {}
    }
    Report::new(command, error_status(e), payload)
}

fn run(command: &str, f: impl FnOnce() -> Result<Report>) -> Report {
    f().unwrap_or_else(|e| error_report(command, &e))
}

fn select_algebra(input: &Input, flag: Option<&str>, config: Option<&ConfigBlock>) -> Result<CochainAlgebra> {
    let name = flag
        .or_else(|| config.and_then(|c| c.fixed.as_deref()))
        .or(input.default_algebra.as_deref());
    input.doc.build_algebra(name)
}

fn select_config<'a>(input: &'a Input, flag: Option<&str>) -> Result<Option<&'a ConfigBlock>> {
    match flag.or(input.default_config.as_deref()) {
        Some(name) => input.doc.config(Some(name)).map(Some),
        None => Ok(None),
    }
}

fn recapped(alg: CochainAlgebra, cap: Option<usize>) -> Result<CochainAlgebra> {
    match cap {
        Some(c) if c != alg.cap() => alg.with_cap(c),
        _ => Ok(alg),
    }
}

fn parse_bundle_flag(text: &str) -> Result<BundleLine> {
    let (c1, weight) = text
        .rsplit_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("bundle `{text}` is not of the form C1:WEIGHT")))?;
    let weight = weight
        .trim()
        .parse::<i64>()
        .map_err(|_| Error::InvalidArgument(format!("bundle weight `{}` is not an integer", weight.trim())))?;
    Ok(BundleLine {
        c1: parse_expr(c1)?,
        weight,
        line: 0,
    })
}

/// Parses class expressions in `ring`.
fn classes(ring: &CohomologyRing, texts: &[String]) -> Result<Vec<CohomologyClass>> {
    texts
        .iter()
        .map(|t| {
            let e = eval_element(ring.algebra(), &parse_expr(t)?, None)
                .map_err(|e| Error::InvalidArgument(format!("class `{t}`: {e}")))?;
            ring.project(&e)
                .map_err(|e| Error::InvalidArgument(format!("class `{t}`: {e}")))
        })
        .collect()
}

fn triple_of(v: &[CohomologyClass]) -> [&CohomologyClass; 3] {
    [&v[0], &v[1], &v[2]]
}

struct FixedSetup {
    model: Arc<TrivialCartanModel>,
    bundles: Vec<WeightedLineBundle>,
    datum: DatumSource,
    config: Option<String>,
}

/// Builds the Cartan model of the fixed component. Without overriding
/// flags a named config is used as is; otherwise the cap defaults to what
/// the triple needs.
fn fixed_setup(input: &Input, args: &FixedArgs, triple: &[String]) -> Result<FixedSetup> {
    let config = select_config(input, args.config.as_deref())?;
    if let Some(cfg) = config {
        if args.algebra.is_none() && args.cap.is_none() && args.bundles.is_empty() {
            let conf = input.doc.configuration(cfg)?;
            return Ok(FixedSetup {
                model: conf.model,
                bundles: conf.bundles,
                datum: conf.datum,
                config: Some(cfg.name.clone()),
            });
        }
    }
    let alg = select_algebra(input, args.algebra.as_deref(), config)?;
    let lines = if !args.bundles.is_empty() {
        args.bundles.iter().map(|b| parse_bundle_flag(b)).collect::<Result<Vec<_>>>()?
    } else if let Some(cfg) = config {
        cfg.bundles.clone()
    } else {
        vec![parse_bundle_flag("0:1")?]
    };
    let m = lines.len();
    let degrees = triple
        .iter()
        .map(|t| Ok(eval_element(&alg, &parse_expr(t)?, None)?.degree()))
        .collect::<Result<Vec<_>>>()?;
    let needed = if degrees.len() == 3 {
        required_cap(m, [degrees[0], degrees[1], degrees[2]])
    } else {
        alg.cap() + 2 * m
    };
    let cap = args
        .cap
        .or_else(|| config.and_then(|c| c.equivariant_cap))
        .unwrap_or(needed)
        .max(alg.cap());
    let model = Arc::new(TrivialCartanModel::new(&alg, cap)?);
    let bundles = bundles_in(model.base_ring(), &lines)?;
    Ok(FixedSetup {
        model,
        bundles,
        datum: DatumSource::Tautological,
        config: config.map(|c| c.name.clone()),
    })
}

pub fn cohomology(input: &Input, algebra: Option<&str>, cap: Option<usize>, max_degree: Option<usize>) -> Report {
    run("cohomology", || {
        let alg = recapped(select_algebra(input, algebra, None)?, cap)?;
        let ring = compute_cohomology(Arc::new(alg))?;
        let top = max_degree.map_or(ring.trusted_degree(), |d| d.min(ring.trusted_degree()));
        let mut per_degree = Vec::new();
        for n in 0..=top {
            let basis = ring.class_basis(n)?;
            per_degree.push(json!({
                "degree": n,
                "betti": basis.len(),
                "basis": basis.iter().map(|c| ring.format_class(c)).collect::<Vec<_>>(),
                "representatives": ring.class_representatives(n)?.iter().map(|v| {
                    ring.algebra().format_element(&ring.algebra().element(n, v.clone()).expect("representative fits"))
                }).collect::<Vec<_>>(),
            }));
        }
        let alg = ring.algebra();
        Ok(Report::new(
            "cohomology",
            Status::Ok,
            json!({
                "cap": alg.cap(),
                "trusted_degree": ring.trusted_degree(),
                "dimensions": alg.dims(),
                "betti": ring.betti_numbers()[..=top].to_vec(),
                "degrees": per_degree,
            }),
        ))
    })
}

pub fn massey(input: &Input, algebra: Option<&str>, cap: Option<usize>, triple: &[String]) -> Report {
    run("massey", || {
        let alg = recapped(select_algebra(input, algebra, None)?, cap)?;
        let ring = compute_cohomology(Arc::new(alg))?;
        let c = classes(&ring, triple)?;
        match triple_massey(&ring, &c[0], &c[1], &c[2]) {
            Ok(r) => {
                let status = if r.vanishes() { Status::Vanishes } else { Status::Ok };
                Ok(Report::new("massey", status, json::massey(&ring, &r)))
            }
            Err(Error::MasseyUndefined { left, right }) => {
                let ab = ring.cup(&c[0], &c[1])?;
                let bc = ring.cup(&c[1], &c[2])?;
                Ok(Report::new(
                    "massey",
                    Status::Undefined,
                    json!({
                        "inputs": c.iter().map(|x| json::class(&ring, x)).collect::<Vec<_>>(),
                        "left_cup_product": json::class(&ring, &ab),
                        "right_cup_product": json::class(&ring, &bc),
                        "left_obstructs": left,
                        "right_obstructs": right,
                    }),
                ))
            }
            Err(e) => Err(e),
        }
    })
}

pub fn euler(input: &Input, args: &FixedArgs) -> Report {
    run("euler", || {
        let setup = fixed_setup(input, args, &[])?;
        let model = setup.model.as_ref();
        let chi = euler_class(model, &setup.bundles)?;
        let zd = verify_not_zero_divisor(model.ring(), &chi.class)?;
        let mut payload = json::euler(model, &chi);
        payload["cap"] = json!(model.cap());
        payload["zero_divisor_check"] = json::zero_divisor(model.ring(), &zd);
        Ok(Report::new("euler", Status::Ok, payload))
    })
}

pub fn lemma32(input: &Input, args: &FixedArgs, triple: &[String]) -> Report {
    run("lemma32", || {
        let setup = fixed_setup(input, args, triple)?;
        let model = setup.model.as_ref();
        let c = classes(model.base_ring(), triple)?;
        let r = check_lemma_3_2_in(model, triple_of(&c), &setup.bundles)?;
        let status = if r.non_vanishing { Status::Ok } else { Status::Failure };
        Ok(Report::new("lemma32", status, json::lemma32(model, &r)))
    })
}

pub fn transfer(input: &Input, config: Option<&str>, triple: &[String]) -> Report {
    run("transfer", || {
        let cfg = match select_config(input, config)? {
            Some(c) => c,
            None => input.doc.config(None)?,
        };
        let conf = input.doc.configuration(cfg)?;
        let model = conf.model.as_ref();
        let chi = euler_class(model, &conf.bundles)?;
        let datum = resolve_datum(model.ring(), &chi, conf.datum)?
            .ok_or_else(|| Error::InvalidArgument(format!("config `{}` has no transfer datum", cfg.name)))?;
        let validation = datum.validate()?;
        let mut payload = json!({
            "config": cfg.name,
            "validation": json::validation(&datum, &validation),
        });
        if !validation.is_valid() {
            return Ok(Report::new("transfer", Status::InvalidDatum, payload));
        }
        if triple.is_empty() {
            return Ok(Report::new("transfer", Status::Ok, payload));
        }
        let c = classes(datum.fixed(), triple)?;
        let r = check_lemma_3_1(&datum, triple_of(&c))?;
        payload["lemma"] = json::lemma31(&datum, &r);
        let status = match r.outcome {
            Lemma31Outcome::Confirmed => Status::Ok,
            Lemma31Outcome::Inconclusive => Status::Inconclusive,
            Lemma31Outcome::Contradicted => Status::Failure,
        };
        Ok(Report::new("transfer", status, payload))
    })
}

/// `--datum` values: `none`, `tautological`, `corrupt:N` or `config`.
pub fn theorem11(input: &Input, args: &FixedArgs, triple: &[String], datum: Option<&str>) -> Report {
    run("theorem11", || {
        let setup = fixed_setup(input, args, triple)?;
        let model = setup.model.as_ref();
        let c = classes(model.base_ring(), triple)?;
        let source = match datum {
            None | Some("config") => setup.datum,
            Some("none") => DatumSource::None,
            Some("tautological") => DatumSource::Tautological,
            Some(other) => match other.strip_prefix("corrupt:").map(str::parse::<usize>) {
                Some(Ok(push_degree)) => DatumSource::CorruptedTautological { push_degree },
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown datum `{other}`; use none, tautological, corrupt:N or config"
                    )))
                }
            },
        };
        let kept = source.clone();
        let report = match theorem_1_1_pipeline_in(model, triple_of(&c), &setup.bundles, source) {
            Ok(r) => r,
            Err(Error::DatumInvalid(reason)) => {
                let chi = euler_class(model, &setup.bundles)?;
                let d = resolve_datum(model.ring(), &chi, kept)?.expect("an invalid datum exists");
                let v = d.validate()?;
                return Ok(Report::new(
                    "theorem11",
                    Status::InvalidDatum,
                    json!({"error": reason, "validation": json::validation(&d, &v)}),
                ));
            }
            Err(e) => return Err(e),
        };
        let (status, outcome, reason) = match &report.outcome {
            TheoremOutcome::Confirmed => (Status::Ok, "confirmed", None),
            TheoremOutcome::PremiseFailed(r) => (Status::PremiseFailed, "premise-failed", Some(r.clone())),
            TheoremOutcome::Inconclusive(r) => (Status::Inconclusive, "inconclusive", Some(r.clone())),
        };
        let mut payload = json!({
            "outcome": outcome,
            "reason": reason,
            "config": setup.config,
            "trail": json::trail(&report.trail),
        });
        if let Some(l) = &report.lemma32 {
            payload["lemma32"] = json::lemma32(model, l);
        }
        if let Some(l) = &report.lemma31 {
            let chi = euler_class(model, &setup.bundles)?;
            if let Some(d) = resolve_datum(model.ring(), &chi, kept)? {
                payload["lemma31"] = json::lemma31(&d, l);
            }
        }
        Ok(Report::new("theorem11", status, payload))
    })
}

pub fn scan(input: &Input, budget: usize) -> Report {
    run("scan", || {
        let configs: Vec<&ConfigBlock> = match &input.default_config {
            Some(name) => vec![input.doc.config(Some(name))?],
            None => input.doc.configs.iter().collect(),
        };
        let spec = FamilySpec {
            configurations: configs
                .into_iter()
                .map(|c| input.doc.configuration(c))
                .collect::<Result<_>>()?,
        };
        let r = scan_families(&spec, budget)?;
        let status = if !r.findings.is_empty() {
            Status::Findings
        } else if r.invalid_data() > 0 {
            Status::InvalidDatum
        } else {
            Status::Ok
        };
        let mut payload = json::scan(&r);
        payload["budget"] = json!(budget);
        Ok(Report::new("scan", status, payload))
    })
}
