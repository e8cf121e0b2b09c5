//! Bundled example models.

use std::sync::Arc;

use crate::algebra::{build_table_algebra, CochainAlgebra, TableSpec};
use crate::cohomology::compute_cohomology;
use crate::document::{parse_document, Document};
use crate::equivariant::{euler_class, HamiltonianTransferDatum, TrivialCartanModel, WeightedLineBundle};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

pub const HEISENBERG: &str = include_str!("../models/heisenberg.txt");
pub const TORUS: &str = include_str!("../models/torus.txt");
pub const KODAIRA_THURSTON: &str = include_str!("../models/kodaira_thurston.txt");
pub const SPHERE: &str = include_str!("../models/sphere.txt");
pub const TRUNCATED_POLYNOMIAL: &str = include_str!("../models/truncated_polynomial.txt");
pub const POINT: &str = include_str!("../models/point.txt");
pub const SPHERE_ROTATION: &str = include_str!("../models/sphere_rotation.txt");
pub const FAMILIES: &str = include_str!("../models/families.txt");

/// Name and source of every bundled document, in a fixed order.
pub const BUNDLED: &[(&str, &str)] = &[
    ("heisenberg", HEISENBERG),
    ("torus", TORUS),
    ("kodaira_thurston", KODAIRA_THURSTON),
    ("sphere", SPHERE),
    ("truncated_polynomial", TRUNCATED_POLYNOMIAL),
    ("point", POINT),
    ("sphere_rotation", SPHERE_ROTATION),
    ("families", FAMILIES),
];

/// Names of the bundled algebras that can serve as fixed components.
pub const FIXED_MODELS: &[&str] = &[
    "heisenberg",
    "torus",
    "kodaira_thurston",
    "sphere",
    "truncated_polynomial",
    "point",
    "two_points",
];

pub fn bundled_source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// All bundled algebras and configurations in one document. The family
/// file alone only holds configurations.
pub fn bundled_document() -> Document {
    let text: String = BUNDLED.iter().map(|(_, s)| format!("{s}\nend\n")).collect();
    parse_document(&text).expect("bundled models parse")
}

pub fn bundled_algebra(name: &str) -> Result<CochainAlgebra> {
    bundled_document().build_algebra(Some(name))
}

pub fn heisenberg() -> CochainAlgebra {
    bundled_algebra("heisenberg").expect("bundled model builds")
}

pub fn torus() -> CochainAlgebra {
    bundled_algebra("torus").expect("bundled model builds")
}

/// `Q[h,t]/(t^2 - h t)` truncated at `cap`, basis `h^k, t h^(k-1)` in
/// degree `2k`.
pub fn equivariant_sphere(cap: usize) -> Result<CochainAlgebra> {
    let label = |k: usize, with_t: bool| match (k, with_t) {
        (0, false) => "1".to_string(),
        (1, false) => "h".to_string(),
        (k, false) => format!("h{k}"),
        (1, true) => "t".to_string(),
        (2, true) => "th".to_string(),
        (k, true) => format!("th{}", k - 1),
    };
    let labels: Vec<Vec<String>> = (0..=cap)
        .map(|n| match n {
            0 => vec![label(0, false)],
            n if n % 2 == 1 => vec![],
            n => vec![label(n / 2, false), label(n / 2, true)],
        })
        .collect();
    let mut spec = TableSpec::new(cap, labels);
    // h^a * h^b = h^(a+b); any product with a t factor is t h^(a+b-1)
    for p in (2..=cap).step_by(2) {
        for q in (2..=cap - p).step_by(2) {
            for i in 0..2 {
                for j in 0..2 {
                    let target = usize::from(i == 1 || j == 1);
                    spec.products
                        .insert(((p, i), (q, j)), linalg::unit_vector(2, target));
                }
            }
        }
    }
    build_table_algebra(spec)
}

/// Which part of the fixed set the rotation datum restricts to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereFixedSet {
    /// Both poles, `H(F) = Q[e]/(e^2 - e)` with `e` the north pole.
    BothPoles,
    /// The north pole only.
    NorthPole,
}

/// The weight-1 rotation of the 2-sphere as a transfer datum with `χ = h`.
///
/// Restriction is localization: `h ↦ (h, h)`, `t ↦ (h, 0)`. The Gysin map
/// sends the class of the north pole to `t` and the south pole to `h - t`.
pub fn sphere_rotation_datum(
    cap: usize,
    fixed_set: SphereFixedSet,
) -> Result<(Arc<TrivialCartanModel>, HamiltonianTransferDatum)> {
    if cap < 3 {
        return Err(Error::InvalidArgument("the rotation datum needs cap >= 3".into()));
    }
    let base_name = match fixed_set {
        SphereFixedSet::BothPoles => "two_points",
        SphereFixedSet::NorthPole => "point",
    };
    let model = Arc::new(TrivialCartanModel::new(&bundled_algebra(base_name)?, cap)?);
    let ambient = compute_cohomology(Arc::new(equivariant_sphere(cap)?))?;
    let fixed = model.ring();
    let chi = euler_class(&model, &[WeightedLineBundle::new(model.base_ring().zero(2)?, 1)])?;
    let trust = ambient.trusted_degree().min(fixed.trusted_degree());

    // Coordinates of `b * h^k` in the fixed ring, b in {1, e}.
    let fixed_class = |k: usize, north_only: bool| -> Result<Vec<crate::Scalar>> {
        let alg = fixed.algebra();
        let b = if north_only && fixed_set == SphereFixedSet::BothPoles {
            alg.named_element("e").expect("two_points has e")
        } else {
            alg.unit()
        };
        let e = alg.multiply(&b, &alg.h_power(k)?)?;
        Ok(fixed.project(&e)?.coords().to_vec())
    };

    let mut restrict = Vec::with_capacity(trust + 1);
    for n in 0..=trust {
        let cols: Vec<Vec<crate::Scalar>> = match n {
            0 => vec![fixed_class(0, false)?],
            n if n % 2 == 1 => vec![],
            n => vec![fixed_class(n / 2, false)?, fixed_class(n / 2, true)?],
        };
        restrict.push(Matrix::from_columns(&cols, fixed.betti(n)?)?);
    }

    // Fixed degree 2k: 1*h^k ↦ h^(k+1), and e*h^k ↦ t h^k.
    let mut push = Vec::new();
    for n in 0..=trust.saturating_sub(2) {
        let rows = ambient.betti(n + 2)?;
        let cols: Vec<Vec<crate::Scalar>> = if n % 2 == 1 {
            vec![]
        } else {
            match fixed_set {
                SphereFixedSet::BothPoles => vec![linalg::unit_vector(rows, 0), linalg::unit_vector(rows, 1)],
                SphereFixedSet::NorthPole => vec![linalg::unit_vector(rows, 1)],
            }
        };
        push.push(Matrix::from_columns(&cols, rows)?);
    }
    let datum = HamiltonianTransferDatum::new(ambient, fixed.clone(), chi, restrict, push)?;
    Ok((model, datum))
}
