//! Triple Massey products, their indeterminacy and the two vanishing tests.
//!
//! For classes `[a], [b], [c]` of degrees `p, q, r` with `[a][b] = [b][c] = 0`
//! choose cochains `x, y` with `dx = ā·b`, `dy = b̄·c` (`ā = (-1)^p a`). Then
//! `ā·y + x̄·c` is a cocycle of degree `p + q + r - 1`; its classes over all
//! choices form the coset `rep + [a]·H^{q+r-1} + H^{p+q-1}·[c]`.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::algebra::{bar, AlgebraMorphism, Element};
use crate::cohomology::{ideal_degree_piece, CohomologyClass, CohomologyRing};
use crate::error::{Error, Result};
use crate::linalg::{AffineCoset, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Vanishes,
    DoesNotVanish,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Vanishes => "vanishes",
            Verdict::DoesNotVanish => "does-not-vanish",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasseyResult {
    pub inputs: [CohomologyClass; 3],
    pub degree: usize,
    /// `x` with `dx = ā·b`.
    pub left_witness: Element,
    /// `y` with `dy = b̄·c`.
    pub right_witness: Element,
    pub representative_cochain: Element,
    pub representative: CohomologyClass,
    pub indeterminacy: Subspace,
    pub zero_test: Verdict,
    pub ideal_test: Verdict,
}

impl MasseyResult {
    pub fn coset(&self) -> AffineCoset {
        AffineCoset::new(self.representative.coords().to_vec(), self.indeterminacy.clone())
            .expect("representative and indeterminacy share the class space")
    }

    /// The common verdict; construction fails when the two tests disagree.
    pub fn verdict(&self) -> Verdict {
        self.zero_test
    }

    pub fn vanishes(&self) -> bool {
        self.verdict() == Verdict::Vanishes
    }
}

fn check_degrees(ring: &CohomologyRing, a: &CohomologyClass, b: &CohomologyClass, c: &CohomologyClass) -> Result<usize> {
    let (p, q, r) = (a.degree(), b.degree(), c.degree());
    if p + q == 0 || q + r == 0 {
        return Err(Error::InvalidArgument(
            "Massey products need |a|+|b| >= 1 and |b|+|c| >= 1".into(),
        ));
    }
    let n = p + q + r - 1;
    if n > ring.trusted_degree() {
        return Err(Error::Untrusted {
            degree: n,
            trusted: ring.trusted_degree(),
        });
    }
    Ok(n)
}

static EVALUATED: AtomicU64 = AtomicU64::new(0);
static DISAGREEMENTS: AtomicU64 = AtomicU64::new(0);

/// Process-wide counts of defined triple products evaluated and of
/// zero-test / ideal-test disagreements among them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerdictStats {
    pub evaluated: u64,
    pub disagreements: u64,
}

pub fn verdict_stats() -> VerdictStats {
    VerdictStats {
        evaluated: EVALUATED.load(Ordering::Relaxed),
        disagreements: DISAGREEMENTS.load(Ordering::Relaxed),
    }
}

/// Canonical `x` with `dx = e`, for an exact `e`.
fn primitive(ring: &CohomologyRing, e: &Element) -> Result<Element> {
    let algebra = ring.algebra();
    let d = algebra.differential_matrix(e.degree() - 1)?;
    let x = d
        .solve(e.coords())?
        .ok_or_else(|| Error::Inconsistent("product class is zero but the cochain is not exact".into()))?;
    Ok(Element::new(e.degree() - 1, x))
}

pub fn triple_massey(
    ring: &CohomologyRing,
    a: &CohomologyClass,
    b: &CohomologyClass,
    c: &CohomologyClass,
) -> Result<MasseyResult> {
    let n = check_degrees(ring, a, b, c)?;
    let left = !ring.cup(a, b)?.is_zero();
    let right = !ring.cup(b, c)?.is_zero();
    if left || right {
        return Err(Error::MasseyUndefined { left, right });
    }
    let algebra = ring.algebra();
    let (la, lb, lc) = (ring.lift(a)?, ring.lift(b)?, ring.lift(c)?);
    let x = primitive(ring, &algebra.multiply(&bar(&la), &lb)?)?;
    let y = primitive(ring, &algebra.multiply(&bar(&lb), &lc)?)?;
    let (w, representative) = representative_cochain(ring, &la, &lc, &x, &y)?;

    let (p, q, r) = (a.degree(), b.degree(), c.degree());
    let from_a = ring.left_multiplication(a, q + r - 1)?.image();
    let from_c = ring.right_multiplication(c, p + q - 1)?.image();
    let indeterminacy = from_a.sum(&from_c)?;

    let coset = AffineCoset::new(representative.coords().to_vec(), indeterminacy.clone())?;
    let zero_test = if coset.meets(&Subspace::zero(ring.betti(n)?))? {
        Verdict::Vanishes
    } else {
        Verdict::DoesNotVanish
    };
    let ideal = ideal_degree_piece(ring, &[a.clone(), c.clone()], n)?;
    let ideal_test = if ideal.contains(representative.coords())? && indeterminacy.is_subspace_of(&ideal)? {
        Verdict::Vanishes
    } else {
        Verdict::DoesNotVanish
    };
    EVALUATED.fetch_add(1, Ordering::Relaxed);
    if zero_test != ideal_test {
        DISAGREEMENTS.fetch_add(1, Ordering::Relaxed);
        return Err(Error::VerdictDisagreement);
    }

    Ok(MasseyResult {
        inputs: [a.clone(), b.clone(), c.clone()],
        degree: n,
        left_witness: x,
        right_witness: y,
        representative_cochain: w,
        representative,
        indeterminacy,
        zero_test,
        ideal_test,
    })
}

fn representative_cochain(
    ring: &CohomologyRing,
    la: &Element,
    lc: &Element,
    x: &Element,
    y: &Element,
) -> Result<(Element, CohomologyClass)> {
    let algebra = ring.algebra();
    let w = algebra.add(
        &algebra.multiply(&bar(la), y)?,
        &algebra.multiply(&bar(x), lc)?,
    )?;
    if !algebra.is_cocycle(&w)? {
        return Err(Error::Inconsistent("Massey representative is not a cocycle".into()));
    }
    let class = ring.project(&w)?;
    Ok((w, class))
}

/// Class of `ā·y + x̄·c` for caller-supplied witnesses, which are checked to
/// satisfy `dx = ā·b` and `dy = b̄·c` for the canonical lifts.
pub fn representative_for_witnesses(
    ring: &CohomologyRing,
    a: &CohomologyClass,
    b: &CohomologyClass,
    c: &CohomologyClass,
    x: &Element,
    y: &Element,
) -> Result<CohomologyClass> {
    check_degrees(ring, a, b, c)?;
    let algebra = ring.algebra();
    let (la, lb, lc) = (ring.lift(a)?, ring.lift(b)?, ring.lift(c)?);
    if algebra.differential(x)? != algebra.multiply(&bar(&la), &lb)? {
        return Err(Error::InvalidArgument("left witness does not satisfy dx = ā·b".into()));
    }
    if algebra.differential(y)? != algebra.multiply(&bar(&lb), &lc)? {
        return Err(Error::InvalidArgument("right witness does not satisfy dy = b̄·c".into()));
    }
    Ok(representative_cochain(ring, &la, &lc, x, y)?.1)
}

/// Outcome of comparing `ξ·⟨a,b,c⟩` with the product that has `ξ` moved into
/// one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingReport {
    pub slot: usize,
    pub scaled_source: AffineCoset,
    pub target: MasseyResult,
    pub contained: bool,
    pub equal: bool,
    pub target_contains_zero: bool,
}

/// Checks `ξ·⟨a,b,c⟩ ⊆ ⟨ξa,b,c⟩`, `⟨a,ξb,c⟩` or `⟨a,b,ξc⟩` for `slot` 1, 2
/// or 3. `ξ` must have even degree so that any representative is central.
pub fn check_scaling_law(
    ring: &CohomologyRing,
    xi: &CohomologyClass,
    r: &MasseyResult,
    slot: usize,
) -> Result<ScalingReport> {
    if xi.degree() % 2 != 0 {
        return Err(Error::NotCentral(xi.degree()));
    }
    let [a, b, c] = &r.inputs;
    let scaled = |u: &CohomologyClass| ring.cup(xi, u);
    let target = match slot {
        1 => triple_massey(ring, &scaled(a)?, b, c)?,
        2 => triple_massey(ring, a, &scaled(b)?, c)?,
        3 => triple_massey(ring, a, b, &scaled(c)?)?,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "slot must be 1, 2 or 3, got {slot}"
            )))
        }
    };
    let m = ring.left_multiplication(xi, r.degree)?;
    let scaled_source = r.coset().image(&m)?.canonical();
    let target_coset = target.coset().canonical();
    let contained = scaled_source.is_contained_in(&target_coset)?;
    let equal = contained && target_coset.is_contained_in(&scaled_source)?;
    let target_contains_zero = target_coset.meets(&Subspace::zero(target_coset.direction().ambient_dim()))?;
    Ok(ScalingReport {
        slot,
        scaled_source,
        target,
        contained,
        equal,
        target_contains_zero,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorialityReport {
    pub image: AffineCoset,
    pub target: MasseyResult,
    pub contained: bool,
    pub equal: bool,
}

/// Checks `f*⟨a,b,c⟩ ⊆ ⟨f*a, f*b, f*c⟩`.
pub fn check_functoriality(
    f: &AlgebraMorphism,
    source: &CohomologyRing,
    target: &CohomologyRing,
    r: &MasseyResult,
) -> Result<FunctorialityReport> {
    let [a, b, c] = &r.inputs;
    let fa = source.apply_induced(f, target, a)?;
    let fb = source.apply_induced(f, target, b)?;
    let fc = source.apply_induced(f, target, c)?;
    let image_triple = triple_massey(target, &fa, &fb, &fc)?;
    let m = source.induced_matrix(f, target, r.degree)?;
    let image = r.coset().image(&m)?.canonical();
    let target_coset = image_triple.coset().canonical();
    let contained = image.is_contained_in(&target_coset)?;
    let equal = contained && target_coset.is_contained_in(&image)?;
    Ok(FunctorialityReport {
        image,
        target: image_triple,
        contained,
        equal,
    })
}
