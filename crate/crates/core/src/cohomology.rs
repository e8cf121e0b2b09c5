//! Cohomology of a truncated cochain algebra.
//!
//! Degree `n` is computed from `Z^n = ker d_n` and `B^n = im d_{n-1}`, so it
//! needs `d_n`, which exists only for `n < cap`. Degrees up to `cap - 1` are
//! trusted; asking for the top degree is an [`Error::Untrusted`].

use std::sync::Arc;

use crate::algebra::{AlgebraMorphism, CochainAlgebra, Element};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Piece {
    cocycles: Subspace,
    coboundaries: Subspace,
    /// Canonical class representatives: reduced echelon basis of the normal
    /// forms of the cocycles modulo the coboundaries.
    classes: Subspace,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CohomologyClass {
    degree: usize,
    coords: Vector,
}

impl CohomologyClass {
    pub fn new(degree: usize, coords: Vector) -> Self {
        CohomologyClass { degree, coords }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero(&self.coords)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyRing {
    algebra: Arc<CochainAlgebra>,
    pieces: Vec<Piece>,
}

pub fn compute_cohomology(algebra: Arc<CochainAlgebra>) -> Result<CohomologyRing> {
    let cap = algebra.cap();
    let mut pieces = Vec::with_capacity(cap);
    for n in 0..cap {
        let cocycles = algebra.differential_matrix(n)?.kernel_basis();
        let coboundaries = if n == 0 {
            Subspace::zero(algebra.dim(0))
        } else {
            algebra.differential_matrix(n - 1)?.image()
        };
        if !coboundaries.is_subspace_of(&cocycles)? {
            return Err(Error::Inconsistent(format!(
                "coboundaries are not cocycles in degree {n}"
            )));
        }
        let normal_forms = cocycles
            .basis()
            .iter()
            .map(|z| coboundaries.reduce(z))
            .collect::<Result<Vec<_>>>()?;
        let classes = Subspace::span(algebra.dim(n), normal_forms)?;
        pieces.push(Piece {
            cocycles,
            coboundaries,
            classes,
        });
    }
    Ok(CohomologyRing { algebra, pieces })
}

impl CohomologyRing {
    pub fn algebra(&self) -> &Arc<CochainAlgebra> {
        &self.algebra
    }

    /// Highest trusted degree, `cap - 1`.
    pub fn trusted_degree(&self) -> usize {
        self.pieces.len().saturating_sub(1)
    }

    fn piece(&self, degree: usize) -> Result<&Piece> {
        self.pieces.get(degree).ok_or(Error::Untrusted {
            degree,
            trusted: self.trusted_degree(),
        })
    }

    pub fn betti(&self, degree: usize) -> Result<usize> {
        Ok(self.piece(degree)?.classes.dim())
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.classes.dim()).collect()
    }

    pub fn cocycles(&self, degree: usize) -> Result<&Subspace> {
        Ok(&self.piece(degree)?.cocycles)
    }

    pub fn coboundaries(&self, degree: usize) -> Result<&Subspace> {
        Ok(&self.piece(degree)?.coboundaries)
    }

    /// Canonical cocycle representatives of the class basis.
    pub fn class_representatives(&self, degree: usize) -> Result<&[Vector]> {
        Ok(self.piece(degree)?.classes.basis())
    }

    pub fn class(&self, degree: usize, coords: Vector) -> Result<CohomologyClass> {
        let b = self.betti(degree)?;
        if coords.len() != b {
            return Err(Error::DimensionMismatch {
                context: "class coordinates",
                expected: b,
                found: coords.len(),
            });
        }
        Ok(CohomologyClass::new(degree, coords))
    }

    pub fn zero(&self, degree: usize) -> Result<CohomologyClass> {
        Ok(CohomologyClass::new(degree, linalg::zero_vector(self.betti(degree)?)))
    }

    pub fn unit(&self) -> Result<CohomologyClass> {
        self.project(&self.algebra.unit())
    }

    pub fn class_basis(&self, degree: usize) -> Result<Vec<CohomologyClass>> {
        let b = self.betti(degree)?;
        Ok((0..b)
            .map(|i| CohomologyClass::new(degree, linalg::unit_vector(b, i)))
            .collect())
    }

    /// The canonical cocycle representing a class.
    pub fn lift(&self, class: &CohomologyClass) -> Result<Element> {
        let piece = self.piece(class.degree)?;
        if class.coords.len() != piece.classes.dim() {
            return Err(Error::DimensionMismatch {
                context: "class coordinates",
                expected: piece.classes.dim(),
                found: class.coords.len(),
            });
        }
        let mut v = linalg::zero_vector(self.algebra.dim(class.degree));
        for (c, rep) in class.coords.iter().zip(piece.classes.basis()) {
            linalg::axpy(&mut v, c, rep);
        }
        Ok(Element::new(class.degree, v))
    }

    /// The class of a cocycle.
    pub fn project(&self, e: &Element) -> Result<CohomologyClass> {
        let piece = self.piece(e.degree())?;
        if !piece.cocycles.contains(e.coords())? {
            return Err(Error::NotACocycle { degree: e.degree() });
        }
        let normal = piece.coboundaries.reduce(e.coords())?;
        let coords = piece
            .classes
            .coordinates(&normal)?
            .ok_or_else(|| Error::Inconsistent("normal form outside the class span".into()))?;
        Ok(CohomologyClass::new(e.degree(), coords))
    }

    pub fn is_exact(&self, e: &Element) -> Result<bool> {
        self.piece(e.degree())?.coboundaries.contains(e.coords())
    }

    pub fn add(&self, u: &CohomologyClass, v: &CohomologyClass) -> Result<CohomologyClass> {
        if u.degree != v.degree {
            return Err(Error::NotHomogeneous);
        }
        Ok(CohomologyClass::new(u.degree, linalg::add(&u.coords, &v.coords)?))
    }

    pub fn sub(&self, u: &CohomologyClass, v: &CohomologyClass) -> Result<CohomologyClass> {
        if u.degree != v.degree {
            return Err(Error::NotHomogeneous);
        }
        Ok(CohomologyClass::new(u.degree, linalg::sub(&u.coords, &v.coords)?))
    }

    pub fn scale(&self, c: &Scalar, u: &CohomologyClass) -> CohomologyClass {
        CohomologyClass::new(u.degree, linalg::scale(c, &u.coords))
    }

    fn check_product_degree(&self, degree: usize) -> Result<()> {
        if degree > self.trusted_degree() {
            return Err(Error::Untrusted {
                degree,
                trusted: self.trusted_degree(),
            });
        }
        Ok(())
    }

    pub fn cup(&self, u: &CohomologyClass, v: &CohomologyClass) -> Result<CohomologyClass> {
        self.check_product_degree(u.degree + v.degree)?;
        let product = self.algebra.multiply(&self.lift(u)?, &self.lift(v)?)?;
        self.project(&product)
    }

    /// Matrix of `v ↦ u·v` from `H^n` to `H^{n+|u|}`.
    pub fn left_multiplication(&self, u: &CohomologyClass, n: usize) -> Result<Matrix> {
        self.check_product_degree(u.degree + n)?;
        let columns = self
            .class_basis(n)?
            .iter()
            .map(|v| Ok(self.cup(u, v)?.coords))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(&columns, self.betti(u.degree + n)?)
    }

    /// Matrix of `v ↦ v·u` from `H^n` to `H^{n+|u|}`.
    pub fn right_multiplication(&self, u: &CohomologyClass, n: usize) -> Result<Matrix> {
        self.check_product_degree(u.degree + n)?;
        let columns = self
            .class_basis(n)?
            .iter()
            .map(|v| Ok(self.cup(v, u)?.coords))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(&columns, self.betti(u.degree + n)?)
    }

    /// Matrix of the map induced by `f` from `H^n` of this ring to `H^n` of
    /// `target`, which must be the cohomology of `f`'s target.
    pub fn induced_matrix(&self, f: &AlgebraMorphism, target: &CohomologyRing, n: usize) -> Result<Matrix> {
        if f.source().as_ref() != self.algebra.as_ref() || f.target().as_ref() != target.algebra.as_ref() {
            return Err(Error::InvalidMorphism(
                "morphism does not connect the given rings".into(),
            ));
        }
        let columns = self
            .class_basis(n)?
            .iter()
            .map(|u| Ok(target.project(&f.apply(&self.lift(u)?)?)?.coords))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(&columns, target.betti(n)?)
    }

    pub fn apply_induced(&self, f: &AlgebraMorphism, target: &CohomologyRing, u: &CohomologyClass) -> Result<CohomologyClass> {
        target.project(&f.apply(&self.lift(u)?)?)
    }

    /// `[cochain]`, written through the canonical representative.
    pub fn format_class(&self, u: &CohomologyClass) -> String {
        match self.lift(u) {
            Ok(e) if e.is_zero() => "0".to_string(),
            Ok(e) => format!("[{}]", self.algebra.format_element(&e)),
            Err(_) => format!("<class of degree {}>", u.degree),
        }
    }
}

/// Degree-`n` piece of the ideal generated by `generators`: the span of
/// `g·H^{n-|g|}` over all generators with `|g| <= n`.
pub fn ideal_degree_piece(ring: &CohomologyRing, generators: &[CohomologyClass], n: usize) -> Result<Subspace> {
    let ambient = ring.betti(n)?;
    let mut vectors = Vec::new();
    for g in generators {
        if g.degree > n {
            continue;
        }
        let m = ring.left_multiplication(g, n - g.degree)?;
        vectors.extend((0..m.cols()).map(|j| m.column(j)));
    }
    Subspace::span(ambient, vectors)
}
