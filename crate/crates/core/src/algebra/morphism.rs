use std::sync::Arc;

use crate::algebra::cochain::{CochainAlgebra, Element, Presentation};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

/// Images defining a morphism.
#[derive(Debug, Clone)]
pub enum MorphismImages {
    /// Image of each generator of a free source, in declaration order.
    Generators(Vec<Element>),
    /// Matrix per degree `0..=min(source cap, target cap)`.
    Basis(Vec<Matrix>),
}

/// A degree-preserving, unit-preserving, multiplicative chain map, stored
/// as one matrix per degree up to the smaller of the two caps.
#[derive(Debug, Clone)]
pub struct AlgebraMorphism {
    source: Arc<CochainAlgebra>,
    target: Arc<CochainAlgebra>,
    maps: Vec<Matrix>,
}

impl AlgebraMorphism {
    pub fn source(&self) -> &Arc<CochainAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CochainAlgebra> {
        &self.target
    }

    /// Highest degree on which the morphism is defined.
    pub fn top_degree(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn matrix(&self, degree: usize) -> Result<&Matrix> {
        self.maps.get(degree).ok_or(Error::CapOverflow {
            degree,
            cap: self.top_degree(),
        })
    }

    pub fn apply(&self, a: &Element) -> Result<Element> {
        let m = self.matrix(a.degree())?;
        Ok(Element::new(a.degree(), m.mul_vec(a.coords())?))
    }

    pub fn identity(a: Arc<CochainAlgebra>) -> Self {
        let maps = (0..=a.cap()).map(|n| Matrix::identity(a.dim(n))).collect();
        AlgebraMorphism {
            source: a.clone(),
            target: a,
            maps,
        }
    }
}

/// Builds a morphism from generator or basis images and verifies unit
/// preservation, multiplicativity and compatibility with the differentials
/// on every basis vector within the common cap.
pub fn build_morphism(
    source: Arc<CochainAlgebra>,
    target: Arc<CochainAlgebra>,
    images: MorphismImages,
) -> Result<AlgebraMorphism> {
    let top = source.cap().min(target.cap());
    let maps = match images {
        MorphismImages::Basis(maps) => {
            if maps.len() != top + 1 {
                return Err(Error::DimensionMismatch {
                    context: "morphism matrices",
                    expected: top + 1,
                    found: maps.len(),
                });
            }
            for (n, m) in maps.iter().enumerate() {
                if m.rows() != target.dim(n) || m.cols() != source.dim(n) {
                    return Err(Error::InvalidMorphism(format!(
                        "matrix in degree {n} has shape {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        target.dim(n),
                        source.dim(n)
                    )));
                }
            }
            maps
        }
        MorphismImages::Generators(images) => generator_maps(&source, &target, &images, top)?,
    };
    let f = AlgebraMorphism {
        source,
        target,
        maps,
    };
    verify(&f)?;
    Ok(f)
}

fn generator_maps(
    source: &CochainAlgebra,
    target: &CochainAlgebra,
    images: &[Element],
    top: usize,
) -> Result<Vec<Matrix>> {
    let Presentation::Free {
        presentation,
        monomials,
    } = source.presentation()
    else {
        return Err(Error::InvalidMorphism(
            "generator images need a free source".into(),
        ));
    };
    let gens = &presentation.generators;
    if images.len() != gens.len() {
        return Err(Error::DimensionMismatch {
            context: "generator images",
            expected: gens.len(),
            found: images.len(),
        });
    }
    for (g, img) in gens.iter().zip(images) {
        if g.degree <= top && (img.degree() != g.degree || img.coords().len() != target.dim(g.degree)) {
            return Err(Error::InvalidMorphism(format!(
                "image of `{}` must be an element of degree {}",
                g.name, g.degree
            )));
        }
    }
    let mut maps = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut columns: Vec<Vector> = Vec::with_capacity(source.dim(n));
        for m in &monomials[n] {
            let mut acc = target.unit();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    acc = target.multiply(&acc, &images[k])?;
                }
            }
            columns.push(acc.into_coords());
        }
        maps.push(Matrix::from_columns(&columns, target.dim(n))?);
    }
    Ok(maps)
}

fn verify(f: &AlgebraMorphism) -> Result<()> {
    let (src, tgt) = (&f.source, &f.target);
    let top = f.top_degree();
    let fail = |msg: String| Err(Error::InvalidMorphism(msg));

    if f.apply(&src.unit())? != tgt.unit() {
        return fail("unit is not preserved".into());
    }

    if let Some(gens) = src.generators() {
        for g in gens.iter().filter(|g| g.degree < top) {
            let e = src.named_element(&g.name).expect("generator label");
            if f.apply(&src.differential(&e)?)? != tgt.differential(&f.apply(&e)?)? {
                return fail(format!("f(d{0}) != d(f({0}))", g.name));
            }
        }
    }

    for n in 0..top {
        for i in 0..src.dim(n) {
            let e = src.basis_element(n, i)?;
            if f.apply(&src.differential(&e)?)? != tgt.differential(&f.apply(&e)?)? {
                return fail(format!(
                    "f(d({0})) != d(f({0}))",
                    src.labels(n)[i]
                ));
            }
        }
    }

    for p in 0..=top {
        for q in 0..=top - p {
            for i in 0..src.dim(p) {
                let a = src.basis_element(p, i)?;
                let fa = f.apply(&a)?;
                for j in 0..src.dim(q) {
                    let b = src.basis_element(q, j)?;
                    let lhs = f.apply(&src.multiply(&a, &b)?)?;
                    let rhs = tgt.multiply(&fa, &f.apply(&b)?)?;
                    if lhs != rhs {
                        return fail(format!(
                            "f({0}*{1}) != f({0})*f({1})",
                            src.labels(p)[i],
                            src.labels(q)[j]
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The inclusion `a ↦ a ⊗ 1` of the base of a polynomial extension.
pub fn base_inclusion(extension: Arc<CochainAlgebra>) -> Result<AlgebraMorphism> {
    let base = extension
        .extension_base()
        .ok_or_else(|| Error::InvalidArgument("algebra is not a polynomial extension".into()))?
        .clone();
    let maps = (0..=extension.cap())
        .map(|n| extension.base_inclusion_matrix(n))
        .collect::<Result<Vec<_>>>()?;
    build_morphism(Arc::new(base), extension, MorphismImages::Basis(maps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_free_cdga, cartan_model_trivial, GeneratorDecl, Polynomial};

    fn heisenberg() -> Arc<CochainAlgebra> {
        Arc::new(
            build_free_cdga(
                vec![
                    GeneratorDecl::new("x", 1),
                    GeneratorDecl::new("y", 1),
                    GeneratorDecl::new("z", 1),
                ],
                vec![
                    Polynomial::zero(),
                    Polynomial::zero(),
                    Polynomial::term(1, vec![0, 1]),
                ],
                3,
            )
            .unwrap(),
        )
    }

    #[test]
    fn identity_is_valid() {
        let a = heisenberg();
        let maps = (0..=3).map(|n| Matrix::identity(a.dim(n))).collect();
        build_morphism(a.clone(), a, MorphismImages::Basis(maps)).unwrap();
    }

    #[test]
    fn inclusion_into_extension() {
        let a = heisenberg();
        let ext = Arc::new(cartan_model_trivial(&a, 7).unwrap());
        let f = base_inclusion(ext).unwrap();
        assert_eq!(f.top_degree(), 7);
        for n in 0..=7 {
            assert!(f.matrix(n).unwrap().is_injective());
        }
    }

    #[test]
    fn killing_z_breaks_chain_map() {
        let a = heisenberg();
        let x = a.named_element("x").unwrap();
        let y = a.named_element("y").unwrap();
        let zero = a.zero(1).unwrap();
        let err = build_morphism(a.clone(), a, MorphismImages::Generators(vec![x, y, zero])).unwrap_err();
        match err {
            Error::InvalidMorphism(msg) => assert!(msg.contains("dz"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn generator_images_swap() {
        // x -> y, y -> x, z -> -z is a chain map since d(-z) = -xy = yx
        let a = heisenberg();
        let x = a.named_element("x").unwrap();
        let y = a.named_element("y").unwrap();
        let z = a.named_element("z").unwrap();
        let mz = a.scale(&crate::scalar::Scalar::from(-1), &z);
        let f = build_morphism(a.clone(), a.clone(), MorphismImages::Generators(vec![y, x, mz])).unwrap();
        let xy = a.named_element("x*y").unwrap();
        assert_eq!(f.apply(&xy).unwrap(), a.scale(&crate::scalar::Scalar::from(-1), &xy));
    }
}
