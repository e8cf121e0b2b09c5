use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: usize,
}

impl GeneratorDecl {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        GeneratorDecl {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// A polynomial in the generators of a free presentation, written as a sum
/// of words. Words are ordered products of generator indices; sign
/// normalisation happens when the word is evaluated in an algebra, so
/// `x*x` for odd `x` simply evaluates to zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn generator(index: usize) -> Self {
        Polynomial {
            terms: vec![(Scalar::one(), vec![index])],
        }
    }

    pub fn term(coefficient: impl Into<Scalar>, word: Vec<usize>) -> Self {
        Polynomial {
            terms: vec![(coefficient.into(), word)],
        }
    }

    pub fn plus(mut self, coefficient: impl Into<Scalar>, word: Vec<usize>) -> Self {
        self.terms.push((coefficient.into(), word));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.is_zero())
    }
}

/// Generators together with the differential of each generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreePresentation {
    pub generators: Vec<GeneratorDecl>,
    pub differentials: Vec<Polynomial>,
}

impl FreePresentation {
    pub fn validate_generators(&self, cap: usize) -> Result<()> {
        let mut seen = HashSet::new();
        for g in &self.generators {
            if g.degree == 0 {
                return Err(Error::InvalidGenerator(format!(
                    "`{}` must have positive degree",
                    g.name
                )));
            }
            if !is_identifier(&g.name) {
                return Err(Error::InvalidGenerator(format!(
                    "`{}` is not a valid identifier",
                    g.name
                )));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidGenerator(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
            if g.degree > cap {
                return Err(Error::InvalidGenerator(format!(
                    "`{}` has degree {} above the cap {cap}",
                    g.name, g.degree
                )));
            }
        }
        if self.differentials.len() != self.generators.len() {
            return Err(Error::DimensionMismatch {
                context: "differentials per generator",
                expected: self.generators.len(),
                found: self.differentials.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Reference to a basis vector: `(degree, index)`.
pub type BasisRef = (usize, usize);

/// Raw input for a multiplication-table algebra.
///
/// The algebra is finite dimensional and vanishes above `cap`. Basis vector
/// `(0, 0)` is the unit; its products are filled in automatically when not
/// listed. Any product not listed is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TableSpec {
    pub cap: usize,
    /// Basis labels per degree `0..=cap`.
    pub labels: Vec<Vec<String>>,
    pub products: BTreeMap<(BasisRef, BasisRef), Vector>,
    /// `differentials[n]` maps degree `n` to degree `n + 1`; missing entries
    /// are zero maps.
    pub differentials: Vec<Matrix>,
}

impl TableSpec {
    pub fn new(cap: usize, labels: Vec<Vec<String>>) -> Self {
        TableSpec {
            cap,
            labels,
            products: BTreeMap::new(),
            differentials: Vec::new(),
        }
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.labels.get(degree).map_or(0, Vec::len)
    }

    pub fn with_product(mut self, a: BasisRef, b: BasisRef, result: Vector) -> Self {
        self.products.insert((a, b), result);
        self
    }
}
