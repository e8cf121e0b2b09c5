use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// A linear subspace of `Q^n`, stored by its reduced row-echelon basis.
///
/// The stored basis is canonical: two spans are equal iff their `Subspace`
/// values compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| crate::linalg::unit_vector(ambient_dim, i))
            .collect();
        Subspace {
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span(ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        let m = Matrix::from_rows(vectors, ambient_dim)?;
        let (reduced, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| reduced.row(i).to_vec()).collect();
        Ok(Subspace {
            ambient_dim,
            basis,
            pivots,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn check_len(&self, v: &[Scalar], context: &'static str) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Normal form of `v` modulo the subspace: the pivot coordinates are
    /// cleared using the echelon basis.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vector> {
        self.check_len(v, "subspace reduction")?;
        let mut out = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            for (o, bi) in out.iter_mut().zip(b) {
                if !bi.is_zero() {
                    *o -= &(&c * bi);
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(Scalar::is_zero))
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in
    /// the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vector>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "subspace sum",
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, vectors)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image under a linear map.
    pub fn image(&self, map: &Matrix) -> Result<Subspace> {
        let vectors = self
            .basis
            .iter()
            .map(|b| map.mul_vec(b))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(map.rows(), vectors)
    }
}

/// `true` iff `v` lies in the span of `s`.
pub fn member(v: &[Scalar], s: &Subspace) -> Result<bool> {
    s.contains(v)
}

/// A translate `point + direction` of a subspace.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineCoset {
    point: Vector,
    direction: Subspace,
}

impl AffineCoset {
    pub fn new(point: Vector, direction: Subspace) -> Result<Self> {
        if point.len() != direction.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "coset point",
                expected: direction.ambient_dim(),
                found: point.len(),
            });
        }
        Ok(AffineCoset { point, direction })
    }

    pub fn point(&self) -> &[Scalar] {
        &self.point
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    /// Same coset with the point replaced by its normal form modulo the
    /// direction. Equal cosets have equal canonical forms.
    pub fn canonical(&self) -> AffineCoset {
        let point = self
            .direction
            .reduce(&self.point)
            .expect("lengths checked at construction");
        AffineCoset {
            point,
            direction: self.direction.clone(),
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        let diff = crate::linalg::sub(v, &self.point)?;
        self.direction.contains(&diff)
    }

    /// `true` iff the coset intersects `s`.
    pub fn meets(&self, s: &Subspace) -> Result<bool> {
        let widened = self.direction.sum(s)?;
        widened.contains(&self.point)
    }

    pub fn is_contained_in(&self, other: &AffineCoset) -> Result<bool> {
        Ok(self.direction.is_subspace_of(&other.direction)? && other.contains(&self.point)?)
    }

    pub fn image(&self, map: &Matrix) -> Result<AffineCoset> {
        AffineCoset::new(map.mul_vec(&self.point)?, self.direction.image(map)?)
    }

    pub fn scaled_by(&self, c: &Scalar) -> AffineCoset {
        let point = self.point.iter().map(|x| x * c).collect();
        let direction = if c.is_zero() {
            Subspace::zero(self.direction.ambient_dim())
        } else {
            self.direction.clone()
        };
        AffineCoset { point, direction }
    }
}

/// `true` iff `(c.point + span(c.direction))` meets `span(s)`.
pub fn coset_meets(c: &AffineCoset, s: &Subspace) -> Result<bool> {
    c.meets(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unit_vector, vector_from_i64 as v};

    #[test]
    fn membership_examples() {
        let s = Subspace::span(2, vec![v(&[0, 1])]).unwrap();
        assert!(member(&v(&[0, 0]), &s).unwrap());
        assert!(!member(&v(&[1, 0]), &s).unwrap());
        let full = Subspace::span(2, vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert!(member(&v(&[1, 2]), &full).unwrap());
        assert!(member(&v(&[1]), &s).is_err());
    }

    #[test]
    fn coset_examples() {
        let c = AffineCoset::new(v(&[0, 0]), Subspace::span(2, vec![v(&[3, 1])]).unwrap()).unwrap();
        assert!(coset_meets(&c, &Subspace::zero(2)).unwrap());

        let c = AffineCoset::new(unit_vector(2, 0), Subspace::zero(2)).unwrap();
        assert!(!coset_meets(&c, &Subspace::zero(2)).unwrap());

        let c = AffineCoset::new(
            unit_vector(2, 0),
            Subspace::span(2, vec![v(&[1, -1])]).unwrap(),
        )
        .unwrap();
        let s = Subspace::span(2, vec![unit_vector(2, 1)]).unwrap();
        assert!(coset_meets(&c, &s).unwrap());

        assert!(AffineCoset::new(v(&[1]), Subspace::zero(2)).is_err());
    }

    #[test]
    fn canonical_forms_agree() {
        let dir = Subspace::span(3, vec![v(&[1, 1, 0])]).unwrap();
        let a = AffineCoset::new(v(&[2, 0, 5]), dir.clone()).unwrap();
        let b = AffineCoset::new(v(&[0, -2, 5]), dir).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.canonical(), b.canonical());
        assert!(a.is_contained_in(&b).unwrap());
    }

    #[test]
    fn span_is_canonical() {
        let a = Subspace::span(3, vec![v(&[1, 2, 3]), v(&[0, 1, 1])]).unwrap();
        let b = Subspace::span(3, vec![v(&[1, 3, 4]), v(&[2, 4, 6]), v(&[1, 1, 2])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coordinates(&v(&[1, 3, 4])).unwrap(), Some(v(&[1, 3])));
    }
}
