//! Exact dense linear algebra over the rationals.
//!
//! Everything here is deterministic: row reduction always pivots on the
//! leftmost nonzero column, and particular solutions set free variables to
//! zero, so repeated runs produce identical witnesses.

mod matrix;
mod subspace;

pub use matrix::Matrix;
pub use subspace::{coset_meets, member, AffineCoset, Subspace};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coordinate vector.
pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn vector_from_i64(values: &[i64]) -> Vector {
    values.iter().map(|&x| Scalar::from(x)).collect()
}

pub fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

fn check_same_len(a: &[Scalar], b: &[Scalar]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            context: "vector arithmetic",
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Result<Vector> {
    check_same_len(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| x + y).collect())
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Result<Vector> {
    check_same_len(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| x - y).collect())
}

pub fn scale(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// In-place `acc += c * v`.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    debug_assert_eq!(acc.len(), v.len());
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

/// Writes a vector as `[a, b, c]` with exact rationals.
pub fn format_vector(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::to_string).collect();
    format!("[{}]", parts.join(", "))
}
