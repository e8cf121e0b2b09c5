use crate::algebra::cochain::{empty_product_tables, CochainAlgebra, Element, Presentation};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// `a ⊗ Q[h]` with `h` a central generator of degree 2 and `d(h) = 0`.
///
/// The degree-`n` basis is the concatenation over `j = 0, 1, ...` of the
/// degree-`(n - 2j)` basis of `a` times `h^j`, in that order.
pub fn tensor_polynomial_generator(a: &CochainAlgebra, name: &str, cap: usize) -> Result<CochainAlgebra> {
    if cap < a.cap() {
        return Err(Error::InvalidArgument(format!(
            "extension cap {cap} is below the base cap {}",
            a.cap()
        )));
    }
    let base = a.with_cap(cap)?;
    let offsets: Vec<Vec<usize>> = (0..=cap).map(|n| block_offsets(&base, n)).collect();
    let dims: Vec<usize> = (0..=cap)
        .map(|n| (0..=n / 2).map(|j| base.dim(n - 2 * j)).sum())
        .collect();

    let labels = (0..=cap)
        .map(|n| {
            (0..=n / 2)
                .flat_map(|j| {
                    base.labels(n - 2 * j)
                        .iter()
                        .map(move |l| extension_label(l, name, j))
                })
                .collect()
        })
        .collect();

    let mut products = empty_product_tables(cap, &dims);
    for p in 0..=cap {
        for q in 0..=cap - p {
            let n = p + q;
            for s in 0..=p / 2 {
                let bp = p - 2 * s;
                for t in 0..=q / 2 {
                    let bq = q - 2 * t;
                    let target_offset = offsets[n][s + t];
                    for i in 0..base.dim(bp) {
                        for j in 0..base.dim(bq) {
                            let entry = base.product_entry(bp, i, bq, j);
                            if entry.is_empty() {
                                continue;
                            }
                            let row = offsets[p][s] + i;
                            let col = offsets[q][t] + j;
                            products[p][q][row * dims[q] + col] = entry
                                .iter()
                                .map(|(k, c)| (target_offset + k, c.clone()))
                                .collect();
                        }
                    }
                }
            }
        }
    }

    let mut differentials = Vec::with_capacity(cap);
    for n in 0..cap {
        let mut d = Matrix::zeros(dims[n + 1], dims[n]);
        for j in 0..=n / 2 {
            let bn = n - 2 * j;
            let base_d = base.differential_matrix(bn)?;
            for r in 0..base_d.rows() {
                for c in 0..base_d.cols() {
                    let v = base_d.get(r, c);
                    if !v.is_zero() {
                        d.set(offsets[n + 1][j] + r, offsets[n][j] + c, v.clone());
                    }
                }
            }
        }
        differentials.push(d);
    }

    Ok(CochainAlgebra::from_parts(
        cap,
        Presentation::PolynomialExtension {
            base: Box::new(base),
            generator: name.to_string(),
        },
        labels,
        products,
        differentials,
    ))
}

fn block_offsets(base: &CochainAlgebra, n: usize) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(n / 2 + 1);
    let mut acc = 0;
    for j in 0..=n / 2 {
        offsets.push(acc);
        acc += base.dim(n - 2 * j);
    }
    offsets
}

fn extension_label(base_label: &str, name: &str, j: usize) -> String {
    let power = match j {
        0 => return base_label.to_string(),
        1 => name.to_string(),
        _ => format!("{name}^{j}"),
    };
    if base_label == "1" {
        power
    } else {
        format!("{base_label}*{power}")
    }
}

impl CochainAlgebra {
    /// The base algebra of a polynomial extension (re-capped to this cap).
    pub fn extension_base(&self) -> Option<&CochainAlgebra> {
        match self.presentation() {
            Presentation::PolynomialExtension { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Splits an element of `base ⊗ Q[h]` into its `h^j` components, each an
    /// element of the base algebra of degree `n - 2j`.
    pub fn split_h_components(&self, e: &Element) -> Result<Vec<Element>> {
        let base = self.extension_base().ok_or_else(|| {
            Error::InvalidArgument("algebra is not a polynomial extension".into())
        })?;
        let n = e.degree();
        let coords = self.element(n, e.coords().to_vec())?.into_coords();
        let mut out = Vec::with_capacity(n / 2 + 1);
        let mut offset = 0;
        for j in 0..=n / 2 {
            let len = base.dim(n - 2 * j);
            out.push(Element::new(n - 2 * j, coords[offset..offset + len].to_vec()));
            offset += len;
        }
        Ok(out)
    }

    /// `b ⊗ h^j` for an element `b` of the base algebra.
    pub fn h_component_element(&self, b: &Element, j: usize) -> Result<Element> {
        let base = self.extension_base().ok_or_else(|| {
            Error::InvalidArgument("algebra is not a polynomial extension".into())
        })?;
        let n = b.degree() + 2 * j;
        let mut coords = self.zero(n)?.into_coords();
        let offset: usize = (0..j).map(|i| base.dim(n - 2 * i)).sum();
        let b = base.element(b.degree(), b.coords().to_vec())?;
        for (k, c) in b.coords().iter().enumerate() {
            coords[offset + k] = c.clone();
        }
        Ok(Element::new(n, coords))
    }

    /// `h^j`.
    pub fn h_power(&self, j: usize) -> Result<Element> {
        let base = self.extension_base().ok_or_else(|| {
            Error::InvalidArgument("algebra is not a polynomial extension".into())
        })?;
        self.h_component_element(&base.unit(), j)
    }

    /// Matrix of the inclusion `b ↦ b ⊗ 1` in degree `n`.
    pub fn base_inclusion_matrix(&self, n: usize) -> Result<Matrix> {
        let base = self.extension_base().ok_or_else(|| {
            Error::InvalidArgument("algebra is not a polynomial extension".into())
        })?;
        let mut m = Matrix::zeros(self.dim(n), base.dim(n));
        for i in 0..base.dim(n) {
            m.set(i, i, crate::scalar::Scalar::one());
        }
        Ok(m)
    }
}

/// Same as [`tensor_polynomial_generator`] with the generator named `h`.
/// For a trivial circle action the invariant condition in the Cartan model
/// is vacuous and the Cartan differential is `d ⊗ 1`, so this is the whole
/// model.
pub fn cartan_model_trivial(a: &CochainAlgebra, cap: usize) -> Result<CochainAlgebra> {
    tensor_polynomial_generator(a, "h", cap)
}
