use std::collections::HashMap;

use crate::algebra::presentation::{is_identifier, FreePresentation, GeneratorDecl, Polynomial, TableSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::Scalar;

pub(crate) type SparseVec = Vec<(usize, Scalar)>;

/// How an algebra was presented. All presentations share the same internal
/// representation (explicit bases, structure constants and differential
/// matrices); the presentation is kept so the algebra can be rebuilt at a
/// larger cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    /// Free graded-commutative algebra on generators, truncated at the cap.
    Free {
        presentation: FreePresentation,
        /// Exponent vectors per degree, in basis order.
        monomials: Vec<Vec<Vec<u32>>>,
    },
    /// Finite multiplication table; the algebra is zero above the cap.
    Table,
    /// `base ⊗ Q[generator]` with the generator in degree 2.
    PolynomialExtension {
        base: Box<CochainAlgebra>,
        generator: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresentationKind {
    Free,
    Table,
    PolynomialExtension,
}

/// A homogeneous element: a degree and coordinates over that degree's basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    degree: usize,
    coords: Vector,
}

impl Element {
    pub fn new(degree: usize, coords: Vector) -> Self {
        Element { degree, coords }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vector {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero(&self.coords)
    }
}

/// `(-1)^p a` for `a` of degree `p`.
pub fn bar(a: &Element) -> Element {
    if a.degree % 2 == 0 {
        a.clone()
    } else {
        Element::new(a.degree, a.coords.iter().map(|c| -c).collect())
    }
}

/// A graded-commutative differential graded algebra over the rationals,
/// truncated at a degree cap. Operations that would leave `0..=cap` fail
/// with [`Error::CapOverflow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainAlgebra {
    cap: usize,
    presentation: Presentation,
    labels: Vec<Vec<String>>,
    /// `products[p][q][i * dim(q) + j]` is the product of basis vectors
    /// `(p, i)` and `(q, j)` in degree `p + q`.
    products: Vec<Vec<Vec<SparseVec>>>,
    /// `differentials[n]` maps degree `n` into degree `n + 1`, for `n < cap`.
    differentials: Vec<Matrix>,
}

impl CochainAlgebra {
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.labels.get(degree).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.cap).map(|n| self.dim(n)).collect()
    }

    pub fn labels(&self, degree: usize) -> &[String] {
        self.labels.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn kind(&self) -> PresentationKind {
        match self.presentation {
            Presentation::Free { .. } => PresentationKind::Free,
            Presentation::Table => PresentationKind::Table,
            Presentation::PolynomialExtension { .. } => PresentationKind::PolynomialExtension,
        }
    }

    pub fn generators(&self) -> Option<&[GeneratorDecl]> {
        match &self.presentation {
            Presentation::Free { presentation, .. } => Some(&presentation.generators),
            _ => None,
        }
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.cap {
            Err(Error::CapOverflow {
                degree,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    fn check_element(&self, a: &Element) -> Result<()> {
        self.check_degree(a.degree)?;
        if a.coords.len() != self.dim(a.degree) {
            return Err(Error::DimensionMismatch {
                context: "element coordinates",
                expected: self.dim(a.degree),
                found: a.coords.len(),
            });
        }
        Ok(())
    }

    pub fn element(&self, degree: usize, coords: Vector) -> Result<Element> {
        let e = Element::new(degree, coords);
        self.check_element(&e)?;
        Ok(e)
    }

    pub fn zero(&self, degree: usize) -> Result<Element> {
        self.check_degree(degree)?;
        Ok(Element::new(degree, linalg::zero_vector(self.dim(degree))))
    }

    pub fn unit(&self) -> Element {
        Element::new(0, linalg::unit_vector(self.dim(0), 0))
    }

    pub fn basis_element(&self, degree: usize, index: usize) -> Result<Element> {
        self.check_degree(degree)?;
        let dim = self.dim(degree);
        if index >= dim {
            return Err(Error::DimensionMismatch {
                context: "basis index",
                expected: dim,
                found: index,
            });
        }
        Ok(Element::new(degree, linalg::unit_vector(dim, index)))
    }

    /// Looks up a basis vector by its label (generator name, table basis
    /// name, or monomial label such as `x*z`).
    pub fn named_element(&self, name: &str) -> Option<Element> {
        self.labels.iter().enumerate().find_map(|(n, labels)| {
            labels
                .iter()
                .position(|l| l == name)
                .map(|i| Element::new(n, linalg::unit_vector(labels.len(), i)))
        })
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        if a.degree != b.degree {
            return Err(Error::NotHomogeneous);
        }
        Ok(Element::new(a.degree, linalg::add(&a.coords, &b.coords)?))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        if a.degree != b.degree {
            return Err(Error::NotHomogeneous);
        }
        Ok(Element::new(a.degree, linalg::sub(&a.coords, &b.coords)?))
    }

    pub fn scale(&self, c: &Scalar, a: &Element) -> Element {
        Element::new(a.degree, linalg::scale(c, &a.coords))
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        let n = a.degree + b.degree;
        self.check_degree(n)?;
        Ok(Element::new(
            n,
            self.multiply_coords(a.degree, &a.coords, b.degree, &b.coords),
        ))
    }

    pub(crate) fn multiply_coords(&self, p: usize, a: &[Scalar], q: usize, b: &[Scalar]) -> Vector {
        let table = &self.products[p][q];
        let dq = self.dim(q);
        let mut out = linalg::zero_vector(self.dim(p + q));
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, s) in &table[i * dq + j] {
                    out[*k] += &(&c * s);
                }
            }
        }
        out
    }

    /// Matrix of the differential from degree `n` to degree `n + 1`.
    pub fn differential_matrix(&self, n: usize) -> Result<&Matrix> {
        self.differentials.get(n).ok_or(Error::CapOverflow {
            degree: n + 1,
            cap: self.cap,
        })
    }

    pub fn differential(&self, a: &Element) -> Result<Element> {
        self.check_element(a)?;
        let d = self.differential_matrix(a.degree)?;
        Ok(Element::new(a.degree + 1, d.mul_vec(&a.coords)?))
    }

    pub fn is_cocycle(&self, a: &Element) -> Result<bool> {
        Ok(self.differential(a)?.is_zero())
    }

    /// Matrix of left multiplication by `a`, from degree `q` to `|a| + q`.
    pub fn left_multiplication(&self, a: &Element, q: usize) -> Result<Matrix> {
        self.check_element(a)?;
        self.check_degree(a.degree + q)?;
        let columns: Vec<Vector> = (0..self.dim(q))
            .map(|j| {
                self.multiply_coords(a.degree, &a.coords, q, &linalg::unit_vector(self.dim(q), j))
            })
            .collect();
        Matrix::from_columns(&columns, self.dim(a.degree + q))
    }

    pub fn format_element(&self, a: &Element) -> String {
        let labels = self.labels(a.degree);
        let mut out = String::new();
        for (c, label) in a.coords.iter().zip(labels) {
            if c.is_zero() {
                continue;
            }
            let term = if label == "1" {
                c.to_string()
            } else if c.is_one() {
                label.clone()
            } else if (-c).is_one() {
                format!("-{label}")
            } else {
                format!("{c}*{label}")
            };
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }

    /// Rebuilds the algebra with a larger cap. Free presentations are
    /// re-enumerated, tables are padded with zero degrees, polynomial
    /// extensions are rebuilt over the re-capped base.
    pub fn with_cap(&self, cap: usize) -> Result<CochainAlgebra> {
        if cap < self.cap {
            return Err(Error::InvalidArgument(format!(
                "cannot lower the cap from {} to {cap}",
                self.cap
            )));
        }
        if cap == self.cap {
            return Ok(self.clone());
        }
        match &self.presentation {
            Presentation::Free { presentation, .. } => build_free_cdga(
                presentation.generators.clone(),
                presentation.differentials.clone(),
                cap,
            ),
            Presentation::Table => build_table_algebra(self.to_table_spec(cap)),
            Presentation::PolynomialExtension { base, generator } => {
                crate::algebra::tensor_polynomial_generator(base, generator, cap)
            }
        }
    }

    fn to_table_spec(&self, cap: usize) -> TableSpec {
        let mut labels = self.labels.clone();
        labels.resize(cap + 1, Vec::new());
        let mut spec = TableSpec::new(cap, labels);
        for p in 0..=self.cap {
            for q in 0..=self.cap - p {
                let dq = self.dim(q);
                for (idx, entry) in self.products[p][q].iter().enumerate() {
                    let mut v = linalg::zero_vector(self.dim(p + q));
                    for (k, s) in entry {
                        v[*k] = s.clone();
                    }
                    spec.products.insert(((p, idx / dq), (q, idx % dq)), v);
                }
            }
        }
        spec.differentials = self.differentials.clone();
        spec
    }

    /// Exhaustive check of the CDGA axioms on basis vectors: two-sided unit,
    /// graded commutativity, associativity, `d∘d = 0` and the Leibniz rule,
    /// wherever every degree involved stays within the cap. Reports the first
    /// offending basis pair or triple.
    pub fn structural_scan(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidAlgebra(msg));
        if self.dim(0) == 0 {
            return fail("degree 0 is empty, so there is no unit".into());
        }
        let unit = self.unit();
        for n in 0..=self.cap {
            for i in 0..self.dim(n) {
                let b = self.basis_element(n, i)?;
                if self.multiply(&unit, &b)? != b || self.multiply(&b, &unit)? != b {
                    return fail(format!(
                        "`{}` is not a two-sided unit for `{}`",
                        self.labels[0][0], self.labels[n][i]
                    ));
                }
            }
        }

        for p in 0..=self.cap {
            for q in 0..=self.cap - p {
                for i in 0..self.dim(p) {
                    let a = self.basis_element(p, i)?;
                    for j in 0..self.dim(q) {
                        let b = self.basis_element(q, j)?;
                        let ab = self.multiply(&a, &b)?;
                        let ba = self.multiply(&b, &a)?;
                        if ab != self.scale(&Scalar::sign(p * q), &ba) {
                            return fail(format!(
                                "graded commutativity fails for the pair ({}, {})",
                                self.labels[p][i], self.labels[q][j]
                            ));
                        }
                    }
                }
            }
        }

        for p in 0..=self.cap {
            for q in 0..=self.cap - p {
                for r in 0..=self.cap - p - q {
                    for i in 0..self.dim(p) {
                        let a = self.basis_element(p, i)?;
                        for j in 0..self.dim(q) {
                            let b = self.basis_element(q, j)?;
                            let ab = self.multiply(&a, &b)?;
                            for k in 0..self.dim(r) {
                                let c = self.basis_element(r, k)?;
                                let left = self.multiply(&ab, &c)?;
                                let right = self.multiply(&a, &self.multiply(&b, &c)?)?;
                                if left != right {
                                    return fail(format!(
                                        "associativity fails for the triple ({}, {}, {})",
                                        self.labels[p][i], self.labels[q][j], self.labels[r][k]
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }

        for n in 0..self.cap.saturating_sub(1) {
            let dd = self.differentials[n + 1].mul(&self.differentials[n])?;
            if let Some(i) = (0..dd.cols()).find(|&j| !linalg::is_zero(&dd.column(j))) {
                return fail(format!("d(d({})) != 0", self.labels[n][i]));
            }
        }

        for p in 0..self.cap {
            for q in 0..self.cap - p {
                for i in 0..self.dim(p) {
                    let a = self.basis_element(p, i)?;
                    let da = self.differential(&a)?;
                    for j in 0..self.dim(q) {
                        let b = self.basis_element(q, j)?;
                        let lhs = self.differential(&self.multiply(&a, &b)?)?;
                        let first = self.multiply(&da, &b)?;
                        let second = self.multiply(&a, &self.differential(&b)?)?;
                        let rhs = self.add(&first, &self.scale(&Scalar::sign(p), &second))?;
                        if lhs != rhs {
                            return fail(format!(
                                "Leibniz rule fails for the pair ({}, {})",
                                self.labels[p][i], self.labels[q][j]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn from_parts(
        cap: usize,
        presentation: Presentation,
        labels: Vec<Vec<String>>,
        products: Vec<Vec<Vec<SparseVec>>>,
        differentials: Vec<Matrix>,
    ) -> Self {
        CochainAlgebra {
            cap,
            presentation,
            labels,
            products,
            differentials,
        }
    }

    pub(crate) fn product_entry(&self, p: usize, i: usize, q: usize, j: usize) -> &SparseVec {
        &self.products[p][q][i * self.dim(q) + j]
    }
}

fn sparse(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

pub(crate) fn empty_product_tables(cap: usize, dims: &[usize]) -> Vec<Vec<Vec<SparseVec>>> {
    (0..=cap)
        .map(|p| {
            (0..=cap - p)
                .map(|q| vec![SparseVec::new(); dims[p] * dims[q]])
                .collect()
        })
        .collect()
}

fn enumerate_monomials(generators: &[GeneratorDecl], cap: usize) -> Vec<Vec<Vec<u32>>> {
    fn rec(
        k: usize,
        degree: usize,
        generators: &[GeneratorDecl],
        cap: usize,
        exps: &mut Vec<u32>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        if k == generators.len() {
            out[degree].push(exps.clone());
            return;
        }
        let g = &generators[k];
        let max = if g.is_odd() { 1 } else { u32::MAX };
        let mut e = 0u32;
        while e <= max && degree + e as usize * g.degree <= cap {
            exps[k] = e;
            rec(k + 1, degree + e as usize * g.degree, generators, cap, exps, out);
            e += 1;
        }
        exps[k] = 0;
    }
    let mut out = vec![Vec::new(); cap + 1];
    let mut exps = vec![0; generators.len()];
    rec(0, 0, generators, cap, &mut exps, &mut out);
    // degree first (by bucket), then lexicographic in declaration order:
    // larger exponent of an earlier generator comes first
    for bucket in &mut out {
        bucket.sort_by(|a, b| b.cmp(a));
    }
    out
}

fn monomial_label(generators: &[GeneratorDecl], exps: &[u32]) -> String {
    let factors: Vec<String> = generators
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(g, &e)| {
            if e == 1 {
                g.name.clone()
            } else {
                format!("{}^{e}", g.name)
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

/// Product of two monomials with its Koszul sign, or `None` when an odd
/// generator would appear squared.
fn monomial_product(generators: &[GeneratorDecl], a: &[u32], b: &[u32]) -> Option<(Vec<u32>, bool)> {
    let mut out = Vec::with_capacity(a.len());
    for (k, g) in generators.iter().enumerate() {
        let e = a[k] + b[k];
        if g.is_odd() && e > 1 {
            return None;
        }
        out.push(e);
    }
    // move each factor of `b` left past the factors of `a` with larger index
    let mut parity = 0usize;
    for l in 0..generators.len() {
        if b[l] == 0 || !generators[l].is_odd() {
            continue;
        }
        for k in l + 1..generators.len() {
            if generators[k].is_odd() {
                parity += (a[k] * b[l]) as usize;
            }
        }
    }
    Some((out, parity % 2 == 1))
}

/// Builds the free graded-commutative algebra on `generators`, truncated at
/// `cap`, with the differential extended from the generators as a
/// derivation. Verifies `d∘d = 0` on every generator whose square
/// differential lands within the cap.
pub fn build_free_cdga(
    generators: Vec<GeneratorDecl>,
    differentials: Vec<Polynomial>,
    cap: usize,
) -> Result<CochainAlgebra> {
    let presentation = FreePresentation {
        generators,
        differentials,
    };
    presentation.validate_generators(cap)?;
    let gens = &presentation.generators;

    for (g, poly) in gens.iter().zip(&presentation.differentials) {
        for (c, word) in &poly.terms {
            if let Some(&bad) = word.iter().find(|&&k| k >= gens.len()) {
                return Err(Error::InvalidGenerator(format!(
                    "differential of `{}` refers to unknown generator index {bad}",
                    g.name
                )));
            }
            let degree: usize = word.iter().map(|&k| gens[k].degree).sum();
            if !c.is_zero() && degree != g.degree + 1 {
                return Err(Error::IllGradedDifferential {
                    generator: g.name.clone(),
                    expected: g.degree + 1,
                    found: degree,
                });
            }
        }
    }

    let monomials = enumerate_monomials(gens, cap);
    let dims: Vec<usize> = monomials.iter().map(Vec::len).collect();
    let index: Vec<HashMap<&[u32], usize>> = monomials
        .iter()
        .map(|bucket| bucket.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect())
        .collect();
    let labels = monomials
        .iter()
        .map(|bucket| bucket.iter().map(|m| monomial_label(gens, m)).collect())
        .collect();

    let mut products = empty_product_tables(cap, &dims);
    for p in 0..=cap {
        for q in 0..=cap - p {
            for (i, a) in monomials[p].iter().enumerate() {
                for (j, b) in monomials[q].iter().enumerate() {
                    if let Some((m, negative)) = monomial_product(gens, a, b) {
                        let k = index[p + q][m.as_slice()];
                        let s = if negative { -Scalar::one() } else { Scalar::one() };
                        products[p][q][i * dims[q] + j] = vec![(k, s)];
                    }
                }
            }
        }
    }

    let mut algebra = CochainAlgebra::from_parts(
        cap,
        Presentation::Free {
            presentation: presentation.clone(),
            monomials: monomials.clone(),
        },
        labels,
        products,
        Vec::new(),
    );

    let generator_element = |k: usize| -> Element {
        let mut exps = vec![0u32; gens.len()];
        exps[k] = 1;
        let d = gens[k].degree;
        Element::new(d, linalg::unit_vector(dims[d], index[d][exps.as_slice()]))
    };
    let eval_word = |alg: &CochainAlgebra, word: &[usize]| -> Result<Element> {
        let mut acc = alg.unit();
        for &k in word {
            acc = alg.multiply(&acc, &generator_element(k))?;
        }
        Ok(acc)
    };

    let mut generator_differentials: Vec<Option<Element>> = Vec::with_capacity(gens.len());
    for (g, poly) in gens.iter().zip(&presentation.differentials) {
        if g.degree + 1 > cap {
            generator_differentials.push(None);
            continue;
        }
        let mut acc = algebra.zero(g.degree + 1)?;
        for (c, word) in &poly.terms {
            if c.is_zero() {
                continue;
            }
            let term = eval_word(&algebra, word)?;
            acc = algebra.add(&acc, &algebra.scale(c, &term))?;
        }
        generator_differentials.push(Some(acc));
    }

    let mut differentials = Vec::with_capacity(cap);
    for n in 0..cap {
        let mut columns = Vec::with_capacity(dims[n]);
        for m in &monomials[n] {
            let word: Vec<usize> = m
                .iter()
                .enumerate()
                .flat_map(|(k, &e)| std::iter::repeat(k).take(e as usize))
                .collect();
            let mut acc = algebra.zero(n + 1)?;
            let mut prefix_degree = 0;
            for (pos, &k) in word.iter().enumerate() {
                let dg = generator_differentials[k]
                    .as_ref()
                    .expect("generator degree below cap");
                if !dg.is_zero() {
                    let prefix = eval_word(&algebra, &word[..pos])?;
                    let suffix = eval_word(&algebra, &word[pos + 1..])?;
                    let term = algebra.multiply(&algebra.multiply(&prefix, dg)?, &suffix)?;
                    let signed = algebra.scale(&Scalar::sign(prefix_degree), &term);
                    acc = algebra.add(&acc, &signed)?;
                }
                prefix_degree += gens[k].degree;
            }
            columns.push(acc.into_coords());
        }
        differentials.push(Matrix::from_columns(&columns, dims[n + 1])?);
    }
    algebra.differentials = differentials;

    for (g, dg) in gens.iter().zip(&generator_differentials) {
        let Some(dg) = dg else { continue };
        if dg.degree + 1 > cap {
            continue;
        }
        let ddg = algebra.differential(dg)?;
        if !ddg.is_zero() {
            return Err(Error::DifferentialSquareNonzero {
                generator: g.name.clone(),
                residue: algebra.format_element(&ddg),
            });
        }
    }
    Ok(algebra)
}

/// Builds and validates a finite algebra from explicit structure constants.
pub fn build_table_algebra(spec: TableSpec) -> Result<CochainAlgebra> {
    let cap = spec.cap;
    if spec.labels.len() > cap + 1 {
        return Err(Error::InvalidAlgebra(format!(
            "basis given in degree {} above the cap {cap}",
            spec.labels.len() - 1
        )));
    }
    let mut labels = spec.labels.clone();
    labels.resize(cap + 1, Vec::new());
    let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
    if dims[0] == 0 {
        return Err(Error::InvalidAlgebra(
            "degree 0 must contain the unit".into(),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for label in labels.iter().flatten() {
        if !(is_identifier(label) || label == "1") || !seen.insert(label.as_str()) {
            return Err(Error::InvalidAlgebra(format!(
                "basis label `{label}` is invalid or repeated"
            )));
        }
    }

    let mut products = empty_product_tables(cap, &dims);
    for n in 0..=cap {
        for i in 0..dims[n] {
            let e = vec![(i, Scalar::one())];
            products[0][n][i] = e.clone();
            products[n][0][i * dims[0]] = e;
        }
    }
    for (&((p, i), (q, j)), v) in &spec.products {
        if p + q > cap {
            return Err(Error::CapOverflow { degree: p + q, cap });
        }
        if i >= dims[p] || j >= dims[q] {
            return Err(Error::InvalidAlgebra(format!(
                "structure constant refers to a missing basis vector ({p}, {i}) or ({q}, {j})"
            )));
        }
        if v.len() != dims[p + q] {
            return Err(Error::DimensionMismatch {
                context: "structure constant",
                expected: dims[p + q],
                found: v.len(),
            });
        }
        products[p][q][i * dims[q] + j] = sparse(v);
    }

    if spec.differentials.len() > cap {
        return Err(Error::InvalidAlgebra(
            "differential given out of the top degree".into(),
        ));
    }
    let mut differentials = Vec::with_capacity(cap);
    for n in 0..cap {
        let d = match spec.differentials.get(n) {
            Some(d) => {
                if d.rows() != dims[n + 1] || d.cols() != dims[n] {
                    return Err(Error::DimensionMismatch {
                        context: "differential matrix",
                        expected: dims[n + 1] * dims[n],
                        found: d.rows() * d.cols(),
                    });
                }
                d.clone()
            }
            None => Matrix::zeros(dims[n + 1], dims[n]),
        };
        differentials.push(d);
    }

    let algebra = CochainAlgebra::from_parts(cap, Presentation::Table, labels, products, differentials);
    algebra.structural_scan()?;
    Ok(algebra)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(spec: &[(&str, usize)]) -> Vec<GeneratorDecl> {
        spec.iter().map(|&(n, d)| GeneratorDecl::new(n, d)).collect()
    }

    fn heisenberg() -> CochainAlgebra {
        build_free_cdga(
            gens(&[("x", 1), ("y", 1), ("z", 1)]),
            vec![
                Polynomial::zero(),
                Polynomial::zero(),
                Polynomial::term(1, vec![0, 1]),
            ],
            3,
        )
        .unwrap()
    }

    #[test]
    fn exterior_dims() {
        let a = build_free_cdga(gens(&[("x", 1), ("y", 1)]), vec![Polynomial::zero(); 2], 4).unwrap();
        assert_eq!(a.dims(), vec![1, 2, 1, 0, 0]);
        assert_eq!(a.labels(2), &["x*y".to_string()]);
    }

    #[test]
    fn heisenberg_differential() {
        let a = heisenberg();
        assert_eq!(a.labels(2), &["x*y", "x*z", "y*z"]);
        let z = a.named_element("z").unwrap();
        let xy = a.named_element("x*y").unwrap();
        assert_eq!(a.differential(&z).unwrap(), xy);
        let xz = a.named_element("x*z").unwrap();
        assert!(a.differential(&xz).unwrap().is_zero());
        a.structural_scan().unwrap();
    }

    #[test]
    fn odd_square_in_differential_is_zero() {
        let a = build_free_cdga(
            gens(&[("x", 1), ("y", 1), ("z", 1)]),
            vec![
                Polynomial::zero(),
                Polynomial::zero(),
                Polynomial::term(1, vec![0, 0]),
            ],
            3,
        )
        .unwrap();
        let z = a.named_element("z").unwrap();
        assert!(a.differential(&z).unwrap().is_zero());
    }

    #[test]
    fn ill_graded_differential() {
        let err = build_free_cdga(
            gens(&[("x", 1), ("z", 1)]),
            vec![Polynomial::zero(), Polynomial::generator(0)],
            3,
        )
        .unwrap_err();
        assert!(matches!(err, Error::IllGradedDifferential { ref generator, .. } if generator == "z"));
    }

    #[test]
    fn d_squared_nonzero_is_reported() {
        // dw = v, dv = x*v, so d(d(w)) = x*v
        let err = build_free_cdga(
            gens(&[("x", 1), ("v", 2), ("w", 1)]),
            vec![
                Polynomial::zero(),
                Polynomial::term(1, vec![0, 1]),
                Polynomial::generator(1),
            ],
            4,
        )
        .unwrap_err();
        match err {
            Error::DifferentialSquareNonzero { generator, residue } => {
                assert_eq!(generator, "w");
                assert_eq!(residue, "x*v");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn koszul_signs_and_unit() {
        let a = heisenberg();
        let x = a.named_element("x").unwrap();
        let y = a.named_element("y").unwrap();
        let xy = a.multiply(&x, &y).unwrap();
        let yx = a.multiply(&y, &x).unwrap();
        assert_eq!(xy, a.scale(&Scalar::from(-1), &yx));
        assert_eq!(a.multiply(&a.unit(), &x).unwrap(), x);
        assert!(a.multiply(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn bar_signs() {
        let a = heisenberg();
        let x = a.named_element("x").unwrap();
        assert_eq!(bar(&x), a.scale(&Scalar::from(-1), &x));
        let xy = a.named_element("x*y").unwrap();
        assert_eq!(bar(&xy), xy);
        let zero = a.zero(1).unwrap();
        assert_eq!(bar(&zero), zero);
        assert_eq!(bar(&bar(&x)), x);
    }

    #[test]
    fn cap_overflow_is_an_error() {
        let a = heisenberg();
        let xyz = a.named_element("x*y*z").unwrap();
        let x = a.named_element("x").unwrap();
        assert!(matches!(a.multiply(&xyz, &x), Err(Error::CapOverflow { degree: 4, cap: 3 })));
        assert!(matches!(a.differential(&xyz), Err(Error::CapOverflow { .. })));
    }

    #[test]
    fn polynomial_generator_powers() {
        let a = build_free_cdga(gens(&[("u", 2)]), vec![Polynomial::zero()], 6).unwrap();
        assert_eq!(a.dims(), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(a.labels(6), &["u^3"]);
    }

    #[test]
    fn monomial_order_is_degree_lex() {
        let a = build_free_cdga(
            gens(&[("a", 2), ("x", 1), ("y", 1)]),
            vec![Polynomial::zero(); 3],
            4,
        )
        .unwrap();
        assert_eq!(a.labels(2), &["a", "x*y"]);
        assert_eq!(a.labels(3), &["a*x", "a*y"]);
        assert_eq!(a.labels(4), &["a^2", "a*x*y"]);
    }

    fn sphere_spec() -> TableSpec {
        TableSpec::new(2, vec![vec!["1".into()], vec![], vec!["s".into()]])
    }

    #[test]
    fn table_sphere() {
        let a = build_table_algebra(sphere_spec()).unwrap();
        assert_eq!(a.dims(), vec![1, 0, 1]);
        assert_eq!(a.kind(), PresentationKind::Table);
    }

    #[test]
    fn table_truncated_polynomial() {
        let labels = vec![
            vec!["1".into()],
            vec![],
            vec!["u".into()],
            vec![],
            vec!["u2".into()],
            vec![],
            vec!["u3".into()],
        ];
        let one = |n| vec![Scalar::one(); n];
        let spec = TableSpec::new(6, labels)
            .with_product((2, 0), (2, 0), one(1))
            .with_product((2, 0), (4, 0), one(1))
            .with_product((4, 0), (2, 0), one(1));
        let a = build_table_algebra(spec).unwrap();
        assert_eq!(a.dims(), vec![1, 0, 1, 0, 1, 0, 1]);
        let padded = a.with_cap(8).unwrap();
        assert_eq!(padded.dims(), vec![1, 0, 1, 0, 1, 0, 1, 0, 0]);
        let u3 = padded.named_element("u3").unwrap();
        let u = padded.named_element("u").unwrap();
        assert!(padded.multiply(&u3, &u).unwrap().is_zero());
    }

    #[test]
    fn table_rejects_non_commutative_pair() {
        let labels = vec![vec!["1".into()], vec!["a".into(), "b".into()], vec!["ab".into()]];
        let spec = TableSpec::new(2, labels)
            .with_product((1, 0), (1, 1), vec![Scalar::one()])
            .with_product((1, 1), (1, 0), vec![Scalar::one()]);
        let err = build_table_algebra(spec).unwrap_err();
        match err {
            Error::InvalidAlgebra(msg) => assert!(msg.contains("(a, b)"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn table_rejects_product_above_cap() {
        let spec = sphere_spec().with_product((2, 0), (2, 0), vec![]);
        assert!(matches!(build_table_algebra(spec), Err(Error::CapOverflow { .. })));
    }

    #[test]
    fn with_cap_rebuilds_free() {
        let a = heisenberg();
        let b = a.with_cap(6).unwrap();
        assert_eq!(b.dims(), vec![1, 3, 3, 1, 0, 0, 0]);
        assert_eq!(b.labels(2), a.labels(2));
        assert!(a.with_cap(2).is_err());
    }

    #[test]
    fn format() {
        let a = heisenberg();
        let e = a.element(2, vec![Scalar::from(1), Scalar::new(-1, 2), Scalar::from(-1)]).unwrap();
        assert_eq!(a.format_element(&e), "x*y - 1/2*x*z - y*z");
        assert_eq!(a.format_element(&a.zero(1).unwrap()), "0");
        assert_eq!(a.format_element(&a.scale(&Scalar::from(3), &a.unit())), "3");
    }
}
