//! The bitorus inner product induced by the spectral density and the
//! complete orthonormal Laurent-polynomial family it admits.
//!
//! The inner product of real Laurent polynomials is
//! `⟨g,h⟩ = Σ_{α,β} g_α h_β c_{α−β}(r)` (coefficients from module
//! [`crate::coeffs`]); the orthonormal family consists of
//!
//! * the constant `(1−4/r²)^{1/4}`,
//! * the axis families `(1−4/r²)^{1/4}(1−a²)^{−1/2} z_i^k (z_i − a)`,
//!   `k ≥ 0`, for each variable (`a` the in-disk intersecting-zero
//!   component), and
//! * the doubly-indexed family `z1^{k1} z2^{k2} q(z1,z2)` with
//!   `q = z1z2 − z1/r − z2/r` (already unit norm).

use crate::coeffs::{intersecting_zero, CoeffGrid};
use crate::error::{check_r, Error, Result};
use std::collections::BTreeMap;

/// A real Laurent polynomial in two variables: a finite map from integer
/// exponent pairs to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<(i64, i64), f64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(e1: i64, e2: i64, c: f64) -> Self {
        let mut p = Self::zero();
        p.insert(e1, e2, c);
        p
    }

    fn insert(&mut self, e1: i64, e2: i64, c: f64) {
        if c != 0.0 {
            let entry = self.terms.entry((e1, e2)).or_insert(0.0);
            *entry += c;
            if *entry == 0.0 {
                self.terms.remove(&(e1, e2));
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e1: i64, e2: i64) -> f64 {
        self.terms.get(&(e1, e2)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &f64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(e1, e2), &c) in &other.terms {
            out.insert(e1, e2, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero();
        for (&(e1, e2), &c) in &self.terms {
            out.insert(e1, e2, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a1, a2), &ca) in &self.terms {
            for (&(b1, b2), &cb) in &other.terms {
                out.insert(a1 + b1, a2 + b2, ca * cb);
            }
        }
        out
    }

    /// Multiplies by `z1^{d1} z2^{d2}`.
    pub fn shift(&self, d1: i64, d2: i64) -> Self {
        let mut out = Self::zero();
        for (&(e1, e2), &c) in &self.terms {
            out.insert(e1 + d1, e2 + d2, c);
        }
        out
    }

    /// Evaluation at a real point (negative exponents require nonzero
    /// coordinates).
    pub fn eval_real(&self, z1: f64, z2: f64) -> f64 {
        let mut acc = 0.0;
        for (&(e1, e2), &c) in &self.terms {
            acc += c * z1.powi(e1 as i32) * z2.powi(e2 as i32);
        }
        acc
    }

    /// Evaluation at `(e^{iθ}, e^{iφ})`; returns `(re, im)`.
    pub fn eval_torus(&self, theta: f64, phi: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (&(e1, e2), &c) in &self.terms {
            let angle = e1 as f64 * theta + e2 as f64 * phi;
            re += c * angle.cos();
            im += c * angle.sin();
        }
        (re, im)
    }

    /// Exponent ranges `((min_e1, max_e1), (min_e2, max_e2))`; `None` for
    /// the zero polynomial.
    pub fn spread(&self) -> Option<((i64, i64), (i64, i64))> {
        if self.terms.is_empty() {
            return None;
        }
        let mut r1 = (i64::MAX, i64::MIN);
        let mut r2 = (i64::MAX, i64::MIN);
        for &(e1, e2) in self.terms.keys() {
            r1 = (r1.0.min(e1), r1.1.max(e1));
            r2 = (r2.0.min(e2), r2.1.max(e2));
        }
        Some((r1, r2))
    }
}

/// Coefficient-table-backed inner product
/// `⟨g,h⟩ = Σ_{α,β} g_α h_β c_{α−β}(r)`; bilinear, symmetric, positive
/// definite on nonzero polynomials.
pub fn inner_product(g: &LaurentPolynomial, h: &LaurentPolynomial, r: f64) -> Result<f64> {
    check_r(r)?;
    if g.is_zero() || h.is_zero() {
        return Ok(0.0);
    }
    let table = coefficient_table(&[g.clone(), h.clone()], r)?;
    inner_with_table(g, h, &table)
}

/// Builds the immutable coefficient cache covering every exponent
/// difference the operand list can produce.
fn coefficient_table(polys: &[LaurentPolynomial], r: f64) -> Result<CoeffGrid> {
    let mut need = 0i64;
    let mut lo1 = i64::MAX;
    let mut hi1 = i64::MIN;
    let mut lo2 = i64::MAX;
    let mut hi2 = i64::MIN;
    for p in polys {
        if let Some(((a, b), (c, d))) = p.spread() {
            lo1 = lo1.min(a);
            hi1 = hi1.max(b);
            lo2 = lo2.min(c);
            hi2 = hi2.max(d);
        }
    }
    if lo1 <= hi1 {
        need = (hi1 - lo1).max(hi2 - lo2);
    }
    if need > 4096 {
        return Err(Error::resource(format!(
            "inner-product exponent spread {need} exceeds the table guard"
        )));
    }
    CoeffGrid::compute(need as u64, r)
}

fn inner_with_table(
    g: &LaurentPolynomial,
    h: &LaurentPolynomial,
    table: &CoeffGrid,
) -> Result<f64> {
    let mut acc = 0.0f64;
    for (&(a1, a2), &ca) in g.terms() {
        for (&(b1, b2), &cb) in h.terms() {
            let c = table.get(a1 - b1, a2 - b2).ok_or_else(|| {
                Error::domain(format!(
                    "coefficient table does not cover difference ({}, {})",
                    a1 - b1,
                    a2 - b2
                ))
            })?;
            acc += ca * cb * c;
        }
    }
    Ok(acc)
}

/// The reversed polynomial `q(z1,z2) = z1z2 − z1/r − z2/r`, satisfying
/// `p̄(1/z1, 1/z2) = q(z1,z2)/(z1z2)`; vanishes at both intersecting
/// zeros `(a, 1/a)` and `(1/a, a)`.
pub fn reversed_polynomial(r: f64) -> Result<LaurentPolynomial> {
    check_r(r)?;
    let mut q = LaurentPolynomial::zero();
    q.insert(1, 1, 1.0);
    q.insert(1, 0, -1.0 / r);
    q.insert(0, 1, -1.0 / r);
    Ok(q)
}

/// Selector for one element of the orthonormal family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `(1−4/r²)^{1/4}`.
    Constant,
    /// `(1−4/r²)^{1/4}(1−a²)^{−1/2} z1^k (z1−a)`, `k ≥ 0`.
    Z1Family(i64),
    /// The same with the variables swapped.
    Z2Family(i64),
    /// `z1^{k1} z2^{k2} q(z1,z2)`, `k1,k2 ≥ 0`.
    QFamily(i64, i64),
}

/// Constructs one orthonormal basis element.
pub fn basis_element(kind: BasisKind, r: f64) -> Result<LaurentPolynomial> {
    check_r(r)?;
    let quarter_root = (1.0 - 4.0 / (r * r)).powf(0.25);
    match kind {
        BasisKind::Constant => Ok(LaurentPolynomial::constant(quarter_root)),
        BasisKind::Z1Family(k) | BasisKind::Z2Family(k) => {
            if k < 0 {
                return Err(Error::domain(format!(
                    "axis family index must be ≥ 0, got {k}"
                )));
            }
            let a = intersecting_zero(r)?.a;
            let norm = quarter_root / (1.0 - a * a).sqrt();
            let mut p = LaurentPolynomial::zero();
            match kind {
                BasisKind::Z1Family(_) => {
                    p.insert(k + 1, 0, norm);
                    p.insert(k, 0, -a * norm);
                }
                _ => {
                    p.insert(0, k + 1, norm);
                    p.insert(0, k, -a * norm);
                }
            }
            Ok(p)
        }
        BasisKind::QFamily(k1, k2) => {
            if k1 < 0 || k2 < 0 {
                return Err(Error::domain(format!(
                    "doubly-indexed family requires k1,k2 ≥ 0, got ({k1}, {k2})"
                )));
            }
            Ok(reversed_polynomial(r)?.shift(k1, k2))
        }
    }
}

/// Which members of the family to include in a Gram check.
#[derive(Debug, Clone, Copy)]
pub struct GramSelection {
    pub constant: bool,
    /// Axis family caps: include `z1`-family indices `0..=z1_max`.
    pub z1_max: Option<i64>,
    pub z2_max: Option<i64>,
    /// Doubly-indexed caps: include `(k1,k2)` over `[0..=q1]×[0..=q2]`.
    pub q_max: Option<(i64, i64)>,
}

impl GramSelection {
    /// The standard verification family: constant, both axis families to
    /// cap 3, doubly-indexed block `[0..2]²`.
    pub fn standard() -> Self {
        GramSelection {
            constant: true,
            z1_max: Some(3),
            z2_max: Some(3),
            q_max: Some((2, 2)),
        }
    }

    /// Deterministic enumeration of the selected kinds.
    pub fn kinds(&self) -> Vec<BasisKind> {
        let mut kinds = Vec::new();
        if self.constant {
            kinds.push(BasisKind::Constant);
        }
        if let Some(m) = self.z1_max {
            for k in 0..=m.max(-1) {
                kinds.push(BasisKind::Z1Family(k));
            }
        }
        if let Some(m) = self.z2_max {
            for k in 0..=m.max(-1) {
                kinds.push(BasisKind::Z2Family(k));
            }
        }
        if let Some((m1, m2)) = self.q_max {
            for k1 in 0..=m1.max(-1) {
                for k2 in 0..=m2.max(-1) {
                    kinds.push(BasisKind::QFamily(k1, k2));
                }
            }
        }
        kinds
    }
}

/// Result of a Gram-matrix orthonormality check.
#[derive(Debug, Clone)]
pub struct GramResult {
    pub kinds: Vec<BasisKind>,
    pub matrix: Vec<Vec<f64>>,
    pub max_off_diagonal: f64,
    pub max_diagonal_deviation: f64,
    /// Indices of the worst off-diagonal entry (0,0 for 1×1 matrices).
    pub worst_pair: (usize, usize),
}

/// Computes the Gram matrix of the selected family under the coefficient
/// inner product and reports its deviation from the identity.
pub fn gram_check(selection: &GramSelection, r: f64) -> Result<GramResult> {
    check_r(r)?;
    let kinds = selection.kinds();
    if kinds.is_empty() {
        return Err(Error::domain("empty basis selection".to_string()));
    }
    let elements: Vec<LaurentPolynomial> = kinds
        .iter()
        .map(|&k| basis_element(k, r))
        .collect::<Result<_>>()?;
    let table = coefficient_table(&elements, r)?;
    let n = elements.len();
    let mut matrix = vec![vec![0.0f64; n]; n];
    let mut max_off = 0.0f64;
    let mut max_diag = 0.0f64;
    let mut worst = (0usize, 0usize);
    for i in 0..n {
        for j in 0..n {
            let v = inner_with_table(&elements[i], &elements[j], &table)?;
            matrix[i][j] = v;
            if i == j {
                max_diag = max_diag.max((v - 1.0).abs());
            } else if v.abs() > max_off {
                max_off = v.abs();
                worst = (i, j);
            }
        }
    }
    Ok(GramResult {
        kinds,
        matrix,
        max_off_diagonal: max_off,
        max_diagonal_deviation: max_diag,
        worst_pair: worst,
    })
}
