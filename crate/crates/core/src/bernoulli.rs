//! Generalized Bernoulli numbers `B^{(j)}_k(0)` by exact rational
//! power-series arithmetic.
//!
//! `B^{(j)}_k(0)` is `k!` times the `t^k` coefficient of `(t/(eᵗ−1))^j`.
//! Everything is computed over `BigRational`: truncated series
//! multiplication, reciprocals, integer powers, logarithms — no floating
//! recursion, so entries stay exact at any order we care about (`k ≈ 16`
//! and well beyond).
//!
//! Two views are provided:
//!
//! * [`BernoulliTable`]/[`gen_bernoulli`] — entries for one fixed integer
//!   order `j` (positive or negative);
//! * [`NorlundPolynomials`] — the coefficients of `B^{(j)}_m(0)` as an exact
//!   polynomial in `j` (degree `m`), which evaluates at arbitrary real or
//!   rational order.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Default highest index kept by [`gen_bernoulli`].
pub const DEFAULT_KMAX: u32 = 16;

/// Guard against accidentally enormous exact-series computations.
const SERIES_LEN_GUARD: usize = 513;

/// A power series over `ℚ` truncated after `len` coefficients
/// (`a₀ + a₁t + … + a_{len−1}t^{len−1}`).
#[derive(Debug, Clone, PartialEq)]
pub struct RatSeries {
    coeffs: Vec<BigRational>,
}

impl RatSeries {
    /// Builds a series from its leading coefficients.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        RatSeries { coeffs }
    }

    /// The constant series 1 with `len` retained coefficients.
    pub fn one(len: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); len];
        coeffs[0] = BigRational::one();
        RatSeries { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^k` (zero beyond the truncation).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Truncated product, keeping `self.len()` coefficients.
    pub fn mul_trunc(&self, other: &RatSeries) -> RatSeries {
        let len = self.len();
        let mut out = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        RatSeries { coeffs: out }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<RatSeries> {
        if self.coeffs[0].is_zero() {
            return Err(Error::domain(
                "series reciprocal requires a nonzero constant term".to_string(),
            ));
        }
        let len = self.len();
        let inv0 = self.coeffs[0].recip();
        let mut out = vec![BigRational::zero(); len];
        out[0] = inv0.clone();
        for n in 1..len {
            let mut acc = BigRational::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() && !out[n - i].is_zero() {
                    acc += &self.coeffs[i] * &out[n - i];
                }
            }
            out[n] = -acc * &inv0;
        }
        Ok(RatSeries { coeffs: out })
    }

    /// Integer power (negative exponents via the reciprocal).
    pub fn powi(&self, j: i64) -> Result<RatSeries> {
        let base = if j < 0 { self.recip()? } else { self.clone() };
        let mut exp = j.unsigned_abs();
        let mut acc = RatSeries::one(self.len());
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_trunc(&sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul_trunc(&sq);
            }
        }
        Ok(acc)
    }

    /// Logarithm of a series with constant term 1, via
    /// `log A = ∫ A′/A` (constant of integration 0).
    pub fn log(&self) -> Result<RatSeries> {
        if self.coeffs[0] != BigRational::one() {
            return Err(Error::domain(
                "series logarithm requires constant term 1".to_string(),
            ));
        }
        let len = self.len();
        // A′ truncated to len coefficients (top coefficient unknown → zero;
        // it only influences the t^{len} term of the log, which is dropped).
        let mut deriv = vec![BigRational::zero(); len];
        for n in 1..len {
            deriv[n - 1] = &self.coeffs[n] * BigRational::from_integer(BigInt::from(n));
        }
        let ratio = RatSeries { coeffs: deriv }.mul_trunc(&self.recip()?);
        let mut out = vec![BigRational::zero(); len];
        for n in 1..len {
            out[n] = &ratio.coeffs[n - 1] / BigRational::from_integer(BigInt::from(n));
        }
        Ok(RatSeries { coeffs: out })
    }
}

/// The series `(eᵗ−1)/t = Σ_{m≥0} t^m/(m+1)!` with `len` coefficients.
fn exp_minus_one_over_t(len: usize) -> RatSeries {
    let mut coeffs = Vec::with_capacity(len);
    let mut fact = BigInt::one(); // (m+1)!
    for m in 0..len {
        fact *= BigInt::from(m as u64 + 1);
        coeffs.push(BigRational::new(BigInt::one(), fact.clone()));
    }
    RatSeries { coeffs }
}

/// Entries `B^{(j)}_k(0)` for one integer order `j` and all `k ≤ kmax`.
///
/// Immutable after construction; shareable across threads.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    /// The order `j` (may be negative).
    pub order: i64,
    entries: Vec<BigRational>,
}

impl BernoulliTable {
    /// Computes the table by raising `(eᵗ−1)/t` to the power `−j` exactly
    /// and scaling the `t^k` coefficient by `k!`.
    pub fn new(order: i64, kmax: u32) -> Result<Self> {
        let len = kmax as usize + 1;
        if len > SERIES_LEN_GUARD {
            return Err(Error::resource(format!(
                "Bernoulli table of {len} entries exceeds the safety guard"
            )));
        }
        let series = exp_minus_one_over_t(len).powi(-order)?;
        let mut entries = Vec::with_capacity(len);
        let mut fact = BigInt::one();
        for k in 0..len {
            if k > 0 {
                fact *= BigInt::from(k as u64);
            }
            entries.push(series.coeff(k) * BigRational::from_integer(fact.clone()));
        }
        Ok(BernoulliTable { order, entries })
    }

    /// `B^{(j)}_k(0)`; panics beyond the configured `kmax`.
    pub fn get(&self, k: u32) -> &BigRational {
        &self.entries[k as usize]
    }

    /// All stored entries, index = `k`.
    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }
}

/// `B^{(j)}_k(0)` as an exact rational, for integer `j` of either sign.
///
/// `k` is limited to [`DEFAULT_KMAX`]; build a [`BernoulliTable`] with a
/// custom `kmax` for more.
pub fn gen_bernoulli(j: i64, k: u32) -> Result<BigRational> {
    if k > DEFAULT_KMAX {
        return Err(Error::domain(format!(
            "gen_bernoulli index {k} exceeds the configured maximum {DEFAULT_KMAX}"
        )));
    }
    let table = BernoulliTable::new(j, k)?;
    Ok(table.get(k).clone())
}

/// The coefficients of `B^{(j)}_m(0)` as polynomials in the order `j`:
/// `B^{(j)}_m(0) = Σ_{p≤m} c_{m,p} j^p` with
/// `c_{m,p} = (m!/p!)·[t^m] L(t)^p`, `L = log(t/(eᵗ−1))`.
///
/// This is what allows evaluation at non-integer order.
#[derive(Debug, Clone)]
pub struct NorlundPolynomials {
    /// `c[m][p]`, exact.
    coeffs: Vec<Vec<BigRational>>,
    /// The same coefficients rounded to f64 for fast evaluation.
    coeffs_f64: Vec<Vec<f64>>,
}

impl NorlundPolynomials {
    /// Builds the polynomial table for all `m ≤ mmax`.
    pub fn new(mmax: u32) -> Result<Self> {
        let len = mmax as usize + 1;
        if len > SERIES_LEN_GUARD {
            return Err(Error::resource(format!(
                "Norlund table of {len} rows exceeds the safety guard"
            )));
        }
        let log_base = exp_minus_one_over_t(len).log()?;
        // minus_log = L = log(t/(eᵗ−1)) = −log((eᵗ−1)/t).
        let l_series = RatSeries {
            coeffs: log_base.coeffs.iter().map(|c| -c).collect(),
        };
        // Powers L^p for p ≤ mmax.
        let mut powers = Vec::with_capacity(len);
        powers.push(RatSeries::one(len));
        for p in 1..len {
            let next = powers[p - 1].mul_trunc(&l_series);
            powers.push(next);
        }
        let mut coeffs = Vec::with_capacity(len);
        let mut m_fact = BigInt::one();
        for m in 0..len {
            if m > 0 {
                m_fact *= BigInt::from(m as u64);
            }
            let mut row = Vec::with_capacity(m + 1);
            let mut p_fact = BigInt::one();
            for (p, lp) in powers.iter().enumerate().take(m + 1) {
                if p > 0 {
                    p_fact *= BigInt::from(p as u64);
                }
                let scale = BigRational::new(m_fact.clone(), p_fact.clone());
                row.push(lp.coeff(m) * scale);
            }
            coeffs.push(row);
        }
        let coeffs_f64 = coeffs
            .iter()
            .map(|row| row.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
            .collect();
        Ok(NorlundPolynomials { coeffs, coeffs_f64 })
    }

    /// Highest index `m` stored.
    pub fn mmax(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    /// Exact `B^{(j)}_m(0)` at rational order `j`.
    pub fn eval_exact(&self, j: &BigRational, m: u32) -> BigRational {
        let row = &self.coeffs[m as usize];
        // Horner in j.
        let mut acc = BigRational::zero();
        for c in row.iter().rev() {
            acc = acc * j + c;
        }
        acc
    }

    /// `B^{(j)}_m(0)` at real order `j` in f64.
    pub fn eval(&self, j: f64, m: u32) -> f64 {
        let row = &self.coeffs_f64[m as usize];
        let mut acc = 0.0f64;
        for c in row.iter().rev() {
            acc = acc * j + c;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn low_order_closed_forms() {
        // B₀ = 1, B₁ = −j/2, B₂ = j(3j−1)/12, B₃ = −j²(j−1)/8,
        // B₄ = j(15j³−30j²+5j+2)/240 for every integer order.
        for j in -6i64..=6 {
            let t = BernoulliTable::new(j, 4).unwrap();
            assert_eq!(t.get(0), &rat(1, 1), "j={j}");
            assert_eq!(t.get(1), &rat(-j, 2), "j={j}");
            assert_eq!(t.get(2), &rat(j * (3 * j - 1), 12), "j={j}");
            assert_eq!(t.get(3), &rat(-j * j * (j - 1), 8), "j={j}");
            assert_eq!(
                t.get(4),
                &rat(j * (15 * j * j * j - 30 * j * j + 5 * j + 2), 240),
                "j={j}"
            );
        }
    }

    #[test]
    fn frozen_reference_tables() {
        let b5 = BernoulliTable::new(5, 4).unwrap();
        assert_eq!(
            b5.entries(),
            &[rat(1, 1), rat(-5, 2), rat(35, 6), rat(-25, 2), rat(24, 1)]
        );
        let b3 = BernoulliTable::new(3, 4).unwrap();
        assert_eq!(
            b3.entries(),
            &[rat(1, 1), rat(-3, 2), rat(2, 1), rat(-9, 4), rat(19, 10)]
        );
        let bm2 = BernoulliTable::new(-2, 3).unwrap();
        assert_eq!(
            bm2.entries(),
            &[rat(1, 1), rat(1, 1), rat(7, 6), rat(3, 2)]
        );
        // Order 1 reproduces the ordinary Bernoulli numbers.
        let b1 = BernoulliTable::new(1, 6).unwrap();
        assert_eq!(
            b1.entries(),
            &[
                rat(1, 1),
                rat(-1, 2),
                rat(1, 6),
                rat(0, 1),
                rat(-1, 30),
                rat(0, 1),
                rat(1, 42)
            ]
        );
    }

    #[test]
    fn convenience_accessor_and_bounds() {
        assert_eq!(gen_bernoulli(5, 2).unwrap(), rat(35, 6));
        assert_eq!(gen_bernoulli(-7, 0).unwrap(), rat(1, 1));
        assert_eq!(gen_bernoulli(9, 1).unwrap(), rat(-9, 2));
        assert!(gen_bernoulli(3, DEFAULT_KMAX).is_ok());
        assert!(gen_bernoulli(3, DEFAULT_KMAX + 1).is_err());
    }

    #[test]
    fn generating_function_roundtrip() {
        // (t/(eᵗ−1))^j · ((eᵗ−1)/t)^j = 1 exactly, exercising recip and powi.
        let base = exp_minus_one_over_t(12);
        for &j in &[1i64, 2, 5, -3] {
            let p = base.powi(-j).unwrap();
            let q = base.powi(j).unwrap();
            assert_eq!(p.mul_trunc(&q), RatSeries::one(12), "j={j}");
        }
    }

    #[test]
    fn series_log_matches_exp_inverse() {
        // exp of the log series (via the defining ODE) reproduces the series:
        // check instead that log((eᵗ−1)/t) integrates to the right t and t²
        // coefficients: log E = t/2 − t²/24 + O(t⁴).
        let l = exp_minus_one_over_t(6).log().unwrap();
        assert_eq!(l.coeff(0), rat(0, 1));
        assert_eq!(l.coeff(1), rat(1, 2));
        assert_eq!(l.coeff(2), rat(1, 24));
        assert_eq!(l.coeff(3), rat(0, 1));
        assert_eq!(l.coeff(4), rat(-1, 2880));
    }

    #[test]
    fn norlund_polynomials_match_integer_tables() {
        let nor = NorlundPolynomials::new(10).unwrap();
        for &j in &[-4i64, -1, 0, 2, 7] {
            let table = BernoulliTable::new(j, 10).unwrap();
            for m in 0..=10u32 {
                assert_eq!(
                    nor.eval_exact(&rat(j, 1), m),
                    table.get(m).clone(),
                    "j={j}, m={m}"
                );
            }
        }
    }

    #[test]
    fn norlund_known_polynomials() {
        // c rows reproduce B₁ = −j/2 and B₂ = (3j² − j)/12.
        let nor = NorlundPolynomials::new(4).unwrap();
        assert_eq!(nor.eval_exact(&rat(1, 2), 1), rat(-1, 4));
        assert_eq!(
            nor.eval_exact(&rat(1, 2), 2),
            (rat(3, 4) - rat(1, 2)) / rat(12, 1)
        );
        let f = nor.eval(0.5, 2);
        let exact = nor.eval_exact(&rat(1, 2), 2).to_f64().unwrap();
        assert!((f - exact).abs() < 1e-15);
    }

    #[test]
    fn guards_reject_oversized_requests() {
        assert!(BernoulliTable::new(2, 2000).is_err());
        assert!(NorlundPolynomials::new(4096).is_err());
    }
}
