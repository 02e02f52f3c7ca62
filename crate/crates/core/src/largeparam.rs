//! Large-parameter behaviour of `₂F₁(1, (1+β)t; at+1; x)` as `t → ∞`.
//!
//! Contents:
//!
//! * the elementary limits of the scaled `₂F₁`/`₃F₂` families and of the
//!   `₂F₁` difference ([`limit_2f1`], [`limit_3f2`], [`diff_limit`]);
//! * the coefficient machinery of the full asymptotic series: families
//!   `α_{j,k}`, `γ_{j,k}` built from generalized Bernoulli numbers and their
//!   convolution `d_{k,i} = Σ_j γ_{k,j} α_{k,i−j}` ([`ExpansionCoeffs`],
//!   exact-rational twins for validation);
//! * the truncated asymptotic series with its explicit remainder bound
//!   ([`asymptotic_2f1`]): for `0 ≤ x ≤ (1+β)x/a < 1`,
//!   `|₂F₁ − Σ_{i<n} t^{−i} Σ_k d_{k,i} w^k| ≤ (2n)!/2 ·
//!   (1+β)x(a+(1+β)x) / (a^{n+2}(1−w)^{2n+1} tⁿ)`, `w = (1+β)x/a`;
//! * the `1/t`-correction coefficients `b₀, b₁, b₂` of the combined
//!   two-term `₂F₁` sum that drives the same-sign coefficient asymptotics
//!   ([`correction_coeffs`], exact rational variant);
//! * small supporting checks: the power-sum majorant
//!   `Σ k^{2n} yᵏ ≤ (2n)!/2 · y(1+y)/(1−y)^{2n+1}` and the `√t` growth rate
//!   of the critical-argument `₂F₁`.

use crate::bernoulli::{BernoulliTable, NorlundPolynomials, RatSeries};
use crate::error::{Error, Result};
use crate::hypergeom::{pochhammer, pochhammer_exact, Engine, Params2F1};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Hard cap on the expansion order (the first three orders have
/// independently verified closed forms; the fourth is a mechanical
/// extension of the same machinery).
pub const MAX_ORDER: usize = 4;

/// Which denominator-parameter family the scaled `₂F₁` limit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit2F1Mode {
    /// `₂F₁(1, (1+β)t; t+1; x) → 1/(1−(1+β)x)`.
    TPlusOne,
    /// `₂F₁(1, (1+β)t; βt+1; x) → 1/(1−((1+β)/β)x)`.
    BetaTPlusOne,
}

/// `t → ∞` limit of the scaled Gauss series (two denominator families).
pub fn limit_2f1(beta: f64, mode: Limit2F1Mode, x: f64) -> Result<f64> {
    match mode {
        Limit2F1Mode::TPlusOne => {
            if !(0.0..=1.0).contains(&beta) {
                return Err(Error::domain(format!(
                    "first limit mode requires β in [0,1], got {beta}"
                )));
            }
            if (1.0 + beta) * x.abs() >= 1.0 {
                return Err(Error::domain(format!(
                    "first limit mode requires (1+β)|x| < 1, got {}",
                    (1.0 + beta) * x.abs()
                )));
            }
            Ok(1.0 / (1.0 - (1.0 + beta) * x))
        }
        Limit2F1Mode::BetaTPlusOne => {
            if !(beta > 0.0 && beta <= 1.0) {
                return Err(Error::domain(format!(
                    "second limit mode requires β in (0,1], got {beta}"
                )));
            }
            let q = (1.0 + beta) / beta * x.abs();
            if q >= 1.0 {
                return Err(Error::domain(format!(
                    "second limit mode requires (1+β)|x|/β < 1, got {q}"
                )));
            }
            Ok(1.0 / (1.0 - (1.0 + beta) / beta * x))
        }
    }
}

/// `t → ∞` limit of `₃F₂(1, (1+β)t/2+1, ((1+β)t+1)/2; t+1, βt+1; x)`:
/// `1/(1 − (1+β)²x/(4β))`, valid while that ratio is below 1.
pub fn limit_3f2(beta: f64, x: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::domain(format!(
            "limit requires β in (0,1], got {beta}"
        )));
    }
    let rho = (1.0 + beta).powi(2) * x / (4.0 * beta);
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain(format!(
            "limit requires 0 ≤ (1+β)²x/(4β) < 1, got {rho}"
        )));
    }
    Ok(1.0 / (1.0 - rho))
}

/// `t → ∞` limit of the scaled difference
/// `(β/((1+β)√(1−x)))·[₂F₁(1,(1+β)t;t+1;z₋) − ₂F₁(1,(1+β)t;t+1;z₊)]`
/// with `z∓ = (1∓√(1−x))/2`: equals `−1/((1+β)²x/(4β) − 1)` when that
/// ratio exceeds 1.
pub fn diff_limit(beta: f64, x: f64) -> Result<f64> {
    if !(beta >= 0.0 && beta < 1.0) {
        return Err(Error::domain(format!(
            "difference limit requires β in [0,1), got {beta}"
        )));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!(
            "difference limit requires 0 ≤ x < 1, got {x}"
        )));
    }
    let rho = (1.0 + beta).powi(2) * x / (4.0 * beta);
    if rho <= 1.0 {
        return Err(Error::domain(format!(
            "difference limit requires (1+β)²x/(4β) > 1, got {rho}"
        )));
    }
    Ok(-1.0 / (rho - 1.0))
}

/// Finite-`t` oracle for [`diff_limit`]: evaluates the scaled `₂F₁`
/// difference directly by series summation.
pub fn scaled_2f1_difference(engine: &Engine, beta: f64, x: f64, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) || t <= 0.0 {
        return Err(Error::domain(
            "difference oracle requires 0 ≤ x < 1 and t > 0".to_string(),
        ));
    }
    let s = (1.0 - x).sqrt();
    let b = (1.0 + beta) * t;
    let f = |z: f64| -> Result<f64> {
        Ok(engine
            .gauss_2f1(&Params2F1 {
                a: 1.0,
                b,
                c: t + 1.0,
                x: z,
            })?
            .value)
    };
    let diff = f((1.0 - s) / 2.0)? - f((1.0 + s) / 2.0)?;
    Ok(beta / ((1.0 + beta) * s) * diff)
}

// ---------------------------------------------------------------------------
// h coefficients (first two orders in closed form)
// ---------------------------------------------------------------------------

/// The closed-form `1/t` and `1/t²` coefficients of the `j`-th series term
/// of `₂F₁(1,(1+β)t;at+1;x)`:
/// `h₁ = −j/a + (j(j−1)/2)(a−β−1)/(a(1+β))` and
/// `h₂ = (3j+1)j(j+1)(j+2)/(24a²) − j²(j−1)(j+1)/(4(1+β)a)
///      + (3j−1)j(j−1)(j−2)/(24(1+β)²)`.
pub fn h_coefficients(beta: f64, a: f64, j: u32) -> (f64, f64) {
    let j = j as f64;
    let bp = 1.0 + beta;
    let h1 = -j / a + (j * (j - 1.0) / 2.0) * (a - beta - 1.0) / (a * bp);
    let h2 = (3.0 * j + 1.0) * j * (j + 1.0) * (j + 2.0) / (24.0 * a * a)
        - j * j * (j - 1.0) * (j + 1.0) / (4.0 * bp * a)
        + (3.0 * j - 1.0) * j * (j - 1.0) * (j - 2.0) / (24.0 * bp * bp);
    (h1, h2)
}

// ---------------------------------------------------------------------------
// α / γ / d coefficient families
// ---------------------------------------------------------------------------

/// Exact `α_{j,k} = (1−j)_k/k! · B^{(j)}_k(0) · (1+β)^{−k}` (vanishes for
/// `k ≥ j ≥ 1`).
pub fn alpha_exact(beta: &BigRational, j: u32, k: u32) -> Result<BigRational> {
    let one_minus_j = BigRational::from_integer(BigInt::from(1i64 - j as i64));
    let rising = pochhammer_exact(&one_minus_j, k);
    if rising.is_zero() {
        return Ok(BigRational::zero());
    }
    let table = BernoulliTable::new(j as i64, k)?;
    let k_fact = factorial_big(k);
    let bp = BigRational::one() + beta;
    Ok(rising / k_fact * table.get(k) / power_big(&bp, k))
}

/// Exact `γ_{j,k} = (−1)^k (j+1)_k/k! · B^{(−j)}_k(0) · a^{−k}`.
pub fn gamma_exact(a: &BigRational, j: u32, k: u32) -> Result<BigRational> {
    let j_plus_one = BigRational::from_integer(BigInt::from(j as i64 + 1));
    let rising = pochhammer_exact(&j_plus_one, k);
    let table = BernoulliTable::new(-(j as i64), k)?;
    let k_fact = factorial_big(k);
    let sign = if k % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    Ok(sign * rising / k_fact * table.get(k) / power_big(a, k))
}

/// Exact `d_{k,i} = Σ_{j=0..i} γ_{k,j} α_{k,i−j}`.
pub fn d_exact(beta: &BigRational, a: &BigRational, k: u32, i: u32) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for j in 0..=i {
        let g = gamma_exact(a, k, j)?;
        if g.is_zero() {
            continue;
        }
        let al = alpha_exact(beta, k, i - j)?;
        acc += g * al;
    }
    Ok(acc)
}

/// Independent oracle for the `d_{k,i}`: the exact Taylor coefficients in
/// `v = 1/t` of `F_k(v) = Π_{i=0}^{k−1} (1 + iv/(1+β)) / (1 + (i+1)v/a)`,
/// which is the `k`-th series-term ratio `((1+β)t)_k / ((1+β)^k t^k)` times
/// `(at)^k / (at+1)_k`, normalized to value 1 at `v = 0`.
pub fn product_taylor_oracle(
    beta: &BigRational,
    a: &BigRational,
    k: u32,
    imax: u32,
) -> Result<Vec<BigRational>> {
    let len = imax as usize + 1;
    let bp = BigRational::one() + beta;
    let mut numer = RatSeries::one(len);
    let mut denom = RatSeries::one(len);
    for i in 0..k {
        let mut lin = vec![BigRational::zero(); len];
        lin[0] = BigRational::one();
        if len > 1 {
            lin[1] = BigRational::from_integer(BigInt::from(i)) / &bp;
        }
        numer = numer.mul_trunc(&RatSeries::new(lin));

        let mut lin = vec![BigRational::zero(); len];
        lin[0] = BigRational::one();
        if len > 1 {
            lin[1] = BigRational::from_integer(BigInt::from(i + 1)) / a;
        }
        denom = denom.mul_trunc(&RatSeries::new(lin));
    }
    let series = numer.mul_trunc(&denom.recip()?);
    Ok((0..len).map(|i| series.coeff(i)).collect())
}

fn factorial_big(k: u32) -> BigRational {
    let mut acc = BigInt::one();
    for i in 2..=k as u64 {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

fn power_big(q: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

/// Floating-point α/γ/d tables for `k ≤ kmax`, `i < n`.
///
/// `d[k][i]` is the `t^{−i}` Taylor coefficient of the `k`-th scaled series
/// term; rows are built from the Nørlund polynomial representation of the
/// generalized Bernoulli numbers evaluated at order `±k`.
#[derive(Debug, Clone)]
pub struct ExpansionCoeffs {
    pub beta: f64,
    pub a: f64,
    pub n: usize,
    pub alpha: Vec<Vec<f64>>,
    pub gamma: Vec<Vec<f64>>,
    pub d: Vec<Vec<f64>>,
}

impl ExpansionCoeffs {
    pub fn new(beta: f64, a: f64, n: usize, kmax: u32) -> Result<Self> {
        if n == 0 || n > MAX_ORDER + 1 {
            return Err(Error::domain(format!(
                "expansion order must lie in 1..={}, got {n}",
                MAX_ORDER + 1
            )));
        }
        let nor = NorlundPolynomials::new(n as u32 - 1)?;
        let mut alpha = Vec::with_capacity(kmax as usize + 1);
        let mut gamma = Vec::with_capacity(kmax as usize + 1);
        let mut d = Vec::with_capacity(kmax as usize + 1);
        for k in 0..=kmax {
            let (ar, gr, dr) = coefficient_rows(&nor, beta, a, k, n);
            alpha.push(ar);
            gamma.push(gr);
            d.push(dr);
        }
        Ok(ExpansionCoeffs {
            beta,
            a,
            n,
            alpha,
            gamma,
            d,
        })
    }
}

/// One row of α, γ, d values for fixed `k` (indices `0..n`).
fn coefficient_rows(
    nor: &NorlundPolynomials,
    beta: f64,
    a: f64,
    k: u32,
    n: usize,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let bp = 1.0 + beta;
    let mut alpha_row = Vec::with_capacity(n);
    let mut gamma_row = Vec::with_capacity(n);
    for m in 0..n as u32 {
        let rising = pochhammer(1.0 - k as f64, m).unwrap_or(0.0);
        let a_val = if rising == 0.0 {
            0.0
        } else {
            rising / factorial_f64(m) * nor.eval(k as f64, m) * bp.powi(-(m as i32))
        };
        alpha_row.push(a_val);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let g_val = sign * pochhammer(k as f64 + 1.0, m).unwrap_or(f64::INFINITY)
            / factorial_f64(m)
            * nor.eval(-(k as f64), m)
            * a.powi(-(m as i32));
        gamma_row.push(g_val);
    }
    let mut d_row = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..=i {
            acc += gamma_row[j] * alpha_row[i - j];
        }
        d_row.push(acc);
    }
    (alpha_row, gamma_row, d_row)
}

fn factorial_f64(m: u32) -> f64 {
    let mut acc = 1.0f64;
    for i in 2..=m as u64 {
        acc *= i as f64;
    }
    acc
}

fn check_expansion_args(beta: f64, a: f64, x: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::domain(format!(
            "expansion requires β in (0,1], got {beta}"
        )));
    }
    if !(a > 0.0 && a <= 1.0 + beta) {
        return Err(Error::domain(format!(
            "expansion requires 0 < a ≤ 1+β, got a = {a}"
        )));
    }
    if x < 0.0 {
        return Err(Error::domain(format!("expansion requires x ≥ 0, got {x}")));
    }
    let w = (1.0 + beta) * x / a;
    if w >= 1.0 - 1e-9 {
        return Err(Error::domain(format!(
            "expansion requires (1+β)x/a < 1, got {w}"
        )));
    }
    Ok(w)
}

/// The per-order sums `S_i = Σ_k d_{k,i} w^k` for `i < n`,
/// `w = (1+β)x/a`; the asymptotic series is `Σ S_i t^{−i}`.
///
/// The `k`-sums are truncated geometrically: `d_{k,i}` grows polynomially
/// (degree `2i`) while `w^k` decays, so once past the polynomial hump the
/// terms decrease by a ratio approaching `w`.
pub fn expansion_sums(beta: f64, a: f64, x: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::domain(format!(
            "expansion order must lie in 1..={MAX_ORDER}, got {n}"
        )));
    }
    let w = check_expansion_args(beta, a, x)?;
    let mut sums = vec![0.0f64; n];
    if w == 0.0 {
        sums[0] = 1.0;
        return Ok(sums);
    }
    let nor = NorlundPolynomials::new(n as u32 - 1)?;
    let tol = 1e-15;
    let mut wk = 1.0f64; // w^k
    let mut prev_max = f64::INFINITY;
    let max_k = 4_000_000u32;
    let floor_k = (8 * n) as u32;
    for k in 0..=max_k {
        let (_, _, d_row) = coefficient_rows(&nor, beta, a, k, n);
        let mut max_term = 0.0f64;
        for i in 0..n {
            let term = d_row[i] * wk;
            sums[i] += term;
            max_term = max_term.max(term.abs());
        }
        if k >= floor_k && max_term <= prev_max && max_term < tol * (1.0 - w) {
            return Ok(sums);
        }
        prev_max = max_term;
        wk *= w;
    }
    Err(Error::convergence(format!(
        "expansion k-sum did not converge (w = {w})"
    )))
}

/// The explicit remainder bound of the order-`n` truncation:
/// `(2n)!/2 · (1+β)x(a+(1+β)x) / (a^{n+2}(1−(1+β)x/a)^{2n+1} tⁿ)`.
pub fn remainder_bound(beta: f64, a: f64, x: f64, t: f64, n: usize) -> Result<f64> {
    let w = check_expansion_args(beta, a, x)?;
    let two_n_fact = factorial_f64(2 * n as u32);
    Ok(two_n_fact / 2.0 * (1.0 + beta) * x * (a + (1.0 + beta) * x)
        / (a.powi(n as i32 + 2) * (1.0 - w).powi(2 * n as i32 + 1) * t.powi(n as i32)))
}

/// Order-`n` asymptotic evaluation of `₂F₁(1, (1+β)t; at+1; x)`:
/// returns `(Σ_{i<n} S_i t^{−i}, remainder_bound)`; the true value lies
/// within the bound of the returned value.
pub fn asymptotic_2f1(beta: f64, a: f64, x: f64, t: f64, n: usize) -> Result<(f64, f64)> {
    if t <= 0.0 {
        return Err(Error::domain(format!("expansion requires t > 0, got {t}")));
    }
    if n == 0 || n > MAX_ORDER {
        return Err(Error::domain(format!(
            "expansion order must lie in 1..={MAX_ORDER}, got {n}"
        )));
    }
    if x == 0.0 {
        // Every series term beyond the constant 1 carries a factor x.
        check_expansion_args(beta, a, x)?;
        return Ok((1.0, 0.0));
    }
    let sums = expansion_sums(beta, a, x, n)?;
    let mut value = 0.0f64;
    let mut t_pow = 1.0f64;
    for s in &sums {
        value += s / t_pow;
        t_pow *= t;
    }
    let bound = remainder_bound(beta, a, x, t, n)?;
    Ok((value, bound))
}

// ---------------------------------------------------------------------------
// Correction coefficients b0, b1, b2
// ---------------------------------------------------------------------------

/// The `1/t⁰,¹,²` coefficients of
/// `(β·₂F₁(1,(1+β)t;t+1;z₋) + ₂F₁(1,(1+β)t;βt+1;z₋)) / ((1+β)√(1−x))`
/// with `z₋ = (1−√(1−x))/2`, together with the two geometric denominators
/// `y₁ = 1−(1+β)z₋` and `y₂ = 1−((1+β)/β)z₋` (so `y₁y₂ = 1−(1+β)²x/(4β)`).
#[derive(Debug, Clone, Copy)]
pub struct CorrectionCoeffs {
    pub beta: f64,
    pub x: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub y1: f64,
    pub y2: f64,
}

/// Closed forms of `b₀, b₁, b₂` at `(β, x)`:
/// `b₀ = 1/(1−(1+β)²x/(4β))`,
/// `b₁ = (x/(16β²))·((1+β)³x − 4(1+β³))/(1−(1+β)²x/(4β))³`,
/// `b₂ = x·(64β(1+β⁴) + 16(1+β)²(1+(β−3)β)(2+β(2β−1))x − 20(1−β)²(1+β)⁴x²
///       + (1+β)⁶x³) / ((4β)⁴(1−(1+β)²x/(4β))⁵)`.
pub fn correction_coeffs(beta: f64, x: f64) -> Result<CorrectionCoeffs> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::domain(format!(
            "correction coefficients require β in (0,1], got {beta}"
        )));
    }
    if !(x < 1.0) {
        return Err(Error::domain(format!(
            "correction coefficients require x < 1, got {x}"
        )));
    }
    let bp = 1.0 + beta;
    let rho = bp * bp * x / (4.0 * beta);
    if (rho - 1.0).abs() <= 1e-12 {
        return Err(Error::domain(
            "correction coefficients have a pole at (1+β)²x/(4β) = 1".to_string(),
        ));
    }
    let z = 0.5 - 0.5 * (1.0 - x).sqrt();
    let y1 = 1.0 - bp * z;
    let y2 = 1.0 - bp / beta * z;
    let one_minus_rho = 1.0 - rho;
    let b0 = 1.0 / one_minus_rho;
    let b1 = x / (16.0 * beta * beta) * (bp.powi(3) * x - 4.0 * (1.0 + beta.powi(3)))
        / one_minus_rho.powi(3);
    let b2 = x
        * (64.0 * beta * (1.0 + beta.powi(4))
            + 16.0 * bp * bp * (1.0 + (beta - 3.0) * beta) * (2.0 + beta * (2.0 * beta - 1.0)) * x
            - 20.0 * (1.0 - beta).powi(2) * bp.powi(4) * x * x
            + bp.powi(6) * x.powi(3))
        / ((4.0 * beta).powi(4) * one_minus_rho.powi(5));
    Ok(CorrectionCoeffs {
        beta,
        x,
        b0,
        b1,
        b2,
        y1,
        y2,
    })
}

/// Exact rational `b₀, b₁, b₂` (the closed displays are rational in β, x).
pub fn correction_coeffs_exact(
    beta: &BigRational,
    x: &BigRational,
) -> Result<(BigRational, BigRational, BigRational)> {
    if beta.is_zero() || beta.is_negative() {
        return Err(Error::domain(
            "exact correction coefficients require β > 0".to_string(),
        ));
    }
    let one = BigRational::one();
    let bp = &one + beta;
    let four_beta = BigRational::from_integer(BigInt::from(4)) * beta;
    let rho = &bp * &bp * x / &four_beta;
    if rho == one {
        return Err(Error::domain(
            "exact correction coefficients have a pole at ratio 1".to_string(),
        ));
    }
    let omr = &one - &rho;
    let b0 = one.clone() / &omr;
    let sixteen_b2 = BigRational::from_integer(BigInt::from(16)) * beta * beta;
    let b1 = x / &sixteen_b2
        * (power_big(&bp, 3) * x
            - BigRational::from_integer(BigInt::from(4)) * (&one + power_big(beta, 3)))
        / power_big(&omr, 3);
    let c64 = BigRational::from_integer(BigInt::from(64));
    let c16 = BigRational::from_integer(BigInt::from(16));
    let c20 = BigRational::from_integer(BigInt::from(20));
    let c3 = BigRational::from_integer(BigInt::from(3));
    let c2 = BigRational::from_integer(BigInt::from(2));
    let poly = &c64 * beta * (&one + power_big(beta, 4))
        + &c16
            * &bp
            * &bp
            * (&one + (beta - &c3) * beta)
            * (&c2 + beta * (&c2 * beta - &one))
            * x
        - &c20 * power_big(&(&one - beta), 2) * power_big(&bp, 4) * x * x
        + power_big(&bp, 6) * power_big(x, 3);
    let b2 = x * poly / (power_big(&four_beta, 4) * power_big(&omr, 5));
    Ok((b0, b1, b2))
}

/// Verbatim order-3 remainder bound of the combined two-term expansion
/// (the quantity approximated by `b₀ + b₁/t + b₂/t²`):
/// `(1/t³)·(6!/4)·((1−√(1−x))/√(1−x)) ·
///  [β⁶(1+(1+β)z₋)y₂⁷ + (β+(1+β)z₋)y₁⁷] / (β⁵(1−(1+β)²x/(4β))⁷)`.
///
/// Algebraically this is the sum of the two per-series order-3 bounds
/// with the combination prefactors `β/((1+β)√(1−x))`, `1/((1+β)√(1−x))`;
/// the function evaluates both routes and returns the smaller.
pub fn composed_remainder_bound(beta: f64, x: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) || !(0.0 < x && x < 1.0) || t <= 0.0 {
        return Err(Error::domain(format!(
            "composed bound requires β in (0,1], 0 < x < 1, t > 0, got ({beta}, {x}, {t})"
        )));
    }
    let bp = 1.0 + beta;
    let rho = bp * bp * x / (4.0 * beta);
    if rho >= 1.0 {
        return Err(Error::domain(format!(
            "composed bound requires (1+β)²x/(4β) < 1, got {rho}"
        )));
    }
    let s = (1.0 - x).sqrt();
    let z = 0.5 - 0.5 * s;
    let y1 = 1.0 - bp * z;
    let y2 = 1.0 - bp / beta * z;
    let verbatim = (1.0 / t.powi(3)) * (factorial_f64(6) / 4.0) * ((1.0 - s) / s)
        * (beta.powi(6) * (1.0 + bp * z) * y2.powi(7) + (beta + bp * z) * y1.powi(7))
        / (beta.powi(5) * (1.0 - rho).powi(7));
    let per_series = (beta * remainder_bound(beta, 1.0, z, t, 3)?
        + remainder_bound(beta, beta, z, t, 3)?)
        / (bp * s);
    Ok(verbatim.min(per_series))
}

/// Both sides of the regime-separation inequality: for `r > 2`,
/// `0 < β < 1` with `r < (1+β)/√β` the balanced-exponent base
/// `(1+β)^{1+β}/(r^{1+β} β^β)` stays strictly below the in-disk zero
/// power `a^{1−β}`, `a = r/2 − √(r²/4−1)`; returns `(lhs, rhs)`.
pub fn supercritical_base_gap(r: f64, beta: f64) -> Result<(f64, f64)> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!(
            "base gap requires β in (0,1), got {beta}"
        )));
    }
    if !(r > 2.0) || r * r >= (1.0 + beta) * (1.0 + beta) / beta {
        return Err(Error::domain(format!(
            "base gap requires 2 < r < (1+β)/√β, got r = {r}"
        )));
    }
    let bp = 1.0 + beta;
    let lhs = bp.powf(bp) / (r.powf(bp) * beta.powf(beta));
    let a = 2.0 / (r + (r * r - 4.0).sqrt());
    let rhs = a.powf(1.0 - beta);
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// Power-sum majorant and critical growth
// ---------------------------------------------------------------------------

/// Evaluates both sides of `Σ_{k≥1} k^{2n} yᵏ ≤ (2n)!/2 · y(1+y)/(1−y)^{2n+1}`
/// (left side summed to machine tail) and returns `(lhs, rhs)`.
pub fn power_sum_bound_check(y: f64, n: u32) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::domain(format!(
            "power-sum check requires y in [0,1), got {y}"
        )));
    }
    if n == 0 || n > 16 {
        return Err(Error::domain(format!(
            "power-sum check requires 1 ≤ n ≤ 16, got {n}"
        )));
    }
    if y == 0.0 {
        return Ok((0.0, 0.0));
    }
    let p = 2 * n as i32;
    let mut lhs = 0.0f64;
    let mut yk = y;
    let mut k = 1u64;
    loop {
        let term = (k as f64).powi(p) * yk;
        lhs += term;
        // Past the hump k ≈ 2n/ln(1/y) the term ratio is below
        // ((k+1)/k)^{2n} y; stop once the next term cannot move the sum.
        let ratio = ((k as f64 + 1.0) / k as f64).powi(p) * y;
        if ratio < 1.0 && term / (1.0 - ratio) < f64::EPSILON * lhs {
            break;
        }
        if k > 100_000_000 {
            return Err(Error::convergence(
                "power-sum left side did not settle".to_string(),
            ));
        }
        yk *= y;
        k += 1;
    }
    let rhs = factorial_f64(2 * n) / 2.0 * y * (1.0 + y) / (1.0 - y).powi(p + 1);
    Ok((lhs, rhs))
}

/// Leading growth `√(πt(1+β)/(2β))` of `₂F₁(1, t(1+β); t+1; 1/(1+β))`.
pub fn critical_2f1_growth(beta: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) || t <= 0.0 {
        return Err(Error::domain(format!(
            "critical growth requires β in (0,1] and t > 0, got ({beta}, {t})"
        )));
    }
    Ok((std::f64::consts::PI * t * (1.0 + beta) / (2.0 * beta)).sqrt())
}
