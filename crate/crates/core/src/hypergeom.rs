//! Gauss and Clausen hypergeometric machinery.
//!
//! Everything here is direct power-series summation of
//! `₂F₁(a,b;c;x) = Σ (a)ₙ(b)ₙ/((c)ₙ n!) xⁿ` and its `₃F₂` sibling, plus the
//! identities the rest of the crate leans on:
//!
//! * three contiguous relations (`residual_cont1/2/3`),
//! * Pfaff's transformation and a quadratic transformation
//!   (`pfaff_rhs`, `quadratic_rhs`),
//! * two reductions of the particular `₃F₂(1, K/2+1, (K+1)/2; k1+1, k2+1; x)`
//!   (`K = k1+k2`) to combinations of `₂F₁`s (`reduce_part1`, `reduce_part2`),
//! * two further equalities for the same `₃F₂`: a closed term minus a
//!   terminating series in `1/x` (`euler2_residual`), and the identification
//!   of that terminating series with a `₂F₁` difference (`corst_residual`).
//!
//! Series are terminating-aware (exact nonpositive-integer detection on
//! numerator parameters *before* any floating-point work) and report a
//! certified geometric tail bound. The [`Engine`] selects working precision;
//! cancellation-heavy combinations (the reductions, the identity residuals)
//! run in double-double under [`Precision::Extended`].

use crate::error::{Error, Result};
use crate::precision::{Dd, Precision, Real};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

/// Result of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    /// The partial sum (plus any exact prefactor for transformed forms).
    pub value: f64,
    /// Number of terms that were added.
    pub terms_used: usize,
    /// Certified absolute bound on the discarded tail (0 for terminating
    /// series). Does not include f64 representation roundoff.
    pub tail_bound: f64,
}

/// Parameters of `₂F₁(a, b; c; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params2F1 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub x: f64,
}

/// Parameters of `₃F₂(a1, a2, a3; b1, b2; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params3F2 {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub x: f64,
}

/// Raw residual of an identity together with the magnitude of the combined
/// terms, so callers can judge the residual against the scale at which the
/// cancellation happened.
#[derive(Debug, Clone, Copy)]
pub struct IdentityResidual {
    /// The signed combination that the identity says is zero.
    pub residual: f64,
    /// Sum of the absolute values of the combined terms.
    pub scale: f64,
}

impl IdentityResidual {
    /// `|residual| / max(1, scale)` — the figure of merit used by the
    /// randomized suites: absolute for O(1) identities, relative when the
    /// combined terms are large.
    pub fn normalized(&self) -> f64 {
        self.residual.abs() / self.scale.max(1.0)
    }
}

// ---------------------------------------------------------------------------
// Pochhammer symbols, factorials, binomials
// ---------------------------------------------------------------------------

/// Rising factorial `(q)_n = q(q+1)⋯(q+n−1)`; `(q)_0 = 1`.
pub fn pochhammer(q: f64, n: u32) -> Result<f64> {
    let mut acc = 1.0f64;
    for i in 0..n {
        acc *= q + i as f64;
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(Error::range(format!(
            "pochhammer({q}, {n}) overflows f64; use log_pochhammer"
        )))
    }
}

/// `log (q)_n` for `q > 0`, by compensated summation of `ln(q+i)`.
pub fn log_pochhammer(q: f64, n: u32) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::domain(format!(
            "log_pochhammer requires q > 0, got {q}"
        )));
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 0..n {
        let term = (q + i as f64).ln() - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    Ok(sum)
}

/// Exact rising factorial over rationals.
pub fn pochhammer_exact(q: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut f = q.clone();
    for _ in 0..n {
        acc *= &f;
        f += BigRational::one();
    }
    acc
}

fn ln_factorial_cache() -> &'static Vec<f64> {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let n = 8192usize;
        let mut v = Vec::with_capacity(n + 1);
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        v.push(0.0);
        for i in 1..=n {
            let term = (i as f64).ln() - comp;
            let next = sum + term;
            comp = (next - sum) - term;
            sum = next;
            v.push(sum);
        }
        v
    })
}

/// `ln n!` by compensated summation (cached for small `n`). Relative error is
/// at the f64 `ln` level (~1 ulp of the result) uniformly in `n`.
pub fn ln_factorial(n: u64) -> f64 {
    let cache = ln_factorial_cache();
    if (n as usize) < cache.len() {
        return cache[n as usize];
    }
    let mut sum = *cache.last().unwrap();
    let mut comp = 0.0f64;
    for i in cache.len() as u64..=n {
        let term = (i as f64).ln() - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    sum
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_binomial: k ≤ n required");
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Binomial coefficient as f64; exact below 2^53, accurately rounded above,
/// and a resource error once the value overflows f64 (n around 1030).
pub fn binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Ok(0.0);
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 1..=k {
        // Each intermediate is itself a binomial coefficient (integer).
        acc = acc * (n - k + i) as f64 / i as f64;
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(Error::range(format!(
            "binomial({n}, {k}) overflows f64; use ln_binomial"
        )))
    }
}

/// Exact integer binomial coefficient.
pub fn binomial_exact(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

// ---------------------------------------------------------------------------
// Series summation core
// ---------------------------------------------------------------------------

/// If `p` is exactly a nonpositive integer, returns `|p|` (the index of the
/// last nonzero term a numerator factor `(p)ₙ` allows).
fn nonpositive_integer(p: f64) -> Option<u64> {
    if p <= 0.0 && p.fract() == 0.0 && p >= -(2u64.pow(53) as f64) {
        Some((-p) as u64)
    } else {
        None
    }
}

/// Termination index of a series with the given numerator parameters:
/// the smallest `|p|` over nonpositive-integer parameters, if any.
fn termination_index(nums: &[f64]) -> Option<u64> {
    nums.iter().filter_map(|&p| nonpositive_integer(p)).min()
}

/// Checks denominator parameters for poles. For a series truncated at
/// term index `n_last` (inclusive), a denominator parameter `c` produces a
/// zero factor iff `c ∈ {0, −1, …, −(n_last−1)}`; for nonterminating series
/// every nonpositive integer `c` is eventually hit.
fn check_poles(dens: &[f64], n_last: Option<u64>) -> Result<()> {
    for &c in dens {
        if let Some(m) = nonpositive_integer(c) {
            let hit = match n_last {
                Some(n_last) => n_last >= 1 && m <= n_last - 1,
                None => true,
            };
            if hit {
                return Err(Error::domain(format!(
                    "denominator parameter {c} is a nonpositive integer reached by the series (pole)"
                )));
            }
        }
    }
    Ok(())
}

/// How close to 1 a nonterminating argument may come.
const X_MARGIN: f64 = 1e-12;

struct SumOutcome<T> {
    value: T,
    terms_used: usize,
    tail_bound: T,
}

/// Sums `Σ Π(numᵢ)ₙ / (Π(denⱼ)ₙ · n!) xⁿ` in precision `T`.
///
/// Terminating series (`terminating = Some(N)`) are summed exactly through
/// index `N` with zero tail. Nonterminating series require `|x| < 1` and stop
/// once the next term is below `tol·(1−q̂)` where `q̂ = max(|ratio|, |x|)`,
/// provided the observed ratio is no longer increasing above `|x|` (guards
/// against stopping on the rising side of a term-ratio hump) and all
/// numerator factors have passed their sign changes.
fn sum_hyper<T: Real>(
    nums: &[f64],
    dens: &[f64],
    xt: T,
    tol: f64,
    max_terms: usize,
    terminating: Option<u64>,
) -> Result<SumOutcome<T>> {
    check_poles(dens, terminating)?;

    let x = xt.to_f64();
    let mut term = T::one();
    let mut sum = T::zero();

    if let Some(last) = terminating {
        if last as usize > max_terms {
            return Err(Error::resource(format!(
                "terminating series needs {last} terms, budget is {max_terms}"
            )));
        }
        for n in 0..=last {
            sum = sum + term;
            if n == last {
                break;
            }
            let nf = n as f64;
            let mut ratio = xt;
            for &p in nums {
                ratio = ratio * T::of(p + nf);
            }
            for &q in dens {
                ratio = ratio / T::of(q + nf);
            }
            ratio = ratio / T::of(nf + 1.0);
            term = term * ratio;
        }
        return Ok(SumOutcome {
            value: sum,
            terms_used: last as usize + 1,
            tail_bound: T::zero(),
        });
    }

    if x.abs() >= 1.0 - X_MARGIN {
        return Err(Error::domain(format!(
            "nonterminating series requires |x| < 1 (margin 1e-12), got x = {x}"
        )));
    }
    if x == 0.0 {
        return Ok(SumOutcome {
            value: T::one(),
            terms_used: 1,
            tail_bound: T::zero(),
        });
    }

    // All sign changes of numerator factors (p + n) happen by n = |p| for
    // negative p; do not trust the ratio trend before then.
    let sign_floor = nums
        .iter()
        .filter(|&&p| p < 0.0)
        .map(|&p| (-p).ceil() as u64)
        .max()
        .unwrap_or(0)
        + 2;

    let abs_x = x.abs();
    let mut prev_ratio_abs = f64::INFINITY;
    for n in 0..max_terms {
        sum = sum + term;
        let nf = n as f64;
        let mut ratio = xt;
        for &p in nums {
            ratio = ratio * T::of(p + nf);
        }
        for &q in dens {
            ratio = ratio / T::of(q + nf);
        }
        ratio = ratio / T::of(nf + 1.0);
        let ratio_abs = ratio.abs().to_f64();
        let next = term * ratio;

        let q_hat = ratio_abs.max(abs_x);
        let trend_ok = ratio_abs <= prev_ratio_abs || ratio_abs <= abs_x;
        if n as u64 + 1 >= sign_floor && trend_ok && q_hat < 1.0 {
            let next_abs = next.abs().to_f64();
            if next_abs < tol * (1.0 - q_hat) {
                return Ok(SumOutcome {
                    value: sum,
                    terms_used: n + 1,
                    tail_bound: next.abs() / T::of(1.0 - q_hat),
                });
            }
        }
        prev_ratio_abs = ratio_abs;
        term = next;
    }
    Err(Error::convergence(format!(
        "series did not reach tol {tol} within {max_terms} terms (x = {x})"
    )))
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

/// Evaluation engine: working precision, target tolerance, iteration budget.
#[derive(Debug, Clone, Copy)]
pub struct Engine {
    pub precision: Precision,
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            precision: Precision::Standard,
            tol: 1e-12,
            max_terms: 2_000_000,
        }
    }
}

impl Engine {
    pub fn new(precision: Precision, tol: f64) -> Result<Self> {
        if !(1e-16..=1e-4).contains(&tol) {
            return Err(Error::domain(format!(
                "tol must lie in [1e-16, 1e-4], got {tol}"
            )));
        }
        Ok(Engine {
            precision,
            tol,
            ..Engine::default()
        })
    }

    pub fn with_precision(precision: Precision) -> Self {
        Engine {
            precision,
            ..Engine::default()
        }
    }

    fn run<F, G, O>(&self, f64_path: F, dd_path: G) -> Result<O>
    where
        F: FnOnce() -> Result<O>,
        G: FnOnce() -> Result<O>,
    {
        match self.precision {
            Precision::Standard => f64_path(),
            Precision::Extended => dd_path(),
        }
    }

    /// `₂F₁(a, b; c; x)` by direct summation.
    pub fn gauss_2f1(&self, p: &Params2F1) -> Result<SeriesValue> {
        self.run(
            || gauss_impl::<f64>(p, self.tol, self.max_terms).map(|o| o.into_series_value()),
            || gauss_impl::<Dd>(p, self.tol, self.max_terms).map(|o| o.into_series_value()),
        )
    }

    /// `₃F₂(a1, a2, a3; b1, b2; x)` by direct summation.
    pub fn hyper_3f2(&self, p: &Params3F2) -> Result<SeriesValue> {
        self.run(
            || hyper_impl::<f64>(p, self.tol, self.max_terms).map(|o| o.into_series_value()),
            || hyper_impl::<Dd>(p, self.tol, self.max_terms).map(|o| o.into_series_value()),
        )
    }

    /// Right side of Pfaff's transformation:
    /// `(1−x)^{−a} ₂F₁(a, c−b; c; x/(x−1))`.
    pub fn pfaff_rhs(&self, p: &Params2F1) -> Result<SeriesValue> {
        if p.x >= 1.0 {
            return Err(Error::domain(format!(
                "Pfaff transformation requires x < 1, got {}",
                p.x
            )));
        }
        self.run(
            || {
                let (pre, o) = pfaff_series::<f64>(p, self.tol, self.max_terms)?;
                Ok(SeriesValue {
                    value: pre * o.value,
                    terms_used: o.terms_used,
                    tail_bound: pre.abs() * o.tail_bound,
                })
            },
            || {
                let (pre, o) = pfaff_series::<Dd>(p, self.tol, self.max_terms)?;
                Ok(SeriesValue {
                    value: (pre * o.value).to_f64(),
                    terms_used: o.terms_used,
                    tail_bound: (pre.abs() * o.tail_bound).to_f64(),
                })
            },
        )
    }

    /// Difference `gauss_2f1 − pfaff_rhs`, combined at working precision.
    pub fn pfaff_residual(&self, p: &Params2F1) -> Result<IdentityResidual> {
        if p.x >= 1.0 {
            return Err(Error::domain(format!(
                "Pfaff transformation requires x < 1, got {}",
                p.x
            )));
        }
        self.run(
            || pfaff_residual_impl::<f64>(p, self.tol, self.max_terms),
            || pfaff_residual_impl::<Dd>(p, self.tol, self.max_terms),
        )
    }

    /// Right side of the quadratic transformation for `₂F₁(a, b; a+b−1/2; x)`:
    /// `(1−x)^{−1/2} ((1+√(1−x))/2)^{1−2a} ₂F₁(2a−1, a−b+1/2; a+b−1/2; (√(1−x)−1)/(√(1−x)+1))`.
    pub fn quadratic_rhs(&self, a: f64, b: f64, x: f64) -> Result<SeriesValue> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!(
                "quadratic transformation requires 0 ≤ x < 1, got {x}"
            )));
        }
        self.run(
            || quadratic_rhs_impl::<f64>(a, b, x, self.tol, self.max_terms).map(|(v, o)| {
                SeriesValue {
                    value: v.to_f64(),
                    terms_used: o.terms_used,
                    tail_bound: o.tail_bound,
                }
            }),
            || quadratic_rhs_impl::<Dd>(a, b, x, self.tol, self.max_terms).map(|(v, o)| {
                SeriesValue {
                    value: v.to_f64(),
                    terms_used: o.terms_used,
                    tail_bound: o.tail_bound,
                }
            }),
        )
    }

    /// Difference `₂F₁(a,b;a+b−1/2;x) − quadratic_rhs(a,b,x)` at working
    /// precision.
    pub fn quadratic_residual(&self, a: f64, b: f64, x: f64) -> Result<IdentityResidual> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!(
                "quadratic transformation requires 0 ≤ x < 1, got {x}"
            )));
        }
        self.run(
            || quadratic_residual_impl::<f64>(a, b, x, self.tol, self.max_terms),
            || quadratic_residual_impl::<Dd>(a, b, x, self.tol, self.max_terms),
        )
    }

    /// Residual of the contiguous relation
    /// `b·F(a,a2,a3;b,b2;x) − a·F(a+1,a2,a3;b+1,b2;x) + (a−b)·F(a,a2,a3;b+1,b2;x) = 0`.
    pub fn residual_cont1(
        &self,
        a: f64,
        a2: f64,
        a3: f64,
        b: f64,
        b2: f64,
        x: f64,
    ) -> Result<IdentityResidual> {
        self.run(
            || cont1_impl::<f64>(a, a2, a3, b, b2, x, self.tol, self.max_terms),
            || cont1_impl::<Dd>(a, a2, a3, b, b2, x, self.tol, self.max_terms),
        )
    }

    /// Residual of the contiguous relation
    /// `bcx·F(a+1,b+1,c+1;d+1,e+1;x) + de·(F(a,b,c;d,e;x) − F(a+1,b,c;d,e;x)) = 0`.
    pub fn residual_cont2(
        &self,
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        e: f64,
        x: f64,
    ) -> Result<IdentityResidual> {
        self.run(
            || cont2_impl::<f64>(a, b, c, d, e, x, self.tol, self.max_terms),
            || cont2_impl::<Dd>(a, b, c, d, e, x, self.tol, self.max_terms),
        )
    }

    /// Residual of the contiguous relation
    /// `(b−c)·₂F₁(a,b−1;c;x) − a(x−1)·₂F₁(a+1,b;c;x) + (c−a−b)·₂F₁(a,b;c;x) = 0`.
    pub fn residual_cont3(&self, a: f64, b: f64, c: f64, x: f64) -> Result<IdentityResidual> {
        self.run(
            || cont3_impl::<f64>(a, b, c, x, self.tol, self.max_terms),
            || cont3_impl::<Dd>(a, b, c, x, self.tol, self.max_terms),
        )
    }

    /// The recurring `₃F₂(1, K/2+1, (K+1)/2; k1+1, k2+1; x)`, `K = k1+k2`,
    /// by direct summation.
    pub fn theorem_3f2(&self, k1: u32, k2: u32, x: f64) -> Result<SeriesValue> {
        let k = (k1 + k2) as f64;
        self.hyper_3f2(&Params3F2 {
            a1: 1.0,
            a2: k / 2.0 + 1.0,
            a3: (k + 1.0) / 2.0,
            b1: k1 as f64 + 1.0,
            b2: k2 as f64 + 1.0,
            x,
        })
    }

    /// First reduction of the theorem `₃F₂` to `₂F₁`s:
    /// closed term `2^K (1+s)^{k2−k1} / (C(K,k1) x^{k2} s)` plus
    /// `(k2/(K s))·[F(z₋) − F(z₊)]` with `s = √(1−x)`, `z∓ = (1∓s)/2`,
    /// `F(z) = ₂F₁(1, K; k1+1; z)`.
    ///
    /// `F(z₊)` has argument close to 1 as `x → 0`; it is summed directly with
    /// the geometric-majorant tail (the term ratio decreases monotonically),
    /// which is why extended precision matters here: the two pieces cancel
    /// from magnitudes ~`2^K/x^{k2}` down to O(1).
    pub fn reduce_part1(&self, k1: u32, k2: u32, x: f64) -> Result<f64> {
        validate_reduction_args(k1, k2, x)?;
        self.run(
            || reduce_part1_impl::<f64>(k1, k2, x, self.tol, self.max_terms),
            || reduce_part1_impl::<Dd>(k1, k2, x, self.tol, self.max_terms),
        )
    }

    /// Second reduction of the theorem `₃F₂` (the production route; both
    /// `₂F₁` arguments are `z₋ = (1−√(1−x))/2 ≤ 1/2`):
    /// `[k2·₂F₁(1,K;k1+1;z₋) + k1·₂F₁(1,K;k2+1;z₋)] / (K √(1−x))`.
    pub fn reduce_part2(&self, k1: u32, k2: u32, x: f64) -> Result<f64> {
        validate_reduction_args(k1, k2, x)?;
        self.run(
            || reduce_part2_impl::<f64>(k1, k2, x, self.tol, self.max_terms),
            || reduce_part2_impl::<Dd>(k1, k2, x, self.tol, self.max_terms),
        )
    }

    /// Residual of the equality `theorem ₃F₂ = closed term −
    /// (4 k1 k2 / ((K−1) K x)) · T(1/x)` where `T` is the terminating
    /// `₃F₂(1, 1−k2, 1−k1; 1−K/2, (3−K)/2; ·)`.
    pub fn euler2_residual(&self, k1: u32, k2: u32, x: f64) -> Result<IdentityResidual> {
        validate_equality_args(k1, k2, x)?;
        self.run(
            || euler2_impl::<f64>(k1, k2, x, self.tol, self.max_terms),
            || euler2_impl::<Dd>(k1, k2, x, self.tol, self.max_terms),
        )
    }

    /// Residual of the equality `T(1/x) = ((K−1)/(4k1)) (x/√(1−x)) ·
    /// [F(z₊) − F(z₋)]` with `T`, `F`, `z∓` as above.
    pub fn corst_residual(&self, k1: u32, k2: u32, x: f64) -> Result<IdentityResidual> {
        validate_equality_args(k1, k2, x)?;
        self.run(
            || corst_impl::<f64>(k1, k2, x, self.tol, self.max_terms),
            || corst_impl::<Dd>(k1, k2, x, self.tol, self.max_terms),
        )
    }
}

impl<T: Real> SumOutcome<T> {
    fn into_series_value(self) -> SeriesValue {
        SeriesValue {
            value: self.value.to_f64(),
            terms_used: self.terms_used,
            tail_bound: self.tail_bound.to_f64(),
        }
    }
}

fn gauss_impl<T: Real>(p: &Params2F1, tol: f64, max_terms: usize) -> Result<SumOutcome<T>> {
    let nums = [p.a, p.b];
    let dens = [p.c];
    sum_hyper::<T>(
        &nums,
        &dens,
        T::of(p.x),
        tol,
        max_terms,
        termination_index(&nums),
    )
}

fn hyper_impl<T: Real>(p: &Params3F2, tol: f64, max_terms: usize) -> Result<SumOutcome<T>> {
    let nums = [p.a1, p.a2, p.a3];
    let dens = [p.b1, p.b2];
    sum_hyper::<T>(
        &nums,
        &dens,
        T::of(p.x),
        tol,
        max_terms,
        termination_index(&nums),
    )
}

fn pfaff_series<T: Real>(
    p: &Params2F1,
    tol: f64,
    max_terms: usize,
) -> Result<(T, SumOutcome<T>)> {
    let x_t = T::of(p.x) / (T::of(p.x) - T::one());
    let nums = [p.a, p.c - p.b];
    let o = sum_hyper::<T>(
        &nums,
        &[p.c],
        x_t,
        tol,
        max_terms,
        termination_index(&nums),
    )?;
    let pre = T::of((1.0 - p.x).powf(-p.a));
    Ok((pre, o))
}

fn pfaff_residual_impl<T: Real>(
    p: &Params2F1,
    tol: f64,
    max_terms: usize,
) -> Result<IdentityResidual> {
    let lhs = gauss_impl::<T>(p, tol, max_terms)?.value;
    let (pre, o) = pfaff_series::<T>(p, tol, max_terms)?;
    let rhs = pre * o.value;
    Ok(IdentityResidual {
        residual: (lhs - rhs).to_f64(),
        scale: lhs.abs().to_f64() + rhs.abs().to_f64(),
    })
}

fn quadratic_rhs_impl<T: Real>(
    a: f64,
    b: f64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<(T, SeriesValue)> {
    let s = (T::one() - T::of(x)).sqrt();
    let z = (s - T::one()) / (s + T::one());
    let nums = [2.0 * a - 1.0, a - b + 0.5];
    let dens = [a + b - 0.5];
    let o = sum_hyper::<T>(&nums, &dens, z, tol, max_terms, termination_index(&nums))?;
    let half_shift = (T::one() + s) / T::of(2.0);
    let pre = T::of(half_shift.to_f64().powf(1.0 - 2.0 * a)) / s;
    let value = pre * o.value;
    Ok((
        value,
        SeriesValue {
            value: value.to_f64(),
            terms_used: o.terms_used,
            tail_bound: pre.abs().to_f64() * o.tail_bound.to_f64(),
        },
    ))
}

fn quadratic_residual_impl<T: Real>(
    a: f64,
    b: f64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<IdentityResidual> {
    let lhs_params = Params2F1 {
        a,
        b,
        c: a + b - 0.5,
        x,
    };
    let lhs = gauss_impl::<T>(&lhs_params, tol, max_terms)?.value;
    let (rhs, _) = quadratic_rhs_impl::<T>(a, b, x, tol, max_terms)?;
    Ok(IdentityResidual {
        residual: (lhs - rhs).to_f64(),
        scale: lhs.abs().to_f64() + rhs.abs().to_f64(),
    })
}

#[allow(clippy::too_many_arguments)]
fn cont1_impl<T: Real>(
    a: f64,
    a2: f64,
    a3: f64,
    b: f64,
    b2: f64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<IdentityResidual> {
    let f = |p: Params3F2| -> Result<T> { Ok(hyper_impl::<T>(&p, tol, max_terms)?.value) };
    let f1 = f(Params3F2 {
        a1: a,
        a2,
        a3,
        b1: b,
        b2,
        x,
    })?;
    let f2 = f(Params3F2 {
        a1: a + 1.0,
        a2,
        a3,
        b1: b + 1.0,
        b2,
        x,
    })?;
    let f3 = f(Params3F2 {
        a1: a,
        a2,
        a3,
        b1: b + 1.0,
        b2,
        x,
    })?;
    let t1 = T::of(b) * f1;
    let t2 = T::of(a) * f2;
    let t3 = T::of(a - b) * f3;
    Ok(IdentityResidual {
        residual: (t1 - t2 + t3).to_f64(),
        scale: t1.abs().to_f64() + t2.abs().to_f64() + t3.abs().to_f64(),
    })
}

#[allow(clippy::too_many_arguments)]
fn cont2_impl<T: Real>(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<IdentityResidual> {
    let f = |p: Params3F2| -> Result<T> { Ok(hyper_impl::<T>(&p, tol, max_terms)?.value) };
    let shifted = f(Params3F2 {
        a1: a + 1.0,
        a2: b + 1.0,
        a3: c + 1.0,
        b1: d + 1.0,
        b2: e + 1.0,
        x,
    })?;
    let base = f(Params3F2 {
        a1: a,
        a2: b,
        a3: c,
        b1: d,
        b2: e,
        x,
    })?;
    let bumped = f(Params3F2 {
        a1: a + 1.0,
        a2: b,
        a3: c,
        b1: d,
        b2: e,
        x,
    })?;
    let t1 = T::of(b * c * x) * shifted;
    let t2 = T::of(d * e) * (base - bumped);
    Ok(IdentityResidual {
        residual: (t1 + t2).to_f64(),
        scale: t1.abs().to_f64() + (T::of(d * e) * base).abs().to_f64()
            + (T::of(d * e) * bumped).abs().to_f64(),
    })
}

fn cont3_impl<T: Real>(
    a: f64,
    b: f64,
    c: f64,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<IdentityResidual> {
    let f = |p: Params2F1| -> Result<T> { Ok(gauss_impl::<T>(&p, tol, max_terms)?.value) };
    let f1 = f(Params2F1 {
        a,
        b: b - 1.0,
        c,
        x,
    })?;
    let f2 = f(Params2F1 {
        a: a + 1.0,
        b,
        c,
        x,
    })?;
    let f3 = f(Params2F1 { a, b, c, x })?;
    let t1 = T::of(b - c) * f1;
    let t2 = T::of(a * (x - 1.0)) * f2;
    let t3 = T::of(c - a - b) * f3;
    Ok(IdentityResidual {
        residual: (t1 - t2 + t3).to_f64(),
        scale: t1.abs().to_f64() + t2.abs().to_f64() + t3.abs().to_f64(),
    })
}

fn validate_reduction_args(k1: u32, k2: u32, x: f64) -> Result<()> {
    if k1 < 1 || k2 < 1 {
        return Err(Error::domain(format!(
            "reduction requires k1, k2 ≥ 1, got ({k1}, {k2})"
        )));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!(
            "reduction requires 0 < x < 1, got {x}"
        )));
    }
    Ok(())
}

fn validate_equality_args(k1: u32, k2: u32, x: f64) -> Result<()> {
    validate_reduction_args(k1, k2, x)?;
    if k1 < k2 {
        return Err(Error::domain(format!(
            "equality requires k1 ≥ k2, got ({k1}, {k2})"
        )));
    }
    if k1 + k2 < 2 {
        return Err(Error::domain("equality requires k1 + k2 ≥ 2".to_string()));
    }
    Ok(())
}

/// `₂F₁(1, K; m; z)` at precision `T` — the only 2F1 shape the reductions
/// need. The term ratio `(K+n)z/(m+n)` is monotone in `n`, so the generic
/// stopping rule is sharp here.
fn f_one_k<T: Real>(k: u32, m: u32, z: T, tol: f64, max_terms: usize) -> Result<T> {
    let kf = k as f64;
    let mf = m as f64;
    let abs_z = z.abs().to_f64();
    if abs_z >= 1.0 - X_MARGIN {
        return Err(Error::domain(format!(
            "2F1(1,{k};{m};z) requires |z| < 1, got {abs_z}"
        )));
    }
    let mut term = T::one();
    let mut sum = T::zero();
    for n in 0..max_terms {
        sum = sum + term;
        let nf = n as f64;
        let ratio = z * T::of(kf + nf) / T::of(mf + nf);
        let next = term * ratio;
        let q_hat = ratio.abs().to_f64().max(abs_z);
        if q_hat < 1.0 && next.abs().to_f64() < tol * (1.0 - q_hat) {
            return Ok(sum + next / (T::one() - ratio.abs()));
        }
        term = next;
    }
    Err(Error::convergence(format!(
        "2F1(1,{k};{m};{abs_z}) did not converge in {max_terms} terms"
    )))
}

/// Binomial coefficient at precision `T` by the multiplicative loop.
fn binomial_t<T: Real>(n: u64, k: u64) -> T {
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 1..=k {
        acc = acc * T::of_u(n - k + i) / T::of_u(i);
    }
    acc
}

fn reduce_part1_impl<T: Real>(
    k1: u32,
    k2: u32,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<f64> {
    let k = k1 + k2;
    let s = (T::one() - T::of(x)).sqrt();
    let z_minus = (T::one() - s) / T::of(2.0);
    let z_plus = (T::one() + s) / T::of(2.0);
    let closed = T::of(2.0).powi(k as i32) * (T::one() + s).powi(k2 as i32 - k1 as i32)
        / (binomial_t::<T>(k as u64, k1 as u64) * T::of(x).powi(k2 as i32) * s);
    let f_minus = f_one_k::<T>(k, k1 + 1, z_minus, tol, max_terms)?;
    let f_plus = f_one_k::<T>(k, k1 + 1, z_plus, tol, max_terms)?;
    let bracket = T::of(k2 as f64) * (f_minus - f_plus) / (T::of(k as f64) * s);
    Ok((closed + bracket).to_f64())
}

fn reduce_part2_impl<T: Real>(
    k1: u32,
    k2: u32,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<f64> {
    let k = k1 + k2;
    let s = (T::one() - T::of(x)).sqrt();
    let z_minus = (T::one() - s) / T::of(2.0);
    let f1 = f_one_k::<T>(k, k1 + 1, z_minus, tol, max_terms)?;
    let f2 = f_one_k::<T>(k, k2 + 1, z_minus, tol, max_terms)?;
    let combined = (T::of(k2 as f64) * f1 + T::of(k1 as f64) * f2) / (T::of(k as f64) * s);
    Ok(combined.to_f64())
}

/// The terminating `₃F₂(1, 1−k2, 1−k1; 1−K/2, (3−K)/2; y)` at precision `T`
/// (a polynomial of degree `min(k1,k2)−1` in `y`).
fn corst_lhs_t<T: Real>(k1: u32, k2: u32, y: T) -> T {
    let last = (k1.min(k2) - 1) as u64;
    let nums = [1.0, 1.0 - k2 as f64, 1.0 - k1 as f64];
    let k = (k1 + k2) as f64;
    let dens = [1.0 - k / 2.0, (3.0 - k) / 2.0];
    let mut term = T::one();
    let mut sum = T::zero();
    for n in 0..=last {
        sum = sum + term;
        if n == last {
            break;
        }
        let nf = n as f64;
        let mut ratio = y;
        for &p in &nums {
            ratio = ratio * T::of(p + nf);
        }
        for &q in &dens {
            ratio = ratio / T::of(q + nf);
        }
        ratio = ratio / T::of(nf + 1.0);
        term = term * ratio;
    }
    sum
}

/// Exact rational evaluation of the terminating `₃F₂(1, 1−k2, 1−k1;
/// 1−K/2, (3−K)/2; y)` (the polynomial-in-`1/x` side of the second
/// equality). `y` is the series argument, i.e. `1/x`.
pub fn corst_lhs_exact(k1: u32, k2: u32, y: &BigRational) -> Result<BigRational> {
    if k1 < k2 || k2 < 1 {
        return Err(Error::domain(format!(
            "terminating series requires k1 ≥ k2 ≥ 1, got ({k1}, {k2})"
        )));
    }
    let last = (k2 - 1) as i64;
    let k = (k1 + k2) as i64;
    let rat = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let nums = [rat(1, 1), rat(1 - k2 as i64, 1), rat(1 - k1 as i64, 1)];
    let dens = [rat(2 - k, 2), rat(3 - k, 2)];
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for n in 0..=last {
        sum += &term;
        if n == last {
            break;
        }
        let nf = rat(n, 1);
        let mut ratio = y.clone();
        for p in &nums {
            ratio *= p + &nf;
        }
        for q in &dens {
            ratio /= q + &nf;
        }
        ratio /= &nf + BigRational::one();
        term *= ratio;
    }
    Ok(sum)
}

fn euler2_impl<T: Real>(
    k1: u32,
    k2: u32,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<IdentityResidual> {
    let k = k1 + k2;
    let lhs = hyper_impl::<T>(
        &Params3F2 {
            a1: 1.0,
            a2: k as f64 / 2.0 + 1.0,
            a3: (k as f64 + 1.0) / 2.0,
            b1: k1 as f64 + 1.0,
            b2: k2 as f64 + 1.0,
            x,
        },
        tol,
        max_terms,
    )?
    .value;
    let s = (T::one() - T::of(x)).sqrt();
    let closed = T::of(2.0).powi(k as i32) * (T::one() + s).powi(k2 as i32 - k1 as i32)
        / (binomial_t::<T>(k as u64, k1 as u64) * T::of(x).powi(k2 as i32) * s);
    let terminating = corst_lhs_t::<T>(k1, k2, T::one() / T::of(x));
    let weight = T::of(4.0 * k1 as f64 * k2 as f64)
        / (T::of((k - 1) as f64) * T::of(k as f64) * T::of(x));
    let rhs = closed - weight * terminating;
    Ok(IdentityResidual {
        residual: (lhs - rhs).to_f64(),
        scale: lhs.abs().to_f64() + closed.abs().to_f64() + (weight * terminating).abs().to_f64(),
    })
}

fn corst_impl<T: Real>(
    k1: u32,
    k2: u32,
    x: f64,
    tol: f64,
    max_terms: usize,
) -> Result<IdentityResidual> {
    let k = k1 + k2;
    let lhs = corst_lhs_t::<T>(k1, k2, T::one() / T::of(x));
    let s = (T::one() - T::of(x)).sqrt();
    let z_minus = (T::one() - s) / T::of(2.0);
    let z_plus = (T::one() + s) / T::of(2.0);
    let f_minus = f_one_k::<T>(k, k1 + 1, z_minus, tol, max_terms)?;
    let f_plus = f_one_k::<T>(k, k1 + 1, z_plus, tol, max_terms)?;
    let rhs = T::of((k - 1) as f64 / (4.0 * k1 as f64)) * T::of(x) / s * (f_plus - f_minus);
    Ok(IdentityResidual {
        residual: (lhs - rhs).to_f64(),
        scale: lhs.abs().to_f64() + rhs.abs().to_f64(),
    })
}

/// Exact rational `₂F₁(a, b; c; x)` for terminating series (a numerator
/// parameter must be a nonpositive integer rational).
pub fn gauss_2f1_terminating_exact(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    x: &BigRational,
) -> Result<BigRational> {
    let term_index = |p: &BigRational| -> Option<u64> {
        if p.is_integer() && !p.is_positive() {
            (-p).to_integer().to_u64()
        } else {
            None
        }
    };
    let last = match (term_index(a), term_index(b)) {
        (Some(m), Some(n)) => m.min(n),
        (Some(m), None) => m,
        (None, Some(n)) => n,
        (None, None) => {
            return Err(Error::domain(
                "exact 2F1 requires a terminating series (nonpositive-integer numerator parameter)"
                    .to_string(),
            ))
        }
    };
    // Pole check: (c)_n vanishes for some n ≤ last iff c ∈ {0, −1, …, −(last−1)}.
    if let Some(m) = term_index(c) {
        if last >= 1 && m <= last - 1 {
            return Err(Error::domain(format!(
                "denominator parameter {c} is a pole of the terminating series"
            )));
        }
    }
    let one = BigRational::one();
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut af = a.clone();
    let mut bf = b.clone();
    let mut cf = c.clone();
    for n in 0..=last {
        sum += &term;
        if n == last {
            break;
        }
        let np1 = BigRational::from_integer(BigInt::from(n + 1));
        term = term * &af * &bf / (&cf * np1) * x;
        af += &one;
        bf += &one;
        cf += &one;
    }
    Ok(sum)
}
