//! Radial asymptotics of the same-sign coefficients `c_{tk1,tk2}` as
//! `t → ∞`: regime classification by the critical ratio
//! `ρ = (k1+k2)²/(r²k1k2)`, exponential bases and limiting constants,
//! Stirling-corrected `1/t` predictions, the smooth boundary zeros the
//! constants localize at, the `(2,1), r = 3` five-term reference series,
//! and the probabilistic binomial-sum corollary.
//!
//! Conventions: directions are canonicalized to `k1 ≥ k2 ≥ 1`.  In the
//! subcritical regime (`ρ < 1`)
//! `√t · c_{tk1,tk2} / base^t → (2π)^{−1/2} √(K/(k1k2)) / (1−ρ)` with
//! `base = K^K/(r^K k1^{k1} k2^{k2})`; at the critical ratio (`ρ = 1`)
//! `c_{tk1,tk2}/a^{t(k1−k2)} → 1/(2√(1−4/r²))` and beyond it (`ρ > 1`)
//! the same scaling tends to `1/√(1−4/r²)` — the mixed-quadrant constant,
//! reflecting domination by the intersecting zero.

use crate::coeffs::{intersecting_zero, ln_coeff_positive};
use crate::error::{check_r, Error, Result};
use crate::hypergeom::{ln_binomial, SeriesValue};
use crate::largeparam::{correction_coeffs, correction_coeffs_exact};
pub use crate::largeparam::h_coefficients;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Growth regime of a scaled direction `(k1, k2)` at parameter `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        };
        f.write_str(name)
    }
}

/// Classification of one direction: the critical ratio, the per-`t`
/// exponential base, and the limiting constant of the scaled coefficient.
#[derive(Debug, Clone, Copy)]
pub struct RegimeReport {
    pub k1: u32,
    pub k2: u32,
    pub r: f64,
    pub rho: f64,
    pub regime: Regime,
    pub base: f64,
    pub limit: f64,
}

fn canonical_direction(k1: u32, k2: u32) -> Result<(u32, u32)> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::domain(
            "direction indices must satisfy k1, k2 ≥ 1".to_string(),
        ));
    }
    Ok(if k1 >= k2 { (k1, k2) } else { (k2, k1) })
}

/// Classifies `(k1, k2, r)` by `ρ = (k1+k2)²/(r²k1k2)` with a `1e−12`
/// tolerance band around the critical value 1.
pub fn classify(k1: u32, k2: u32, r: f64) -> Result<RegimeReport> {
    check_r(r)?;
    let (k1, k2) = canonical_direction(k1, k2)?;
    let kf1 = k1 as f64;
    let kf2 = k2 as f64;
    let big_k = kf1 + kf2;
    let rho = big_k * big_k / (r * r * kf1 * kf2);
    let regime = if (rho - 1.0).abs() <= 1e-12 {
        Regime::Critical
    } else if rho < 1.0 {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    };
    let c00 = r / ((r * r - 4.0).sqrt());
    let (base, limit) = match regime {
        Regime::Subcritical => {
            let base = (big_k * big_k.ln()
                - big_k * r.ln()
                - kf1 * kf1.ln()
                - kf2 * kf2.ln())
            .exp();
            let limit = (2.0 * std::f64::consts::PI).powf(-0.5) * (big_k / (kf1 * kf2)).sqrt()
                / (1.0 - rho);
            (base, limit)
        }
        Regime::Critical => {
            let a = intersecting_zero(r)?.a;
            (a.powi((k1 - k2) as i32), c00 / 2.0)
        }
        Regime::Supercritical => {
            let a = intersecting_zero(r)?.a;
            (a.powi((k1 - k2) as i32), c00)
        }
    };
    Ok(RegimeReport {
        k1,
        k2,
        r,
        rho,
        regime,
        base,
        limit,
    })
}

/// Exact-rational regime classification from `r²` (no tolerance band):
/// compares `ρ = (k1+k2)²/(r²k1k2)` with 1 in ℚ.
pub fn classify_exact(k1: u32, k2: u32, r_squared: &BigRational) -> Result<Regime> {
    let (k1, k2) = canonical_direction(k1, k2)?;
    let four = BigRational::from_integer(BigInt::from(4));
    if r_squared <= &four {
        return Err(Error::domain(
            "exact classification requires r² > 4".to_string(),
        ));
    }
    let kk1 = BigRational::from_integer(BigInt::from(k1));
    let kk2 = BigRational::from_integer(BigInt::from(k2));
    let big_k = &kk1 + &kk2;
    let rho = &big_k * &big_k / (r_squared * &kk1 * &kk2);
    let one = BigRational::one();
    Ok(if rho == one {
        Regime::Critical
    } else if rho < one {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    })
}

/// The smooth boundary zeros of `p` and of its reversal that the
/// asymptotic constants localize at: `(rk1/K, rk2/K)` lies on the zero
/// set of `p`, `(K/(rk1), K/(rk2))` on that of the reversed polynomial;
/// coordinatewise products equal 1.
#[derive(Debug, Clone, Copy)]
pub struct SmoothPoints {
    pub on_p: (f64, f64),
    pub on_reverse: (f64, f64),
}

pub fn smooth_points(k1: u32, k2: u32, r: f64) -> Result<SmoothPoints> {
    check_r(r)?;
    let (k1, k2) = canonical_direction(k1, k2)?;
    let big_k = (k1 + k2) as f64;
    let z1 = r * k1 as f64 / big_k;
    let z2 = r * k2 as f64 / big_k;
    Ok(SmoothPoints {
        on_p: (z1, z2),
        on_reverse: (1.0 / z1, 1.0 / z2),
    })
}

/// The scaled coefficient whose limit [`classify`] reports:
/// `√t·c_{tk1,tk2}/base^t` in the subcritical regime,
/// `c_{tk1,tk2}/base^t` otherwise.  Log-space throughout, so usable far
/// beyond the floating-point range of `c` itself.
pub fn scaled_coeff(k1: u32, k2: u32, r: f64, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::domain("scaling parameter t must be ≥ 1".to_string()));
    }
    let report = classify(k1, k2, r)?;
    let (k1, k2) = (report.k1, report.k2);
    let tk1 = (k1 as u64).checked_mul(t);
    let tk2 = (k2 as u64).checked_mul(t);
    let (tk1, tk2) = match (tk1, tk2) {
        (Some(a), Some(b)) if a <= u32::MAX as u64 && b <= u32::MAX as u64 => (a, b),
        _ => {
            return Err(Error::resource(format!(
                "scaled index t·k = {t}·{k1} out of range"
            )))
        }
    };
    let ln_c = ln_coeff_positive(tk1 as u32, tk2 as u32, r)?;
    let kf1 = k1 as f64;
    let kf2 = k2 as f64;
    let big_k = kf1 + kf2;
    let tf = t as f64;
    let ln_base_t = match report.regime {
        Regime::Subcritical => {
            tf * (big_k * big_k.ln() - big_k * r.ln() - kf1 * kf1.ln() - kf2 * kf2.ln())
        }
        _ => tf * (kf1 - kf2) * intersecting_zero(r)?.a.ln(),
    };
    let ln_scale = if report.regime == Regime::Subcritical {
        0.5 * tf.ln()
    } else {
        0.0
    };
    Ok((ln_c - ln_base_t + ln_scale).exp())
}

/// Stirling correction coefficients of the central binomial
/// `((1+β)t)!/(t!(βt)!)`: `s₁ = (1+β+β²)/(12β(1+β))`, `s₂ = s₁²/2`.
pub fn stirling_correction(beta: f64) -> (f64, f64) {
    let s1 = (1.0 + beta + beta * beta) / (12.0 * beta * (1.0 + beta));
    (s1, s1 * s1 / 2.0)
}

/// Exact-rational twin of [`stirling_correction`].
pub fn stirling_correction_exact(beta: &BigRational) -> Result<(BigRational, BigRational)> {
    if beta.is_zero() || beta.is_negative() {
        return Err(Error::domain("Stirling correction requires β > 0".to_string()));
    }
    let one = BigRational::one();
    let twelve = BigRational::from_integer(BigInt::from(12));
    let s1 = (&one + beta + beta * beta) / (twelve * beta * (&one + beta));
    let s2 = &s1 * &s1 / BigRational::from_integer(BigInt::from(2));
    Ok((s1, s2))
}

/// Stirling-type approximation of the binomial ratio
/// `((1+β)t)!/(t!(βt)!) ≈ (2πt)^{−1/2}(1+β)^{(1+β)t+1/2} β^{−βt−1/2}
/// (1 − s₁/t + s₂/t²)`, truncated at `order ∈ {0,1,2}`.
pub fn stirling_binomial(beta: f64, t: f64, order: usize) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) || t <= 0.0 {
        return Err(Error::domain(format!(
            "Stirling binomial requires β in (0,1] and t > 0, got ({beta}, {t})"
        )));
    }
    if order > 2 {
        return Err(Error::domain(format!(
            "Stirling correction order must be ≤ 2, got {order}"
        )));
    }
    let bp = 1.0 + beta;
    let ln_main = -0.5 * (2.0 * std::f64::consts::PI * t).ln() + (bp * t + 0.5) * bp.ln()
        - (beta * t + 0.5) * beta.ln();
    let (s1, s2) = stirling_correction(beta);
    let mut corr = 1.0;
    if order >= 1 {
        corr -= s1 / t;
    }
    if order >= 2 {
        corr += s2 / (t * t);
    }
    Ok(ln_main.exp() * corr)
}

/// The exact per-`T` correction coefficients `(e₁, e₂)` of the normalized
/// subcritical expansion `√(2πT)·(scaling)·c_{T,βT} = b₀(1 + e₁/T + e₂/T²
/// + O(T⁻³))`: `e₁ = (b₁ − s₁b₀)/b₀` and `e₂ = (b₂ − s₁b₁ + s₂b₀)/b₀`,
/// combining the series corrections `b᛫` at `x = 4/r²` with the Stirling
/// corrections of the prefactor binomial.
pub fn scaled_correction_exact(
    beta: &BigRational,
    x: &BigRational,
) -> Result<(BigRational, BigRational)> {
    let (b0, b1, b2) = correction_coeffs_exact(beta, x)?;
    let (s1, s2) = stirling_correction_exact(beta)?;
    let e1 = (&b1 - &s1 * &b0) / &b0;
    let e2 = (&b2 - &s1 * &b1 + &s2 * &b0) / &b0;
    Ok((e1, e2))
}

fn rational_to_u32(v: &BigInt, what: &str) -> Result<u32> {
    v.to_u32()
        .ok_or_else(|| Error::domain(format!("{what} out of range: {v}")))
}

/// Order-corrected prediction of [`scaled_coeff`] along the direction
/// `β = k2/k1` (reduced rational in `(0,1]`):
/// `√((1+β)/(2πβk1)) · [b₀ + (b₁−s₁b₀)/(tk1) + (b₂−s₁b₁+s₂b₀)/(tk1)²]`
/// truncated at `order ∈ {0,1,2}`.  Only defined in the subcritical
/// regime.
pub fn corrected_prediction(beta: &BigRational, r: f64, t: u64, order: usize) -> Result<f64> {
    if beta.is_zero() || beta.is_negative() || beta > &BigRational::one() {
        return Err(Error::domain(format!(
            "direction ratio must lie in (0,1], got {beta}"
        )));
    }
    if order > 2 {
        return Err(Error::domain(format!(
            "prediction order must be ≤ 2, got {order}"
        )));
    }
    if t == 0 {
        return Err(Error::domain("scaling parameter t must be ≥ 1".to_string()));
    }
    let k2 = rational_to_u32(beta.numer(), "direction numerator")?;
    let k1 = rational_to_u32(beta.denom(), "direction denominator")?;
    let report = classify(k1, k2, r)?;
    if report.regime != Regime::Subcritical {
        return Err(Error::domain(format!(
            "corrected prediction requires the subcritical regime, got {} (ρ = {})",
            report.regime, report.rho
        )));
    }
    let bf = beta.to_f64().ok_or_else(|| {
        Error::domain("direction ratio is not representable".to_string())
    })?;
    let x = 4.0 / (r * r);
    let c = correction_coeffs(bf, x)?;
    let (s1, s2) = stirling_correction(bf);
    let big_t = (t as f64) * k1 as f64;
    let mut p = c.b0;
    if order >= 1 {
        p += (c.b1 - s1 * c.b0) / big_t;
    }
    if order >= 2 {
        p += (c.b2 - s1 * c.b1 + s2 * c.b0) / (big_t * big_t);
    }
    Ok(p * ((1.0 + bf) / (2.0 * std::f64::consts::PI * bf * k1 as f64)).sqrt())
}

/// Closed-form first subcritical correction `H` in
/// `scaled → limit·(1 − H/t + O(t⁻²))`:
/// `H = [k1²k2²(k1²+k1k2+k2²)r⁴ + 2k1k2K²(5k1²−7k1k2+5k2²)r²
///      + K⁴(k1²−11k1k2+k2²)] / [12(r²k1k2−K²)² k1k2K]`.
pub fn subcritical_first_correction_exact(
    k1: u32,
    k2: u32,
    r_squared: &BigRational,
) -> Result<BigRational> {
    if classify_exact(k1, k2, r_squared)? != Regime::Subcritical {
        return Err(Error::domain(
            "first correction requires the subcritical regime".to_string(),
        ));
    }
    let (k1, k2) = canonical_direction(k1, k2)?;
    let a = BigRational::from_integer(BigInt::from(k1));
    let b = BigRational::from_integer(BigInt::from(k2));
    let big_k = &a + &b;
    let r2 = r_squared.clone();
    let r4 = &r2 * &r2;
    let k2sq = &big_k * &big_k;
    let k4 = &k2sq * &k2sq;
    let ab = &a * &b;
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let term1 = &ab * &ab * (&a * &a + &ab + &b * &b) * &r4;
    let term2 = int(2) * &ab * &k2sq * (int(5) * &a * &a - int(7) * &ab + int(5) * &b * &b) * &r2;
    let term3 = &k4 * (&a * &a - int(11) * &ab + &b * &b);
    let denom_core = &r2 * &ab - &k2sq;
    let denom = int(12) * &denom_core * &denom_core * &ab * &big_k;
    Ok((term1 + term2 + term3) / denom)
}

/// Floating-point evaluation of [`subcritical_first_correction_exact`].
pub fn subcritical_first_correction(k1: u32, k2: u32, r: f64) -> Result<f64> {
    let report = classify(k1, k2, r)?;
    if report.regime != Regime::Subcritical {
        return Err(Error::domain(
            "first correction requires the subcritical regime".to_string(),
        ));
    }
    let (k1, k2) = (report.k1 as f64, report.k2 as f64);
    let big_k = k1 + k2;
    let r2 = r * r;
    let num = k1 * k1 * k2 * k2 * (k1 * k1 + k1 * k2 + k2 * k2) * r2 * r2
        + 2.0 * k1 * k2 * big_k * big_k * (5.0 * k1 * k1 - 7.0 * k1 * k2 + 5.0 * k2 * k2) * r2
        + big_k.powi(4) * (k1 * k1 - 11.0 * k1 * k2 + k2 * k2);
    let denom_core = r2 * k1 * k2 - big_k * big_k;
    Ok(num / (12.0 * denom_core * denom_core * k1 * k2 * big_k))
}

/// The four `1/t` correction fractions of the `(2,1)`, `r = 3` reference
/// series (numerator, denominator), orders 1 through 4.
pub const MELCZER_CORRECTIONS: [(i64, i64); 4] = [
    (-55, 72),
    (26065, 10368),
    (-32881015, 2239488),
    (78037754977, 644972544),
];

/// Five-term reference value of `c_{2t,t}` at `r = 3`:
/// `√3·4^{−t}/√(πt) · (1 − 55/(72t) + 26065/(10368t²) − 32881015/(2239488t³)
/// + 78037754977/(644972544t⁴))`.
pub fn melczer_reference(t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::domain("reference series requires t ≥ 1".to_string()));
    }
    let tf = t as f64;
    let lead = 3f64.sqrt() * (-(tf) * 4f64.ln()).exp() / (std::f64::consts::PI * tf).sqrt();
    let mut corr = 1.0;
    let mut tp = 1.0;
    for (num, den) in MELCZER_CORRECTIONS {
        tp *= tf;
        corr += num as f64 / (den as f64 * tp);
    }
    Ok(lead * corr)
}

/// Limit of [`binomial_sum`] as `t → ∞`: `(1/4)/(p − 1/2)` with
/// `p = k1/(k1+k2) > 1/2`.
pub fn binomial_sum_limit(k1: u32, k2: u32) -> Result<f64> {
    if !(k1 > k2 && k2 >= 1) {
        return Err(Error::domain(format!(
            "binomial sum limit diverges unless k1 > k2 ≥ 1, got ({k1}, {k2})"
        )));
    }
    let p = k1 as f64 / (k1 + k2) as f64;
    Ok(0.25 / (p - 0.5))
}

/// The probabilistic corollary sum
/// `Σ_{i≥0} C(Kt+2i, k1t+i) p^{k1t+i} q^{k2t+i}`, `p = k1/K`, `q = k2/K`,
/// `K = k1+k2`, summed with the explicit decreasing ratio majorant
/// (term ratio → 4pq < 1).  Converges to `(1/4)/(p−1/2)` as `t → ∞`.
pub fn binomial_sum(k1: u32, k2: u32, t: u64, tol: f64) -> Result<SeriesValue> {
    if k1 == k2 {
        return Err(Error::domain(
            "binomial sum has a divergent limit at k1 = k2 (p = 1/2)".to_string(),
        ));
    }
    if !(k1 > k2 && k2 >= 1) || t == 0 {
        return Err(Error::domain(format!(
            "binomial sum requires k1 > k2 ≥ 1 and t ≥ 1, got ({k1}, {k2}, {t})"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let big_k = (k1 + k2) as u64;
    let tk1 = k1 as u64 * t;
    let tk2 = k2 as u64 * t;
    let big_t = big_k * t;
    let p = k1 as f64 / big_k as f64;
    let q = k2 as f64 / big_k as f64;
    let pq = p * q;
    // First term in log space: C(Kt, k1t) p^{k1t} q^{k2t}.
    let mut term =
        (ln_binomial(big_t, tk1) + tk1 as f64 * p.ln() + tk2 as f64 * q.ln()).exp();
    let mut sum = term;
    let max_terms = 100_000_000u64;
    for i in 0..max_terms {
        let fi = i as f64;
        let tt = big_t as f64;
        let ratio = (tt + 2.0 * fi + 1.0) * (tt + 2.0 * fi + 2.0) * pq
            / ((tk1 as f64 + fi + 1.0) * (tk2 as f64 + fi + 1.0));
        term *= ratio;
        let u = tk1 as f64 + fi + 2.0;
        let v = tk2 as f64 + fi + 2.0;
        let majorant = (u + v) * (u + v) * pq / (u * v);
        if majorant < 1.0 {
            let tail = term / (1.0 - majorant);
            if tail <= tol * sum.max(f64::MIN_POSITIVE) {
                return Ok(SeriesValue {
                    value: sum,
                    terms_used: i as usize + 1,
                    tail_bound: tail,
                });
            }
        }
        sum += term;
    }
    Err(Error::convergence(format!(
        "binomial sum did not reach tolerance {tol}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn classification_trichotomy_reference_points() {
        let sub = classify(2, 1, 3.0).unwrap();
        assert_eq!(sub.regime, Regime::Subcritical);
        assert_relative_eq!(sub.rho, 0.5, max_relative = 1e-15);
        assert_relative_eq!(sub.base, 0.25, max_relative = 1e-14);
        assert_relative_eq!(
            sub.limit,
            (3.0 / std::f64::consts::PI).sqrt(),
            max_relative = 1e-13
        );

        let crit = classify(4, 1, 2.5).unwrap();
        assert_eq!(crit.regime, Regime::Critical);
        assert_relative_eq!(crit.rho, 1.0, max_relative = 1e-14);
        assert_relative_eq!(crit.limit, 5.0 / 6.0, max_relative = 1e-14);
        assert_relative_eq!(crit.base, 0.5f64.powi(3), max_relative = 1e-14);

        let sup = classify(10, 1, 2.1).unwrap();
        assert_eq!(sup.regime, Regime::Supercritical);
        assert!(sup.rho > 1.0);
        assert_relative_eq!(
            sup.limit,
            3.279648999660727376006160272367270208657,
            max_relative = 1e-14
        );

        // Canonicalization: swapped order gives the same report.
        let swapped = classify(1, 2, 3.0).unwrap();
        assert_eq!((swapped.k1, swapped.k2), (2, 1));
        assert_eq!(swapped.base, sub.base);
        assert!(classify(0, 1, 3.0).is_err());
        assert!(classify(2, 1, 1.5).is_err());
    }

    #[test]
    fn exact_classification_no_tolerance_band() {
        // (4,1) at r² = 25/4 is exactly critical.
        assert_eq!(
            classify_exact(4, 1, &rat(25, 4)).unwrap(),
            Regime::Critical
        );
        assert_eq!(
            classify_exact(2, 1, &rat(9, 1)).unwrap(),
            Regime::Subcritical
        );
        assert_eq!(
            classify_exact(10, 1, &rat(441, 100)).unwrap(),
            Regime::Supercritical
        );
        // A hair away from critical in ℚ is not critical (larger r²
        // pushes ρ below 1).
        assert_eq!(
            classify_exact(4, 1, &rat(25_000_000_000_001, 4_000_000_000_000)).unwrap(),
            Regime::Subcritical
        );
        assert_eq!(
            classify_exact(4, 1, &rat(24_999_999_999_999, 4_000_000_000_000)).unwrap(),
            Regime::Supercritical
        );
        assert!(classify_exact(2, 1, &rat(4, 1)).is_err());
    }

    #[test]
    fn smooth_points_lie_on_zero_sets() {
        for &(k1, k2, r) in &[(2u32, 1u32, 3.0f64), (4, 1, 2.5), (7, 3, 5.0)] {
            let sp = smooth_points(k1, k2, r).unwrap();
            let (z1, z2) = sp.on_p;
            assert!((1.0 - (z1 + z2) / r).abs() < 1e-14);
            let (w1, w2) = sp.on_reverse;
            assert!((1.0 - (1.0 / w1 + 1.0 / w2) / r).abs() < 1e-14);
            assert_relative_eq!(z1 * w1, 1.0, max_relative = 1e-14);
            assert_relative_eq!(z2 * w2, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn scaled_coefficient_frozen_references() {
        // Subcritical (2,1,3) at t=256 (40-digit reference).
        let s = scaled_coeff(2, 1, 3.0, 256).unwrap();
        assert_relative_eq!(
            s,
            0.974325758898276369691023322790771901563,
            max_relative = 1e-10
        );
        // First-order deviation factor (scaled/L − 1)·t·72/55 ≈ −0.98743.
        let l = (3.0 / std::f64::consts::PI).sqrt();
        let factor = (s / l - 1.0) * 256.0 * 72.0 / 55.0;
        assert_relative_eq!(factor, -0.987428607533242860, max_relative = 1e-6);

        // Critical (4,1,2.5) at t=512: +1.8395% above 5/6.
        let s = scaled_coeff(4, 1, 2.5, 512).unwrap();
        assert_relative_eq!(
            s,
            0.848662267936515728062323702314136046785,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            s / (5.0 / 6.0) - 1.0,
            0.018394721523818874,
            max_relative = 1e-6
        );

        // Supercritical (10,1,2.1) at t=64: equal to c₀₀ to 3.5e−57.
        let s = scaled_coeff(10, 1, 2.1, 64).unwrap();
        assert_relative_eq!(
            s,
            3.279648999660727376006160272367270208657,
            max_relative = 1e-11
        );
    }

    #[test]
    fn subcritical_scaled_approaches_limit() {
        // Fitted first-order constant |scaled − L|·t stays near 55L/72.
        let l = (3.0 / std::f64::consts::PI).sqrt();
        let c_theory = 55.0 * l / 72.0;
        for &t in &[32u64, 64, 128, 256] {
            let s = scaled_coeff(2, 1, 3.0, t).unwrap();
            let fitted = (s - l).abs() * t as f64;
            assert!(
                fitted > 0.5 * c_theory && fitted < 2.0 * c_theory,
                "t={t}: fitted constant {fitted} vs theory {c_theory}"
            );
        }
    }

    #[test]
    fn supercritical_scaled_is_flat() {
        // Convergence is O(gap^t): already indistinguishable at t = 16.
        let limit = classify(10, 1, 2.1).unwrap().limit;
        for &t in &[16u64, 32, 64] {
            let s = scaled_coeff(10, 1, 2.1, t).unwrap();
            assert!(
                ((s - limit) / limit).abs() < 1e-10,
                "t={t}: {s} vs {limit}"
            );
        }
    }

    #[test]
    fn stirling_binomial_reference() {
        // β=1, t=50 against C(100,50) = 1.0089134454556419e29.
        let exact = 100891344545564193334812497256.0f64;
        let o2 = stirling_binomial(1.0, 50.0, 2).unwrap();
        assert!((o2 / exact - 1.0).abs() < 1e-6, "order 2: {o2}");
        let o0 = stirling_binomial(1.0, 50.0, 0).unwrap();
        assert!((o0 / exact - 1.0).abs() < 5e-3, "order 0: {o0}");
        assert!((o0 / exact - 1.0).abs() > 1e-3); // order 0 is genuinely cruder
        assert!(stirling_binomial(1.0, 50.0, 3).is_err());
        assert!(stirling_binomial(0.0, 50.0, 1).is_err());
    }

    #[test]
    fn corrected_prediction_matches_scaled_coefficient() {
        // (2,1,3): order-2 prediction at t = 256 should sit within O(t⁻³)
        // of the measured scaled coefficient — the third-order reference
        // term is ≈ 14.7/t³ ≈ 8.8e−7 here.
        let beta = rat(1, 2);
        let s = scaled_coeff(2, 1, 3.0, 256).unwrap();
        let p2 = corrected_prediction(&beta, 3.0, 256, 2).unwrap();
        assert!(
            ((s - p2) / s).abs() < 2e-6,
            "order-2 gap {:.3e}",
            ((s - p2) / s).abs()
        );
        let p1 = corrected_prediction(&beta, 3.0, 256, 1).unwrap();
        let p0 = corrected_prediction(&beta, 3.0, 256, 0).unwrap();
        assert!((s - p2).abs() < (s - p1).abs());
        assert!((s - p1).abs() < (s - p0).abs());
        // Order 0 is the plain limit.
        assert_relative_eq!(
            p0,
            (3.0 / std::f64::consts::PI).sqrt(),
            max_relative = 1e-13
        );
        // Regime guards.
        assert!(corrected_prediction(&rat(1, 4), 2.5, 64, 2).is_err()); // critical
        assert!(corrected_prediction(&rat(1, 10), 2.1, 64, 1).is_err()); // supercritical
        assert!(corrected_prediction(&rat(3, 2), 3.0, 64, 1).is_err()); // β > 1
        assert!(corrected_prediction(&rat(1, 2), 3.0, 64, 3).is_err());
    }

    #[test]
    fn exact_correction_chain_reference() {
        // β=1/2, x=4/9: e₁ = −55/36 and e₂ = 26065/2592 per unit of
        // T = 2t, matching the reference series after T → 2t.
        let (e1, e2) = scaled_correction_exact(&rat(1, 2), &rat(4, 9)).unwrap();
        assert_eq!(e1, rat(-55, 36));
        assert_eq!(e2, rat(26065, 2592));
        // Per-t coefficients with k1 = 2.
        assert_eq!(e1 / rat(2, 1), rat(-55, 72));
        assert_eq!(e2 / rat(4, 1), rat(26065, 10368));
        let (s1, s2) = stirling_correction_exact(&rat(1, 2)).unwrap();
        assert_eq!(s1, rat(7, 36));
        assert_eq!(s2, rat(49, 2592));
    }

    #[test]
    fn first_correction_closed_form_consistency() {
        // H(2,1,3) = 55/72 exactly, and −e₁/k1 = H for several triples.
        assert_eq!(
            subcritical_first_correction_exact(2, 1, &rat(9, 1)).unwrap(),
            rat(55, 72)
        );
        for &(k1, k2, r2n, r2d) in &[(2u32, 1u32, 9i64, 1i64), (3, 2, 16, 1), (5, 3, 9, 1), (4, 3, 49, 9)] {
            let r2 = rat(r2n, r2d);
            let h = subcritical_first_correction_exact(k1, k2, &r2).unwrap();
            let beta = rat(k2 as i64, k1 as i64);
            let x = rat(4, 1) / &r2;
            let (e1, _) = scaled_correction_exact(&beta, &x).unwrap();
            assert_eq!(
                -e1 / BigRational::from_integer(BigInt::from(k1)),
                h,
                "H mismatch at ({k1},{k2},r²={r2n}/{r2d})"
            );
        }
        // Float twin agrees.
        let hf = subcritical_first_correction(2, 1, 3.0).unwrap();
        assert_relative_eq!(hf, 55.0 / 72.0, max_relative = 1e-12);
        assert!(subcritical_first_correction(4, 1, 2.5).is_err());
    }

    #[test]
    fn melczer_reference_values() {
        assert_relative_eq!(
            melczer_reference(8).unwrap(),
            4.980068714192395104160448544596996285797e-6,
            max_relative = 1e-14
        );
        assert!(melczer_reference(0).is_err());
        // Measured agreement of the truncated series with the true
        // coefficients: (c/ref − 1)·t⁵ drifts slowly, staying in
        // [−1100, −550] over t ∈ {8,16,32,64}.
        for &(t, expect) in &[
            (8u64, -553.7035770886438f64),
            (16, -763.8546971665530),
            (32, -947.2712709257977),
            (64, -1085.2240758625269),
        ] {
            let tf = t as f64;
            let c = (scaled_coeff(2, 1, 3.0, t).unwrap() / tf.sqrt())
                * 0.25f64.powi(t as i32);
            let ratio = c / melczer_reference(t).unwrap();
            let drift = (ratio - 1.0) * tf.powi(5);
            assert_relative_eq!(drift, expect, max_relative = 1e-4);
        }
    }

    #[test]
    fn binomial_sum_reference_values() {
        // Exact t=1 value 7/3 (Catalan generating function collapse).
        let v = binomial_sum(2, 1, 1, 1e-14).unwrap();
        assert_relative_eq!(v.value, 7.0 / 3.0, max_relative = 1e-12);
        let cases = [
            (50u64, 1.659226407990542735121613879447874954248),
            (100, 1.613284363709305322249826607752445020929),
            (200, 1.580357065270056864182583890300880942011),
        ];
        for (t, expected) in cases {
            let v = binomial_sum(2, 1, t, 1e-13).unwrap();
            assert_relative_eq!(v.value, expected, max_relative = 1e-11);
        }
        // Monotone approach toward the limit 3/2 from above; measured
        // deviation at t=200 is 5.36% (t^{−1/2} rate).
        let limit = binomial_sum_limit(2, 1).unwrap();
        assert_relative_eq!(limit, 1.5, max_relative = 1e-15);
        let dev = binomial_sum(2, 1, 200, 1e-13).unwrap().value / limit - 1.0;
        assert!((dev - 0.0535714).abs() < 1e-4, "deviation {dev}");
        assert!(binomial_sum(2, 2, 10, 1e-10).is_err());
        assert!(binomial_sum(1, 2, 10, 1e-10).is_err());
        assert!(binomial_sum_limit(3, 3).is_err());
    }

    #[test]
    fn h_coefficients_reexported() {
        let (h1, h2) = h_coefficients(0.5, 1.0, 1);
        assert_relative_eq!(h1, -1.0, max_relative = 1e-15);
        assert_relative_eq!(h2, 1.0, max_relative = 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn trichotomy_is_exhaustive_and_consistent(
            k1 in 1u32..=24,
            k2 in 1u32..=24,
            r in 2.05f64..12.0,
        ) {
            let rep = classify(k1, k2, r).unwrap();
            let expected = (rep.k1 as f64 + rep.k2 as f64).powi(2)
                / (r * r * rep.k1 as f64 * rep.k2 as f64);
            prop_assert!((rep.rho - expected).abs() < 1e-13);
            match rep.regime {
                Regime::Subcritical => prop_assert!(rep.rho < 1.0),
                Regime::Critical => prop_assert!((rep.rho - 1.0).abs() <= 1e-12),
                Regime::Supercritical => prop_assert!(rep.rho > 1.0),
            }
            prop_assert!(rep.base > 0.0 && rep.limit > 0.0);
        }

        #[test]
        fn smooth_point_products_are_one(
            k1 in 1u32..=30,
            k2 in 1u32..=30,
            r in 2.05f64..12.0,
        ) {
            let sp = smooth_points(k1, k2, r).unwrap();
            prop_assert!((sp.on_p.0 * sp.on_reverse.0 - 1.0).abs() < 1e-13);
            prop_assert!((sp.on_p.1 * sp.on_reverse.1 - 1.0).abs() < 1e-13);
        }

        #[test]
        fn prediction_orders_refine(
            seed_t in 5u64..9, // t = 32..256 as powers of two
        ) {
            let t = 1u64 << seed_t;
            let beta = rat(1, 2);
            let s = scaled_coeff(2, 1, 3.0, t).unwrap();
            let e0 = (s - corrected_prediction(&beta, 3.0, t, 0).unwrap()).abs();
            let e1 = (s - corrected_prediction(&beta, 3.0, t, 1).unwrap()).abs();
            let e2 = (s - corrected_prediction(&beta, 3.0, t, 2).unwrap()).abs();
            prop_assert!(e1 < e0 && e2 < e1, "t={t}: {e0} {e1} {e2}");
        }
    }
}
