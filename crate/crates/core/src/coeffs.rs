//! Fourier coefficients `c_{k1,k2}` of the spectral density
//! `f = 1/(p·p̄(1/z))` of `p(z1,z2) = 1 − (z1+z2)/r`, `r > 2`.
//!
//! Three independent routes are provided:
//!
//! * closed forms — `c = (1−4/r²)^{−1/2} a^{|k1|+|k2|}` on the mixed-sign
//!   quadrants (`a` the in-disk intersecting-zero component) and
//!   `c = C(K,k1)/r^K · ₃F₂(1, K/2+1, (K+1)/2; k1+1, k2+1; 4/r²)`,
//!   `K = k1+k2`, on the same-sign quadrants, the `₃F₂` evaluated through
//!   its two-term `₂F₁` reduction at argument `(1−√(1−x))/2 ≤ 1/2`;
//! * a positive-term series oracle (the double sum over the expansion of
//!   `1/p` reduced to a single series in `i`);
//! * a trapezoidal quadrature oracle on the torus (spectrally accurate for
//!   this analytic integrand).
//!
//! A recurrence residual encodes the defining relation `f·p̄(1/z) = 1/p`
//! coefficient-wise and couples all quadrants.

use crate::error::{check_r, Error, Result};
use crate::format::fmt_g17;
use crate::hypergeom::{binomial, ln_binomial, Engine, SeriesValue};

/// A coefficient index pair together with the polynomial parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffKey {
    pub k1: i64,
    pub k2: i64,
    pub r: f64,
}

impl CoeffKey {
    pub fn new(k1: i64, k2: i64, r: f64) -> Result<Self> {
        check_r(r)?;
        Ok(CoeffKey { k1, k2, r })
    }
}

/// The in-disk component `a = r/2 − √(r²/4−1)` of the intersecting zeros
/// of `p` and its reversal, together with its reciprocal; `a + 1/a = r`.
#[derive(Debug, Clone, Copy)]
pub struct IntersectingZero {
    pub a: f64,
    pub a_inv: f64,
}

/// Computes the intersecting-zero component cancellation-free as
/// `a = 2/(r + √(r²−4))`.
pub fn intersecting_zero(r: f64) -> Result<IntersectingZero> {
    check_r(r)?;
    let root = (r * r - 4.0).sqrt();
    let a = 2.0 / (r + root);
    Ok(IntersectingZero { a, a_inv: 1.0 / a })
}

/// The spectral density `f(e^{iθ}, e^{iφ}) = 1/|1−(e^{iθ}+e^{iφ})/r|²`
/// on the torus (real and strictly positive for `r > 2`).
pub fn spectral_density(r: f64, theta: f64, phi: f64) -> Result<f64> {
    check_r(r)?;
    let re = 1.0 - (theta.cos() + phi.cos()) / r;
    let im = (theta.sin() + phi.sin()) / r;
    Ok(1.0 / (re * re + im * im))
}

fn quadrant_error(key: &CoeffKey, expected: &str) -> Error {
    Error::domain(format!(
        "wrong quadrant for ({}, {}): expected {expected}",
        key.k1, key.k2
    ))
}

/// Mixed-sign (or axis) coefficient `c = (1−4/r²)^{−1/2} a^{|k1|+|k2|}`,
/// valid when `k1·k2 ≤ 0`.
pub fn coeff_mixed(key: &CoeffKey) -> Result<f64> {
    check_r(key.r)?;
    if key.k1 * key.k2 > 0 {
        return Err(quadrant_error(key, "k1·k2 ≤ 0"));
    }
    let m = key.k1.unsigned_abs() + key.k2.unsigned_abs();
    if m > i32::MAX as u64 {
        return Err(Error::resource(format!("index sum {m} too large")));
    }
    let zero = intersecting_zero(key.r)?;
    // (1−4/r²)^{−1/2} = r/√(r²−4), cancellation-free near r = 2.
    let c00 = key.r / ((key.r * key.r - 4.0).sqrt());
    Ok(c00 * zero.a.powi(m as i32))
}

/// Same-sign coefficient
/// `c = C(K,k1)/r^K · ₃F₂(1, K/2+1, (K+1)/2; k1+1, k2+1; 4/r²)`,
/// valid when `k1·k2 > 0`; the `₃F₂` is evaluated through its two-term
/// `₂F₁` reduction.  Indices with `|k1|+|k2| > 60` are computed in log
/// space to keep the binomial prefactor in range.
pub fn coeff_positive(key: &CoeffKey) -> Result<f64> {
    check_r(key.r)?;
    if key.k1 * key.k2 <= 0 {
        return Err(quadrant_error(key, "k1·k2 > 0"));
    }
    let (k1, k2) = canonical_pair(key.k1, key.k2)?;
    let big_k = k1 as u64 + k2 as u64;
    if big_k > 60 {
        return Ok(ln_coeff_positive(k1, k2, key.r)?.exp());
    }
    let x = 4.0 / (key.r * key.r);
    let engine = Engine::default();
    let f = engine.reduce_part2(k1, k2, x)?;
    Ok(binomial(big_k, k1 as u64)? / key.r.powi(big_k as i32) * f)
}

/// Natural logarithm of the same-sign coefficient, usable far beyond the
/// overflow range of the prefactor: `ln C(K,k1) − K ln r + ln ₃F₂`.
pub fn ln_coeff_positive(k1: u32, k2: u32, r: f64) -> Result<f64> {
    check_r(r)?;
    if k1 == 0 || k2 == 0 {
        return Err(Error::domain(
            "log-space route requires k1, k2 ≥ 1".to_string(),
        ));
    }
    let x = 4.0 / (r * r);
    let engine = Engine::default();
    let f = engine.reduce_part2(k1, k2, x)?;
    let big_k = k1 as u64 + k2 as u64;
    Ok(ln_binomial(big_k, k1 as u64) - big_k as f64 * r.ln() + f.ln())
}

/// Canonicalizes a same-sign pair: absolute values, larger index first.
fn canonical_pair(k1: i64, k2: i64) -> Result<(u32, u32)> {
    let a = k1.unsigned_abs();
    let b = k2.unsigned_abs();
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi > u32::MAX as u64 / 2 {
        return Err(Error::resource(format!("index {hi} too large")));
    }
    Ok((hi as u32, lo as u32))
}

/// Quadrant dispatch: mixed-sign closed form for `k1·k2 ≤ 0`, reduced
/// `₃F₂` closed form otherwise; respects `c_{−k1,−k2} = c_{k1,k2}` and
/// `c_{k2,k1} = c_{k1,k2}` exactly (canonicalization happens first).
pub fn coeff(key: &CoeffKey) -> Result<f64> {
    if key.k1 * key.k2 > 0 {
        coeff_positive(key)
    } else {
        coeff_mixed(key)
    }
}

/// Positive-term series oracle: both quadrants reduce to single series
/// `Σ_i t_i` with `t_{i+1}/t_i = (K+2i+1)(K+2i+2)/((k1+1+i)(k2+1+i)r²)`
/// — the same-sign expansion uses `(k1,k2)` with prefactor `C(K,k1)/r^K`,
/// the mixed-sign double sum collapses (column convolution) to the pair
/// `(0, |k1|+|k2|)` with prefactor `1/r^m`.  Terms are positive; the tail
/// bound uses the decreasing majorant `R_i = (u+v)²/(uv·r²)` ≥ every later
/// ratio, where `u = k1+1+i`, `v = k2+1+i`.
pub fn coeff_series_oracle(key: &CoeffKey, tol: f64) -> Result<SeriesValue> {
    check_r(key.r)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let (k1, k2, ln_pref) = if key.k1 * key.k2 > 0 {
        let (hi, lo) = canonical_pair(key.k1, key.k2)?;
        let big_k = hi as u64 + lo as u64;
        (
            hi as u64,
            lo as u64,
            ln_binomial(big_k, hi as u64) - big_k as f64 * key.r.ln(),
        )
    } else {
        let m = key.k1.unsigned_abs() + key.k2.unsigned_abs();
        (0, m, -(m as f64) * key.r.ln())
    };
    let r2 = key.r * key.r;
    let big_k = (k1 + k2) as f64;
    let mut term = ln_pref.exp();
    let mut sum = term;
    let max_terms = 100_000_000u64;
    for i in 0..max_terms {
        let fi = i as f64;
        let ratio = (big_k + 2.0 * fi + 1.0) * (big_k + 2.0 * fi + 2.0)
            / ((k1 as f64 + 1.0 + fi) * (k2 as f64 + 1.0 + fi) * r2);
        term *= ratio;
        // Majorant of every ratio from index i+1 on.
        let u = k1 as f64 + 2.0 + fi;
        let v = k2 as f64 + 2.0 + fi;
        let majorant = (u + v) * (u + v) / (u * v * r2);
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
        "coefficient series did not reach tolerance {tol}"
    )))
}

/// Precomputed torus grid of the spectral density for the trapezoidal
/// quadrature oracle: `G[m][n] = f(e^{2πim/N}, e^{2πin/N})` plus twiddle
/// tables.  Immutable after construction.
#[derive(Debug, Clone)]
pub struct QuadratureTable {
    r: f64,
    n: usize,
    g: Vec<f64>,
    cos_tab: Vec<f64>,
    sin_tab: Vec<f64>,
}

impl QuadratureTable {
    pub fn new(r: f64, n: usize) -> Result<Self> {
        check_r(r)?;
        if n < 4 {
            return Err(Error::domain(format!("grid size must be ≥ 4, got {n}")));
        }
        if n > 4096 {
            return Err(Error::resource(format!(
                "quadrature grid {n}×{n} exceeds the memory guard (4096)"
            )));
        }
        let step = 2.0 * std::f64::consts::PI / n as f64;
        let mut cos_tab = Vec::with_capacity(n);
        let mut sin_tab = Vec::with_capacity(n);
        for j in 0..n {
            let angle = step * j as f64;
            cos_tab.push(angle.cos());
            sin_tab.push(angle.sin());
        }
        let mut g = Vec::with_capacity(n * n);
        for m in 0..n {
            for j in 0..n {
                let re = 1.0 - (cos_tab[m] + cos_tab[j]) / r;
                let im = (sin_tab[m] + sin_tab[j]) / r;
                g.push(1.0 / (re * re + im * im));
            }
        }
        Ok(QuadratureTable {
            r,
            n,
            g,
            cos_tab,
            sin_tab,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Trapezoidal approximation of
    /// `(2π)^{−2} ∫∫ f e^{−i(k1θ+k2φ)} dθ dφ`; the imaginary part must
    /// vanish by conjugate symmetry and is checked (≤ 1e−10), then
    /// discarded.  Requires `N ≥ 4(|k1|+|k2|)` grid resolution.
    pub fn coeff(&self, k1: i64, k2: i64) -> Result<f64> {
        let m_sum = k1.unsigned_abs() + k2.unsigned_abs();
        if (self.n as u64) < 4 * m_sum {
            return Err(Error::domain(format!(
                "grid {}×{} cannot resolve ({k1}, {k2}): need N ≥ {}",
                self.n,
                self.n,
                4 * m_sum
            )));
        }
        let n = self.n as i64;
        // Compensated (Kahan) accumulation of the oscillatory sums.
        let mut re_sum = 0.0f64;
        let mut re_c = 0.0f64;
        let mut im_sum = 0.0f64;
        let mut im_c = 0.0f64;
        for m in 0..n {
            let row = (m as usize) * self.n;
            let base = (k1 * m).rem_euclid(n);
            for j in 0..n {
                let idx = (base + k2 * j).rem_euclid(n) as usize;
                let gv = self.g[row + j as usize];
                // e^{−i·angle}: real part cos, imaginary part −sin.
                let y = gv * self.cos_tab[idx] - re_c;
                let t = re_sum + y;
                re_c = (t - re_sum) - y;
                re_sum = t;
                let y = -gv * self.sin_tab[idx] - im_c;
                let t = im_sum + y;
                im_c = (t - im_sum) - y;
                im_sum = t;
            }
        }
        let scale = (self.n * self.n) as f64;
        let re = re_sum / scale;
        let im = im_sum / scale;
        if im.abs() > 1e-10 {
            return Err(Error::convergence(format!(
                "quadrature imaginary part {im:.3e} exceeds 1e-10"
            )));
        }
        Ok(re)
    }
}

/// Convenience wrapper: builds the table for `key.r` and evaluates one key.
pub fn coeff_quadrature_oracle(key: &CoeffKey, n: usize) -> Result<f64> {
    QuadratureTable::new(key.r, n)?.coeff(key.k1, key.k2)
}

/// Residual of the defining relation `f·p̄(1/z) = 1/p` at one index:
/// `c_{k1,k2} − (c_{k1+1,k2} + c_{k1,k2+1})/r − s_{k1,k2}` with source
/// `s = C(k1+k2,k1)/r^{k1+k2}` when `k1,k2 ≥ 0`, else `0`; identically
/// zero for exact coefficients.
pub fn recurrence_residual(key: &CoeffKey) -> Result<f64> {
    let c = coeff(key)?;
    let c_right = coeff(&CoeffKey { k1: key.k1 + 1, ..*key })?;
    let c_up = coeff(&CoeffKey { k2: key.k2 + 1, ..*key })?;
    let source = if key.k1 >= 0 && key.k2 >= 0 {
        let big_k = (key.k1 + key.k2) as u64;
        binomial(big_k, key.k1 as u64)? / key.r.powi(big_k as i32)
    } else {
        0.0
    };
    Ok(c - (c_right + c_up) / key.r - source)
}

/// Dense table of `c_{k1,k2}` over the square `[−kmax, kmax]²`, stored
/// row-major in `k1` (outer) then `k2`; entries are bit-identical to
/// pointwise [`coeff`] calls.
#[derive(Debug, Clone)]
pub struct CoeffGrid {
    kmax: u64,
    r: f64,
    values: Vec<f64>,
}

impl CoeffGrid {
    pub fn compute(kmax: u64, r: f64) -> Result<Self> {
        check_r(r)?;
        if kmax > 4096 {
            return Err(Error::resource(format!(
                "grid half-width {kmax} exceeds the memory guard (4096)"
            )));
        }
        let side = 2 * kmax + 1;
        let mut values = Vec::with_capacity((side * side) as usize);
        for k1 in -(kmax as i64)..=kmax as i64 {
            for k2 in -(kmax as i64)..=kmax as i64 {
                values.push(coeff(&CoeffKey { k1, k2, r })?);
            }
        }
        Ok(CoeffGrid { kmax, r, values })
    }

    pub fn kmax(&self) -> u64 {
        self.kmax
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn get(&self, k1: i64, k2: i64) -> Option<f64> {
        let k = self.kmax as i64;
        if k1.abs() > k || k2.abs() > k {
            return None;
        }
        let side = 2 * k + 1;
        Some(self.values[((k1 + k) * side + (k2 + k)) as usize])
    }

    /// CSV export: header `k1,k2,c`, 17-significant-digit values,
    /// row-major order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k1,k2,c\n");
        let k = self.kmax as i64;
        for k1 in -k..=k {
            for k2 in -k..=k {
                out.push_str(&format!(
                    "{},{},{}\n",
                    k1,
                    k2,
                    fmt_g17(self.get(k1, k2).unwrap())
                ));
            }
        }
        out
    }

    /// JSON export mirroring the CSV triples.
    pub fn to_json(&self) -> String {
        let mut out = format!(
            "{{\"kmax\":{},\"r\":{},\"values\":[",
            self.kmax,
            fmt_g17(self.r)
        );
        let k = self.kmax as i64;
        let mut first = true;
        for k1 in -k..=k {
            for k2 in -k..=k {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(&format!(
                    "{{\"k1\":{},\"k2\":{},\"c\":{}}}",
                    k1,
                    k2,
                    fmt_g17(self.get(k1, k2).unwrap())
                ));
            }
        }
        out.push_str("]}");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn key(k1: i64, k2: i64, r: f64) -> CoeffKey {
        CoeffKey { k1, k2, r }
    }

    #[test]
    fn intersecting_zero_reference_values() {
        // 40-digit references for the five standard r values.
        let cases = [
            (2.1, 0.729843788128357565675589116268909336774),
            (2.5, 0.5),
            (3.0, 0.3819660112501051517954131656343618822797),
            (5.0, 0.2087121525220799967059764031359957555078),
            (10.0, 0.1010205144336438036054318505882172160681),
        ];
        for (r, expected) in cases {
            let z = intersecting_zero(r).unwrap();
            assert_relative_eq!(z.a, expected, max_relative = 1e-15);
            assert_relative_eq!(z.a + z.a_inv, r, max_relative = 1e-14);
            assert!((z.a * z.a_inv - 1.0).abs() < 1e-14);
            assert!(z.a > 0.0 && z.a < 1.0);
        }
        assert!(intersecting_zero(2.0).is_err());
        // Monotone decrease toward 0⁺.
        assert!(intersecting_zero(100.0).unwrap().a < intersecting_zero(10.0).unwrap().a);
    }

    #[test]
    fn mixed_quadrant_reference_values() {
        assert_relative_eq!(
            coeff_mixed(&key(0, 0, 3.0)).unwrap(),
            1.341640786499873817845504201238765741264,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            coeff_mixed(&key(0, 0, 2.1)).unwrap(),
            3.279648999660727376006160272367270208657,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            coeff_mixed(&key(1, -1, 3.0)).unwrap(),
            0.1957427527495583624592647043356800944253,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            coeff_mixed(&key(5, -7, 10.0)).unwrap(),
            1.152867224899792690426918116216408511925e-12,
            max_relative = 1e-14
        );
        // (k,0), (0,k), (−k,0) all coincide.
        let v = coeff_mixed(&key(3, 0, 3.0)).unwrap();
        assert_eq!(coeff_mixed(&key(0, 3, 3.0)).unwrap(), v);
        assert_eq!(coeff_mixed(&key(-3, 0, 3.0)).unwrap(), v);
        assert_relative_eq!(v, 0.07476707849886436060953781114889167138, max_relative = 1e-14);
        assert!(coeff_mixed(&key(2, 1, 3.0)).is_err());
    }

    #[test]
    fn positive_quadrant_reference_values() {
        assert_relative_eq!(
            coeff_positive(&key(1, 1, 3.0)).unwrap(),
            0.3416407864998738178455042012387657412644,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            coeff_positive(&key(2, 1, 3.0)).unwrap(),
            0.1791278464164773934349229685248152785632,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            coeff_positive(&key(2, 2, 3.0)).unwrap(),
            0.1194185642776515956232819790165435190421,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            coeff_positive(&key(16, 8, 3.0)).unwrap(),
            4.89591704606508882892667752947619859650e-6,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            coeff_positive(&key(2, 1, 2.1)).unwrap(),
            1.917440973453287554330277809795157528613,
            max_relative = 1e-13
        );
        // Same-sign negatives map to the same value.
        assert_eq!(
            coeff_positive(&key(-2, -1, 3.0)).unwrap(),
            coeff_positive(&key(2, 1, 3.0)).unwrap()
        );
        assert!(coeff_positive(&key(1, -1, 3.0)).is_err());
        assert!(coeff_positive(&key(0, 4, 3.0)).is_err());
    }

    #[test]
    fn log_space_route_is_consistent() {
        // Same value through the linear and log routes near the switch.
        for (k1, k2) in [(20u32, 20u32), (40, 21), (31, 30)] {
            let lin = {
                let x = 4.0 / 9.0;
                let e = Engine::default();
                let f = e.reduce_part2(k1, k2, x).unwrap();
                let big_k = (k1 + k2) as u64;
                binomial(big_k, k1 as u64).unwrap() / 3.0f64.powi(big_k as i32) * f
            };
            let logv = ln_coeff_positive(k1, k2, 3.0).unwrap().exp();
            assert_relative_eq!(lin, logv, max_relative = 1e-12);
        }
        // Far beyond prefactor overflow: finite log, underflowing value.
        let lnc = ln_coeff_positive(1500, 1500, 3.0).unwrap();
        assert!(lnc.is_finite() && lnc < -1000.0);
        assert_eq!(coeff_positive(&key(1500, 1500, 3.0)).unwrap(), lnc.exp());
    }

    #[test]
    fn dispatch_and_symmetries() {
        let v = coeff(&key(0, 0, 3.0)).unwrap();
        assert_relative_eq!(v, 1.341640786499873817845504201238765741264, max_relative = 1e-15);
        assert_eq!(
            coeff(&key(-2, -1, 3.0)).unwrap(),
            coeff(&key(2, 1, 3.0)).unwrap()
        );
        assert_eq!(
            coeff(&key(1, 2, 3.0)).unwrap(),
            coeff(&key(2, 1, 3.0)).unwrap()
        );
        assert_eq!(
            coeff(&key(-3, 2, 3.0)).unwrap(),
            coeff(&key(3, -2, 3.0)).unwrap()
        );
    }

    #[test]
    fn series_oracle_reference_behaviour() {
        // (1,1,3): partial sums 2/9, 2/9+2/27, … → 3/√5 − 1.
        let sv = coeff_series_oracle(&key(1, 1, 3.0), 1e-13).unwrap();
        assert_relative_eq!(
            sv.value,
            0.3416407864998738178455042012387657412644,
            max_relative = 1e-12
        );
        assert!(sv.tail_bound <= 1e-12 * sv.value.abs() * 10.0);
        // Mixed key matches the closed form.
        let sv = coeff_series_oracle(&key(1, -1, 3.0), 1e-13).unwrap();
        assert_relative_eq!(
            sv.value,
            coeff_mixed(&key(1, -1, 3.0)).unwrap(),
            max_relative = 1e-12
        );
        // (0,0,3): Σ C(2i,i)/9^i = 3/√5.
        let sv = coeff_series_oracle(&key(0, 0, 3.0), 1e-13).unwrap();
        assert_relative_eq!(
            sv.value,
            1.341640786499873817845504201238765741264,
            max_relative = 1e-12
        );
        // Same-sign closed form at (2,1) again.
        let sv = coeff_series_oracle(&key(2, 1, 3.0), 1e-13).unwrap();
        assert_relative_eq!(
            sv.value,
            0.1791278464164773934349229685248152785632,
            max_relative = 1e-12
        );
    }

    #[test]
    fn series_oracle_initial_terms() {
        // First ratio of the (1,1) expansion is (K+1)(K+2)/(4r²) = 1/3.
        let one_term = coeff_series_oracle(&key(1, 1, 3.0), 2.0).unwrap();
        // tol = 2.0 forces an almost immediate stop; check term counts grow
        // as tol tightens.
        let fine = coeff_series_oracle(&key(1, 1, 3.0), 1e-13).unwrap();
        assert!(fine.terms_used > one_term.terms_used);
        assert!(one_term.value <= fine.value);
    }

    #[test]
    fn quadrature_reference_values() {
        let table = QuadratureTable::new(3.0, 128).unwrap();
        assert_relative_eq!(
            table.coeff(0, 0).unwrap(),
            1.341640786499873817845504201238765741264,
            epsilon = 1e-10
        );
        // c00 dominates every coefficient (positive integrand).
        let c00 = table.coeff(0, 0).unwrap();
        for (k1, k2) in [(1, 0), (2, 1), (1, -1), (5, 5)] {
            assert!(table.coeff(k1, k2).unwrap().abs() < c00);
        }
        // (2,1) at r = 2.1 with N = 512 matches the closed form to 1e−8.
        let v = coeff_quadrature_oracle(&key(2, 1, 2.1), 512).unwrap();
        assert_relative_eq!(
            v,
            coeff_positive(&key(2, 1, 2.1)).unwrap(),
            max_relative = 1e-8
        );
        // Resolution guard.
        assert!(QuadratureTable::new(3.0, 64).unwrap().coeff(10, 10).is_err());
        assert!(QuadratureTable::new(3.0, 2).is_err());
        assert!(QuadratureTable::new(3.0, 8192).is_err());
    }

    #[test]
    fn recurrence_residual_reference_points() {
        assert!(recurrence_residual(&key(0, 0, 3.0)).unwrap().abs() < 1e-12);
        assert!(recurrence_residual(&key(1, 0, 3.0)).unwrap().abs() < 1e-11);
        // Pure homogeneous relation away from the source quadrant.
        assert!(recurrence_residual(&key(-4, 2, 3.0)).unwrap().abs() < 1e-13);
        assert!(recurrence_residual(&key(-2, -5, 2.5)).unwrap().abs() < 1e-13);
        // Boundary index coupling all three formula branches.
        assert!(recurrence_residual(&key(0, 2, 3.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn univariate_section_recursion() {
        // c_{k,0} = c₀₀ aᵏ and c_{k,0} − (c_{k−1,0}+c_{k+1,0})/r = δ_{k0}.
        let r = 3.0;
        let z = intersecting_zero(r).unwrap();
        let c00 = coeff(&key(0, 0, r)).unwrap();
        for k in 0..=20i64 {
            let ck = coeff(&key(k, 0, r)).unwrap();
            assert_relative_eq!(ck, c00 * z.a.powi(k as i32), max_relative = 1e-13);
            let left = coeff(&key(k - 1, 0, r)).unwrap();
            let right = coeff(&key(k + 1, 0, r)).unwrap();
            let delta = if k == 0 { 1.0 } else { 0.0 };
            assert!(
                (ck - (left + right) / r - delta).abs() < 1e-12,
                "univariate recursion fails at k = {k}"
            );
        }
    }

    #[test]
    fn grid_matches_pointwise_calls() {
        let grid = CoeffGrid::compute(2, 3.0).unwrap();
        for k1 in -2..=2i64 {
            for k2 in -2..=2i64 {
                let direct = coeff(&key(k1, k2, 3.0)).unwrap();
                assert_eq!(grid.get(k1, k2).unwrap().to_bits(), direct.to_bits());
            }
        }
        assert_eq!(grid.get(3, 0), None);
        // Symmetry of the table.
        for k1 in -2..=2i64 {
            for k2 in -2..=2i64 {
                assert_eq!(grid.get(k1, k2), grid.get(k2, k1));
                assert_eq!(grid.get(k1, k2), grid.get(-k1, -k2));
            }
        }
        let single = CoeffGrid::compute(0, 3.0).unwrap();
        assert_eq!(single.get(0, 0).unwrap(), coeff(&key(0, 0, 3.0)).unwrap());
        assert!(CoeffGrid::compute(5000, 3.0).is_err());
    }

    #[test]
    fn grid_export_golden_lines() {
        let grid = CoeffGrid::compute(1, 3.0).unwrap();
        let csv = grid.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "k1,k2,c");
        // Row-major from (−1,−1); nine data rows.
        let first = lines.next().unwrap();
        assert!(first.starts_with("-1,-1,"));
        assert_eq!(csv.lines().count(), 10);
        let json = grid.to_json();
        assert!(json.starts_with("{\"kmax\":1,\"r\":3"));
        assert!(json.contains("\"k1\":0,\"k2\":0,\"c\":1.3416407864998738"));
        assert!(json.ends_with("]}"));
    }

    #[test]
    fn monotone_decay_on_diagonal() {
        for r in [2.1, 3.0, 10.0] {
            let mut prev = coeff(&key(0, 0, r)).unwrap();
            for k in 1..=12i64 {
                let v = coeff(&key(k, k, r)).unwrap();
                assert!(v < prev, "c_{{k,k}} not decreasing at k={k}, r={r}");
                assert!(v > 0.0);
                prev = v;
            }
        }
    }

    #[test]
    fn moment_blocks_positive_semidefinite() {
        // 2×2 and 3×3 moment matrices M[α,β] = c_{α−β} over small index
        // sets must be PSD (f > 0); checked by shifted Cholesky.
        let r = 3.0;
        let window: Vec<(i64, i64)> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i as i64, j as i64)))
            .collect();
        let entry = |p: (i64, i64), q: (i64, i64)| {
            coeff(&key(p.0 - q.0, p.1 - q.1, r)).unwrap()
        };
        let psd = |idx: &[(i64, i64)]| {
            let n = idx.len();
            let mut m = vec![vec![0.0f64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = entry(idx[i], idx[j]);
                }
            }
            let shift = 1e-10 * m[0][0];
            cholesky_ok(&mut m, shift)
        };
        for i in 0..window.len() {
            for j in i + 1..window.len() {
                assert!(psd(&[window[i], window[j]]), "2×2 block ({i},{j})");
                for l in j + 1..window.len() {
                    assert!(
                        psd(&[window[i], window[j], window[l]]),
                        "3×3 block ({i},{j},{l})"
                    );
                }
            }
        }
    }

    /// In-place Cholesky of `m + shift·I`; true iff it succeeds, i.e. all
    /// eigenvalues of `m` are ≥ −shift.
    fn cholesky_ok(m: &mut [Vec<f64>], shift: f64) -> bool {
        let n = m.len();
        for i in 0..n {
            m[i][i] += shift;
        }
        for i in 0..n {
            for j in 0..=i {
                let mut s = m[i][j];
                for l in 0..j {
                    s -= m[i][l] * m[j][l];
                }
                if i == j {
                    if s <= 0.0 {
                        return false;
                    }
                    m[i][j] = s.sqrt();
                } else {
                    m[i][j] = s / m[j][j];
                }
            }
        }
        true
    }

    #[test]
    fn density_is_positive_and_consistent() {
        let r = 2.5;
        let v = spectral_density(r, 0.7, -1.3).unwrap();
        assert!(v > 0.0);
        // Density at the worst point θ=φ=0 is (1−2/r)^{−2}.
        let peak = spectral_density(r, 0.0, 0.0).unwrap();
        assert_relative_eq!(peak, (1.0 - 2.0 / r).powi(-2), max_relative = 1e-13);
        assert!(spectral_density(1.9, 0.0, 0.0).is_err());
    }

    #[test]
    fn three_route_agreement_sample() {
        // Light version of the full acceptance sweep: |k| ≤ 6, two r.
        for &r in &[2.5f64, 3.0] {
            let table = QuadratureTable::new(r, 256).unwrap();
            for k1 in -6..=6i64 {
                for k2 in -6..=6i64 {
                    let closed = coeff(&key(k1, k2, r)).unwrap();
                    let series = coeff_series_oracle(&key(k1, k2, r), 1e-12)
                        .unwrap()
                        .value;
                    let quad = table.coeff(k1, k2).unwrap();
                    let scale = closed.abs().max(1e-13);
                    assert!(
                        ((closed - series) / scale).abs() < 1e-9,
                        "closed/series at ({k1},{k2},{r})"
                    );
                    assert!(
                        ((closed - quad) / scale).abs() < 1e-8,
                        "closed/quadrature at ({k1},{k2},{r}): {closed} vs {quad}"
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn coeff_symmetries_and_positivity(
            k1 in -10i64..=10,
            k2 in -10i64..=10,
            r in 2.05f64..12.0,
        ) {
            let v = coeff(&key(k1, k2, r)).unwrap();
            prop_assert!(v > 0.0);
            prop_assert_eq!(v.to_bits(), coeff(&key(k2, k1, r)).unwrap().to_bits());
            prop_assert_eq!(v.to_bits(), coeff(&key(-k1, -k2, r)).unwrap().to_bits());
            let c00 = coeff(&key(0, 0, r)).unwrap();
            prop_assert!(v <= c00 * (1.0 + 1e-12));
        }

        #[test]
        fn recurrence_residual_vanishes(
            k1 in -8i64..=8,
            k2 in -8i64..=8,
            r in 2.05f64..12.0,
        ) {
            let res = recurrence_residual(&key(k1, k2, r)).unwrap();
            let scale = coeff(&key(0, 0, r)).unwrap();
            prop_assert!(
                res.abs() <= 1e-10 * scale,
                "residual {res} at ({k1},{k2},{r})"
            );
        }

        #[test]
        fn series_oracle_agrees_with_closed_form(
            k1 in -9i64..=9,
            k2 in -9i64..=9,
            r in 2.1f64..10.0,
        ) {
            let closed = coeff(&key(k1, k2, r)).unwrap();
            let sv = coeff_series_oracle(&key(k1, k2, r), 1e-12).unwrap();
            let scale = closed.abs().max(1e-13);
            prop_assert!(
                ((closed - sv.value) / scale).abs() < 1e-9,
                "({k1},{k2},{r}): {closed} vs {}", sv.value
            );
        }
    }
}
