//! Working-precision abstraction: plain `f64` or double-double.
//!
//! Most of the crate is perfectly served by f64. Two places are not:
//!
//! * identity residuals that must be certified at 1e−10 while the combined
//!   terms reach 1e5–1e26, and
//! * reduction formulas whose closed term and 2F1 terms cancel from ~1e13
//!   down to O(1).
//!
//! For those, [`Dd`] provides an unevaluated sum of two f64s (~31 significant
//! digits). The implementation is the classical error-free-transformation
//! toolkit: `two_sum`, `quick_two_sum`, and an FMA-based `two_prod`
//! (`f64::mul_add` is correctly rounded on every Rust target, in hardware or
//! via compiler-rt). Division is three-step long division on top of the exact
//! product; square root is one Karp–Markstein refinement of the f64 seed.
//!
//! The [`Real`] trait lets series kernels be written once and instantiated at
//! either precision; [`Precision`] is the runtime selector carried by
//! user-facing engines.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Runtime precision selector for user-facing operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// IEEE double precision (default).
    #[default]
    Standard,
    /// Double-double (~31 significant digits) for cancellation-heavy paths.
    Extended,
}

impl Precision {
    /// Parses `"standard"` / `"extended"` (case-insensitive).
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" | "f64" => Some(Precision::Standard),
            "extended" | "dd" => Some(Precision::Extended),
            _ => None,
        }
    }

    /// Canonical lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            Precision::Standard => "standard",
            Precision::Extended => "extended",
        }
    }
}

/// Sum and rounding error of `a + b` (Knuth's TwoSum; no magnitude ordering
/// assumed).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Sum and rounding error of `a + b` assuming `|a| ≥ |b|` (Dekker).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Product and rounding error of `a · b` via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

/// Double-double number: the unevaluated sum `hi + lo` with
/// `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// Builds from an already-normalized pair. Debug builds check the
    /// non-overlap invariant.
    #[inline]
    pub fn from_parts(hi: f64, lo: f64) -> Dd {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    /// Exact sum of two f64s (renormalized, no magnitude assumption).
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact product of two f64s.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Nearest f64.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Square root by Karp–Markstein refinement of the f64 seed; full
    /// double-double accuracy for positive finite inputs.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        if self.hi < 0.0 {
            return Dd {
                hi: f64::NAN,
                lo: 0.0,
            };
        }
        let inv = 1.0 / self.hi.sqrt();
        let approx = self.hi * inv;
        let approx_sq = Dd::from_prod(approx, approx);
        let correction = (self - approx_sq).hi * (inv * 0.5);
        let (hi, lo) = quick_two_sum(approx, correction);
        Dd { hi, lo }
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = if n < 0 { Dd::ONE / self } else { self };
        let mut exp = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplication by a plain f64 (cheaper than widening the scalar).
    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p, mut e) = two_prod(self.hi, rhs);
        e += self.lo * rhs;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    /// Division by a plain f64.
    #[inline]
    pub fn div_f64(self, rhs: f64) -> Dd {
        let q1 = self.hi / rhs;
        let r = self - Dd::from_prod(q1, rhs);
        let q2 = (r.hi + r.lo) / rhs;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

impl From<f64> for Dd {
    #[inline]
    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        // Accurate (sloppy-free) double-double addition.
        let (s, e_hi) = two_sum(self.hi, rhs.hi);
        let (t, e_lo) = two_sum(self.lo, rhs.lo);
        let (s2, e2) = quick_two_sum(s, e_hi + t);
        let (hi, lo) = quick_two_sum(s2, e2 + e_lo);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, mut e) = two_prod(self.hi, rhs.hi);
        e += self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        // Three-step long division: each quotient digit is the f64 quotient
        // of the exactly-updated remainder, so the result carries full
        // double-double accuracy (unlike a single Newton step evaluated
        // without a fused multiply).
        let q1 = self.hi / rhs.hi;
        let mut rem = self - rhs.mul_f64(q1);
        let q2 = rem.hi / rhs.hi;
        rem = rem - rhs.mul_f64(q2);
        let q3 = rem.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }
}

impl PartialEq for Dd {
    #[inline]
    fn eq(&self, other: &Dd) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    #[inline]
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

/// Arithmetic shared by `f64` and [`Dd`], so series kernels are generic over
/// the working precision.
pub trait Real:
    Copy
    + PartialOrd
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Lift an f64 (exact embedding).
    fn of(x: f64) -> Self;
    /// Round to the nearest f64.
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;

    fn zero() -> Self {
        Self::of(0.0)
    }
    fn one() -> Self {
        Self::of(1.0)
    }
    /// Lift a small unsigned integer (exact for values below 2^53).
    fn of_u(n: u64) -> Self {
        Self::of(n as f64)
    }
}

impl Real for f64 {
    #[inline]
    fn of(x: f64) -> f64 {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    #[inline]
    fn powi(self, n: i32) -> f64 {
        f64::powi(self, n)
    }
}

impl Real for Dd {
    #[inline]
    fn of(x: f64) -> Dd {
        Dd::from(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline]
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Dd {
        Dd::powi(self, n)
    }
}
