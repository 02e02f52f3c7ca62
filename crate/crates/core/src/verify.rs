//! Seeded randomized verification suites with deterministic reports.
//!
//! Three suites, each a fixed list of checks driven by one ChaCha stream:
//!
//! * `identities` — contiguous relations, the Pfaff transformation, and
//!   the quadratic transformation on random admissible parameters;
//! * `oracles` — closed forms against the series and quadrature oracles,
//!   plus the generating-function recurrence;
//! * `bounds` — the truncated-expansion remainder bound, the
//!   supercritical base-gap inequality, and the power-sum majorant.
//!
//! Reports are byte-identical for a fixed `(suite, trials, seed,
//! precision)` tuple; `trials = 0` yields an empty passing report.

use crate::coeffs::{coeff, coeff_series_oracle, recurrence_residual, CoeffKey, QuadratureTable};
use crate::error::{Error, Result};
use crate::format::fmt_g17;
use crate::hypergeom::{Engine, Params2F1};
use crate::largeparam::{asymptotic_2f1, power_sum_bound_check, supercritical_base_gap};
use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

/// Which verification suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Oracles,
    Bounds,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Identities => "identities",
            Suite::Oracles => "oracles",
            Suite::Bounds => "bounds",
        };
        f.write_str(name)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "oracles" => Ok(Suite::Oracles),
            "bounds" => Ok(Suite::Bounds),
            other => Err(Error::domain(format!(
                "unknown suite `{other}` (expected identities, oracles, or bounds)"
            ))),
        }
    }
}

/// Outcome of one named check: `passed` iff `worst ≤ tolerance`.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub trials: usize,
    /// Worst figure of merit over all trials (normalized residual for
    /// identity checks, bound-margin ratio for inequality checks).
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Full report of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Plain-text per-check report; stable across runs for fixed inputs.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite={} seed={} trials={}\n",
            self.suite, self.seed, self.trials
        );
        for c in &self.checks {
            out.push_str(&format!(
                "check={} trials={} worst={} tol={} status={}\n",
                c.name,
                c.trials,
                fmt_g17(c.worst),
                fmt_g17(c.tolerance),
                if c.passed { "pass" } else { "fail" }
            ));
        }
        out.push_str(&format!(
            "result={}\n",
            if self.all_passed() { "pass" } else { "fail" }
        ));
        out
    }

    /// JSON rendering of the same report.
    pub fn to_json(&self) -> String {
        let mut out = format!(
            "{{\"suite\":\"{}\",\"seed\":{},\"trials\":{},\"checks\":[",
            self.suite, self.seed, self.trials
        );
        for (i, c) in self.checks.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{{\"name\":\"{}\",\"trials\":{},\"worst\":{},\"tol\":{},\"passed\":{}}}",
                c.name,
                c.trials,
                fmt_g17(c.worst),
                fmt_g17(c.tolerance),
                c.passed
            ));
        }
        out.push_str(&format!("],\"passed\":{}}}", self.all_passed()));
        out
    }
}

/// Normalized-residual tolerance for the randomized identity checks.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Runs one suite with `trials` draws per check from a ChaCha8 stream
/// seeded by `seed`.
pub fn run_suite(engine: &Engine, suite: Suite, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match suite {
        Suite::Identities => identity_checks(engine, trials, &mut rng)?,
        Suite::Oracles => oracle_checks(trials, &mut rng)?,
        Suite::Bounds => bound_checks(engine, trials, &mut rng)?,
    };
    Ok(SuiteReport {
        suite,
        seed,
        trials,
        checks,
    })
}

fn outcome(name: &'static str, trials: usize, worst: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        trials,
        worst,
        tolerance,
        passed: worst <= tolerance,
    }
}

/// Uniform draw from the parameter box `[0.1, 5]`.
fn draw_param(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.1..=5.0)
}

/// Uniform draw of the argument from `[0, 0.8]`.
fn draw_x(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.0..=0.8)
}

fn identity_checks(
    engine: &Engine,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CheckOutcome>> {
    let mut checks = Vec::new();
    if trials == 0 {
        return Ok(checks);
    }

    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (a, a2, a3, b, b2) = (
            draw_param(rng),
            draw_param(rng),
            draw_param(rng),
            draw_param(rng),
            draw_param(rng),
        );
        let x = draw_x(rng);
        worst = worst.max(engine.residual_cont1(a, a2, a3, b, b2, x)?.normalized());
    }
    checks.push(outcome("cont1", trials, worst, IDENTITY_TOL));

    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (a, b, c, d, e) = (
            draw_param(rng),
            draw_param(rng),
            draw_param(rng),
            draw_param(rng),
            draw_param(rng),
        );
        let x = draw_x(rng);
        worst = worst.max(engine.residual_cont2(a, b, c, d, e, x)?.normalized());
    }
    checks.push(outcome("cont2", trials, worst, IDENTITY_TOL));

    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (a, b, c) = (draw_param(rng), draw_param(rng), draw_param(rng));
        let x = draw_x(rng);
        worst = worst.max(engine.residual_cont3(a, b, c, x)?.normalized());
    }
    checks.push(outcome("cont3", trials, worst, IDENTITY_TOL));

    // Pfaff: the transformed argument x/(x−1) must stay inside the unit
    // disk, so x is redrawn until x < 1/2.
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (a, b, c) = (draw_param(rng), draw_param(rng), draw_param(rng));
        let x = loop {
            let x = draw_x(rng);
            if x < 0.5 {
                break x;
            }
        };
        worst = worst.max(engine.pfaff_residual(&Params2F1 { a, b, c, x })?.normalized());
    }
    checks.push(outcome("pfaff", trials, worst, IDENTITY_TOL));

    // Quadratic transformation: the lower parameter a+b−1/2 must stay
    // bounded away from the nonpositive integers, so (a,b) is redrawn
    // until a+b−1/2 ≥ 0.1.
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (a, b) = loop {
            let a = draw_param(rng);
            let b = draw_param(rng);
            if a + b - 0.5 >= 0.1 {
                break (a, b);
            }
        };
        let x = draw_x(rng);
        worst = worst.max(engine.quadratic_residual(a, b, x)?.normalized());
    }
    checks.push(outcome("quadratic", trials, worst, IDENTITY_TOL));

    Ok(checks)
}

fn oracle_checks(trials: usize, rng: &mut ChaCha8Rng) -> Result<Vec<CheckOutcome>> {
    let mut checks = Vec::new();
    if trials == 0 {
        return Ok(checks);
    }

    // Closed form against the single-series oracle, relative error.
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let k1 = rng.random_range(-10i64..=10);
        let k2 = rng.random_range(-10i64..=10);
        let r = rng.random_range(2.05f64..=12.0);
        let key = CoeffKey::new(k1, k2, r)?;
        let closed = coeff(&key)?;
        let series = coeff_series_oracle(&key, 1e-13)?.value;
        worst = worst.max((closed - series).abs() / closed.abs().max(f64::MIN_POSITIVE));
    }
    checks.push(outcome("closed-vs-series", trials, worst, 1e-9));

    // Closed form against trapezoid quadrature on a few shared tables;
    // pass iff |diff| ≤ max(1e−8·|closed|, 1e−12) (the absolute floor is
    // the quadrature rounding noise).
    let tables: Vec<QuadratureTable> = (0..4)
        .map(|_| QuadratureTable::new(rng.random_range(2.1f64..=10.0), 256))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for i in 0..trials {
        let table = &tables[i % tables.len()];
        let k1 = rng.random_range(-8i64..=8);
        let k2 = rng.random_range(-8i64..=8);
        let closed = coeff(&CoeffKey::new(k1, k2, table.r())?)?;
        let quad = table.coeff(k1, k2)?;
        let allowed = (1e-8 * closed.abs()).max(1e-12);
        worst = worst.max((closed - quad).abs() / allowed);
    }
    checks.push(outcome("closed-vs-quadrature", trials, worst, 1.0));

    // Generating-function recurrence, residual normalized by c₀₀.
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let k1 = rng.random_range(-8i64..=8);
        let k2 = rng.random_range(-8i64..=8);
        let r = rng.random_range(2.05f64..=12.0);
        let c00 = r / (r * r - 4.0).sqrt();
        let res = recurrence_residual(&CoeffKey::new(k1, k2, r)?)?;
        worst = worst.max(res.abs() / c00);
    }
    checks.push(outcome("recurrence", trials, worst, 1e-10));

    Ok(checks)
}

fn bound_checks(engine: &Engine, trials: usize, rng: &mut ChaCha8Rng) -> Result<Vec<CheckOutcome>> {
    let mut checks = Vec::new();
    if trials == 0 {
        return Ok(checks);
    }

    // Truncated expansion: |series − direct| ≤ remainder bound.
    let ts = [50.0, 100.0, 200.0, 400.0];
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let beta = rng.random_range(0.05f64..=1.0);
        let a = (1.0 + beta) * rng.random_range(0.3f64..=1.0);
        let w = rng.random_range(0.0f64..=0.9);
        let x = w * a / (1.0 + beta);
        let t = ts[rng.random_range(0..ts.len())];
        let n = rng.random_range(1usize..=3);
        let direct = engine
            .gauss_2f1(&Params2F1 {
                a: 1.0,
                b: (1.0 + beta) * t,
                c: a * t + 1.0,
                x,
            })?
            .value;
        let (value, bound) = asymptotic_2f1(beta, a, x, t, n)?;
        worst = worst.max((value - direct).abs() / (bound + 1e-13));
    }
    checks.push(outcome("expansion-remainder", trials, worst, 1.0));

    // Exponential-rate gap between the smooth-point rate and the
    // intersecting-zero rate on random admissible (r, β).
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let beta = rng.random_range(0.05f64..=0.95);
        let rmax = (1.0 + beta) / beta.sqrt();
        let u = rng.random_range(0.01f64..=0.99);
        let r = 2.0 + u * (rmax - 2.0);
        let (lhs, rhs) = supercritical_base_gap(r, beta)?;
        worst = worst.max(lhs / rhs);
    }
    checks.push(outcome("base-gap", trials, worst, 1.0 - 1e-12));

    // Power-sum majorant Σ k^{2n} y^k against its closed-form bound.
    // At n = 1 the bound is an exact identity (Σ k²y^k = y(1+y)/(1−y)³),
    // so the ratio sits at 1 up to summation rounding; allow 1e−12 slack.
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let y = rng.random_range(0.01f64..=0.99);
        let n = rng.random_range(1u32..=16);
        let (lhs, rhs) = power_sum_bound_check(y, n)?;
        worst = worst.max(lhs / rhs);
    }
    checks.push(outcome("power-sum", trials, worst, 1.0 + 1e-12));

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;

    fn engine() -> Engine {
        Engine::new(Precision::Standard, 1e-12).unwrap()
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Identities, Suite::Oracles, Suite::Bounds] {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("identity".parse::<Suite>().is_err());
    }

    #[test]
    fn zero_trials_is_empty_pass() {
        for s in [Suite::Identities, Suite::Oracles, Suite::Bounds] {
            let report = run_suite(&engine(), s, 0, 1).unwrap();
            assert!(report.checks.is_empty());
            assert!(report.all_passed());
            assert!(report.to_text().ends_with("result=pass\n"));
            assert!(report.to_json().ends_with("\"passed\":true}"));
        }
    }

    #[test]
    fn identities_suite_passes() {
        let report = run_suite(&engine(), Suite::Identities, 200, 42).unwrap();
        assert_eq!(report.checks.len(), 5);
        let names: Vec<_> = report.checks.iter().map(|c| c.name).collect();
        assert_eq!(names, ["cont1", "cont2", "cont3", "pfaff", "quadratic"]);
        for c in &report.checks {
            assert!(c.passed, "{} worst {}", c.name, c.worst);
            assert!(c.worst <= IDENTITY_TOL);
        }
    }

    #[test]
    fn oracles_suite_passes() {
        let report = run_suite(&engine(), Suite::Oracles, 80, 7).unwrap();
        assert_eq!(report.checks.len(), 3);
        for c in &report.checks {
            assert!(c.passed, "{} worst {}", c.name, c.worst);
        }
    }

    #[test]
    fn bounds_suite_passes() {
        let report = run_suite(&engine(), Suite::Bounds, 80, 11).unwrap();
        assert_eq!(report.checks.len(), 3);
        for c in &report.checks {
            assert!(c.passed, "{} worst {}", c.name, c.worst);
        }
        // The base-gap figure must be strictly below 1 (strict inequality).
        let gap = report.checks.iter().find(|c| c.name == "base-gap").unwrap();
        assert!(gap.worst < 1.0);
        // The power-sum figure may touch 1 (the n = 1 instance is an
        // identity) but never exceeds it beyond rounding.
        let ps = report.checks.iter().find(|c| c.name == "power-sum").unwrap();
        assert!(ps.worst <= 1.0 + 1e-12 && ps.worst > 0.5);
    }

    #[test]
    fn reports_are_deterministic() {
        for s in [Suite::Identities, Suite::Oracles, Suite::Bounds] {
            let r1 = run_suite(&engine(), s, 50, 123).unwrap();
            let r2 = run_suite(&engine(), s, 50, 123).unwrap();
            assert_eq!(r1.to_text(), r2.to_text());
            assert_eq!(r1.to_json(), r2.to_json());
        }
    }

    #[test]
    fn report_text_shape() {
        let report = run_suite(&engine(), Suite::Oracles, 10, 5).unwrap();
        let text = report.to_text();
        assert!(text.starts_with("suite=oracles seed=5 trials=10\n"));
        assert!(text.contains("check=closed-vs-series"));
        assert!(text.contains("status=pass"));
        let json = report.to_json();
        assert!(json.starts_with("{\"suite\":\"oracles\",\"seed\":5,"));
    }
}
