//! Self-verification battery: cross-checks the closed forms against the
//! independent oracles and reports the first counterexample per check.

use crate::achievability::{closed_form_lower, closed_form_split_feasible, maximin_search};
use crate::alpha::{canonical, CanonicalAlpha, RegionCase};
use crate::bounds::{arm_both_strong, arm_both_weak, arm_mixed_covered, theorem1_sum_gdof};
use crate::converse::{converse_sum_upper, converse_weighted_rhs, weighted_rate_coeff};
use crate::lp::{Constraint, LinearProgram, LpStatus, SamplingOutcome, FEAS_TOL};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Battery configuration; defaults mirror the CLI defaults.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Exponent-grid step for the tightness check.
    pub step: f64,
    /// Closed-form comparison tolerance.
    pub tol: f64,
    /// Power-split grid step for the max-min check.
    pub grid_step_a: f64,
    /// Seed for the randomized LP check.
    pub seed: u64,
    /// Additive perturbation applied to the closed-form evaluation; nonzero
    /// values must make the battery fail (mutation sanity hook).
    pub perturb_theorem: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            step: 0.05,
            tol: 1e-9,
            grid_step_a: 0.02,
            seed: 42,
            perturb_theorem: 0.0,
        }
    }
}

/// Outcome of one battery check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub points: usize,
    /// First counterexample, when the check failed.
    pub failure: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn grid(limit: f64, step: f64) -> Vec<f64> {
    let n = (limit / step).round() as usize;
    (0..=n).map(|i| f64::from(i as u32) * step).collect()
}

/// Canonical pairs of the step-grid over [0, limit]^2.
fn canonical_grid(limit: f64, step: f64) -> Vec<CanonicalAlpha> {
    let axis = grid(limit, step);
    let mut out = Vec::new();
    for (i, &a1) in axis.iter().enumerate() {
        for &a2 in &axis[..=i] {
            out.push(canonical(a1, a2).expect("grid exponents are valid").0);
        }
    }
    out
}

/// Runs every check and returns one report per check, in a fixed order.
pub fn run_battery(cfg: &VerifyConfig) -> Vec<CheckReport> {
    vec![
        check_tightness(cfg),
        check_kt_exhaustion(cfg),
        check_boundary_continuity(cfg),
        check_maximin(cfg),
        check_lp_vs_sampling(cfg),
    ]
}

/// Converse upper bound, closed-form lower bound and the closed form itself
/// must coincide within tolerance off the open mixed region.
pub fn check_tightness(cfg: &VerifyConfig) -> CheckReport {
    let mut points = 0;
    let mut failure = None;
    for a in canonical_grid(3.0, cfg.step) {
        if a.region() == RegionCase::MixedOpen {
            continue;
        }
        points += 1;
        let th = theorem1_sum_gdof(&a).expect("covered region") + cfg.perturb_theorem;
        let lower = closed_form_lower(&a).expect("covered region").sum;
        let upper = converse_sum_upper(&a);
        let bad = (upper - th).abs() > cfg.tol
            || (lower - th).abs() > cfg.tol
            || lower > upper + cfg.tol
            || !(0.0..=2.0 + cfg.tol).contains(&upper);
        if bad && failure.is_none() {
            failure = Some(format!(
                "({}, {}): closed form {th:.12}, lower {lower:.12}, upper {upper:.12}",
                a.alpha1(),
                a.alpha2()
            ));
        }
    }
    CheckReport {
        name: "tightness-grid",
        points,
        failure,
    }
}

/// The rank-deficiency exhaustion: k = 0 must maximize the weighted rate
/// coefficient and reproduce the closed-form right-hand side.
pub fn check_kt_exhaustion(cfg: &VerifyConfig) -> CheckReport {
    let mut points = 0;
    let mut failure = None;
    for alpha2 in grid(3.0, 0.01) {
        points += 1;
        let coeffs: Vec<f64> = (0..=2)
            .map(|k| weighted_rate_coeff(k, alpha2).expect("valid inputs"))
            .collect();
        // First maximum wins on ties.
        let mut argmax = 0;
        for k in 1..coeffs.len() {
            if coeffs[k] > coeffs[argmax] {
                argmax = k;
            }
        }
        let rhs = converse_weighted_rhs(alpha2).expect("valid input");
        if (argmax != 0 || (coeffs[0] - rhs).abs() > cfg.tol) && failure.is_none() {
            failure = Some(format!(
                "alpha2 = {alpha2}: argmax k = {argmax}, coeff {} vs rhs {rhs}",
                coeffs[0]
            ));
        }
    }
    CheckReport {
        name: "kt-exhaustion",
        points,
        failure,
    }
}

/// The closed-form arms of adjacent regions must agree on their shared
/// boundaries (evaluated at the boundary itself, i.e. as one-sided limits).
pub fn check_boundary_continuity(cfg: &VerifyConfig) -> CheckReport {
    let mut points = 0;
    let mut failure = None;
    // Weak <-> covered mixed along alpha1 = 1; the regions share this edge
    // for alpha2 >= 0.5.
    for alpha2 in grid(0.5, 0.05) {
        let a2 = 0.5 + alpha2;
        points += 1;
        let gap = (arm_both_weak(1.0, a2) - arm_mixed_covered(1.0, a2)).abs();
        if gap > cfg.tol && failure.is_none() {
            failure = Some(format!("alpha1 = 1, alpha2 = {a2}: arm gap {gap}"));
        }
    }
    // Covered mixed <-> strong along alpha2 = 1.
    for da in grid(2.0, 0.05) {
        let a1 = 1.0 + da;
        points += 1;
        let gap = (arm_mixed_covered(a1, 1.0) - arm_both_strong(a1, 1.0)).abs();
        if gap > cfg.tol && failure.is_none() {
            failure = Some(format!("alpha1 = {a1}, alpha2 = 1: arm gap {gap}"));
        }
    }
    CheckReport {
        name: "boundary-continuity",
        points,
        failure,
    }
}

/// Grid search must reproduce the closed-form lower bound and its optimal
/// power budget wherever the closed-form split is admissible (see
/// [`closed_form_split_feasible`]; outside that set the constraint polytopes
/// genuinely top out below the closed form, which the acceptance suite
/// documents separately).
pub fn check_maximin(cfg: &VerifyConfig) -> CheckReport {
    let mut points = 0;
    let mut failure = None;
    let tol = 4.0 * cfg.grid_step_a;
    for a in canonical_grid(3.0, 0.1) {
        let region = a.region();
        if region != RegionCase::BothStrong && region != RegionCase::MixedCovered {
            continue;
        }
        if !closed_form_split_feasible(&a) {
            continue;
        }
        points += 1;
        let closed = closed_form_lower(&a).expect("covered region");
        let target = closed.sum + cfg.perturb_theorem;
        let found = match maximin_search(&a, cfg.grid_step_a) {
            Ok(r) => r,
            Err(e) => {
                if failure.is_none() {
                    failure = Some(format!("({}, {}): {e}", a.alpha1(), a.alpha2()));
                }
                continue;
            }
        };
        let a_star = closed.a_sum_star.expect("strong/mixed");
        let a_found = found.best.a1 + found.best.a2;
        let bad = (found.sum - target).abs() > tol || (a_found - a_star).abs() > 2.0 * cfg.grid_step_a;
        if bad && failure.is_none() {
            failure = Some(format!(
                "({}, {}): search {:.6} at A1+A2 = {:.4} vs closed form {:.6} at {:.4}",
                a.alpha1(),
                a.alpha2(),
                found.sum,
                a_found,
                target,
                a_star
            ));
        }
    }
    CheckReport {
        name: "maximin-vs-closed-form",
        points,
        failure,
    }
}

/// Vertex enumeration must dominate the rejection-sampling estimate and
/// return feasible points on randomly generated bounded programs.
pub fn check_lp_vs_sampling(cfg: &VerifyConfig) -> CheckReport {
    let mut failure = None;
    let n_programs = 200;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    for idx in 0..n_programs {
        let lp = random_bounded_lp(&mut rng, 4);
        if let Some(msg) = lp_sampling_counterexample(&lp, 2000, cfg.seed ^ idx as u64) {
            if failure.is_none() {
                failure = Some(format!("program {idx}: {msg}"));
            }
        }
    }
    CheckReport {
        name: "lp-vs-sampling",
        points: n_programs,
        failure,
    }
}

/// Checks one program; returns a description of the violation, if any.
pub fn lp_sampling_counterexample(lp: &LinearProgram, samples: usize, seed: u64) -> Option<String> {
    let sol = match lp.solve() {
        Ok(s) => s,
        Err(e) => return Some(format!("solve error: {e}")),
    };
    if sol.status != LpStatus::Optimal {
        return Some(format!("expected optimal, got {:?}", sol.status));
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        let lhs: f64 = c.coeffs.iter().zip(&sol.point).map(|(a, x)| a * x).sum();
        if lhs > c.bound + FEAS_TOL {
            return Some(format!(
                "vertex violates constraint {i}: {lhs} > {}",
                c.bound
            ));
        }
    }
    match lp.solve_by_sampling(samples, seed) {
        Ok(SamplingOutcome::Estimate { value, .. }) => {
            if sol.value < value - FEAS_TOL {
                return Some(format!(
                    "vertex optimum {} below sampling estimate {value}",
                    sol.value
                ));
            }
        }
        Ok(SamplingOutcome::Inconclusive) => {}
        Err(e) => return Some(format!("sampling error: {e}")),
    }
    None
}

fn uniform(rng: &mut ChaCha12Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * (((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64))
}

/// A random bounded program: a nonnegative box plus a few extra cuts that
/// keep the origin feasible, with a random objective.
pub fn random_bounded_lp(rng: &mut ChaCha12Rng, max_vars: usize) -> LinearProgram {
    let n = 2 + (rng.next_u64() as usize) % (max_vars - 1);
    let mut constraints = Vec::new();
    for i in 0..n {
        let mut up = vec![0.0; n];
        up[i] = 1.0;
        constraints.push(Constraint::new(up, uniform(rng, 0.5, 2.0)));
        let mut lo = vec![0.0; n];
        lo[i] = -1.0;
        constraints.push(Constraint::new(lo, 0.0));
    }
    let cuts = (rng.next_u64() as usize) % 4;
    for _ in 0..cuts {
        let coeffs: Vec<f64> = (0..n).map(|_| uniform(rng, -1.0, 1.0)).collect();
        constraints.push(Constraint::new(coeffs, uniform(rng, 0.1, 2.0)));
    }
    let objective: Vec<f64> = (0..n).map(|_| uniform(rng, -1.0, 1.0)).collect();
    let variables = (1..=n).map(|i| format!("x{i}")).collect();
    LinearProgram::new(variables, constraints, objective).expect("generator is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes_with_defaults_coarse() {
        // Coarse settings keep this unit test fast; the CLI and acceptance
        // suite run the production settings.
        let cfg = VerifyConfig {
            step: 0.25,
            grid_step_a: 0.05,
            ..VerifyConfig::default()
        };
        let reports = run_battery(&cfg);
        for r in &reports {
            assert!(r.passed(), "{} failed: {:?}", r.name, r.failure);
        }
        let total: usize = reports.iter().map(|r| r.points).sum();
        assert!(total >= 49);
    }

    #[test]
    fn battery_detects_perturbation() {
        let cfg = VerifyConfig {
            step: 0.5,
            grid_step_a: 0.05,
            perturb_theorem: 1e-3,
            ..VerifyConfig::default()
        };
        let reports = run_battery(&cfg);
        let tight = reports.iter().find(|r| r.name == "tightness-grid").unwrap();
        assert!(!tight.passed(), "perturbation must surface a counterexample");
        assert!(tight.failure.as_ref().unwrap().contains("("));
    }
}
