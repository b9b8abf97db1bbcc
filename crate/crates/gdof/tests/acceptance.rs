//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them on success).
//!
//! Criteria 3 and 5 are asserted exactly as specified. Both currently fail
//! honestly at a known set of points: the closed-form lower bound is not
//! attainable by the block-Markov constraint polytopes wherever the
//! closed-form split falls outside its admissible box (criterion 3), and
//! the lowest-exponent Monte Carlo cells carry a finite-rho curvature that
//! exceeds the pinned tolerances (criterion 5). The failure output lists
//! every offending point; `closed_form_split_feasible` documents the exact
//! sub-region where criterion 3 does hold, and both checks are green there.

use gdof::verify::{lp_sampling_counterexample, random_bounded_lp};
use gdof::{
    canonical, closed_form_lower, closed_form_split_feasible, converse_sum_upper,
    converse_weighted_rhs, maximin_search, scheme_power_audit, theorem1_sum_gdof,
    three_slot_ledger, weighted_rate_coeff, CanonicalAlpha, CovarianceSpec, RegionCase, Selector,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

const TOL: f64 = 1e-9;

fn canonical_grid(limit: f64, step: f64) -> Vec<CanonicalAlpha> {
    let n = (limit / step).round() as usize;
    let axis: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    let mut out = Vec::new();
    for (i, &a1) in axis.iter().enumerate() {
        for &a2 in &axis[..=i] {
            out.push(canonical(a1, a2).unwrap().0);
        }
    }
    out
}

fn report(criterion: u8, name: &str, failures: &[String], points: usize) {
    if failures.is_empty() {
        println!("criterion {criterion} ({name}): PASS ({points} points)");
    } else {
        println!(
            "criterion {criterion} ({name}): FAIL at {}/{points} points",
            failures.len()
        );
        for f in failures.iter().take(12) {
            println!("    {f}");
        }
        if failures.len() > 12 {
            println!("    ... and {} more", failures.len() - 12);
        }
    }
    assert!(
        failures.is_empty(),
        "criterion {criterion} ({name}) failed at {} of {points} points; first: {}",
        failures.len(),
        failures[0]
    );
}

/// Criterion 1: at (1, 1) the closed form, the converse program and the
/// achievable closed form all equal 4/3.
#[test]
fn criterion_1_remark1_degeneration() {
    let a = canonical(1.0, 1.0).unwrap().0;
    let reference = 4.0 / 3.0;
    let theorem = theorem1_sum_gdof(&a).unwrap();
    let upper = converse_sum_upper(&a);
    let lower = closed_form_lower(&a).unwrap().sum;
    let mut failures = Vec::new();
    for (what, v) in [("closed form", theorem), ("upper", upper), ("lower", lower)] {
        if (v - reference).abs() > TOL {
            failures.push(format!("{what} = {v:.12} != 4/3"));
        }
    }
    report(1, "remark-1 degeneration", &failures, 3);
}

/// Criterion 2: converse and achievable bounds coincide within 1e-9 on the
/// 0.05 grid over [0,3]^2, open mixed region excluded.
#[test]
fn criterion_2_tightness_grid() {
    let mut failures = Vec::new();
    let mut points = 0;
    for a in canonical_grid(3.0, 0.05) {
        if a.region() == RegionCase::MixedOpen {
            continue;
        }
        points += 1;
        let upper = converse_sum_upper(&a);
        let lower = closed_form_lower(&a).unwrap().sum;
        let theorem = theorem1_sum_gdof(&a).unwrap();
        if (upper - lower).abs() > TOL || (upper - theorem).abs() > TOL {
            failures.push(format!(
                "({:.2}, {:.2}): upper {upper:.12} lower {lower:.12} closed form {theorem:.12}",
                a.alpha1(),
                a.alpha2()
            ));
        }
    }
    report(2, "tightness grid", &failures, points);
}

/// Criterion 3: the 0.01-step power-split search must be within 0.04 of the
/// closed-form lower bound on the 0.1 grid over the strong and covered
/// mixed regions, with the optimizer budget within 0.02 of the closed-form
/// maximizer.
#[test]
fn criterion_3_maximin_oracle() {
    let points: Vec<CanonicalAlpha> = canonical_grid(3.0, 0.1)
        .into_iter()
        .filter(|a| {
            matches!(
                a.region(),
                RegionCase::BothStrong | RegionCase::MixedCovered
            )
        })
        .collect();
    let results: Vec<Option<String>> = points
        .par_iter()
        .map(|a| {
            let closed = closed_form_lower(a).unwrap();
            let found = maximin_search(a, 0.01).unwrap();
            let a_star = closed.a_sum_star.unwrap();
            let a_found = found.best.a1 + found.best.a2;
            let value_ok = (found.sum - closed.sum).abs() <= 0.04;
            let budget_ok = (a_found - a_star).abs() <= 0.02;
            if value_ok && budget_ok {
                None
            } else {
                Some(format!(
                    "({:.1}, {:.1}) [{}{}]: search {:.4} at A1+A2 = {:.3} vs closed form {:.4} at {:.3}",
                    a.alpha1(),
                    a.alpha2(),
                    a.region().tag(),
                    if closed_form_split_feasible(a) {
                        ""
                    } else {
                        ", closed-form split infeasible"
                    },
                    found.sum,
                    a_found,
                    closed.sum,
                    a_star,
                ))
            }
        })
        .collect();
    let failures: Vec<String> = results.into_iter().flatten().collect();

    // The search itself is sound: wherever the closed-form split is
    // admissible it reproduces the closed form. Failures below are points
    // where the constraint polytopes genuinely top out under the closed
    // form; see the split-feasibility note in the failure lines.
    let aligned_failures: Vec<&String> = failures
        .iter()
        .filter(|f| !f.contains("split infeasible"))
        .collect();
    assert!(
        aligned_failures.is_empty(),
        "search misses the closed form even where its split is admissible: {aligned_failures:?}"
    );
    report(3, "max-min oracle", &failures, points.len());
}

/// Criterion 4: k = 0 maximizes the weighted rate coefficient on the 0.01
/// grid and the maximum reproduces the closed-form right-hand side (within
/// the global closed-form tolerance; the two expressions round differently
/// in the last bit).
#[test]
fn criterion_4_kt_exhaustion() {
    let mut failures = Vec::new();
    let mut points = 0;
    for i in 0..=300u32 {
        let alpha2 = f64::from(i) * 0.01;
        points += 1;
        let coeffs: Vec<f64> = (0..=2u8)
            .map(|k| weighted_rate_coeff(k, alpha2).unwrap())
            .collect();
        let mut argmax = 0;
        for k in 1..3 {
            if coeffs[k] > coeffs[argmax] {
                argmax = k;
            }
        }
        let rhs = converse_weighted_rhs(alpha2).unwrap();
        if argmax != 0 || (coeffs[0] - rhs).abs() > TOL {
            failures.push(format!(
                "alpha2 = {alpha2:.2}: argmax {argmax}, coeff {} vs rhs {rhs}",
                coeffs[0]
            ));
        }
    }
    report(4, "k_t exhaustion", &failures, points);
}

/// Criterion 5: Monte Carlo slopes across the full instance matrix match
/// the piecewise coefficients within +/-0.05 with r^2 >= 0.999, at 2000
/// trials over rho in {1e2..1e6}.
#[test]
fn criterion_5_mc_slope_suite() {
    let rhos = [1e2, 1e3, 1e4, 1e5, 1e6];
    let alphas = [0.3, 0.7, 1.0, 1.5, 2.5];
    let mut cells: Vec<(Selector, u8, f64)> = Vec::new();
    for &sel in &Selector::ALL {
        for k in 0..=2u8 {
            for &a2 in &alphas {
                cells.push((sel, k, a2));
            }
        }
    }
    let results: Vec<Option<String>> = cells
        .par_iter()
        .map(|&(sel, k, alpha2)| {
            let spec = CovarianceSpec {
                selector: sel,
                k,
                alpha2,
            };
            let expected = sel.expected(k, alpha2).unwrap();
            let est = gdof::logdet_slope(&spec, &rhos, 2000, 42).unwrap();
            let err = (est.slope - expected).abs();
            if err <= 0.05 && est.r_squared >= 0.999 {
                None
            } else {
                Some(format!(
                    "{} k={k} alpha2={alpha2}: slope {:.4} vs {expected:.4} (err {err:.4}), r2 {:.6}",
                    sel.tag(),
                    est.slope,
                    est.r_squared,
                ))
            }
        })
        .collect();
    let failures: Vec<String> = results.into_iter().flatten().collect();
    report(5, "Monte Carlo slope suite", &failures, cells.len());
}

/// Criterion 6: at (0.8, 0.6) every unambiguous term of the 3-slot scheme
/// measures its expected received-power exponent within +/-0.05, and every
/// noise-floor term measures at most 0.05.
#[test]
fn criterion_6_scheme_power_audit() {
    let a = canonical(0.8, 0.6).unwrap().0;
    let rows = scheme_power_audit(&a, &[1e2, 1e3, 1e4, 1e5, 1e6], 2000, 42).unwrap();
    let mut failures = Vec::new();
    for r in &rows {
        let id = format!("slot {} rx {} term {}", r.slot, r.receiver, r.label);
        if r.label_conflict.is_none()
            && (r.measured_slope - r.expected_exponent).abs() > 0.05
        {
            failures.push(format!(
                "{id}: measured {:.4} vs expected {:.4}",
                r.measured_slope, r.expected_exponent
            ));
        }
        if r.noise_level && r.measured_slope > 0.05 {
            failures.push(format!(
                "{id}: noise-floor term measures {:.4}",
                r.measured_slope
            ));
        }
    }
    report(6, "scheme power audit", &failures, rows.len());
}

/// Criterion 7: ledger identities hold exactly for 100 random weak pairs.
/// Pairs are drawn as dyadic multiples of 3 so that every intermediate
/// value is representable and the identities are bit-exact.
#[test]
fn criterion_7_ledger_identity() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let a1 = 3.0 * (rng.next_u64() % 342) as f64 / 1024.0;
        let a2 = 3.0 * (rng.next_u64() % 342) as f64 / 1024.0;
        let a = canonical(a1, a2).unwrap().0;
        let ledger = three_slot_ledger(&a).unwrap();
        let total = ledger.d1 + ledger.d2;
        let expect_total = 2.0 - (a.alpha1() + a.alpha2()) / 3.0;
        let expect_d1 = 1.0 - a.alpha2() / 3.0;
        let expect_d2 = 1.0 - a.alpha1() / 3.0;
        if total != expect_total || ledger.d1 != expect_d1 || ledger.d2 != expect_d2 {
            failures.push(format!(
                "({a1}, {a2}): d1 {} d2 {} total {total} vs ({expect_d1}, {expect_d2}, {expect_total})",
                ledger.d1, ledger.d2
            ));
        }
        // Entry sums agree with the returned rates (same dyadic argument).
        let rx1: f64 = ledger
            .entries
            .iter()
            .filter(|e| e.receiver.index() == 1)
            .map(|e| e.gdof)
            .sum();
        if rx1 / 3.0 != ledger.d1 {
            failures.push(format!("({a1}, {a2}): entry sum {rx1} / 3 != d1"));
        }
    }
    report(7, "ledger identity", &failures, 100);
}

/// Criterion 8: on 1000 random bounded programs with at most 4 variables,
/// vertex enumeration dominates the sampling estimate and returns feasible
/// points.
#[test]
fn criterion_8_lp_self_check() {
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    let programs: Vec<_> = (0..1000).map(|_| random_bounded_lp(&mut rng, 4)).collect();
    let results: Vec<Option<String>> = programs
        .par_iter()
        .enumerate()
        .map(|(i, lp)| {
            lp_sampling_counterexample(lp, 2000, 0x5eed ^ i as u64)
                .map(|msg| format!("program {i}: {msg}"))
        })
        .collect();
    let failures: Vec<String> = results.into_iter().flatten().collect();
    report(8, "LP solver self-check", &failures, programs.len());
}
