//! Closed-form sum-GDoF evaluation and the combined bounds object.

use crate::achievability::closed_form_lower;
use crate::alpha::{CanonicalAlpha, RegionCase};
use crate::converse::converse_sum_upper;

/// Tolerance for closed-form equality comparisons; all formulas are short
/// rational expressions, so this leaves ample headroom above rounding.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

/// Region arms of the closed-form sum-GDoF, exposed so boundary-continuity
/// checks can evaluate adjacent arms at the same point.
pub(crate) fn arm_both_weak(a1: f64, a2: f64) -> f64 {
    2.0 - (a1 + a2) / 3.0
}

pub(crate) fn arm_mixed_covered(a1: f64, a2: f64) -> f64 {
    ((4.0 + a1 - a2) / 3.0).min(2.0)
}

pub(crate) fn arm_both_strong(a1: f64, a2: f64) -> f64 {
    ((2.0 + a1 + a2) / 3.0).min(2.0)
}

/// Closed-form sum-GDoF. `None` on the open mixed region, which the
/// characterization does not cover.
pub fn theorem1_sum_gdof(a: &CanonicalAlpha) -> Option<f64> {
    let (a1, a2) = (a.alpha1(), a.alpha2());
    match a.region() {
        RegionCase::BothWeak => Some(arm_both_weak(a1, a2)),
        RegionCase::MixedCovered => Some(arm_mixed_covered(a1, a2)),
        RegionCase::BothStrong => Some(arm_both_strong(a1, a2)),
        RegionCase::MixedOpen => None,
    }
}

/// Lower and upper sum-GDoF at one canonical point.
///
/// `lower` is absent exactly on the open mixed region, where no scheme is
/// known; `tight` records whether the two bounds coincide within
/// [`CLOSED_FORM_TOL`]. `a_sum_star` is the optimal block-Markov power
/// budget A1* + A2* where that scheme applies.
#[derive(Debug, Clone, PartialEq)]
pub struct GdofBounds {
    pub region: RegionCase,
    pub lower: Option<f64>,
    pub upper: f64,
    pub tight: bool,
    pub a_sum_star: Option<f64>,
}

/// Assembles the converse upper bound and the achievable lower bound.
pub fn bounds_at(a: &CanonicalAlpha) -> GdofBounds {
    let upper = converse_sum_upper(a);
    let closed = closed_form_lower(a);
    let lower = closed.as_ref().map(|c| c.sum);
    let a_sum_star = closed.as_ref().and_then(|c| c.a_sum_star);
    let tight = match lower {
        Some(l) => (upper - l).abs() <= CLOSED_FORM_TOL,
        None => false,
    };
    GdofBounds {
        region: a.region(),
        lower,
        upper,
        tight,
        a_sum_star,
    }
}
