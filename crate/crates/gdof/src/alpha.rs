//! Interference-exponent pairs and region classification.
//!
//! The channel is parameterized by two interference exponents: the direct
//! links scale as rho and the cross links as rho^alpha1 (Tx1 -> Rx2) and
//! rho^alpha2 (Tx2 -> Rx1). All closed forms assume the canonical ordering
//! alpha2 <= alpha1; user indices are relabeled to enforce it, which leaves
//! every sum quantity unchanged.

use crate::error::{GdofError, Result};

/// A raw pair of interference exponents, in user order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaPair {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl AlphaPair {
    /// Validates that both exponents are finite and nonnegative.
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        for (name, v) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(GdofError::InvalidExponent(format!("{name} = {v}")));
            }
        }
        Ok(Self { alpha1, alpha2 })
    }
}

/// An exponent pair known to satisfy `alpha2 <= alpha1`.
///
/// Constructed only through [`canonicalize`], so every downstream operation
/// can rely on the ordering without re-checking it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalAlpha {
    alpha1: f64,
    alpha2: f64,
}

impl CanonicalAlpha {
    /// Stronger cross-link exponent.
    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    /// Weaker cross-link exponent.
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn region(&self) -> RegionCase {
        RegionCase::classify(self)
    }
}

/// Reorders an exponent pair so that `alpha2 <= alpha1`.
///
/// Returns the canonical pair and whether the inputs were exchanged. Sum
/// quantities are invariant under the swap; per-user quantities follow the
/// relabeled indices.
pub fn canonicalize(a: AlphaPair) -> (CanonicalAlpha, bool) {
    if a.alpha2 > a.alpha1 {
        (
            CanonicalAlpha {
                alpha1: a.alpha2,
                alpha2: a.alpha1,
            },
            true,
        )
    } else {
        (
            CanonicalAlpha {
                alpha1: a.alpha1,
                alpha2: a.alpha2,
            },
            false,
        )
    }
}

/// Convenience wrapper: validate and canonicalize raw exponents.
pub fn canonical(alpha1: f64, alpha2: f64) -> Result<(CanonicalAlpha, bool)> {
    Ok(canonicalize(AlphaPair::new(alpha1, alpha2)?))
}

/// The four sub-regions of the canonical (alpha1, alpha2) plane.
///
/// Boundary ties are fixed: weak means `alpha <= 1`, and the covered mixed
/// region includes its boundary `alpha1 + 2*alpha2 = 2`. Exactly one tag
/// holds for any canonical pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionCase {
    /// alpha1 <= 1 and alpha2 <= 1.
    BothWeak,
    /// alpha1 > 1, alpha2 <= 1 and alpha1 + 2*alpha2 >= 2.
    MixedCovered,
    /// alpha1 > 1 and alpha2 > 1.
    BothStrong,
    /// alpha1 > 1, alpha2 <= 1 and alpha1 + 2*alpha2 < 2. The sum-GDoF is
    /// not characterized here; only the converse bound is available.
    MixedOpen,
}

impl RegionCase {
    pub fn classify(a: &CanonicalAlpha) -> RegionCase {
        let (a1, a2) = (a.alpha1, a.alpha2);
        if a1 <= 1.0 {
            RegionCase::BothWeak
        } else if a2 > 1.0 {
            RegionCase::BothStrong
        } else if a1 + 2.0 * a2 >= 2.0 {
            RegionCase::MixedCovered
        } else {
            RegionCase::MixedOpen
        }
    }

    /// Stable tag used in CSV/JSON output.
    pub fn tag(&self) -> &'static str {
        match self {
            RegionCase::BothWeak => "BOTH_WEAK",
            RegionCase::MixedCovered => "MIXED_COVERED",
            RegionCase::BothStrong => "BOTH_STRONG",
            RegionCase::MixedOpen => "MIXED_OPEN",
        }
    }
}

impl std::fmt::Display for RegionCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}
