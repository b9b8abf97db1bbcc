//! Converse side: piecewise log-det pre-log coefficients and the weighted
//! rate inequalities they compose into, reduced to a two-variable linear
//! program for the sum upper bound.
//!
//! The three coefficient families are indexed by the rank deficiency
//! k in {0,1,2} of a unit-trace transmit covariance (k counts its zero
//! singular values) and by the weaker cross-link exponent alpha2. Composing
//! them as `be5 + be6/2 - be7` gives the per-slot coefficient of
//! R1 + R2/2; exhausting k shows k = 0 dominates and yields the closed-form
//! right-hand side in [`converse_weighted_rhs`].

use crate::alpha::CanonicalAlpha;
use crate::error::{GdofError, Result};
use crate::lp::{two_var_program, LpStatus};

fn check_k(k: u8) -> Result<()> {
    if k > 2 {
        return Err(GdofError::InvalidRankDeficiency(k));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(GdofError::InvalidExponent(format!("alpha = {alpha}")));
    }
    Ok(())
}

/// [x]+ = max(x, 0).
fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Pre-log of the joint two-stream log-determinant
/// `log|I_{2-k} + rho^{alpha2} h12~^H h12~ + rho h22~^H h22~|`.
pub fn f_be6(k: u8, alpha2: f64) -> Result<f64> {
    check_k(k)?;
    check_alpha(alpha2)?;
    let kf = f64::from(k);
    Ok(if alpha2 <= 1.0 {
        (2.0 - kf).min(1.0) + pos(1.0 - kf).min(1.0) * alpha2
    } else {
        (2.0 - kf).min(1.0) * alpha2 + pos(1.0 - kf).min(1.0)
    })
}

/// Pre-log of the single-stream interference term
/// `log(1 + rho^{alpha2} h12 K h12^H)`.
pub fn f_be7(k: u8, alpha2: f64) -> Result<f64> {
    check_k(k)?;
    check_alpha(alpha2)?;
    Ok((2.0 - f64::from(k)).min(1.0) * alpha2)
}

/// Pre-log of the desired-plus-interference observation
/// `log|1 + rho h11 h11^H + rho^{alpha2} h12~ h12~^H|`.
pub fn f_be5(k: u8, alpha2: f64) -> Result<f64> {
    check_k(k)?;
    check_alpha(alpha2)?;
    let kf = f64::from(k);
    Ok(if alpha2 <= 1.0 {
        1.0
    } else {
        (2.0 - kf).min(1.0) * alpha2 + pos(1.0 - (2.0 - kf)).min(2.0)
    })
}

/// Per-slot coefficient of the weighted rate sum R1 + R2/2 at rank
/// deficiency k: `f_be5 + f_be6/2 - f_be7`.
pub fn weighted_rate_coeff(k: u8, alpha2: f64) -> Result<f64> {
    Ok(f_be5(k, alpha2)? + f_be6(k, alpha2)? / 2.0 - f_be7(k, alpha2)?)
}

/// Closed-form right-hand side of the weighted GDoF inequality
/// `d_i + d_j/2 <= (3 - alpha)/2` for `alpha <= 1`, `(1 + alpha)/2` above.
/// Both branches meet at 1 when alpha = 1. Equals the k-exhausted maximum
/// of [`weighted_rate_coeff`], attained at k = 0.
pub fn converse_weighted_rhs(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(if alpha <= 1.0 {
        (3.0 - alpha) / 2.0
    } else {
        (1.0 + alpha) / 2.0
    })
}

/// Sum-GDoF upper bound from the two weighted inequalities combined with
/// the single-user bounds, solved by vertex enumeration.
///
/// The program maximizes d1 + d2 subject to
/// `d1 + d2/2 <= W(alpha2)`, `d2 + d1/2 <= W(alpha1)` and `d1 + d2 <= 2`,
/// the last being the two per-user unit caps in the summed form in which
/// the bound combines them. Defined on all regions, including the open
/// mixed one.
pub fn converse_sum_upper(a: &CanonicalAlpha) -> f64 {
    let w2 = converse_weighted_rhs(a.alpha2()).expect("canonical exponent is valid");
    let w1 = converse_weighted_rhs(a.alpha1()).expect("canonical exponent is valid");
    let lp = two_var_program(
        &[
            (1.0, 0.5, w2),
            (0.5, 1.0, w1),
            (1.0, 1.0, 2.0),
            (-1.0, 0.0, 0.0),
            (0.0, -1.0, 0.0),
        ],
        [1.0, 1.0],
    );
    let sol = lp.solve().expect("converse program is well-formed");
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    sol.value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::canonical;

    fn canon(a1: f64, a2: f64) -> CanonicalAlpha {
        canonical(a1, a2).unwrap().0
    }

    #[test]
    fn weighted_rhs_values() {
        assert_eq!(converse_weighted_rhs(1.0).unwrap(), 1.0);
        assert_eq!(converse_weighted_rhs(0.5).unwrap(), 1.25);
        assert_eq!(converse_weighted_rhs(2.0).unwrap(), 1.5);
        assert!(converse_weighted_rhs(-0.1).is_err());
    }

    #[test]
    fn f_be6_values() {
        assert_eq!(f_be6(0, 0.5).unwrap(), 1.5);
        assert_eq!(f_be6(1, 0.5).unwrap(), 1.0);
        assert_eq!(f_be6(2, 3.0).unwrap(), 0.0);
        assert_eq!(f_be6(0, 2.0).unwrap(), 3.0);
        assert!(f_be6(3, 0.5).is_err());
    }

    #[test]
    fn f_be7_values() {
        assert_eq!(f_be7(0, 0.7).unwrap(), 0.7);
        assert_eq!(f_be7(2, 0.7).unwrap(), 0.0);
        assert_eq!(f_be7(1, 1.4).unwrap(), 1.4);
    }

    #[test]
    fn f_be5_values() {
        assert_eq!(f_be5(0, 0.3).unwrap(), 1.0);
        assert_eq!(f_be5(0, 2.5).unwrap(), 2.5);
        assert_eq!(f_be5(2, 2.5).unwrap(), 1.0);
    }

    #[test]
    fn weighted_coeff_composition() {
        assert!((weighted_rate_coeff(0, 0.5).unwrap() - 1.25).abs() < 1e-15);
        assert!((weighted_rate_coeff(0, 2.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((weighted_rate_coeff(2, 0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sum_upper_examples() {
        assert!((converse_sum_upper(&canon(1.0, 1.0)) - 4.0 / 3.0).abs() < 1e-9);
        assert!((converse_sum_upper(&canon(0.0, 0.0)) - 2.0).abs() < 1e-9);
        // Open mixed region: (4 + 1.5 - 0.2) / 3.
        assert!((converse_sum_upper(&canon(1.5, 0.2)) - 5.3 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn sum_upper_symmetric_in_raw_order() {
        for &(a, b) in &[(0.3, 1.7), (2.4, 0.9), (1.1, 1.1), (0.0, 2.8)] {
            let u1 = converse_sum_upper(&canon(a, b));
            let u2 = converse_sum_upper(&canon(b, a));
            assert_eq!(u1.to_bits(), u2.to_bits());
        }
    }
}
