//! Sum-GDoF bounds for the two-user asymmetric interference channel with
//! delayed transmitter CSI (two transmit antennas, one receive antenna per
//! node, cross links scaling as rho^alpha1 and rho^alpha2).
//!
//! The crate computes the closed-form sum-GDoF where it is characterized,
//! rebuilds the converse upper bound as a small linear program over the
//! weighted rate inequalities, rebuilds the achievable lower bound from the
//! block-Markov constraint polytopes and the 3-slot retrospective scheme,
//! and cross-checks both sides with independent numeric oracles: exhaustive
//! vertex enumeration with a rejection-sampling second opinion, exhaustive
//! power-split grid search, and seeded Monte Carlo slope regression of the
//! exact log-det expressions.

pub mod achievability;
pub mod alpha;
pub mod bounds;
pub mod converse;
pub mod error;
pub mod lp;
pub mod mc;
pub mod verify;

pub use achievability::{
    case_constraints_mixed, case_constraints_strong, closed_form_lower,
    closed_form_split_feasible, maximin_search, three_slot_ledger, CaseOutcome, ClosedFormLower,
    LedgerEntry, MaximinResult, PowerSplit, ThreeSlotLedger,
};
pub use alpha::{canonical, canonicalize, AlphaPair, CanonicalAlpha, RegionCase};
pub use bounds::{bounds_at, theorem1_sum_gdof, GdofBounds, CLOSED_FORM_TOL};
pub use converse::{converse_sum_upper, converse_weighted_rhs, f_be5, f_be6, f_be7, weighted_rate_coeff};
pub use error::{GdofError, Result};
pub use lp::{Constraint, LinearProgram, LpSolution, LpStatus, SamplingOutcome};
pub use mc::{
    logdet_slope, sample_channel, scheme_power_audit, AuditRow, ChannelSample, CovarianceSpec,
    Selector, SlopeEstimate,
};
