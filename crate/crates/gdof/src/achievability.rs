//! Achievability side: block-Markov constraint polytopes and their max-min
//! power-split optimization for the strong and covered-mixed regions, plus
//! the 3-slot retrospective scheme ledger for the weak region.
//!
//! For the block-Markov scheme each transmitter splits power between a
//! fresh private vector (reduced by rho^{-A_i}) and a common symbol that
//! resolves the previous block's overheard interference. Substituting the
//! forced common-stream loads (d_eta1 = alpha2 - A2, d_eta2 = alpha1 - A1)
//! leaves a two-variable program in (d1, d2) per split. The quantize-and-
//! forward step requires alpha_i - A_i <= 1; splits violating it are
//! reported as [`CaseOutcome::Infeasible`] and silently skipped by the
//! search.

use crate::alpha::{CanonicalAlpha, RegionCase};
use crate::error::{GdofError, Result};
use crate::lp::{two_var_program, LinearProgram, LpStatus};

/// Power-reduction exponents (A1, A2) of the private streams, constrained
/// to the box [0, alpha1] x [0, alpha2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub a1: f64,
    pub a2: f64,
}

impl PowerSplit {
    pub fn new(a1: f64, a2: f64, alpha: &CanonicalAlpha) -> Result<Self> {
        let ok = a1.is_finite()
            && a2.is_finite()
            && (0.0..=alpha.alpha1()).contains(&a1)
            && (0.0..=alpha.alpha2()).contains(&a2);
        if !ok {
            return Err(GdofError::InvalidPowerSplit {
                a1,
                a2,
                alpha1: alpha.alpha1(),
                alpha2: alpha.alpha2(),
            });
        }
        Ok(Self { a1, a2 })
    }
}

/// A split either yields a rate program or is infeasible for the scheme.
/// Infeasibility is a distinguished value, not an error.
#[derive(Debug, Clone)]
pub enum CaseOutcome {
    Feasible(LinearProgram),
    Infeasible,
}

fn require_region(
    a: &CanonicalAlpha,
    required: RegionCase,
    op: &'static str,
) -> Result<()> {
    let found = a.region();
    if found != required {
        return Err(GdofError::WrongRegion {
            op,
            required: required.tag(),
            found: found.tag(),
            alpha1: a.alpha1(),
            alpha2: a.alpha2(),
        });
    }
    Ok(())
}

/// Rate program for a split when both cross links are strong.
///
/// Infeasible when either quantized interference would exceed a unit
/// pre-log (alpha_i - A_i > 1), since the common stream cannot carry it.
pub fn case_constraints_strong(a: &CanonicalAlpha, p: PowerSplit) -> Result<CaseOutcome> {
    require_region(a, RegionCase::BothStrong, "case_constraints_strong")?;
    PowerSplit::new(p.a1, p.a2, a)?;
    let (a1, a2) = (a.alpha1(), a.alpha2());
    let (c1, c2) = (p.a1, p.a2);
    if a1 - c1 > 1.0 || a2 - c2 > 1.0 {
        return Ok(CaseOutcome::Infeasible);
    }
    let rows = [
        (1.0, 0.0, a1 + 1.0 - 2.0 * c1),
        (0.0, 1.0, a2 + 1.0 - 2.0 * c2),
        (1.0, 0.0, a1 - c1 + c2),
        (0.0, 1.0, a2 - c2 + c1),
        (1.0, 0.0, 1.0),
        (0.0, 1.0, 1.0),
        (1.0, 0.0, c2),
        (0.0, 1.0, c1),
        (-1.0, 0.0, 0.0),
        (0.0, -1.0, 0.0),
    ];
    Ok(CaseOutcome::Feasible(two_var_program(&rows, [1.0, 1.0])))
}

/// Rate program for a split in the covered mixed region (alpha1 strong,
/// alpha2 weak, alpha1 + 2*alpha2 >= 2).
pub fn case_constraints_mixed(a: &CanonicalAlpha, p: PowerSplit) -> Result<CaseOutcome> {
    require_region(a, RegionCase::MixedCovered, "case_constraints_mixed")?;
    PowerSplit::new(p.a1, p.a2, a)?;
    let (a1, a2) = (a.alpha1(), a.alpha2());
    let (c1, c2) = (p.a1, p.a2);
    if a1 - c1 > 1.0 {
        return Ok(CaseOutcome::Infeasible);
    }
    let d1_cross = if 1.0 - c1 <= a2 {
        a1 - c1 + c2
    } else {
        a1 - a2 + c2 + 1.0 - 2.0 * c1
    };
    let rows = [
        (1.0, 0.0, a1 + 1.0 - 2.0 * c1),
        (0.0, 1.0, a2 + 1.0 - 2.0 * c2),
        (1.0, 0.0, d1_cross),
        (0.0, 1.0, a2 - c2 + c1),
        (1.0, 0.0, 1.0),
        (0.0, 1.0, 1.0),
        (1.0, 0.0, c2 - a2 + 1.0),
        (0.0, 1.0, c1),
        (-1.0, 0.0, 0.0),
        (0.0, -1.0, 0.0),
    ];
    Ok(CaseOutcome::Feasible(two_var_program(&rows, [1.0, 1.0])))
}

/// Closed-form lower bound and its optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormLower {
    /// Achievable sum-GDoF.
    pub sum: f64,
    /// Optimal A1* + A2* of the block-Markov scheme; `None` in the weak
    /// region, whose 3-slot scheme has no power split.
    pub a_sum_star: Option<f64>,
}

/// Closed-form achievable sum-GDoF per region: the block-Markov optimum in
/// the strong and covered-mixed regions (capped by the two unit per-user
/// rates) and the 3-slot scheme total in the weak region. `None` on the
/// open mixed region.
pub fn closed_form_lower(a: &CanonicalAlpha) -> Option<ClosedFormLower> {
    let (a1, a2) = (a.alpha1(), a.alpha2());
    match a.region() {
        RegionCase::BothWeak => Some(ClosedFormLower {
            sum: 2.0 - (a1 + a2) / 3.0,
            a_sum_star: None,
        }),
        RegionCase::MixedCovered => Some(ClosedFormLower {
            sum: ((4.0 + a1 - a2) / 3.0).min(2.0),
            a_sum_star: Some((a1 + 2.0 * a2 + 1.0) / 3.0),
        }),
        RegionCase::BothStrong => {
            let v = ((2.0 + a1 + a2) / 3.0).min(2.0);
            Some(ClosedFormLower {
                sum: v,
                a_sum_star: Some(v),
            })
        }
        RegionCase::MixedOpen => None,
    }
}

/// Whether the closed-form optimum is attained by the constraint polytopes
/// at this point, i.e. whether the split realizing it fits the admissible
/// box and the unit per-user rate caps.
///
/// In the strong region the closed form is realized by the split
/// `A_i = (2 alpha_i + 1 - alpha_j) / 3` with per-user rates `d_i = A_j`;
/// it exists iff `2 alpha1 - alpha2 <= 2` and `alpha1 + alpha2 <= 4`. In
/// the covered mixed region the split is `A1 = (2 alpha1 + alpha2 - 1) / 3`,
/// `A2 = (alpha2 + 2 - alpha1) / 3`, which exists iff
/// `alpha1 - alpha2 <= 2` and `2 alpha1 + alpha2 <= 4`. Outside these sets
/// the polytope optimum over every admissible split is strictly below the
/// closed form, so search and closed form legitimately disagree there.
pub fn closed_form_split_feasible(a: &CanonicalAlpha) -> bool {
    let (a1, a2) = (a.alpha1(), a.alpha2());
    match a.region() {
        RegionCase::BothStrong => 2.0 * a1 - a2 <= 2.0 + 1e-12 && a1 + a2 <= 4.0 + 1e-12,
        RegionCase::MixedCovered => a1 - a2 <= 2.0 + 1e-12 && 2.0 * a1 + a2 <= 4.0 + 1e-12,
        _ => false,
    }
}

/// The rate tuple of one block: the two common-stream loads and the two
/// private rates. The common loads are pinned to the overheard-interference
/// sizes (alpha_j - A_j), so the tuple is implied by a split and the
/// private rates chosen for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdofTuple {
    pub d_eta1: f64,
    pub d_eta2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl GdofTuple {
    /// The tuple implied by a split and the private rates at its optimum.
    pub fn implied(a: &CanonicalAlpha, p: PowerSplit, d1: f64, d2: f64) -> Self {
        Self {
            d_eta1: a.alpha2() - p.a2,
            d_eta2: a.alpha1() - p.a1,
            d1,
            d2,
        }
    }
}

/// Result of the exhaustive power-split search.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximinResult {
    pub sum: f64,
    pub best: PowerSplit,
    /// Full rate tuple at the winning split's program optimum. Only the sum
    /// and the split are claimed optimal; the per-user division is one
    /// maximizer among possibly many.
    pub tuple: GdofTuple,
    /// Number of feasible splits evaluated.
    pub feasible_splits: usize,
}

/// Exhaustively evaluates the case program over the (A1, A2) grid with the
/// given step inside the power-split box, solving each feasible program and
/// keeping the best optimum. Ties go to the lexicographically smallest
/// (A1, A2), which the scan order guarantees.
pub fn maximin_search(a: &CanonicalAlpha, grid_step: f64) -> Result<MaximinResult> {
    if !(grid_step > 0.0 && grid_step <= 0.1) {
        return Err(GdofError::InvalidGridStep(grid_step));
    }
    let region = a.region();
    let build: fn(&CanonicalAlpha, PowerSplit) -> Result<CaseOutcome> = match region {
        RegionCase::BothStrong => case_constraints_strong,
        RegionCase::MixedCovered => case_constraints_mixed,
        _ => {
            return Err(GdofError::WrongRegion {
                op: "maximin_search",
                required: "BOTH_STRONG or MIXED_COVERED",
                found: region.tag(),
                alpha1: a.alpha1(),
                alpha2: a.alpha2(),
            })
        }
    };

    let axis = |limit: f64| -> Vec<f64> {
        let mut v: Vec<f64> = (0..)
            .map(|i| f64::from(i) * grid_step)
            .take_while(|x| *x <= limit)
            .collect();
        if v.last().is_none_or(|&x| limit - x > 1e-12) {
            v.push(limit);
        }
        v
    };

    let mut best: Option<(f64, PowerSplit, (f64, f64))> = None;
    let mut feasible_splits = 0usize;
    for &a1 in &axis(a.alpha1()) {
        for &a2 in &axis(a.alpha2()) {
            let split = PowerSplit { a1, a2 };
            let lp = match build(a, split)? {
                CaseOutcome::Feasible(lp) => lp,
                CaseOutcome::Infeasible => continue,
            };
            let sol = lp.solve()?;
            if sol.status != LpStatus::Optimal {
                continue; // empty polytope for this split
            }
            feasible_splits += 1;
            if best.as_ref().is_none_or(|(v, _, _)| sol.value > *v) {
                best = Some((sol.value, split, (sol.point[0], sol.point[1])));
            }
        }
    }
    let (sum, best, (d1, d2)) = best.expect("every strong/mixed point admits a feasible split");
    Ok(MaximinResult {
        sum,
        best,
        tuple: GdofTuple::implied(a, best, d1, d2),
        feasible_splits,
    })
}

/// Which receiver a ledger entry credits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    Rx1,
    Rx2,
}

impl Receiver {
    pub fn index(&self) -> u8 {
        match self {
            Receiver::Rx1 => 1,
            Receiver::Rx2 => 2,
        }
    }
}

/// How the GDoF was obtained: decoded within the slot, or recovered later
/// from retransmitted interference via delayed CSI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntrySource {
    Immediate,
    Delayed,
}

impl EntrySource {
    pub fn tag(&self) -> &'static str {
        match self {
            EntrySource::Immediate => "IMMEDIATE",
            EntrySource::Delayed => "DELAYED",
        }
    }
}

/// One accounting line of the 3-slot scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub slot: u8,
    pub receiver: Receiver,
    pub source: EntrySource,
    pub gdof: f64,
    pub symbols: &'static str,
}

/// The 3-slot scheme accounting and per-user GDoF.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeSlotLedger {
    pub entries: Vec<LedgerEntry>,
    pub d1: f64,
    pub d2: f64,
}

/// GDoF ledger of the 3-slot retrospective scheme (weak region only).
///
/// Per receiver, three immediate entries (one per slot) plus one delayed
/// entry that resolves the two overheard private symbols; over three slots
/// this yields d1 = 1 - alpha2/3 and d2 = 1 - alpha1/3.
pub fn three_slot_ledger(a: &CanonicalAlpha) -> Result<ThreeSlotLedger> {
    require_region(a, RegionCase::BothWeak, "three_slot_ledger")?;
    let (a1, a2) = (a.alpha1(), a.alpha2());
    let entries = vec![
        LedgerEntry {
            slot: 1,
            receiver: Receiver::Rx1,
            source: EntrySource::Immediate,
            gdof: 1.0 - a1,
            symbols: "a3",
        },
        LedgerEntry {
            slot: 2,
            receiver: Receiver::Rx1,
            source: EntrySource::Immediate,
            gdof: 1.0 - a2,
            symbols: "a4",
        },
        LedgerEntry {
            slot: 3,
            receiver: Receiver::Rx1,
            source: EntrySource::Immediate,
            gdof: 1.0 - a1,
            symbols: "a5",
        },
        LedgerEntry {
            slot: 3,
            receiver: Receiver::Rx1,
            source: EntrySource::Delayed,
            gdof: 2.0 * a1,
            symbols: "a1,a2 via c1",
        },
        LedgerEntry {
            slot: 1,
            receiver: Receiver::Rx2,
            source: EntrySource::Immediate,
            gdof: 1.0 - a1,
            symbols: "b1",
        },
        LedgerEntry {
            slot: 2,
            receiver: Receiver::Rx2,
            source: EntrySource::Immediate,
            gdof: 1.0 - a2,
            symbols: "b4",
        },
        LedgerEntry {
            slot: 3,
            receiver: Receiver::Rx2,
            source: EntrySource::Immediate,
            gdof: 1.0 - a2,
            symbols: "b5",
        },
        LedgerEntry {
            slot: 3,
            receiver: Receiver::Rx2,
            source: EntrySource::Delayed,
            gdof: 2.0 * a2,
            symbols: "b2,b3 via c2",
        },
    ];
    debug_assert!(entries.iter().all(|e| e.gdof >= 0.0));
    Ok(ThreeSlotLedger {
        entries,
        d1: 1.0 - a2 / 3.0,
        d2: 1.0 - a1 / 3.0,
    })
}
