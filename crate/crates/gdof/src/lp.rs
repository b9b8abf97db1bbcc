//! Small-scale linear program solver by exhaustive vertex enumeration.
//!
//! Instances here are tiny (2-6 variables, a couple dozen inequality
//! constraints), so enumerating every variable-count-sized subset of
//! constraints, solving the square system, and keeping feasible points is
//! exact and deterministic. The same solver doubles as the verification
//! oracle for the rate-region polytopes, with a rejection-sampling second
//! opinion in [`LinearProgram::solve_by_sampling`].

use crate::error::{GdofError, Result};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Hard cap on the number of variables for vertex enumeration.
pub const MAX_VARIABLES: usize = 6;

/// Feasibility and comparison tolerance used throughout the solver.
pub const FEAS_TOL: f64 = 1e-9;

/// Pivots smaller than this mark a constraint subset as singular.
const SINGULAR_TOL: f64 = 1e-12;

/// One inequality `coeffs . x <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub bound: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, bound: f64) -> Self {
        Self { coeffs, bound }
    }

    fn slack(&self, x: &[f64]) -> f64 {
        self.bound - dot(&self.coeffs, x)
    }
}

/// A maximization program over named variables with `<=` constraints only.
///
/// Nonnegativity constraints are explicit entries like any other row;
/// equalities are modeled as two opposing inequalities.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `point` and `value` are meaningful only when `Optimal`;
/// `active_set` lists the constraint indices whose intersection defines the
/// returned vertex, in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub point: Vec<f64>,
    pub active_set: Vec<usize>,
}

/// Outcome of the rejection-sampling estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum SamplingOutcome {
    /// Best objective found over feasible samples; a lower bound on the
    /// optimum (within tolerance).
    Estimate { value: f64, point: Vec<f64> },
    /// No feasible sample was found. Says nothing about infeasibility.
    Inconclusive,
}

impl LinearProgram {
    pub fn new(
        variables: Vec<String>,
        constraints: Vec<Constraint>,
        objective: Vec<f64>,
    ) -> Result<Self> {
        let lp = Self {
            variables,
            constraints,
            objective,
        };
        lp.check_dimensions()?;
        Ok(lp)
    }

    fn check_dimensions(&self) -> Result<()> {
        let n = self.variables.len();
        if n > MAX_VARIABLES {
            return Err(GdofError::LpCapacity(n));
        }
        if self.objective.len() != n {
            return Err(GdofError::LpDimension(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                n
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(GdofError::LpDimension(format!(
                    "constraint {i} has {} coefficients for {} variables",
                    c.coeffs.len(),
                    n
                )));
            }
        }
        Ok(())
    }

    fn is_feasible(&self, x: &[f64]) -> bool {
        self.constraints.iter().all(|c| c.slack(x) >= -FEAS_TOL)
    }

    /// Exhaustive vertex enumeration.
    ///
    /// Every n-subset of constraints is solved as a square system by partial
    /// pivoting; singular subsets are skipped. Among feasible vertices the
    /// maximum-objective one wins, with ties broken by the lowest
    /// lexicographic constraint-subset index (subsets are visited in that
    /// order and replaced only on strict improvement). Unboundedness is
    /// declared when the feasible set is nonempty and a recession ray
    /// improves the objective.
    pub fn solve(&self) -> Result<LpSolution> {
        self.check_dimensions()?;
        let n = self.variables.len();
        let m = self.constraints.len();

        let mut best: Option<(f64, Vec<f64>, Vec<usize>)> = None;
        if n > 0 && m >= n {
            let mut subset: Vec<usize> = (0..n).collect();
            loop {
                if let Some(x) = self.solve_subset(&subset) {
                    if self.is_feasible(&x) {
                        let value = dot(&self.objective, &x);
                        let better = match &best {
                            None => true,
                            Some((v, _, _)) => value > *v,
                        };
                        if better {
                            best = Some((value, x, subset.clone()));
                        }
                    }
                }
                if !next_subset(&mut subset, m) {
                    break;
                }
            }
        }

        // Recession test: the feasible set must be nonempty (a vertex or the
        // origin probe) and some homogeneously-feasible ray must improve the
        // objective. Programs whose variables all carry single-variable
        // bounds in both directions have no rays at all.
        let probe = vec![0.0; n];
        let feasible_nonempty = best.is_some() || self.is_feasible(&probe);
        if feasible_nonempty && !self.has_bounding_box() && self.has_improving_ray() {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                value: f64::INFINITY,
                point: Vec::new(),
                active_set: Vec::new(),
            });
        }

        match best {
            Some((value, point, active_set)) => Ok(LpSolution {
                status: LpStatus::Optimal,
                value,
                point,
                active_set,
            }),
            None => {
                if self.is_feasible(&probe) {
                    // Feasible but without any vertex (fewer independent
                    // constraints than variables). The objective cannot
                    // improve along any ray, so the probe value is attained.
                    Ok(LpSolution {
                        status: LpStatus::Optimal,
                        value: dot(&self.objective, &probe),
                        point: probe,
                        active_set: Vec::new(),
                    })
                } else {
                    Ok(LpSolution {
                        status: LpStatus::Infeasible,
                        value: f64::NEG_INFINITY,
                        point: Vec::new(),
                        active_set: Vec::new(),
                    })
                }
            }
        }
    }

    /// Rejection-samples the axis-aligned box implied by single-variable
    /// constraints and returns the best feasible objective value seen.
    ///
    /// By construction the estimate never exceeds `solve().value` by more
    /// than the tolerance. Finding no feasible sample is reported as
    /// [`SamplingOutcome::Inconclusive`], not as infeasibility.
    pub fn solve_by_sampling(&self, samples: usize, seed: u64) -> Result<SamplingOutcome> {
        self.check_dimensions()?;
        let n = self.variables.len();
        let (lo, hi) = self.sampling_box()?;

        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut best: Option<(f64, Vec<f64>)> = None;
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            // Empty box: no sample can be feasible.
            return Ok(SamplingOutcome::Inconclusive);
        }
        let mut x = vec![0.0; n];
        for _ in 0..samples {
            for i in 0..n {
                x[i] = lo[i] + (hi[i] - lo[i]) * uniform01(&mut rng);
            }
            if self.is_feasible(&x) {
                let value = dot(&self.objective, &x);
                if best.as_ref().is_none_or(|(v, _)| value > *v) {
                    best = Some((value, x.clone()));
                }
            }
        }
        Ok(match best {
            Some((value, point)) => SamplingOutcome::Estimate { value, point },
            None => SamplingOutcome::Inconclusive,
        })
    }

    /// True when every variable has finite single-variable bounds in both
    /// directions, which rules out recession rays.
    fn has_bounding_box(&self) -> bool {
        self.sampling_box().is_ok()
    }

    /// Per-variable bounds read off single-variable constraints.
    fn sampling_box(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.variables.len();
        let mut lo = vec![f64::NEG_INFINITY; n];
        let mut hi = vec![f64::INFINITY; n];
        for c in &self.constraints {
            let mut nonzero = None;
            let mut single = true;
            for (i, &a) in c.coeffs.iter().enumerate() {
                if a != 0.0 {
                    if nonzero.is_some() {
                        single = false;
                        break;
                    }
                    nonzero = Some((i, a));
                }
            }
            if !single {
                continue;
            }
            if let Some((i, a)) = nonzero {
                let b = c.bound / a;
                if a > 0.0 {
                    hi[i] = hi[i].min(b);
                } else {
                    lo[i] = lo[i].max(b);
                }
            }
        }
        for i in 0..n {
            if !lo[i].is_finite() || !hi[i].is_finite() {
                return Err(GdofError::UnboundedSamplingBox(self.variables[i].clone()));
            }
        }
        Ok((lo, hi))
    }

    /// Solves the square system of the given constraint subset, treated as
    /// equalities. Returns `None` for singular subsets.
    fn solve_subset(&self, subset: &[usize]) -> Option<Vec<f64>> {
        let n = subset.len();
        let mut a = vec![0.0; n * n];
        let mut b = vec![0.0; n];
        for (r, &ci) in subset.iter().enumerate() {
            let c = &self.constraints[ci];
            a[r * n..(r + 1) * n].copy_from_slice(&c.coeffs);
            b[r] = c.bound;
        }
        solve_square(&mut a, &mut b, n)
    }

    /// Looks for a direction r with `A r <= tol` componentwise and
    /// `objective . r > tol`.
    fn has_improving_ray(&self) -> bool {
        let n = self.variables.len();
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        // The objective direction and the coordinate axes.
        candidates.push(self.objective.clone());
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            candidates.push(e.clone());
            e[i] = -1.0;
            candidates.push(e);
        }
        // Null directions of (n-1)-subsets of constraints.
        if n >= 2 && self.constraints.len() >= n - 1 {
            let mut subset: Vec<usize> = (0..n - 1).collect();
            loop {
                if let Some(r) = self.null_direction(&subset) {
                    candidates.push(r.iter().map(|v| -v).collect());
                    candidates.push(r);
                }
                if !next_subset(&mut subset, self.constraints.len()) {
                    break;
                }
            }
        }
        candidates.iter().any(|r| self.is_improving_ray(r))
    }

    fn is_improving_ray(&self, r: &[f64]) -> bool {
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < SINGULAR_TOL {
            return false;
        }
        let scaled: Vec<f64> = r.iter().map(|v| v / norm).collect();
        dot(&self.objective, &scaled) > FEAS_TOL
            && self
                .constraints
                .iter()
                .all(|c| dot(&c.coeffs, &scaled) <= FEAS_TOL)
    }

    /// A vector in the null space of the rows indexed by `subset`, found by
    /// eliminating and back-substituting with one free variable pinned to 1.
    fn null_direction(&self, subset: &[usize]) -> Option<Vec<f64>> {
        let n = self.variables.len();
        let rows = subset.len();
        debug_assert_eq!(rows + 1, n);
        // Eliminate to row echelon form on the rows x n system.
        let mut a = vec![0.0; rows * n];
        for (r, &ci) in subset.iter().enumerate() {
            a[r * n..(r + 1) * n].copy_from_slice(&self.constraints[ci].coeffs);
        }
        let mut pivot_cols = Vec::with_capacity(rows);
        let mut row = 0;
        for col in 0..n {
            if row == rows {
                break;
            }
            let (mut pr, mut pv) = (row, a[row * n + col].abs());
            for r in row + 1..rows {
                let v = a[r * n + col].abs();
                if v > pv {
                    pr = r;
                    pv = v;
                }
            }
            if pv < SINGULAR_TOL {
                continue;
            }
            if pr != row {
                for c in 0..n {
                    a.swap(row * n + c, pr * n + c);
                }
            }
            let p = a[row * n + col];
            for r in row + 1..rows {
                let f = a[r * n + col] / p;
                if f != 0.0 {
                    for c in col..n {
                        a[r * n + c] -= f * a[row * n + c];
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        if row < rows {
            return None; // rank-deficient subset; other subsets cover it
        }
        let free_col = (0..n).find(|c| !pivot_cols.contains(c))?;
        let mut r_vec = vec![0.0; n];
        r_vec[free_col] = 1.0;
        for (ri, &pc) in pivot_cols.iter().enumerate().rev() {
            let mut s = 0.0;
            for c in pc + 1..n {
                s += a[ri * n + c] * r_vec[c];
            }
            r_vec[pc] = -s / a[ri * n + pc];
        }
        Some(r_vec)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn uniform01(rng: &mut ChaCha12Rng) -> f64 {
    // 53-bit uniform in (0, 1]; strictly positive so logs stay finite.
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Gaussian elimination with partial pivoting on an n x n system.
fn solve_square(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let (mut pr, mut pv) = (col, a[col * n + col].abs());
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > pv {
                pr = r;
                pv = v;
            }
        }
        if pv < SINGULAR_TOL {
            return None;
        }
        if pr != col {
            for c in 0..n {
                a.swap(col * n + c, pr * n + c);
            }
            b.swap(col, pr);
        }
        let p = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f != 0.0 {
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r * n + c] * x[c];
        }
        x[r] = s / a[r * n + r];
    }
    Some(x)
}

/// Advances `subset` to the next k-combination of {0..m} in lexicographic
/// order. Returns false when exhausted.
fn next_subset(subset: &mut [usize], m: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < m - (k - i) {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Convenience constructor for the 2-variable programs used by the bound
/// modules: rows of `(c1, c2, bound)` meaning `c1*d1 + c2*d2 <= bound`,
/// maximizing `d1 + d2` unless another objective is given.
pub fn two_var_program(rows: &[(f64, f64, f64)], objective: [f64; 2]) -> LinearProgram {
    LinearProgram {
        variables: vec!["d1".into(), "d2".into()],
        constraints: rows
            .iter()
            .map(|&(c1, c2, b)| Constraint::new(vec![c1, c2], b))
            .collect(),
        objective: objective.to_vec(),
    }
}
