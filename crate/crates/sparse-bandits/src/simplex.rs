//! A small dense two-phase simplex solver for problems of the form
//!
//! ```text
//!     minimize    c . x
//!     subject to  A x >= b,   x >= 0,   b >= 0
//! ```
//!
//! Pivoting uses Bland's rule (lowest eligible index) for both the entering
//! and leaving variable, which rules out cycling. The lower-bound programs
//! this solver is the oracle for have at most a few hundred rows, so a dense
//! tableau is the right trade-off: no factorization machinery, easy to audit.

use thiserror::Error;

/// One `coeffs . x >= rhs` constraint row.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// A linear program `min objective . x  s.t.  rows, x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Smallest slack `coeffs . x - rhs` over all rows, `+inf` when there
    /// are no rows. Negative values mean `x` is infeasible.
    pub fn min_slack(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|row| {
                row.coeffs
                    .iter()
                    .zip(x)
                    .map(|(&a, &xi)| a * xi)
                    .sum::<f64>()
                    - row.rhs
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// An optimal basic feasible solution.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub coefficients: Vec<f64>,
    pub value: f64,
    pub status: LpStatus,
}

#[derive(Debug, Error, PartialEq)]
pub enum SimplexError {
    #[error("problem is infeasible")]
    Infeasible,
    #[error("problem is unbounded")]
    Unbounded,
    #[error("numerical failure: {0}")]
    Numerical(String),
}

const PIVOT_EPS: f64 = 1e-10;
const COST_EPS: f64 = 1e-9;
const FEAS_EPS: f64 = 1e-8;

struct Tableau {
    /// `m x (width + 1)` rows, last column is the rhs.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row, aligned with `rows` minus the rhs column.
    cost: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        *self.rows[r].last().unwrap()
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.rows[r][e];
        let inv = 1.0 / piv;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[e];
            if factor != 0.0 {
                for (v, &p) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
                row[e] = 0.0;
            }
        }
        let factor = self.cost[e];
        if factor != 0.0 {
            for (c, &p) in self.cost.iter_mut().zip(&pivot_row) {
                *c -= factor * p;
            }
            self.cost[e] = 0.0;
        }
        self.basis[r] = e;
    }

    /// Bland: entering column = lowest index with negative reduced cost.
    fn entering(&self, allowed: usize) -> Option<usize> {
        (0..allowed).find(|&j| self.cost[j] < -COST_EPS)
    }

    /// Bland: leaving row = min ratio, ties to the lowest basic variable.
    fn leaving(&self, e: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.rows.len() {
            let a = self.rows[r][e];
            if a <= PIVOT_EPS {
                continue;
            }
            let ratio = self.rhs(r) / a;
            match best {
                None => best = Some((r, ratio)),
                Some((br, bratio)) => {
                    if ratio < bratio - 1e-12
                        || ((ratio - bratio).abs() <= 1e-12 && self.basis[r] < self.basis[br])
                    {
                        best = Some((r, ratio));
                    }
                }
            }
        }
        best.map(|(r, _)| r)
    }

    /// Pivots until optimal. `allowed` columns may enter the basis.
    fn run(&mut self, allowed: usize, max_iters: usize) -> Result<(), SimplexError> {
        for _ in 0..max_iters {
            let Some(e) = self.entering(allowed) else {
                return Ok(());
            };
            let Some(r) = self.leaving(e) else {
                return Err(SimplexError::Unbounded);
            };
            self.pivot(r, e);
        }
        Err(SimplexError::Numerical(format!(
            "simplex did not converge within {max_iters} pivots"
        )))
    }
}

/// Solves the program to optimality.
///
/// `Infeasible` and `Unbounded` outcomes surface as errors; a returned
/// solution is always `Optimal` and has been re-checked against every
/// constraint.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution, SimplexError> {
    let n = problem.num_vars();
    let m = problem.num_rows();

    for (i, row) in problem.rows.iter().enumerate() {
        if row.coeffs.len() != n {
            return Err(SimplexError::Numerical(format!(
                "row {i} has {} coefficients, expected {n}",
                row.coeffs.len()
            )));
        }
        if !row.rhs.is_finite() || row.rhs < 0.0 {
            return Err(SimplexError::Numerical(format!(
                "row {i} rhs {} must be finite and nonnegative",
                row.rhs
            )));
        }
        if row.coeffs.iter().any(|a| !a.is_finite()) {
            return Err(SimplexError::Numerical(format!(
                "row {i} has non-finite entries"
            )));
        }
    }
    if problem.objective.iter().any(|c| !c.is_finite()) {
        return Err(SimplexError::Numerical(
            "objective has non-finite entries".into(),
        ));
    }

    if m == 0 {
        // Nonnegativity only: the minimum of a linear objective over the
        // nonnegative orthant is at the origin unless some cost is negative.
        if problem.objective.iter().any(|&c| c < -COST_EPS) {
            return Err(SimplexError::Unbounded);
        }
        return Ok(LpSolution {
            coefficients: vec![0.0; n],
            value: 0.0,
            status: LpStatus::Optimal,
        });
    }

    // Columns: 0..n structural, n..n+m surplus, n+m..n+2m artificial.
    let width = n + 2 * m;
    let mut rows = Vec::with_capacity(m);
    for (i, row) in problem.rows.iter().enumerate() {
        let mut r = vec![0.0; width + 1];
        r[..n].copy_from_slice(&row.coeffs);
        r[n + i] = -1.0;
        r[n + m + i] = 1.0;
        r[width] = row.rhs;
        rows.push(r);
    }
    let basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();

    // Phase 1: minimize the sum of artificials. Reduced cost of column j in
    // the all-artificial basis is -sum_i tab[i][j] for non-artificial j.
    let mut cost = vec![0.0; width];
    for (j, c) in cost.iter_mut().enumerate().take(n + m) {
        *c = -rows.iter().map(|r| r[j]).sum::<f64>();
    }
    let mut tab = Tableau { rows, cost, basis };
    let max_iters = 1000 * (width + m + 16);
    tab.run(n + m, max_iters)?;

    let infeasibility: f64 = tab
        .basis
        .iter()
        .zip(0..m)
        .filter(|(&b, _)| b >= n + m)
        .map(|(_, r)| tab.rhs(r))
        .sum();
    if infeasibility > FEAS_EPS {
        return Err(SimplexError::Infeasible);
    }

    // Drive leftover artificials out of the basis; rows that offer no pivot
    // are linearly dependent and can be dropped.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n + m {
            if let Some(j) = (0..n + m).find(|&j| tab.rows[r][j].abs() > PIVOT_EPS) {
                tab.pivot(r, j);
            } else {
                tab.rows.remove(r);
                tab.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }

    // Phase 2 on the original objective: price out the basic columns.
    let mut cost = vec![0.0; width];
    cost[..n].copy_from_slice(&problem.objective);
    for (r, &b) in tab.basis.iter().enumerate() {
        let cb = if b < n { problem.objective[b] } else { 0.0 };
        if cb != 0.0 {
            for (c, &a) in cost.iter_mut().zip(&tab.rows[r]) {
                *c -= cb * a;
            }
        }
    }
    for c in cost[n + m..].iter_mut() {
        *c = f64::INFINITY; // artificials may never re-enter
    }
    tab.cost = cost;
    tab.run(n + m, max_iters)?;

    let mut x = vec![0.0; n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs(r);
        }
    }
    for xi in x.iter_mut() {
        if *xi < 0.0 {
            if *xi < -FEAS_EPS {
                return Err(SimplexError::Numerical(format!(
                    "basic variable went negative: {xi}"
                )));
            }
            *xi = 0.0;
        }
    }
    let worst = problem
        .rows
        .iter()
        .map(|row| {
            let lhs: f64 = row.coeffs.iter().zip(&x).map(|(&a, &v)| a * v).sum();
            (row.rhs - lhs) / (1.0 + row.rhs.abs())
        })
        .fold(0.0f64, f64::max);
    if worst > FEAS_EPS {
        return Err(SimplexError::Numerical(format!(
            "solution violates a constraint by relative {worst:e}"
        )));
    }

    let value = problem.objective.iter().zip(&x).map(|(&c, &v)| c * v).sum();
    Ok(LpSolution {
        coefficients: x,
        value,
        status: LpStatus::Optimal,
    })
}
