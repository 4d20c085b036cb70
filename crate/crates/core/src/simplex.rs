//! Dense two-phase simplex for small linear programs in the form
//! min c.x subject to A x <= b, x >= 0 (b of any sign).
//!
//! Bland's rule is used throughout, so the method cannot cycle. Problem
//! sizes here are tiny (tens of variables), so no sparsity or revised
//! factorization is attempted.

use alloc::vec;
use alloc::vec::Vec;

pub struct LinearProgram {
    /// Objective coefficients, length n.
    pub objective: Vec<f64>,
    /// Constraint rows, each length n.
    pub rows: Vec<Vec<f64>>,
    /// Right-hand sides, length m.
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Per-row slack b - A x.
    pub slack: Vec<f64>,
    /// Residual infeasibility accepted at the boundary tolerance.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(LpSolution),
    /// No feasible point; `row` is a constraint that cannot be met.
    Infeasible {
        row: usize,
        violation: f64,
    },
    Unbounded,
}

const REDUCED_COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-10;
/// Phase-1 residual below this is treated as boundary-feasible.
const FEASIBILITY_TOL: f64 = 1e-7;

struct Tableau {
    /// m rows of (cols + 1) entries; last entry is the rhs.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row of (cols + 1) entries; last entry is -objective.
    cost: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let scale = self.rows[row][col];
        for v in &mut self.rows[row] {
            *v /= scale;
        }
        for r in 0..self.rows.len() {
            if r != row {
                let factor = self.rows[r][col];
                if factor != 0.0 {
                    for k in 0..=self.cols {
                        self.rows[r][k] -= factor * self.rows[row][k];
                    }
                }
            }
        }
        let factor = self.cost[col];
        if factor != 0.0 {
            for k in 0..=self.cols {
                self.cost[k] -= factor * self.rows[row][k];
            }
        }
        self.basis[row] = col;
    }

    /// Run simplex iterations to optimality. `allowed` masks columns that
    /// may enter the basis. Returns false on unboundedness.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        // Generous cap; Bland's rule terminates finitely well within it.
        let max_iters = 50 * (self.cols + self.rows.len() + 16);
        for _ in 0..max_iters {
            let entering = (0..self.cols).find(|&j| allowed[j] && self.cost[j] < -REDUCED_COST_TOL);
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let coef = self.rows[r][col];
                if coef > PIVOT_TOL {
                    let ratio = self.rows[r][self.cols] / coef;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - PIVOT_TOL
                                || (ratio < lratio + PIVOT_TOL && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, col);
        }
        true
    }

    fn value_of(&self, col: usize) -> f64 {
        for (r, &b) in self.basis.iter().enumerate() {
            if b == col {
                return self.rows[r][self.cols];
            }
        }
        0.0
    }
}

pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.objective.len();
    let m = lp.rows.len();
    let negated: Vec<bool> = lp.rhs.iter().map(|&b| b < 0.0).collect();
    let n_art = negated.iter().filter(|&&x| x).count();
    let cols = n + m + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_col = n + m;
    let mut art_rows = Vec::new();
    for j in 0..m {
        let mut row = vec![0.0; cols + 1];
        let sign = if negated[j] { -1.0 } else { 1.0 };
        for (dst, src) in row.iter_mut().zip(&lp.rows[j]) {
            *dst = sign * src;
        }
        row[n + j] = sign;
        row[cols] = sign * lp.rhs[j];
        if negated[j] {
            row[art_col] = 1.0;
            basis.push(art_col);
            art_rows.push(j);
            art_col += 1;
        } else {
            basis.push(n + j);
        }
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        cost: vec![0.0; cols + 1],
        basis,
        cols,
    };

    // Phase 1: minimize the sum of artificials.
    if n_art > 0 {
        for c in (n + m)..cols {
            tab.cost[c] = 1.0;
        }
        for r in 0..m {
            if tab.basis[r] >= n + m {
                let row = tab.rows[r].clone();
                for (cost, value) in tab.cost.iter_mut().zip(&row) {
                    *cost -= value;
                }
            }
        }
        let allowed = vec![true; cols];
        if !tab.optimize(&allowed) {
            return LpOutcome::Unbounded;
        }
        let residual = -tab.cost[cols];
        if residual > FEASIBILITY_TOL {
            // Name the most violated original row among those still
            // carrying a positive artificial.
            let mut worst = (0usize, 0.0f64);
            for (k, &orig_row) in art_rows.iter().enumerate() {
                let v = tab.value_of(n + m + k);
                if v > worst.1 {
                    worst = (orig_row, v);
                }
            }
            return LpOutcome::Infeasible {
                row: worst.0,
                violation: worst.1,
            };
        }
        // Drive any artificial still basic (at zero) out of the basis so it
        // cannot drift positive during phase 2. A row whose real columns
        // are all zero is redundant; its artificial is then pinned at zero.
        for r in 0..m {
            if tab.basis[r] >= n + m {
                if let Some(col) = (0..n + m).find(|&j| tab.rows[r][j].abs() > PIVOT_TOL) {
                    tab.pivot(r, col);
                }
            }
        }
    }

    // Phase 2: the real objective, artificials barred from entering.
    tab.cost = vec![0.0; cols + 1];
    tab.cost[..n].copy_from_slice(&lp.objective);
    for r in 0..m {
        let basic = tab.basis[r];
        let c = tab.cost[basic];
        if c != 0.0 {
            let row = tab.rows[r].clone();
            for (cost, value) in tab.cost.iter_mut().zip(&row) {
                *cost -= c * value;
            }
        }
    }
    let mut allowed = vec![true; cols];
    for a in allowed.iter_mut().skip(n + m) {
        *a = false;
    }
    if !tab.optimize(&allowed) {
        return LpOutcome::Unbounded;
    }

    let x: Vec<f64> = (0..n).map(|j| tab.value_of(j)).collect();
    let mut slack = Vec::with_capacity(m);
    let mut residual = 0.0f64;
    for j in 0..m {
        let dot: f64 = lp.rows[j].iter().zip(&x).map(|(a, v)| a * v).sum();
        let s = lp.rhs[j] - dot;
        if s < 0.0 {
            residual = residual.max(-s);
        }
        slack.push(s);
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    LpOutcome::Optimal(LpSolution {
        x,
        objective,
        slack,
        residual,
    })
}
