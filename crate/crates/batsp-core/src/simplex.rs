//! Dense phase-1 tableau simplex.
//!
//! The solver only decides feasibility of linear systems and returns a basic
//! feasible solution (a vertex) when one exists. Anti-cycling falls back to
//! Bland's rule after a fixed number of Dantzig pivots.

use alloc::vec;
use alloc::vec::Vec;

const EPS_PIVOT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Row {
    /// Sparse coefficients (column, value) over the structural variables.
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
    pub kind: RowKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimplexOutcome {
    /// Basic feasible solution over the structural variables.
    Feasible(Vec<f64>),
    /// Phase-1 optimum stayed positive; value reported.
    Infeasible(f64),
    IterationLimit,
}

/// Decides feasibility of `rows` over `num_vars` nonnegative variables.
pub fn phase1(num_vars: usize, rows: &[Row], max_iters: usize, tol: f64) -> SimplexOutcome {
    let m = rows.len();
    // Column layout: structural | surplus (Ge rows) | artificial (all rows).
    let num_surplus = rows.iter().filter(|r| r.kind == RowKind::Ge).count();
    let n_total = num_vars + num_surplus + m;
    let width = n_total + 1; // last column is rhs
    let mut t = vec![0.0f64; (m + 1) * width];
    let mut basis = vec![0usize; m];

    let mut surplus_at = num_vars;
    for (i, row) in rows.iter().enumerate() {
        let sign = if row.rhs < 0.0 { -1.0 } else { 1.0 };
        for &(j, c) in &row.coeffs {
            debug_assert!(j < num_vars);
            t[i * width + j] += sign * c;
        }
        if row.kind == RowKind::Ge {
            t[i * width + surplus_at] = -sign;
            surplus_at += 1;
        }
        let art = num_vars + num_surplus + i;
        t[i * width + art] = 1.0;
        t[i * width + n_total] = sign * row.rhs;
        basis[i] = art;
    }

    // Phase-1 objective row: minimize the artificial sum. Expressed as the sum
    // of all constraint rows so that every basic artificial has reduced cost 0.
    for i in 0..m {
        for j in 0..=n_total {
            t[m * width + j] += t[i * width + j];
        }
    }
    // Zero out artificial columns in the objective (cost 1 each).
    for i in 0..m {
        let art = num_vars + num_surplus + i;
        t[m * width + art] -= 1.0;
    }

    let bland_after = max_iters / 2;
    for iter in 0..max_iters {
        let bland = iter >= bland_after;
        // Entering column: positive reduced cost in the phase-1 row.
        let mut enter = None;
        if bland {
            for j in 0..n_total {
                if t[m * width + j] > EPS_PIVOT {
                    enter = Some(j);
                    break;
                }
            }
        } else {
            let mut best = EPS_PIVOT;
            for j in 0..n_total {
                if t[m * width + j] > best {
                    best = t[m * width + j];
                    enter = Some(j);
                }
            }
        }
        let Some(enter) = enter else {
            // Optimal. Objective value equals the remaining artificial sum.
            let obj = t[m * width + n_total];
            if obj > tol {
                return SimplexOutcome::Infeasible(obj);
            }
            let mut x = vec![0.0f64; num_vars];
            for i in 0..m {
                if basis[i] < num_vars {
                    x[basis[i]] = t[i * width + n_total];
                }
            }
            return SimplexOutcome::Feasible(x);
        };

        // Ratio test.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let a = t[i * width + enter];
            if a > EPS_PIVOT {
                let ratio = t[i * width + n_total] / a;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best_ratio - EPS_PIVOT
                            || (ratio < best_ratio + EPS_PIVOT && bland && basis[i] < basis[l])
                    }
                };
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // Unbounded phase-1 objective cannot happen with artificials >= 0;
            // treat as numerical failure.
            return SimplexOutcome::IterationLimit;
        };

        // Pivot on (leave, enter).
        let piv = t[leave * width + enter];
        for j in 0..=n_total {
            t[leave * width + j] /= piv;
        }
        for i in 0..=m {
            if i == leave {
                continue;
            }
            let factor = t[i * width + enter];
            if factor != 0.0 {
                for j in 0..=n_total {
                    t[i * width + j] -= factor * t[leave * width + j];
                }
            }
        }
        basis[leave] = enter;
    }
    SimplexOutcome::IterationLimit
}
