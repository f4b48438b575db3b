//! Revised simplex for 0/1 packing programs
//!
//! ```text
//! maximize   sum_j x_j
//! subject to sum_{j : i in col_j} x_j <= b_i   for every row i
//!            x >= 0
//! ```
//!
//! with `b >= 0`, so the all-slack basis is feasible and no phase one is
//! needed. The basis inverse is kept explicitly (rows are few: one per arc
//! that lies in some copy).
//!
//! Exact mode first runs the floating solver as a guide, re-inverts the
//! basis it ends on in rational arithmetic and continues from there with
//! Bland's rule. When the guide basis is already optimal (the usual case) the
//! exact phase only verifies it. When the guide basis is singular or
//! infeasible in exact arithmetic, the exact phase starts from the slack
//! basis instead.

use crate::error::{Error, Result};
use crate::num::Scalar;

#[derive(Debug, Clone)]
pub struct SimplexOutcome<S> {
    /// Optimal value of each structural column.
    pub primal: Vec<S>,
    /// Optimal dual value of each row.
    pub dual: Vec<S>,
    pub objective: S,
    /// Pivots made in the arithmetic of `S` (excludes the floating guide).
    pub pivots: usize,
    /// Pivots made by the floating guide, when one ran.
    pub guide_pivots: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    Bland,
    /// Largest reduced cost, falling back to Bland after a degenerate stall.
    Dantzig,
}

const STALL_LIMIT: usize = 50;

struct Program<'a, S> {
    rows: usize,
    columns: &'a [Vec<usize>],
    capacity: Vec<S>,
}

impl<S: Scalar> Program<'_, S> {
    fn width(&self) -> usize {
        self.columns.len() + self.rows
    }

    fn is_structural(&self, j: usize) -> bool {
        j < self.columns.len()
    }

    fn cost(&self, j: usize) -> S {
        if self.is_structural(j) {
            S::one()
        } else {
            S::zero()
        }
    }

    /// Calls `f(row, coefficient)` for each nonzero of column `j`.
    fn for_each_entry(&self, j: usize, mut f: impl FnMut(usize, S)) {
        if self.is_structural(j) {
            for &r in &self.columns[j] {
                f(r, S::one());
            }
        } else {
            f(j - self.columns.len(), S::one());
        }
    }
}

struct State<S> {
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<Vec<S>>,
    xb: Vec<S>,
}

impl<S: Scalar> State<S> {
    fn slack(p: &Program<S>) -> Self {
        let m = p.rows;
        let n = p.columns.len();
        let mut binv = vec![vec![S::zero(); m]; m];
        for (i, row) in binv.iter_mut().enumerate() {
            row[i] = S::one();
        }
        let mut in_basis = vec![false; p.width()];
        for i in 0..m {
            in_basis[n + i] = true;
        }
        State { basis: (n..n + m).collect(), in_basis, binv, xb: p.capacity.clone() }
    }

    /// Inverts the basis matrix of `basis`; `None` if singular or infeasible.
    fn from_basis(p: &Program<S>, basis: &[usize]) -> Option<Self> {
        let m = p.rows;
        // Gauss-Jordan on [B | I]
        let mut mat = vec![vec![S::zero(); 2 * m]; m];
        for (col, &j) in basis.iter().enumerate() {
            p.for_each_entry(j, |r, v| mat[r][col] = mat[r][col].add(&v));
        }
        for (i, row) in mat.iter_mut().enumerate() {
            row[m + i] = S::one();
        }
        for col in 0..m {
            let pivot_row = (col..m)
                .filter(|&r| !mat[r][col].is_zero())
                .max_by(|&a, &b| mat[a][col].abs().partial_cmp(&mat[b][col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
            mat.swap(col, pivot_row);
            let piv = mat[col][col].clone();
            for v in mat[col].iter_mut() {
                if !v.is_zero() {
                    *v = v.div(&piv);
                }
            }
            let prow = mat[col].clone();
            let nz: Vec<usize> = (0..2 * m).filter(|&k| !prow[k].is_zero()).collect();
            for (r, row) in mat.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for &k in &nz {
                    row[k] = row[k].sub(&f.mul(&prow[k])).snap();
                }
            }
        }
        let binv: Vec<Vec<S>> = mat.into_iter().map(|row| row[m..].to_vec()).collect();
        let xb: Vec<S> = binv
            .iter()
            .map(|row| S::sum(row.iter().zip(&p.capacity).map(|(a, b)| a.mul(b)).collect::<Vec<_>>().iter()))
            .collect();
        if xb.iter().any(|x| *x < S::zero() && (S::EXACT || S::zero().sub(x).exceeds_tol())) {
            return None;
        }
        let mut in_basis = vec![false; p.width()];
        for &j in basis {
            in_basis[j] = true;
        }
        Some(State { basis: basis.to_vec(), in_basis, binv, xb })
    }

    /// `y^T = c_B^T B^{-1}`.
    fn duals(&self, p: &Program<S>) -> Vec<S> {
        let mut y = vec![S::zero(); p.rows];
        for (i, &j) in self.basis.iter().enumerate() {
            if p.is_structural(j) {
                for (k, yk) in y.iter_mut().enumerate() {
                    let v = &self.binv[i][k];
                    if !v.is_zero() {
                        *yk = yk.add(v);
                    }
                }
            }
        }
        y
    }

    fn reduced_cost(&self, p: &Program<S>, y: &[S], j: usize) -> S {
        let mut rc = p.cost(j);
        p.for_each_entry(j, |r, v| rc = rc.sub(&v.mul(&y[r])));
        rc
    }

    fn entering(&self, p: &Program<S>, y: &[S], rule: Rule) -> Option<usize> {
        let mut best: Option<(usize, S)> = None;
        for j in 0..p.width() {
            if self.in_basis[j] {
                continue;
            }
            let rc = self.reduced_cost(p, y, j);
            if !rc.exceeds_tol() {
                continue;
            }
            match rule {
                Rule::Bland => return Some(j),
                Rule::Dantzig => {
                    if best.as_ref().is_none_or(|(_, b)| rc > *b) {
                        best = Some((j, rc));
                    }
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn direction(&self, p: &Program<S>, j: usize) -> Vec<S> {
        let mut d = vec![S::zero(); p.rows];
        p.for_each_entry(j, |r, v| {
            for (i, di) in d.iter_mut().enumerate() {
                let b = &self.binv[i][r];
                if !b.is_zero() {
                    *di = di.add(&b.mul(&v));
                }
            }
        });
        d
    }

    /// Min-ratio row; ties go to the smallest basic column index.
    fn leaving(&self, d: &[S]) -> Option<(usize, S)> {
        let mut best: Option<(usize, S)> = None;
        for (i, di) in d.iter().enumerate() {
            if !di.exceeds_tol() {
                continue;
            }
            let ratio = self.xb[i].div(di);
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best
    }

    fn pivot(&mut self, row: usize, j: usize, d: &[S]) {
        let piv = d[row].clone();
        for v in self.binv[row].iter_mut() {
            if !v.is_zero() {
                *v = v.div(&piv);
            }
        }
        self.xb[row] = self.xb[row].div(&piv);
        let prow = self.binv[row].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&k| !prow[k].is_zero()).collect();
        let px = self.xb[row].clone();
        for (i, di) in d.iter().enumerate() {
            if i == row || di.is_zero() {
                continue;
            }
            let r = &mut self.binv[i];
            for &k in &nz {
                r[k] = r[k].sub(&di.mul(&prow[k])).snap();
            }
            self.xb[i] = self.xb[i].sub(&di.mul(&px)).snap();
            if self.xb[i] < S::zero() && !S::zero().sub(&self.xb[i]).exceeds_tol() {
                self.xb[i] = S::zero();
            }
        }
        self.in_basis[self.basis[row]] = false;
        self.in_basis[j] = true;
        self.basis[row] = j;
    }

    fn run(&mut self, p: &Program<S>, mut rule: Rule) -> Result<usize> {
        let limit = 200 * p.width() + 1_000;
        let mut pivots = 0;
        let mut stall = 0;
        loop {
            let y = self.duals(p);
            let Some(j) = self.entering(p, &y, rule) else {
                return Ok(pivots);
            };
            let d = self.direction(p, j);
            let (row, step) = self
                .leaving(&d)
                .ok_or_else(|| Error::Numeric(format!("column {j} unbounded (no positive pivot entry)")))?;
            if step.is_zero() {
                stall += 1;
                if stall > STALL_LIMIT {
                    rule = Rule::Bland;
                }
            } else {
                stall = 0;
            }
            self.pivot(row, j, &d);
            pivots += 1;
            if pivots > limit {
                return Err(Error::Numeric(format!(
                    "pivot limit {limit} reached on a {}x{} program (possible cycling from round-off)",
                    p.rows,
                    p.columns.len()
                )));
            }
        }
    }

    fn outcome(&self, p: &Program<S>, pivots: usize, guide_pivots: usize) -> SimplexOutcome<S> {
        let mut primal = vec![S::zero(); p.columns.len()];
        for (i, &j) in self.basis.iter().enumerate() {
            if p.is_structural(j) {
                primal[j] = self.xb[i].clone();
            }
        }
        let dual = self.duals(p);
        let objective = S::sum(&primal);
        SimplexOutcome { primal, dual, objective, pivots, guide_pivots }
    }
}

fn validate<S: Scalar>(row_count: usize, columns: &[Vec<usize>], capacity: &[S]) -> Result<()> {
    if capacity.len() != row_count {
        return Err(Error::Numeric("capacity length differs from row count".into()));
    }
    if capacity.iter().any(|b| *b < S::zero()) {
        return Err(Error::Numeric("negative capacity".into()));
    }
    if let Some(j) = columns.iter().position(Vec::is_empty) {
        return Err(Error::Numeric(format!("empty column {j} makes the program unbounded")));
    }
    if let Some(j) = columns.iter().position(|c| c.iter().any(|&r| r >= row_count)) {
        return Err(Error::Numeric(format!("column {j} references a missing row")));
    }
    Ok(())
}

/// Solves the packing program described in the module docs.
///
/// `columns[j]` lists the rows with coefficient one in column `j` (a row
/// listed twice gets coefficient two).
pub fn maximize_packing<S: Scalar>(row_count: usize, columns: &[Vec<usize>], capacity: &[S]) -> Result<SimplexOutcome<S>> {
    validate(row_count, columns, capacity)?;
    let program = Program { rows: row_count, columns, capacity: capacity.to_vec() };

    if !S::EXACT {
        let mut state = State::slack(&program);
        let pivots = state.run(&program, Rule::Dantzig)?;
        return Ok(state.outcome(&program, pivots, 0));
    }

    let guide_capacity: Vec<f64> = capacity.iter().map(S::to_f64).collect();
    let guide = Program { rows: row_count, columns, capacity: guide_capacity };
    let mut guide_state = State::<f64>::slack(&guide);
    let (basis, guide_pivots) = match guide_state.run(&guide, Rule::Dantzig) {
        Ok(p) => (Some(guide_state.basis), p),
        Err(_) => (None, 0),
    };
    let mut state = basis.and_then(|b| State::from_basis(&program, &b)).unwrap_or_else(|| State::slack(&program));
    let pivots = state.run(&program, Rule::Bland)?;
    Ok(state.outcome(&program, pivots, guide_pivots))
}

/// Exact solve by Bland pivoting from the slack basis, without the guide.
pub fn maximize_packing_bland<S: Scalar>(row_count: usize, columns: &[Vec<usize>], capacity: &[S]) -> Result<SimplexOutcome<S>> {
    validate(row_count, columns, capacity)?;
    let program = Program { rows: row_count, columns, capacity: capacity.to_vec() };
    let mut state = State::slack(&program);
    let pivots = state.run(&program, Rule::Bland)?;
    Ok(state.outcome(&program, pivots, 0))
}
