//! Gauss–Jordan elimination over the field of rational expressions.

use thiserror::Error;

use crate::symexpr::{Bindings, CoordId, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("equation is not linear in '{0}'")]
    NonLinear(String),
}

/// Which column a row reduction prefers as pivot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    First,
    Last,
}

/// Reduced row echelon data: each pivot unknown equals its constant minus the
/// listed multiples of the free unknowns.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub ncols: usize,
    pub pivots: Vec<Pivot>,
    pub free: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Pivot {
    pub col: usize,
    pub constant: Scalar,
    pub free_coeffs: Vec<(usize, Scalar)>,
}

impl LinearSolution {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Express every unknown through the free ones; free unknowns map to
    /// themselves.
    pub fn assignment(&self, unknowns: &[CoordId]) -> Bindings {
        let mut out = Bindings::new();
        for &f in &self.free {
            out.insert(unknowns[f].clone(), Scalar::coord(&unknowns[f]));
        }
        for p in &self.pivots {
            let mut v = p.constant.clone();
            for (f, k) in &p.free_coeffs {
                v = v - k * Scalar::coord(&unknowns[*f]);
            }
            out.insert(unknowns[p.col].clone(), v);
        }
        out
    }

    /// The solution with every free unknown set to zero.
    pub fn particular(&self) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.ncols];
        for p in &self.pivots {
            out[p.col] = p.constant.clone();
        }
        out
    }
}

fn pick_row(rows: &[Vec<Scalar>], used: &[bool], col: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (r, row) in rows.iter().enumerate() {
        if used[r] || row[col].is_zero() {
            continue;
        }
        if row[col].is_constant() {
            return Some(r);
        }
        best.get_or_insert(r);
    }
    best
}

/// Solve `a · u = b`.
pub fn solve(
    a: &[Vec<Scalar>],
    b: &[Scalar],
    ncols: usize,
    order: PivotOrder,
) -> Result<LinearSolution, LinearError> {
    let mut rows: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.resize(ncols, Scalar::zero());
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut used = vec![false; rows.len()];
    let cols: Vec<usize> = match order {
        PivotOrder::First => (0..ncols).collect(),
        PivotOrder::Last => (0..ncols).rev().collect(),
    };
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new();
    for col in cols {
        let Some(r) = pick_row(&rows, &used, col) else {
            continue;
        };
        used[r] = true;
        let inv = rows[r][col].recip().expect("pivot is nonzero");
        let pivot_row: Vec<Scalar> = rows[r].iter().map(|v| v * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let k = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &k * pv;
                }
            }
        }
        rows[r] = pivot_row;
        pivot_rows.push((col, r));
    }
    for (r, row) in rows.iter().enumerate() {
        if !used[r] && !row[ncols].is_zero() {
            return Err(LinearError::Inconsistent);
        }
    }
    let pivot_cols: Vec<usize> = pivot_rows.iter().map(|(c, _)| *c).collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut pivots: Vec<Pivot> = pivot_rows
        .into_iter()
        .map(|(col, r)| Pivot {
            col,
            constant: rows[r][ncols].clone(),
            free_coeffs: free
                .iter()
                .filter(|f| !rows[r][**f].is_zero())
                .map(|f| (*f, rows[r][*f].clone()))
                .collect(),
        })
        .collect();
    pivots.sort_by_key(|p| p.col);
    Ok(LinearSolution {
        ncols,
        pivots,
        free,
    })
}

/// Rank of a matrix of expressions.
pub fn rank(a: &[Vec<Scalar>], ncols: usize) -> usize {
    let b = vec![Scalar::zero(); a.len()];
    solve(a, &b, ncols, PivotOrder::First)
        .expect("homogeneous systems are consistent")
        .rank()
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(a: &[Vec<Scalar>]) -> Scalar {
    match a.len() {
        0 => Scalar::one(),
        1 => a[0][0].clone(),
        n => {
            let mut acc = Scalar::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Scalar>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &a[0][j] * determinant(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Coefficient matrix and right-hand side of the equations `expr = 0`,
/// which must be affine in `unknowns`.
pub fn extract(
    exprs: &[Scalar],
    unknowns: &[CoordId],
) -> Result<(Vec<Vec<Scalar>>, Vec<Scalar>), LinearError> {
    let zero: Bindings = unknowns
        .iter()
        .map(|u| (u.clone(), Scalar::zero()))
        .collect();
    let mut a = Vec::with_capacity(exprs.len());
    let mut b = Vec::with_capacity(exprs.len());
    for e in exprs {
        let mut row = Vec::with_capacity(unknowns.len());
        for u in unknowns {
            let k = e.diff(u);
            if let Some(w) = unknowns.iter().find(|w| k.depends_on(w)) {
                return Err(LinearError::NonLinear(w.name().to_string()));
            }
            row.push(k);
        }
        let c = e
            .substitute(&zero)
            .expect("substituting zero for linear unknowns cannot divide by zero");
        a.push(row);
        b.push(-c);
    }
    Ok((a, b))
}
