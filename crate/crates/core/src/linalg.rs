//! Exact dense linear algebra over the rationals, and the decision of
//! whether `M β = α` has a solution on the probability simplex.

use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(rational::to_f64).collect())
            .collect()
    }
}

impl fmt::Display for RationalMatrix {
    /// Exact grid, columns right-aligned.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|r| r.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[ {} ]", row.join("  "))?;
        }
        Ok(())
    }
}

pub fn mat_mul(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = RationalMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let v = out.get(i, j) + aik * b.get(k, j);
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// Outcome of Gauss-Jordan elimination on `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    /// Solutions form an affine space; `particular` sets the free variables
    /// to zero.
    Underdetermined {
        particular: Vec<Rational>,
        free: Vec<usize>,
    },
    /// Equation `equation` (original numbering) reduces to `0 = residual`.
    Inconsistent {
        equation: usize,
        residual: Rational,
    },
}

pub fn solve_linear(a: &RationalMatrix, b: &[Rational]) -> Result<LinearSolution> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "{} right-hand sides for {} equations",
            b.len(),
            a.rows
        )));
    }
    let (m, n) = (a.rows, a.cols);
    let mut rows: Vec<(usize, Vec<Rational>)> = (0..m)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            (i, r)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&i| !rows[i].1[col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank].1[col].recip();
        for v in rows[rank].1.iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[rank].1.clone();
        for (i, (_, row)) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if let Some((equation, row)) = rows[rank..].iter().find(|(_, r)| !r[n].is_zero()) {
        return Ok(LinearSolution::Inconsistent {
            equation: *equation,
            residual: row[n].clone(),
        });
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = rows[r].1[n].clone();
    }
    if rank == n {
        Ok(LinearSolution::Unique(x))
    } else {
        let free = (0..n).filter(|c| !pivots.contains(c)).collect();
        Ok(LinearSolution::Underdetermined {
            particular: x,
            free,
        })
    }
}

/// Why no stochastic solution exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfeasibilityReason {
    /// With the simplex row appended, the equations contradict each other.
    Inconsistent { equation: usize, residual: Rational },
    /// The equations (simplex row included) have exactly one solution and it
    /// has a negative entry.
    UniqueSolutionOutsideSimplex { solution: Vec<Rational> },
    /// The solution set is a positive-dimensional affine space; phase 1 of
    /// the simplex method ends with this positive artificial mass.
    PhaseOneOptimum { value: Rational },
}

impl fmt::Display for InfeasibilityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfeasibilityReason::Inconsistent { equation, residual } => write!(
                f,
                "equation {equation} reduces to 0 = {} after elimination",
                rational::to_exact(residual)
            ),
            InfeasibilityReason::UniqueSolutionOutsideSimplex { solution } => {
                let parts: Vec<String> = solution.iter().map(rational::to_exact).collect();
                write!(
                    f,
                    "unique linear solution ({}) leaves the simplex",
                    parts.join(", ")
                )
            }
            InfeasibilityReason::PhaseOneOptimum { value } => write!(
                f,
                "phase-1 optimum {} > 0: no nonnegative solution",
                rational::to_exact(value)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible { witness: Vec<Rational> },
    Infeasible { reason: InfeasibilityReason },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            FeasibilityResult::Feasible { witness } => Some(witness),
            FeasibilityResult::Infeasible { .. } => None,
        }
    }
}

/// Decides whether some `β ≥ 0` with `Σβ = 1` solves `m β = alpha`.
///
/// Phase 1 of the simplex method in exact arithmetic with Bland's rule:
/// the entering column is the lowest-index one with negative reduced cost and
/// ratio ties leave by lowest basic-variable index. Output is deterministic.
pub fn solve_stochastic(m: &RationalMatrix, alpha: &[Rational]) -> Result<FeasibilityResult> {
    if m.rows != m.cols || alpha.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "system {}x{} with right-hand side of length {}",
            m.rows,
            m.cols,
            alpha.len()
        )));
    }
    let n = m.cols;
    let mut a_rows: Vec<Vec<Rational>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let mut rhs: Vec<Rational> = alpha.to_vec();
    a_rows.push(vec![Rational::one(); n]);
    rhs.push(Rational::one());

    match phase_one(&a_rows, &rhs) {
        Ok(witness) => Ok(FeasibilityResult::Feasible { witness }),
        Err(value) => {
            let system = RationalMatrix::from_rows(a_rows)?;
            let reason = match solve_linear(&system, &rhs)? {
                LinearSolution::Inconsistent { equation, residual } => {
                    InfeasibilityReason::Inconsistent { equation, residual }
                }
                LinearSolution::Unique(solution) => {
                    InfeasibilityReason::UniqueSolutionOutsideSimplex { solution }
                }
                LinearSolution::Underdetermined { .. } => {
                    InfeasibilityReason::PhaseOneOptimum { value }
                }
            };
            Ok(FeasibilityResult::Infeasible { reason })
        }
    }
}

/// Minimizes the artificial mass for `A x = b, x ≥ 0`. Returns a basic
/// feasible `x`, or the positive optimum.
fn phase_one(
    a_rows: &[Vec<Rational>],
    b: &[Rational],
) -> std::result::Result<Vec<Rational>, Rational> {
    let m = a_rows.len();
    let n = a_rows[0].len();
    let width = n + m;
    // Tableau rows: [structural | artificial | rhs], with rhs made nonnegative.
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a_rows.iter().zip(b).enumerate() {
        let sign = if bi.is_negative() {
            -Rational::one()
        } else {
            Rational::one()
        };
        let mut t: Vec<Rational> = row.iter().map(|v| v * &sign).collect();
        t.extend((0..m).map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        t.push(bi * &sign);
        tableau.push(t);
    }
    let mut basis: Vec<usize> = (n..width).collect();
    // Reduced costs of the phase-1 objective (sum of artificials) and its value.
    let mut cost: Vec<Rational> = (0..width)
        .map(|j| {
            if j < n {
                -tableau.iter().fold(Rational::zero(), |acc, t| acc + &t[j])
            } else {
                Rational::zero()
            }
        })
        .collect();
    let mut value = tableau
        .iter()
        .fold(Rational::zero(), |acc, t| acc + &t[width]);

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !tableau[i][enter].is_positive() {
                continue;
            }
            let ratio = &tableau[i][width] / &tableau[i][enter];
            leave = match leave {
                Some((best, ref r)) if *r < ratio || (*r == ratio && basis[best] < basis[i]) => {
                    Some((best, r.clone()))
                }
                _ => Some((i, ratio)),
            };
        }
        // Phase 1 is bounded below by zero, so an improving column always
        // has a positive entry.
        let (row, _) = leave.expect("phase-1 objective is bounded");
        let inv = tableau[row][enter].recip();
        for v in tableau[row].iter_mut() {
            *v *= &inv;
        }
        let pivot = tableau[row].clone();
        for (i, t) in tableau.iter_mut().enumerate() {
            if i == row || t[enter].is_zero() {
                continue;
            }
            let factor = t[enter].clone();
            for (v, p) in t.iter_mut().zip(&pivot) {
                *v -= &factor * p;
            }
        }
        let factor = cost[enter].clone();
        for (c, p) in cost.iter_mut().zip(&pivot) {
            *c -= &factor * p;
        }
        value += &factor * &pivot[width];
        basis[row] = enter;
    }

    if value.is_positive() {
        return Err(value);
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = tableau[i][width].clone();
        }
    }
    Ok(x)
}

/// Approximate stochastic least squares: minimizes `|m β - α|²` over the
/// simplex by projected gradient descent in floating point. Exploration aid
/// only; never consulted by exact decisions.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproximateSolution {
    pub beta: Vec<f64>,
    pub residual_norm: f64,
}

pub fn approximate_stochastic_solution(
    m: &RationalMatrix,
    alpha: &[Rational],
    iterations: usize,
) -> Result<ApproximateSolution> {
    if m.rows != m.cols || alpha.len() != m.rows {
        return Err(Error::DimensionMismatch("non-square system".into()));
    }
    let a = m.to_f64_rows();
    let b: Vec<f64> = alpha.iter().map(rational::to_f64).collect();
    let n = m.cols;
    let residual = |x: &[f64]| -> Vec<f64> {
        a.iter()
            .zip(&b)
            .map(|(row, bi)| row.iter().zip(x).map(|(r, v)| r * v).sum::<f64>() - bi)
            .collect()
    };
    // Step 1/L with L bounding the largest eigenvalue of AᵀA.
    let frob: f64 = a.iter().flatten().map(|v| v * v).sum();
    let step = if frob > 0.0 { 1.0 / frob } else { 1.0 };
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        let r = residual(&x);
        let grad: Vec<f64> = (0..n)
            .map(|j| a.iter().zip(&r).map(|(row, ri)| row[j] * ri).sum())
            .collect();
        let moved: Vec<f64> = x.iter().zip(&grad).map(|(v, g)| v - step * g).collect();
        x = project_to_simplex(&moved);
    }
    let residual_norm = residual(&x).iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(ApproximateSolution {
        beta: x,
        residual_norm,
    })
}

/// Euclidean projection onto `{x ≥ 0, Σx = 1}` by the sort-and-threshold rule.
fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}
