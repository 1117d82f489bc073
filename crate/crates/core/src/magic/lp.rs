//! Dense two-phase primal simplex with Bland's rule for `min c·x, A x = b, x ≥ 0`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const LP_TOLERANCE: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;
const REFACTOR_EVERY: usize = 40;

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Multipliers `y` of the equality rows: `c - Aᵀy ≥ 0` at optimality, `b·y = value`.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

struct Tableau {
    /// Original rows `[A | I | b]` after sign normalization.
    orig: Vec<Vec<f64>>,
    cost: Vec<f64>,
    rows: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    /// Recompute the tableau and reduced costs from the original rows for the current basis.
    /// A numerically singular basis leaves the tableau untouched.
    fn refactor(&mut self) -> Result<()> {
        let m = self.orig.len();
        let w = self.width + 1;
        let basis_mat = DMatrix::from_fn(m, m, |i, k| self.orig[i][self.basis[k]]);
        let full = DMatrix::from_fn(m, w, |i, k| self.orig[i][k]);
        let Some(solved) = basis_mat.lu().solve(&full) else {
            return Ok(());
        };
        for r in 0..m {
            for k in 0..w {
                self.rows[r][k] = solved[(r, k)];
            }
            self.rows[r][self.basis[r]] = 1.0;
        }
        let mut obj = self.cost.clone();
        obj.push(0.0);
        for r in 0..m {
            let cb = self.cost[self.basis[r]];
            if cb != 0.0 {
                for k in 0..w {
                    obj[k] -= cb * self.rows[r][k];
                }
            }
        }
        for &j in &self.basis {
            obj[j] = 0.0;
        }
        self.obj = obj;
        Ok(())
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let w = self.width + 1;
        let p = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for k in 0..w {
                    row[k] -= f * pivot_row[k];
                }
                row[col] = 0.0;
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for k in 0..w {
                self.obj[k] -= f * pivot_row[k];
            }
            self.obj[col] = 0.0;
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    /// Bland's rule: lowest-index improving column, lowest-index basic variable on ratio ties.
    fn run(&mut self, allowed: usize) -> Result<()> {
        let rhs = self.rhs();
        let mut fresh = false;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::Internal(format!("simplex exceeded {MAX_PIVOTS} pivots")));
            }
            if self.pivots % REFACTOR_EVERY == 0 && !fresh {
                self.refactor()?;
                fresh = true;
            }
            let Some(col) = (0..allowed).find(|&j| self.obj[j] < -LP_TOLERANCE) else {
                if !fresh {
                    self.refactor()?;
                    fresh = true;
                    continue;
                }
                return Ok(());
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[col];
                if a > LP_TOLERANCE {
                    let ratio = row[rhs] / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12 || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi]) {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = best else {
                if !fresh {
                    self.refactor()?;
                    fresh = true;
                    continue;
                }
                return Err(Error::Internal("linear program is unbounded".into()));
            };
            self.pivot(r, col);
            fresh = false;
        }
    }
}

/// Solve `min c·x` subject to `A x = b`, `x ≥ 0`. `a` is row-major with `b.len()` rows.
pub fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = b.len();
    let nv = c.len();
    if a.len() != m || a.iter().any(|row| row.len() != nv) {
        return Err(Error::ShapeMismatch("constraint matrix does not match b and c".into()));
    }
    let width = nv + m;
    let sign: Vec<f64> = b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![0.0; width + 1];
        for j in 0..nv {
            row[j] = sign[i] * a[i][j];
        }
        row[nv + i] = 1.0;
        row[width] = sign[i] * b[i];
        rows.push(row);
    }
    let mut obj = vec![0.0; width + 1];
    for row in &rows {
        for j in 0..nv {
            obj[j] -= row[j];
        }
        obj[width] -= row[width];
    }
    let mut cost = vec![0.0; width];
    for v in &mut cost[nv..] {
        *v = 1.0;
    }
    // Rows owning a unit column (a slack with nonnegative right-hand side) start with it basic.
    let mut basis: Vec<usize> = (nv..nv + m).collect();
    let mut used = vec![false; nv];
    for (i, slot) in basis.iter_mut().enumerate() {
        let unit = (0..nv).find(|&j| {
            !used[j] && rows[i][j] == 1.0 && rows.iter().enumerate().all(|(l, r)| l == i || r[j] == 0.0)
        });
        if let Some(j) = unit {
            used[j] = true;
            *slot = j;
        }
    }
    let mut t = Tableau { orig: rows.clone(), cost, rows, obj, basis, width, pivots: 0 };
    t.refactor()?;
    t.run(nv)?;
    let scale = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if -t.obj[width] > 1e-7 * scale {
        return Err(Error::Internal(format!("linear program is infeasible (residual {:e})", -t.obj[width])));
    }
    for r in 0..m {
        if t.basis[r] >= nv {
            if let Some(col) = (0..nv).find(|&j| t.rows[r][j].abs() > 1e-7) {
                t.pivot(r, col);
            }
        }
    }

    let mut cost = vec![0.0; width];
    cost[..nv].copy_from_slice(c);
    t.cost = cost;
    t.refactor()?;
    t.run(nv)?;

    let mut x = vec![0.0; nv];
    for (r, &j) in t.basis.iter().enumerate() {
        if j < nv {
            x[j] = t.rows[r][width].max(0.0);
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    let duals = (0..m).map(|i| -sign[i] * t.obj[nv + i]).collect();
    Ok(LpSolution { x, value, duals, pivots: t.pivots })
}

const DEGENERATE_STREAK: usize = 50;
const STALL_LIMIT: usize = 20;
const BLAND_PIVOT_FLOOR: f64 = 1e-7;
const STALL_GAIN: f64 = 1e-12;
const PRIMAL_SLIP: f64 = 1e-7;
const HARRIS_RELAXATION: f64 = 1e-9;

/// `min c·x` subject to `A x ≤ b`, `x ≥ 0` with `b > 0`, solved by a revised simplex that
/// starts from the slack basis and warm-starts after columns are appended.
#[derive(Clone, Debug)]
pub struct ColumnLp {
    b: Vec<f64>,
    /// Columns of `A` followed by nothing else; slacks are implicit indices `n..n + m`.
    columns: Vec<Vec<f64>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    inverse: DMatrix<f64>,
    since_refactor: usize,
    pub pivots: usize,
}

impl ColumnLp {
    pub fn new(b: Vec<f64>) -> Result<Self> {
        if b.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::OutOfRange("right-hand sides must be positive".into()));
        }
        let m = b.len();
        Ok(ColumnLp {
            b,
            columns: Vec::new(),
            cost: Vec::new(),
            basis: (0..m).map(|i| usize::MAX - i).collect(),
            inverse: DMatrix::identity(m, m),
            since_refactor: 0,
            pivots: 0,
        })
    }

    fn rows(&self) -> usize {
        self.b.len()
    }

    pub fn add_column(&mut self, column: Vec<f64>, cost: f64) -> Result<()> {
        if column.len() != self.rows() {
            return Err(Error::ShapeMismatch(format!("column of length {} for {} rows", column.len(), self.rows())));
        }
        self.columns.push(column);
        self.cost.push(cost);
        Ok(())
    }

    /// Slack of row `i` is encoded as `usize::MAX - i` so appended columns never shift it.
    fn slack_row(j: usize, m: usize) -> Option<usize> {
        (j > usize::MAX - m).then(|| usize::MAX - j)
    }

    fn column(&self, j: usize) -> Vec<f64> {
        let m = self.rows();
        match Self::slack_row(j, m) {
            Some(i) => (0..m).map(|r| if r == i { 1.0 } else { 0.0 }).collect(),
            None => self.columns[j].clone(),
        }
    }

    fn cost_of(&self, j: usize) -> f64 {
        if Self::slack_row(j, self.rows()).is_some() {
            0.0
        } else {
            self.cost[j]
        }
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.rows();
        let cols: Vec<Vec<f64>> = self.basis.iter().map(|&j| self.column(j)).collect();
        let basis_mat = DMatrix::from_fn(m, m, |i, k| cols[k][i]);
        match basis_mat.try_inverse() {
            Some(inv) => self.inverse = inv,
            None => self.reset(),
        }
        self.since_refactor = 0;
        Ok(())
    }

    /// The slack basis is always feasible because `b > 0`.
    fn reset(&mut self) {
        let m = self.rows();
        self.basis = (0..m).map(|i| usize::MAX - i).collect();
        self.inverse = DMatrix::identity(m, m);
        self.since_refactor = 0;
    }

    fn duals(&self) -> Vec<f64> {
        let m = self.rows();
        let cb: Vec<f64> = self.basis.iter().map(|&j| self.cost_of(j)).collect();
        (0..m).map(|i| (0..m).map(|k| cb[k] * self.inverse[(k, i)]).sum()).collect()
    }

    fn basic_values(&self) -> Vec<f64> {
        let m = self.rows();
        (0..m).map(|r| (0..m).map(|k| self.inverse[(r, k)] * self.b[k]).sum()).collect()
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        let m = self.rows();
        match Self::slack_row(j, m) {
            Some(i) => -y[i],
            None => self.cost[j] - self.columns[j].iter().zip(y).map(|(a, y)| a * y).sum::<f64>(),
        }
    }

    /// Dantzig pricing, falling back to Bland's rule during long runs of degenerate pivots.
    pub fn solve(&mut self) -> Result<LpSolution> {
        let m = self.rows();
        let mut degenerate = 0;
        let mut best_objective = f64::INFINITY;
        let mut restarted = false;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::Internal(format!("simplex exceeded {MAX_PIVOTS} pivots")));
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let y = self.duals();
            let in_basis: std::collections::HashSet<usize> = self.basis.iter().copied().collect();
            let candidates = (0..self.columns.len()).chain((0..m).map(|i| usize::MAX - i)).filter(|j| !in_basis.contains(j));
            let mut entering: Option<(usize, f64)> = None;
            for j in candidates {
                let d = self.reduced_cost(j, &y);
                if d >= -LP_TOLERANCE {
                    continue;
                }
                entering = match entering {
                    None => Some((j, d)),
                    // Bland: the first improving column in a fixed order.
                    Some(_) if degenerate >= DEGENERATE_STREAK => entering,
                    Some((_, best)) if d < best => Some((j, d)),
                    keep => keep,
                };
            }
            if degenerate >= STALL_LIMIT * (m + 1) {
                // Reduced costs this close to zero cannot move the objective; accept the basis.
                entering = None;
            }
            let Some((col, _)) = entering else {
                if self.since_refactor > 0 {
                    self.refactor()?;
                    continue;
                }
                if !restarted && self.basic_values().iter().any(|&v| v < -PRIMAL_SLIP) {
                    // Drift left the basis primal infeasible; start over from the slack basis.
                    restarted = true;
                    self.reset();
                    degenerate = 0;
                    best_objective = f64::INFINITY;
                    continue;
                }
                break;
            };
            let a = self.column(col);
            let dir: Vec<f64> = (0..m).map(|r| (0..m).map(|k| self.inverse[(r, k)] * a[k]).sum()).collect();
            let xb = self.basic_values();
            let bland = degenerate >= DEGENERATE_STREAK;
            let mut leave: Option<usize> = None;
            if bland {
                // Minimum ratio, ties to the lowest variable index (slacks order after columns).
                let rank = |j: usize| match Self::slack_row(j, m) {
                    Some(i) => self.columns.len() + i,
                    None => j,
                };
                let mut bound = f64::INFINITY;
                for r in 0..m {
                    if dir[r] > LP_TOLERANCE {
                        bound = bound.min((xb[r].max(0.0) / dir[r]) + 1e-12);
                    }
                }
                let ties: Vec<usize> = (0..m).filter(|&r| dir[r] > LP_TOLERANCE && xb[r].max(0.0) / dir[r] <= bound).collect();
                let sturdy: Vec<usize> = ties.iter().copied().filter(|&r| dir[r] > BLAND_PIVOT_FLOOR).collect();
                let pool = if sturdy.is_empty() { ties } else { sturdy };
                leave = pool.into_iter().min_by_key(|&r| rank(self.basis[r]));
            } else {
                // Harris ratio test: relaxed step bound, then the largest pivot within it.
                let mut bound = f64::INFINITY;
                for r in 0..m {
                    if dir[r] > LP_TOLERANCE {
                        bound = bound.min(((xb[r] + HARRIS_RELAXATION) / dir[r]).max(0.0));
                    }
                }
                for r in 0..m {
                    if dir[r] > LP_TOLERANCE && xb[r] / dir[r] <= bound {
                        leave = match leave {
                            Some(l) if dir[l] >= dir[r] => Some(l),
                            _ => Some(r),
                        };
                    }
                }
            }
            let Some(r) = leave else {
                if self.since_refactor > 0 {
                    self.refactor()?;
                    continue;
                }
                return Err(Error::Internal("linear program is unbounded".into()));
            };
            let objective: f64 = self.basis.iter().zip(&xb).map(|(&j, x)| self.cost_of(j) * x).sum();
            if objective < best_objective - STALL_GAIN * (1.0 + objective.abs()) {
                best_objective = objective;
                degenerate = 0;
            } else {
                degenerate += 1;
            }
            // Product-form update of the basis inverse.
            let p = dir[r];
            let pivot_row: Vec<f64> = (0..m).map(|k| self.inverse[(r, k)] / p).collect();
            for i in 0..m {
                if i == r {
                    continue;
                }
                let f = dir[i];
                if f != 0.0 {
                    for k in 0..m {
                        self.inverse[(i, k)] -= f * pivot_row[k];
                    }
                }
            }
            for k in 0..m {
                self.inverse[(r, k)] = pivot_row[k];
            }
            self.basis[r] = col;
            self.pivots += 1;
            self.since_refactor += 1;
        }
        let xb = self.basic_values();
        let mut x = vec![0.0; self.columns.len()];
        for (r, &j) in self.basis.iter().enumerate() {
            if j < self.columns.len() {
                x[j] = xb[r].max(0.0);
            }
        }
        let value = self.cost.iter().zip(&x).map(|(c, x)| c * x).sum();
        Ok(LpSolution { x, value, duals: self.duals(), pivots: self.pivots })
    }
}
