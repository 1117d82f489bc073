//! Row-sparse matrices for operators that are short sums of Pauli monomials.
//!
//! These are the same matrices as [`DenseOperator`](super::DenseOperator) but stored by rows,
//! which keeps projectors on ~10 qudits cheap to multiply and trace.

use std::collections::BTreeMap;

use super::{DenseOperator, Matrix, C64};
use crate::error::{Error, Result};
use crate::pauli::{phase_table, PauliLabel};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    pub q: u64,
    pub n: usize,
    pub dim: usize,
    /// `rows[r]` holds `(column, value)` pairs sorted by column.
    pub rows: Vec<Vec<(usize, C64)>>,
}

const DROP: f64 = 1e-15;

fn compress(map: BTreeMap<usize, C64>) -> Vec<(usize, C64)> {
    map.into_iter().filter(|(_, v)| v.norm() > DROP).collect()
}

impl SparseOperator {
    pub fn zero(q: u64, n: usize, dim: usize) -> Self {
        SparseOperator { q, n, dim, rows: vec![Vec::new(); dim] }
    }

    /// `Σ_k coeff_k · P_k`.
    pub fn from_pauli_sum(q: u64, n: usize, terms: &[(C64, PauliLabel)]) -> Result<Self> {
        let dim = (q as usize)
            .checked_pow(n as u32)
            .ok_or_else(|| Error::OutOfRange(format!("q^n overflows for q={q}, n={n}")))?;
        let roots = phase_table(q);
        let mut acc: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); dim];
        for (coef, p) in terms {
            if p.q != q || p.n() != n {
                return Err(Error::ShapeMismatch(format!("term {p} does not act on (q={q}, n={n})")));
            }
            for col in 0..dim {
                let (ph, row) = p.apply_to_basis(col);
                *acc[row].entry(col).or_insert(C64::new(0.0, 0.0)) += coef * roots[ph as usize];
            }
        }
        Ok(SparseOperator { q, n, dim, rows: acc.into_iter().map(compress).collect() })
    }

    fn same_shape(&self, other: &SparseOperator) -> Result<()> {
        if self.dim != other.dim || self.q != other.q {
            return Err(Error::ShapeMismatch("sparse operators of different shapes".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.same_shape(other)?;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BTreeMap::new();
                for &(k, x) in row {
                    for &(c, y) in &other.rows[k] {
                        *acc.entry(c).or_insert(C64::new(0.0, 0.0)) += x * y;
                    }
                }
                compress(acc)
            })
            .collect();
        Ok(SparseOperator { q: self.q, n: self.n, dim: self.dim, rows })
    }

    /// `self + scale · other`.
    pub fn add_scaled(&self, other: &SparseOperator, scale: C64) -> Result<SparseOperator> {
        self.same_shape(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(r1, r2)| {
                let mut acc: BTreeMap<usize, C64> = r1.iter().copied().collect();
                for &(c, y) in r2 {
                    *acc.entry(c).or_insert(C64::new(0.0, 0.0)) += scale * y;
                }
                compress(acc)
            })
            .collect();
        Ok(SparseOperator { q: self.q, n: self.n, dim: self.dim, rows })
    }

    pub fn commutator(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.mul(other)?.add_scaled(&other.mul(self)?, C64::new(-1.0, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| row.iter().find(|(c, _)| *c == r).map(|(_, v)| *v))
            .sum()
    }

    /// Frobenius norm, an upper bound on the operator norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.rows.iter().flatten().map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> DenseOperator {
        let mut mat = Matrix::zeros(self.dim, self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                mat[(r, c)] = v;
            }
        }
        DenseOperator { q: self.q, n: self.n, mat }
    }
}
