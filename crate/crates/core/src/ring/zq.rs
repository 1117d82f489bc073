//! Linear algebra over Z_q for composite q.
//!
//! Every lattice question in the stabilizer layer (group orders, membership, kernels,
//! congruence systems) is answered from one diagonal form `U·A·V = D` computed with
//! unimodular row and column operations modulo q. Diagonal entries are normalized to
//! divisors of q, with `q` standing for a zero entry.

use super::modulus::{ext_gcd, gcd, mod_inv, rem};

pub type Row = Vec<u64>;

#[inline]
fn mulm(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

#[inline]
fn lin(a: u64, x: u64, b: u64, y: u64, q: u64) -> u64 {
    ((a as u128 * x as u128 + b as u128 * y as u128) % q as u128) as u64
}

fn identity(n: usize) -> Vec<Row> {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

/// Diagonal form of an `r × c` matrix over Z_q.
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub q: u64,
    pub rows: usize,
    pub cols: usize,
    /// `r × r` unimodular row transform.
    pub u: Vec<Row>,
    /// `c × c` unimodular column transform.
    pub v: Vec<Row>,
    pub v_inv: Vec<Row>,
    /// Length `c`: normalized divisors of q, `q` meaning zero (entries past `min(r, c)` are `q`).
    pub diag: Vec<u64>,
}

/// Row transform applied to rows `t`, `i` of `m`: new_t = s·t + k·i, new_i = x·t + y·i.
fn row_combine(m: &mut [Row], t: usize, i: usize, coef: [u64; 4], q: u64) {
    let [s, k, x, y] = coef;
    for col in 0..m[t].len() {
        let a = m[t][col];
        let b = m[i][col];
        m[t][col] = lin(s, a, k, b, q);
        m[i][col] = lin(x, a, y, b, q);
    }
}

fn col_combine(m: &mut [Row], t: usize, j: usize, coef: [u64; 4], q: u64) {
    // new_t = s·t + k·j, new_j = x·t + y·j
    let [s, k, x, y] = coef;
    for row in m.iter_mut() {
        let a = row[t];
        let b = row[j];
        row[t] = lin(s, a, k, b, q);
        row[j] = lin(x, a, y, b, q);
    }
}

/// 2×2 unimodular transform that sends `(a, b)` to `(gcd, 0)`, plus its inverse.
fn gcd_transform(a: u64, b: u64, q: u64) -> ([u64; 4], [u64; 4]) {
    let (g, s, t) = ext_gcd(a as i64, b as i64);
    let (ag, bg) = (a as i64 / g, b as i64 / g);
    // [[s, t], [-b/g, a/g]], det = 1; inverse [[a/g, -t], [b/g, s]].
    let fwd = [rem(s, q), rem(t, q), rem(-bg, q), rem(ag, q)];
    let inv = [rem(ag, q), rem(-t, q), rem(bg, q), rem(s, q)];
    (fwd, inv)
}

/// Solve `a·k ≡ b (mod q)` for k, if possible.
pub fn solve_scalar(a: u64, b: u64, q: u64) -> Option<u64> {
    let g = gcd(a % q, q);
    if b % g != 0 {
        return None;
    }
    let (qa, qb, qq) = (a / g, b / g, q / g);
    if qq == 1 {
        return Some(0);
    }
    let inv = mod_inv(qa % qq, qq)?;
    Some(mulm(qb % qq, inv, qq))
}

/// A unit `u` of Z_q with `d·u ≡ gcd(d, q) (mod q)`.
fn normalizing_unit(d: u64, q: u64) -> u64 {
    let g = gcd(d, q);
    let qq = q / g;
    let base = if qq == 1 { 0 } else { mod_inv((d / g) % qq, qq).expect("coprime after dividing gcd") };
    let mut u = base;
    while gcd(u, q) != 1 {
        u += qq;
    }
    u % q
}

pub fn diagonalize(a: &[Row], cols: usize, q: u64) -> Diagonal {
    let rows = a.len();
    let mut m: Vec<Row> = a.iter().map(|r| r.iter().map(|&x| x % q).collect()).collect();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);
    let mut diag = vec![q; cols];
    let steps = rows.min(cols);

    for t in 0..steps {
        // Pivot: nonzero entry with the largest ideal (smallest gcd with q).
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = gcd(x, q);
                    if best.map_or(true, |(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        if pj != t {
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            v_inv.swap(t, pj);
        }

        loop {
            for i in t + 1..rows {
                let b = m[i][t];
                if b == 0 {
                    continue;
                }
                let p = m[t][t];
                if let Some(k) = solve_scalar(p, b, q) {
                    let coef = [1, 0, rem(-(k as i64), q), 1];
                    row_combine(&mut m, t, i, coef, q);
                    row_combine(&mut u, t, i, coef, q);
                } else {
                    let (fwd, _) = gcd_transform(p, b, q);
                    row_combine(&mut m, t, i, fwd, q);
                    row_combine(&mut u, t, i, fwd, q);
                }
            }
            for j in t + 1..cols {
                let b = m[t][j];
                if b == 0 {
                    continue;
                }
                let p = m[t][t];
                let (fwd, inv) = if let Some(k) = solve_scalar(p, b, q) {
                    let nk = rem(-(k as i64), q);
                    // col_j -= k col_t ; inverse adds it back, acting on rows of v_inv.
                    ([1, 0, nk, 1], [1, 0, k % q, 1])
                } else {
                    gcd_transform(p, b, q)
                };
                col_combine(&mut m, t, j, fwd, q);
                col_combine(&mut v, t, j, fwd, q);
                // v_inv ← E^{-1} v_inv where E acts on columns (t, j).
                row_combine_inverse(&mut v_inv, t, j, inv, q);
            }
            if (t + 1..rows).all(|i| m[i][t] == 0) {
                break;
            }
        }

        let d = m[t][t];
        if d == 0 {
            continue;
        }
        let unit = normalizing_unit(d, q);
        if unit != 1 {
            for x in m[t].iter_mut() {
                *x = mulm(*x, unit, q);
            }
            for x in u[t].iter_mut() {
                *x = mulm(*x, unit, q);
            }
        }
        diag[t] = m[t][t];
        debug_assert_eq!(q % diag[t], 0);
    }
    Diagonal { q, rows, cols, u, v, v_inv, diag }
}

/// For a column transform with 2×2 block `E = [[s, x], [k, y]]` (new_t = s·t + k·j,
/// new_j = x·t + y·j), the inverse acts on rows of `v_inv`. `inv` holds the entries of
/// `E^{-1}` in the same layout.
fn row_combine_inverse(m: &mut [Row], t: usize, j: usize, inv: [u64; 4], q: u64) {
    // E^{-1} = [[e00, e01], [e10, e11]] in (t, j) coordinates, stored as
    // inv = [e00, e10, e01, e11] to match the column layout above.
    let [e00, e10, e01, e11] = inv;
    for col in 0..m[t].len() {
        let a = m[t][col];
        let b = m[j][col];
        m[t][col] = lin(e00, a, e01, b, q);
        m[j][col] = lin(e10, a, e11, b, q);
    }
}

impl Diagonal {
    /// Generators of the left kernel `{k : k·A ≡ 0}`.
    pub fn left_kernel(&self) -> Vec<Row> {
        let q = self.q;
        let steps = self.rows.min(self.cols);
        let mut gens = Vec::new();
        for i in 0..self.rows {
            let factor = if i < steps { q / self.diag[i] } else { 1 };
            if factor == q {
                continue;
            }
            let row: Row = self.u[i].iter().map(|&x| mulm(x, factor, q)).collect();
            if row.iter().any(|&x| x != 0) {
                gens.push(row);
            }
        }
        gens
    }

    /// One solution of `x·A ≡ t`, if any.
    pub fn solve_left(&self, target: &[u64]) -> Option<Row> {
        let q = self.q;
        let s = vec_mat(target, &self.v, q);
        let mut y = vec![0u64; self.rows];
        for i in 0..self.cols {
            let d = self.diag[i];
            if s[i] % d != 0 {
                return None;
            }
            if d != q {
                y[i] = s[i] / d;
            }
        }
        Some(vec_mat(&y, &self.u, q))
    }

    /// Coordinates of `v` relative to the independent span generators, if `v` lies in
    /// the row span. Entry i is reduced modulo `q / diag[i]`.
    pub fn span_coordinates(&self, vector: &[u64]) -> Option<Row> {
        let q = self.q;
        let y = vec_mat(vector, &self.v, q);
        let mut out = Vec::with_capacity(self.cols);
        for i in 0..self.cols {
            let d = self.diag[i];
            if y[i] % d != 0 {
                return None;
            }
            out.push(if d == q { 0 } else { y[i] / d });
        }
        Some(out)
    }

    /// Independent generators of the row span: pairs (index, vector, order), vector =
    /// `diag[i]·v_inv[i]`, order `q / diag[i]`.
    pub fn span_generators(&self) -> Vec<(usize, Row, u64)> {
        let q = self.q;
        (0..self.cols)
            .filter(|&i| self.diag[i] != q)
            .map(|i| {
                let d = self.diag[i];
                let row = self.v_inv[i].iter().map(|&x| mulm(x, d, q)).collect();
                (i, row, q / d)
            })
            .collect()
    }

    /// Size of the row span.
    pub fn span_order(&self) -> u128 {
        self.diag.iter().map(|&d| (self.q / d) as u128).product()
    }
}

/// `x · M` over Z_q.
pub fn vec_mat(x: &[u64], m: &[Row], q: u64) -> Row {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![0u128; cols];
    for (xi, row) in x.iter().zip(m) {
        if *xi == 0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(row) {
            *o = (*o + *xi as u128 * v as u128) % q as u128;
        }
    }
    out.into_iter().map(|v| v as u64).collect()
}
