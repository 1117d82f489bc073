//! Stabilizer groups over Z_q, the projection states they define, and their subgroups.
//!
//! Every lattice question is answered from the diagonal form `U·M·V = D` of the generator
//! matrix `M` (rows are symplectic vectors). Row `i` of `U·M` is the symplectic vector of
//! `h_i = ∏_j g_j^{U_ij}`; the nonzero rows give an independent generating set.

mod enumerate;
mod extreme;
mod tableau;

use serde::Serialize;

use crate::dense::{dimension, DenseOperator, DenseState, Matrix, SparseOperator, Vector, C64, DEFAULT_DENSE_LIMIT};
use crate::error::{Error, Result};
use crate::pauli::{phase_table, PauliLabel};
use crate::ring::zq::{diagonalize, Diagonal, Row};

pub use enumerate::{
    enumerate_isotropic_subgroups, enumerate_isotropic_subgroups_bfs, enumerate_pure_stabilizer_states, enumerate_stabilizer_states, phase_lifts,
    IsotropicSubgroup, DEFAULT_ENUMERATION_BUDGET,
};
pub use extreme::{extreme_points, ExtremePoints};
pub use tableau::{parse_tableau, render_tableau};

/// Result of a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// The label, phase included, is a group element.
    PhaseExact,
    /// Some phase multiple of the label is a group element.
    UpToPhase,
    Absent,
}

/// A validated stabilizer group: commuting generators, no nontrivial phase times identity.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    q: u64,
    n: usize,
    generators: Vec<PauliLabel>,
    independent: Vec<PauliLabel>,
    orders: Vec<u64>,
    form: Diagonal,
    /// Position of each independent generator in the diagonal form.
    slots: Vec<usize>,
}

fn product_of_powers(q: u64, n: usize, gens: &[PauliLabel], exps: &[u64]) -> PauliLabel {
    gens.iter()
        .zip(exps)
        .filter(|(_, &e)| e != 0)
        .fold(PauliLabel::identity(q, n), |acc, (g, &e)| acc.compose_unchecked(&g.pow(e)))
}

pub(crate) fn check_region(region: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &s in region {
        if s >= n || seen[s] {
            return Err(Error::InvalidRegion(format!("{region:?} on {n} sites")));
        }
        seen[s] = true;
    }
    Ok(())
}

impl StabilizerGroup {
    pub fn validate(q: u64, n: usize, generators: Vec<PauliLabel>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidModulus(q));
        }
        for g in &generators {
            if g.q != q || g.n() != n {
                return Err(Error::ShapeMismatch(format!("generator {g} is not on (q={q}, n={n})")));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i].commutation_exponent(&generators[j])? != 0 {
                    return Err(Error::NoncommutingPair(i, j));
                }
            }
        }
        let rows: Vec<Row> = generators.iter().map(PauliLabel::symplectic).collect();
        let form = diagonalize(&rows, 2 * n, q);
        let steps = generators.len().min(2 * n);
        let mut independent = Vec::new();
        let mut orders = Vec::new();
        let mut slots = Vec::new();
        for (i, urow) in form.u.iter().enumerate() {
            let h = product_of_powers(q, n, &generators, urow);
            let d = if i < steps { form.diag[i] } else { q };
            if d == q {
                if !h.is_identity() {
                    return Err(Error::InconsistentPhase);
                }
                continue;
            }
            let delta = q / d;
            if !h.pow(delta).is_identity() {
                return Err(Error::InconsistentPhase);
            }
            independent.push(h);
            orders.push(delta);
            slots.push(i);
        }
        Ok(StabilizerGroup { q, n, generators, independent, orders, form, slots })
    }

    pub fn trivial(q: u64, n: usize) -> Self {
        Self::validate(q, n, Vec::new()).expect("empty tableau is valid")
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliLabel] {
        &self.generators
    }

    /// Independent generators `h_i` with their orders `δ_i`; `|S| = ∏ δ_i`.
    pub fn independent_generators(&self) -> Vec<(PauliLabel, u64)> {
        self.independent.iter().cloned().zip(self.orders.iter().copied()).collect()
    }

    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&d| d as u128).product()
    }

    /// Rank of the projection state, `q^n / |S|`.
    pub fn rank(&self) -> u128 {
        (self.q as u128).pow(self.n as u32) / self.order()
    }

    pub fn is_pure(&self) -> bool {
        self.rank() == 1
    }

    /// The group element whose symplectic vector is `v`, if any.
    pub fn element_with_vector(&self, v: &[u64]) -> Option<PauliLabel> {
        let coords = self.form.span_coordinates(v)?;
        let exps: Vec<u64> = self.slots.iter().map(|&s| coords[s]).collect();
        Some(product_of_powers(self.q, self.n, &self.independent, &exps))
    }

    pub fn member(&self, p: &PauliLabel) -> Membership {
        if p.q != self.q || p.n() != self.n {
            return Membership::Absent;
        }
        match self.element_with_vector(&p.symplectic()) {
            None => Membership::Absent,
            Some(e) if e.c == p.c => Membership::PhaseExact,
            Some(_) => Membership::UpToPhase,
        }
    }

    /// `Tr(ρ P)` for the stabilizer projection state `ρ`: a root of unity if `P` is a group
    /// element up to phase, zero otherwise.
    pub fn pauli_expectation(&self, p: &PauliLabel) -> C64 {
        if p.q != self.q || p.n() != self.n {
            return C64::new(0.0, 0.0);
        }
        match self.element_with_vector(&p.symplectic()) {
            Some(e) => phase_table(self.q)[((p.c + 2 * self.q - e.c) % (2 * self.q)) as usize],
            None => C64::new(0.0, 0.0),
        }
    }

    /// All group elements, ordered by their coordinates on the independent generators.
    pub fn elements(&self) -> Vec<PauliLabel> {
        let mut out = vec![PauliLabel::identity(self.q, self.n)];
        for (h, &delta) in self.independent.iter().zip(&self.orders) {
            let powers: Vec<PauliLabel> = (0..delta).map(|k| h.pow(k)).collect();
            out = out.iter().flat_map(|e| powers.iter().map(move |p| e.compose_unchecked(p))).collect();
        }
        out
    }

    /// Elements of the group supported on `region`, with inherited phases.
    pub fn supported_subgroup(&self, region: &[usize]) -> Result<StabilizerGroup> {
        check_region(region, self.n)?;
        let outside: Vec<usize> = (0..self.n).filter(|s| !region.contains(s)).collect();
        if self.independent.is_empty() {
            return Ok(Self::trivial(self.q, self.n));
        }
        let rows: Vec<Row> = self
            .independent
            .iter()
            .map(|h| outside.iter().map(|&s| h.a[s]).chain(outside.iter().map(|&s| h.b[s])).collect())
            .collect();
        let kernel = diagonalize(&rows, 2 * outside.len(), self.q).left_kernel();
        let gens = kernel
            .iter()
            .map(|k| product_of_powers(self.q, self.n, &self.independent, k))
            .filter(|g| !g.is_identity())
            .collect();
        Self::validate(self.q, self.n, gens)
    }

    /// Group generated by the subgroups supported on each ball.
    pub fn locally_generated(&self, balls: &[Vec<usize>]) -> Result<StabilizerGroup> {
        let mut gens = Vec::new();
        for ball in balls {
            gens.extend(self.supported_subgroup(ball)?.independent);
        }
        Self::validate(self.q, self.n, gens)
    }

    /// Generators (phase-free) of the Paulis supported on `region` that commute with the group.
    pub fn commutant_on_region(&self, region: &[usize]) -> Result<Vec<PauliLabel>> {
        check_region(region, self.n)?;
        let q = self.q;
        let gens = &self.independent;
        // x·C = 0 with C[a-row of site s][j] = b_j(s), C[b-row][j] = −a_j(s)
        let mut rows: Vec<Row> = region.iter().map(|&s| gens.iter().map(|g| g.b[s]).collect()).collect();
        rows.extend(region.iter().map(|&s| gens.iter().map(|g| (q - g.a[s]) % q).collect::<Row>()));
        let kernel = diagonalize(&rows, gens.len(), q).left_kernel();
        Ok(kernel
            .into_iter()
            .map(|x| {
                let mut p = PauliLabel::identity(q, self.n);
                for (i, &s) in region.iter().enumerate() {
                    p.a[s] = x[i];
                    p.b[s] = x[region.len() + i];
                }
                p
            })
            .filter(|p| !p.is_identity())
            .collect())
    }

    /// Same group on the sites of `region` (in the given order); every element must live there.
    pub fn restrict(&self, region: &[usize]) -> Result<StabilizerGroup> {
        check_region(region, self.n)?;
        let mut gens = Vec::new();
        for g in &self.independent {
            if g.support().iter().any(|s| !region.contains(s)) {
                return Err(Error::InvalidRegion(format!("generator {g} is not supported on {region:?}")));
            }
            gens.push(PauliLabel {
                q: self.q,
                a: region.iter().map(|&s| g.a[s]).collect(),
                b: region.iter().map(|&s| g.b[s]).collect(),
                c: g.c,
            });
        }
        Self::validate(self.q, region.len(), gens)
    }

    /// Group generated by `ζ_i^{-u_i} h_i` with `ζ_i = e^{2πi/δ_i}`.
    pub fn rephased(&self, u: &[u64]) -> Result<StabilizerGroup> {
        if u.len() != self.independent.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} phases for {} independent generators",
                u.len(),
                self.independent.len()
            )));
        }
        let gens = self
            .independent
            .iter()
            .zip(&self.orders)
            .zip(u)
            .map(|((h, &delta), &ui)| {
                let step = self.q / delta * (ui % delta);
                h.times_omega(self.q - step % self.q)
            })
            .collect();
        Self::validate(self.q, self.n, gens)
    }

    /// Dense `ρ = q^{-n} Σ_{s∈S} s`, the normalized projector onto the code space.
    pub fn sps_dense(&self) -> Result<DenseOperator> {
        self.sps_dense_limited(DEFAULT_DENSE_LIMIT)
    }

    pub fn sps_dense_limited(&self, limit: usize) -> Result<DenseOperator> {
        let dim = dimension(self.q, self.n, limit)?;
        let roots = phase_table(self.q);
        let w = 1.0 / dim as f64;
        let mut mat = Matrix::zeros(dim, dim);
        for s in self.elements() {
            for j in 0..dim {
                let (ph, out) = s.apply_to_basis(j);
                mat[(out, j)] += roots[ph as usize] * w;
            }
        }
        Ok(DenseOperator { q: self.q, n: self.n, mat })
    }

    pub fn sps_sparse(&self) -> Result<SparseOperator> {
        let w = C64::new((self.q as f64).powi(-(self.n as i32)), 0.0);
        let terms: Vec<(C64, PauliLabel)> = self.elements().into_iter().map(|s| (w, s)).collect();
        SparseOperator::from_pauli_sum(self.q, self.n, &terms)
    }

    /// State vector of a pure stabilizer state, with its first sizable amplitude real positive.
    pub fn pure_state(&self) -> Result<DenseState> {
        self.pure_state_limited(DEFAULT_DENSE_LIMIT)
    }

    pub fn pure_state_limited(&self, limit: usize) -> Result<DenseState> {
        if !self.is_pure() {
            return Err(Error::OutOfRange(format!("group of order {} is not maximal", self.order())));
        }
        let dim = dimension(self.q, self.n, limit)?;
        let roots = phase_table(self.q);
        let elements = self.elements();
        // ⟨j|Π|j⟩ = |ψ_j|²; pick the first j with weight at least 1/(2D).
        let weight = |j: usize| -> f64 {
            elements
                .iter()
                .filter_map(|s| {
                    let (ph, out) = s.apply_to_basis(j);
                    (out == j).then(|| roots[ph as usize].re)
                })
                .sum::<f64>()
                / elements.len() as f64
        };
        let j = (0..dim)
            .find(|&j| weight(j) > 0.5 / dim as f64)
            .ok_or_else(|| Error::Internal("pure stabilizer state has no support".into()))?;
        let mut v = Vector::zeros(dim);
        for s in &elements {
            let (ph, out) = s.apply_to_basis(j);
            v[out] += roots[ph as usize];
        }
        DenseState::normalized(self.q, self.n, v)
    }
}

/// A Pauli `P` with `P g_i P† = ζ_i^{u_i} g_i` for every generator, where `ζ_i = e^{2πi/δ_i}`.
///
/// Solves `⟨P, g_i⟩ ≡ (q/δ_i)·u_i (mod q)` for the symplectic vector of `P`.
pub fn find_rephasing_pauli(gens: &[PauliLabel], targets: &[u64]) -> Result<PauliLabel> {
    let Some(first) = gens.first() else {
        return Err(Error::ShapeMismatch("no generators given".into()));
    };
    let (q, n) = (first.q, first.n());
    if targets.len() != gens.len() {
        return Err(Error::ShapeMismatch(format!("{} targets for {} generators", targets.len(), gens.len())));
    }
    let group = StabilizerGroup::validate(q, n, gens.to_vec())?;
    let product: u128 = gens.iter().map(|g| g.order() as u128).product();
    if product != group.order() {
        return Err(Error::NotIndependent);
    }
    let t: Vec<u64> = gens.iter().zip(targets).map(|(g, &u)| (q / g.order()) * (u % g.order()) % q).collect();
    let mut rows: Vec<Row> = (0..n).map(|s| gens.iter().map(|g| g.b[s]).collect()).collect();
    rows.extend((0..n).map(|s| gens.iter().map(|g| (q - g.a[s]) % q).collect::<Row>()));
    let x = diagonalize(&rows, gens.len(), q)
        .solve_left(&t)
        .ok_or_else(|| Error::Internal("re-phasing system has no solution for independent generators".into()))?;
    Ok(PauliLabel::from_symplectic(q, &x))
}
