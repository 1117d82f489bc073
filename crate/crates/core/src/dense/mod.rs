//! Dense state algebra on `q^n`-dimensional Hilbert spaces.
//!
//! Basis index of a product basis state is `Σ_i j_i q^i` (site 0 varies fastest).
//! "Trace distance" here is always the full Schatten 1-norm `‖ρ − σ‖₁`, never the halved metric.

mod io;
mod sparse;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::StateFile;
pub use sparse::SparseOperator;

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;
pub type Vector = DVector<C64>;

pub const DEFAULT_DENSE_LIMIT: usize = 20_000;
const PSD_TOL: f64 = 1e-10;
const ENTROPY_CLIP: f64 = 1e-14;
const SUPPORT_CUTOFF: f64 = 1e-10;
const FIDELITY_CUTOFF: f64 = 1e-14;

/// Logarithm base shared by every entropic quantity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    pub fn ln_base(self) -> f64 {
        match self {
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::E => 1.0,
            LogBase::Ten => std::f64::consts::LN_10,
        }
    }

    pub fn log(self, x: f64) -> f64 {
        x.ln() / self.ln_base()
    }

    /// Convert a value measured in nats into this base.
    pub fn from_nats(self, x: f64) -> f64 {
        x / self.ln_base()
    }

    /// `base^x`.
    pub fn exp(self, x: f64) -> f64 {
        (x * self.ln_base()).exp()
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "2" => Some(LogBase::Two),
            "e" => Some(LogBase::E),
            "10" => Some(LogBase::Ten),
            _ => None,
        }
    }
}

pub fn dimension(q: u64, n: usize, limit: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.checked_mul(q as usize).filter(|&d| d <= limit).ok_or(Error::DenseLimit {
            dim: (q as f64).powi(n as i32).min(usize::MAX as f64) as usize,
            limit,
        })?;
    }
    Ok(dim)
}

/// Digits of a basis index, site 0 first.
pub fn digits(mut idx: usize, q: u64, n: usize) -> Vec<usize> {
    let q = q as usize;
    (0..n)
        .map(|_| {
            let d = idx % q;
            idx /= q;
            d
        })
        .collect()
}

fn check_region(region: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &s in region {
        if s >= n {
            return Err(Error::InvalidRegion(format!("site {s} out of range for {n} sites")));
        }
        if seen[s] {
            return Err(Error::InvalidRegion(format!("site {s} repeated")));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Pure state on `n` qudits of dimension `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    pub q: u64,
    pub n: usize,
    pub amps: Vector,
}

impl DenseState {
    /// Checks the length and that the norm is 1 within 1e-12.
    pub fn new(q: u64, n: usize, amps: Vector) -> Result<Self> {
        let dim = dimension(q, n, usize::MAX)?;
        if amps.len() != dim {
            return Err(Error::ShapeMismatch(format!("{} amplitudes for dimension {dim}", amps.len())));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange(format!("state norm {norm} is not 1")));
        }
        Ok(DenseState { q, n, amps })
    }

    pub fn normalized(q: u64, n: usize, amps: Vector) -> Result<Self> {
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::OutOfRange("zero vector".into()));
        }
        Self::new(q, n, amps.unscale(norm))
    }

    pub fn basis(q: u64, n: usize, idx: usize) -> Result<Self> {
        let dim = dimension(q, n, usize::MAX)?;
        if idx >= dim {
            return Err(Error::OutOfRange(format!("basis index {idx} >= {dim}")));
        }
        let mut amps = Vector::zeros(dim);
        amps[idx] = C64::new(1.0, 0.0);
        Ok(DenseState { q, n, amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// `self ⊗ other`, with `self` on the low sites.
    pub fn tensor(&self, other: &DenseState) -> Result<DenseState> {
        if self.q != other.q {
            return Err(Error::ShapeMismatch("tensor of different local dimensions".into()));
        }
        let d1 = self.dim();
        let amps = Vector::from_fn(d1 * other.dim(), |i, _| self.amps[i % d1] * other.amps[i / d1]);
        Ok(DenseState { q: self.q, n: self.n + other.n, amps })
    }

    pub fn inner(&self, other: &DenseState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn density(&self) -> DenseOperator {
        DenseOperator { q: self.q, n: self.n, mat: &self.amps * self.amps.adjoint() }
    }

    /// Reduced density matrix on `keep` (ascending site order), computed without forming `|ψ⟩⟨ψ|`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DenseOperator> {
        check_region(keep, self.n)?;
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        let (kept_off, traced_off) = split_offsets(self.q, self.n, &keep);
        let psi = Matrix::from_fn(kept_off.len(), traced_off.len(), |r, c| self.amps[kept_off[r] + traced_off[c]]);
        Ok(DenseOperator { q: self.q, n: keep.len(), mat: &psi * psi.adjoint() })
    }
}

/// Index offsets contributed by the kept sites and by the remaining sites.
fn split_offsets(q: u64, n: usize, keep: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let q = q as usize;
    let strides: Vec<usize> = (0..n).map(|i| q.pow(i as u32)).collect();
    let traced: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();
    let offsets = |sites: &[usize]| -> Vec<usize> {
        let count = q.pow(sites.len() as u32);
        (0..count)
            .map(|mut k| {
                let mut off = 0;
                for &s in sites {
                    off += (k % q) * strides[s];
                    k /= q;
                }
                off
            })
            .collect()
    };
    (offsets(keep), offsets(&traced))
}

/// Square matrix on `n` qudits of dimension `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub q: u64,
    pub n: usize,
    pub mat: Matrix,
}

impl DenseOperator {
    pub fn new(q: u64, n: usize, mat: Matrix) -> Result<Self> {
        let dim = dimension(q, n, usize::MAX)?;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for dimension {dim}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(DenseOperator { q, n, mat })
    }

    pub fn identity(q: u64, n: usize) -> Result<Self> {
        let dim = dimension(q, n, usize::MAX)?;
        Ok(DenseOperator { q, n, mat: Matrix::identity(dim, dim) })
    }

    pub fn maximally_mixed(q: u64, n: usize) -> Result<Self> {
        let mut op = Self::identity(q, n)?;
        let d = op.dim() as f64;
        op.mat.unscale_mut(d);
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn tensor(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.q != other.q {
            return Err(Error::ShapeMismatch("tensor of different local dimensions".into()));
        }
        Ok(DenseOperator { q: self.q, n: self.n + other.n, mat: other.mat.kronecker(&self.mat) })
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator { q: self.q, n: self.n, mat: self.mat.adjoint() }
    }

    pub fn hermitian_deviation(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).camax()
    }

    fn same_shape(&self, other: &DenseOperator) -> Result<()> {
        if self.q != other.q || self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "operators on (q={}, n={}) and (q={}, n={})",
                self.q, self.n, other.q, other.n
            )));
        }
        Ok(())
    }

    /// Eigen-decomposition of the Hermitian part, eigenvalues ascending.
    pub fn eigh(&self) -> (Vec<f64>, Matrix) {
        eigh(&self.mat)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = hermitian_part(&self.mat);
        let mut vals: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    /// Fails with `NotPsd` if an eigenvalue is below `-1e-10`.
    pub fn check_psd(&self) -> Result<Vec<f64>> {
        let vals = self.eigenvalues();
        match vals.first() {
            Some(&min) if min < -PSD_TOL => Err(Error::NotPsd(min)),
            _ => Ok(vals),
        }
    }

    /// `√ρ` for a PSD operator (negative eigenvalues clipped to zero).
    pub fn sqrt_psd(&self) -> Matrix {
        let (vals, vecs) = self.eigh();
        spectral(&vals, &vecs, |x| x.max(0.0).sqrt())
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DenseOperator> {
        partial_trace(self, keep)
    }

    pub fn expectation(&self, state: &DenseState) -> C64 {
        state.amps.dotc(&(&self.mat * &state.amps))
    }
}

pub(crate) fn hermitian_part(m: &Matrix) -> Matrix {
    (m + m.adjoint()).scale(0.5)
}

/// Ascending eigenvalues and matching eigenvector columns of the Hermitian part of `m`.
pub fn eigh(m: &Matrix) -> (Vec<f64>, Matrix) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = Matrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// `V f(Λ) V†`.
pub fn spectral(vals: &[f64], vecs: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let fv = f(v);
        scaled.column_mut(j).scale_mut(fv);
    }
    scaled * vecs.adjoint()
}

/// Partial trace keeping `keep`, output sites in ascending order.
pub fn partial_trace(rho: &DenseOperator, keep: &[usize]) -> Result<DenseOperator> {
    check_region(keep, rho.n)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    let (kept_off, traced_off) = split_offsets(rho.q, rho.n, &keep);
    let dk = kept_off.len();
    let mut out = Matrix::zeros(dk, dk);
    for r in 0..dk {
        for c in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &traced_off {
                acc += rho.mat[(kept_off[r] + t, kept_off[c] + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DenseOperator { q: rho.q, n: keep.len(), mat: out })
}

/// Root fidelity `F(ρ, σ) = ‖√ρ √σ‖₁`, as the singular values of `√Λ_ρ V_ρ† V_σ √Λ_σ`
/// over the numerical supports of both inputs.
pub fn root_fidelity(rho: &DenseOperator, sigma: &DenseOperator) -> Result<f64> {
    rho.same_shape(sigma)?;
    rho.check_psd()?;
    sigma.check_psd()?;
    let half = |op: &DenseOperator| -> Matrix {
        let (vals, vecs) = op.eigh();
        let support: Vec<usize> = (0..vals.len()).filter(|&j| vals[j] > FIDELITY_CUTOFF).collect();
        Matrix::from_fn(op.dim(), support.len(), |r, k| vecs[(r, support[k])] * vals[support[k]].sqrt())
    };
    let (a, b) = (half(rho), half(sigma));
    if a.ncols() == 0 || b.ncols() == 0 {
        return Ok(0.0);
    }
    Ok((a.adjoint() * b).singular_values().iter().sum())
}

/// Squared fidelity `𝓕 = F²`; equals `|⟨ψ|φ⟩|²` on pure inputs.
pub fn fidelity_sq(rho: &DenseOperator, sigma: &DenseOperator) -> Result<f64> {
    root_fidelity(rho, sigma).map(|f| f * f)
}

/// Full 1-norm `‖ρ − σ‖₁` (orthogonal pure states are at distance 2).
pub fn trace_distance(rho: &DenseOperator, sigma: &DenseOperator) -> Result<f64> {
    rho.same_shape(sigma)?;
    Ok(schatten_one(&(&rho.mat - &sigma.mat)))
}

pub fn schatten_one(m: &Matrix) -> f64 {
    let herm = hermitian_part(m);
    herm.symmetric_eigenvalues().iter().map(|x| x.abs()).sum()
}

pub fn vn_entropy(rho: &DenseOperator, base: LogBase) -> f64 {
    entropy_of(&rho.eigenvalues(), base)
}

fn entropy_of(vals: &[f64], base: LogBase) -> f64 {
    let nats: f64 = vals.iter().filter(|&&x| x > ENTROPY_CLIP).map(|&x| -x * x.ln()).sum();
    base.from_nats(nats)
}

/// `I(A:B) = S(A) + S(B) − S(AB)`.
pub fn mutual_information(rho: &DenseOperator, a: &[usize], b: &[usize], base: LogBase) -> Result<f64> {
    if a.iter().any(|s| b.contains(s)) {
        return Err(Error::OverlappingRegions);
    }
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    let sa = vn_entropy(&partial_trace(rho, a)?, base);
    let sb = vn_entropy(&partial_trace(rho, b)?, base);
    let sab = vn_entropy(&partial_trace(rho, &ab)?, base);
    Ok(sa + sb - sab)
}

/// Mutual information of a pure state, using reduced densities of the amplitude vector.
pub fn mutual_information_pure(psi: &DenseState, a: &[usize], b: &[usize], base: LogBase) -> Result<f64> {
    if a.iter().any(|s| b.contains(s)) {
        return Err(Error::OverlappingRegions);
    }
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    let sa = pure_entropy(psi, a, base)?;
    let sb = pure_entropy(psi, b, base)?;
    let sab = pure_entropy(psi, &ab, base)?;
    Ok(sa + sb - sab)
}

/// Entanglement entropy of `region`, taken on whichever side of the cut is smaller.
fn pure_entropy(psi: &DenseState, region: &[usize], base: LogBase) -> Result<f64> {
    check_region(region, psi.n)?;
    if 2 * region.len() <= psi.n {
        return Ok(vn_entropy(&psi.reduced(region)?, base));
    }
    let rest: Vec<usize> = (0..psi.n).filter(|s| !region.contains(s)).collect();
    Ok(vn_entropy(&psi.reduced(&rest)?, base))
}

/// Support projector data of `σ`: eigenvalues and eigenvectors, plus whether `ρ` leaks out of it.
fn support_leak(rho: &DenseOperator, vals: &[f64], vecs: &Matrix) -> f64 {
    let mut leak = 0.0;
    for (j, &v) in vals.iter().enumerate() {
        if v <= SUPPORT_CUTOFF {
            let col = vecs.column(j);
            leak += (col.adjoint() * &rho.mat * col)[(0, 0)].re;
        }
    }
    leak
}

/// `S(ρ‖σ) = Tr ρ log ρ − Tr ρ log σ`, or `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy(rho: &DenseOperator, sigma: &DenseOperator, base: LogBase) -> Result<f64> {
    rho.same_shape(sigma)?;
    let (svals, svecs) = sigma.eigh();
    if support_leak(rho, &svals, &svecs) > SUPPORT_CUTOFF {
        return Ok(f64::INFINITY);
    }
    let log_sigma = spectral(&svals, &svecs, |x| if x > SUPPORT_CUTOFF { x.ln() } else { 0.0 });
    let cross = (&rho.mat * log_sigma).trace().re;
    let neg_entropy = -vn_entropy(rho, LogBase::E);
    Ok(base.from_nats(neg_entropy - cross))
}

/// `S_max(ρ‖σ) = log λ_max(σ^{-1/2} ρ σ^{-1/2})` on the support of `σ`, or `+∞`.
pub fn max_relative_entropy(rho: &DenseOperator, sigma: &DenseOperator, base: LogBase) -> Result<f64> {
    rho.same_shape(sigma)?;
    let (svals, svecs) = sigma.eigh();
    if support_leak(rho, &svals, &svecs) > SUPPORT_CUTOFF {
        return Ok(f64::INFINITY);
    }
    let inv_sqrt = spectral(&svals, &svecs, |x| if x > SUPPORT_CUTOFF { 1.0 / x.sqrt() } else { 0.0 });
    let m = DenseOperator { q: rho.q, n: rho.n, mat: &inv_sqrt * &rho.mat * &inv_sqrt };
    let top = m.eigenvalues().last().copied().unwrap_or(0.0);
    Ok(base.log(top))
}

/// Apply a `q² × q²` gate to neighbouring sites `(i, i + 1)`; the gate's low index is site `i`.
pub fn apply_two_site(psi: &mut DenseState, gate: &Matrix, i: usize) {
    let q = psi.q as usize;
    let stride = q.pow(i as u32);
    let block = stride * q * q;
    let dim = psi.dim();
    let mut local = vec![C64::new(0.0, 0.0); q * q];
    for hi in (0..dim).step_by(block) {
        for lo in 0..stride {
            let base = hi + lo;
            for (k, slot) in local.iter_mut().enumerate() {
                *slot = psi.amps[base + k * stride];
            }
            for r in 0..q * q {
                let mut acc = C64::new(0.0, 0.0);
                for (c, &x) in local.iter().enumerate() {
                    acc += gate[(r, c)] * x;
                }
                psi.amps[base + r * stride] = acc;
            }
        }
    }
}

/// Brickwork circuit on an open chain: layer `ℓ` acts on pairs `(i, i+1)` with `i ≡ ℓ (mod 2)`.
/// `gates(layer, i)` supplies each two-site unitary.
pub fn apply_brickwork(
    psi: &DenseState,
    depth: usize,
    mut gates: impl FnMut(usize, usize) -> Matrix,
) -> Result<DenseState> {
    let q = psi.q as usize;
    let mut out = psi.clone();
    for layer in 0..depth {
        let mut i = layer % 2;
        while i + 1 < psi.n {
            let g = gates(layer, i);
            if g.nrows() != q * q || g.ncols() != q * q {
                return Err(Error::ShapeMismatch(format!("gate must be {}x{}", q * q, q * q)));
            }
            let dev = (&g.adjoint() * &g - Matrix::identity(q * q, q * q)).camax();
            if dev > 1e-10 {
                return Err(Error::NotUnitary(dev));
            }
            apply_two_site(&mut out, &g, i);
            i += 2;
        }
    }
    Ok(out)
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    let g = Matrix::from_fn(dim, dim, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let qr = g.qr();
    let (qm, r) = (qr.q(), qr.r());
    let mut u = qm;
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let col = u.column(j) * phase;
        u.set_column(j, &col);
    }
    u
}

/// Haar-random pure state.
pub fn random_state<R: rand::Rng + ?Sized>(q: u64, n: usize, rng: &mut R) -> Result<DenseState> {
    let dim = dimension(q, n, usize::MAX)?;
    let v = Vector::from_fn(dim, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    DenseState::normalized(q, n, v)
}

/// Random full-rank density matrix `GG†/Tr`.
pub fn random_density<R: rand::Rng + ?Sized>(q: u64, n: usize, rng: &mut R) -> Result<DenseOperator> {
    let dim = dimension(q, n, usize::MAX)?;
    let g = Matrix::from_fn(dim, dim, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DenseOperator::new(q, n, m.unscale(tr))
}

fn gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}
