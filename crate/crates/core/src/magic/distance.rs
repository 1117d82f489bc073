//! Trace-norm distances to stabilizer projection states and to the stabilizer polytope, and
//! the Pauli measurement that best distinguishes two states.

use super::StabilizerDictionary;
use crate::dense::{eigh, schatten_one, spectral, DenseOperator, Matrix, C64};
use crate::error::{Error, Result};
use crate::pauli::PauliLabel;
use crate::stabilizer::{enumerate_stabilizer_states, StabilizerGroup};

#[derive(Clone, Debug)]
pub struct SpsDistance {
    /// `min_σ ‖ρ − σ‖₁` over every stabilizer projection state.
    pub epsilon: f64,
    pub nearest: StabilizerGroup,
}

/// Exact distance to the set of stabilizer projection states by scanning all of them.
pub fn distance_to_sps(rho: &DenseOperator, budget: usize) -> Result<SpsDistance> {
    let groups = enumerate_stabilizer_states(rho.n, rho.q, budget)?;
    let mut best: Option<(f64, StabilizerGroup)> = None;
    for g in groups {
        let sigma = g.sps_dense()?;
        let d = schatten_one(&(&rho.mat - &sigma.mat));
        if best.as_ref().map_or(true, |(b, _)| d < *b) {
            best = Some((d, g));
        }
    }
    let (epsilon, nearest) = best.ok_or_else(|| Error::Internal("no stabilizer states".into()))?;
    Ok(SpsDistance { epsilon, nearest })
}

#[derive(Clone, Debug)]
pub struct HullDistance {
    /// Certified `Tr(Wρ) − max_φ Tr(Wφ)` for the best witness found.
    pub lower: f64,
    /// `‖ρ − σ‖₁` at the best polytope point found.
    pub upper: f64,
    /// Hermitian witness with operator norm at most one.
    pub witness: Matrix,
}

fn sign_matrix(m: &Matrix) -> Matrix {
    let (vals, vecs) = eigh(m);
    spectral(&vals, &vecs, |v| if v > 1e-14 { 1.0 } else if v < -1e-14 { -1.0 } else { 0.0 })
}

/// Lower bound on `min_{σ ∈ conv(dict)} ‖ρ − σ‖₁`. Frank–Wolfe on the trace distance supplies
/// sign witnesses `W = sgn(ρ − σ_k)`; each iterate and the running average of the witnesses are
/// scored by `Tr(Wρ) − max_φ ⟨φ|W|φ⟩`, which is valid for any `‖W‖_∞ ≤ 1`.
pub fn distance_to_hull_lower(rho: &DenseOperator, dict: &StabilizerDictionary, iterations: usize) -> Result<HullDistance> {
    dict.check(rho)?;
    let dim = dict.dim();
    let k = dict.len();
    let score = |w: &Matrix| (w * &rho.mat).trace().re - dict.max_expectation(w).1;
    let mut sigma = dict.projectors.iter().fold(Matrix::zeros(dim, dim), |acc, p| acc + p.scale(1.0 / k as f64));
    let mut best = HullDistance { lower: 0.0, upper: schatten_one(&(&rho.mat - &sigma)), witness: Matrix::zeros(dim, dim) };
    let mut average = Matrix::zeros(dim, dim);
    for it in 0..iterations.max(1) {
        let w = sign_matrix(&(&rho.mat - &sigma));
        average = (average.scale(it as f64) + &w).unscale(it as f64 + 1.0);
        for cand in [&w, &average] {
            let s = score(cand);
            if s > best.lower {
                best.lower = s;
                best.witness = cand.clone();
            }
        }
        let (fw, _) = dict.max_expectation(&w);
        let toward = &dict.projectors[fw] - &sigma;
        let f = |g: f64| schatten_one(&(&rho.mat - &sigma - toward.scale(g)));
        let step = ternary_min(f, 1.0);
        if step > 0.0 {
            sigma += toward.scale(step);
        } else {
            sigma += toward.scale(1.0 / (it as f64 + 2.0));
        }
        best.upper = best.upper.min(schatten_one(&(&rho.mat - &sigma)));
    }
    best.lower = best.lower.min(best.upper).max(0.0);
    Ok(best)
}

fn ternary_min(f: impl Fn(f64) -> f64, hi: f64) -> f64 {
    let (mut a, mut b) = (0.0, hi);
    for _ in 0..80 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let x = 0.5 * (a + b);
    if f(x) < f(0.0) {
        x
    } else {
        0.0
    }
}

/// Spectral projectors of a Pauli normalized to `P^δ = I`, indexed by eigenvalue `ζ^k`, `ζ = e^{2πi/δ}`.
fn pauli_projectors(p: &PauliLabel) -> Result<Vec<Matrix>> {
    let unit = p.with_unit_power();
    let delta = unit.order() as usize;
    let pm = unit.to_dense()?.mat;
    let dim = pm.nrows();
    let mut powers = vec![Matrix::identity(dim, dim)];
    for j in 1..delta {
        powers.push(&powers[j - 1] * &pm);
    }
    Ok((0..delta)
        .map(|k| {
            powers.iter().enumerate().fold(Matrix::zeros(dim, dim), |acc, (j, pw)| {
                let angle = -2.0 * std::f64::consts::PI * (k * j) as f64 / delta as f64;
                acc + pw * C64::from_polar(1.0 / delta as f64, angle)
            })
        })
        .collect())
}

/// Pauli `P` maximizing `|Tr(P†(ρ − σ))|` and the 1-norm distance between the outcome
/// distributions of its spectral measurement on ρ and σ.
pub fn sm_distinguishing_pauli(rho: &DenseOperator, sigma: &DenseOperator) -> Result<(PauliLabel, f64)> {
    if rho.q != sigma.q || rho.n != sigma.n {
        return Err(Error::ShapeMismatch("states differ in (q, n)".into()));
    }
    let (q, n) = (rho.q, rho.n);
    let diff = &rho.mat - &sigma.mat;
    let total = (q as u128).pow(2 * n as u32) as u64;
    let mut best = (PauliLabel::identity(q, n), -1.0);
    for code in 0..total {
        let mut rest = code;
        let v: Vec<u64> = (0..2 * n)
            .map(|_| {
                let x = rest % q;
                rest /= q;
                x
            })
            .collect();
        let p = PauliLabel::from_symplectic(q, &v);
        let overlap = (p.to_dense()?.mat.adjoint() * &diff).trace().norm();
        if overlap > best.1 + 1e-12 {
            best = (p, overlap);
        }
    }
    let label = best.0;
    let distance = pauli_projectors(&label)?
        .iter()
        .map(|pr| (pr * &diff).trace().re.abs())
        .sum();
    Ok((label, distance))
}
