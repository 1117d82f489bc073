//! Relative entropy of magic by pairwise Frank–Wolfe over the stabilizer polytope.

use super::StabilizerDictionary;
use crate::dense::{eigh, spectral, DenseOperator, LogBase, Matrix, C64};
use crate::error::{Error, Result};

pub const FW_TOLERANCE: f64 = 1e-6;
pub const FW_MAX_ITERATIONS: usize = 10_000;
const EIGEN_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct RelEntropyEstimate {
    /// `S(ρ‖σ)` at the final iterate: an upper estimate of the minimum.
    pub value: f64,
    /// Frank–Wolfe duality gap, so `value - gap` is a lower bound.
    pub gap: f64,
    pub weights: Vec<f64>,
    pub iterations: usize,
}

fn entropy_term(rho_vals: &[f64]) -> f64 {
    rho_vals.iter().filter(|&&v| v > EIGEN_FLOOR).map(|&v| v * v.ln()).sum()
}

/// `-Tr ρ log σ` in nats with eigenvalues of σ floored.
fn cross_entropy(rho: &Matrix, sigma: &Matrix) -> f64 {
    let (vals, vecs) = eigh(sigma);
    let log_sigma = spectral(&vals, &vecs, |v| v.max(EIGEN_FLOOR).ln());
    -(rho * log_sigma).trace().re
}

/// Fréchet derivative of `log` at σ applied to ρ.
fn log_derivative(sigma: &Matrix, rho: &Matrix) -> Matrix {
    let (vals, vecs) = eigh(sigma);
    let d = vals.len();
    let lam: Vec<f64> = vals.iter().map(|v| v.max(EIGEN_FLOOR)).collect();
    let r = vecs.adjoint() * rho * &vecs;
    let mut out = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let w = if (lam[i] - lam[j]).abs() < 1e-14 * lam[i].max(lam[j]) {
                1.0 / lam[i]
            } else {
                (lam[i].ln() - lam[j].ln()) / (lam[i] - lam[j])
            };
            out[(i, j)] = r[(i, j)] * C64::new(w, 0.0);
        }
    }
    &vecs * out * vecs.adjoint()
}

fn golden_section(f: impl Fn(f64) -> f64, hi: f64) -> f64 {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, hi);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
        if b - a < 1e-13 {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    [(0.0, f(0.0)), (hi, f(hi)), (mid, f(mid))]
        .into_iter()
        .fold((0.0, f64::INFINITY), |best, (x, v)| if v < best.1 { (x, v) } else { best })
        .0
}

/// Minimize `σ ↦ S(ρ‖σ)` over mixtures of dictionary states, starting from the uniform mixture
/// (the maximally mixed state). Stops at gap ≤ 1e-6 or after 10⁴ iterations.
pub fn rel_entropy_magic(rho: &DenseOperator, dict: &StabilizerDictionary, base: LogBase) -> Result<RelEntropyEstimate> {
    dict.check(rho)?;
    let k = dict.len();
    if k == 0 {
        return Err(Error::Internal("empty dictionary".into()));
    }
    let (rho_vals, _) = eigh(&rho.mat);
    let neg_entropy = entropy_term(&rho_vals);
    let objective = |sigma: &Matrix| neg_entropy + cross_entropy(&rho.mat, sigma);

    let mut weights = vec![1.0 / k as f64; k];
    let dim = dict.dim();
    let mut sigma = dict.projectors.iter().fold(Matrix::zeros(dim, dim), |acc, p| acc + p.scale(1.0 / k as f64));
    let mut value = objective(&sigma);
    let mut gap = f64::INFINITY;
    let mut iterations = 0;
    while iterations < FW_MAX_ITERATIONS {
        iterations += 1;
        let grad = -log_derivative(&sigma, &rho.mat);
        let scores: Vec<f64> = dict.states.iter().map(|s| (s.amps.adjoint() * &grad * &s.amps)[(0, 0)].re).collect();
        let fw = (0..k).fold(0, |best, i| if scores[i] < scores[best] { i } else { best });
        let sigma_score = (&grad * &sigma).trace().re;
        gap = (sigma_score - scores[fw]).max(0.0);
        if gap <= FW_TOLERANCE {
            break;
        }
        let away = (0..k)
            .filter(|&i| weights[i] > 0.0 && i != fw)
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if scores[b] >= scores[i] => Some(b),
                _ => Some(i),
            });
        let Some(away) = away else { break };
        let direction = &dict.projectors[fw] - &dict.projectors[away];
        let max_step = weights[away];
        let step = golden_section(|g| objective(&(&sigma + direction.scale(g))), max_step);
        if step <= 0.0 {
            // The pairwise direction stalls; fall back to a plain Frank–Wolfe step.
            let toward = &dict.projectors[fw] - &sigma;
            let step = golden_section(|g| objective(&(&sigma + toward.scale(g))), 1.0);
            if step <= 0.0 {
                break;
            }
            for w in weights.iter_mut() {
                *w *= 1.0 - step;
            }
            weights[fw] += step;
            sigma += toward.scale(step);
        } else {
            weights[away] -= step;
            weights[fw] += step;
            if weights[away] < 1e-15 {
                weights[away] = 0.0;
            }
            sigma += direction.scale(step);
        }
        value = objective(&sigma);
    }
    value = value.max(0.0);
    Ok(RelEntropyEstimate { value: base.from_nats(value), gap: base.from_nats(gap), weights, iterations })
}
