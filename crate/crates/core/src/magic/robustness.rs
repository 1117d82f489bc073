//! Robustness of magic as a linear program, and generalized robustness / max-relative
//! entropy to the stabilizer polytope via cutting planes.

use super::lp;
use super::{hermitian_coordinates, hermitian_from_coordinates, StabilizerDictionary};
use crate::dense::{eigh, DenseOperator, LogBase, Matrix};
use crate::error::{Error, Result};

pub const CONE_EIGEN_TOLERANCE: f64 = 1e-8;
/// Cuts keep being added until the minimum eigenvalue reaches this.
const CONE_REFINE_TOLERANCE: f64 = 1e-9;
const CONE_MAX_ROUNDS: usize = 2_000;

#[derive(Clone, Debug)]
pub struct RobustnessSolution {
    /// `log(1 + 2R)` in the requested base.
    pub lr: f64,
    /// Optimal `Σ|c_σ|`.
    pub one_norm: f64,
    /// Coefficients over the dictionary with `Σ c_σ σ = ρ`.
    pub decomposition: Vec<f64>,
    /// Dual witness `A`, scaled so that `max_σ |Tr(Aσ)| ≤ 1`.
    pub witness: Matrix,
    /// `|Tr(Aρ)|` for the scaled witness: a certified lower bound on `1 + 2R`.
    pub dual_value: f64,
    /// Largest `|Tr(Aσ)|` of the unscaled dual solution.
    pub dual_violation: f64,
    /// `lr - log(dual_value)` in the requested base.
    pub gap: f64,
}

pub fn lr_lp(rho: &DenseOperator, dict: &StabilizerDictionary, base: LogBase) -> Result<RobustnessSolution> {
    dict.check(rho)?;
    let coords = dict.coordinates();
    let target = hermitian_coordinates(&rho.mat);
    let m = target.len();
    let k = coords.len();
    let a: Vec<Vec<f64>> = (0..m)
        .map(|row| {
            let mut r = Vec::with_capacity(2 * k);
            r.extend(coords.iter().map(|c| c[row]));
            r.extend(coords.iter().map(|c| -c[row]));
            r
        })
        .collect();
    let sol = lp::solve(&a, &target, &vec![1.0; 2 * k])?;
    let decomposition: Vec<f64> = (0..k).map(|i| sol.x[i] - sol.x[k + i]).collect();

    let witness_raw = hermitian_from_coordinates(&sol.duals, dict.dim());
    let dual_violation = dict
        .projectors
        .iter()
        .map(|p| (&witness_raw * p).trace().norm())
        .fold(0.0, f64::max);
    let scale = dual_violation.max(1.0);
    let witness = witness_raw.unscale(scale);
    let dual_value = (&witness * &rho.mat).trace().norm();
    let lr = base.log(sol.value.max(1.0));
    let gap = (lr - base.log(dual_value.max(1.0))).max(0.0);
    Ok(RobustnessSolution { lr, one_norm: sol.value, decomposition, witness, dual_value, dual_violation, gap })
}

#[derive(Clone, Debug)]
pub struct ConeSolution {
    /// `log λ*`, with `λ* = min{Σ d_i : Σ d_i φ_i ⪰ ρ, d ≥ 0}`.
    pub s_max_set: f64,
    /// `log(2λ* - 1)`.
    pub lgr: f64,
    /// Last cutting-plane value: a lower bound on `λ*`.
    pub lambda_lower: f64,
    /// Feasible value built from the last iterate: an upper bound on `λ*`.
    pub lambda_upper: f64,
    pub weights: Vec<f64>,
    /// Minimum eigenvalue of `Σ d_i φ_i − ρ` at the last iterate.
    pub min_eigenvalue: f64,
    pub converged: bool,
    pub rounds: usize,
    pub s_max_gap: f64,
    pub lgr_gap: f64,
}

/// Kelley cutting planes: each round solves the LP over the current cuts
/// `Σ d_i ⟨v|φ_i|v⟩ ≥ ⟨v|ρ|v⟩` and adds the most negative eigenvector of `Σ d_i φ_i − ρ`.
pub fn lgr_smax_cone(rho: &DenseOperator, dict: &StabilizerDictionary, base: LogBase) -> Result<ConeSolution> {
    dict.check(rho)?;
    let k = dict.len();
    let dim = dict.dim();
    let expect = |v: &crate::dense::Vector, m: &Matrix| (v.adjoint() * m * v)[(0, 0)].re;

    let mut cuts: Vec<crate::dense::Vector> = dict.states.iter().map(|s| s.amps.clone()).collect();
    let (_, rho_vecs) = eigh(&rho.mat);
    cuts.extend((0..dim).map(|i| rho_vecs.column(i).into_owned()));

    // Dual of min{Σd : G d ≥ h, d ≥ 0}: max{h·y : Gᵀy ≤ 1, y ≥ 0}, one row per dictionary
    // state and one column per cut. New cuts only append columns, so each round warm-starts.
    let mut program = lp::ColumnLp::new(vec![1.0; k])?;
    let mut columns: Vec<(Vec<f64>, f64)> = Vec::new();
    let add_cut = |program: &mut lp::ColumnLp, columns: &mut Vec<(Vec<f64>, f64)>, v: &crate::dense::Vector| -> Result<()> {
        let column: Vec<f64> = dict.projectors.iter().map(|p| expect(v, p)).collect();
        let h = expect(v, &rho.mat);
        program.add_column(column.clone(), -h)?;
        columns.push((column, h));
        Ok(())
    };
    for v in &cuts {
        add_cut(&mut program, &mut columns, v)?;
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        let sol = program.solve()?;
        let weights: Vec<f64> = sol.duals.iter().map(|y| (-y).max(0.0)).collect();
        let mix = dict.projectors.iter().zip(&weights).fold(Matrix::zeros(dim, dim), |acc, (p, &w)| acc + p.scale(w));
        let (vals, vecs) = eigh(&(&mix - &rho.mat));
        let min_eigenvalue = vals[0];
        // Rescale the LP point onto the feasible set so that h·y is a certified lower bound.
        let mut activity = vec![0.0; k];
        let mut objective = 0.0;
        for ((column, h), &y) in columns.iter().zip(&sol.x) {
            objective += h * y;
            for (a, c) in activity.iter_mut().zip(column) {
                *a += c * y;
            }
        }
        let overshoot = activity.iter().fold(1.0f64, |m, &a| m.max(a));
        let lambda_lower = objective / overshoot;
        let converged = min_eigenvalue >= -CONE_EIGEN_TOLERANCE;
        let fresh: Vec<crate::dense::Vector> = (0..dim)
            .take_while(|&i| vals[i] < -CONE_REFINE_TOLERANCE)
            .map(|i| vecs.column(i).into_owned())
            .filter(|v| cuts.iter().all(|u| u.dotc(v).norm_sqr() < 1.0 - 1e-9))
            .collect();
        if fresh.is_empty() || rounds >= CONE_MAX_ROUNDS {
            // The uniform mixture of all pure stabilizer states is I/dim, so adding
            // |λ_min|·dim of it makes the iterate feasible.
            let lambda_upper = weights.iter().sum::<f64>() + (-min_eigenvalue).max(0.0) * dim as f64;
            if lambda_lower < 1.0 - 1e-6 {
                return Err(Error::Internal(format!("cone value {lambda_lower} below 1")));
            }
            let lo = lambda_lower.max(1.0);
            let hi = lambda_upper.max(lo);
            let s_max_set = base.log(lo);
            let lgr = base.log(2.0 * lo - 1.0);
            return Ok(ConeSolution {
                s_max_set,
                lgr,
                lambda_lower,
                lambda_upper,
                weights,
                min_eigenvalue,
                converged,
                rounds,
                s_max_gap: base.log(hi) - s_max_set,
                lgr_gap: base.log(2.0 * hi - 1.0) - lgr,
            });
        }
        for v in &fresh {
            add_cut(&mut program, &mut columns, v)?;
        }
        cuts.extend(fresh);
    }
}
