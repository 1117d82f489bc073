//! Closed-form bounds turning per-patch trace distances into global magic lower bounds.

use serde::{Deserialize, Serialize};

use super::{build_dictionary_with_budget, distance_to_hull_lower, distance_to_sps};
use crate::dense::{DenseOperator, DenseState, LogBase};
use crate::error::{Error, Result};

/// Set the patch distances are measured against: stabilizer projection states or the polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetSet {
    #[serde(rename = "SP")]
    Sp,
    #[serde(rename = "S")]
    S,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchBound {
    pub epsilon: f64,
    pub dimension: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchCertificate {
    pub target: TargetSet,
    pub base: LogBase,
    pub patches: Vec<PatchBound>,
    /// Upper bound on the root fidelity `F = ∏ √(1 − ε_i²/4D_i²)`.
    pub fidelity_bound: f64,
    /// Lower bound on LF.
    pub lf_lower_bound: f64,
    /// Lower bound on the relative entropy of magic; only for distances to the polytope.
    pub rel_entropy_lower_bound: Option<f64>,
}

fn check_patch(epsilon: f64, dimension: u64) -> Result<()> {
    if !(0.0..=2.0).contains(&epsilon) || epsilon.is_nan() {
        return Err(Error::OutOfRange(format!("distance {epsilon} outside [0, 2]")));
    }
    if dimension < 2 {
        return Err(Error::OutOfRange(format!("patch dimension {dimension} below 2")));
    }
    Ok(())
}

/// `√(1 − ε²/4D²)`: upper bound on the stabilizer-measurement fidelity of a patch at distance ε.
pub fn fsm_upper_from_distance(epsilon: f64, dimension: u64) -> Result<f64> {
    check_patch(epsilon, dimension)?;
    let d = dimension as f64;
    Ok((1.0 - epsilon * epsilon / (4.0 * d * d)).sqrt())
}

/// `Σ_i log 1/(1 − ε_i²/4D_i²)`, a lower bound on LF for product states over the patches.
pub fn certify_product_lf(patches: &[PatchBound], base: LogBase) -> Result<f64> {
    let mut nats = 0.0;
    for p in patches {
        let f = fsm_upper_from_distance(p.epsilon, p.dimension)?;
        nats -= 2.0 * f.ln();
    }
    Ok(base.from_nats(nats))
}

/// `Σ_i ε_i²/(2D_i²)` nats, a lower bound on the relative entropy of magic.
pub fn extensive_rel_entropy_bound(patches: &[PatchBound], base: LogBase) -> Result<f64> {
    let mut nats = 0.0;
    for p in patches {
        check_patch(p.epsilon, p.dimension)?;
        let d = p.dimension as f64;
        nats += p.epsilon * p.epsilon / (2.0 * d * d);
    }
    Ok(base.from_nats(nats))
}

/// `log(|⟨ψ_l|ψ⟩|²/f_l)` when positive: `A = |ψ_l⟩⟨ψ_l|/f_l` is dual feasible for the robustness LP.
pub fn low_energy_lr_witness(psi: &DenseState, psi_l: &DenseState, f_l: f64, base: LogBase) -> Result<f64> {
    if f_l <= 0.0 || f_l > 1.0 + 1e-12 || f_l.is_nan() {
        return Err(Error::OutOfRange(format!("stabilizer fidelity {f_l} outside (0, 1]")));
    }
    if psi.q != psi_l.q || psi.n != psi_l.n {
        return Err(Error::ShapeMismatch("states differ in (q, n)".into()));
    }
    let ratio = psi_l.inner(psi).norm_sqr() / f_l;
    Ok(if ratio > 1.0 { base.log(ratio) } else { 0.0 })
}

/// Distances of each patch state to the target set, combined into the product bounds.
pub fn certify_patches(
    patches: &[DenseOperator],
    target: TargetSet,
    base: LogBase,
    budget: usize,
    hull_iterations: usize,
) -> Result<PatchCertificate> {
    let mut bounds = Vec::with_capacity(patches.len());
    for rho in patches {
        rho.check_psd()?;
        let epsilon = match target {
            TargetSet::Sp => distance_to_sps(rho, budget)?.epsilon,
            TargetSet::S => {
                let dict = build_dictionary_with_budget(rho.n, rho.q, budget)?;
                distance_to_hull_lower(rho, &dict, hull_iterations)?.lower
            }
        };
        bounds.push(PatchBound { epsilon: epsilon.clamp(0.0, 2.0), dimension: rho.dim() as u64 });
    }
    let mut fidelity_bound = 1.0;
    for p in &bounds {
        fidelity_bound *= fsm_upper_from_distance(p.epsilon, p.dimension)?;
    }
    let lf_lower_bound = certify_product_lf(&bounds, base)?;
    let rel_entropy_lower_bound = match target {
        TargetSet::S => Some(extensive_rel_entropy_bound(&bounds, base)?),
        TargetSet::Sp => None,
    };
    Ok(PatchCertificate { target, base, patches: bounds, fidelity_bound, lf_lower_bound, rel_entropy_lower_bound })
}
