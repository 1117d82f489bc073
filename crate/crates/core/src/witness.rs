//! Mutual-information witnesses against stabilizer states, the light-cone sandwich for shallow
//! circuits, and the finite-size composition of the long-range magic lower bound.

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::dense::{apply_brickwork, mutual_information, mutual_information_pure, random_unitary, DenseOperator, DenseState, LogBase, Matrix};
use crate::error::{Error, Result};
use crate::magic::{fsm_upper_from_distance, PatchBound};
use crate::ring::factorize;

pub const DEFAULT_WINDOW_TOLERANCE: f64 = 1e-6;
pub const SANDWICH_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Fires,
    Silent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiWitnessVerdict {
    pub mutual_information: f64,
    pub smallest_prime: u64,
    pub window: (f64, f64),
    pub verdict: Verdict,
    /// Distance from `I` to the nearer window edge, positive inside the window.
    pub margin: f64,
    pub base: LogBase,
}

fn check_sites(region: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &s in region {
        if s >= n || seen[s] {
            return Err(Error::InvalidRegion(format!("{region:?} on {n} sites")));
        }
        seen[s] = true;
    }
    Ok(())
}

fn check_disjoint(a: &[usize], b: &[usize], n: usize) -> Result<()> {
    check_sites(a, n)?;
    check_sites(b, n)?;
    if a.iter().any(|s| b.contains(s)) {
        return Err(Error::OverlappingRegions);
    }
    Ok(())
}

/// Fires when `tol < I(A:B) < log p − tol`, where `p` is the smallest prime dividing `q`.
/// Stabilizer states never land in that window, so firing rules them out.
pub fn mi_forbidden_window(
    rho: &DenseOperator,
    a: &[usize],
    b: &[usize],
    tol: f64,
    base: LogBase,
) -> Result<MiWitnessVerdict> {
    check_disjoint(a, b, rho.n)?;
    let p = factorize(rho.q)?.smallest_prime();
    let log_p = base.log(p as f64);
    if !(tol > 0.0) || 2.0 * tol > log_p {
        return Err(Error::OutOfRange(format!("window tolerance {tol} leaves no window below log {p}")));
    }
    let window = (tol, log_p - tol);
    let mi = mutual_information(rho, a, b, base)?;
    let margin = (mi - window.0).min(window.1 - mi);
    let verdict = if mi > window.0 && mi < window.1 { Verdict::Fires } else { Verdict::Silent };
    Ok(MiWitnessVerdict { mutual_information: mi, smallest_prime: p, window, verdict, margin, base })
}

/// Sites within distance `d` of the region on an open chain of `n` sites.
pub fn thicken(region: &[usize], d: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&x| region.iter().any(|&s| s.abs_diff(x) <= d)).collect()
}

/// Sites whose distance-`d` neighbourhood (clipped to the chain) lies inside the region.
pub fn shrink(region: &[usize], d: usize, n: usize) -> Vec<usize> {
    (0..n)
        .filter(|&x| (x.saturating_sub(d)..=(x + d).min(n - 1)).all(|y| region.contains(&y)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiStabilityReport {
    pub depth: usize,
    /// `I_ρ(A^{−d} : B^{−d})`.
    pub inner: f64,
    /// `I_{UρU†}(A : B)`.
    pub evolved: f64,
    /// `I_ρ(A^{+d} : B^{+d})`.
    pub outer: f64,
    /// Largest amount by which either inequality fails, zero when both hold.
    pub violation: f64,
    pub holds: bool,
}

/// Sandwich `I_ρ(A^{−d}:B^{−d}) ≤ I_{UρU†}(A:B) ≤ I_ρ(A^{+d}:B^{+d})` for a depth-`d` brickwork `U`
/// whose gates come from `gates(layer, site)`.
pub fn mi_stability_check_with(
    psi: &DenseState,
    depth: usize,
    a: &[usize],
    b: &[usize],
    gates: impl FnMut(usize, usize) -> Matrix,
    base: LogBase,
) -> Result<MiStabilityReport> {
    let n = psi.n;
    check_disjoint(a, b, n)?;
    let (a_out, b_out) = (thicken(a, depth, n), thicken(b, depth, n));
    if a_out.iter().any(|s| b_out.contains(s)) {
        return Err(Error::InvalidRegion(format!("regions are closer than the light cone of depth {depth}")));
    }
    let (a_in, b_in) = (shrink(a, depth, n), shrink(b, depth, n));
    let evolved_state = apply_brickwork(psi, depth, gates)?;
    let inner = mutual_information_pure(psi, &a_in, &b_in, base)?;
    let evolved = mutual_information_pure(&evolved_state, a, b, base)?;
    let outer = mutual_information_pure(psi, &a_out, &b_out, base)?;
    let violation = (inner - evolved).max(evolved - outer).max(0.0);
    Ok(MiStabilityReport { depth, inner, evolved, outer, violation, holds: violation <= SANDWICH_TOLERANCE })
}

/// [`mi_stability_check_with`] on Haar-random two-site gates drawn from `seed`.
pub fn mi_stability_check(
    psi: &DenseState,
    depth: usize,
    a: &[usize],
    b: &[usize],
    seed: u64,
    base: LogBase,
) -> Result<MiStabilityReport> {
    let mut rng = StdRng::seed_from_u64(seed);
    let local = (psi.q * psi.q) as usize;
    mi_stability_check_with(psi, depth, a, b, |_, _| random_unitary(local, &mut rng), base)
}

/// `δ₁ + √(2δ₂)`: bound on `F(ρ,τ)` given `F(ρ,σ) ≤ δ₁` and `F(σ,τ) ≥ 1 − δ₂`.
pub fn fidelity_triangle(delta1: f64, delta2: f64) -> Result<f64> {
    for (name, v) in [("δ₁", delta1), ("δ₂", delta2)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange(format!("{name} = {v} outside [0, 1]")));
        }
    }
    Ok(delta1 + (2.0 * delta2).sqrt())
}

/// Mutual-information decay `I(A:B) ≤ K|A||B| e^{−dist/ξ}` together with the patch layout:
/// `patches` patches of at most `patch_size` sites, spaced `spacing · ln n` apart on `n` sites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub k: f64,
    pub xi: f64,
    pub patches: usize,
    pub patch_size: f64,
    pub spacing: f64,
    pub n: f64,
}

impl DecayProfile {
    pub fn validate(&self) -> Result<()> {
        let reals = [("K", self.k), ("ξ", self.xi), ("patch size", self.patch_size), ("spacing", self.spacing), ("n", self.n)];
        for (name, v) in reals {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange(format!("{name} = {v} must be positive")));
            }
        }
        if self.patches == 0 {
            return Err(Error::OutOfRange("at least one patch is required".into()));
        }
        Ok(())
    }

    /// `K m² r₀² n^{−c₁/ξ}`.
    pub fn product_closeness(&self) -> f64 {
        let m = self.patches as f64;
        self.k * m * m * self.patch_size * self.patch_size * self.n.powf(-self.spacing / self.xi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssembledBound {
    pub base: LogBase,
    pub product_closeness: f64,
    /// `exp(−S/2)`: fidelity of the state to the product of its patch marginals is at least this.
    pub product_fidelity_floor: f64,
    /// `∏ √(1 − ε_i²/4D_i²)`.
    pub patch_fidelity: f64,
    pub combined_fidelity: f64,
    /// `−log F²` of the combined fidelity; non-positive values carry no information.
    pub lf_lower_bound: f64,
    pub vacuous: bool,
}

pub fn logn_lrm_assemble(profile: &DecayProfile, certs: &[PatchBound], base: LogBase) -> Result<AssembledBound> {
    profile.validate()?;
    let product_closeness = profile.product_closeness();
    let product_fidelity_floor = (-product_closeness / 2.0).exp();
    let mut patch_fidelity = 1.0;
    for c in certs {
        patch_fidelity *= fsm_upper_from_distance(c.epsilon, c.dimension)?;
    }
    let combined_fidelity = fidelity_triangle(patch_fidelity, 1.0 - product_fidelity_floor)?;
    let lf_lower_bound = -2.0 * base.log(combined_fidelity);
    Ok(AssembledBound {
        base,
        product_closeness,
        product_fidelity_floor,
        patch_fidelity,
        combined_fidelity,
        lf_lower_bound,
        vacuous: lf_lower_bound <= 0.0,
    })
}
