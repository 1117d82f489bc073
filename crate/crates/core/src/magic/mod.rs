//! Magic monotones relative to the stabilizer polytope, and certificates that lift
//! per-patch distances to global lower bounds.

mod certificate;
mod distance;
mod entropy;
pub mod lp;
mod robustness;

use serde::{Deserialize, Serialize};

use crate::dense::{DenseOperator, DenseState, LogBase, Matrix, C64};
use crate::error::{Error, Result};
use crate::stabilizer::{enumerate_pure_stabilizer_states, StabilizerGroup, DEFAULT_ENUMERATION_BUDGET};

pub use certificate::{
    certify_patches, certify_product_lf, extensive_rel_entropy_bound, fsm_upper_from_distance,
    low_energy_lr_witness, PatchBound, PatchCertificate, TargetSet,
};
pub use distance::{distance_to_hull_lower, distance_to_sps, sm_distinguishing_pauli, HullDistance, SpsDistance};
pub use entropy::{rel_entropy_magic, RelEntropyEstimate, FW_MAX_ITERATIONS, FW_TOLERANCE};
pub use robustness::{lgr_smax_cone, lr_lp, ConeSolution, RobustnessSolution, CONE_EIGEN_TOLERANCE};

/// Pure stabilizer states on `(n, q)` with cached vectors, projectors and Hermitian coordinates.
#[derive(Clone, Debug)]
pub struct StabilizerDictionary {
    pub q: u64,
    pub n: usize,
    pub groups: Vec<StabilizerGroup>,
    pub states: Vec<DenseState>,
    pub projectors: Vec<Matrix>,
    coords: Vec<Vec<f64>>,
}

pub fn build_dictionary(n: usize, q: u64) -> Result<StabilizerDictionary> {
    build_dictionary_with_budget(n, q, DEFAULT_ENUMERATION_BUDGET)
}

pub fn build_dictionary_with_budget(n: usize, q: u64, budget: usize) -> Result<StabilizerDictionary> {
    let groups = enumerate_pure_stabilizer_states(n, q, budget)?;
    let states: Vec<DenseState> = groups.iter().map(StabilizerGroup::pure_state).collect::<Result<_>>()?;
    let projectors: Vec<Matrix> = states.iter().map(|s| s.density().mat).collect();
    let coords = projectors.iter().map(hermitian_coordinates).collect();
    Ok(StabilizerDictionary { q, n, groups, states, projectors, coords })
}

impl StabilizerDictionary {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(1, DenseState::dim)
    }

    pub(crate) fn coordinates(&self) -> &[Vec<f64>] {
        &self.coords
    }

    fn check(&self, rho: &DenseOperator) -> Result<()> {
        if rho.q != self.q || rho.n != self.n {
            return Err(Error::ShapeMismatch(format!(
                "operator on (q={}, n={}) but dictionary on (q={}, n={})",
                rho.q, rho.n, self.q, self.n
            )));
        }
        Ok(())
    }

    /// `max_i ⟨φ_i|W|φ_i⟩` with its index, for Hermitian `W`.
    pub(crate) fn max_expectation(&self, w: &Matrix) -> (usize, f64) {
        self.states
            .iter()
            .map(|s| (&s.amps.adjoint() * w * &s.amps)[(0, 0)].re)
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
    }
}

/// Real coordinates `x` of a Hermitian matrix with `Tr(A X) = Σ y_k x_k` for `A = hermitian_from_coordinates(y)`:
/// the diagonal, then `√2 Re X_ij` and `√2 Im X_ij` for `i < j`.
pub fn hermitian_coordinates(x: &Matrix) -> Vec<f64> {
    let d = x.nrows();
    let s = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    out.extend((0..d).map(|i| x[(i, i)].re));
    for i in 0..d {
        for j in i + 1..d {
            out.push(s * x[(i, j)].re);
            out.push(s * x[(i, j)].im);
        }
    }
    out
}

pub fn hermitian_from_coordinates(y: &[f64], d: usize) -> Matrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = C64::new(y[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            let re = y[k] * h;
            let im = y[k + 1] * h;
            // Tr(A X) picks A_ij X_ji + A_ji X_ij.
            m[(i, j)] = C64::new(re, im);
            m[(j, i)] = C64::new(re, -im);
            k += 2;
        }
    }
    m
}

/// Stabilizer fidelity of a pure state and the maximizing dictionary state, by exhaustive scan.
#[derive(Clone, Debug)]
pub struct PureFidelity {
    /// `-log max_φ |⟨φ|ψ⟩|²` in the requested base.
    pub lf: f64,
    pub fidelity: f64,
    pub witness: usize,
}

pub fn lf_pure(psi: &DenseState, dict: &StabilizerDictionary, base: LogBase) -> Result<PureFidelity> {
    if psi.q != dict.q || psi.n != dict.n {
        return Err(Error::ShapeMismatch("state and dictionary differ in (q, n)".into()));
    }
    let (witness, fidelity) = dict
        .states
        .iter()
        .map(|s| s.inner(psi).norm_sqr())
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, f)| if f > best.1 { (i, f) } else { best });
    let fidelity = fidelity.min(1.0);
    Ok(PureFidelity { lf: (-base.log(fidelity)).max(0.0), fidelity, witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateStatus {
    Exact,
    UpperEstimate,
    LowerEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    pub status: EstimateStatus,
    pub gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Lf,
    Srel,
    Smax,
    Lgr,
    Lr,
}

impl Measure {
    pub const ALL: [Measure; 5] = [Measure::Lf, Measure::Srel, Measure::Smax, Measure::Lgr, Measure::Lr];

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "lf" => Some(Measure::Lf),
            "srel" => Some(Measure::Srel),
            "smax" => Some(Measure::Smax),
            "lgr" => Some(Measure::Lgr),
            "lr" => Some(Measure::Lr),
            _ => None,
        }
    }
}

/// Requested monotones of one state. `lf` is only filled for pure inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicReport {
    pub base: LogBase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lf: Option<MeasureValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_rel: Option<MeasureValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_max_set: Option<MeasureValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lgr: Option<MeasureValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lr: Option<MeasureValue>,
}

const PURITY_TOLERANCE: f64 = 1e-9;

/// Leading eigenvector when `rho` is pure to within tolerance.
pub fn as_pure_state(rho: &DenseOperator) -> Option<DenseState> {
    let (vals, vecs) = rho.eigh();
    let top = *vals.last()?;
    if (top - 1.0).abs() > PURITY_TOLERANCE {
        return None;
    }
    DenseState::normalized(rho.q, rho.n, vecs.column(vals.len() - 1).into_owned()).ok()
}

pub fn magic_report(
    rho: &DenseOperator,
    dict: &StabilizerDictionary,
    measures: &[Measure],
    base: LogBase,
) -> Result<MagicReport> {
    dict.check(rho)?;
    rho.check_psd()?;
    let mut report = MagicReport { base, lf: None, s_rel: None, s_max_set: None, lgr: None, lr: None };
    let wants = |m: Measure| measures.contains(&m);
    if wants(Measure::Lf) {
        if let Some(psi) = as_pure_state(rho) {
            let f = lf_pure(&psi, dict, base)?;
            report.lf = Some(MeasureValue { value: f.lf, status: EstimateStatus::Exact, gap: 0.0 });
        }
    }
    if wants(Measure::Srel) {
        let est = rel_entropy_magic(rho, dict, base)?;
        report.s_rel = Some(MeasureValue { value: est.value, status: EstimateStatus::UpperEstimate, gap: est.gap });
    }
    if wants(Measure::Smax) || wants(Measure::Lgr) {
        let cone = lgr_smax_cone(rho, dict, base)?;
        let status = if cone.converged { EstimateStatus::Exact } else { EstimateStatus::LowerEstimate };
        if wants(Measure::Smax) {
            report.s_max_set = Some(MeasureValue { value: cone.s_max_set, status, gap: cone.s_max_gap });
        }
        if wants(Measure::Lgr) {
            report.lgr = Some(MeasureValue { value: cone.lgr, status, gap: cone.lgr_gap });
        }
    }
    if wants(Measure::Lr) {
        let lr = lr_lp(rho, dict, base)?;
        report.lr = Some(MeasureValue { value: lr.lr, status: EstimateStatus::Exact, gap: lr.gap });
    }
    Ok(report)
}
