//! Extreme points of the information convex set of a stabilizer reference state.

use super::{check_region, StabilizerGroup};
use crate::error::{Error, Result};
use crate::pauli::PauliLabel;
use crate::ring::zq::{diagonalize, Row};

const MAX_CANDIDATES: u128 = 1 << 20;

#[derive(Clone, Debug)]
pub struct ExtremePoints {
    /// Stabilizers generated on balls inside the thickened region, restricted to the region.
    pub local: StabilizerGroup,
    /// All stabilizers of the reference supported on the region.
    pub region: StabilizerGroup,
    /// Generators completing `local` to `region`, with their orders.
    pub free_generators: Vec<(PauliLabel, u64)>,
    /// One state per phase assignment `u`, listed with `u` in mixed-radix order (first entry fastest).
    pub points: Vec<(Vec<u64>, StabilizerGroup)>,
}

fn span_order(q: u64, n: usize, labels: &[PauliLabel]) -> u128 {
    if labels.is_empty() {
        return 1;
    }
    let rows: Vec<Row> = labels.iter().map(PauliLabel::symplectic).collect();
    diagonalize(&rows, 2 * n, q).span_order()
}

fn not_contained(inner: &[usize], outer: &[usize]) -> Option<Vec<usize>> {
    let missing: Vec<usize> = inner.iter().copied().filter(|s| !outer.contains(s)).collect();
    (!missing.is_empty()).then_some(missing)
}

/// Extreme points on `omega` for the reference group, given the thickened region `omega_plus`
/// and the balls (subsets of `omega_plus`) on which local stabilizers are generated.
pub fn extreme_points(
    reference: &StabilizerGroup,
    omega_plus: &[usize],
    omega: &[usize],
    balls: &[Vec<usize>],
) -> Result<ExtremePoints> {
    let (q, n) = (reference.q(), reference.n());
    check_region(omega_plus, n)?;
    check_region(omega, n)?;
    if let Some(missing) = not_contained(omega, omega_plus) {
        return Err(Error::RegionNotContained(missing));
    }
    for ball in balls {
        if let Some(missing) = not_contained(ball, omega_plus) {
            return Err(Error::RegionNotContained(missing));
        }
    }
    let thickened = reference.supported_subgroup(omega_plus)?;
    let local = thickened.locally_generated(balls)?.supported_subgroup(omega)?;
    let region = reference.supported_subgroup(omega)?;
    if region.order() > MAX_CANDIDATES {
        return Err(Error::BudgetExceeded(format!("region group of order {} is too large to scan", region.order())));
    }

    let mut chosen: Vec<PauliLabel> = local.independent_generators().into_iter().map(|(g, _)| g).collect();
    let mut current = span_order(q, n, &chosen);
    let target = region.order();
    let mut candidates = region.elements();
    candidates.sort();
    let mut free = Vec::new();
    for g in candidates {
        if current == target {
            break;
        }
        if g.is_identity_up_to_phase() {
            continue;
        }
        let delta = g.order();
        chosen.push(g.clone());
        let next = span_order(q, n, &chosen);
        if next == current * delta as u128 {
            current = next;
            free.push((g, delta));
        } else {
            chosen.pop();
        }
    }
    if current != target {
        return Err(Error::NoComplement);
    }

    let base: Vec<PauliLabel> = local.independent_generators().into_iter().map(|(g, _)| g).collect();
    let total: u64 = free.iter().map(|(_, d)| d).product();
    let mut points = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut rest = idx;
        let mut u = Vec::with_capacity(free.len());
        let mut gens = base.clone();
        for (g, delta) in &free {
            let ui = rest % delta;
            rest /= delta;
            let step = q / delta * ui % q;
            gens.push(g.times_omega((q - step) % q));
            u.push(ui);
        }
        points.push((u, StabilizerGroup::validate(q, n, gens)?));
    }
    Ok(ExtremePoints { local, region, free_generators: free, points })
}
