//! Enumeration of isotropic subgroups of Z_q^{2n} and of the stabilizer states they carry.
//!
//! Prime-power moduli are handled by breadth-first extension of isotropic subgroups; composite
//! moduli combine the per-component results through the CRT idempotents of Z_q.

use std::collections::{HashSet, VecDeque};

use super::StabilizerGroup;
use crate::error::{Error, Result};
use crate::pauli::{symplectic_form, PauliLabel};
use crate::ring::zq::{diagonalize, Row};
use crate::ring::Modulus;

pub const DEFAULT_ENUMERATION_BUDGET: usize = 1_000_000;

/// Phase-free isotropic subgroup of Z_q^{2n}, as independent generators with their orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSubgroup {
    pub q: u64,
    pub n: usize,
    pub generators: Vec<(Row, u64)>,
}

impl IsotropicSubgroup {
    fn from_spanning(q: u64, n: usize, gens: &[Row]) -> Self {
        let generators = if gens.is_empty() {
            Vec::new()
        } else {
            diagonalize(gens, 2 * n, q).span_generators().into_iter().map(|(_, v, d)| (v, d)).collect()
        };
        IsotropicSubgroup { q, n, generators }
    }

    pub fn order(&self) -> u128 {
        self.generators.iter().map(|&(_, d)| d as u128).product()
    }

    pub fn is_maximal(&self) -> bool {
        self.order() == (self.q as u128).pow(self.n as u32)
    }

    /// Sorted codes `Σ_i v_i q^i` of all elements.
    pub fn element_codes(&self) -> Vec<u64> {
        let q = self.q;
        let mut elems: Vec<Row> = vec![vec![0; 2 * self.n]];
        for (g, d) in &self.generators {
            elems = elems
                .iter()
                .flat_map(|e| {
                    (0..*d).map(move |k| e.iter().zip(g).map(|(x, y)| (x + k * y) % q).collect::<Row>())
                })
                .collect();
        }
        let mut codes: Vec<u64> = elems.iter().map(|v| encode(v, q)).collect();
        codes.sort_unstable();
        codes
    }
}

fn encode(v: &[u64], q: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &x| acc * q + x)
}

fn decode(mut code: u64, q: u64, len: usize) -> Row {
    (0..len)
        .map(|_| {
            let x = code % q;
            code /= q;
            x
        })
        .collect()
}

fn space_size(q: u64, n: usize, budget: usize) -> Result<u64> {
    (q as u128)
        .checked_pow(2 * n as u32)
        .filter(|&s| s <= budget as u128)
        .map(|s| s as u64)
        .ok_or_else(|| Error::BudgetExceeded(format!("Z_{q}^{} has more than {budget} vectors", 2 * n)))
}

/// Breadth-first enumeration of every isotropic subgroup of Z_q^{2n}, returned as spanning
/// sets. Works for any q; used directly for prime powers.
fn bfs_isotropic(n: usize, q: u64, budget: usize) -> Result<Vec<Vec<Row>>> {
    let total = space_size(q, n, budget)?;
    let len = 2 * n;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut queue: VecDeque<(Vec<Row>, Vec<u64>)> = VecDeque::new();
    seen.insert(vec![0]);
    queue.push_back((Vec::new(), vec![0]));
    let mut out = Vec::new();
    while let Some((gens, elems)) = queue.pop_front() {
        for code in 0..total {
            if elems.binary_search(&code).is_ok() {
                continue;
            }
            let v = decode(code, q, len);
            if gens.iter().any(|g| symplectic_form(&v, g, q) != 0) {
                continue;
            }
            let mut next: Vec<u64> = Vec::with_capacity(elems.len() * q as usize);
            let mut multiple = vec![0u64; len];
            for _ in 0..q {
                for &e in &elems {
                    let ev = decode(e, q, len);
                    let sum: Row = ev.iter().zip(&multiple).map(|(x, y)| (x + y) % q).collect();
                    next.push(encode(&sum, q));
                }
                for (m, x) in multiple.iter_mut().zip(&v) {
                    *m = (*m + x) % q;
                }
            }
            next.sort_unstable();
            next.dedup();
            if seen.insert(next.clone()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded(format!("more than {budget} isotropic subgroups")));
                }
                let mut g2 = gens.clone();
                g2.push(v);
                queue.push_back((g2, next));
            }
        }
        out.push(gens);
    }
    Ok(out)
}

/// Breadth-first enumeration applied to Z_q directly, without CRT splitting.
pub fn enumerate_isotropic_subgroups_bfs(n: usize, q: u64, budget: usize) -> Result<Vec<IsotropicSubgroup>> {
    Ok(bfs_isotropic(n, q, budget)?.iter().map(|g| IsotropicSubgroup::from_spanning(q, n, g)).collect())
}

/// Every isotropic subgroup of Z_q^{2n}, trivial group first.
pub fn enumerate_isotropic_subgroups(n: usize, q: u64, budget: usize) -> Result<Vec<IsotropicSubgroup>> {
    let modulus = Modulus::new(q)?;
    if modulus.is_prime_power() {
        return enumerate_isotropic_subgroups_bfs(n, q, budget);
    }
    let mut combined: Vec<Vec<Row>> = vec![Vec::new()];
    for m in modulus.prime_powers() {
        let e = modulus.idempotent_for(m) as u128;
        let parts = bfs_isotropic(n, m, budget)?;
        if combined.len().saturating_mul(parts.len()) > budget {
            return Err(Error::BudgetExceeded(format!("more than {budget} isotropic subgroups")));
        }
        let lifted: Vec<Vec<Row>> = parts
            .iter()
            .map(|gens| {
                gens.iter()
                    .map(|w| w.iter().map(|&x| ((x as u128 * e) % q as u128) as u64).collect())
                    .collect()
            })
            .collect();
        combined = combined
            .iter()
            .flat_map(|base| {
                lifted.iter().map(move |extra| base.iter().chain(extra).cloned().collect::<Vec<Row>>())
            })
            .collect();
    }
    Ok(combined.iter().map(|g| IsotropicSubgroup::from_spanning(q, n, g)).collect())
}

/// All stabilizer groups with the given phase-free subgroup: each independent generator `h`
/// of order δ gets each of the δ phases for which `(ω_{2q}^c h)^δ = +I`.
pub fn phase_lifts(sub: &IsotropicSubgroup) -> Result<Vec<StabilizerGroup>> {
    let q = sub.q;
    let two_q = 2 * q;
    let mut choices: Vec<Vec<PauliLabel>> = Vec::new();
    for (v, delta) in &sub.generators {
        let h = PauliLabel::from_symplectic(q, v);
        let e = h.pow(*delta).c;
        let target = (two_q - e) % two_q;
        if target % delta != 0 {
            return Err(Error::Internal(format!("no phase gives {h} order {delta}")));
        }
        let step = two_q / delta;
        let c0 = (target / delta) % step;
        choices.push((0..*delta).map(|k| h.with_phase(c0 + k * step)).collect());
    }
    let mut combos: Vec<Vec<PauliLabel>> = vec![Vec::new()];
    for opts in &choices {
        combos = combos
            .iter()
            .flat_map(|base| {
                opts.iter().map(move |o| {
                    let mut next = base.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect();
    }
    combos.into_iter().map(|gens| StabilizerGroup::validate(q, sub.n, gens)).collect()
}

/// Every stabilizer projection state on `n` qudits: all isotropic subgroups, all phases.
pub fn enumerate_stabilizer_states(n: usize, q: u64, budget: usize) -> Result<Vec<StabilizerGroup>> {
    collect_states(n, q, budget, false)
}

/// Pure stabilizer states (`|S| = q^n`), each exactly once.
pub fn enumerate_pure_stabilizer_states(n: usize, q: u64, budget: usize) -> Result<Vec<StabilizerGroup>> {
    collect_states(n, q, budget, true)
}

fn collect_states(n: usize, q: u64, budget: usize, pure_only: bool) -> Result<Vec<StabilizerGroup>> {
    let subs = enumerate_isotropic_subgroups(n, q, budget)?;
    let mut out = Vec::new();
    for sub in subs.iter().filter(|s| !pure_only || s.is_maximal()) {
        if out.len() as u128 + sub.order() > budget as u128 {
            return Err(Error::BudgetExceeded(format!("more than {budget} stabilizer states")));
        }
        out.extend(phase_lifts(sub)?);
    }
    Ok(out)
}
