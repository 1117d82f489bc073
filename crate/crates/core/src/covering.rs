//! Covers of the n-qudit Pauli group (modulo phases) by maximal isotropic subgroups of
//! Z_q^{2n}, built from Galois rings for prime powers and tensored across CRT factors.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dense::LogBase;
use crate::error::{Error, Result};
use crate::pauli::{symplectic_form, PauliLabel};
use crate::ring::zq::{diagonalize, Row};
use crate::ring::{is_prime, GaloisRing, Modulus, RingElement};
use crate::stabilizer::StabilizerGroup;

/// Phase-free maximal isotropic subgroups, each given by `n` generators in Z_q^{2n}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFamily {
    pub q: u64,
    pub n: usize,
    pub members: Vec<Vec<Row>>,
}

/// Outcome of an exhaustive cover check. `uncovered` and `bad_member` carry counterexamples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub passed: bool,
    pub members: usize,
    pub expected_members: u128,
    pub vectors_checked: u64,
    pub uncovered: Option<Row>,
    pub bad_member: Option<(usize, String)>,
}

pub const DEFAULT_COVER_BUDGET: u64 = 1_000_000;

/// `∏_j (p_j^{n r_j} + p_j^{n (r_j - 1)})`, which equals `q^n ∏_j (1 + p_j^{-n})`.
pub fn expected_cover_size(q: u64, n: usize) -> Result<u128> {
    let modulus = Modulus::new(q)?;
    Ok(modulus
        .factors()
        .iter()
        .map(|&(p, r)| {
            let m = (p as u128).pow(r);
            m.pow(n as u32) + (m / p as u128).pow(n as u32)
        })
        .product())
}

struct Coordinates {
    ring: GaloisRing,
    basis: Vec<RingElement>,
    dual: Vec<RingElement>,
}

impl Coordinates {
    fn new(p: u64, r: u32, n: usize) -> Result<Self> {
        let ring = GaloisRing::new(p, r, n)?;
        let basis = ring.power_basis();
        let dual = ring.dual_basis(&basis)?;
        Ok(Coordinates { ring, basis, dual })
    }

    /// Coordinates `a` with `x = Σ a_i e_i`.
    fn primal(&self, x: &RingElement) -> Row {
        self.dual.iter().map(|d| self.ring.trace(&self.ring.mul_unchecked(x, d))).collect()
    }

    /// Coordinates `b` with `y = Σ b_i e*_i`.
    fn dual_coords(&self, y: &RingElement) -> Row {
        self.basis.iter().map(|e| self.ring.trace(&self.ring.mul_unchecked(y, e))).collect()
    }

    fn from_primal(&self, a: &[u64]) -> RingElement {
        a.iter().zip(&self.basis).fold(self.ring.zero(), |acc, (&c, e)| {
            self.ring.add_unchecked(&acc, &self.ring.scale(c, e))
        })
    }

    fn from_dual(&self, b: &[u64]) -> RingElement {
        b.iter().zip(&self.dual).fold(self.ring.zero(), |acc, (&c, e)| {
            self.ring.add_unchecked(&acc, &self.ring.scale(c, e))
        })
    }

    /// Elements of pR in lexicographic order.
    fn multiples_of_p(&self) -> Vec<RingElement> {
        let p = self.ring.p();
        self.ring.elements().filter(|x| x.coeffs.iter().all(|c| c % p == 0)).collect()
    }

    fn graph_member(&self, t: &RingElement) -> Vec<Row> {
        self.basis
            .iter()
            .enumerate()
            .map(|(k, ek)| {
                let mut v = unit(self.basis.len(), k);
                v.extend(self.dual_coords(&self.ring.mul_unchecked(t, ek)));
                v
            })
            .collect()
    }

    fn cograph_member(&self, s: &RingElement) -> Vec<Row> {
        let n = self.basis.len();
        self.dual
            .iter()
            .enumerate()
            .map(|(k, ek)| {
                let mut v = self.primal(&self.ring.mul_unchecked(s, ek));
                v.extend(unit(n, k));
                v
            })
            .collect()
    }
}

fn unit(n: usize, k: usize) -> Row {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

/// Cover of Z_{p^r}^{2n}: the graphs `{(x, t x)}` for every `t ∈ R`, then `{(s y, y)}` for `s ∈ pR`,
/// with `R = GR(p^r, n)` identified with Z_{p^r}^n through the power basis and its trace dual.
pub fn cover_prime_power(p: u64, r: u32, n: usize) -> Result<CoverFamily> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if r == 0 || n == 0 {
        return Err(Error::OutOfRange(format!("need r ≥ 1 and n ≥ 1, got r={r} n={n}")));
    }
    let coords = Coordinates::new(p, r, n)?;
    let mut members: Vec<Vec<Row>> = coords.ring.elements().map(|t| coords.graph_member(&t)).collect();
    members.extend(coords.multiples_of_p().iter().map(|s| coords.cograph_member(s)));
    Ok(CoverFamily { q: p.pow(r), n, members })
}

/// Index in `cover_prime_power(p, r, n)` of the member that the covering argument assigns to
/// `v = (a, b)`: strip the largest power of p, then use `t = y₀ x₀⁻¹` or `s = x₀ y₀⁻¹`.
pub fn designated_member(p: u64, r: u32, n: usize, v: &[u64]) -> Result<usize> {
    let coords = Coordinates::new(p, r, n)?;
    let m = coords.ring.modulus();
    if v.len() != 2 * n || v.iter().any(|&x| x >= m) {
        return Err(Error::ShapeMismatch(format!("expected {} residues below {m}", 2 * n)));
    }
    let ring = &coords.ring;
    let lex_index = |x: &RingElement, base: u64, div: u64| x.coeffs.iter().fold(0u64, |acc, c| acc * base + c / div);
    if v.iter().all(|&x| x == 0) {
        return Ok(0);
    }
    let mut k = 0;
    while v.iter().all(|&x| x % p.pow(k + 1) == 0) {
        k += 1;
    }
    let strip: Row = v.iter().map(|&x| x / p.pow(k)).collect();
    let x0 = coords.from_primal(&strip[..n]);
    let y0 = coords.from_dual(&strip[n..]);
    if ring.is_unit(&x0) {
        let t = ring.mul_unchecked(&y0, &ring.inverse(&x0)?);
        Ok(lex_index(&t, m, 1) as usize)
    } else {
        let s = ring.mul_unchecked(&x0, &ring.inverse(&y0)?);
        Ok(ring.size() as usize + lex_index(&s, m / p, p) as usize)
    }
}

/// Tensor product of the prime-power covers, recombined coordinate-wise through the CRT.
/// Members are ordered with the first prime factor varying slowest.
pub fn cover_composite(q: u64, n: usize) -> Result<CoverFamily> {
    let modulus = Modulus::new(q)?;
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let parts: Vec<CoverFamily> =
        modulus.factors().iter().map(|&(p, r)| cover_prime_power(p, r, n)).collect::<Result<_>>()?;
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().unwrap());
    }
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for part in &parts {
        combos = combos
            .iter()
            .flat_map(|c| {
                (0..part.members.len()).map(move |i| {
                    let mut next = c.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }
    let mut members = Vec::with_capacity(combos.len());
    for combo in combos {
        let mut gens = Vec::with_capacity(n);
        for k in 0..n {
            let row: Row = (0..2 * n)
                .map(|i| {
                    let residues: Vec<u64> =
                        combo.iter().zip(&parts).map(|(&m, part)| part.members[m][k][i]).collect();
                    modulus.crt_combine(&residues)
                })
                .collect::<Result<_>>()?;
            gens.push(row);
        }
        members.push(gens);
    }
    Ok(CoverFamily { q, n, members })
}

impl CoverFamily {
    /// The member with all generators given phase making them +1 eigen-operators.
    pub fn member_group(&self, index: usize) -> Result<StabilizerGroup> {
        let gens = self
            .members
            .get(index)
            .ok_or_else(|| Error::OutOfRange(format!("member {index} of {}", self.members.len())))?;
        let labels: Vec<PauliLabel> = gens.iter().map(|v| PauliLabel::from_symplectic(self.q, v).with_unit_power()).collect();
        StabilizerGroup::validate(self.q, self.n, labels)
    }

    /// Element set of a member as sorted little-endian codes.
    fn member_codes(&self, gens: &[Row]) -> Vec<u64> {
        let q = self.q;
        let mut elems: HashSet<Row> = HashSet::new();
        elems.insert(vec![0; 2 * self.n]);
        for g in gens {
            let mut next = HashSet::new();
            for e in &elems {
                let mut cur = e.clone();
                for _ in 0..q {
                    next.insert(cur.clone());
                    cur = cur.iter().zip(g).map(|(x, y)| (x + y) % q).collect();
                }
            }
            elems = next;
        }
        let mut codes: Vec<u64> = elems.iter().map(|v| v.iter().rev().fold(0, |acc, &x| acc * q + x)).collect();
        codes.sort_unstable();
        codes
    }
}

/// Exhaustive check that every vector of Z_q^{2n} lies in some member, that every member is
/// isotropic of order q^n, and that the family has the expected size.
pub fn verify_cover(family: &CoverFamily, budget: u64) -> Result<CoverReport> {
    let (q, n) = (family.q, family.n);
    let total = (q as u128).pow(2 * n as u32);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded(format!("Z_{q}^{} has {total} vectors", 2 * n)));
    }
    let expected_members = expected_cover_size(q, n)?;
    let mut report = CoverReport {
        passed: true,
        members: family.members.len(),
        expected_members,
        vectors_checked: total as u64,
        uncovered: None,
        bad_member: None,
    };
    let target = (q as u128).pow(n as u32);
    let mut covered = vec![false; total as usize];
    for (idx, gens) in family.members.iter().enumerate() {
        if gens.iter().any(|g| g.len() != 2 * n || g.iter().any(|&x| x >= q)) {
            report.bad_member.get_or_insert((idx, "malformed generator".into()));
            continue;
        }
        let isotropic = gens.iter().all(|u| gens.iter().all(|v| symplectic_form(u, v, q) == 0));
        if !isotropic {
            report.bad_member.get_or_insert((idx, "generators do not commute".into()));
            continue;
        }
        let order = if gens.is_empty() { 1 } else { diagonalize(gens, 2 * n, q).span_order() };
        if order != target {
            report.bad_member.get_or_insert((idx, format!("order {order}, expected {target}")));
            continue;
        }
        for code in family.member_codes(gens) {
            covered[code as usize] = true;
        }
    }
    if let Some(code) = covered.iter().position(|c| !c) {
        let mut rest = code as u64;
        report.uncovered = Some(
            (0..2 * n)
                .map(|_| {
                    let x = rest % q;
                    rest /= q;
                    x
                })
                .collect(),
        );
    }
    report.passed = report.uncovered.is_none()
        && report.bad_member.is_none()
        && family.members.len() as u128 == expected_members;
    Ok(report)
}

/// Upper bound `(n + 2^{-n-1}) log q` on the log-robustness of any n-qudit state.
pub fn lr_upper_bound(n: usize, q: u64, base: LogBase) -> f64 {
    let nats = (n as f64 + 0.5f64.powi(n as i32 + 1)) * (q as f64).ln();
    base.from_nats(nats)
}
