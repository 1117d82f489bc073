//! The n-qudit Pauli group over Z_q.
//!
//! A label `(a, b, c)` denotes `ω_{2q}^c · Z^a X^b` with `Z|j⟩ = ω^j|j⟩`, `X|j⟩ = |j+1⟩`
//! and `ω = e^{2πi/q}`. Phases live in Z_{2q} so that every product is representable for even q.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::dense::{dimension, DenseOperator, DenseState, Matrix, Vector, C64, DEFAULT_DENSE_LIMIT};
use crate::error::{Error, Result};
use crate::ring::{factorize, gcd, lcm, mod_inv};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliLabel {
    pub q: u64,
    /// Z exponents.
    pub a: Vec<u64>,
    /// X exponents.
    pub b: Vec<u64>,
    /// Phase exponent of `ω_{2q}`.
    pub c: u64,
}

/// `(a, b)` stacked into one vector of length `2n`.
pub type SymplecticVector = Vec<u64>;

/// `a_u·b_v − b_u·a_v (mod q)` on stacked vectors.
pub fn symplectic_form(u: &[u64], v: &[u64], q: u64) -> u64 {
    let n = u.len() / 2;
    let mut acc: i128 = 0;
    for i in 0..n {
        acc += u[i] as i128 * v[n + i] as i128 - u[n + i] as i128 * v[i] as i128;
    }
    acc.rem_euclid(q as i128) as u64
}

impl PauliLabel {
    pub fn new(q: u64, a: Vec<u64>, b: Vec<u64>, c: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidModulus(q));
        }
        if a.len() != b.len() {
            return Err(Error::ShapeMismatch(format!("{} Z exponents, {} X exponents", a.len(), b.len())));
        }
        Ok(PauliLabel {
            q,
            a: a.into_iter().map(|x| x % q).collect(),
            b: b.into_iter().map(|x| x % q).collect(),
            c: c % (2 * q),
        })
    }

    pub fn identity(q: u64, n: usize) -> Self {
        PauliLabel { q, a: vec![0; n], b: vec![0; n], c: 0 }
    }

    /// `Z^power` on one site.
    pub fn z(q: u64, n: usize, site: usize, power: u64) -> Self {
        let mut p = Self::identity(q, n);
        p.a[site] = power % q;
        p
    }

    /// `X^power` on one site.
    pub fn x(q: u64, n: usize, site: usize, power: u64) -> Self {
        let mut p = Self::identity(q, n);
        p.b[site] = power % q;
        p
    }

    /// Phase-free label from a stacked symplectic vector.
    pub fn from_symplectic(q: u64, v: &[u64]) -> Self {
        let n = v.len() / 2;
        PauliLabel { q, a: v[..n].iter().map(|x| x % q).collect(), b: v[n..].iter().map(|x| x % q).collect(), c: 0 }
    }

    pub fn random<R: Rng + ?Sized>(q: u64, n: usize, rng: &mut R) -> Self {
        PauliLabel {
            q,
            a: (0..n).map(|_| rng.gen_range(0..q)).collect(),
            b: (0..n).map(|_| rng.gen_range(0..q)).collect(),
            c: rng.gen_range(0..2 * q),
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn symplectic(&self) -> SymplecticVector {
        self.a.iter().chain(&self.b).copied().collect()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.c == 0 && self.is_identity_up_to_phase()
    }

    /// Sites where the label acts nontrivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.a[i] != 0 || self.b[i] != 0).collect()
    }

    pub fn with_phase(&self, c: u64) -> Self {
        PauliLabel { c: c % (2 * self.q), ..self.clone() }
    }

    /// Multiply by `ω^k` (an even step in Z_{2q}).
    pub fn times_omega(&self, k: u64) -> Self {
        self.with_phase(self.c + 2 * (k % self.q))
    }

    /// Same operator with the smallest phase exponent for which `P^order = +I`.
    pub fn with_unit_power(&self) -> Self {
        let two_q = 2 * self.q;
        let delta = self.order();
        let target = (two_q - self.with_phase(0).pow(delta).c) % two_q;
        let c = (0..two_q).find(|c| c * delta % two_q == target).expect("a phase with unit power exists");
        self.with_phase(c)
    }

    fn check_same(&self, other: &PauliLabel) -> Result<()> {
        if self.q != other.q || self.n() != other.n() {
            return Err(Error::ShapeMismatch(format!(
                "labels on (q={}, n={}) and (q={}, n={})",
                self.q,
                self.n(),
                other.q,
                other.n()
            )));
        }
        Ok(())
    }

    /// Label of the matrix product `self · other`.
    pub fn compose(&self, other: &PauliLabel) -> Result<PauliLabel> {
        self.check_same(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &PauliLabel) -> PauliLabel {
        let q = self.q;
        let two_q = 2 * q as u128;
        // Z^a1 X^b1 Z^a2 X^b2 = ω^{-b1·a2} Z^{a1+a2} X^{b1+b2}
        let cross: u128 = self.b.iter().zip(&other.a).map(|(&x, &y)| x as u128 * y as u128).sum::<u128>() % two_q;
        let c = (self.c as u128 + other.c as u128 + two_q * 2 - 2 * cross) % two_q;
        PauliLabel {
            q,
            a: self.a.iter().zip(&other.a).map(|(x, y)| (x + y) % q).collect(),
            b: self.b.iter().zip(&other.b).map(|(x, y)| (x + y) % q).collect(),
            c: c as u64,
        }
    }

    /// Label of the adjoint (= inverse).
    pub fn adjoint(&self) -> PauliLabel {
        let q = self.q;
        let two_q = 2 * q;
        let ab: u128 = self.a.iter().zip(&self.b).map(|(&x, &y)| x as u128 * y as u128).sum::<u128>() % two_q as u128;
        let c = (3 * two_q as u128 - self.c as u128 - 2 * ab) % two_q as u128;
        PauliLabel {
            q,
            a: self.a.iter().map(|&x| (q - x) % q).collect(),
            b: self.b.iter().map(|&x| (q - x) % q).collect(),
            c: c as u64,
        }
    }

    pub fn pow(&self, mut k: u64) -> PauliLabel {
        let mut result = PauliLabel::identity(self.q, self.n());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            k >>= 1;
        }
        result
    }

    /// `P Q P†`, which equals `ω^{r} Q` with `r = commutation_exponent(P, Q)`.
    pub fn conjugate(&self, other: &PauliLabel) -> Result<PauliLabel> {
        let r = self.commutation_exponent(other)?;
        Ok(other.times_omega(r))
    }

    /// `r` with `P·Q = ω^r Q·P`.
    pub fn commutation_exponent(&self, other: &PauliLabel) -> Result<u64> {
        self.check_same(other)?;
        Ok(symplectic_form(&self.symplectic(), &other.symplectic(), self.q))
    }

    /// Exponent `r` of the character `χ_P(Q) = ω^r`, defined by `P Q P† = χ_P(Q) Q`.
    pub fn character_value(&self, other: &PauliLabel) -> Result<u64> {
        self.commutation_exponent(other)
    }

    /// Smallest `δ ≥ 1` with `P^δ ∝ I`.
    pub fn order(&self) -> u64 {
        let q = self.q;
        self.a.iter().chain(&self.b).fold(1, |acc, &x| lcm(acc, q / gcd(q, x)))
    }

    /// Action on a basis state: `P|j⟩ = ω_{2q}^{phase} |j'⟩`.
    pub fn apply_to_basis(&self, idx: usize) -> (u64, usize) {
        let q = self.q;
        let qs = q as usize;
        let mut rest = idx;
        let mut out = 0usize;
        let mut stride = 1usize;
        let mut phase: u128 = self.c as u128;
        for i in 0..self.n() {
            let j = (rest % qs) as u64;
            rest /= qs;
            let shifted = (j + self.b[i]) % q;
            phase += 2 * self.a[i] as u128 * shifted as u128;
            out += shifted as usize * stride;
            stride *= qs;
        }
        ((phase % (2 * q as u128)) as u64, out)
    }

    /// `P|ψ⟩` without forming the matrix.
    pub fn apply(&self, psi: &DenseState) -> Result<DenseState> {
        if psi.q != self.q || psi.n != self.n() {
            return Err(Error::ShapeMismatch(format!("{self} does not act on (q={}, n={})", psi.q, psi.n)));
        }
        let roots = phase_table(self.q);
        let mut out = Vector::zeros(psi.dim());
        for (j, amp) in psi.amps.iter().enumerate() {
            let (ph, k) = self.apply_to_basis(j);
            out[k] = roots[ph as usize] * amp;
        }
        Ok(DenseState { q: psi.q, n: psi.n, amps: out })
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_limited(DEFAULT_DENSE_LIMIT)
    }

    pub fn to_dense_limited(&self, limit: usize) -> Result<DenseOperator> {
        let dim = dimension(self.q, self.n(), limit)?;
        let roots = phase_table(self.q);
        let mut mat = Matrix::zeros(dim, dim);
        for j in 0..dim {
            let (ph, out) = self.apply_to_basis(j);
            mat[(out, j)] = roots[ph as usize];
        }
        Ok(DenseOperator { q: self.q, n: self.n(), mat })
    }
}

/// `ω_{2q}^k` for `k = 0..2q`.
pub fn phase_table(q: u64) -> Vec<C64> {
    let two_q = 2 * q;
    (0..two_q).map(|k| C64::from_polar(1.0, std::f64::consts::PI * k as f64 / q as f64)).collect()
}

impl fmt::Display for PauliLabel {
    /// `q n | a_0..a_{n-1} | b_0..b_{n-1} | c`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        write!(f, "{} {} | {} | {} | {}", self.q, self.n(), join(&self.a), join(&self.b), self.c)
    }
}

impl FromStr for PauliLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected 4 '|'-separated fields in {s:?}")));
        }
        let ints = |t: &str| -> Result<Vec<u64>> {
            t.split_whitespace()
                .map(|w| w.parse::<u64>().map_err(|e| Error::Parse(format!("{w:?}: {e}"))))
                .collect()
        };
        let head = ints(parts[0])?;
        let [q, n] = head[..] else {
            return Err(Error::Parse(format!("header {:?} must be `q n`", parts[0])));
        };
        let (a, b, c) = (ints(parts[1])?, ints(parts[2])?, ints(parts[3])?);
        if a.len() as u64 != n || b.len() as u64 != n || c.len() != 1 {
            return Err(Error::Parse(format!("field lengths do not match n = {n}")));
        }
        if a.iter().chain(&b).any(|&x| x >= q) || c[0] >= 2 * q {
            return Err(Error::Parse("exponent out of canonical range".into()));
        }
        PauliLabel::new(q, a, b, c[0])
    }
}

/// Basis permutation `j ↦ (j mod m_1, …, j mod m_k)` for the prime-power components `m_t` of q,
/// with the tuple read little-endian (component 0 fastest). The flag is `false` when q is a
/// prime power and the identity is returned.
pub fn crt_permutation(q: u64) -> Result<(Vec<usize>, bool)> {
    let m = factorize(q)?;
    if m.is_prime_power() {
        return Ok(((0..q as usize).collect(), false));
    }
    let moduli = m.prime_powers();
    let perm = (0..q)
        .map(|j| {
            let mut idx = 0u64;
            let mut stride = 1u64;
            for &mt in &moduli {
                idx += (j % mt) * stride;
                stride *= mt;
            }
            idx as usize
        })
        .collect();
    Ok((perm, true))
}

/// Single-site Z-exponents `c_t = (q/m_t)^{-1} mod m_t` such that `Z_q ≅ ⊗_t Z_{m_t}^{c_t}` under
/// [`crt_permutation`]; `X_q` maps to `⊗_t X_{m_t}`.
pub fn crt_clock_exponents(q: u64) -> Result<Vec<(u64, u64)>> {
    let m = factorize(q)?;
    Ok(m
        .prime_powers()
        .into_iter()
        .map(|mt| (mt, mod_inv((q / mt) % mt, mt).expect("coprime CRT components")))
        .collect())
}
