//! Integer helpers, prime factorization and CRT splitting of Z_q.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended Euclid on signed integers: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
        (old_t, t) = (t, old_t - quot * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Canonical representative of `a` in `[0, m)`.
pub fn rem(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd(a as i64, m as i64);
    (g == 1).then(|| rem(s, m))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization of a qudit dimension, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    q: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        factorize(q)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The prime-power components `p_j^{r_j}`.
    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, r)| p.pow(r)).collect()
    }

    pub fn smallest_prime(&self) -> u64 {
        self.factors[0].0
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    /// `a mod p_j^{r_j}` for each component.
    pub fn crt_split(&self, a: u64) -> Vec<u64> {
        self.prime_powers().into_iter().map(|m| a % m).collect()
    }

    /// Inverse of [`Modulus::crt_split`].
    pub fn crt_combine(&self, parts: &[u64]) -> Result<u64> {
        let moduli = self.prime_powers();
        if parts.len() != moduli.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} CRT components, got {}",
                moduli.len(),
                parts.len()
            )));
        }
        let q = self.q as u128;
        let mut acc: u128 = 0;
        for (&m, &x) in moduli.iter().zip(parts) {
            let e = self.idempotent_for(m) as u128;
            acc = (acc + e * ((x % m) as u128)) % q;
        }
        Ok(acc as u64)
    }

    /// The CRT idempotent that is 1 mod `m` and 0 mod every other component.
    pub fn idempotent_for(&self, m: u64) -> u64 {
        let rest = self.q / m;
        let inv = mod_inv(rest % m, m).expect("coprime CRT components");
        ((rest as u128 * inv as u128) % self.q as u128) as u64
    }
}

pub fn factorize(q: u64) -> Result<Modulus> {
    if q < 2 {
        return Err(Error::InvalidModulus(q));
    }
    let mut factors = Vec::new();
    let mut rest = q;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            let mut r = 0;
            while rest % p == 0 {
                rest /= p;
                r += 1;
            }
            factors.push((p, r));
        }
        p += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Modulus { q, factors })
}
