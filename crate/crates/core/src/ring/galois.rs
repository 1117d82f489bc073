//! Galois ring GR(p^r, n) = Z_{p^r}[x] / (h), with h the Teichmüller lift of the
//! lexicographically smallest monic irreducible factor of x^{p^n-1} - 1 over F_p.

use serde::{Deserialize, Serialize};

use super::modulus::{is_prime, rem};
use crate::error::{Error, Result};

/// Element of a Galois ring in the power basis `1, ξ, ..., ξ^{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElement {
    pub coeffs: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisRing {
    p: u64,
    r: u32,
    n: usize,
    modulus: u64,
    /// Monic defining polynomial, low degree first, length n + 1.
    h: Vec<u64>,
    /// Frobenius images ξ^{p·i} for i < n, cached in the power basis.
    frob_images: Vec<RingElement>,
}

// Polynomial helpers over Z_m, low degree first.

fn poly_mul_mod(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % m as u128) as u64;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `h`.
fn poly_rem_monic(a: &[u64], h: &[u64], m: u64) -> Vec<u64> {
    let n = h.len() - 1;
    let mut a = a.to_vec();
    while a.len() > n {
        let lead = a.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = a.len() - n;
        for (k, &hk) in h[..n].iter().enumerate() {
            let sub = (lead as u128 * hk as u128 % m as u128) as u64;
            a[shift + k] = (a[shift + k] + m - sub) % m;
        }
    }
    a.resize(n, 0);
    a
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` by a (not necessarily monic) polynomial `b` over the field F_p.
fn poly_rem_field(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut a = trim(a.to_vec());
    let lead_inv = super::modulus::mod_inv(*b.last().unwrap(), p).unwrap();
    while a.len() >= b.len() {
        let coef = a.last().unwrap() * lead_inv % p;
        let shift = a.len() - b.len();
        for (k, &bk) in b.iter().enumerate() {
            a[shift + k] = (a[shift + k] + p - coef * bk % p) % p;
        }
        a = trim(a);
    }
    a
}

fn is_irreducible_over_fp(h: &[u64], p: u64) -> bool {
    let n = h.len() - 1;
    // Trial division by every monic polynomial of degree 1..=n/2.
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                g.push(t % p);
                t /= p;
            }
            g.push(1);
            if poly_rem_field(h, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible polynomials of degree n over F_p in lexicographic order of the
/// coefficient tuple read from x^{n-1} down to x^0.
fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    let count = p.pow(n as u32);
    for idx in 0..count {
        // h_0 is the least significant digit of idx.
        let mut h = vec![0u64; n + 1];
        let mut t = idx;
        for k in 0..n {
            h[k] = t % p;
            t /= p;
        }
        h[n] = 1;
        // x itself never divides x^{p^n - 1} - 1.
        if h[0] == 0 {
            continue;
        }
        if is_irreducible_over_fp(&h, p) {
            return h;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

impl GaloisRing {
    pub fn new(p: u64, r: u32, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if r == 0 || n == 0 {
            return Err(Error::OutOfRange(format!("GR(p^r, n) needs r, n >= 1 (got r={r}, n={n})")));
        }
        let modulus = p.pow(r);
        let h = if n == 1 {
            vec![modulus - 1, 1]
        } else {
            let hbar = smallest_irreducible(p, n);
            teichmuller_lift(&hbar, p, r, modulus)
        };
        let mut ring = GaloisRing { p, r, n, modulus, h, frob_images: Vec::new() };
        let xi = ring.xi();
        let xi_p = ring.pow(&xi, p as u128);
        let mut images = Vec::with_capacity(n);
        let mut cur = ring.one();
        for _ in 0..n {
            images.push(cur.clone());
            cur = ring.mul_unchecked(&cur, &xi_p);
        }
        ring.frob_images = images;
        Ok(ring)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// The coefficient modulus p^r.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn defining_polynomial(&self) -> &[u64] {
        &self.h
    }

    /// Number of ring elements, p^{nr}.
    pub fn size(&self) -> u64 {
        self.modulus.pow(self.n as u32)
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coeffs: vec![0; self.n] }
    }

    pub fn one(&self) -> RingElement {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u64) -> RingElement {
        let mut coeffs = vec![0; self.n];
        coeffs[0] = c % self.modulus;
        RingElement { coeffs }
    }

    /// The generator ξ (for n = 1 this is the root 1 of x - 1).
    pub fn xi(&self) -> RingElement {
        if self.n == 1 {
            self.one()
        } else {
            let mut coeffs = vec![0; self.n];
            coeffs[1] = 1;
            RingElement { coeffs }
        }
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<RingElement> {
        let x = RingElement { coeffs };
        self.check(&x)?;
        Ok(x)
    }

    /// Element with index `idx` in lexicographic order (coefficient 0 most significant).
    pub fn element_from_index(&self, mut idx: u64) -> RingElement {
        let mut coeffs = vec![0; self.n];
        for k in (0..self.n).rev() {
            coeffs[k] = idx % self.modulus;
            idx /= self.modulus;
        }
        RingElement { coeffs }
    }

    /// All elements in lexicographic order of the coefficient vector.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.size()).map(move |i| self.element_from_index(i))
    }

    fn check(&self, x: &RingElement) -> Result<()> {
        if x.coeffs.len() != self.n || x.coeffs.iter().any(|&c| c >= self.modulus) {
            Err(Error::RingMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub fn neg(&self, x: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        Ok(self.neg_unchecked(x))
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, &self.neg_unchecked(y)))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn add_unchecked(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let m = self.modulus;
        RingElement { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| (a + b) % m).collect() }
    }

    pub(crate) fn neg_unchecked(&self, x: &RingElement) -> RingElement {
        let m = self.modulus;
        RingElement { coeffs: x.coeffs.iter().map(|&a| (m - a) % m).collect() }
    }

    pub(crate) fn mul_unchecked(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let prod = poly_mul_mod(&x.coeffs, &y.coeffs, self.modulus);
        RingElement { coeffs: poly_rem_monic(&prod, &self.h, self.modulus) }
    }

    pub fn scale(&self, c: u64, x: &RingElement) -> RingElement {
        let m = self.modulus as u128;
        RingElement { coeffs: x.coeffs.iter().map(|&a| ((c as u128 % m) * a as u128 % m) as u64).collect() }
    }

    pub fn pow(&self, x: &RingElement, mut e: u128) -> RingElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `x ∉ pR`.
    pub fn is_unit(&self, x: &RingElement) -> bool {
        x.coeffs.iter().any(|&c| c % self.p != 0)
    }

    pub fn inverse(&self, x: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        if !self.is_unit(x) {
            return Err(Error::NotAUnit);
        }
        // |R^*| = p^{nr} - p^{n(r-1)}
        let units = self.size() as u128 - (self.size() / self.p.pow(self.n as u32)) as u128;
        Ok(self.pow(x, units - 1))
    }

    /// Frobenius automorphism fixing Z_{p^r} and sending ξ to ξ^p.
    pub fn frobenius(&self, x: &RingElement) -> RingElement {
        let mut out = self.zero();
        for (c, img) in x.coeffs.iter().zip(&self.frob_images) {
            if *c != 0 {
                out = self.add_unchecked(&out, &self.scale(*c, img));
            }
        }
        out
    }

    /// Ring trace Σ_{i<n} σ^i(x), an element of Z_{p^r}.
    pub fn trace(&self, x: &RingElement) -> u64 {
        let mut acc = x.clone();
        let mut cur = x.clone();
        for _ in 1..self.n {
            cur = self.frobenius(&cur);
            acc = self.add_unchecked(&acc, &cur);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace must land in Z_(p^r)");
        acc.coeffs[0]
    }

    /// Power basis 1, ξ, ..., ξ^{n-1}.
    pub fn power_basis(&self) -> Vec<RingElement> {
        (0..self.n)
            .map(|i| {
                let mut coeffs = vec![0; self.n];
                coeffs[i] = 1;
                RingElement { coeffs }
            })
            .collect()
    }

    /// Trace-dual basis: `Tr(e_i e*_j) = δ_ij`.
    pub fn dual_basis(&self, basis: &[RingElement]) -> Result<Vec<RingElement>> {
        if basis.len() != self.n {
            return Err(Error::NotABasis);
        }
        for b in basis {
            self.check(b)?;
        }
        let m = self.modulus;
        let gram: Vec<Vec<u64>> = basis
            .iter()
            .map(|ei| basis.iter().map(|ej| self.trace(&self.mul_unchecked(ei, ej))).collect())
            .collect();
        let inv = invert_mod_prime_power(&gram, self.p, m).ok_or(Error::NotABasis)?;
        // e*_j = Σ_k inv[k][j] e_k
        Ok((0..self.n)
            .map(|j| {
                basis.iter().enumerate().fold(self.zero(), |acc, (k, ek)| {
                    self.add_unchecked(&acc, &self.scale(inv[k][j], ek))
                })
            })
            .collect())
    }
}

/// Teichmüller lift of the irreducible `hbar` to Z_{p^r}: take the naive lift, raise its
/// root to the p^{n(r-1)} power to reach the Teichmüller element τ, and return
/// ∏_i (x - τ^{p^i}).
fn teichmuller_lift(hbar: &[u64], p: u64, r: u32, modulus: u64) -> Vec<u64> {
    let n = hbar.len() - 1;
    if r == 1 {
        return hbar.to_vec();
    }
    let naive = GaloisRing {
        p,
        r,
        n,
        modulus,
        h: hbar.to_vec(),
        frob_images: Vec::new(),
    };
    let xi = naive.xi();
    let exp = (p as u128).pow((n as u32) * (r - 1));
    let tau = naive.pow(&xi, exp);
    // Polynomial in x with coefficients in the naive ring, low degree first.
    let mut poly: Vec<RingElement> = vec![naive.one()];
    let mut conj = tau;
    for _ in 0..n {
        // poly *= (x - conj)
        let mut next = vec![naive.zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = naive.add_unchecked(&next[k + 1], c);
            let t = naive.mul_unchecked(c, &conj);
            next[k] = naive.add_unchecked(&next[k], &naive.neg_unchecked(&t));
        }
        poly = next;
        conj = naive.pow(&conj, p as u128);
    }
    poly.iter()
        .map(|c| {
            debug_assert!(c.coeffs[1..].iter().all(|&v| v == 0));
            c.coeffs[0]
        })
        .collect()
}

/// Inverse of a square matrix over Z_{p^r} (local ring: pivots must be non-multiples of p).
pub(crate) fn invert_mod_prime_power(a: &[Vec<u64>], p: u64, m: u64) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(|&v| v % m).collect();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| aug[i][col] % p != 0)?;
        aug.swap(col, piv);
        let inv = super::modulus::mod_inv(aug[col][col], m)?;
        for v in aug[col].iter_mut() {
            *v = ((*v as u128 * inv as u128) % m as u128) as u64;
        }
        for i in 0..n {
            if i != col && aug[i][col] != 0 {
                let f = aug[i][col];
                for j in 0..2 * n {
                    let sub = (f as u128 * aug[col][j] as u128 % m as u128) as u64;
                    aug[i][j] = rem(aug[i][j] as i64 - sub as i64, m);
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
