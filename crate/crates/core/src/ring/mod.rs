//! Modular arithmetic, CRT splitting, Galois rings and linear algebra over Z_q.

mod galois;
mod modulus;
pub mod zq;

pub use galois::{GaloisRing, RingElement};
pub use modulus::{ext_gcd, factorize, gcd, is_prime, lcm, mod_inv, rem, Modulus};
