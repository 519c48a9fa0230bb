//! Exact integer primitives: gcd, modular inverse, general CRT, primality
//! and factorization. Everything works on [`BigUint`], with `u64` fast paths
//! where the hot loops need them.

mod factor;
mod primality;

pub use factor::{factorize, factorize_with, FactorConfig};
pub use primality::is_prime;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::model::Congruence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: BigUint, m: BigUint },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(BigUint),
    #[error("cannot factorize zero")]
    Zero,
    #[error("factoring budget of {budget} iterations exhausted")]
    BudgetExceeded { budget: u64 },
}

/// Greatest common divisor, with `gcd(a, 0) = a` and `gcd(0, 0) = 0`.
pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Returns `x` in `[0, m)` with `a * x ≡ 1 (mod m)`.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Result<BigUint, ArithError> {
    if *m < BigUint::from(2u32) {
        return Err(ArithError::BadModulus(m.clone()));
    }
    let ai = BigInt::from_biguint(Sign::Plus, a % m);
    let mi = BigInt::from_biguint(Sign::Plus, m.clone());
    let egcd = ai.extended_gcd(&mi);
    if !egcd.gcd.is_one() {
        return Err(ArithError::NotInvertible {
            a: a.clone(),
            m: m.clone(),
        });
    }
    Ok(egcd
        .x
        .mod_floor(&mi)
        .to_biguint()
        .expect("mod_floor by a positive modulus is non-negative"))
}

/// Intersects two residue classes. The moduli need not be coprime: the
/// classes meet iff the residues agree modulo `gcd(m1, m2)`, in which case the
/// intersection is a single class modulo `lcm(m1, m2)`.
pub fn crt_combine(c1: &Congruence, c2: &Congruence) -> Option<Congruence> {
    let (r1, m1) = (&c1.residue, &c1.modulus);
    let (r2, m2) = (&c2.residue, &c2.modulus);
    let g = m1.gcd(m2);
    let r1g = r1 % &g;
    if r1g != r2 % &g {
        return None;
    }
    let m1g = m1 / &g;
    let m2g = m2 / &g;
    let lcm = m1 * &m2g;

    // x = r1 + m1 * k, with k ≡ (r2 - r1)/g * (m1/g)^{-1} (mod m2/g)
    let k = if m2g.is_one() {
        BigUint::zero()
    } else {
        let m2g_int = BigInt::from_biguint(Sign::Plus, m2g.clone());
        let diff = BigInt::from_biguint(Sign::Plus, r2.clone()) - BigInt::from(r1.clone());
        let step = (diff / BigInt::from(g.clone())).mod_floor(&m2g_int);
        let inv = mod_inverse(&m1g, &m2g).expect("m1/g and m2/g are coprime");
        (step.to_biguint().expect("non-negative") * inv) % &m2g
    };
    let x = (r1 + m1 * k) % &lcm;
    Some(Congruence {
        residue: x,
        modulus: lcm,
    })
}

/// `base^exp mod m` on 64-bit operands.
pub(crate) fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
