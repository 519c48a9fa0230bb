use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::pow_mod_u64;

/// Bases that make strong-probable-prime testing exact below 3.3 * 10^24,
/// which covers all of `u64`.
const FIXED_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Extra random rounds above 2^64. Each round lets a composite through with
/// probability at most 1/4, so 64 rounds bound the error by 2^-128.
const RANDOM_ROUNDS: usize = 64;

/// Primality test.
///
/// Exact for every `n < 2^64`. Larger inputs get the fixed witnesses plus
/// [`RANDOM_ROUNDS`] Miller-Rabin rounds with bases drawn from a fixed-seed
/// ChaCha stream, so the answer is reproducible but only probabilistic
/// (error below 2^-128).
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => is_prime_big(n),
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &FIXED_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (d, s) = split_odd_u64(n - 1);
    FIXED_WITNESSES
        .iter()
        .all(|&a| strong_probable_prime_u64(n, a, d, s))
}

fn split_odd_u64(mut d: u64) -> (u64, u32) {
    let s = d.trailing_zeros();
    d >>= s;
    (d, s)
}

fn strong_probable_prime_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = ((x as u128 * x as u128) % n as u128) as u64;
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn is_prime_big(n: &BigUint) -> bool {
    for &p in &FIXED_WITNESSES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one
        .trailing_zeros()
        .expect("n - 1 is non-zero above 2^64");
    let d = &n_minus_one >> s;

    let spp = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                return true;
            }
        }
        false
    };

    if !FIXED_WITNESSES.iter().all(|&a| spp(&BigUint::from(a))) {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e69_6365);
    let two = BigUint::from(2u32);
    (0..RANDOM_ROUNDS).all(|_| spp(&rng.gen_biguint_range(&two, &n_minus_one)))
}
