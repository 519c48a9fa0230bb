//! Building blocks: single-prime chains, the `p1 * p2^k` family, the
//! two-prime block and the multi-prime block indexed by `e(m)` / `s(m)`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ConstructError, Fault, Recipe};
use crate::arith::{crt_combine, mod_inverse};
use crate::model::{Congruence, CongruenceAssignment};

/// Residues of the two-prime block: every member is `a` modulo `p1` and one
/// of `b`, `c`, `d` modulo `p2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPrimeParams {
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
    pub d: BigUint,
}

impl TwoPrimeParams {
    pub fn from_u64(a: u64, b: u64, c: u64, d: u64) -> Self {
        TwoPrimeParams {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }
}

/// Exponent and sub-index maps of the multi-prime block.
///
/// `e(1) = 1`, `e(m) = m - 1` otherwise; `s(1) = 0`, `s(m) = 1` otherwise.
/// Together they determine `m`: `s` says whether `m = 1`, and for `m >= 2`,
/// `e` recovers it.
#[derive(Debug, Clone, Copy, Default)]
pub struct IndexFunctions;

impl IndexFunctions {
    pub fn e(m: u32) -> u32 {
        assert!(m >= 1, "index functions are defined on positive integers");
        if m == 1 {
            1
        } else {
            m - 1
        }
    }

    pub fn s(m: u32) -> u32 {
        assert!(m >= 1, "index functions are defined on positive integers");
        u32::from(m >= 2)
    }
}

/// Allowed residues per prime position of a block. The admissible base
/// residues are the CRT images of the product of these sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRestriction {
    pub allowed: Vec<Vec<BigUint>>,
}

impl BlockRestriction {
    pub fn new(allowed: Vec<Vec<BigUint>>) -> Self {
        BlockRestriction { allowed }
    }

    /// Every residue modulo `∏ primes` meeting the restriction, ascending.
    pub fn solutions(&self, primes: &[BigUint]) -> Result<Vec<BigUint>, ConstructError> {
        if primes.len() != self.allowed.len() {
            return Err(ConstructError::PreconditionViolated(format!(
                "{} restriction sets for {} primes",
                self.allowed.len(),
                primes.len()
            )));
        }
        for (p, set) in primes.iter().zip(&self.allowed) {
            if set.is_empty() {
                return Err(ConstructError::InvalidParams(format!(
                    "empty residue set for prime {p}"
                )));
            }
            if let Some(r) = set.iter().find(|r| *r >= p) {
                return Err(ConstructError::InvalidParams(format!(
                    "residue {r} out of range for prime {p}"
                )));
            }
        }
        let mut acc = vec![Congruence {
            residue: BigUint::zero(),
            modulus: BigUint::one(),
        }];
        for (p, set) in primes.iter().zip(&self.allowed) {
            let mut next = Vec::with_capacity(acc.len() * set.len());
            for partial in &acc {
                for r in set {
                    let part = Congruence {
                        residue: r.clone(),
                        modulus: p.clone(),
                    };
                    next.push(crt_combine(partial, &part).expect("distinct primes are coprime"));
                }
            }
            acc = next;
        }
        let mut out: Vec<BigUint> = acc.into_iter().map(|c| c.residue).collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The `count` smallest solutions.
    pub fn select(&self, primes: &[BigUint], count: usize) -> Result<Vec<BigUint>, ConstructError> {
        let mut all = self.solutions(primes)?;
        if all.len() < count {
            return Err(ConstructError::InsufficientResidues {
                needed: count,
                available: all.len(),
            });
        }
        all.truncate(count);
        Ok(all)
    }
}

/// `{p^(i-1) mod p^i : 1 <= i <= k}`.
pub fn build_prime_power(p: &BigUint, k: u32) -> CongruenceAssignment {
    let n = p.pow(k);
    CongruenceAssignment::from_congruences(n, prime_power_chain(p, k))
        .expect("chain moduli are distinct divisors of p^k")
}

pub(crate) fn prime_power_chain(p: &BigUint, k: u32) -> Vec<Congruence> {
    (1..=k)
        .map(|i| Congruence {
            residue: p.pow(i - 1) % p.pow(i),
            modulus: p.pow(i),
        })
        .collect()
}

/// The `n = p1 * p2^k` family: `0 mod p1`, `p2^(i-1) + 1 mod p2^i`, and
/// `a p1 p2^(i-1) + 1 mod p1 p2^i` with `a` the least value in `[1, p2)`
/// avoiding `p1^(-1) mod p2`.
pub fn build_p1_p2k(
    p1: &BigUint,
    p2: &BigUint,
    k: u32,
) -> Result<CongruenceAssignment, ConstructError> {
    if p1 >= p2 || *p1 < BigUint::from(2u32) || k == 0 {
        return Err(ConstructError::InvalidParams(format!(
            "need primes p1 < p2 and k >= 1, got p1={p1}, p2={p2}, k={k}"
        )));
    }
    let inv = mod_inverse(p1, p2).map_err(|e| ConstructError::InvalidParams(e.to_string()))?;
    let a = if inv.is_one() {
        BigUint::from(2u32)
    } else {
        BigUint::one()
    };
    debug_assert!(a < *p2);

    let n = p1 * p2.pow(k);
    let mut out = CongruenceAssignment::new(n);
    out.insert(Congruence {
        residue: BigUint::zero(),
        modulus: p1.clone(),
    })?;
    for i in 1..=k {
        let q = p2.pow(i);
        let prev = p2.pow(i - 1);
        out.insert(Congruence::new(&prev + 1u32, q.clone())?)?;
        let m = p1 * &q;
        out.insert(Congruence::new(&a * p1 * &prev + 1u32, m)?)?;
    }
    Ok(out)
}

fn ensure_odd_prime_pair(p1: &BigUint, p2: &BigUint) -> Result<(), ConstructError> {
    if p1 >= p2 || *p1 < BigUint::from(3u32) || p1.is_even() || p2.is_even() {
        return Err(ConstructError::InvalidParams(format!(
            "need odd primes p1 < p2, got p1={p1}, p2={p2}"
        )));
    }
    Ok(())
}

/// One congruence per modulus `p1^i p2^j`, `1 <= i <= alpha1`,
/// `1 <= j <= alpha2`. The `p1` component is `a`, `a + p1` (i = 2) or
/// `a + p1^(i-1)` (i >= 3); the `p2` component is `b` on the base entry,
/// `c` on the `p1^i p2` row, and a `d`-class on the `p2^j` (j >= 2) columns
/// whose residues modulo `p2^2` are `d, d + p2` without higher `p1` powers
/// and `d + 2p2, d + 3p2` with them.
pub fn build_two_prime_block(
    p1: &BigUint,
    p2: &BigUint,
    alpha1: u32,
    alpha2: u32,
    params: &TwoPrimeParams,
) -> Result<Vec<Congruence>, ConstructError> {
    Recipe::faithful().two_prime_block(p1, p2, alpha1, alpha2, params)
}

/// Chains `{1 mod p}` plus `{p^(β-1) mod p^β}` for both primes, joined with
/// the two-prime block at `a = 2, b = 2, c = 3, d = 4`.
pub fn build_two_prime_full(
    p1: &BigUint,
    p2: &BigUint,
    alpha1: u32,
    alpha2: u32,
) -> Result<CongruenceAssignment, ConstructError> {
    Recipe::faithful().two_prime_full(p1, p2, alpha1, alpha2)
}

/// One congruence per modulus `∏ p_k^(i_k)`: residue
/// `∏ p_k^(e(i_k)) + S[idx]`, where `idx` packs the bits `s(i_k)` of the
/// coordinates with `alpha_k >= 2` (ascending prime order, lowest bit first).
/// Coordinates fixed at exponent 1 carry no index bit, so `|S| >= 2^v` with
/// `v` the number of variable coordinates is enough.
pub fn build_multi_prime_block(
    primes: &[BigUint],
    alphas: &[u32],
    pool: &[BigUint],
) -> Result<Vec<Congruence>, ConstructError> {
    if primes.len() < 2 || primes.len() != alphas.len() {
        return Err(ConstructError::PreconditionViolated(format!(
            "need at least two primes with matching exponents, got {} primes and {} exponents",
            primes.len(),
            alphas.len()
        )));
    }
    if alphas.contains(&0) {
        return Err(ConstructError::PreconditionViolated(
            "exponents must be positive".into(),
        ));
    }
    let radical: BigUint = primes.iter().product();
    let mut base: Vec<BigUint> = pool.iter().map(|r| r % &radical).collect();
    base.sort();
    if base.windows(2).any(|w| w[0] == w[1]) {
        return Err(ConstructError::NonDistinctResidues);
    }
    let variable: Vec<usize> = (0..alphas.len()).filter(|&k| alphas[k] >= 2).collect();
    let needed = 1usize << variable.len();
    if base.len() < needed {
        return Err(ConstructError::InsufficientResidues {
            needed,
            available: base.len(),
        });
    }

    let mut out = Vec::new();
    let mut exps = vec![1u32; primes.len()];
    loop {
        let mut modulus = BigUint::one();
        let mut offset = BigUint::one();
        for (p, &i) in primes.iter().zip(&exps) {
            modulus *= p.pow(i);
            offset *= p.pow(IndexFunctions::e(i));
        }
        let idx = variable.iter().enumerate().fold(0usize, |acc, (bit, &k)| {
            acc | ((IndexFunctions::s(exps[k]) as usize) << bit)
        });
        out.push(Congruence::new(offset + &base[idx], modulus)?);

        // odometer over 1..=alpha_k
        let mut k = 0;
        loop {
            if k == exps.len() {
                return Ok(out);
            }
            if exps[k] < alphas[k] {
                exps[k] += 1;
                break;
            }
            exps[k] = 1;
            k += 1;
        }
    }
}

impl Recipe {
    pub(crate) fn two_prime_block(
        &self,
        p1: &BigUint,
        p2: &BigUint,
        alpha1: u32,
        alpha2: u32,
        params: &TwoPrimeParams,
    ) -> Result<Vec<Congruence>, ConstructError> {
        ensure_odd_prime_pair(p1, p2)?;
        if alpha1 == 0 || alpha2 == 0 {
            return Err(ConstructError::InvalidParams(
                "exponents must be positive".into(),
            ));
        }
        let (b, c, d) = (&params.b % p2, &params.c % p2, &params.d % p2);
        if b == c || c == d || b == d {
            return Err(ConstructError::InvalidParams(format!(
                "b, c, d must be distinct modulo {p2}, got {}, {}, {}",
                params.b, params.c, params.d
            )));
        }
        let a = &params.a;

        let p1_part = |i: u32| -> Congruence {
            let m = p1.pow(i);
            let r = match i {
                1 => a.clone(),
                2 => a + p1,
                _ if self.fault == Some(Fault::DroppedP1Branch) => a + p1,
                _ => a + p1.pow(i - 1),
            };
            Congruence {
                residue: r % &m,
                modulus: m,
            }
        };
        let p2_part = |i: u32, j: u32| -> Congruence {
            let m = p2.pow(j);
            let r = match (i, j) {
                (1, 1) if self.fault == Some(Fault::SwappedBC) => c.clone(),
                (1, 1) => b.clone(),
                (_, 1) => c.clone(),
                (1, 2) => &d + p2,
                (1, _) if self.fault == Some(Fault::DroppedP2Branch) => &d + p2,
                (1, _) => &d + p2.pow(j - 1),
                (_, 2) => &d + 2u32 * p2,
                (_, _) => &d + 3u32 * p2 + p2.pow(j - 1),
            };
            Congruence {
                residue: r % &m,
                modulus: m,
            }
        };

        let mut out = Vec::with_capacity((alpha1 * alpha2) as usize);
        for i in 1..=alpha1 {
            for j in 1..=alpha2 {
                let joined = crt_combine(&p1_part(i), &p2_part(i, j))
                    .expect("powers of distinct primes are coprime");
                out.push(joined);
            }
        }
        Ok(out)
    }

    pub(crate) fn two_prime_full(
        &self,
        p1: &BigUint,
        p2: &BigUint,
        alpha1: u32,
        alpha2: u32,
    ) -> Result<CongruenceAssignment, ConstructError> {
        if alpha1 < 2 || alpha2 < 2 {
            return Err(ConstructError::PreconditionViolated(format!(
                "both exponents must be at least 2, got {alpha1} and {alpha2}"
            )));
        }
        let block = self.two_prime_block(
            p1,
            p2,
            alpha1,
            alpha2,
            &TwoPrimeParams::from_u64(2, 2, 3, 4),
        )?;
        let n = p1.pow(alpha1) * p2.pow(alpha2);
        let members = prime_power_chain(p1, alpha1)
            .into_iter()
            .chain(prime_power_chain(p2, alpha2))
            .chain(block);
        Ok(CongruenceAssignment::from_congruences(n, members)?)
    }
}
