//! Explicit good sets of congruences for every nice integer.
//!
//! [`construct_good_set`] dispatches on the factorization of `n`:
//!
//! | shape                          | builder                      |
//! |--------------------------------|------------------------------|
//! | `n = 1`                        | empty assignment             |
//! | `p^k`                          | [`build_prime_power`]        |
//! | `p1 p2^k`                      | [`build_p1_p2k`]             |
//! | `p1^a p2^b`, `a >= 2`          | [`build_two_prime_full`]     |
//! | `t >= 3`, `α₁ >= 2`            | [`assemble_case1`]           |
//! | `t >= 3`, `α₁ = 1`             | [`assemble_case2`]           |
//!
//! The last three run on `n̂`, the integer with every exponent that must be
//! at least 2 raised to 2, and the result is cut back to the divisors of `n`
//! with [`restrict_to_divisors`]. A subset of a good set is good, so nothing
//! is lost.

mod assemble;
mod families;

pub use assemble::{assemble_case1, assemble_case2, case1_blocks, case2_blocks, Block, BlockKind};
pub use families::{
    build_multi_prime_block, build_p1_p2k, build_prime_power, build_two_prime_block,
    build_two_prime_full, BlockRestriction, IndexFunctions, TwoPrimeParams,
};

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

use crate::arith::{self, ArithError};
use crate::model::{CongruenceAssignment, Factorization, ModelError, NicenessVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("n is {0}")]
    NotNice(NicenessVerdict),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("need {needed} distinct base residues, only {available} available")]
    InsufficientResidues { needed: usize, available: usize },
    #[error("base residues repeat modulo the product of the primes")]
    NonDistinctResidues,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("{n} does not divide {of}")]
    NotADivisor { n: BigUint, of: BigUint },
    #[error(transparent)]
    Factor(#[from] ArithError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Deliberate construction defects, used to check that verification catches
/// broken certificates. Not part of the supported API.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// The two-prime base entry `p1 p2` takes `c` modulo `p2` instead of `b`,
    /// colliding with the `p1^i p2` row.
    SwappedBC,
    /// The `i >= 3` branch of the `p1` component is dropped, so every
    /// `i >= 2` uses `a + p1`.
    DroppedP1Branch,
    /// The `j >= 3` branch of the `p2` component (no higher `p1` power) is
    /// dropped, so every `j >= 2` uses `d + p2`.
    DroppedP2Branch,
    /// Case 2 pairs `(1, k)` all take residue 1 modulo `p1`.
    Case2SharedResidue,
    /// Multi-prime blocks take `0, 1, …` as base residues, ignoring the
    /// per-prime restrictions.
    IgnoredRestrictions,
}

impl Fault {
    pub const ALL: [Fault; 5] = [
        Fault::SwappedBC,
        Fault::DroppedP1Branch,
        Fault::DroppedP2Branch,
        Fault::Case2SharedResidue,
        Fault::IgnoredRestrictions,
    ];
}

/// Construction settings threaded through the builders.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Recipe {
    pub(crate) fault: Option<Fault>,
}

impl Recipe {
    pub(crate) fn faithful() -> Self {
        Recipe { fault: None }
    }
}

/// With `p` the smallest prime of `n`, `n` is nice iff `ω(n/p) < p`.
pub fn niceness_condition(f: &Factorization) -> Result<NicenessVerdict, ConstructError> {
    let (p, alpha) = f.pairs().first().ok_or_else(|| {
        ConstructError::PreconditionViolated("niceness is decided for n >= 2".into())
    })?;
    let t = f.omega();
    let omega_rest = if *alpha >= 2 { t } else { t - 1 };
    let smallest_prime = p.clone();
    Ok(if BigUint::from(omega_rest) < *p {
        NicenessVerdict::Nice {
            smallest_prime,
            omega_rest,
        }
    } else {
        NicenessVerdict::NotNice {
            smallest_prime,
            omega_rest,
        }
    })
}

/// Good, complete assignment for a nice `n`.
pub fn construct_good_set(n: &BigUint) -> Result<CongruenceAssignment, ConstructError> {
    let f = arith::factorize(n)?;
    construct_for_factorization(&f)
}

/// As [`construct_good_set`], for an already factorized `n`.
pub fn construct_for_factorization(
    f: &Factorization,
) -> Result<CongruenceAssignment, ConstructError> {
    Recipe::faithful().construct(f)
}

#[doc(hidden)]
pub fn construct_with_fault(
    n: &BigUint,
    fault: Fault,
) -> Result<CongruenceAssignment, ConstructError> {
    let f = arith::factorize(n)?;
    Recipe { fault: Some(fault) }.construct(&f)
}

/// Keeps the entries of `full` whose modulus divides `n`.
pub fn restrict_to_divisors(
    full: &CongruenceAssignment,
    n: &BigUint,
) -> Result<CongruenceAssignment, ConstructError> {
    if n == &BigUint::from(0u32) || !full.n().is_multiple_of(n) {
        return Err(ConstructError::NotADivisor {
            n: n.clone(),
            of: full.n().clone(),
        });
    }
    Ok(full.filtered(n.clone(), |m| n.is_multiple_of(m)))
}

/// Raises exponents to at least 2, leaving the smallest prime alone when its
/// exponent is 1.
fn lift(f: &Factorization, keep_first: bool) -> Factorization {
    let pairs = f
        .pairs()
        .iter()
        .enumerate()
        .map(|(k, (p, e))| {
            let e = if k == 0 && keep_first {
                *e
            } else {
                (*e).max(2)
            };
            (p.clone(), e)
        })
        .collect();
    Factorization::new(pairs).expect("lifting keeps primes ordered")
}

impl Recipe {
    fn construct(&self, f: &Factorization) -> Result<CongruenceAssignment, ConstructError> {
        if f.is_empty() {
            return Ok(CongruenceAssignment::new(BigUint::from(1u32)));
        }
        let verdict = niceness_condition(f)?;
        if !verdict.is_nice() {
            return Err(ConstructError::NotNice(verdict));
        }
        let n = f.value();
        let pairs = f.pairs();
        let (p1, a1) = (&pairs[0].0, pairs[0].1);

        match pairs.len() {
            1 => Ok(build_prime_power(p1, a1)),
            2 if a1 == 1 => build_p1_p2k(p1, &pairs[1].0, pairs[1].1),
            2 => {
                let lifted = lift(f, false);
                let e: Vec<u32> = lifted.exponents().collect();
                let full = self.two_prime_full(p1, &pairs[1].0, e[0], e[1])?;
                restrict_to_divisors(&full, &n)
            }
            _ => {
                let case1 = a1 >= 2;
                let lifted = lift(f, !case1);
                let blocks = if case1 {
                    self.case1_blocks(&lifted)?
                } else {
                    self.case2_blocks(&lifted)?
                };
                let full = assemble::union(&lifted, blocks)?;
                restrict_to_divisors(&full, &n)
            }
        }
    }
}
