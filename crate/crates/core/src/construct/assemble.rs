//! Assembly of a full good set for `t >= 3` primes out of blocks, one block
//! per set of primes used by the moduli.
//!
//! Case 1 (`α₁ >= 2`, `t <= p₁ - 1`):
//! * pair `(i, j)`: `a = j + 2(i-1)`, `{b, c, d} = {3i-1, 3i, 3i+1}`;
//! * block `(i₁ < … < iₛ)`: `i_s + 2(i₁-1)` mod `p_{i₁}` and
//!   `{3i_{k-1}-1, 3i_{k-1}, 3i_{k-1}+1}` mod `p_{i_k}`.
//!
//! Case 2 (`α₁ = 1`, `t <= p₁`):
//! * pair `(1, k)`: `k-1` mod `p₁`, `p_k^(β-1) + 2` mod `p_k^β`;
//! * pair `(i, j)`, `i >= 2`: `a = j + 2i - 3`, `{b, c, d} = {3i-2, 3i-1, 3i}`;
//! * block `(i₁ < … < iₛ)`: `i_s + 2i₁ - 3` mod `p_{i₁}`, `{2, 3}` mod `p_{i₂}`
//!   when `i₁ = 1`, otherwise `{3i_{k-1}-2, 3i_{k-1}-1, 3i_{k-1}}` mod `p_{i_k}`.
//!
//! Indices are 1-based prime positions throughout.

use num_bigint::BigUint;

use super::families::{
    build_multi_prime_block, prime_power_chain, BlockRestriction, TwoPrimeParams,
};
use super::{ConstructError, Fault, Recipe};
use crate::arith::crt_combine;
use crate::model::{Congruence, CongruenceAssignment, Factorization};

/// Which primes a block's moduli are built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    /// Prime-power moduli.
    Singles,
    /// Moduli `p_i^β p_j^γ`.
    Pair(usize, usize),
    /// Moduli over three or more primes, listed by position.
    Multi(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub congruences: Vec<Congruence>,
}

/// Blocks of the Case 1 construction for `f` (exponents already lifted).
pub fn case1_blocks(f: &Factorization) -> Result<Vec<Block>, ConstructError> {
    Recipe::faithful().case1_blocks(f)
}

/// Blocks of the Case 2 construction for `f` (exponents already lifted).
pub fn case2_blocks(f: &Factorization) -> Result<Vec<Block>, ConstructError> {
    Recipe::faithful().case2_blocks(f)
}

/// Case 1: `t >= 3`, every exponent at least 2, `t <= p₁ - 1`.
pub fn assemble_case1(f: &Factorization) -> Result<CongruenceAssignment, ConstructError> {
    union(f, case1_blocks(f)?)
}

/// Case 2: `t >= 3`, `α₁ = 1`, the other exponents at least 2, `t <= p₁`.
pub fn assemble_case2(f: &Factorization) -> Result<CongruenceAssignment, ConstructError> {
    union(f, case2_blocks(f)?)
}

pub(crate) fn union(
    f: &Factorization,
    blocks: Vec<Block>,
) -> Result<CongruenceAssignment, ConstructError> {
    let members = blocks.into_iter().flat_map(|b| b.congruences);
    Ok(CongruenceAssignment::from_congruences(f.value(), members)?)
}

/// All `s`-subsets of `1..=t`, lexicographic.
fn subsets(t: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, t: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..=t {
            if t - i + 1 < s - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, t, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, t, s, &mut Vec::with_capacity(s), &mut out);
    out
}

fn residues(values: &[u64]) -> Vec<BigUint> {
    values.iter().map(|&v| BigUint::from(v)).collect()
}

fn triple(center: u64) -> Vec<BigUint> {
    residues(&[center - 1, center, center + 1])
}

struct Layout {
    primes: Vec<BigUint>,
    alphas: Vec<u32>,
}

impl Layout {
    fn of(f: &Factorization) -> Self {
        Layout {
            primes: f.primes().cloned().collect(),
            alphas: f.exponents().collect(),
        }
    }

    fn t(&self) -> usize {
        self.primes.len()
    }

    fn p(&self, i: usize) -> &BigUint {
        &self.primes[i - 1]
    }

    fn alpha(&self, i: usize) -> u32 {
        self.alphas[i - 1]
    }
}

impl Recipe {
    pub(crate) fn case1_blocks(&self, f: &Factorization) -> Result<Vec<Block>, ConstructError> {
        let l = Layout::of(f);
        let t = l.t();
        if t < 3 {
            return Err(precondition(format!("Case 1 needs t >= 3, got t = {t}")));
        }
        if l.alphas.iter().any(|&a| a < 2) {
            return Err(precondition("Case 1 needs every exponent >= 2".into()));
        }
        if BigUint::from(t) >= *l.p(1) {
            return Err(precondition(format!(
                "Case 1 needs t <= p1 - 1, got t = {t}, p1 = {}",
                l.p(1)
            )));
        }

        let mut blocks = vec![Block {
            kind: BlockKind::Singles,
            congruences: (1..=t)
                .flat_map(|i| prime_power_chain(l.p(i), l.alpha(i)))
                .collect(),
        }];

        for i in 1..=t {
            for j in i + 1..=t {
                let (iu, ju) = (i as u64, j as u64);
                let params =
                    TwoPrimeParams::from_u64(ju + 2 * (iu - 1), 3 * iu - 1, 3 * iu, 3 * iu + 1);
                blocks.push(Block {
                    kind: BlockKind::Pair(i, j),
                    congruences: self.two_prime_block(
                        l.p(i),
                        l.p(j),
                        l.alpha(i),
                        l.alpha(j),
                        &params,
                    )?,
                });
            }
        }

        for s in 3..=t {
            for idx in subsets(t, s) {
                let first = (idx[s - 1] + 2 * (idx[0] - 1)) as u64;
                let mut allowed = vec![residues(&[first])];
                for k in 1..s {
                    allowed.push(triple(3 * idx[k - 1] as u64));
                }
                blocks.push(self.multi_block(&l, idx, allowed)?);
            }
        }
        Ok(blocks)
    }

    pub(crate) fn case2_blocks(&self, f: &Factorization) -> Result<Vec<Block>, ConstructError> {
        let l = Layout::of(f);
        let t = l.t();
        if t < 3 {
            return Err(precondition(format!("Case 2 needs t >= 3, got t = {t}")));
        }
        if l.alpha(1) != 1 {
            return Err(precondition(
                "Case 2 needs the smallest prime to exponent 1".into(),
            ));
        }
        if l.alphas[1..].iter().any(|&a| a < 2) {
            return Err(precondition(
                "Case 2 needs exponents >= 2 above the smallest prime".into(),
            ));
        }
        if BigUint::from(t) > *l.p(1) {
            return Err(precondition(format!(
                "Case 2 needs t <= p1, got t = {t}, p1 = {}",
                l.p(1)
            )));
        }

        let p1 = l.p(1);
        let mut singles = vec![Congruence::new(BigUint::from(0u32), p1.clone())?];
        for i in 2..=t {
            singles.extend(prime_power_chain(l.p(i), l.alpha(i)));
        }
        let mut blocks = vec![Block {
            kind: BlockKind::Singles,
            congruences: singles,
        }];

        for k in 2..=t {
            let on_p1 = if self.fault == Some(Fault::Case2SharedResidue) {
                1
            } else {
                k as u64 - 1
            };
            let on_p1 = Congruence::new(BigUint::from(on_p1), p1.clone())?;
            let pk = l.p(k);
            let mut members = Vec::with_capacity(l.alpha(k) as usize);
            for beta in 1..=l.alpha(k) {
                let m = pk.pow(beta);
                let part = Congruence::new(pk.pow(beta - 1) + 2u32, m)?;
                members.push(crt_combine(&on_p1, &part).expect("coprime moduli"));
            }
            blocks.push(Block {
                kind: BlockKind::Pair(1, k),
                congruences: members,
            });
        }

        for i in 2..=t {
            for j in i + 1..=t {
                let (iu, ju) = (i as u64, j as u64);
                let params =
                    TwoPrimeParams::from_u64(ju + 2 * iu - 3, 3 * iu - 2, 3 * iu - 1, 3 * iu);
                blocks.push(Block {
                    kind: BlockKind::Pair(i, j),
                    congruences: self.two_prime_block(
                        l.p(i),
                        l.p(j),
                        l.alpha(i),
                        l.alpha(j),
                        &params,
                    )?,
                });
            }
        }

        for s in 3..=t {
            for idx in subsets(t, s) {
                let first = (idx[s - 1] + 2 * idx[0] - 3) as u64;
                let mut allowed = vec![residues(&[first])];
                for k in 1..s {
                    if k == 1 && idx[0] == 1 {
                        allowed.push(residues(&[2, 3]));
                    } else {
                        allowed.push(triple(3 * idx[k - 1] as u64 - 1));
                    }
                }
                blocks.push(self.multi_block(&l, idx, allowed)?);
            }
        }
        Ok(blocks)
    }

    fn multi_block(
        &self,
        l: &Layout,
        idx: Vec<usize>,
        allowed: Vec<Vec<BigUint>>,
    ) -> Result<Block, ConstructError> {
        let primes: Vec<BigUint> = idx.iter().map(|&i| l.p(i).clone()).collect();
        let alphas: Vec<u32> = idx.iter().map(|&i| l.alpha(i)).collect();
        let needed = 1usize << alphas.iter().filter(|&&a| a >= 2).count();
        let pool = if self.fault == Some(Fault::IgnoredRestrictions) {
            (0..needed as u64).map(BigUint::from).collect()
        } else {
            BlockRestriction::new(allowed).select(&primes, needed)?
        };
        Ok(Block {
            kind: BlockKind::Multi(idx),
            congruences: build_multi_prime_block(&primes, &alphas, &pool)?,
        })
    }
}

fn precondition(msg: String) -> ConstructError {
    ConstructError::PreconditionViolated(msg)
}
