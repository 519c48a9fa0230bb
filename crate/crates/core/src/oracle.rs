//! Brute-force ground truth, independent of the niceness theory.
//!
//! The search assigns residues to moduli in ascending order, trying residues
//! in ascending order, and prunes with the pairwise goodness constraint. A
//! search that runs out of budget says so; it never reports `Unsatisfiable`
//! without exhausting the tree.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arith::{self, gcd_u64, ArithError};
use crate::model::{divisors_gt1, Congruence};

/// Node budget used when none is given.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Largest number of residue cells a covering scan will materialize.
pub const DEFAULT_COVERING_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("modulus {0} is outside the searchable range 2..2^64")]
    InvalidModulus(BigUint),
    #[error("modulus {0} appears more than once")]
    DuplicateModulus(u64),
    #[error("lcm {lcm} exceeds the covering cap {cap}")]
    LcmTooLarge { lcm: BigUint, cap: u64 },
    #[error(transparent)]
    Factor(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchStatus {
    /// A good assignment, ascending by modulus.
    Found(Vec<Congruence>),
    Unsatisfiable,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub nodes_expanded: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityOutcome {
    NoGoodSetIsCovering { good_sets: u64, nodes_expanded: u64 },
    FoundCoveringGoodSet(Vec<Congruence>),
    BudgetExceeded { nodes_expanded: u64 },
}

/// Backtracking state over a fixed, sorted list of moduli.
struct Search {
    moduli: Vec<u64>,
    /// For each position, the earlier positions sharing a factor, with the gcd.
    links: Vec<Vec<(usize, u64)>>,
    budget: u64,
    nodes: u64,
}

enum Step {
    Continue,
    Stop,
}

impl Search {
    fn new(moduli: &[BigUint], budget: u64) -> Result<Self, OracleError> {
        let mut ms = Vec::with_capacity(moduli.len());
        for m in moduli {
            match m.to_u64() {
                Some(v) if v >= 2 => ms.push(v),
                _ => return Err(OracleError::InvalidModulus(m.clone())),
            }
        }
        ms.sort_unstable();
        if let Some(w) = ms.windows(2).find(|w| w[0] == w[1]) {
            return Err(OracleError::DuplicateModulus(w[0]));
        }
        let links = (0..ms.len())
            .map(|i| {
                (0..i)
                    .filter_map(|j| {
                        let g = gcd_u64(ms[i], ms[j]);
                        (g > 1).then_some((j, g))
                    })
                    .collect()
            })
            .collect();
        Ok(Search {
            moduli: ms,
            links,
            budget,
            nodes: 0,
        })
    }

    fn allowed(&self, pos: usize, r: u64, partial: &[u64]) -> bool {
        self.links[pos]
            .iter()
            .all(|&(j, g)| r % g != partial[j] % g)
    }

    /// Depth-first walk calling `leaf` on every complete good assignment.
    /// Returns false when the budget ran out.
    fn walk<F>(&mut self, mut leaf: F) -> bool
    where
        F: FnMut(&[u64], &[u64]) -> Step,
    {
        let k = self.moduli.len();
        if k == 0 {
            leaf(&self.moduli, &[]);
            return true;
        }
        let mut partial = vec![0u64; k];
        // next candidate residue per depth
        let mut next = vec![0u64; k];
        let mut depth = 0usize;
        loop {
            let m = self.moduli[depth];
            let mut placed = false;
            while next[depth] < m {
                let r = next[depth];
                next[depth] += 1;
                if self.allowed(depth, r, &partial) {
                    if self.nodes >= self.budget {
                        return false;
                    }
                    self.nodes += 1;
                    partial[depth] = r;
                    placed = true;
                    break;
                }
            }
            if placed {
                if depth + 1 == k {
                    if let Step::Stop = leaf(&self.moduli, &partial) {
                        return true;
                    }
                } else {
                    depth += 1;
                    next[depth] = 0;
                }
            } else if depth == 0 {
                return true;
            } else {
                depth -= 1;
            }
        }
    }
}

fn to_congruences(moduli: &[u64], residues: &[u64]) -> Vec<Congruence> {
    moduli
        .iter()
        .zip(residues)
        .map(|(&m, &r)| Congruence::from_u64(r, m).expect("modulus >= 2"))
        .collect()
}

/// Searches for residues making the given moduli a good set.
pub fn exists_good_assignment(
    moduli: &[BigUint],
    node_budget: u64,
) -> Result<SearchOutcome, OracleError> {
    let mut search = Search::new(moduli, node_budget)?;
    let mut found = None;
    let finished = search.walk(|ms, rs| {
        found = Some(to_congruences(ms, rs));
        Step::Stop
    });
    let status = match (found, finished) {
        (Some(set), _) => SearchStatus::Found(set),
        (None, true) => SearchStatus::Unsatisfiable,
        (None, false) => SearchStatus::BudgetExceeded,
    };
    Ok(SearchOutcome {
        status,
        nodes_expanded: search.nodes,
    })
}

/// True iff every integer lies in some class of `entries`.
pub fn is_covering(entries: &[Congruence]) -> Result<bool, OracleError> {
    is_covering_with_cap(entries, DEFAULT_COVERING_CAP)
}

/// [`is_covering`] with an explicit cap on the lcm of the moduli.
pub fn is_covering_with_cap(entries: &[Congruence], cap: u64) -> Result<bool, OracleError> {
    let mut classes = Vec::with_capacity(entries.len());
    let mut lcm = 1u64;
    for c in entries {
        let m = c
            .modulus
            .to_u64()
            .filter(|&m| m >= 1)
            .ok_or_else(|| OracleError::InvalidModulus(c.modulus.clone()))?;
        let step = m / gcd_u64(lcm, m);
        lcm = match lcm.checked_mul(step).filter(|&l| l <= cap) {
            Some(l) => l,
            None => {
                let big_lcm = entries.iter().fold(BigUint::from(1u32), |acc, c| {
                    num_integer::Integer::lcm(&acc, &c.modulus)
                });
                return Err(OracleError::LcmTooLarge { lcm: big_lcm, cap });
            }
        };
        let r = (&c.residue % &c.modulus)
            .to_u64()
            .expect("below a u64 modulus");
        classes.push((r, m));
    }
    Ok(covers(&classes, lcm))
}

fn covers(classes: &[(u64, u64)], lcm: u64) -> bool {
    let mut hit = vec![false; lcm as usize];
    for &(r, m) in classes {
        let mut x = r;
        while x < lcm {
            hit[x as usize] = true;
            x += m;
        }
    }
    hit.iter().all(|&h| h)
}

/// Enumerates every good assignment over the divisors of `n` exceeding 1 and
/// tests each for covering. `n` itself must not exceed [`DEFAULT_COVERING_CAP`].
pub fn admissibility_scan(
    n: &BigUint,
    node_budget: u64,
) -> Result<AdmissibilityOutcome, OracleError> {
    let lcm = match n.to_u64() {
        Some(v) if v <= DEFAULT_COVERING_CAP => v,
        _ => {
            return Err(OracleError::LcmTooLarge {
                lcm: n.clone(),
                cap: DEFAULT_COVERING_CAP,
            })
        }
    };
    let f = arith::factorize(n)?;
    let mut search = Search::new(&divisors_gt1(&f), node_budget)?;
    let mut good_sets = 0u64;
    let mut covering = None;
    let finished = search.walk(|ms, rs| {
        good_sets += 1;
        let classes: Vec<(u64, u64)> = rs.iter().copied().zip(ms.iter().copied()).collect();
        if !ms.is_empty() && covers(&classes, lcm) {
            covering = Some(to_congruences(ms, rs));
            return Step::Stop;
        }
        Step::Continue
    });
    Ok(match (covering, finished) {
        (Some(set), _) => AdmissibilityOutcome::FoundCoveringGoodSet(set),
        (None, true) => AdmissibilityOutcome::NoGoodSetIsCovering {
            good_sets,
            nodes_expanded: search.nodes,
        },
        (None, false) => AdmissibilityOutcome::BudgetExceeded {
            nodes_expanded: search.nodes,
        },
    })
}
