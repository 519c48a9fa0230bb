//! Domain types shared by the constructor, the verifier, the oracle and the
//! command line front end.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("modulus {modulus} must exceed 1")]
    TrivialModulus { modulus: BigUint },
    #[error("modulus {modulus} does not divide {n}")]
    NotADivisor { modulus: BigUint, n: BigUint },
    #[error("modulus {0} appears more than once")]
    DuplicateModulus(BigUint),
    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),
}

/// The residue class `residue (mod modulus)`.
///
/// Values built through [`Congruence::new`] are canonical
/// (`0 <= residue < modulus`). The fields stay public so raw, possibly
/// non-canonical input can be represented and then passed through
/// [`Congruence::canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    pub residue: BigUint,
    pub modulus: BigUint,
}

impl Congruence {
    pub fn new(residue: BigUint, modulus: BigUint) -> Result<Self, ModelError> {
        Congruence { residue, modulus }.canonicalize()
    }

    pub fn from_u64(residue: u64, modulus: u64) -> Result<Self, ModelError> {
        Self::new(residue.into(), modulus.into())
    }

    pub fn canonicalize(&self) -> Result<Self, ModelError> {
        if self.modulus.is_zero() {
            return Err(ModelError::ZeroModulus);
        }
        Ok(Congruence {
            residue: &self.residue % &self.modulus,
            modulus: self.modulus.clone(),
        })
    }

    pub fn is_canonical(&self) -> bool {
        !self.modulus.is_zero() && self.residue < self.modulus
    }

    /// Does `x` lie in this class?
    pub fn contains(&self, x: &BigUint) -> bool {
        x % &self.modulus == self.residue
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// Prime factorization as `(prime, exponent)` pairs, primes strictly
/// ascending and exponents at least 1. The empty factorization is `n = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Checks ordering and exponents. Primality of the bases is the caller's
    /// responsibility.
    pub fn new(pairs: Vec<(BigUint, u32)>) -> Result<Self, ModelError> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(ModelError::InvalidFactorization(format!(
                    "primes not strictly ascending at {} and {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some((p, _)) = pairs.iter().find(|(_, e)| *e == 0) {
            return Err(ModelError::InvalidFactorization(format!(
                "zero exponent on {p}"
            )));
        }
        if let Some((p, _)) = pairs.iter().find(|(p, _)| *p < BigUint::from(2u32)) {
            return Err(ModelError::InvalidFactorization(format!(
                "base {p} below 2"
            )));
        }
        Ok(Factorization { pairs })
    }

    pub fn from_u64_pairs(pairs: &[(u64, u32)]) -> Result<Self, ModelError> {
        Self::new(pairs.iter().map(|&(p, e)| (BigUint::from(p), e)).collect())
    }

    pub(crate) fn from_sorted_unchecked(pairs: Vec<(BigUint, u32)>) -> Self {
        debug_assert!(Self::new(pairs.clone()).is_ok());
        Factorization { pairs }
    }

    pub fn pairs(&self) -> &[(BigUint, u32)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of distinct primes.
    pub fn omega(&self) -> usize {
        self.pairs.len()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.pairs.iter().map(|(p, _)| p)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairs.iter().map(|(_, e)| *e)
    }

    /// The integer this factorization represents.
    pub fn value(&self) -> BigUint {
        self.pairs
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// `∏(αᵢ + 1)`, the number of divisors including 1.
    pub fn divisor_count(&self) -> usize {
        self.pairs.iter().map(|(_, e)| *e as usize + 1).product()
    }

    pub fn divisors_gt1(&self) -> Vec<BigUint> {
        divisors_gt1(self)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        for (k, (p, e)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// All divisors of the factorized integer that exceed 1, ascending.
pub fn divisors_gt1(f: &Factorization) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in f.pairs() {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut q = d.clone();
            next.push(q.clone());
            for _ in 0..*e {
                q *= p;
                next.push(q.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs.remove(0);
    divs
}

/// One residue per divisor `d > 1` of `n`, keyed by modulus.
///
/// Keying by modulus makes "at most one congruence per modulus" structural.
/// Insertion rejects moduli that do not divide `n` or that equal 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceAssignment {
    n: BigUint,
    entries: BTreeMap<BigUint, BigUint>,
}

impl CongruenceAssignment {
    pub fn new(n: BigUint) -> Self {
        CongruenceAssignment {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_congruences<I>(n: BigUint, congruences: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = Congruence>,
    {
        let mut a = Self::new(n);
        for c in congruences {
            a.insert(c)?;
        }
        Ok(a)
    }

    pub fn insert(&mut self, c: Congruence) -> Result<(), ModelError> {
        let c = c.canonicalize()?;
        if c.modulus.is_one() {
            return Err(ModelError::TrivialModulus { modulus: c.modulus });
        }
        if !self.n.is_multiple_of(&c.modulus) {
            return Err(ModelError::NotADivisor {
                modulus: c.modulus,
                n: self.n.clone(),
            });
        }
        if self.entries.contains_key(&c.modulus) {
            return Err(ModelError::DuplicateModulus(c.modulus));
        }
        self.entries.insert(c.modulus, c.residue);
        Ok(())
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn residue(&self, modulus: &BigUint) -> Option<&BigUint> {
        self.entries.get(modulus)
    }

    pub fn moduli(&self) -> impl Iterator<Item = &BigUint> {
        self.entries.keys()
    }

    /// `(modulus, residue)` pairs in ascending modulus order.
    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, &BigUint)> {
        self.entries.iter()
    }

    /// Congruences in ascending modulus order.
    pub fn congruences(&self) -> Vec<Congruence> {
        self.entries
            .iter()
            .map(|(m, r)| Congruence {
                residue: r.clone(),
                modulus: m.clone(),
            })
            .collect()
    }

    /// Keeps only the entries whose modulus satisfies `keep`, re-keyed to `n`.
    pub(crate) fn filtered(&self, n: BigUint, keep: impl Fn(&BigUint) -> bool) -> Self {
        CongruenceAssignment {
            n,
            entries: self
                .entries
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, r)| (m.clone(), r.clone()))
                .collect(),
        }
    }
}

/// Outcome of the niceness test: `omega_rest = ω(n/p)` for the smallest
/// prime `p`, and `n` is nice exactly when `omega_rest < p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NicenessVerdict {
    Nice {
        smallest_prime: BigUint,
        omega_rest: usize,
    },
    NotNice {
        smallest_prime: BigUint,
        omega_rest: usize,
    },
}

impl NicenessVerdict {
    pub fn is_nice(&self) -> bool {
        matches!(self, NicenessVerdict::Nice { .. })
    }

    pub fn smallest_prime(&self) -> &BigUint {
        match self {
            NicenessVerdict::Nice { smallest_prime, .. }
            | NicenessVerdict::NotNice { smallest_prime, .. } => smallest_prime,
        }
    }

    pub fn omega_rest(&self) -> usize {
        match self {
            NicenessVerdict::Nice { omega_rest, .. }
            | NicenessVerdict::NotNice { omega_rest, .. } => *omega_rest,
        }
    }
}

impl fmt::Display for NicenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = if self.is_nice() { "nice" } else { "not nice" };
        write!(
            f,
            "{word} (p={}, omega={})",
            self.smallest_prime(),
            self.omega_rest()
        )
    }
}

/// Two overlapping congruences whose moduli share the factor `gcd > 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub d1: BigUint,
    pub d2: BigUint,
    pub gcd: BigUint,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, gcd {})", self.d1, self.d2, self.gcd)
    }
}

/// Goodness half of a verification.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GoodnessReport {
    pub violations: Vec<Violation>,
}

impl GoodnessReport {
    pub fn is_good(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Completeness half of a verification.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompletenessReport {
    pub missing_divisors: Vec<BigUint>,
    pub extraneous_moduli: Vec<BigUint>,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.missing_divisors.is_empty() && self.extraneous_moduli.is_empty()
    }
}

/// Combined goodness and completeness evidence.
///
/// `good` holds iff `violations` is empty; `complete` holds iff both
/// `missing_divisors` and `extraneous_moduli` are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub good: bool,
    pub complete: bool,
    pub violations: Vec<Violation>,
    pub missing_divisors: Vec<BigUint>,
    pub extraneous_moduli: Vec<BigUint>,
}

impl VerificationReport {
    pub fn from_parts(goodness: GoodnessReport, completeness: CompletenessReport) -> Self {
        VerificationReport {
            good: goodness.is_good(),
            complete: completeness.is_complete(),
            violations: goodness.violations,
            missing_divisors: completeness.missing_divisors,
            extraneous_moduli: completeness.extraneous_moduli,
        }
    }

    pub fn passed(&self) -> bool {
        self.good && self.complete
    }
}
