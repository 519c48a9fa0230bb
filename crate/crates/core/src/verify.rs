//! Goodness and completeness checks.
//!
//! Nothing in here calls into [`crate::construct`]; a certificate produced by
//! the constructor is judged by this code alone. Overlap is decided directly
//! from the gcd of the moduli rather than through [`crate::arith::crt_combine`].

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arith::{self, ArithError, FactorConfig};
use crate::model::{
    divisors_gt1, CompletenessReport, Congruence, CongruenceAssignment, Factorization,
    GoodnessReport, VerificationReport, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("modulus {0} appears more than once")]
    DuplicateModulus(BigUint),
    #[error(transparent)]
    Factor(#[from] ArithError),
}

/// True iff some integer lies in both classes, i.e. the residues agree modulo
/// `gcd(m1, m2)`.
pub fn overlaps(c1: &Congruence, c2: &Congruence) -> bool {
    if let (Some(m1), Some(m2), Some(r1), Some(r2)) = (
        c1.modulus.to_u64(),
        c2.modulus.to_u64(),
        c1.residue.to_u64(),
        c2.residue.to_u64(),
    ) {
        let g = arith::gcd_u64(m1, m2);
        return r1 % g == r2 % g;
    }
    let g = c1.modulus.gcd(&c2.modulus);
    &c1.residue % &g == &c2.residue % &g
}

/// The gcd of the moduli when it exceeds 1 and the classes overlap.
fn shared_overlap(a: &Congruence, b: &Congruence) -> Option<BigUint> {
    if let (Some(m1), Some(m2), Some(r1), Some(r2)) = (
        a.modulus.to_u64(),
        b.modulus.to_u64(),
        a.residue.to_u64(),
        b.residue.to_u64(),
    ) {
        let g = arith::gcd_u64(m1, m2);
        return (g > 1 && r1 % g == r2 % g).then(|| BigUint::from(g));
    }
    let g = a.modulus.gcd(&b.modulus);
    (g > BigUint::from(1u32) && &a.residue % &g == &b.residue % &g).then_some(g)
}

/// Scans every pair: the set is good iff no two congruences with
/// non-coprime moduli overlap. Violations come out with `d1 < d2`, sorted.
pub fn check_good(entries: &[Congruence]) -> Result<GoodnessReport, VerifyError> {
    let mut seen = BTreeSet::new();
    for c in entries {
        if !seen.insert(&c.modulus) {
            return Err(VerifyError::DuplicateModulus(c.modulus.clone()));
        }
    }
    let mut violations = Vec::new();
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            if let Some(g) = shared_overlap(a, b) {
                let (d1, d2) = if a.modulus < b.modulus {
                    (a.modulus.clone(), b.modulus.clone())
                } else {
                    (b.modulus.clone(), a.modulus.clone())
                };
                violations.push(Violation { d1, d2, gcd: g });
            }
        }
    }
    violations.sort();
    Ok(GoodnessReport { violations })
}

/// Compares a set of moduli with the divisors of `n` that exceed 1.
pub fn check_complete_moduli<'a, I>(f: &Factorization, moduli: I) -> CompletenessReport
where
    I: IntoIterator<Item = &'a BigUint>,
{
    let expected: BTreeSet<BigUint> = divisors_gt1(f).into_iter().collect();
    let present: BTreeSet<&BigUint> = moduli.into_iter().collect();
    CompletenessReport {
        missing_divisors: expected
            .iter()
            .filter(|d| !present.contains(d))
            .cloned()
            .collect(),
        extraneous_moduli: present
            .iter()
            .filter(|m| !expected.contains(**m))
            .map(|m| (*m).clone())
            .collect(),
    }
}

/// Completeness of an assignment against its own `n`.
pub fn check_complete(a: &CongruenceAssignment) -> Result<CompletenessReport, VerifyError> {
    let f = arith::factorize(a.n())?;
    Ok(check_complete_moduli(&f, a.moduli()))
}

/// Goodness and completeness together.
pub fn verify_certificate(a: &CongruenceAssignment) -> Result<VerificationReport, VerifyError> {
    let goodness = check_good(&a.congruences())?;
    let completeness = check_complete(a)?;
    Ok(VerificationReport::from_parts(goodness, completeness))
}

/// Verifies a free-form list of congruences against `n`. Unlike
/// [`verify_certificate`] the list may contain moduli that do not divide `n`;
/// they are reported as extraneous.
pub fn verify_set(
    n: &BigUint,
    entries: &[Congruence],
    config: &FactorConfig,
) -> Result<VerificationReport, VerifyError> {
    let goodness = check_good(entries)?;
    let f = arith::factorize_with(n, config)?;
    let completeness = check_complete_moduli(&f, entries.iter().map(|c| &c.modulus));
    Ok(VerificationReport::from_parts(goodness, completeness))
}
