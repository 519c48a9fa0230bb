use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{is_prime, ArithError};
use crate::model::Factorization;

/// Effort limits for [`factorize_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorConfig {
    /// Trial division covers every candidate divisor up to this bound.
    pub trial_limit: u64,
    /// Total Pollard-rho iterations allowed across the whole factorization.
    pub rho_budget: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_limit: 1_000_000,
            rho_budget: 20_000_000,
        }
    }
}

/// Factorizes `n` with the default effort limits.
pub fn factorize(n: &BigUint) -> Result<Factorization, ArithError> {
    factorize_with(n, &FactorConfig::default())
}

/// Trial division up to `config.trial_limit`, then Pollard rho with Brent's
/// cycle detection on whatever cofactor is left. Rho is seeded
/// deterministically, so repeated runs take identical paths.
pub fn factorize_with(n: &BigUint, config: &FactorConfig) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let mut found: Vec<(BigUint, u32)> = Vec::new();
    let cofactor = match n.to_u64() {
        Some(small) => {
            let (pairs, rest) = trial_divide_u64(small, config.trial_limit);
            found.extend(pairs.into_iter().map(|(p, e)| (BigUint::from(p), e)));
            rest.map(BigUint::from)
        }
        None => {
            let (pairs, rest) = trial_divide_big(n, config.trial_limit);
            found.extend(pairs.into_iter().map(|(p, e)| (BigUint::from(p), e)));
            rest
        }
    };

    if let Some(rest) = cofactor {
        let mut budget = Budget {
            left: config.rho_budget,
            total: config.rho_budget,
        };
        let mut primes = Vec::new();
        split_fully(rest, &mut budget, &mut primes)?;
        primes.sort();
        for p in primes {
            match found.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => found.push((p, 1)),
            }
        }
    }
    Ok(Factorization::from_sorted_unchecked(found))
}

/// Returns the small prime powers and the cofactor still to split, if any.
/// A cofactor below `limit^2` whose divisors up to `limit` were all tried is
/// prime and is returned as a factor directly.
fn trial_divide_u64(mut n: u64, limit: u64) -> (Vec<(u64, u32)>, Option<u64>) {
    let mut pairs = Vec::new();
    let mut d = 2u64;
    while d <= limit && d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            pairs.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n == 1 {
        return (pairs, None);
    }
    if d.saturating_mul(d) > n {
        pairs.push((n, 1));
        return (pairs, None);
    }
    (pairs, Some(n))
}

fn trial_divide_big(n: &BigUint, limit: u64) -> (Vec<(u64, u32)>, Option<BigUint>) {
    let mut n = n.clone();
    let mut pairs = Vec::new();
    let mut d = 2u64;
    while d <= limit {
        if (&n % d).is_zero() {
            let mut e = 0;
            while (&n % d).is_zero() {
                n /= d;
                e += 1;
            }
            pairs.push((d, e));
            if let Some(small) = n.to_u64() {
                let (more, rest) = trial_divide_u64(small, limit);
                pairs.extend(more.into_iter().filter(|&(p, _)| p != d));
                return (pairs, rest.map(BigUint::from));
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        (pairs, None)
    } else {
        (pairs, Some(n))
    }
}

struct Budget {
    left: u64,
    total: u64,
}

impl Budget {
    fn spend(&mut self, steps: u64) -> Result<(), ArithError> {
        if steps > self.left {
            self.left = 0;
            return Err(ArithError::BudgetExceeded { budget: self.total });
        }
        self.left -= steps;
        Ok(())
    }
}

fn split_fully(n: BigUint, budget: &mut Budget, out: &mut Vec<BigUint>) -> Result<(), ArithError> {
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            out.push(m);
            continue;
        }
        if let Some(r) = perfect_square_root(&m) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let f = pollard_brent(&m, budget)?;
        stack.push(&m / &f);
        stack.push(f);
    }
    Ok(())
}

fn perfect_square_root(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Finds a non-trivial factor of the odd composite `n`.
fn pollard_brent(n: &BigUint, budget: &mut Budget) -> Result<BigUint, ArithError> {
    const BATCH: u64 = 128;
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |y: &BigUint| (y * y + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut r: u64 = 1;

        while g == one {
            x = y.clone();
            budget.spend(r)?;
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                budget.spend(steps)?;
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }

        if g == *n {
            // the batch overshot; replay it one step at a time
            loop {
                budget.spend(1)?;
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != *n {
            return Ok(g);
        }
        c += 1u32;
    }
}
