//! Good sets of congruences over the divisors of an integer.
//!
//! Call `n` *nice* when it admits a good set: one congruence `r_d mod d` per
//! divisor `d > 1`, such that any two classes whose moduli share a factor are
//! disjoint. This crate decides niceness from the factorization, builds an
//! explicit good set when one exists, and checks certificates independently of
//! the construction.
//!
//! ```
//! use nice_core::{construct::construct_good_set, verify::verify_certificate};
//! use num_bigint::BigUint;
//!
//! let set = construct_good_set(&BigUint::from(3675u32)).unwrap();
//! assert_eq!(set.len(), 17);
//! assert!(verify_certificate(&set).unwrap().passed());
//! ```

pub mod arith;
pub mod cli;
pub mod construct;
pub mod model;
pub mod oracle;
pub mod verify;
