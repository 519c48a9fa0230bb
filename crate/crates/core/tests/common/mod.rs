#![allow(dead_code)]

use std::path::PathBuf;

use nice_core::cli::format::{parse_text, Certificate};
use nice_core::model::CongruenceAssignment;
use num_bigint::BigUint;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> Certificate {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_text(&text).expect("fixture parses")
}

/// The fixture as an assignment over its stated `n`.
pub fn fixture_assignment(name: &str) -> CongruenceAssignment {
    let cert = load_fixture(name);
    CongruenceAssignment::from_congruences(cert.n.expect("fixture states n"), cert.congruences)
        .expect("fixture moduli divide n")
}

pub fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// Hand-picked instances checked on top of the construction sweep.
pub const TARGETS: [u64; 5] = [3675, 148_225, 25_050_025, 3 * 25 * 343, 5 * 49 * 121 * 169];
