//! Certificate formats.
//!
//! Text: an optional `n = <decimal>` header, then one `<residue> mod <modulus>`
//! line per congruence, ascending by modulus. Blank lines are ignored.
//!
//! JSON: `{"format_version": 1, "n": "...", "factorization": [["p", e], ...],
//! "congruences": [{"modulus": "...", "residue": "..."}, ...]}` with every
//! integer written as a decimal string.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Congruence, CongruenceAssignment, Factorization};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("invalid JSON certificate: {0}")]
    Json(String),
    #[error("unsupported format_version {0}")]
    Version(u32),
}

/// A parsed certificate: the congruences as listed, and `n` when the file
/// states it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: Option<BigUint>,
    pub congruences: Vec<Congruence>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonEntry {
    modulus: String,
    residue: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonCertificate {
    format_version: u32,
    n: String,
    factorization: Vec<(String, u32)>,
    congruences: Vec<JsonEntry>,
}

pub fn emit_text(a: &CongruenceAssignment) -> String {
    let mut s = format!("n = {}\n", a.n());
    for (m, r) in a.iter() {
        s.push_str(&format!("{r} mod {m}\n"));
    }
    s
}

pub fn emit_json(a: &CongruenceAssignment, f: &Factorization) -> String {
    let doc = JsonCertificate {
        format_version: FORMAT_VERSION,
        n: a.n().to_string(),
        factorization: f.pairs().iter().map(|(p, e)| (p.to_string(), *e)).collect(),
        congruences: a
            .iter()
            .map(|(m, r)| JsonEntry {
                modulus: m.to_string(),
                residue: r.to_string(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses either format, choosing JSON when the first non-blank character
/// is `{`.
pub fn parse_certificate(input: &str) -> Result<Certificate, FormatError> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

pub fn parse_decimal(s: &str) -> Option<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigUint::parse_bytes(s.as_bytes(), 10)
}

fn congruence(residue: BigUint, modulus: BigUint) -> Result<Congruence, String> {
    if modulus < BigUint::from(2u32) {
        return Err(format!("modulus {modulus} must be at least 2"));
    }
    if residue >= modulus {
        return Err(format!("residue {residue} is not reduced modulo {modulus}"));
    }
    Congruence::new(residue, modulus).map_err(|e| e.to_string())
}

pub fn parse_text(input: &str) -> Result<Certificate, FormatError> {
    let mut n = None;
    let mut congruences = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| FormatError::Line { line: i + 1, msg };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n") {
            let value = rest
                .trim_start()
                .strip_prefix('=')
                .map(str::trim)
                .ok_or_else(|| err(format!("expected `n = <decimal>`, got `{line}`")))?;
            if n.is_some() || !congruences.is_empty() {
                return Err(err("the `n =` header must come first and only once".into()));
            }
            n = Some(
                parse_decimal(value)
                    .ok_or_else(|| err(format!("`{value}` is not a decimal integer")))?,
            );
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let [r, "mod", m] = words[..] else {
            return Err(err(format!(
                "expected `<residue> mod <modulus>`, got `{line}`"
            )));
        };
        let r = parse_decimal(r).ok_or_else(|| err(format!("`{r}` is not a decimal integer")))?;
        let m = parse_decimal(m).ok_or_else(|| err(format!("`{m}` is not a decimal integer")))?;
        congruences.push(congruence(r, m).map_err(err)?);
    }
    Ok(Certificate { n, congruences })
}

pub fn parse_json(input: &str) -> Result<Certificate, FormatError> {
    let doc: JsonCertificate =
        serde_json::from_str(input).map_err(|e| FormatError::Json(e.to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(FormatError::Version(doc.format_version));
    }
    let num = |s: &str| {
        parse_decimal(s).ok_or_else(|| FormatError::Json(format!("`{s}` is not a decimal integer")))
    };
    let n = num(&doc.n)?;
    let pairs = doc
        .factorization
        .iter()
        .map(|(p, e)| Ok((num(p)?, *e)))
        .collect::<Result<Vec<_>, FormatError>>()?;
    let f = Factorization::new(pairs).map_err(|e| FormatError::Json(e.to_string()))?;
    if f.value() != n {
        return Err(FormatError::Json(format!(
            "factorization {f} does not multiply to n = {n}"
        )));
    }
    let congruences = doc
        .congruences
        .iter()
        .map(|c| congruence(num(&c.residue)?, num(&c.modulus)?).map_err(FormatError::Json))
        .collect::<Result<_, _>>()?;
    Ok(Certificate {
        n: Some(n),
        congruences,
    })
}
