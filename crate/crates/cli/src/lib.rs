//! Library side of the `valueset` command: invariant reports, corpus
//! verification, example families and polytope plots.

pub mod families;
pub mod plot;
pub mod report;
pub mod verify;

use std::sync::Arc;

use thiserror::Error;
use valueset_core::dilation::DilationError;
use valueset_core::gf::{Field, GfError};
use valueset_core::padic::PadicError;
use valueset_core::poly::{parse_map, PolyError, PolyMap};
use valueset_core::valueset::ValueSetError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("envelope exceeded: {0}")]
    Envelope(String),
    #[error("map does not use variables {}", fmt_vars(.0))]
    UnusedVariables(Vec<usize>),
    #[error("{0}")]
    Violation(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("plotting needs exactly two variables, got {0}")]
    NotTwoDimensional(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn fmt_vars(vars: &[usize]) -> String {
    vars.iter()
        .map(|i| format!("x{}", i + 1))
        .collect::<Vec<_>>()
        .join(", ")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::BadParams(_) | CliError::NotTwoDimensional(_) => 2,
            CliError::Envelope(_) => 3,
            CliError::UnusedVariables(_) => 4,
            CliError::Violation(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<ValueSetError> for CliError {
    fn from(e: ValueSetError) -> Self {
        CliError::Envelope(e.to_string())
    }
}

impl From<DilationError> for CliError {
    fn from(e: DilationError) -> Self {
        match e {
            DilationError::UnusedVariables(v) => CliError::UnusedVariables(v),
            DilationError::Poly(p) => p.into(),
            other => CliError::Envelope(other.to_string()),
        }
    }
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::Poly(p) => p.into(),
            PadicError::Gf(g) => g.into(),
            other => CliError::Envelope(other.to_string()),
        }
    }
}

/// Reads `q` from a leading `# q=<q>` comment, as written by `example`.
pub fn header_order(text: &str) -> Option<u64> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.starts_with('#') || l.is_empty())
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("q=")?.trim().parse().ok())
}

/// Parses map text over `F_q`, with `q` from the argument or the header.
pub fn load_map(text: &str, q: Option<u64>, modulus: Option<Vec<u64>>) -> Result<PolyMap, CliError> {
    let q = q
        .or_else(|| header_order(text))
        .ok_or_else(|| CliError::Parse("field order unknown: pass --q or add a `# q=<q>` header".into()))?;
    let field = Arc::new(Field::with_order(q, modulus)?);
    Ok(parse_map(text, field)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_read() {
        assert_eq!(header_order("# q=19\nvars:1\nf1 = x1\n"), Some(19));
        assert_eq!(header_order("#q = 4\n"), None);
        assert_eq!(header_order("vars:1\n# q=5\nf1 = x1"), None);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Parse(String::new()).exit_code(), 2);
        assert_eq!(CliError::Envelope(String::new()).exit_code(), 3);
        assert_eq!(CliError::UnusedVariables(vec![1]).exit_code(), 4);
        assert_eq!(CliError::Violation(String::new()).exit_code(), 5);
    }

    #[test]
    fn flag_overrides_header() {
        let m = load_map("# q=19\nvars:1\nf1 = x1^7 + x1\n", Some(5), None).unwrap();
        assert_eq!(m.field().order(), 5);
        assert!(load_map("vars:1\nf1 = x1\n", None, None).is_err());
    }
}
