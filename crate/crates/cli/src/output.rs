use std::fmt;
use std::io::{self, Write};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or values: exit code 2.
    Invalid(String),
    /// Singular fiber requested: exit code 3.
    Degenerate(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Degenerate(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<cartier::Error> for CliError {
    fn from(e: cartier::Error) -> Self {
        use cartier::Error as E;
        match e {
            E::NotOddPrime(_) | E::PrimeTooSmall(_) | E::ModulusTooLarge(_) | E::InertPrime(_) => {
                CliError::Invalid(e.to_string())
            }
            E::NotSquarefree => CliError::Degenerate(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

/// Print the JSON output record on stdout.
pub fn emit_json(command: Value, payload: impl Serialize, start: Instant) -> Result<(), CliError> {
    let payload = serde_json::to_value(payload).map_err(|e| CliError::Internal(e.to_string()))?;
    let record = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "payload": payload,
        "timing_ms": start.elapsed().as_millis() as u64,
    });
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, &record).map_err(|e| CliError::Internal(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Comma-separated, header row, LF line endings.
pub fn csv_writer() -> csv::Writer<io::Stdout> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(io::stdout())
}

/// Coefficients lowest degree first, space separated; the zero polynomial is "0".
pub fn coeff_field(coeffs: &[u64]) -> String {
    if coeffs.is_empty() {
        "0".to_string()
    } else {
        coeffs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    }
}
