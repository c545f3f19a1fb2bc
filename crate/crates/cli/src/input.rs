use std::fmt;
use std::path::{Path, PathBuf};

use symcoerce_core::{parse_operator, parse_system, OperatorSystem, ParseDiagnostic, Polynomial, Rational, WeightVector};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse { source: String, origin: String, diag: ParseDiagnostic },
    Engine(symcoerce_core::Error),
    Io(PathBuf, std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Engine(e) => write!(f, "error: {e}"),
            CliError::Io(p, e) => write!(f, "error: {}: {e}", p.display()),
            CliError::Parse { source, origin, diag } => {
                writeln!(f, "error: {origin}:{}:{}: {}", diag.line, diag.column, diag.message)?;
                let line = source.lines().nth(diag.line.saturating_sub(1)).unwrap_or("");
                writeln!(f, "  | {line}")?;
                let pad: String = line.chars().take(diag.column.saturating_sub(1)).map(|c| if c == '\t' { '\t' } else { ' ' }).collect();
                write!(f, "  | {pad}^")
            }
        }
    }
}

impl From<symcoerce_core::Error> for CliError {
    fn from(e: symcoerce_core::Error) -> Self {
        CliError::Engine(e)
    }
}

fn parse_err(source: &str, origin: &str, diag: ParseDiagnostic) -> CliError {
    CliError::Parse { source: source.to_string(), origin: origin.to_string(), diag }
}

pub fn load_system(args: &[String], file: Option<&Path>, dim: Option<usize>) -> Result<OperatorSystem, CliError> {
    let (text, origin) = match (file, args.is_empty()) {
        (Some(_), false) => return Err(CliError::Usage("give operators either as arguments or with --file, not both".into())),
        (None, true) => return Err(CliError::Usage("no operators given".into())),
        (Some(p), true) => (std::fs::read_to_string(p).map_err(|e| CliError::Io(p.to_path_buf(), e))?, p.display().to_string()),
        (None, false) => {
            if let Some(bad) = args.iter().find(|a| a.contains('\n')) {
                return Err(CliError::Usage(format!("operator argument spans several lines: {bad:?}")));
            }
            (args.join("\n"), "<args>".to_string())
        }
    };
    parse_system(&text, dim).map_err(|d| parse_err(&text, &origin, d))
}

pub fn parse_expr(text: &str, dim: usize, what: &str) -> Result<Polynomial, CliError> {
    parse_operator(text, Some(dim)).map_err(|d| parse_err(text, what, d))
}

pub fn parse_expr_any(text: &str, what: &str) -> Result<Polynomial, CliError> {
    parse_operator(text, None).map_err(|d| parse_err(text, what, d))
}

pub fn parse_rational(text: &str, what: &str) -> Result<Rational, CliError> {
    let p = parse_expr(text.trim(), 1, what)?;
    if p.total_degree().unwrap_or(0) > 0 {
        return Err(CliError::Usage(format!("{what}: '{text}' is not a number")));
    }
    let v = p.evaluate_rational(&[Rational::from_integer(0.into())])?;
    if !num_traits::Zero::is_zero(&v.im) {
        return Err(CliError::Usage(format!("{what}: '{text}' is not real")));
    }
    Ok(v.re)
}

pub fn weights(entries: &[u32]) -> Result<WeightVector, CliError> {
    WeightVector::new(entries.to_vec()).map_err(CliError::from)
}

/// Only `csv:<path>` is recognised.
pub fn parse_dump(spec: &str) -> Result<PathBuf, CliError> {
    match spec.strip_prefix("csv:") {
        Some(p) if !p.is_empty() => Ok(PathBuf::from(p)),
        _ => Err(CliError::Usage(format!("--dump expects csv:<path>, got '{spec}'"))),
    }
}

pub fn pair(v: &[usize], flag: &str) -> Result<(usize, usize), CliError> {
    match v {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Usage(format!("{flag} expects two indices u,v"))),
    }
}
