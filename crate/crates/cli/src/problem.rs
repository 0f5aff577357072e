//! Problem files:
//!
//! ```text
//! # comment
//! ring x, y, z;
//! variety: x*z - y^2;
//! F: x;
//! F: 1 - y;
//! phi: 1;
//! option points = 10;
//! ```
//!
//! Statements end with `;` and may span lines. Errors carry the line on
//! which the offending statement starts.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use polydiv_core::{parse_poly, RatPoly, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub ring: Arc<Ring>,
    pub variety: Vec<RatPoly>,
    pub f: Vec<RatPoly>,
    pub phi: Option<RatPoly>,
    /// Option values with the line they were given on.
    pub options: BTreeMap<String, (String, usize)>,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Splits the text into `(line, statement)` pairs, dropping comments.
fn statements(text: &str) -> Result<Vec<(usize, String)>, ParseError> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut rest = line;
        while let Some(pos) = rest.find(';') {
            let piece = &rest[..pos];
            if current.trim().is_empty() && !piece.trim().is_empty() {
                start = i + 1;
            }
            current.push_str(piece);
            if current.trim().is_empty() {
                return Err(err(i + 1, "empty statement"));
            }
            out.push((start, current.trim().to_string()));
            current.clear();
            rest = &rest[pos + 1..];
        }
        if current.trim().is_empty() && !rest.trim().is_empty() {
            start = i + 1;
        }
        current.push_str(rest);
        current.push(' ');
    }
    if !current.trim().is_empty() {
        return Err(err(start, "statement is missing its terminating `;`"));
    }
    Ok(out)
}

fn poly(text: &str, ring: &Arc<Ring>, line: usize) -> Result<RatPoly, ParseError> {
    parse_poly(text, ring).map_err(|e| err(line, e.to_string()))
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let stmts = statements(text)?;
    let mut iter = stmts.into_iter();
    let (line, first) = iter.next().ok_or_else(|| err(1, "empty problem file"))?;
    let vars = first
        .strip_prefix("ring")
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| err(line, "the first statement must be `ring <vars>;`"))?;
    let names: Vec<String> = vars.split(',').map(|v| v.trim().to_string()).collect();
    for n in &names {
        let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(err(line, format!("invalid variable name `{n}`")));
        }
    }
    let ring = Ring::new(names, polydiv_core::MonomialOrder::GrevLex).map_err(|e| err(line, e.to_string()))?;
    let mut out =
        ProblemFile { ring: ring.clone(), variety: Vec::new(), f: Vec::new(), phi: None, options: BTreeMap::new() };
    for (line, s) in iter {
        if let Some(rest) = s.strip_prefix("option") {
            let (k, v) = rest.split_once('=').ok_or_else(|| err(line, "expected `option key = value`"))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(err(line, "expected `option key = value`"));
            }
            if out.options.insert(k.to_string(), (v.to_string(), line)).is_some() {
                return Err(err(line, format!("option `{k}` given twice")));
            }
            continue;
        }
        let (head, body) = s.split_once(':').ok_or_else(|| err(line, format!("unrecognized statement `{s}`")))?;
        match head.trim() {
            "variety" => out.variety.push(poly(body, &ring, line)?),
            "F" => out.f.push(poly(body, &ring, line)?),
            "phi" => {
                if out.phi.is_some() {
                    return Err(err(line, "phi given twice"));
                }
                out.phi = Some(poly(body, &ring, line)?);
            }
            "ring" => return Err(err(line, "ring declared twice")),
            other => return Err(err(line, format!("unknown section `{other}`"))),
        }
    }
    Ok(out)
}

impl ProblemFile {
    pub fn option(&self, key: &str) -> Option<&str> {
        self.options.get(key).map(|(v, _)| v.as_str())
    }

    /// Parses an option value, reporting its line on failure.
    pub fn parsed_option<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ParseError>
    where
        T::Err: fmt::Display,
    {
        match self.options.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse().map(Some).map_err(|e| err(*line, format!("option `{key}`: {e}"))),
        }
    }

    pub fn option_line(&self, key: &str) -> usize {
        self.options.get(key).map_or(0, |(_, l)| *l)
    }

    /// Rejects options outside `known`.
    pub fn check_options(&self, known: &[&str]) -> Result<(), ParseError> {
        for (k, (_, line)) in &self.options {
            if !known.contains(&k.as_str()) {
                return Err(err(*line, format!("unknown option `{k}` for this command")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file() {
        let text = "# twisted cubic\nring x, y, z;\nvariety: y - x^2;\nvariety: z - x^3;\nF: x;\nF: 1 -\n  y;\nphi: 1;\noption points = 4;\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.ring.vars(), &["x", "y", "z"]);
        assert_eq!(p.variety.len(), 2);
        assert_eq!(p.f.len(), 2);
        assert_eq!(p.f[1].to_string(), parse_poly("1 - y", &p.ring).unwrap().to_string());
        assert!(p.phi.as_ref().unwrap().is_constant());
        assert_eq!(p.parsed_option::<u32>("points").unwrap(), Some(4));
    }

    #[test]
    fn several_statements_per_line() {
        let p = parse_problem("ring x; F: x; F: 1 - x;").unwrap();
        assert_eq!(p.f.len(), 2);
        assert!(p.variety.is_empty());
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_problem("ring x, y;\n\nF: x + z;\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains('z'));
        assert_eq!(parse_problem("F: x;").unwrap_err().line, 1);
        assert_eq!(parse_problem("ring x;\nF: x").unwrap_err().line, 2);
        assert_eq!(parse_problem("ring x;\nG: x;").unwrap_err().line, 2);
        assert_eq!(parse_problem("ring x;\nphi: 1;\nphi: 2;").unwrap_err().line, 3);
        assert_eq!(parse_problem("ring x, 2y;").unwrap_err().line, 1);
        assert_eq!(parse_problem("").unwrap_err().line, 1);
    }

    #[test]
    fn option_errors() {
        let p = parse_problem("ring x;\noption points = many;").unwrap();
        assert_eq!(p.parsed_option::<u32>("points").unwrap_err().line, 2);
        assert_eq!(p.check_options(&["seed"]).unwrap_err().line, 2);
        assert_eq!(parse_problem("ring x;\noption a = 1;\noption a = 2;").unwrap_err().line, 3);
    }
}
