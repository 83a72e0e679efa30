//! Polynomial identity files.
//!
//! ```text
//! vars x, y, z
//! let f2 = x^2 + y*z
//! identity f2^2 == x^4 + 2*x^2*y*z + y^2*z^2
//! ```
//!
//! Lines starting with whitespace continue the previous statement.

use std::collections::HashMap;

use serde::Serialize;

use super::CertError;
use crate::exact::{parse_poly_expr, poly_equal, PolyEquality, PolyError, PolyExpr};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub line: usize,
    pub text: String,
    pub result: PolyEquality,
}

impl IdentityOutcome {
    pub fn holds(&self) -> bool {
        self.result == PolyEquality::Equal
    }
}

struct Stmt {
    line: usize,
    keyword: String,
    /// Column where the body starts on the first line.
    body_col: usize,
    body: String,
}

fn statements(text: &str) -> Result<Vec<Stmt>, CertError> {
    let mut out: Vec<Stmt> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            match out.last_mut() {
                Some(s) => {
                    // Keep line structure so error positions stay meaningful.
                    let pad = i + 1 - s.line - s.body.matches('\n').count();
                    s.body.push_str(&"\n".repeat(pad));
                    s.body.push_str(line);
                }
                None => {
                    return Err(CertError::Syntax {
                        line: i + 1,
                        col: 1,
                        msg: "continuation line before any statement".into(),
                    })
                }
            }
            continue;
        }
        let kw_len = line.find(char::is_whitespace).unwrap_or(line.len());
        let rest = &line[kw_len..];
        let body_col = kw_len + (rest.len() - rest.trim_start().len()) + 1;
        out.push(Stmt {
            line: i + 1,
            keyword: line[..kw_len].to_string(),
            body_col,
            body: rest.trim_start().to_string(),
        });
    }
    Ok(out)
}

fn relocate(e: PolyError, s: &Stmt, offset: usize) -> CertError {
    match e {
        PolyError::Syntax { line, col, msg } => CertError::Syntax {
            line: s.line + line - 1,
            col: if line == 1 { col + s.body_col - 1 + offset } else { col },
            msg,
        },
        other => CertError::Syntax { line: s.line, col: s.body_col, msg: other.to_string() },
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Expands every `identity` in the file and compares both sides exactly.
pub fn check_poly_file(text: &str) -> Result<Vec<IdentityOutcome>, CertError> {
    let mut vars: Option<Vec<String>> = None;
    let mut env: HashMap<String, PolyExpr> = HashMap::new();
    let mut out = Vec::new();
    for s in statements(text)? {
        let err = |msg: String| CertError::Syntax { line: s.line, col: 1, msg };
        match s.keyword.as_str() {
            "vars" => {
                if vars.is_some() {
                    return Err(err("variables already declared".into()));
                }
                let names: Vec<String> = s.body.split(',').map(|v| v.trim().to_string()).collect();
                if names.iter().any(|n| !is_ident(n)) {
                    return Err(err("expected a comma-separated list of identifiers".into()));
                }
                vars = Some(names);
            }
            "let" | "identity" => {
                let Some(vs) = vars.as_ref() else {
                    return Err(err("`vars` must come first".into()));
                };
                if s.keyword == "let" {
                    let Some((name, body)) = s.body.split_once('=') else {
                        return Err(err("expected `let name = expr`".into()));
                    };
                    let name = name.trim();
                    if !is_ident(name) || vs.iter().any(|v| v == name) || env.contains_key(name) {
                        return Err(err(format!("cannot bind `{name}`")));
                    }
                    let e = parse_poly_expr(body, vs, &env).map_err(|e| relocate(e, &s, name.len() + 2))?;
                    env.insert(name.to_string(), e);
                } else {
                    let Some((lhs, rhs)) = s.body.split_once("==") else {
                        return Err(err("expected `identity lhs == rhs`".into()));
                    };
                    let l = parse_poly_expr(lhs, vs, &env).map_err(|e| relocate(e, &s, 0))?;
                    let r = parse_poly_expr(rhs, vs, &env).map_err(|e| relocate(e, &s, lhs.len() + 2))?;
                    let result = poly_equal(&l, &r).map_err(|e| relocate(e, &s, 0))?;
                    let text = s.body.split_whitespace().collect::<Vec<_>>().join(" ");
                    out.push(IdentityOutcome { line: s.line, text, result });
                }
            }
            other => return Err(err(format!("unknown statement `{other}`"))),
        }
    }
    if out.is_empty() {
        return Err(CertError::Syntax { line: 1, col: 1, msg: "file contains no identity".into() });
    }
    Ok(out)
}
