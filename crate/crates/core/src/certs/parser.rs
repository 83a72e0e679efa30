use std::collections::HashSet;

use num_bigint::BigInt;

use super::ast::{ArgValue, BinOp, Certificate, Expect, Expr, Keyword, Step, StepKind};
use super::CertError;
use crate::exact::{Cmp, Rational};

/// Checker names with their required and optional argument names.
pub const CHECKERS: &[(&str, &[&str], &[&str])] = &[
    ("theorem_I_hyp", &["A", "B", "M", "N", "alpha", "beta"], &[]),
    ("lemma_2_0", &["A", "B", "M", "N", "alpha", "beta"], &[]),
    ("vertex_ab", &["A", "B", "M", "N"], &[]),
    ("theorem_I_refute", &["A", "B", "M", "N", "alpha", "beta", "a1", "a2", "m1", "m2"], &[]),
    ("corti_bound", &["a1", "a2", "eps"], &[]),
    ("thm2_bound", &["a1", "eps"], &[]),
    ("lct_monomial", &["m", "form"], &[]),
    ("adjunction_refute", &["pairing", "threshold"], &[]),
    ("lp_max", &["vars", "objective"], &["subject_to", "chain"]),
    ("du_val_bounds", &["n"], &["extra"]),
    ("tower", &["a1", "a2", "m", "n"], &[]),
    ("pairing", &["n", "k2", "pull1", "exc1", "pull2", "exc2"], &[]),
    ("involution", &["h", "e"], &[]),
    ("untwist", &["mu", "mult"], &[]),
    ("pukhlikov", &["s0", "s1", "c", "form"], &[]),
    ("ledger", &["file"], &["entry"]),
    ("poly_id", &["file"], &[]),
    ("amplitude", &["weights", "degree"], &[]),
    ("orbit", &["group", "space"], &["field"]),
    ("superrigid", &["k2", "min_orbit"], &[]),
];

const RESERVED: &[&str] = &["cert", "let", "assert", "check", "expect"];

pub fn is_reserved(ident: &str) -> bool {
    RESERVED.contains(&ident) || Keyword::ALL.iter().any(|(k, _)| *k == ident)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Sym(&'static str),
    Newline,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: &[&str] = &["==", "<=", ">=", "<", ">", "=", "+", "-", "*", "/", "^", "(", ")", ","];

fn lex(text: &str) -> Result<Vec<Token>, CertError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: tl, col: tc });
        if c == '\n' {
            // Newlines inside parentheses continue the statement.
            if depth == 0 {
                push(&mut out, Tok::Newline);
            }
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            push(&mut out, Tok::Ident(s));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            push(&mut out, Tok::Int(s.parse().unwrap()));
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => {
                        return Err(CertError::Syntax { line: tl, col: tc, msg: "unterminated string".into() })
                    }
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some(e @ ('"' | '\\')) => s.push(*e),
                            _ => {
                                return Err(CertError::Syntax {
                                    line,
                                    col,
                                    msg: "unknown escape".into(),
                                })
                            }
                        }
                        i += 2;
                        col += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            push(&mut out, Tok::Str(s));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return Err(CertError::Syntax { line, col, msg: format!("unexpected character `{c}`") });
        };
        match *sym {
            "(" => depth += 1,
            ")" => depth = depth.saturating_sub(1),
            _ => {}
        }
        i += sym.len();
        col += sym.len();
        push(&mut out, Tok::Sym(sym));
    }
    out.push(Token { tok: Tok::Newline, line, col });
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    bound: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CertError> {
        let (line, col) = self.here();
        Err(CertError::Syntax { line, col, msg: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(x) if *x == s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), CertError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, CertError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                self.bump();
                Ok(s)
            }
            Tok::Ident(s) => self.err(format!("`{s}` is reserved, expected {what}")),
            _ => self.err(format!("expected {what}")),
        }
    }

    fn certificate(&mut self) -> Result<Certificate, CertError> {
        self.skip_newlines();
        match self.peek() {
            Tok::Ident(s) if s == "cert" => {
                self.bump();
            }
            _ => return self.err("expected `cert \"name\"`"),
        }
        let name = match self.bump() {
            Tok::Str(s) => s,
            _ => {
                self.pos -= 1;
                return self.err("expected certificate name string");
            }
        };
        self.end_of_statement()?;
        let mut steps = Vec::new();
        loop {
            self.skip_newlines();
            if *self.peek() == Tok::Eof {
                break;
            }
            steps.push(self.step()?);
        }
        Ok(Certificate { name, steps })
    }

    fn end_of_statement(&mut self) -> Result<(), CertError> {
        match self.peek() {
            Tok::Newline | Tok::Eof => Ok(()),
            _ => self.err("expected end of line"),
        }
    }

    fn note(&mut self) -> Option<String> {
        if let Tok::Str(s) = self.peek().clone() {
            self.bump();
            Some(s)
        } else {
            None
        }
    }

    fn step(&mut self) -> Result<Step, CertError> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.err("expected `let`, `assert` or `check`"),
        };
        self.bump();
        let kind = match kw.as_str() {
            "let" => {
                let name = self.ident("an identifier")?;
                if self.bound.contains(&name) {
                    self.pos -= 1;
                    return self.err(format!("`{name}` is already bound"));
                }
                self.expect_sym("=")?;
                let e = self.expr()?;
                self.bound.insert(name.clone());
                StepKind::Let(name, e)
            }
            "assert" => {
                let l = self.expr()?;
                let rel = match self.peek() {
                    Tok::Sym(s) if ["==", "<=", "<", ">=", ">"].contains(s) => s.parse::<Cmp>().unwrap(),
                    _ => return self.err("expected a relation (==, <=, <, >=, >)"),
                };
                self.bump();
                let r = self.expr()?;
                StepKind::Assert(l, rel, r)
            }
            "check" => self.check()?,
            other => {
                self.pos -= 1;
                return self.err(format!("unknown statement `{other}`"));
            }
        };
        let note = self.note();
        self.end_of_statement()?;
        Ok(Step { kind, note })
    }

    fn check(&mut self) -> Result<StepKind, CertError> {
        let (nl, nc) = self.here();
        let name = match self.bump() {
            Tok::Ident(s) => s,
            _ => {
                self.pos -= 1;
                return self.err("expected a checker name");
            }
        };
        let Some((_, required, optional)) = CHECKERS.iter().find(|(n, ..)| *n == name) else {
            return Err(CertError::UnknownChecker { line: nl, col: nc, name });
        };
        self.expect_sym("(")?;
        let mut args: Vec<(String, ArgValue)> = Vec::new();
        if !self.eat_sym(")") {
            loop {
                let (kl, kc) = self.here();
                let key = self.ident("an argument name")?;
                if !required.contains(&key.as_str()) && !optional.contains(&key.as_str()) {
                    return Err(CertError::Syntax {
                        line: kl,
                        col: kc,
                        msg: format!("`{name}` takes no argument `{key}`"),
                    });
                }
                if args.iter().any(|(k, _)| *k == key) {
                    return Err(CertError::Syntax { line: kl, col: kc, msg: format!("duplicate argument `{key}`") });
                }
                self.expect_sym("=")?;
                let v = self.arg_value()?;
                args.push((key, v));
                if self.eat_sym(")") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        for r in *required {
            if !args.iter().any(|(k, _)| k == r) {
                return Err(CertError::Syntax {
                    line: nl,
                    col: nc,
                    msg: format!("`{name}` is missing argument `{r}`"),
                });
            }
        }
        let expect = match self.peek() {
            Tok::Ident(s) if s == "expect" => {
                self.bump();
                Some(self.expectation()?)
            }
            _ => None,
        };
        Ok(StepKind::Check { name, args, expect })
    }

    fn arg_value(&mut self) -> Result<ArgValue, CertError> {
        if let Tok::Str(s) = self.peek().clone() {
            self.bump();
            return Ok(ArgValue::Str(s));
        }
        match self.paren_or_expr()? {
            Ok(e) => Ok(ArgValue::Expr(e)),
            Err(t) => Ok(ArgValue::Tuple(t)),
        }
    }

    fn expectation(&mut self) -> Result<Expect, CertError> {
        if let Tok::Ident(s) = self.peek() {
            if let Some((_, k)) = Keyword::ALL.iter().find(|(n, _)| n == s) {
                self.bump();
                return Ok(Expect::Keyword(*k));
            }
        }
        match self.paren_or_expr()? {
            Ok(e) => Ok(Expect::Value(e)),
            Err(t) => Ok(Expect::Tuple(t)),
        }
    }

    /// An expression, or a parenthesised tuple of two or more expressions.
    fn paren_or_expr(&mut self) -> Result<Result<Expr, Vec<Expr>>, CertError> {
        if !matches!(self.peek(), Tok::Sym("(")) {
            return Ok(Ok(self.expr()?));
        }
        let save = self.pos;
        self.bump();
        let first = self.expr()?;
        if self.eat_sym(",") {
            let mut items = vec![first];
            loop {
                items.push(self.expr()?);
                if self.eat_sym(")") {
                    return Ok(Err(items));
                }
                self.expect_sym(",")?;
            }
        }
        // Plain parenthesised expression, possibly followed by operators.
        self.pos = save;
        Ok(Ok(self.expr()?))
    }

    fn expr(&mut self) -> Result<Expr, CertError> {
        let mut l = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                BinOp::Add
            } else if self.eat_sym("-") {
                BinOp::Sub
            } else {
                return Ok(l);
            };
            let r = self.term()?;
            l = Expr::Bin(op, Box::new(l), Box::new(r));
        }
    }

    fn term(&mut self) -> Result<Expr, CertError> {
        let mut l = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                BinOp::Mul
            } else if self.eat_sym("/") {
                BinOp::Div
            } else {
                return Ok(l);
            };
            let r = self.unary()?;
            l = Expr::Bin(op, Box::new(l), Box::new(r));
        }
    }

    fn unary(&mut self) -> Result<Expr, CertError> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat_sym("^") {
            let neg = self.eat_sym("-");
            let k = match self.peek().clone() {
                Tok::Int(k) => k,
                _ => return self.err("expected an integer exponent"),
            };
            let k: i32 = match i32::try_from(&k) {
                Ok(k) if k <= 1024 => k,
                _ => return self.err("exponent too large"),
            };
            self.bump();
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, CertError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(Rational::from_integer(n)))
            }
            Tok::Ident(s) => {
                if is_reserved(&s) {
                    return self.err(format!("`{s}` is reserved"));
                }
                if !self.bound.contains(&s) {
                    let (line, col) = self.here();
                    return Err(CertError::Unbound { line, col, name: s });
                }
                self.bump();
                Ok(Expr::Var(s))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => self.err("expected a number, identifier or `(`"),
        }
    }
}

pub fn parse_certificate(text: &str) -> Result<Certificate, CertError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0, bound: HashSet::new() }.certificate()
}
