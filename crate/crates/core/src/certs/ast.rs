use std::fmt;

use serde::Serialize;

use crate::exact::{Cmp, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Expr {
    /// Non-negative integer literal.
    Int(Rational),
    Var(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

const PREC_UNARY: u8 = 3;
const PREC_POW: u8 = 4;

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Int(_) | Expr::Var(_) => 5,
            Expr::Pow(..) => PREC_POW,
            Expr::Neg(_) => PREC_UNARY,
            Expr::Bin(op, ..) => op.prec(),
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.write_at(f, PREC_UNARY)
            }
            Expr::Pow(b, k) => {
                b.write_at(f, PREC_POW + 1)?;
                write!(f, "^{k}")
            }
            Expr::Bin(op, l, r) => {
                l.write_at(f, op.prec())?;
                match op {
                    BinOp::Div => f.write_str("/")?,
                    _ => write!(f, " {} ", op.symbol())?,
                }
                // Right operands at equal precedence need parentheses.
                r.write_at(f, op.prec() + 1)
            }
        }
    }

    /// Identifiers referenced by the expression.
    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Neg(e) | Expr::Pow(e, _) => e.vars(out),
            Expr::Bin(_, l, r) => {
                l.vars(out);
                r.vars(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ArgValue {
    Expr(Expr),
    Str(String),
    Tuple(Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Keyword {
    Refuted,
    Inconclusive,
    NotApplicable,
    True,
    False,
}

impl Keyword {
    pub const ALL: [(&'static str, Keyword); 5] = [
        ("refuted", Keyword::Refuted),
        ("inconclusive", Keyword::Inconclusive),
        ("not_applicable", Keyword::NotApplicable),
        ("true", Keyword::True),
        ("false", Keyword::False),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, k)| *k == self).unwrap().0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Expect {
    Value(Expr),
    Tuple(Vec<Expr>),
    Keyword(Keyword),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StepKind {
    Let(String, Expr),
    Assert(Expr, Cmp, Expr),
    Check { name: String, args: Vec<(String, ArgValue)>, expect: Option<Expect> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub kind: StepKind,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub steps: Vec<Step>,
}

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn tuple(items: &[Expr]) -> String {
    let parts: Vec<String> = items.iter().map(Expr::to_string).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for ArgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgValue::Expr(e) => write!(f, "{e}"),
            ArgValue::Str(s) => f.write_str(&quote(s)),
            ArgValue::Tuple(t) => f.write_str(&tuple(t)),
        }
    }
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expect::Value(e) => write!(f, "{e}"),
            Expect::Tuple(t) => f.write_str(&tuple(t)),
            Expect::Keyword(k) => f.write_str(k.name()),
        }
    }
}

impl StepKind {
    /// `name(k=v, ...)` for checks.
    pub fn call_text(name: &str, args: &[(String, ArgValue)]) -> String {
        let parts: Vec<String> = args.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{name}({})", parts.join(", "))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StepKind::Let(n, e) => write!(f, "let {n} = {e}")?,
            StepKind::Assert(l, c, r) => write!(f, "assert {l} {c} {r}")?,
            StepKind::Check { name, args, expect } => {
                write!(f, "check {}", StepKind::call_text(name, args))?;
                if let Some(e) = expect {
                    write!(f, " expect {e}")?;
                }
            }
        }
        if let Some(n) = &self.note {
            write!(f, " {}", quote(n))?;
        }
        Ok(())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cert {}", quote(&self.name))?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
