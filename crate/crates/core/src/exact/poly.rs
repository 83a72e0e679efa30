//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under graded-lex
//! order, so iteration and the "leading monomial" are deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    Unknown(String),
    #[error("division by a non-constant or zero polynomial")]
    BadDivision,
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, weights: &[u64]) -> u64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as u64 * w).sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero(arity: usize) -> Self {
        SparsePoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::one(arity), c);
        p
    }

    /// The coordinate `x_i`.
    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(Monomial(exps), c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent vector of wrong length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_default()
    }

    /// Largest monomial in graded-lex order.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.leading_monomial().map(Monomial::degree)
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &SparsePoly) -> Result<(), PolyError> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch(self.arity, other.arity))
        }
    }

    pub fn try_add(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_arity(other)?;
        // Accumulate in a hash map; the ordered map is rebuilt once.
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.times(mb)).or_default() += ca * cb;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(SparsePoly { arity: self.arity, terms })
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        let mut result = SparsePoly::constant(self.arity, Rational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.arity);
        }
        SparsePoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.arity);
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().zip(point).fold(c.clone(), |acc, (&e, x)| acc * x.pow(e as i32).unwrap())
            })
            .sum()
    }

    /// Substitutes `x_i -> images[i]`.
    pub fn compose(&self, images: &[SparsePoly]) -> Result<SparsePoly, PolyError> {
        if images.len() != self.arity {
            return Err(PolyError::ArityMismatch(self.arity, images.len()));
        }
        let target = images.first().map_or(0, SparsePoly::arity);
        for im in images {
            if im.arity != target {
                return Err(PolyError::ArityMismatch(target, im.arity));
            }
        }
        let mut out = SparsePoly::zero(target);
        let mut powers: HashMap<(usize, u32), SparsePoly> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = SparsePoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let p = powers.entry((i, e)).or_insert_with(|| images[i].pow(e));
                    term = &term * &*p;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Applies the linear change of coordinates `x -> M x` (rows of `matrix`).
    pub fn linear_substitute(&self, matrix: &[Vec<Rational>]) -> Result<SparsePoly, PolyError> {
        let n = self.arity;
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(PolyError::ArityMismatch(n, matrix.len()));
        }
        let images: Vec<SparsePoly> = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(SparsePoly::zero(n), |acc, (j, a)| &acc + &SparsePoly::var(n, j).scale(a))
            })
            .collect();
        self.compose(&images)
    }

    /// Renders with the given variable names (defaults to `x0, x1, ...`).
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if abs != Rational::one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                let name = names.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{i}"));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_add(rhs).expect("arity mismatch")
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_sub(rhs).expect("arity mismatch")
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_mul(rhs).expect("arity mismatch")
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

/// Distinct weighted degrees of the terms of `p`.
pub fn weighted_degree_profile(p: &SparsePoly, weights: &[u64]) -> BTreeSet<u64> {
    assert_eq!(weights.len(), p.arity(), "one weight per variable");
    p.terms().map(|(m, _)| m.weighted_degree(weights)).collect()
}

/// An unexpanded polynomial expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Leaf(SparsePoly),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Neg(Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
    Scale(Rational, Box<PolyExpr>),
}

impl PolyExpr {
    pub fn leaf(p: SparsePoly) -> Self {
        PolyExpr::Leaf(p)
    }

    pub fn pow(self, k: u32) -> Self {
        PolyExpr::Pow(Box::new(self), k)
    }

    pub fn expand(&self) -> Result<SparsePoly, PolyError> {
        Ok(match self {
            PolyExpr::Leaf(p) => p.clone(),
            PolyExpr::Add(a, b) => a.expand()?.try_add(&b.expand()?)?,
            PolyExpr::Sub(a, b) => a.expand()?.try_sub(&b.expand()?)?,
            PolyExpr::Mul(a, b) => a.expand()?.try_mul(&b.expand()?)?,
            PolyExpr::Neg(a) => -&a.expand()?,
            PolyExpr::Pow(a, k) => a.expand()?.pow(*k),
            PolyExpr::Scale(c, a) => a.expand()?.scale(c),
        })
    }
}

impl Add for PolyExpr {
    type Output = PolyExpr;
    fn add(self, rhs: PolyExpr) -> PolyExpr {
        PolyExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for PolyExpr {
    type Output = PolyExpr;
    fn sub(self, rhs: PolyExpr) -> PolyExpr {
        PolyExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl Mul for PolyExpr {
    type Output = PolyExpr;
    fn mul(self, rhs: PolyExpr) -> PolyExpr {
        PolyExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl Neg for PolyExpr {
    type Output = PolyExpr;
    fn neg(self) -> PolyExpr {
        PolyExpr::Neg(Box::new(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PolyEquality {
    Equal,
    /// Leading monomial of `lhs - rhs`.
    Unequal { witness: Vec<u32> },
}

pub fn poly_equal(lhs: &PolyExpr, rhs: &PolyExpr) -> Result<PolyEquality, PolyError> {
    let l = lhs.expand()?;
    let r = rhs.expand()?;
    let diff = l.try_sub(&r)?;
    Ok(match diff.leading_monomial() {
        None => PolyEquality::Equal,
        Some(m) => PolyEquality::Unequal { witness: m.0.clone() },
    })
}

/// Parses a polynomial expression over `vars`, resolving other identifiers
/// in `env`. Grammar: `+ - * ^` (non-negative integer exponents), division by
/// constants, integer literals, parentheses.
pub fn parse_poly_expr(
    text: &str,
    vars: &[String],
    env: &HashMap<String, PolyExpr>,
) -> Result<PolyExpr, PolyError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars, env };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
    env: &'a HashMap<String, PolyExpr>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        let before = &self.src[..self.pos.min(self.src.len())];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let col = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        PolyError::Syntax { line, col, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<PolyExpr, PolyError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = lhs + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, PolyError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = lhs * self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?.expand()?;
                    let c = d.as_constant().and_then(|c| c.recip()).ok_or(PolyError::BadDivision)?;
                    lhs = PolyExpr::Scale(c, Box::new(lhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<PolyExpr, PolyError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("expected a non-negative integer exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PolyExpr, PolyError> {
        let arity = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: Rational = s.parse().map_err(|_| self.err("bad integer"))?;
                Ok(PolyExpr::Leaf(SparsePoly::constant(arity, v)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(i) = self.vars.iter().position(|v| v == name) {
                    Ok(PolyExpr::Leaf(SparsePoly::var(arity, i)))
                } else if let Some(e) = self.env.get(name) {
                    Ok(e.clone())
                } else {
                    self.pos = start;
                    Err(PolyError::Unknown(name.to_string()))
                }
            }
            Some(_) => Err(self.err("expected a number, identifier or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;
    use proptest::prelude::*;

    fn vars(names: &str) -> Vec<String> {
        names.split(',').map(|s| s.trim().to_string()).collect()
    }

    fn parse(text: &str, names: &str) -> SparsePoly {
        parse_poly_expr(text, &vars(names), &HashMap::new()).unwrap().expand().unwrap()
    }

    #[test]
    fn binomial() {
        let x = PolyExpr::leaf(SparsePoly::var(2, 0));
        let y = PolyExpr::leaf(SparsePoly::var(2, 1));
        let lhs = (x.clone() + y.clone()).pow(2);
        let two = PolyExpr::leaf(SparsePoly::constant(2, Rational::from(2)));
        let rhs = x.clone().pow(2) + two * x * y.clone() + y.pow(2);
        assert_eq!(poly_equal(&lhs, &rhs).unwrap(), PolyEquality::Equal);
    }

    #[test]
    fn distinct_monomials_witness() {
        let lhs = PolyExpr::leaf(parse("x^2*y", "x,y"));
        let rhs = PolyExpr::leaf(parse("x*y^2", "x,y"));
        assert_eq!(poly_equal(&lhs, &rhs).unwrap(), PolyEquality::Unequal { witness: vec![2, 1] });
    }

    #[test]
    fn arity_mismatch() {
        let a = PolyExpr::leaf(SparsePoly::var(2, 0));
        let b = PolyExpr::leaf(SparsePoly::var(3, 0));
        assert_eq!(poly_equal(&a, &b), Err(PolyError::ArityMismatch(2, 3)));
    }

    #[test]
    fn quasihomogeneous_profiles() {
        let p = parse("t^2*y + t*z^2 + x*y^4 + x^6*z", "x,y,z,t");
        assert_eq!(weighted_degree_profile(&p, &[11, 21, 29, 37]), BTreeSet::from([95]));
        let p = parse("z^2*t + y^4*z + x*t^2 + x^5*y", "x,y,z,t");
        assert_eq!(weighted_degree_profile(&p, &[13, 14, 23, 33]), BTreeSet::from([79]));
        let p = parse("x + y", "x,y");
        assert_eq!(weighted_degree_profile(&p, &[1, 2]), BTreeSet::from([1, 2]));
    }

    #[test]
    fn parse_division_and_errors() {
        assert_eq!(parse("(6*x)/4", "x"), SparsePoly::var(1, 0).scale(&q(3, 2)));
        assert!(matches!(
            parse_poly_expr("x/x", &vars("x"), &HashMap::new()),
            Err(PolyError::BadDivision)
        ));
        assert!(matches!(
            parse_poly_expr("x + w", &vars("x"), &HashMap::new()),
            Err(PolyError::Unknown(_))
        ));
        assert!(matches!(
            parse_poly_expr("x +", &vars("x"), &HashMap::new()),
            Err(PolyError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn display_round_trip() {
        let p = parse("3*x^2*y - y + 1/2", "x,y");
        let s = p.display_with(&["x", "y"]);
        assert_eq!(s, "3*x^2*y - y + 1/2");
        assert_eq!(parse(&s, "x,y"), p);
    }

    #[test]
    fn linear_substitution_swaps() {
        let p = parse("x^2 + y*z", "x,y,z");
        let swap = vec![
            vec![q(1, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(1, 1)],
            vec![q(0, 1), q(1, 1), q(0, 1)],
        ];
        assert_eq!(p.linear_substitute(&swap).unwrap(), p);
    }

    fn small_poly() -> impl Strategy<Value = SparsePoly> {
        proptest::collection::vec(
            (proptest::collection::vec(0u32..4, 3), -9i64..10, 1i64..5),
            0..6,
        )
        .prop_map(|ts| SparsePoly::from_terms(3, ts.into_iter().map(|(e, n, d)| (e, q(n, d)))))
    }

    fn homogeneous(weights: [u64; 3], degree: u64) -> impl Strategy<Value = SparsePoly> {
        // Monomials of exact weighted degree, chosen from the finite list.
        let mut monos = Vec::new();
        for a in 0..=degree / weights[0] {
            for b in 0..=degree / weights[1] {
                let used = a * weights[0] + b * weights[1];
                if used <= degree && (degree - used).is_multiple_of(weights[2]) {
                    monos.push(vec![a as u32, b as u32, ((degree - used) / weights[2]) as u32]);
                }
            }
        }
        proptest::collection::vec((proptest::sample::select(monos), 1i64..7), 1..4)
            .prop_map(|ts| SparsePoly::from_terms(3, ts.into_iter().map(|(e, n)| (e, q(n, 1)))))
            .prop_filter("nonzero", |p| !p.is_zero())
    }

    proptest! {
        #[test]
        fn ring_laws(p in small_poly(), qq in small_poly(), r in small_poly()) {
            let (lp, lq, lr) = (PolyExpr::leaf(p), PolyExpr::leaf(qq), PolyExpr::leaf(r));
            prop_assert_eq!(
                poly_equal(&(lp.clone() * lq.clone()), &(lq.clone() * lp.clone())).unwrap(),
                PolyEquality::Equal
            );
            prop_assert_eq!(
                poly_equal(&((lp.clone() + lq.clone()) * lr.clone()), &(lp * lr.clone() + lq * lr)).unwrap(),
                PolyEquality::Equal
            );
        }

        #[test]
        fn no_zero_coefficients(p in small_poly(), qq in small_poly()) {
            let s = &(&p * &qq) - &(&qq * &p);
            prop_assert!(s.is_zero());
            prop_assert!((&p + &qq).terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn weighted_degree_additive(p in homogeneous([2, 3, 5], 30), qq in homogeneous([2, 3, 5], 12)) {
            let w = [2, 3, 5];
            prop_assert_eq!(weighted_degree_profile(&(&p * &qq), &w), BTreeSet::from([42]));
        }
    }
}
