//! Exact linear programming over a handful of variables.
//!
//! Dense two-phase simplex with Bland's anticycling rule. Every variable is
//! free unless a constraint row says otherwise, so each user variable is split
//! into a difference of two nonnegative columns internally.
//!
//! When the optimum is attained on a face rather than a vertex, the returned
//! witness is the lexicographically smallest point of that face (coordinates
//! unbounded below on the face are pinned to the admissible value closest to
//! zero instead).

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::poly::parse_poly_expr;
use super::rational::Rational;

/// Largest number of user variables accepted.
pub const MAX_VARS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "==",
        })
    }
}

/// `coeffs · x  relation  bound`
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub bound: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, bound: Rational) -> Self {
        Constraint { coeffs, relation, bound }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x)
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        self.relation.holds(&self.lhs(x), &self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearProgram {
    pub n_vars: usize,
    pub objective: Vec<Rational>,
    pub sense: Sense,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(n_vars: usize, objective: Vec<Rational>, sense: Sense) -> Self {
        LinearProgram { n_vars, objective, sense, constraints: Vec::new() }
    }

    pub fn maximize(objective: Vec<Rational>) -> Self {
        Self::new(objective.len(), objective, Sense::Maximize)
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        Self::new(objective.len(), objective, Sense::Minimize)
    }

    pub fn constrain(mut self, coeffs: Vec<Rational>, relation: Relation, bound: Rational) -> Self {
        self.constraints.push(Constraint::new(coeffs, relation, bound));
        self
    }

    /// Adds `x_i >= 0` for every variable.
    pub fn nonnegative(mut self) -> Self {
        for i in 0..self.n_vars {
            let mut row = vec![Rational::zero(); self.n_vars];
            row[i] = Rational::one();
            self.constraints.push(Constraint::new(row, Relation::Ge, Rational::zero()));
        }
        self
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.n_vars == 0 {
            return Err(LpError::NoVariables);
        }
        if self.n_vars > MAX_VARS {
            return Err(LpError::TooManyVariables(self.n_vars));
        }
        if self.objective.len() != self.n_vars {
            return Err(LpError::DimensionMismatch {
                what: "objective".into(),
                expected: self.n_vars,
                found: self.objective.len(),
            });
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.n_vars {
                return Err(LpError::DimensionMismatch {
                    what: format!("constraint {k}"),
                    expected: self.n_vars,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.n_vars && self.constraints.iter().all(|c| c.satisfied_by(x))
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch in {what}: expected {expected} coefficients, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },
    #[error("linear program has no variables")]
    NoVariables,
    #[error("{0} variables exceeds the supported maximum of {MAX_VARS}")]
    TooManyVariables(usize),
    #[error("cannot read linear form `{text}`: {msg}")]
    Parse { text: String, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LpOutcome {
    Optimal { value: Rational, witness: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Solves `lp` exactly.
pub fn lp_optimize(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let n = lp.n_vars;
    let value = match solve_raw(lp) {
        Raw::Optimal(x) => lp.objective_at(&x),
        Raw::Infeasible => return Ok(LpOutcome::Infeasible),
        Raw::Unbounded => return Ok(LpOutcome::Unbounded),
    };

    // Walk the optimal face coordinate by coordinate.
    let mut face = lp.clone();
    face.sense = Sense::Minimize;
    face.constraints.push(Constraint::new(lp.objective.clone(), Relation::Eq, value.clone()));
    let mut witness = Vec::with_capacity(n);
    for i in 0..n {
        let mut unit = vec![Rational::zero(); n];
        unit[i] = Rational::one();
        face.objective = unit.clone();
        face.sense = Sense::Minimize;
        let pinned = match solve_raw(&face) {
            Raw::Optimal(x) => x[i].clone(),
            Raw::Unbounded => {
                face.sense = Sense::Maximize;
                match solve_raw(&face) {
                    Raw::Optimal(x) if x[i].is_negative() => x[i].clone(),
                    _ => Rational::zero(),
                }
            }
            Raw::Infeasible => unreachable!("optimal face lost feasibility"),
        };
        face.constraints.push(Constraint::new(unit, Relation::Eq, pinned.clone()));
        witness.push(pinned);
    }
    debug_assert!(lp.is_feasible_point(&witness));
    debug_assert_eq!(lp.objective_at(&witness), value);
    Ok(LpOutcome::Optimal { value, witness })
}

/// Reads an affine form over `vars`, returning `(coefficients, constant)`.
pub fn parse_affine(text: &str, vars: &[String]) -> Result<(Vec<Rational>, Rational), LpError> {
    let err = |msg: String| LpError::Parse { text: text.to_string(), msg };
    let p = parse_poly_expr(text, vars, &Default::default())
        .and_then(|e| e.expand())
        .map_err(|e| err(e.to_string()))?;
    if p.total_degree().unwrap_or(0) > 1 {
        return Err(err("not linear".into()));
    }
    let mut coeffs = vec![Rational::zero(); vars.len()];
    let mut constant = Rational::zero();
    for (m, c) in p.terms() {
        match m.0.iter().position(|&e| e == 1) {
            Some(i) => coeffs[i] = c.clone(),
            None => constant = c.clone(),
        }
    }
    Ok((coeffs, constant))
}

/// Reads `lhs REL rhs` with `REL` one of `<=`, `>=`, `==`.
pub fn parse_constraint(text: &str, vars: &[String]) -> Result<Constraint, LpError> {
    let (lhs, rel, rhs) = [("<=", Relation::Le), (">=", Relation::Ge), ("==", Relation::Eq)]
        .iter()
        .find_map(|(sym, rel)| text.split_once(sym).map(|(l, r)| (l, *rel, r)))
        .ok_or_else(|| LpError::Parse {
            text: text.to_string(),
            msg: "expected one of <=, >=, ==".into(),
        })?;
    let (lc, lk) = parse_affine(lhs, vars)?;
    let (rc, rk) = parse_affine(rhs, vars)?;
    let coeffs = lc.iter().zip(&rc).map(|(a, b)| a - b).collect();
    Ok(Constraint::new(coeffs, rel, rk - lk))
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

enum Raw {
    Optimal(Vec<Rational>),
    Infeasible,
    Unbounded,
}

// Column layout: [x0+, x0-, x1+, x1-, ..., slacks..., artificials...]
fn solve_raw(lp: &LinearProgram) -> Raw {
    let n = lp.n_vars;
    let m = lp.constraints.len();
    let n_slack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let n_struct = 2 * n + n_slack;
    let width = n_struct + m;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut slack = 2 * n;
    for (r, c) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); width];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[2 * j] = a.clone();
            row[2 * j + 1] = -a;
        }
        match c.relation {
            Relation::Le => {
                row[slack] = Rational::one();
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        let mut b = c.bound.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
            b = -b;
        }
        row[n_struct + r] = Rational::one();
        rows.push(row);
        rhs.push(b);
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis: (n_struct..n_struct + m).collect(),
        cost: vec![Rational::zero(); width],
        allowed: width,
    };

    // Phase one: minimise the sum of artificials.
    let mut phase1 = vec![Rational::zero(); width];
    for v in phase1.iter_mut().skip(n_struct) {
        *v = Rational::one();
    }
    t.set_cost(&phase1);
    t.run();
    let infeasibility: Rational =
        t.basis.iter().zip(&t.rhs).filter(|(b, _)| **b >= n_struct).map(|(_, v)| v).sum();
    if infeasibility.is_positive() {
        return Raw::Infeasible;
    }

    // Drive remaining (zero-valued) artificials out of the basis.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n_struct {
            match (0..n_struct).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => {
                    t.pivot(r, j);
                    r += 1;
                }
                None => {
                    t.rows.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }
    t.allowed = n_struct;

    // Phase two.
    let mut cost = vec![Rational::zero(); width];
    for (j, c) in lp.objective.iter().enumerate() {
        let c = match lp.sense {
            Sense::Minimize => c.clone(),
            Sense::Maximize => -c,
        };
        cost[2 * j + 1] = -&c;
        cost[2 * j] = c;
    }
    t.set_cost(&cost);
    if !t.run() {
        return Raw::Unbounded;
    }

    let mut col = vec![Rational::zero(); width];
    for (b, v) in t.basis.iter().zip(&t.rhs) {
        col[*b] = v.clone();
    }
    Raw::Optimal((0..n).map(|j| &col[2 * j] - &col[2 * j + 1]).collect())
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs.
    cost: Vec<Rational>,
    /// Columns at or beyond this index never enter.
    allowed: usize,
}

impl Tableau {
    fn set_cost(&mut self, c: &[Rational]) {
        self.cost = c.to_vec();
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            let f = self.cost[b].clone();
            if !f.is_zero() {
                for (cj, a) in self.cost.iter_mut().zip(&self.rows[r]) {
                    *cj -= &(&f * a);
                }
            }
        }
    }

    /// Returns false on unboundedness.
    fn run(&mut self) -> bool {
        loop {
            let Some(enter) = (0..self.allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if p != Rational::one() {
            for v in self.rows[r].iter_mut() {
                *v = &*v / &p;
            }
            self.rhs[r] = &self.rhs[r] / &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for k in 0..self.rows.len() {
            if k == r {
                continue;
            }
            let f = self.rows[k][c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, a) in self.rows[k].iter_mut().zip(&prow) {
                if !a.is_zero() {
                    *v -= &(&f * a);
                }
            }
            self.rhs[k] -= &(&f * &prhs);
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for (v, a) in self.cost.iter_mut().zip(&prow) {
                if !a.is_zero() {
                    *v -= &(&f * a);
                }
            }
        }
        self.basis[r] = c;
    }
}
