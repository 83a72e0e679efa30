//! Local inequalities: the two-curve hypothesis system, its implied
//! inequalities, refutation gates and the closed-form multiplicity bounds.

#![allow(non_snake_case)]
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{Cmp, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("parameter {0} is negative")]
    NegativeParameter(&'static str),
    #[error("hypotheses fail: {0}")]
    PreconditionFailed(String),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Rational),
    #[error("exponent list is empty")]
    EmptyExponents,
    #[error("exponents must be positive")]
    ZeroExponent,
}

/// The six numbers `(A, B, M, N, alpha, beta)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThmIParams {
    pub a: Rational,
    pub b: Rational,
    pub m: Rational,
    pub n: Rational,
    pub alpha: Rational,
    pub beta: Rational,
}

impl ThmIParams {
    pub fn new(
        a: Rational,
        b: Rational,
        m: Rational,
        n: Rational,
        alpha: Rational,
        beta: Rational,
    ) -> Result<Self, LocalError> {
        let p = ThmIParams { a, b, m, n, alpha, beta };
        for (name, v) in p.named() {
            if v.is_negative() {
                return Err(LocalError::NegativeParameter(name));
            }
        }
        Ok(p)
    }

    fn named(&self) -> [(&'static str, &Rational); 6] {
        [
            ("A", &self.a),
            ("B", &self.b),
            ("M", &self.m),
            ("N", &self.n),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
        ]
    }

    /// `(M + A a1 - a2, N + B a2 - a1)`
    pub fn thresholds(&self, a1: &Rational, a2: &Rational) -> (Rational, Rational) {
        (&self.m + &self.a * a1 - a2, &self.n + &self.b * a2 - a1)
    }
}

impl fmt::Display for ThmIParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A={} B={} M={} N={} alpha={} beta={}",
            self.a, self.b, self.m, self.n, self.alpha, self.beta
        )
    }
}

/// The parameters that specialise the general statement to two curves
/// meeting transversally at a smooth point.
pub fn smooth_point_params() -> ThmIParams {
    use crate::exact::q;
    ThmIParams::new(q(2, 1), q(3, 2), q(0, 1), q(0, 1), q(1, 1), q(1, 2)).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: Rational,
    pub relation: Cmp,
    pub rhs: Rational,
    pub holds: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: Rational, relation: Cmp, rhs: Rational) -> Self {
        let holds = relation.holds(&lhs, &rhs);
        Check { name: name.into(), lhs, relation, rhs, holds }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} {} {}",
            if self.holds { "ok  " } else { "FAIL" },
            self.name,
            self.lhs,
            self.relation,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub checks: Vec<Check>,
    pub overall: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl HypothesisReport {
    pub fn from_checks(checks: Vec<Check>) -> Self {
        let overall = checks.iter().all(|c| c.holds);
        HypothesisReport { checks, overall, notes: Vec::new() }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(f, "overall {}", if self.overall { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RefutationVerdict {
    Refuted,
    Inconclusive,
    NotApplicable(String),
}

impl fmt::Display for RefutationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefutationVerdict::Refuted => f.write_str("refuted"),
            RefutationVerdict::Inconclusive => f.write_str("inconclusive"),
            RefutationVerdict::NotApplicable(why) => write!(f, "not_applicable ({why})"),
        }
    }
}

pub const NORMALIZATION_NOTE: &str = "the B+D-1 term is read as B+N-1";

/// Checks the hypothesis system on `p`.
///
/// Five checks: `A(B-1) >= 1`, `1 >= max(M,N)`, the two linear conditions
/// on `(alpha, beta)`, and the disjunction `2M+AN <= 2 or
/// alpha(B+1-MB-N)+beta(A+1-AN-M) >= AB-1` as a single entry.
pub fn check_theorem_I_hypotheses(p: &ThmIParams) -> HypothesisReport {
    let one = Rational::one();
    let (a, b, m, n) = (&p.a, &p.b, &p.m, &p.n);
    let mut checks = vec![
        Check::new("A(B-1) >= 1", a * (b - &one), Cmp::Ge, one.clone()),
        Check::new("1 >= max(M,N)", one.clone(), Cmp::Ge, m.clone().max(n.clone())),
        Check::new(
            "alpha(A+M-1) >= A^2(B+N-1)beta",
            &p.alpha * (a + m - &one),
            Cmp::Ge,
            a * a * (b + n - &one) * &p.beta,
        ),
        Check::new("alpha(1-M)+A*beta >= A", &p.alpha * (&one - m) + a * &p.beta, Cmp::Ge, a.clone()),
    ];
    let two = Rational::from(2);
    let first = Check::new("2M+AN <= 2", &two * m + a * n, Cmp::Le, two.clone());
    let second = Check::new(
        "alpha(B+1-MB-N)+beta(A+1-AN-M) >= AB-1",
        &p.alpha * (b + &one - m * b - n) + &p.beta * (a + &one - a * n - m),
        Cmp::Ge,
        a * b - &one,
    );
    // Report whichever branch holds (the first when neither does).
    let branch = if first.holds || !second.holds { first } else { second };
    checks.push(Check {
        name: format!("2M+AN <= 2 or alpha(B+1-MB-N)+beta(A+1-AN-M) >= AB-1 [{}]", branch.name),
        ..branch
    });
    HypothesisReport::from_checks(checks).with_note(NORMALIZATION_NOTE)
}

/// The six consequences of the hypothesis system.
pub fn implied_inequalities_lemma20(p: &ThmIParams) -> Result<HypothesisReport, LocalError> {
    let hyp = check_theorem_I_hypotheses(p);
    if !hyp.overall {
        let failed: Vec<_> = hyp.failures().map(|c| c.name.clone()).collect();
        return Err(LocalError::PreconditionFailed(failed.join("; ")));
    }
    let one = Rational::one();
    let two = Rational::from(2);
    let (a, b, m, n, al, be) = (&p.a, &p.b, &p.m, &p.n, &p.alpha, &p.beta);
    let checks = vec![
        Check::new("B > 1", b.clone(), Cmp::Gt, one.clone()),
        Check::new("A+M >= 1", a + m, Cmp::Ge, one.clone()),
        Check::new(
            "alpha(B+1-MB-N)+beta(A+1-AN-M) >= AB-1",
            al * (b + &one - m * b - n) + be * (a + &one - a * n - m),
            Cmp::Ge,
            a * b - &one,
        ),
        Check::new("beta(1-N)+B*alpha >= B", be * (&one - n) + b * al, Cmp::Ge, b.clone()),
        Check::new(
            "alpha(2-M)/(A+1)+beta(2-N)/(B+1) >= 1",
            al * (&two - m) / (a + &one) + be * (&two - n) / (b + &one),
            Cmp::Ge,
            one.clone(),
        ),
        Check::new(
            "alpha(2-M)B+beta(1-N)(A+1) >= B(A+1)",
            al * (&two - m) * b + be * (&one - n) * (a + &one),
            Cmp::Ge,
            b * (a + &one),
        ),
    ];
    Ok(HypothesisReport::from_checks(checks).with_note(NORMALIZATION_NOTE))
}

/// Refutation gate: given the observed local pairings `m1`, `m2`, decides
/// whether both required strict inequalities fail.
pub fn theorem_I_refute(
    p: &ThmIParams,
    a1: &Rational,
    a2: &Rational,
    m1: &Rational,
    m2: &Rational,
) -> Result<RefutationVerdict, LocalError> {
    if a1.is_negative() {
        return Err(LocalError::NegativeParameter("a1"));
    }
    if a2.is_negative() {
        return Err(LocalError::NegativeParameter("a2"));
    }
    let hyp = check_theorem_I_hypotheses(p);
    if !hyp.overall {
        let failed: Vec<_> = hyp.failures().map(|c| c.name.clone()).collect();
        return Ok(RefutationVerdict::NotApplicable(format!("hypotheses fail: {}", failed.join("; "))));
    }
    let gate = &p.alpha * a1 + &p.beta * a2;
    if gate > Rational::one() {
        return Ok(RefutationVerdict::NotApplicable(format!("alpha*a1+beta*a2 = {gate} > 1")));
    }
    let (t1, t2) = p.thresholds(a1, a2);
    Ok(if *m1 <= t1 && *m2 <= t2 {
        RefutationVerdict::Refuted
    } else {
        RefutationVerdict::Inconclusive
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VertexOutcome {
    Vertex { alpha: Rational, beta: Rational },
    Infeasible(String),
}

/// Solves the two defining linear conditions with equality and validates
/// the full hypothesis system at the solution.
pub fn vertex_alpha_beta(
    a: &Rational,
    b: &Rational,
    m: &Rational,
    n: &Rational,
) -> Result<VertexOutcome, LocalError> {
    for (name, v) in [("A", a), ("B", b), ("M", m), ("N", n)] {
        if v.is_negative() {
            return Err(LocalError::NegativeParameter(name));
        }
    }
    let one = Rational::one();
    if *m >= one {
        return Ok(VertexOutcome::Infeasible(format!("M = {m} is not below 1")));
    }
    let c = a + m - &one;
    if !c.is_positive() {
        return Ok(VertexOutcome::Infeasible(format!("A+M = {} is not above 1", a + m)));
    }
    // [ c          -A^2(B+N-1) ] [alpha]   [0]
    // [ 1-M         A          ] [beta ] = [A]
    let k = a * a * (b + n - &one);
    let det = &c * a + &k * (&one - m);
    if det.is_zero() {
        return Ok(VertexOutcome::Infeasible("singular 2x2 system".into()));
    }
    let alpha = &k * a / &det;
    let beta = &c * a / &det;
    let p = ThmIParams::new(a.clone(), b.clone(), m.clone(), n.clone(), alpha.clone(), beta.clone());
    let p = match p {
        Ok(p) => p,
        Err(e) => return Ok(VertexOutcome::Infeasible(e.to_string())),
    };
    let report = check_theorem_I_hypotheses(&p);
    if !report.overall {
        let failed: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
        return Ok(VertexOutcome::Infeasible(format!(
            "vertex ({alpha}, {beta}) fails: {}",
            failed.join("; ")
        )));
    }
    Ok(VertexOutcome::Vertex { alpha, beta })
}

fn positive_eps(eps: &Rational) -> Result<(), LocalError> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(LocalError::NonPositiveEpsilon(eps.clone()))
    }
}

/// Lower bound for the local intersection of a mobile pencil through a
/// non-canonical centre, with a two-curve boundary.
pub fn corti_bound(a1: &Rational, a2: &Rational, eps: &Rational) -> Result<Rational, LocalError> {
    positive_eps(eps)?;
    let one = Rational::one();
    let four = Rational::from(4);
    let e2 = eps * eps;
    Ok(if !a1.is_negative() || !a2.is_negative() {
        four * (&one - a1) * (&one - a2) / e2
    } else {
        four * (&one - a1 - a2) / e2
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileKind {
    NegativeIntegerCoefficient,
    ZeroCoefficient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityProfile {
    pub kind: ProfileKind,
    pub required_multiplicity: Rational,
}

/// One-curve version of [`corti_bound`], with the equality cases consistent
/// with `a1`.
pub fn mobile_bound_thmII(
    a1: &Rational,
    eps: &Rational,
) -> Result<(Rational, Vec<EqualityProfile>), LocalError> {
    positive_eps(eps)?;
    let one = Rational::one();
    let e2 = eps * eps;
    let bound = if *a1 >= Rational::new(-1, 2) {
        (&one - Rational::from(2) * a1) / &e2
    } else {
        Rational::from(-4) * a1 / &e2
    };
    let mut profiles = Vec::new();
    if a1.is_negative() && a1.is_integer() {
        profiles.push(EqualityProfile {
            kind: ProfileKind::NegativeIntegerCoefficient,
            required_multiplicity: Rational::from(2) / eps,
        });
    }
    if a1.is_zero() {
        profiles.push(EqualityProfile {
            kind: ProfileKind::ZeroCoefficient,
            required_multiplicity: &one / eps,
        });
    }
    Ok((bound, profiles))
}

/// The restriction of a non-lc boundary to a component through the centre
/// must exceed `threshold` strictly; a pairing at or below it refutes.
pub fn adjunction_refute(pairing: &Rational, threshold: &Rational) -> RefutationVerdict {
    if pairing <= threshold {
        RefutationVerdict::Refuted
    } else {
        RefutationVerdict::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MonomialForm {
    /// `sum x_i^{m_i}`
    Diagonal,
    /// `prod x_i^{m_i}`
    Product,
}

pub fn lct_monomial(exponents: &[u64], form: MonomialForm) -> Result<Rational, LocalError> {
    if exponents.is_empty() {
        return Err(LocalError::EmptyExponents);
    }
    if exponents.contains(&0) {
        return Err(LocalError::ZeroExponent);
    }
    let recips = exponents.iter().map(|&m| Rational::new(1, m));
    Ok(match form {
        MonomialForm::Diagonal => recips.sum::<Rational>().min(Rational::one()),
        MonomialForm::Product => recips.min().unwrap(),
    })
}
