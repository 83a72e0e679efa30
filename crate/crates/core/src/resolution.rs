//! Chains of (-2)-curves resolving A_n points, and the linear systems they
//! impose on boundary coefficients.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{lp_optimize, Constraint, LinearProgram, LpError, LpOutcome, Rational, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("chain length must be at least 1")]
    EmptyChain,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("constraint system is infeasible: {}", .0.join("; "))]
    Infeasible(Vec<String>),
    #[error("coefficient a{0} is unbounded")]
    Unbounded(usize),
    #[error("need {needed} multiplicities, got {got}")]
    ShortTower { needed: usize, got: usize },
    #[error("negative multiplicity m{0}")]
    NegativeMultiplicity(usize),
    #[error("classes live on chains of length {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("classes disagree on the ambient K^2: {} vs {}", .0.0, .0.1)]
    AmbientMismatch(Box<(Rational, Rational)>),
}

/// The exceptional locus over an `A_n` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResolutionChain {
    n: usize,
}

pub fn an_chain(n: usize) -> Result<ResolutionChain, ResolutionError> {
    if n == 0 {
        Err(ResolutionError::EmptyChain)
    } else {
        Ok(ResolutionChain { n })
    }
}

impl ResolutionChain {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `E_i . E_j`, 1-based.
    pub fn pairing(&self, i: usize, j: usize) -> Rational {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j), "index out of range");
        match i.abs_diff(j) {
            0 => Rational::from(-2),
            1 => Rational::one(),
            _ => Rational::zero(),
        }
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        (1..=self.n).map(|i| (1..=self.n).map(|j| self.pairing(i, j)).collect()).collect()
    }

    /// Leading principal minors of the intersection matrix.
    pub fn leading_minors(&self) -> Vec<Rational> {
        let m = self.matrix();
        (1..=self.n)
            .map(|k| determinant(m[..k].iter().map(|r| r[..k].to_vec()).collect()))
            .collect()
    }

    /// Sylvester's criterion applied to the negated matrix.
    pub fn is_negative_definite(&self) -> bool {
        self.leading_minors().iter().enumerate().all(|(k, d)| {
            if k % 2 == 0 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        })
    }

    /// Rows `Dbar . E_j >= 0` in the coefficients `a_1..a_n`, where
    /// `Dbar = pullback - sum a_i E_i`.
    pub fn nef_rows(&self) -> Vec<Constraint> {
        (1..=self.n)
            .map(|j| {
                let coeffs = (1..=self.n).map(|i| -self.pairing(i, j)).collect();
                Constraint::new(coeffs, Relation::Ge, Rational::zero())
            })
            .collect()
    }

    /// The chain conditions, nonnegativity and `extra`, over `a_1..a_n`
    /// followed by any further variables `extra` mentions.
    pub fn constraint_system(&self, extra: &[Constraint], n_vars: usize) -> Vec<Constraint> {
        let pad = |mut c: Constraint| {
            c.coeffs.resize(n_vars, Rational::zero());
            c
        };
        let mut rows: Vec<Constraint> = self.nef_rows().into_iter().map(pad).collect();
        for i in 0..self.n {
            let mut e = vec![Rational::zero(); n_vars];
            e[i] = Rational::one();
            rows.push(Constraint::new(e, Relation::Ge, Rational::zero()));
        }
        rows.extend(extra.iter().cloned());
        rows
    }
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            let f = &m[r][c] / &pivot;
            if f.is_zero() {
                continue;
            }
            let (top, bottom) = m.split_at_mut(r);
            for (x, y) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= &(&f * y);
            }
        }
    }
    det
}

/// Largest admissible value of each `a_i`.
pub fn du_val_coefficient_bounds(
    chain: &ResolutionChain,
    extra: &[Constraint],
) -> Result<Vec<Rational>, ResolutionError> {
    let n = chain.len();
    let rows = chain.constraint_system(extra, n);
    (0..n)
        .map(|i| {
            let mut obj = vec![Rational::zero(); n];
            obj[i] = Rational::one();
            let mut lp = LinearProgram::maximize(obj);
            lp.constraints = rows.clone();
            match lp_optimize(&lp)? {
                LpOutcome::Optimal { value, .. } => Ok(value),
                LpOutcome::Unbounded => Err(ResolutionError::Unbounded(i + 1)),
                LpOutcome::Infeasible => Err(ResolutionError::Infeasible(
                    rows.iter().map(describe_row).collect(),
                )),
            }
        })
        .collect()
}

fn describe_row(c: &Constraint) -> String {
    let terms: Vec<String> = c
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| {
            if *a == Rational::one() {
                format!("a{}", i + 1)
            } else {
                format!("{a}*a{}", i + 1)
            }
        })
        .collect();
    let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    format!("{lhs} {} {}", c.relation, c.bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerInput {
    pub a1: Rational,
    pub a2: Rational,
    /// Multiplicities `m_0, m_1, ...`.
    pub m: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerEntry {
    pub coefficient: Rational,
    /// `0 <= coefficient <= 1`
    pub in_unit_interval: bool,
}

/// Coefficient of the `i`-th exceptional curve of the tower,
/// `a1 + i a2 - i + sum_{j<i} m_j`, for `i = 1..=n`.
pub fn tower_coefficients(t: &TowerInput, n: usize) -> Result<Vec<TowerEntry>, ResolutionError> {
    if t.m.len() < n {
        return Err(ResolutionError::ShortTower { needed: n, got: t.m.len() });
    }
    if let Some(j) = t.m.iter().position(Rational::is_negative) {
        return Err(ResolutionError::NegativeMultiplicity(j));
    }
    let mut partial = Rational::zero();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        partial += &t.m[i - 1];
        let i_q = Rational::from(i);
        let coefficient = &t.a1 + &i_q * &t.a2 - &i_q + &partial;
        let in_unit_interval = !coefficient.is_negative() && coefficient <= Rational::one();
        out.push(TowerEntry { coefficient, in_unit_interval });
    }
    Ok(out)
}

/// `k * pullback(-K) + sum e_i E_i` on the resolution of an `A_n` point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResClass {
    pub pullback: Rational,
    pub k_squared: Rational,
    pub exceptional: Vec<Rational>,
}

impl ResClass {
    pub fn new(pullback: Rational, k_squared: Rational, exceptional: Vec<Rational>) -> Self {
        ResClass { pullback, k_squared, exceptional }
    }

    pub fn exceptional_curve(n: usize, i: usize, k_squared: Rational) -> Self {
        let mut e = vec![Rational::zero(); n];
        e[i - 1] = Rational::one();
        ResClass::new(Rational::zero(), k_squared, e)
    }
}

pub fn resolution_pairing(
    c1: &ResClass,
    c2: &ResClass,
    chain: &ResolutionChain,
) -> Result<Rational, ResolutionError> {
    let n = chain.len();
    for c in [c1, c2] {
        if c.exceptional.len() != n {
            return Err(ResolutionError::LengthMismatch(c.exceptional.len(), n));
        }
    }
    if c1.k_squared != c2.k_squared {
        return Err(ResolutionError::AmbientMismatch(Box::new((c1.k_squared.clone(), c2.k_squared.clone()))));
    }
    let mut v = &c1.pullback * &c2.pullback * &c1.k_squared;
    for i in 1..=n {
        for j in 1..=n {
            let e = chain.pairing(i, j);
            if !e.is_zero() {
                v += &c1.exceptional[i - 1] * &c2.exceptional[j - 1] * e;
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn chain_shapes() {
        let c = an_chain(3).unwrap();
        assert_eq!(
            c.matrix(),
            vec![vec![r(-2), r(1), r(0)], vec![r(1), r(-2), r(1)], vec![r(0), r(1), r(-2)]]
        );
        assert_eq!(an_chain(1).unwrap().matrix(), vec![vec![r(-2)]]);
        let c4 = an_chain(4).unwrap();
        assert_eq!((c4.pairing(3, 4), c4.pairing(1, 3)), (r(1), r(0)));
        assert_eq!(an_chain(0), Err(ResolutionError::EmptyChain));
    }

    #[test]
    fn minors_alternate() {
        for n in 1..=12 {
            let c = an_chain(n).unwrap();
            let minors = c.leading_minors();
            for (k, d) in minors.iter().enumerate() {
                let k = k as i64 + 1;
                let sign = if k % 2 == 0 { 1 } else { -1 };
                assert_eq!(*d, r(sign * (k + 1)));
            }
            assert!(c.is_negative_definite());
        }
    }

    #[test]
    fn a3_a4_bounds() {
        let vars: Vec<String> = ["a1", "a2", "a3"].iter().map(|s| s.to_string()).collect();
        let extra = [crate::exact::parse_constraint("a1 + a3 <= 1", &vars).unwrap()];
        assert_eq!(
            du_val_coefficient_bounds(&an_chain(3).unwrap(), &extra).unwrap(),
            vec![q(3, 4), r(1), q(3, 4)]
        );
        let vars: Vec<String> = ["a1", "a2", "a3", "a4"].iter().map(|s| s.to_string()).collect();
        let extra = [crate::exact::parse_constraint("a1 + a4 <= 1", &vars).unwrap()];
        assert_eq!(
            du_val_coefficient_bounds(&an_chain(4).unwrap(), &extra).unwrap(),
            vec![q(4, 5), q(6, 5), q(6, 5), q(4, 5)]
        );
    }

    #[test]
    fn bounds_errors() {
        let c = an_chain(2).unwrap();
        assert_eq!(du_val_coefficient_bounds(&c, &[]), Err(ResolutionError::Unbounded(1)));
        let bad = [Constraint::new(vec![r(1), r(0)], Relation::Le, r(-1))];
        assert!(matches!(du_val_coefficient_bounds(&c, &bad), Err(ResolutionError::Infeasible(_))));
    }

    #[test]
    fn tower_examples() {
        let t = TowerInput { a1: r(1), a2: r(1), m: vec![r(0); 3] };
        let v: Vec<_> = tower_coefficients(&t, 3).unwrap().into_iter().map(|e| e.coefficient).collect();
        assert_eq!(v, vec![r(1); 3]);
        let t = TowerInput { a1: q(1, 2), a2: q(2, 3), m: vec![q(1, 3), q(1, 4)] };
        let v = tower_coefficients(&t, 2).unwrap();
        assert_eq!(v[0].coefficient, q(1, 2) + q(2, 3) - r(1) + q(1, 3));
        assert_eq!(v[1].coefficient, q(5, 12));
        assert!(v[1].in_unit_interval);
        assert_eq!(
            tower_coefficients(&t, 3),
            Err(ResolutionError::ShortTower { needed: 3, got: 2 })
        );
    }

    #[test]
    fn pairing_examples() {
        let c = an_chain(4).unwrap();
        let z = ResClass::new(r(2), r(1), vec![r(-1), r(-2), r(-2), r(-1)]);
        assert_eq!(resolution_pairing(&z, &z, &c).unwrap(), r(0));
        let d = ResClass::new(r(1), r(1), vec![r(0); 4]);
        for i in 1..=4 {
            let e = ResClass::exceptional_curve(4, i, r(1));
            assert_eq!(resolution_pairing(&d, &e, &c).unwrap(), r(0));
        }
        let e1 = ResClass::exceptional_curve(4, 1, r(1));
        let e1_2e2 = ResClass::new(r(0), r(1), vec![r(1), r(2), r(0), r(0)]);
        assert_eq!(resolution_pairing(&e1, &e1_2e2, &c).unwrap(), r(0));
        let short = ResClass::new(r(0), r(1), vec![r(0); 3]);
        assert!(resolution_pairing(&short, &d, &c).is_err());
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..6).prop_map(|(n, d)| q(n, d))
    }

    fn class(n: usize) -> impl Strategy<Value = ResClass> {
        (small(), proptest::collection::vec(small(), n))
            .prop_map(|(p, e)| ResClass::new(p, q(5, 1), e))
    }

    proptest! {
        #[test]
        fn pairing_symmetric_bilinear(a in class(4), b in class(4), c in class(4), s in small()) {
            let ch = an_chain(4).unwrap();
            prop_assert_eq!(resolution_pairing(&a, &b, &ch).unwrap(), resolution_pairing(&b, &a, &ch).unwrap());
            let combo = ResClass::new(
                &a.pullback * &s + &c.pullback,
                q(5, 1),
                a.exceptional.iter().zip(&c.exceptional).map(|(x, y)| x * &s + y).collect(),
            );
            prop_assert_eq!(
                resolution_pairing(&combo, &b, &ch).unwrap(),
                &s * resolution_pairing(&a, &b, &ch).unwrap() + resolution_pairing(&c, &b, &ch).unwrap()
            );
        }

        #[test]
        fn tower_telescopes(a1 in small(), n in 1usize..=50) {
            let t = TowerInput { a1: a1.clone(), a2: Rational::one(), m: vec![Rational::zero(); n] };
            for e in tower_coefficients(&t, n).unwrap() {
                prop_assert_eq!(&e.coefficient, &a1);
            }
        }
    }
}
