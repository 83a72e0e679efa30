//! Independent oracles for the integration tests. Arithmetic here goes
//! through `num_rational` directly and never calls the library's solvers.
#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use lctforge::exact::{Constraint, Relation};
use lctforge::Rational;

pub fn big(r: &Rational) -> BigRational {
    r.as_big().clone()
}

pub fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}


pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Gauss-Jordan on a square system; `None` when singular.
pub fn solve_square(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        rhs.swap(p, c);
        let inv = BigRational::one() / m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        rhs[c] = &rhs[c] * &inv;
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
                let v = &f * &rhs[c];
                rhs[r] -= v;
            }
        }
    }
    Some(rhs)
}

fn feasible(rows: &[Constraint], x: &[BigRational]) -> bool {
    rows.iter().all(|c| {
        let lhs: BigRational = c.coeffs.iter().zip(x).map(|(a, v)| big(a) * v).sum();
        let b = big(&c.bound);
        match c.relation {
            Relation::Le => lhs <= b,
            Relation::Ge => lhs >= b,
            Relation::Eq => lhs == b,
        }
    })
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Maximum of `objective` over a bounded polyhedron by enumerating every
/// basic solution. `None` means infeasible. Callers must guarantee
/// boundedness.
pub fn vertex_enum_max(n: usize, objective: &[BigRational], rows: &[Constraint]) -> Option<BigRational> {
    let mut best: Option<BigRational> = None;
    for pick in combinations(rows.len(), n) {
        let m: Vec<Vec<BigRational>> = pick.iter().map(|&i| rows[i].coeffs.iter().map(big).collect()).collect();
        let rhs: Vec<BigRational> = pick.iter().map(|&i| big(&rows[i].bound)).collect();
        let Some(x) = solve_square(m, rhs) else { continue };
        if !feasible(rows, &x) {
            continue;
        }
        let v: BigRational = objective.iter().zip(&x).map(|(a, b)| a * b).sum();
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best
}

/// Each `a_i` maximised separately over the `A_n` chain cone cut by
/// `a_1 + a_n <= 1`.
pub fn du_val_oracle(n: usize) -> Vec<BigRational> {
    let r = |v: i64| Rational::from(v);
    let mut rows = Vec::new();
    for j in 0..n {
        let mut c = vec![r(0); n];
        c[j] = r(2);
        if j > 0 {
            c[j - 1] = r(-1);
        }
        if j + 1 < n {
            c[j + 1] = r(-1);
        }
        rows.push(Constraint::new(c, Relation::Ge, r(0)));
        let mut e = vec![r(0); n];
        e[j] = r(1);
        rows.push(Constraint::new(e, Relation::Ge, r(0)));
    }
    let mut ends = vec![r(0); n];
    ends[0] = r(1);
    ends[n - 1] = r(1);
    rows.push(Constraint::new(ends, Relation::Le, r(1)));
    (0..n)
        .map(|i| {
            let mut obj = vec![BigRational::zero(); n];
            obj[i] = BigRational::one();
            vertex_enum_max(n, &obj, &rows).expect("chain polytope is nonempty")
        })
        .collect()
}

/// The two defining equalities of the vertex, solved by elimination of beta.
///
/// `alpha(A+M-1) = A^2(B+N-1) beta` and `alpha(1-M) + A beta = A`.
pub fn vertex_oracle(a: &BigRational, b: &BigRational, m: &BigRational, n: &BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    let k = a * a * (b + n - &one);
    // beta = alpha (A+M-1) / k
    let ratio = (a + m - &one) / &k;
    let alpha = a / ((&one - m) + a * &ratio);
    let beta = &alpha * ratio;
    (alpha, beta)
}

/// Theorem I hypotheses recomputed from scratch.
pub fn hypotheses_oracle(p: [&BigRational; 6]) -> bool {
    let [a, b, m, n, al, be] = p;
    let one = BigRational::one();
    let two = &one + &one;
    let first = a * (b - &one) >= one;
    let second = m <= &one && n <= &one;
    let third = al * (a + m - &one) >= a * a * (b + n - &one) * be;
    let fourth = al * (&one - m) + a * be >= *a;
    let fifth = &two * m + a * n <= two
        || al * (b + &one - m * b - n) + be * (a + &one - a * n - m) >= a * b - &one;
    first && second && third && fourth && fifth
}

/// `alpha*omega*x + beta*omega*y` in 128-bit rationals.
pub fn contradiction_value(alpha: (i128, i128), beta: (i128, i128), omega: (i128, i128), x: (i128, i128), y: (i128, i128)) -> Ratio<i128> {
    let r = |(n, d): (i128, i128)| Ratio::new(n, d);
    r(alpha) * r(omega) * r(x) + r(beta) * r(omega) * r(y)
}
