//! Picard lattices of blow-ups of P^2, the quadro-quintic involution on six
//! points, untwisting arithmetic, quadratic multiplicity bounds and a table
//! of small group orbits.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{PolyError, Rational, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicError {
    #[error("class is not in span(H, E): exceptional coefficients differ")]
    OutsideSpan,
    #[error("the involution acts on the blow-up of 6 points, class has {0}")]
    WrongPointCount(usize),
    #[error("exceptional counts differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("mu must be positive, got {0}")]
    NonPositiveMu(Rational),
    #[error("singular untwist: 15/mu - 12 mult = {0} is not positive")]
    SingularUntwist(Rational),
    #[error("zero denominator in the quadratic bound")]
    ZeroDenominator,
    #[error("no orbit data for group `{0}` on `{1}`")]
    UnknownOrbit(String, String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `h H + sum e_i E_i` with `H^2 = 1`, `E_i^2 = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicClass {
    pub h: Rational,
    pub e: Vec<Rational>,
}

impl PicClass {
    pub fn new(h: Rational, e: Vec<Rational>) -> Self {
        PicClass { h, e }
    }

    /// `h H + e (E_1 + ... + E_k)`
    pub fn symmetric(h: Rational, e: Rational, k: usize) -> Self {
        PicClass { h, e: vec![e; k] }
    }

    pub fn hyperplane(k: usize) -> Self {
        Self::symmetric(Rational::one(), Rational::zero(), k)
    }

    /// `K = -3H + sum E_i`
    pub fn canonical(k: usize) -> Self {
        Self::symmetric(Rational::from(-3), Rational::one(), k)
    }

    pub fn pair(&self, other: &PicClass) -> Result<Rational, PicError> {
        if self.e.len() != other.e.len() {
            return Err(PicError::RankMismatch(self.e.len(), other.e.len()));
        }
        let ex: Rational = self.e.iter().zip(&other.e).map(|(a, b)| a * b).sum();
        Ok(&self.h * &other.h - ex)
    }

    pub fn square(&self) -> Rational {
        self.pair(self).unwrap()
    }

    /// The common exceptional coefficient, if all agree.
    pub fn symmetric_part(&self) -> Option<&Rational> {
        let first = self.e.first()?;
        self.e.iter().all(|x| x == first).then_some(first)
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.symmetric_part() {
            Some(e) => write!(f, "{}H + {}E", self.h, e),
            None => {
                write!(f, "{}H", self.h)?;
                for (i, e) in self.e.iter().enumerate() {
                    write!(f, " + {}E{}", e, i + 1)?;
                }
                Ok(())
            }
        }
    }
}

/// `H -> 5H - 2E`, `E -> 12H - 5E` on `span(H, E)`, `E = E_1 + ... + E_6`.
pub fn apply_involution(c: &PicClass) -> Result<PicClass, PicError> {
    if c.e.len() != 6 {
        return Err(PicError::WrongPointCount(c.e.len()));
    }
    let e = c.symmetric_part().ok_or(PicError::OutsideSpan)?;
    let h2 = Rational::from(5) * &c.h + Rational::from(12) * e;
    let e2 = Rational::from(-2) * &c.h - Rational::from(5) * e;
    Ok(PicClass::symmetric(h2, e2, 6))
}

/// `(mu', mult')` after composing with the involution.
pub fn untwist(mu: &Rational, mult: &Rational) -> Result<(Rational, Rational), PicError> {
    if !mu.is_positive() {
        return Err(PicError::NonPositiveMu(mu.clone()));
    }
    let den = Rational::from(15) / mu - Rational::from(12) * mult;
    if !den.is_positive() {
        return Err(PicError::SingularUntwist(den));
    }
    let mu2 = Rational::from(3) / den;
    let mult2 = Rational::from(6) / mu - Rational::from(5) * mult;
    Ok((mu2, mult2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PukhlikovForm {
    /// `(2s0 + s1 - c)^2 / ((s0 + s1) s0)`
    WithSigma0,
    /// `(2s0 + s1 - c)^2 / (s0 + s1)`
    WithoutSigma0,
}

pub fn pukhlikov_bound(
    sigma0: &Rational,
    sigma1: &Rational,
    c: &Rational,
    form: PukhlikovForm,
) -> Result<Rational, PicError> {
    let num = Rational::from(2) * sigma0 + sigma1 - c;
    let num = &num * &num;
    let den = match form {
        PukhlikovForm::WithSigma0 => (sigma0 + sigma1) * sigma0,
        PukhlikovForm::WithoutSigma0 => sigma0 + sigma1,
    };
    num.checked_div(&den).ok_or(PicError::ZeroDenominator)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitDatum {
    pub group: String,
    pub space: String,
    pub min_orbit: u64,
    pub known_orbit_sizes: BTreeSet<u64>,
    /// Whether `known_orbit_sizes` lists every non-generic orbit.
    pub complete: bool,
    pub source: String,
}

struct OrbitRow {
    group: &'static str,
    spaces: &'static [&'static str],
    min: u64,
    sizes: &'static [u64],
    complete: bool,
    source: &'static str,
}

const ORBITS: &[OrbitRow] = &[
    OrbitRow {
        group: "A5",
        spaces: &["P1"],
        min: 12,
        sizes: &[12, 20, 30],
        complete: true,
        source: "icosahedral action on the projective line: vertices, faces, edges",
    },
    OrbitRow {
        group: "A5",
        spaces: &["P2", "P2 icosahedral"],
        min: 6,
        sizes: &[6],
        complete: false,
        source: "three-dimensional icosahedral representation; every orbit has at least 6 points",
    },
    OrbitRow {
        group: "A5",
        spaces: &["conic", "invariant conic"],
        min: 12,
        sizes: &[12, 20, 30],
        complete: true,
        source: "the invariant conic is the projective line with the icosahedral action",
    },
    OrbitRow {
        group: "A6",
        spaces: &["P2"],
        min: 12,
        sizes: &[],
        complete: false,
        source: "Valentiner action on the plane; orbits have at least 12 points",
    },
    OrbitRow {
        group: "PSL(2,7)",
        spaces: &["dP", "del Pezzo"],
        min: 12,
        sizes: &[],
        complete: false,
        source: "Klein action on its invariant del Pezzo surface; orbits have at least 12 points",
    },
    OrbitRow {
        group: "A5",
        spaces: &["dP5", "quintic del Pezzo"],
        min: 6,
        sizes: &[6],
        complete: false,
        source: "A5 acting on the quintic del Pezzo surface; smallest orbit has 6 points",
    },
];

pub fn min_orbit_size(group: &str, space: &str) -> Result<OrbitDatum, PicError> {
    let g = group.trim();
    let s = space.trim();
    ORBITS
        .iter()
        .find(|r| r.group.eq_ignore_ascii_case(g) && r.spaces.iter().any(|x| x.eq_ignore_ascii_case(s)))
        .map(|r| OrbitDatum {
            group: r.group.to_string(),
            space: r.spaces[0].to_string(),
            min_orbit: r.min,
            known_orbit_sizes: r.sizes.iter().copied().collect(),
            complete: r.complete,
            source: r.source.to_string(),
        })
        .ok_or_else(|| PicError::UnknownOrbit(g.to_string(), s.to_string()))
}

/// Every orbit at least as large as `K^2` suffices for superrigidity.
pub fn superrigidity_orbit_test(k_squared: &Rational, min_orbit: u64) -> bool {
    Rational::from(min_orbit) >= *k_squared
}

/// `p(M x) = lambda p(x)`; returns `lambda` if `p` is semi-invariant.
pub fn invariance_character(p: &SparsePoly, matrix: &[Vec<Rational>]) -> Result<Option<Rational>, PicError> {
    let image = p.linear_substitute(matrix)?;
    let Some((m, c)) = p.terms().next_back() else {
        return Ok(Some(Rational::one()));
    };
    let lambda = &image.coeff(&m.0) / c;
    Ok((image == p.scale(&lambda)).then_some(lambda))
}
