//! Hypersurfaces in weighted P^3 and their intersection ledgers.
//!
//! Coordinates are always `x, y, z, t` (indices 0..4). Curves are modelled
//! only through two shapes, a pair of vanishing coordinates or a coordinate
//! hyperplane cut by a second equation of known degree.

mod ledger_file;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{weighted_degree_profile, Cmp, Rational, SparsePoly};
use crate::local_ineq::{Check, HypothesisReport};

pub use ledger_file::{parse_ledger, render_ledger};

pub const COORDS: [&str; 4] = ["x", "y", "z", "t"];

pub fn coord_index(name: &str) -> Option<usize> {
    COORDS.iter().position(|c| *c == name)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WpsError {
    #[error("surface has no defining polynomial")]
    MissingPolynomial,
    #[error("amplitude {0} is not positive")]
    NonPositiveAmplitude(i64),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("invalid curve {0}")]
    InvalidCurve(String),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("missing table entries: {}", .0.join(", "))]
    MissingEntries(Vec<String>),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSurface {
    pub weights: [u64; 4],
    pub degree: u64,
    pub defining_poly: Option<SparsePoly>,
}

impl WeightedSurface {
    pub fn new(weights: [u64; 4], degree: u64) -> Result<Self, WpsError> {
        if weights.contains(&0) || degree == 0 {
            return Err(WpsError::InvalidSurface("weights and degree must be positive".into()));
        }
        Ok(WeightedSurface { weights, degree, defining_poly: None })
    }

    pub fn with_poly(mut self, p: SparsePoly) -> Result<Self, WpsError> {
        if p.arity() != 4 {
            return Err(WpsError::InvalidSurface(format!("polynomial has {} variables", p.arity())));
        }
        self.defining_poly = Some(p);
        Ok(self)
    }

    pub fn amplitude(&self) -> i64 {
        amplitude(&self.weights, self.degree)
    }

    pub fn weight_product(&self) -> u64 {
        self.weights.iter().product()
    }

    /// `K^2 = I^2 d / (a0 a1 a2 a3)`
    pub fn k_squared(&self) -> Rational {
        let i = self.amplitude();
        Rational::new(i * i * self.degree as i64, self.weight_product() as i64)
    }
}

/// `sum(weights) - degree`.
pub fn amplitude(weights: &[u64], degree: u64) -> i64 {
    weights.iter().sum::<u64>() as i64 - degree as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum QuasiCheck {
    Pass,
    /// Offending exponent vectors.
    Fail(Vec<Vec<u32>>),
}

pub fn check_quasihomogeneous(surface: &WeightedSurface) -> Result<QuasiCheck, WpsError> {
    let p = surface.defining_poly.as_ref().ok_or(WpsError::MissingPolynomial)?;
    let bad: Vec<Vec<u32>> = p
        .terms()
        .filter(|(m, _)| m.weighted_degree(&surface.weights) != surface.degree)
        .map(|(m, _)| m.0.clone())
        .collect();
    debug_assert_eq!(
        bad.is_empty(),
        weighted_degree_profile(p, &surface.weights) == BTreeSet::from([surface.degree])
    );
    Ok(if bad.is_empty() { QuasiCheck::Pass } else { QuasiCheck::Fail(bad) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveDescriptor {
    /// Both coordinates vanish.
    QuasiLine(usize, usize),
    /// Coordinate `i` vanishes together with a second equation of weighted
    /// degree `e`.
    CoordCut(usize, u64),
}

impl CurveDescriptor {
    pub fn validate(&self) -> Result<(), WpsError> {
        match *self {
            CurveDescriptor::QuasiLine(i, j) if i == j || i > 3 || j > 3 => {
                Err(WpsError::InvalidCurve(format!("line({i},{j})")))
            }
            CurveDescriptor::CoordCut(i, e) if i > 3 || e == 0 => {
                Err(WpsError::InvalidCurve(format!("cut({i},{e})")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CurveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CurveDescriptor::QuasiLine(i, j) => write!(f, "line({},{})", COORDS[i], COORDS[j]),
            CurveDescriptor::CoordCut(i, e) => write!(f, "cut({},{e})", COORDS[i]),
        }
    }
}

/// `O(m) . c`; `m` defaults to the amplitude.
pub fn anticanonical_pairing(
    surface: &WeightedSurface,
    c: &CurveDescriptor,
    m: Option<u64>,
) -> Result<Rational, WpsError> {
    c.validate()?;
    let m = match m {
        Some(m) => m as i64,
        None => {
            let i = surface.amplitude();
            if i <= 0 {
                return Err(WpsError::NonPositiveAmplitude(i));
            }
            i
        }
    };
    let w = &surface.weights;
    Ok(match *c {
        CurveDescriptor::QuasiLine(i, j) => {
            let den: u64 = (0..4).filter(|&k| k != i && k != j).map(|k| w[k]).product();
            Rational::new(m, den as i64)
        }
        CurveDescriptor::CoordCut(i, e) => {
            let den: u64 = (0..4).filter(|&k| k != i).map(|k| w[k]).product();
            Rational::new(m * e as i64, den as i64)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularPoint {
    pub name: String,
    /// Coordinate whose vertex this is.
    pub coord: usize,
    pub index: u64,
    pub local_type: (u64, u64),
    /// Incident curves with their local multiplicity.
    pub on: Vec<(String, u64)>,
}

/// An unordered pair of curve names.
pub fn pair_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceLedger {
    pub surface: WeightedSurface,
    pub curves: BTreeMap<String, CurveDescriptor>,
    pub decompositions: BTreeMap<usize, Vec<String>>,
    /// Keys from [`pair_key`].
    pub pairings: BTreeMap<(String, String), Rational>,
    /// Tabulated `D . curve` where `D` is the anticanonical class.
    pub anticanonical: BTreeMap<String, Rational>,
    pub self_intersections: BTreeMap<String, Rational>,
    pub singular_points: Vec<SingularPoint>,
}

impl SurfaceLedger {
    pub fn new(surface: WeightedSurface) -> Self {
        SurfaceLedger {
            surface,
            curves: BTreeMap::new(),
            decompositions: BTreeMap::new(),
            pairings: BTreeMap::new(),
            anticanonical: BTreeMap::new(),
            self_intersections: BTreeMap::new(),
            singular_points: Vec::new(),
        }
    }

    pub fn curve(&self, name: &str) -> Result<&CurveDescriptor, WpsError> {
        self.curves.get(name).ok_or_else(|| WpsError::UnknownCurve(name.to_string()))
    }

    /// Tabulated pairing of two distinct curves. Two quasi-lines with
    /// disjoint vanishing sets never meet, so that pairing is zero.
    pub fn pairing(&self, a: &str, b: &str) -> Option<Rational> {
        if let Some(v) = self.pairings.get(&pair_key(a, b)) {
            return Some(v.clone());
        }
        match (self.curves.get(a)?, self.curves.get(b)?) {
            (CurveDescriptor::QuasiLine(i, j), CurveDescriptor::QuasiLine(k, l))
                if BTreeSet::from([*i, *j, *k, *l]).len() == 4 =>
            {
                Some(Rational::zero())
            }
            _ => None,
        }
    }

    /// `D . curve`, from the table when present, else from the formula.
    pub fn d_pairing(&self, name: &str) -> Result<Rational, WpsError> {
        match self.anticanonical.get(name) {
            Some(v) => Ok(v.clone()),
            None => anticanonical_pairing(&self.surface, self.curve(name)?, None),
        }
    }

    /// `O(a_i) . curve` via linearity in the degree.
    pub fn coordinate_class_pairing(&self, i: usize, name: &str) -> Result<Rational, WpsError> {
        let amp = self.surface.amplitude();
        if amp <= 0 {
            return Err(WpsError::NonPositiveAmplitude(amp));
        }
        Ok(Rational::new(self.surface.weights[i] as i64, amp) * self.d_pairing(name)?)
    }

    fn check_names(&self) -> Result<(), WpsError> {
        let mut unknown = BTreeSet::new();
        let names = self
            .decompositions
            .values()
            .flatten()
            .chain(self.pairings.keys().flat_map(|(a, b)| [a, b]))
            .chain(self.anticanonical.keys())
            .chain(self.self_intersections.keys())
            .chain(self.singular_points.iter().flat_map(|p| p.on.iter().map(|(n, _)| n)));
        for n in names {
            if !self.curves.contains_key(n) {
                unknown.insert(n.clone());
            }
        }
        match unknown.into_iter().next() {
            Some(n) => Err(WpsError::UnknownCurve(n)),
            None => Ok(()),
        }
    }

    /// Self-intersections forced by the decomposition relations, one entry
    /// per (coordinate, component).
    pub fn derived_self_intersections(&self) -> Result<Vec<(usize, String, Rational)>, WpsError> {
        self.check_names()?;
        let mut missing = Vec::new();
        let mut out = Vec::new();
        for (&i, comps) in &self.decompositions {
            for g in comps {
                let mut v = self.coordinate_class_pairing(i, g)?;
                for l in comps.iter().filter(|l| *l != g) {
                    match self.pairing(g, l) {
                        Some(p) => v -= &p,
                        None => {
                            let (a, b) = pair_key(g, l);
                            missing.push(format!("{a}.{b}"));
                        }
                    }
                }
                out.push((i, g.clone(), v));
            }
        }
        if missing.is_empty() {
            Ok(out)
        } else {
            missing.sort();
            missing.dedup();
            Err(WpsError::MissingEntries(missing))
        }
    }
}

/// Verifies a ledger against the formulas and decomposition relations.
pub fn ledger_consistency(ledger: &SurfaceLedger) -> Result<HypothesisReport, WpsError> {
    ledger.check_names()?;
    for c in ledger.curves.values() {
        c.validate()?;
    }
    let s = &ledger.surface;
    let amp = s.amplitude();
    if amp <= 0 {
        return Err(WpsError::NonPositiveAmplitude(amp));
    }
    let mut missing = Vec::new();
    for comps in ledger.decompositions.values() {
        for g in comps {
            if !ledger.self_intersections.contains_key(g) {
                missing.push(format!("{g}^2"));
            }
        }
    }
    let derived = match ledger.derived_self_intersections() {
        Ok(d) => d,
        Err(WpsError::MissingEntries(m)) => {
            missing.extend(m);
            Vec::new()
        }
        Err(e) => return Err(e),
    };
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(WpsError::MissingEntries(missing));
    }

    let mut checks = Vec::new();

    if s.defining_poly.is_some() {
        let bad = match check_quasihomogeneous(s)? {
            QuasiCheck::Pass => 0,
            QuasiCheck::Fail(m) => m.len(),
        };
        checks.push(Check::new(
            format!("quasihomogeneous of degree {} (offending monomials)", s.degree),
            Rational::from(bad),
            Cmp::Eq,
            Rational::zero(),
        ));
    }

    // (i) tabulated D-pairings against the formula
    for (name, v) in &ledger.anticanonical {
        let formula = anticanonical_pairing(s, ledger.curve(name)?, None)?;
        checks.push(Check::new(format!("D.{name}"), v.clone(), Cmp::Eq, formula));
    }

    // (ii) decomposition relations recover self-intersections
    for (i, g, v) in derived {
        let table = ledger.self_intersections[&g].clone();
        checks.push(Check::new(format!("decomp {}: {g}^2", COORDS[i]), table, Cmp::Eq, v));
    }

    // additivity of the coordinate class over its components
    for (&i, comps) in &ledger.decompositions {
        let sum: Rational =
            comps.iter().map(|g| ledger.d_pairing(g)).collect::<Result<Vec<_>, _>>()?.into_iter().sum();
        let expected = Rational::new(
            amp * (s.weights[i] * s.degree) as i64,
            s.weight_product() as i64,
        );
        checks.push(Check::new(format!("additivity {}", COORDS[i]), sum, Cmp::Eq, expected));
    }

    // (iii) tabulated pairings against curves outside a decomposition
    for (&i, comps) in &ledger.decompositions {
        for g in ledger.curves.keys().filter(|g| !comps.contains(g)) {
            let parts: Option<Vec<Rational>> = comps.iter().map(|l| ledger.pairing(g, l)).collect();
            let Some(parts) = parts else { continue };
            let touches_table = comps.iter().any(|l| ledger.pairings.contains_key(&pair_key(g, l)));
            if !touches_table {
                continue;
            }
            checks.push(Check::new(
                format!("cross {}: {g}", COORDS[i]),
                parts.into_iter().sum(),
                Cmp::Eq,
                ledger.coordinate_class_pairing(i, g)?,
            ));
        }
    }

    for p in &ledger.singular_points {
        checks.push(Check::new(
            format!("{} index = wt({})", p.name, COORDS[p.coord]),
            Rational::from(p.index),
            Cmp::Eq,
            Rational::from(s.weights[p.coord]),
        ));
    }

    Ok(HypothesisReport::from_checks(checks))
}
