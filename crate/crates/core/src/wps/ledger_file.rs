//! Line-oriented ledger files.
//!
//! ```text
//! surface weights=11,21,29,37 degree=95
//! equation t^2*y + t*z^2 + x*y^4 + x^6*z
//! curve L_xt = line(x,t)
//! curve R_x = cut(x,58)
//! decomp x = L_xt + R_x
//! pair L_xt.R_x = 2/21
//! pair D.L_xt = 1/203
//! self L_xt = -47/609
//! point O_y index=21 type=1,2 on=L_xt:1,R_x:1
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{
    coord_index, pair_key, CurveDescriptor, SingularPoint, SurfaceLedger, WeightedSurface,
    WpsError, COORDS,
};
use crate::exact::{parse_poly_expr, PolyError, Rational};

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn err_at(&self, part: &str, msg: impl Into<String>) -> WpsError {
        // `part` is always a subslice of `text`.
        let offset = part.as_ptr() as usize - self.text.as_ptr() as usize;
        WpsError::Parse { line: self.no, col: offset + 1, msg: msg.into() }
    }

    /// Whitespace-separated words, as subslices.
    fn words(&self) -> Vec<&'a str> {
        self.text.split_whitespace().collect()
    }
}

fn rational(line: &Line, s: &str) -> Result<Rational, WpsError> {
    s.parse().map_err(|e| line.err_at(s, format!("{e}")))
}

fn integer(line: &Line, s: &str) -> Result<u64, WpsError> {
    s.parse().map_err(|_| line.err_at(s, format!("expected a positive integer, found `{s}`")))
}

fn coord(line: &Line, s: &str) -> Result<usize, WpsError> {
    coord_index(s).ok_or_else(|| line.err_at(s, format!("unknown coordinate `{s}`")))
}

fn ident(line: &Line, s: &str) -> Result<String, WpsError> {
    let ok = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(s.to_string())
    } else {
        Err(line.err_at(s, format!("invalid name `{s}`")))
    }
}

fn key_value<'a>(line: &Line, word: &'a str, key: &str) -> Result<&'a str, WpsError> {
    word.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| line.err_at(word, format!("expected `{key}=...`")))
}

/// Splits `a = b` around the first `=`, trimming both sides.
fn split_eq<'a>(line: &Line, rest: &'a str) -> Result<(&'a str, &'a str), WpsError> {
    match rest.split_once('=') {
        Some((l, r)) if !l.trim().is_empty() && !r.trim().is_empty() => Ok((l.trim(), r.trim())),
        _ => Err(line.err_at(rest, "expected `<name> = <value>`")),
    }
}

fn curve_descriptor(line: &Line, s: &str) -> Result<CurveDescriptor, WpsError> {
    let inner = |prefix: &str| {
        s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')).map(|args| {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            parts
        })
    };
    if let Some(args) = inner("line(") {
        if args.len() == 2 {
            let d = CurveDescriptor::QuasiLine(coord(line, args[0])?, coord(line, args[1])?);
            d.validate().map_err(|e| line.err_at(s, e.to_string()))?;
            return Ok(d);
        }
    }
    if let Some(args) = inner("cut(") {
        if args.len() == 2 {
            let d = CurveDescriptor::CoordCut(coord(line, args[0])?, integer(line, args[1])?);
            d.validate().map_err(|e| line.err_at(s, e.to_string()))?;
            return Ok(d);
        }
    }
    Err(line.err_at(s, "expected `line(c,c)` or `cut(c,e)`"))
}

pub fn parse_ledger(text: &str) -> Result<SurfaceLedger, WpsError> {
    let mut ledger: Option<SurfaceLedger> = None;
    let mut equation: Option<(usize, String)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap();
        let line = Line { no: idx + 1, text: raw };
        let words: Vec<&str> = Line { no: idx + 1, text: content }.words();
        let Some(&kw) = words.first() else { continue };
        let rest = content[kw.as_ptr() as usize - content.as_ptr() as usize + kw.len()..].trim();

        if kw == "surface" {
            if ledger.is_some() {
                return Err(line.err_at(kw, "duplicate `surface` line"));
            }
            if words.len() != 3 {
                return Err(line.err_at(kw, "expected `surface weights=a,b,c,d degree=n`"));
            }
            let ws = key_value(&line, words[1], "weights")?;
            let ws: Vec<u64> = ws
                .split(',')
                .map(|w| integer(&line, w))
                .collect::<Result<_, _>>()?;
            let weights: [u64; 4] = ws
                .try_into()
                .map_err(|_| line.err_at(words[1], "expected four weights"))?;
            let degree = integer(&line, key_value(&line, words[2], "degree")?)?;
            let s = WeightedSurface::new(weights, degree).map_err(|e| line.err_at(kw, e.to_string()))?;
            ledger = Some(SurfaceLedger::new(s));
            continue;
        }

        let l = ledger.as_mut().ok_or_else(|| line.err_at(kw, "`surface` line must come first"))?;
        match kw {
            "equation" => {
                if rest.is_empty() {
                    return Err(line.err_at(kw, "missing polynomial"));
                }
                equation = Some((idx + 1, rest.to_string()));
            }
            "curve" => {
                let (name, desc) = split_eq(&line, rest)?;
                let name = ident(&line, name)?;
                let d = curve_descriptor(&line, desc)?;
                if l.curves.insert(name.clone(), d).is_some() {
                    return Err(line.err_at(rest, format!("curve `{name}` defined twice")));
                }
            }
            "decomp" => {
                let (c, comps) = split_eq(&line, rest)?;
                let i = coord(&line, c)?;
                let names: Vec<String> = comps
                    .split('+')
                    .map(|n| {
                        let n = n.trim();
                        let n = ident(&line, n)?;
                        if l.curves.contains_key(&n) {
                            Ok(n)
                        } else {
                            Err(line.err_at(rest, format!("unknown curve `{n}`")))
                        }
                    })
                    .collect::<Result<_, _>>()?;
                l.decompositions.insert(i, names);
            }
            "pair" => {
                let (lhs, v) = split_eq(&line, rest)?;
                let (a, b) = lhs
                    .split_once('.')
                    .ok_or_else(|| line.err_at(lhs, "expected `A.B`"))?;
                let v = rational(&line, v)?;
                for n in [a, b] {
                    if n != "D" && !l.curves.contains_key(n) {
                        return Err(line.err_at(lhs, format!("unknown curve `{n}`")));
                    }
                }
                match (a, b) {
                    ("D", "D") => return Err(line.err_at(lhs, "D.D is not a table entry")),
                    ("D", c) | (c, "D") => {
                        l.anticanonical.insert(c.to_string(), v);
                    }
                    _ if a == b => return Err(line.err_at(lhs, "use `self` for self-intersections")),
                    _ => {
                        l.pairings.insert(pair_key(a, b), v);
                    }
                }
            }
            "self" => {
                let (n, v) = split_eq(&line, rest)?;
                if !l.curves.contains_key(n) {
                    return Err(line.err_at(n, format!("unknown curve `{n}`")));
                }
                l.self_intersections.insert(n.to_string(), rational(&line, v)?);
            }
            "point" => {
                if words.len() < 4 {
                    return Err(line.err_at(kw, "expected `point NAME index=r type=p,q on=C:m,...`"));
                }
                let name = ident(&line, words[1])?;
                let index = integer(&line, key_value(&line, words[2], "index")?)?;
                let ty = key_value(&line, words[3], "type")?;
                let (p, qv) = ty.split_once(',').ok_or_else(|| line.err_at(words[3], "expected `type=p,q`"))?;
                let local_type = (integer(&line, p)?, integer(&line, qv)?);
                let mut on = Vec::new();
                let mut at = None;
                for w in &words[4..] {
                    if let Some(list) = w.strip_prefix("on=") {
                        for item in list.split(',') {
                            let (c, m) = item
                                .split_once(':')
                                .ok_or_else(|| line.err_at(w, "expected `curve:multiplicity`"))?;
                            if !l.curves.contains_key(c) {
                                return Err(line.err_at(w, format!("unknown curve `{c}`")));
                            }
                            on.push((c.to_string(), integer(&line, m)?));
                        }
                    } else if let Some(c) = w.strip_prefix("at=") {
                        at = Some(coord(&line, c)?);
                    } else {
                        return Err(line.err_at(w, format!("unexpected `{w}`")));
                    }
                }
                let coord = match at {
                    Some(c) => c,
                    None => name
                        .strip_prefix("O_")
                        .and_then(coord_index)
                        .ok_or_else(|| line.err_at(words[1], "cannot infer coordinate, add `at=`"))?,
                };
                l.singular_points.push(SingularPoint { name, coord, index, local_type, on });
            }
            other => return Err(line.err_at(kw, format!("unknown keyword `{other}`"))),
        }
    }

    let mut ledger = ledger.ok_or(WpsError::Parse { line: 1, col: 1, msg: "missing `surface` line".into() })?;
    if let Some((no, text)) = equation {
        let vars: Vec<String> = COORDS.iter().map(|s| s.to_string()).collect();
        let p = parse_poly_expr(&text, &vars, &HashMap::new())
            .and_then(|e| e.expand())
            .map_err(|e| match e {
                PolyError::Syntax { col, msg, .. } => WpsError::Parse { line: no, col: col + 9, msg },
                other => WpsError::Parse { line: no, col: 10, msg: other.to_string() },
            })?;
        ledger.surface = ledger.surface.with_poly(p)?;
    }
    Ok(ledger)
}

/// Inverse of [`parse_ledger`] (up to comments and ordering).
pub fn render_ledger(l: &SurfaceLedger) -> String {
    let mut out = String::new();
    let w = l.surface.weights;
    let _ = writeln!(out, "surface weights={},{},{},{} degree={}", w[0], w[1], w[2], w[3], l.surface.degree);
    if let Some(p) = &l.surface.defining_poly {
        let _ = writeln!(out, "equation {}", p.display_with(&COORDS));
    }
    for (n, c) in &l.curves {
        let _ = writeln!(out, "curve {n} = {c}");
    }
    for (i, comps) in &l.decompositions {
        let _ = writeln!(out, "decomp {} = {}", COORDS[*i], comps.join(" + "));
    }
    for (n, v) in &l.anticanonical {
        let _ = writeln!(out, "pair D.{n} = {v}");
    }
    for ((a, b), v) in &l.pairings {
        let _ = writeln!(out, "pair {a}.{b} = {v}");
    }
    for (n, v) in &l.self_intersections {
        let _ = writeln!(out, "self {n} = {v}");
    }
    for p in &l.singular_points {
        let on: Vec<String> = p.on.iter().map(|(c, m)| format!("{c}:{m}")).collect();
        let _ = write!(out, "point {} index={} type={},{}", p.name, p.index, p.local_type.0, p.local_type.1);
        if !on.is_empty() {
            let _ = write!(out, " on={}", on.join(","));
        }
        let _ = writeln!(out, " at={}", COORDS[p.coord]);
    }
    out
}
