use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::ast::{ArgValue, BinOp, Certificate, Expect, Expr, Keyword, StepKind};
use super::poly_file::check_poly_file;
use super::read_file;
use crate::exact::{lp_optimize, parse_affine, parse_constraint, LinearProgram, LpOutcome, Rational};
use crate::local_ineq::{
    adjunction_refute, check_theorem_I_hypotheses, corti_bound, implied_inequalities_lemma20, lct_monomial,
    mobile_bound_thmII, theorem_I_refute, vertex_alpha_beta, HypothesisReport, MonomialForm, RefutationVerdict,
    ThmIParams, VertexOutcome,
};
use crate::pic_lattice::{
    apply_involution, min_orbit_size, pukhlikov_bound, superrigidity_orbit_test, untwist, PicClass, PukhlikovForm,
};
use crate::resolution::{an_chain, du_val_coefficient_bounds, resolution_pairing, tower_coefficients, ResClass, TowerInput};
use crate::wps::{amplitude, ledger_consistency, parse_ledger, SurfaceLedger};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Value {
    Num(Rational),
    Bool(bool),
    Tuple(Vec<Rational>),
    Verdict(RefutationVerdict),
    Str(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Tuple(t) => {
                let parts: Vec<String> = t.iter().map(Rational::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
            Value::Verdict(v) => write!(f, "{v}"),
            Value::Str(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub outcome: Outcome,
    pub description: String,
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub name: String,
    pub steps: Vec<StepReport>,
    pub overall: bool,
}

impl RunReport {
    pub fn failures(&self) -> impl Iterator<Item = &StepReport> {
        self.steps.iter().filter(|s| s.outcome != Outcome::Pass)
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cert {}", self.name)?;
        for s in &self.steps {
            write!(f, "step {} {} {}", s.index, s.outcome, s.description)?;
            if let Some(v) = &s.value {
                write!(f, " = {v}")?;
            }
            writeln!(f)?;
        }
        write!(f, "overall {}", if self.overall { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunContext {
    /// Directory that `file=` arguments are resolved against.
    pub base_dir: PathBuf,
}

type Env = HashMap<String, Rational>;

fn eval(e: &Expr, env: &Env) -> Result<Rational, String> {
    Ok(match e {
        Expr::Int(v) => v.clone(),
        Expr::Var(v) => env.get(v).cloned().ok_or_else(|| format!("`{v}` has no value"))?,
        Expr::Neg(x) => -eval(x, env)?,
        Expr::Pow(b, k) => eval(b, env)?.pow(*k).ok_or("zero raised to a negative power")?,
        Expr::Bin(op, l, r) => {
            let (l, r) = (eval(l, env)?, eval(r, env)?);
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => l.checked_div(&r).ok_or("division by zero")?,
            }
        }
    })
}

/// Evaluated checker arguments.
struct Args<'a> {
    raw: &'a [(String, ArgValue)],
    env: &'a Env,
}

impl Args<'_> {
    fn get(&self, k: &str) -> Option<&ArgValue> {
        self.raw.iter().find(|(n, _)| n == k).map(|(_, v)| v)
    }

    fn num(&self, k: &str) -> Result<Rational, String> {
        match self.get(k) {
            Some(ArgValue::Expr(e)) => eval(e, self.env),
            Some(_) => Err(format!("`{k}` must be a number")),
            None => Err(format!("missing `{k}`")),
        }
    }

    fn nat(&self, k: &str) -> Result<u64, String> {
        let v = self.num(k)?;
        nat(&v).ok_or_else(|| format!("`{k}` must be a non-negative integer, got {v}"))
    }

    fn tuple(&self, k: &str) -> Result<Vec<Rational>, String> {
        match self.get(k) {
            Some(ArgValue::Tuple(t)) => t.iter().map(|e| eval(e, self.env)).collect(),
            Some(ArgValue::Expr(e)) => Ok(vec![eval(e, self.env)?]),
            Some(ArgValue::Str(_)) => Err(format!("`{k}` must be a tuple")),
            None => Err(format!("missing `{k}`")),
        }
    }

    fn str(&self, k: &str) -> Result<Option<&str>, String> {
        match self.get(k) {
            Some(ArgValue::Str(s)) => Ok(Some(s)),
            Some(_) => Err(format!("`{k}` must be a string")),
            None => Ok(None),
        }
    }

    fn req_str(&self, k: &str) -> Result<&str, String> {
        self.str(k)?.ok_or_else(|| format!("missing `{k}`"))
    }

    fn thm_params(&self) -> Result<ThmIParams, String> {
        ThmIParams::new(
            self.num("A")?,
            self.num("B")?,
            self.num("M")?,
            self.num("N")?,
            self.num("alpha")?,
            self.num("beta")?,
        )
        .map_err(|e| e.to_string())
    }
}

fn nat(v: &Rational) -> Option<u64> {
    if v.is_integer() && !v.is_negative() {
        v.to_i64().map(|n| n as u64)
    } else {
        None
    }
}

fn report_value(r: &HypothesisReport) -> (Value, Option<String>) {
    let failed: Vec<String> = r.failures().map(|c| c.to_string()).collect();
    let detail = (!failed.is_empty()).then(|| format!("failed: {}", failed.join("; ")));
    (Value::Bool(r.overall), detail)
}

fn var_list(text: &str) -> Result<Vec<String>, String> {
    let vars: Vec<String> = text.split(',').map(|v| v.trim().to_string()).collect();
    if vars.iter().any(String::is_empty) {
        return Err("empty variable name".into());
    }
    Ok(vars)
}

fn constraint_list(text: &str, vars: &[String]) -> Result<Vec<crate::exact::Constraint>, String> {
    text.split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|c| parse_constraint(c, vars).map_err(|e| e.to_string()))
        .collect()
}

fn load_ledger(base: &Path, file: &str) -> Result<SurfaceLedger, String> {
    let text = read_file(&base.join(file)).map_err(|e| e.to_string())?;
    parse_ledger(&text).map_err(|e| format!("{file}: {e}"))
}

/// `entry` forms: `K2`, `amplitude`, `D.C`, `C.C` (tabulated), `C^2`
/// (forced by a decomposition), `C1.C2`.
fn ledger_entry(l: &SurfaceLedger, entry: &str) -> Result<Rational, String> {
    let missing = || format!("no ledger entry `{entry}`");
    match entry {
        "K2" => return Ok(l.surface.k_squared()),
        "amplitude" => return Ok(Rational::from(l.surface.amplitude())),
        _ => {}
    }
    if let Some(c) = entry.strip_suffix("^2") {
        let derived = l.derived_self_intersections().map_err(|e| e.to_string())?;
        return derived.into_iter().find(|(_, g, _)| g == c).map(|(.., v)| v).ok_or_else(missing);
    }
    let (a, b) = entry.split_once('.').ok_or_else(missing)?;
    if a == "D" {
        return l.d_pairing(b).map_err(|e| e.to_string());
    }
    if a == b {
        return l.self_intersections.get(a).cloned().ok_or_else(missing);
    }
    l.pairing(a, b).ok_or_else(missing)
}

type CheckResult = Result<(Value, Option<String>), String>;

fn run_check(name: &str, a: &Args<'_>, ctx: &RunContext) -> CheckResult {
    let plain = |v: Value| Ok((v, None));
    match name {
        "theorem_I_hyp" => Ok(report_value(&check_theorem_I_hypotheses(&a.thm_params()?))),
        "lemma_2_0" => {
            let r = implied_inequalities_lemma20(&a.thm_params()?).map_err(|e| e.to_string())?;
            Ok(report_value(&r))
        }
        "vertex_ab" => {
            match vertex_alpha_beta(&a.num("A")?, &a.num("B")?, &a.num("M")?, &a.num("N")?)
                .map_err(|e| e.to_string())?
            {
                VertexOutcome::Vertex { alpha, beta } => plain(Value::Tuple(vec![alpha, beta])),
                VertexOutcome::Infeasible(why) => Err(format!("infeasible: {why}")),
            }
        }
        "theorem_I_refute" => {
            let p = a.thm_params()?;
            let v = theorem_I_refute(&p, &a.num("a1")?, &a.num("a2")?, &a.num("m1")?, &a.num("m2")?)
                .map_err(|e| e.to_string())?;
            let (t1, t2) = p.thresholds(&a.num("a1")?, &a.num("a2")?);
            Ok((Value::Verdict(v), Some(format!("thresholds ({t1}, {t2})"))))
        }
        "corti_bound" => {
            plain(Value::Num(corti_bound(&a.num("a1")?, &a.num("a2")?, &a.num("eps")?).map_err(|e| e.to_string())?))
        }
        "thm2_bound" => {
            let (b, profiles) = mobile_bound_thmII(&a.num("a1")?, &a.num("eps")?).map_err(|e| e.to_string())?;
            let detail = (!profiles.is_empty()).then(|| {
                let p: Vec<String> =
                    profiles.iter().map(|p| format!("{:?} mult {}", p.kind, p.required_multiplicity)).collect();
                format!("equality: {}", p.join("; "))
            });
            Ok((Value::Num(b), detail))
        }
        "lct_monomial" => {
            let m: Vec<u64> = a
                .tuple("m")?
                .iter()
                .map(|v| nat(v).ok_or_else(|| format!("exponent {v} is not a natural number")))
                .collect::<Result<_, _>>()?;
            let form = match a.req_str("form")? {
                "diagonal" => MonomialForm::Diagonal,
                "product" => MonomialForm::Product,
                f => return Err(format!("unknown form `{f}`, expected diagonal or product")),
            };
            plain(Value::Num(lct_monomial(&m, form).map_err(|e| e.to_string())?))
        }
        "adjunction_refute" => plain(Value::Verdict(adjunction_refute(&a.num("pairing")?, &a.num("threshold")?))),
        "lp_max" => {
            let vars = var_list(a.req_str("vars")?)?;
            let (obj, constant) = parse_affine(a.req_str("objective")?, &vars).map_err(|e| e.to_string())?;
            let mut rows = constraint_list(a.str("subject_to")?.unwrap_or(""), &vars)?;
            if a.get("chain").is_some() {
                let n = a.nat("chain")? as usize;
                if n > vars.len() {
                    return Err(format!("chain of length {n} needs at least {n} variables"));
                }
                let chain = an_chain(n).map_err(|e| e.to_string())?;
                rows = chain.constraint_system(&rows, vars.len());
            }
            let mut lp = LinearProgram::maximize(obj);
            lp.constraints = rows;
            match lp_optimize(&lp).map_err(|e| e.to_string())? {
                LpOutcome::Optimal { value, witness } => {
                    let w: Vec<String> = vars.iter().zip(&witness).map(|(n, v)| format!("{n}={v}")).collect();
                    Ok((Value::Num(value + constant), Some(format!("at {}", w.join(", ")))))
                }
                LpOutcome::Infeasible => Err("infeasible".into()),
                LpOutcome::Unbounded => Err("unbounded".into()),
            }
        }
        "du_val_bounds" => {
            let n = a.nat("n")? as usize;
            let chain = an_chain(n).map_err(|e| e.to_string())?;
            let vars: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
            let extra = constraint_list(a.str("extra")?.unwrap_or(""), &vars)?;
            plain(Value::Tuple(du_val_coefficient_bounds(&chain, &extra).map_err(|e| e.to_string())?))
        }
        "tower" => {
            let t = TowerInput { a1: a.num("a1")?, a2: a.num("a2")?, m: a.tuple("m")? };
            let entries = tower_coefficients(&t, a.nat("n")? as usize).map_err(|e| e.to_string())?;
            let outside: Vec<String> = entries
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.in_unit_interval)
                .map(|(i, _)| format!("E{}", i + 1))
                .collect();
            let detail = (!outside.is_empty()).then(|| format!("outside [0,1]: {}", outside.join(", ")));
            Ok((Value::Tuple(entries.into_iter().map(|e| e.coefficient).collect()), detail))
        }
        "pairing" => {
            let chain = an_chain(a.nat("n")? as usize).map_err(|e| e.to_string())?;
            let k2 = a.num("k2")?;
            let c1 = ResClass::new(a.num("pull1")?, k2.clone(), a.tuple("exc1")?);
            let c2 = ResClass::new(a.num("pull2")?, k2, a.tuple("exc2")?);
            plain(Value::Num(resolution_pairing(&c1, &c2, &chain).map_err(|e| e.to_string())?))
        }
        "involution" => {
            let c = PicClass::symmetric(a.num("h")?, a.num("e")?, 6);
            let img = apply_involution(&c).map_err(|e| e.to_string())?;
            let e = img.symmetric_part().cloned().ok_or("image left span(H, E)")?;
            plain(Value::Tuple(vec![img.h, e]))
        }
        "untwist" => {
            let (mu, mult) = untwist(&a.num("mu")?, &a.num("mult")?).map_err(|e| e.to_string())?;
            plain(Value::Tuple(vec![mu, mult]))
        }
        "pukhlikov" => {
            let form = match a.req_str("form")? {
                "with_sigma0" => PukhlikovForm::WithSigma0,
                "without_sigma0" => PukhlikovForm::WithoutSigma0,
                f => return Err(format!("unknown form `{f}`, expected with_sigma0 or without_sigma0")),
            };
            let v = pukhlikov_bound(&a.num("s0")?, &a.num("s1")?, &a.num("c")?, form).map_err(|e| e.to_string())?;
            plain(Value::Num(v))
        }
        "ledger" => {
            let l = load_ledger(&ctx.base_dir, a.req_str("file")?)?;
            match a.str("entry")? {
                Some(entry) => plain(Value::Num(ledger_entry(&l, entry)?)),
                None => Ok(report_value(&ledger_consistency(&l).map_err(|e| e.to_string())?)),
            }
        }
        "poly_id" => {
            let file = a.req_str("file")?;
            let text = read_file(&ctx.base_dir.join(file)).map_err(|e| e.to_string())?;
            let results = check_poly_file(&text).map_err(|e| format!("{file}: {e}"))?;
            let bad: Vec<String> = results
                .iter()
                .filter(|r| !r.holds())
                .map(|r| match &r.result {
                    crate::exact::PolyEquality::Unequal { witness } => {
                        format!("line {} differs at exponent {witness:?}", r.line)
                    }
                    crate::exact::PolyEquality::Equal => unreachable!(),
                })
                .collect();
            let detail = if bad.is_empty() {
                Some(format!("{} identities", results.len()))
            } else {
                Some(bad.join("; "))
            };
            Ok((Value::Bool(bad.is_empty()), detail))
        }
        "amplitude" => {
            let w: Vec<u64> = a
                .tuple("weights")?
                .iter()
                .map(|v| nat(v).ok_or_else(|| format!("weight {v} is not a natural number")))
                .collect::<Result<_, _>>()?;
            plain(Value::Num(Rational::from(amplitude(&w, a.nat("degree")?))))
        }
        "orbit" => {
            let d = min_orbit_size(a.req_str("group")?, a.req_str("space")?).map_err(|e| e.to_string())?;
            match a.str("field")? {
                None | Some("min") => Ok((Value::Num(Rational::from(d.min_orbit)), Some(d.source))),
                Some("sizes") => {
                    Ok((Value::Tuple(d.known_orbit_sizes.iter().map(|&s| Rational::from(s)).collect()), Some(d.source)))
                }
                Some(f) => Err(format!("unknown field `{f}`, expected min or sizes")),
            }
        }
        "superrigid" => plain(Value::Bool(superrigidity_orbit_test(&a.num("k2")?, a.nat("min_orbit")?))),
        other => Err(format!("unknown checker `{other}`")),
    }
}

fn matches_expect(v: &Value, e: &Expect, env: &Env) -> Result<bool, String> {
    Ok(match (e, v) {
        (Expect::Value(x), Value::Num(n)) => eval(x, env)? == *n,
        (Expect::Tuple(xs), Value::Tuple(t)) => {
            xs.len() == t.len() && xs.iter().zip(t).try_fold(true, |ok, (x, y)| Ok::<_, String>(ok && eval(x, env)? == *y))?
        }
        (Expect::Keyword(Keyword::True), Value::Bool(b)) => *b,
        (Expect::Keyword(Keyword::False), Value::Bool(b)) => !*b,
        (Expect::Keyword(Keyword::Refuted), Value::Verdict(v)) => *v == RefutationVerdict::Refuted,
        (Expect::Keyword(Keyword::Inconclusive), Value::Verdict(v)) => *v == RefutationVerdict::Inconclusive,
        (Expect::Keyword(Keyword::NotApplicable), Value::Verdict(v)) => {
            matches!(v, RefutationVerdict::NotApplicable(_))
        }
        _ => false,
    })
}

fn default_pass(v: &Value) -> bool {
    match v {
        Value::Bool(b) => *b,
        Value::Verdict(v) => *v == RefutationVerdict::Refuted,
        Value::Num(_) | Value::Tuple(_) | Value::Str(_) => true,
    }
}

/// Runs every step; failures do not stop later steps.
pub fn run_certificate(cert: &Certificate, ctx: &RunContext) -> RunReport {
    let mut env = Env::new();
    let mut steps = Vec::with_capacity(cert.steps.len());
    for (i, step) in cert.steps.iter().enumerate() {
        let (outcome, value) = match &step.kind {
            StepKind::Let(name, e) => match eval(e, &env) {
                Ok(v) => {
                    let shown = v.to_string();
                    env.insert(name.clone(), v);
                    (Outcome::Pass, Some(shown))
                }
                Err(m) => (Outcome::Error, Some(format!("error: {m}"))),
            },
            StepKind::Assert(l, rel, r) => match (eval(l, &env), eval(r, &env)) {
                (Ok(l), Ok(r)) => {
                    let o = if rel.holds(&l, &r) { Outcome::Pass } else { Outcome::Fail };
                    (o, Some(format!("{l} {rel} {r}")))
                }
                (Err(m), _) | (_, Err(m)) => (Outcome::Error, Some(format!("error: {m}"))),
            },
            StepKind::Check { name, args, expect } => {
                let a = Args { raw: args, env: &env };
                match run_check(name, &a, ctx) {
                    Ok((v, detail)) => {
                        let pass = match expect {
                            Some(e) => matches_expect(&v, e, &env),
                            None => Ok(default_pass(&v)),
                        };
                        let mut shown = v.to_string();
                        if let Some(d) = detail {
                            shown.push_str(&format!(" [{d}]"));
                        }
                        match pass {
                            Ok(true) => (Outcome::Pass, Some(shown)),
                            Ok(false) => (Outcome::Fail, Some(shown)),
                            Err(m) => (Outcome::Error, Some(format!("error: {m}"))),
                        }
                    }
                    Err(m) => (Outcome::Error, Some(format!("error: {m}"))),
                }
            }
        };
        steps.push(StepReport { index: i + 1, outcome, description: step.to_string(), value });
    }
    let overall = steps.iter().all(|s| s.outcome == Outcome::Pass);
    RunReport { name: cert.name.clone(), steps, overall }
}
