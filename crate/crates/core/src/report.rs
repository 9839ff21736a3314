//! Config-driven verification runs and their JSON reports.

use crate::boundary::{boundary_form, DiffExpr, TraceVector};
use crate::catalog::{build_example, mutate_candidates, ExampleId, ExampleParams, Mutation};
use crate::error::{GknError, Result};
use crate::extension::{
    build_model, check_gkn_extended, derive_boundary_conditions, verify_self_adjoint_domain, BoundaryConditions,
    ExtendedModel, ExtendedVector, ExtensionSpace, OperatorB, PartialGknSet,
};
use crate::legendre::{
    boundary_identity_check, eigen_check, extended_eigen_check, extended_orthogonality_check, gram_schmidt,
    identity_b, lambda_formula, mu_inner, resolve_sign_pairing, zero_b, SignPairing, MuMeasure, MAX_DEGREE,
};
use crate::linalg::{max_abs, CMat, CVec};
use crate::poly::{parse_rational, rational_from_f64, rational_to_f64, Poly, Rational};
use crate::spectral::{assemble, shooting_oracle, spectrum, CollocationGrid, SpectrumReport};
use crate::symplectic::{form_eval, quotient_by};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CheckSymplectic,
    DeriveBc,
    VerifyGkn,
    Spectrum,
    Legendre,
    All,
}

impl Command {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "check-symplectic" => Command::CheckSymplectic,
            "derive-bc" => Command::DeriveBc,
            "verify-gkn" => Command::VerifyGkn,
            "spectrum" => Command::Spectrum,
            "legendre" => Command::Legendre,
            "all" => Command::All,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckSymplectic => "check-symplectic",
            Command::DeriveBc => "derive-bc",
            Command::VerifyGkn => "verify-gkn",
            Command::Spectrum => "spectrum",
            Command::Legendre => "legendre",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub structural: f64,
    pub symmetry_defect: f64,
    pub imag: f64,
    pub oracle_rel: f64,
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { structural: 1e-12, symmetry_defect: 1e-9, imag: 1e-8, oracle_rel: 1e-6, residual: 1e-8 }
    }
}

#[derive(Debug, Clone)]
pub enum ExampleChoice {
    Catalog(ExampleId),
    Custom(Box<CustomSpec>),
}

/// A user-defined model: expression, `W`, `B`, partial GKN traces, and
/// either GKN candidates or explicit conditions.
#[derive(Debug, Clone)]
pub struct CustomSpec {
    pub expr: DiffExpr,
    pub w_weights: Vec<f64>,
    pub b: CMat,
    pub gkn_traces: Vec<Vec<Complex64>>,
    pub candidates: Vec<(Vec<Complex64>, Vec<Complex64>)>,
    pub conditions: Option<CMat>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub example: ExampleChoice,
    pub params: ExampleParams,
    pub grid_n: usize,
    pub n_max: usize,
    pub eigen_count: usize,
    pub tolerances: Tolerances,
    pub seed: u64,
}

/// Scan step of the shooting oracle; eigenvalue gaps of the catalog models are far wider.
const ORACLE_STEP: f64 = 0.05;

const PARAM_KEYS: [&str; 9] = ["A", "M", "N_weight", "alpha", "beta_re", "beta_im", "gamma", "a", "b"];

fn cfg(msg: impl Into<String>) -> GknError {
    GknError::Config(msg.into())
}

fn value_rational(key: &str, v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => n.as_f64().and_then(rational_from_f64),
        Value::String(s) => parse_rational(s),
        _ => None,
    }
    .ok_or_else(|| cfg(format!("parameter {key}: expected a number or a rational string, got {v}")))
}

fn value_f64(key: &str, v: &Value) -> Result<f64> {
    value_rational(key, v).map(|r| rational_to_f64(&r))
}

fn value_usize(key: &str, v: &Value) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| cfg(format!("{key}: expected a non-negative integer, got {v}")))
}

fn complex_rows(key: &str, v: &Value) -> Result<Vec<Vec<Complex64>>> {
    let rows = v.as_array().ok_or_else(|| cfg(format!("{key}: expected an array of rows")))?;
    rows.iter().map(|r| complex_flat(key, r)).collect()
}

/// `[re, im, re, im, …]`
fn complex_flat(key: &str, v: &Value) -> Result<Vec<Complex64>> {
    let xs = v.as_array().ok_or_else(|| cfg(format!("{key}: expected an interleaved [re, im, …] array")))?;
    if xs.len() % 2 != 0 {
        return Err(cfg(format!("{key}: interleaved array has odd length {}", xs.len())));
    }
    xs.chunks(2).map(|p| Ok(Complex64::new(value_f64(key, &p[0])?, value_f64(key, &p[1])?))).collect()
}

fn to_matrix(key: &str, rows: Vec<Vec<Complex64>>, ncols: usize) -> Result<CMat> {
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(cfg(format!("{key}: every row must have {ncols} complex entries")));
    }
    Ok(CMat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn parse_custom(v: &Value) -> Result<CustomSpec> {
    let obj = v.as_object().ok_or_else(|| cfg("custom: expected an object"))?;
    for key in obj.keys() {
        if !["expression", "w_weights", "B", "gkn_traces", "candidates", "conditions"].contains(&key.as_str()) {
            return Err(cfg(format!("custom: unknown field {key}")));
        }
    }
    let e = obj.get("expression").and_then(Value::as_object).ok_or_else(|| cfg("custom.expression is required"))?;
    let kind = e.get("kind").and_then(Value::as_str).ok_or_else(|| cfg("custom.expression.kind is required"))?;
    let endpoint = |k: &str| -> Result<Rational> {
        value_rational(k, e.get(k).ok_or_else(|| cfg(format!("custom.expression.{k} is required")))?)
    };
    let expr = match kind {
        "first_order" => DiffExpr::first_order(),
        "fourier" => DiffExpr::fourier(endpoint("a")?, endpoint("b")?).map_err(|e| cfg(e.to_string()))?,
        "legendre_type" => DiffExpr::legendre_type(endpoint("A")?).map_err(|e| cfg(e.to_string()))?,
        "general_even_order" => {
            let q = e.get("q").and_then(Value::as_array).ok_or_else(|| cfg("custom.expression.q is required"))?;
            let polys = q
                .iter()
                .map(|p| {
                    let cs = p.as_array().ok_or_else(|| cfg("custom.expression.q: expected coefficient arrays"))?;
                    Ok(Poly::new(cs.iter().map(|c| value_rational("q", c)).collect::<Result<Vec<_>>>()?))
                })
                .collect::<Result<Vec<_>>>()?;
            if polys.len() < 2 {
                return Err(cfg("custom.expression.q needs at least q_0 and q_1"));
            }
            DiffExpr::general_even_order(polys, endpoint("a")?, endpoint("b")?).map_err(|e| cfg(e.to_string()))?
        }
        other => return Err(cfg(format!("custom.expression.kind: unknown kind {other}"))),
    };
    let w_weights: Vec<f64> = match obj.get("w_weights") {
        Some(Value::Array(ws)) => ws.iter().map(|w| value_f64("w_weights", w)).collect::<Result<_>>()?,
        Some(_) => return Err(cfg("custom.w_weights: expected an array")),
        None => Vec::new(),
    };
    let k = w_weights.len();
    let b = match obj.get("B") {
        Some(v) => to_matrix("custom.B", complex_rows("custom.B", v)?, k)?,
        None => CMat::zeros(k, k),
    };
    if b.nrows() != k {
        return Err(cfg(format!("custom.B must be {k} x {k}")));
    }
    let gkn_traces = match obj.get("gkn_traces") {
        Some(v) => complex_rows("custom.gkn_traces", v)?,
        None => Vec::new(),
    };
    let candidates = match obj.get("candidates") {
        Some(Value::Array(cs)) => cs
            .iter()
            .map(|c| {
                let trace = complex_flat("candidates.trace", c.get("trace").unwrap_or(&Value::Null))?;
                let w = match c.get("w") {
                    Some(w) => complex_flat("candidates.w", w)?,
                    None => Vec::new(),
                };
                Ok((trace, w))
            })
            .collect::<Result<_>>()?,
        Some(_) => return Err(cfg("custom.candidates: expected an array")),
        None => Vec::new(),
    };
    let conditions = match obj.get("conditions") {
        Some(v) => Some(to_matrix("custom.conditions", complex_rows("custom.conditions", v)?, expr.trace_dim() + k)?),
        None => None,
    };
    if candidates.is_empty() && conditions.is_none() {
        return Err(cfg("custom: give GKN candidates or explicit conditions"));
    }
    Ok(CustomSpec { expr, w_weights, b, gkn_traces, candidates, conditions })
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| cfg(format!("invalid JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| cfg("config must be a JSON object"))?;
        let mut params: Map<String, Value> = Map::new();
        for (key, val) in obj {
            match key.as_str() {
                "example" | "grid_N" | "n_max" | "eigen_count" | "tolerances" | "seed" | "custom" => {}
                "params" => {
                    let p = val.as_object().ok_or_else(|| cfg("params must be an object"))?;
                    params.extend(p.clone());
                }
                k if PARAM_KEYS.contains(&k) => {
                    params.insert(k.to_string(), val.clone());
                }
                other => return Err(cfg(format!("unknown config field {other}"))),
            }
        }
        for key in params.keys() {
            if !PARAM_KEYS.contains(&key.as_str()) {
                return Err(cfg(format!("unknown parameter {key}")));
            }
        }
        let name = obj.get("example").and_then(Value::as_str).ok_or_else(|| cfg("example is required"))?;
        let example = if name == "custom" {
            ExampleChoice::Custom(Box::new(parse_custom(obj.get("custom").ok_or_else(|| cfg("custom model missing"))?)?))
        } else {
            let id = ExampleId::ALL
                .into_iter()
                .find(|id| id.name() == name)
                .ok_or_else(|| cfg(format!("unknown example {name}")))?;
            ExampleChoice::Catalog(id)
        };
        let required: &[&str] = match &example {
            ExampleChoice::Catalog(ExampleId::LegendreType) => &["A"],
            ExampleChoice::Catalog(ExampleId::FirstOrder) => &["alpha"],
            ExampleChoice::Catalog(_) => &["a", "b", "alpha"],
            ExampleChoice::Custom(_) => &[],
        };
        for key in required {
            if !params.contains_key(*key) {
                return Err(cfg(format!("example {name} requires parameter {key}")));
            }
        }
        let mut p = ExampleParams::default();
        for (key, val) in &params {
            match key.as_str() {
                "A" => p.a_param = value_rational(key, val)?,
                "M" => p.m = value_f64(key, val)?,
                "N_weight" => p.n_weight = value_f64(key, val)?,
                "alpha" => p.alpha = value_f64(key, val)?,
                "beta_re" => p.beta.re = value_f64(key, val)?,
                "beta_im" => p.beta.im = value_f64(key, val)?,
                "gamma" => p.gamma = value_f64(key, val)?,
                "a" => p.a = value_rational(key, val)?,
                "b" => p.b = value_rational(key, val)?,
                _ => unreachable!("keys validated above"),
            }
        }
        let mut tolerances = Tolerances::default();
        if let Some(t) = obj.get("tolerances") {
            let t = t.as_object().ok_or_else(|| cfg("tolerances must be an object"))?;
            for (key, val) in t {
                let x = val.as_f64().ok_or_else(|| cfg(format!("tolerance {key} must be a number")))?;
                if !(x > 0.0) {
                    return Err(cfg(format!("tolerance {key} must be positive")));
                }
                match key.as_str() {
                    "structural" => tolerances.structural = x,
                    "symmetry_defect" => tolerances.symmetry_defect = x,
                    "imag" => tolerances.imag = x,
                    "oracle_rel" => tolerances.oracle_rel = x,
                    "residual" => tolerances.residual = x,
                    other => return Err(cfg(format!("unknown tolerance {other}"))),
                }
            }
        }
        let grid_n = obj.get("grid_N").map(|v| value_usize("grid_N", v)).transpose()?.unwrap_or(64);
        let n_max = obj.get("n_max").map(|v| value_usize("n_max", v)).transpose()?.unwrap_or(12);
        if n_max > MAX_DEGREE {
            return Err(cfg(format!("n_max must be at most {MAX_DEGREE}")));
        }
        let eigen_count = obj.get("eigen_count").map(|v| value_usize("eigen_count", v)).transpose()?.unwrap_or(5);
        let seed = obj.get("seed").map(|v| v.as_u64().ok_or_else(|| cfg("seed must be a non-negative integer"))).transpose()?.unwrap_or(0);
        Ok(RunConfig { example, params: p, grid_n, n_max, eigen_count, tolerances, seed })
    }

    pub fn example_name(&self) -> &'static str {
        match &self.example {
            ExampleChoice::Catalog(id) => id.name(),
            ExampleChoice::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub got: Value,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EigenEntry {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub status: String,
    pub command: String,
    pub example: String,
    pub checks: Vec<Check>,
    pub eigenvalues: Vec<EigenEntry>,
    pub boundary_conditions_rendered: Vec<String>,
    pub seed: u64,
    pub timings: BTreeMap<String, f64>,
    #[serde(skip)]
    pub spectrum: Option<SpectrumReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    /// The report without timings, which is what repeated runs reproduce exactly.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(o) = v.as_object_mut() {
            o.remove("timings");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

struct Problem {
    model: ExtendedModel,
    candidates: Vec<ExtendedVector>,
    imposed: Option<CMat>,
    expected: Option<Vec<String>>,
}

impl Problem {
    fn conditions(&self) -> Result<BoundaryConditions> {
        match &self.imposed {
            Some(c) => BoundaryConditions::from_matrix(&self.model, c.clone()),
            None => derive_boundary_conditions(&self.model, &self.candidates),
        }
    }
}

fn build_problem(config: &RunConfig) -> Result<Problem> {
    match &config.example {
        ExampleChoice::Catalog(id) => {
            let ex = build_example(*id, &config.params)?;
            Ok(Problem {
                model: ex.model,
                candidates: ex.candidates,
                imposed: ex.imposed,
                expected: Some(id.expected_conditions().iter().map(|s| s.to_string()).collect()),
            })
        }
        ExampleChoice::Custom(spec) => {
            let expr = &spec.expr;
            let bf = boundary_form(expr)?;
            let w = ExtensionSpace::weighted(&spec.w_weights)?;
            let b = OperatorB::new(spec.b.clone(), &w)?;
            let traces = spec
                .gkn_traces
                .iter()
                .map(|t| TraceVector::new(expr, t.clone()))
                .collect::<Result<Vec<_>>>()?;
            let model = build_model(bf, w, b, PartialGknSet::new(traces))?;
            let candidates = spec
                .candidates
                .iter()
                .map(|(t, a)| Ok(ExtendedVector::new(TraceVector::new(expr, t.clone())?, CVec::from_vec(a.clone()))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Problem { model, candidates, imposed: spec.conditions.clone(), expected: None })
        }
    }
}

fn check_bool(name: &str, expected: bool, got: bool) -> Check {
    Check { name: name.into(), expected: json!(expected), got: json!(got), tolerance: None, pass: expected == got }
}

fn check_le(name: &str, got: f64, tol: f64) -> Check {
    Check { name: name.into(), expected: json!(format!("<= {tol:e}")), got: json!(got), tolerance: Some(tol), pass: got <= tol }
}

fn check_eq_value(name: &str, expected: Value, got: Value) -> Check {
    let pass = expected == got;
    Check { name: name.into(), expected, got, tolerance: None, pass }
}

fn random_trace(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_iterator(n, (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
}

fn symplectic_checks(p: &Problem, tol: &Tolerances, seed: u64) -> Result<Vec<Check>> {
    let model = &p.model;
    let mut checks = Vec::new();
    let om = model.omega_matrix();
    let scale = 1.0 + max_abs(om);
    let omega_t = model
        .gkn_partial()
        .traces()
        .iter()
        .map(|t| (om * t.values()).norm() / (scale * (1.0 + t.values().norm())))
        .fold(0.0, f64::max);
    checks.push(check_le("omega_annihilates_partial_gkn_set", omega_t, tol.structural));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let form = &model.boundary_form().form;
    for _ in 0..100 {
        let x = random_trace(&mut rng, model.trace_dim());
        let ox = om * &x;
        for (j, tj) in model.gkn_partial().traces().iter().enumerate() {
            let lhs = model.w().inner(&ox, &model.w().xi().column(j).into_owned());
            let rhs = form_eval(form, &x, tj.values())?;
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
    }
    checks.push(check_le("omega_pairing_matches_boundary_form", worst, tol.structural));

    let s_ext = model.f_ext().matrix();
    let rad = max_abs(&(s_ext * model.m_min().basis())) / (1.0 + max_abs(s_ext));
    checks.push(check_le("minimal_part_in_radical", rad, tol.structural));

    let q = quotient_by(model.f_ext(), model.m_min())?;
    checks.push(check_eq_value(
        "quotient_dimension",
        json!(2 * model.deficiency_index()),
        json!(q.dim()),
    ));
    checks.push(check_bool("quotient_nondegenerate", true, q.is_nondegenerate()));
    Ok(checks)
}

fn derive_checks(p: &Problem, rendered: &mut Vec<String>) -> Result<Vec<Check>> {
    let bc = p.conditions()?;
    *rendered = bc.human_readable.clone();
    let mut checks = vec![check_eq_value(
        "condition_count",
        json!(p.model.deficiency_index()),
        json!(crate::linalg::rank(&bc.c)),
    )];
    if let Some(expected) = &p.expected {
        checks.push(check_eq_value("rendered_conditions", json!(expected), json!(bc.human_readable)));
    }
    Ok(checks)
}

fn gkn_checks(p: &Problem) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let bc = p.conditions()?;
    if p.imposed.is_none() {
        let r = check_gkn_extended(&p.model, &p.candidates)?;
        checks.push(check_bool("gkn_independent_mod_minimal", true, r.independent_mod_min));
        checks.push(check_bool("gkn_symmetric", true, r.symmetric));
        checks.push(check_bool("gkn_count", true, r.count_ok));
    }
    checks.push(check_bool("self_adjoint_domain", true, verify_self_adjoint_domain(&p.model, &bc)?));
    if !p.candidates.is_empty() {
        for m in Mutation::ALL {
            let r = check_gkn_extended(&p.model, &mutate_candidates(&p.model, &p.candidates, m))?;
            checks.push(check_bool(&format!("mutated_{}_rejected", m.name()), true, !r.passed()));
        }
    }
    Ok(checks)
}

fn spectrum_checks(
    p: &Problem,
    config: &RunConfig,
    eigen: &mut Vec<EigenEntry>,
    keep: &mut Option<SpectrumReport>,
) -> Result<Vec<Check>> {
    let tol = &config.tolerances;
    let bc = p.conditions()?;
    let expr = p.model.expr();
    let (a, b) = expr.interval_f64();
    let grid = CollocationGrid::new(config.grid_n, a, b, expr.order())?;
    let op = assemble(&p.model, &bc, &grid)?;
    let sp = spectrum(&op, config.eigen_count.min(op.reduced_dim()), config.seed)?;
    let mut checks = vec![check_le("symmetry_defect", sp.symmetry_defect, tol.symmetry_defect)];
    let realness = sp.eigenvalues.iter().map(|z| z.im.abs() / (1.0 + z.re.abs())).fold(0.0, f64::max);
    checks.push(check_le("eigenvalue_realness", realness, tol.imag));
    let worst_residual = sp.residuals.iter().copied().fold(0.0, f64::max);
    checks.push(check_le("eigenvector_residual", worst_residual, tol.residual));
    *eigen = sp
        .eigenvalues
        .iter()
        .zip(&sp.residuals)
        .enumerate()
        .map(|(i, (z, r))| EigenEntry { index: i, re: z.re, im: z.im, exact: None, residual: Some(*r) })
        .collect();
    if expr.order() <= 2 && !sp.eigenvalues.is_empty() {
        let lo = sp.eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) - 1.0;
        let hi = sp.eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) + 1.0;
        let roots = shooting_oracle(&p.model, &bc, lo, hi, ORACLE_STEP)?;
        let worst = sp
            .eigenvalues
            .iter()
            .map(|z| {
                roots
                    .iter()
                    .map(|r| (z.re - r).abs() / z.re.abs().max(1.0))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        checks.push(check_le("oracle_agreement", worst, tol.oracle_rel));
    }
    *keep = Some(sp);
    Ok(checks)
}

fn legendre_checks(config: &RunConfig, eigen: &mut Vec<EigenEntry>) -> Result<Vec<Check>> {
    let a = match &config.example {
        ExampleChoice::Catalog(ExampleId::LegendreType) => config.params.a_param.clone(),
        ExampleChoice::Custom(spec) => match spec.expr.kind() {
            crate::boundary::ExprKind::LegendreType { a } => a.clone(),
            _ => return Err(cfg("the legendre command needs a Legendre-type model")),
        },
        _ => return Err(cfg("the legendre command needs example legendre_type")),
    };
    let mu = MuMeasure::new(a.clone())?;
    let basis = gram_schmidt(&mu, config.n_max)?;
    let pairing = resolve_sign_pairing(&basis)?;
    let mut checks = vec![check_eq_value(
        "boundary_identity_sign_pairing",
        json!(SignPairing::PlusAtPlusOne),
        json!(pairing),
    )];
    eigen.clear();
    for n in 0..=config.n_max {
        let want = lambda_formula(&a, n);
        let got = eigen_check(&basis, n)?;
        checks.push(check_eq_value(&format!("eigenvalue_{n}"), json!(want.to_string()), json!(got.to_string())));
        eigen.push(EigenEntry {
            index: n,
            re: rational_to_f64(&got),
            im: 0.0,
            exact: Some(got.to_string()),
            residual: None,
        });
        checks.push(check_bool(&format!("boundary_identity_{n}"), true, boundary_identity_check(&basis, n, pairing)?));
        checks.push(check_bool(&format!("extended_eigenrelation_{n}"), true, extended_eigen_check(&basis, n, &zero_b())?));
        if n >= 1 {
            checks.push(check_bool(
                &format!("extended_eigenrelation_b_identity_{n}"),
                false,
                extended_eigen_check(&basis, n, &identity_b())?,
            ));
        }
    }
    let mut nonzero = Vec::new();
    for m in 0..=config.n_max {
        for n in (m + 1)..=config.n_max {
            let (pm, pn) = (&basis.polys()[m], &basis.polys()[n]);
            if !mu_inner(pm, pn, &mu).is_zero() || !extended_orthogonality_check(&basis, m, n)?.is_zero() {
                nonzero.push(format!("({m},{n})"));
            }
        }
    }
    checks.push(check_eq_value("orthogonality_nonzero_pairs", json!(Vec::<String>::new()), json!(nonzero)));
    Ok(checks)
}

/// Runs `command` for `config`. Errors are configuration problems or
/// pipeline failures; check failures are reported in the result.
pub fn run(config: &RunConfig, command: Command) -> Result<Report> {
    let mut timings = BTreeMap::new();
    let mut checks = Vec::new();
    let mut eigen = Vec::new();
    let mut rendered = Vec::new();
    let mut spectrum_report = None;
    let is_legendre = match &config.example {
        ExampleChoice::Catalog(id) => *id == ExampleId::LegendreType,
        ExampleChoice::Custom(spec) => matches!(spec.expr.kind(), crate::boundary::ExprKind::LegendreType { .. }),
    };

    let start = Instant::now();
    let problem = build_problem(config)?;
    timings.insert("build".to_string(), start.elapsed().as_secs_f64());

    let wants = |c: Command| command == c || command == Command::All;
    let mut stage = |name: &str, f: &mut dyn FnMut() -> Result<Vec<Check>>| -> Result<()> {
        let t = Instant::now();
        checks.extend(f()?);
        timings.insert(name.to_string(), t.elapsed().as_secs_f64());
        Ok(())
    };
    if wants(Command::CheckSymplectic) {
        stage("check-symplectic", &mut || symplectic_checks(&problem, &config.tolerances, config.seed))?;
    }
    if wants(Command::DeriveBc) {
        stage("derive-bc", &mut || derive_checks(&problem, &mut rendered))?;
    }
    if wants(Command::VerifyGkn) {
        stage("verify-gkn", &mut || gkn_checks(&problem))?;
    }
    // The Legendre-type spectrum is checked exactly; collocation only measures symmetry.
    if wants(Command::Spectrum) {
        stage("spectrum", &mut || spectrum_checks(&problem, config, &mut eigen, &mut spectrum_report))?;
    }
    if command == Command::Legendre || (command == Command::All && is_legendre) {
        stage("legendre", &mut || legendre_checks(config, &mut eigen))?;
    }
    if rendered.is_empty() {
        rendered = problem.conditions().map(|bc| bc.human_readable).unwrap_or_default();
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        status: if pass { "pass" } else { "fail" }.into(),
        command: command.name().into(),
        example: config.example_name().into(),
        checks,
        eigenvalues: eigen,
        boundary_conditions_rendered: rendered,
        seed: config.seed,
        timings,
        spectrum: spectrum_report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn config(v: Value) -> Result<RunConfig> {
        RunConfig::from_value(&v)
    }

    #[test]
    fn params_accept_rational_strings_and_top_level_keys() {
        let c = config(json!({"example": "fourier_3_3", "params": {"a": "-1/2"}, "b": 2, "alpha": 0.25})).unwrap();
        assert_eq!(c.params.a, rat(-1, 2));
        assert_eq!(c.params.b, rat(2, 1));
        assert_eq!(c.params.alpha, 0.25);
        assert_eq!((c.grid_n, c.n_max, c.seed), (64, 12, 0));
    }

    #[test]
    fn malformed_configs_are_rejected() {
        let bad = [
            json!({"example": "fourier_3_1", "a": 0, "b": 1}),
            json!({"example": "fourier_3_1", "a": 0, "b": 1, "alpha": 0, "colour": 1}),
            json!({"example": "legendre_type", "params": {"A": 1, "Q": 2}}),
            json!({"example": "legendre_type", "A": "one"}),
            json!({"example": "legendre_type", "A": 1, "n_max": 25}),
            json!({"example": "legendre_type", "A": 1, "tolerances": {"imag": 0}}),
            json!({"example": "legendre_type", "A": 1, "tolerances": {"loose": 1}}),
            json!({"example": "nope"}),
            json!({"example": "custom"}),
            json!([1, 2]),
        ];
        for v in bad {
            assert!(matches!(config(v.clone()), Err(GknError::Config(_))), "{v}");
        }
        assert!(matches!(RunConfig::from_json("{"), Err(GknError::Config(_))));
    }

    #[test]
    fn derive_bc_passes_for_every_example() {
        for id in ExampleId::ALL {
            let c = config(json!({"example": id.name(), "A": 1, "alpha": 0, "a": 0, "b": 1})).unwrap();
            let r = run(&c, Command::DeriveBc).unwrap();
            assert!(r.passed(), "{}: {:?}", id.name(), r.checks);
            assert_eq!(r.boundary_conditions_rendered, id.expected_conditions());
        }
    }

    #[test]
    fn literal_second_fourier_reading_fails_verification() {
        let c = config(json!({"example": "fourier_3_2b", "alpha": 0, "a": 0, "b": 1})).unwrap();
        let r = run(&c, Command::VerifyGkn).unwrap();
        assert!(!r.passed());
        assert!(r.checks.iter().any(|c| c.name == "self_adjoint_domain" && !c.pass));
    }

    #[test]
    fn legendre_run_is_exact() {
        let c = config(json!({"example": "legendre_type", "A": "3/2", "n_max": 6})).unwrap();
        let r = run(&c, Command::Legendre).unwrap();
        assert!(r.passed(), "{:?}", r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        let exact: Vec<_> = r.eigenvalues.iter().map(|e| e.exact.clone().unwrap()).collect();
        assert_eq!(exact[..3], ["0", "12", "60"]);
    }

    #[test]
    fn legendre_command_needs_a_legendre_model() {
        let c = config(json!({"example": "first_order", "alpha": 0})).unwrap();
        assert!(matches!(run(&c, Command::Legendre), Err(GknError::Config(_))));
    }

    #[test]
    fn custom_model_with_candidates() {
        // The first-order example written out by hand.
        let c = config(json!({
            "example": "custom",
            "custom": {
                "expression": {"kind": "first_order"},
                "w_weights": [1],
                "gkn_traces": [[1, 0, 1, 0]],
                "candidates": [{"trace": [1, 0, 0, 0], "w": [0.5, 0]}]
            }
        }))
        .unwrap();
        let r = run(&c, Command::VerifyGkn).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.boundary_conditions_rendered, ["a_W = (x(0) + x(1))/2"]);
    }

    #[test]
    fn reports_are_deterministic() {
        let c = config(json!({"example": "fourier_3_3", "alpha": 1, "a": 0, "b": 1, "grid_N": 24, "seed": 5})).unwrap();
        let (r1, r2) = (run(&c, Command::Spectrum).unwrap(), run(&c, Command::Spectrum).unwrap());
        assert_eq!(r1.deterministic_json().unwrap(), r2.deterministic_json().unwrap());
    }
}
