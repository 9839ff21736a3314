//! The extended space `H ⊕ W`: the inner-product space `W`, the operator
//! `B`, the coupling map `Ω`, the extended symplectic form, and boundary
//! conditions derived from GKN sets in the extended space.
//!
//! A vector of the extended boundary space is stored as the trace of its
//! `H` part followed by its `W` coordinates.

use crate::boundary::{
    apply_expr, deficiency_solutions, BoundaryForm, DiffExpr, ExprKind, PatchFunction, Sign, TraceVector,
};
use crate::error::{GknError, Result};
use crate::linalg::{columns, max_abs, nullspace, rank, rref, CMat, CVec};
use crate::poly::Poly;
use crate::symplectic::{
    check_gkn_vectors, form_eval, is_complete_lagrangian, quotient_with_basis, GknVectorCheck, SkewForm, Subspace,
};
use num_complex::Complex64;
use serde::Serialize;

const HERMITIAN_TOL: f64 = 1e-12;
const PSI_TOL: f64 = 1e-10;
/// Pivot tolerance for canonical boundary conditions.
pub const PIVOT_TOL: f64 = 1e-12;

fn hermitian_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `W = ℂ^k` with inner product `⟨a, b⟩_W = b* G a` and a `G`-orthonormal
/// basis stored as the columns of `Xi`.
#[derive(Debug, Clone)]
pub struct ExtensionSpace {
    gram: CMat,
    xi: CMat,
}

impl ExtensionSpace {
    pub fn new(gram: CMat, xi: CMat) -> Result<Self> {
        let k = gram.nrows();
        if gram.ncols() != k {
            return Err(GknError::DimensionMismatch { expected: k, got: gram.ncols() });
        }
        if xi.nrows() != k || xi.ncols() != k {
            return Err(GknError::DimensionMismatch { expected: k, got: xi.ncols() });
        }
        if hermitian_defect(&gram) > HERMITIAN_TOL * (1.0 + max_abs(&gram)) {
            return Err(GknError::Precondition("W Gram matrix is not Hermitian".into()));
        }
        if k > 0 && gram.clone().cholesky().is_none() {
            return Err(GknError::Precondition("W Gram matrix is not positive definite".into()));
        }
        let defect = max_abs(&(xi.adjoint() * &gram * &xi - CMat::identity(k, k)));
        if defect > HERMITIAN_TOL * (1.0 + max_abs(&gram) * max_abs(&xi).powi(2)) {
            return Err(GknError::Precondition(format!("Xi is not G-orthonormal (defect {defect:.3e})")));
        }
        Ok(ExtensionSpace { gram, xi })
    }

    /// `Xi = L^{-*}` for `G = L L*`.
    pub fn from_gram(gram: CMat) -> Result<Self> {
        let k = gram.nrows();
        if k == 0 {
            return Self::new(gram, CMat::zeros(0, 0));
        }
        let chol = gram
            .clone()
            .cholesky()
            .ok_or_else(|| GknError::Precondition("W Gram matrix is not positive definite".into()))?;
        let l_inv = chol
            .l()
            .try_inverse()
            .ok_or_else(|| GknError::Precondition("singular Cholesky factor".into()))?;
        Self::new(gram, l_inv.adjoint())
    }

    /// `⟨a, b⟩_W = Σ a_j b̄_j / w_j`, with `ξ_j = √w_j e_j`.
    pub fn weighted(weights: &[f64]) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0)) {
            return Err(GknError::Precondition(format!("W weights must be positive, got {w}")));
        }
        let gram = CMat::from_diagonal(&CVec::from_iterator(
            weights.len(),
            weights.iter().map(|w| Complex64::new(1.0 / w, 0.0)),
        ));
        let xi = CMat::from_diagonal(&CVec::from_iterator(
            weights.len(),
            weights.iter().map(|w| Complex64::new(w.sqrt(), 0.0)),
        ));
        Self::new(gram, xi)
    }

    pub fn euclidean(k: usize) -> Self {
        ExtensionSpace { gram: CMat::identity(k, k), xi: CMat::identity(k, k) }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn xi(&self) -> &CMat {
        &self.xi
    }

    /// `⟨a, b⟩_W`
    pub fn inner(&self, a: &CVec, b: &CVec) -> Complex64 {
        (b.adjoint() * &self.gram * a)[(0, 0)]
    }

    pub fn norm(&self, a: &CVec) -> f64 {
        self.inner(a, a).re.max(0.0).sqrt()
    }
}

/// An operator on `W`, self-adjoint for `⟨·,·⟩_W`.
#[derive(Debug, Clone)]
pub struct OperatorB {
    b: CMat,
}

impl OperatorB {
    pub fn new(b: CMat, w: &ExtensionSpace) -> Result<Self> {
        let k = w.dim();
        if b.nrows() != k || b.ncols() != k {
            return Err(GknError::DimensionMismatch { expected: k, got: b.nrows() });
        }
        let gb = w.gram() * &b;
        if hermitian_defect(&gb) > HERMITIAN_TOL * (1.0 + max_abs(&gb)) {
            return Err(GknError::Precondition("B is not self-adjoint in W (G B is not Hermitian)".into()));
        }
        Ok(OperatorB { b })
    }

    pub fn zero(k: usize) -> Self {
        OperatorB { b: CMat::zeros(k, k) }
    }

    pub fn matrix(&self) -> &CMat {
        &self.b
    }
}

/// Traces `t_1, …, t_k` of a partial GKN set for the minimal operator.
#[derive(Debug, Clone)]
pub struct PartialGknSet {
    traces: Vec<TraceVector>,
}

impl PartialGknSet {
    pub fn new(traces: Vec<TraceVector>) -> Self {
        PartialGknSet { traces }
    }

    pub fn traces(&self) -> &[TraceVector] {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }
}

/// A boundary representative `(x, a)` of `H ⊕ W`, given by the trace of `x`.
#[derive(Debug, Clone)]
pub struct ExtendedVector {
    pub trace: TraceVector,
    pub w: CVec,
}

impl ExtendedVector {
    pub fn new(trace: TraceVector, w: CVec) -> Self {
        ExtendedVector { trace, w }
    }

    pub fn stacked(&self) -> CVec {
        let n = self.trace.len();
        CVec::from_iterator(n + self.w.len(), self.trace.values().iter().chain(self.w.iter()).copied())
    }
}

#[derive(Debug, Clone)]
pub struct ExtendedModel {
    boundary_form: BoundaryForm,
    w: ExtensionSpace,
    b: OperatorB,
    gkn_partial: PartialGknSet,
    omega: CMat,
    f_ext: SkewForm,
    m_min: Subspace,
}

/// Assembles `Ω`, the extended form and `M_min`, and checks the model
/// invariants.
pub fn build_model(bf: BoundaryForm, w: ExtensionSpace, b: OperatorB, t: PartialGknSet) -> Result<ExtendedModel> {
    let expr = &bf.expr;
    let def = expr.deficiency_index();
    let d2 = bf.form.dim();
    let k = w.dim();
    if k > def {
        return Err(GknError::DimensionalityCondition { dim_w: k, deficiency: def });
    }
    if t.len() != k {
        return Err(GknError::DimensionMismatch { expected: k, got: t.len() });
    }
    if b.matrix().nrows() != k {
        return Err(GknError::DimensionMismatch { expected: k, got: b.matrix().nrows() });
    }
    for tj in t.traces() {
        if tj.len() != d2 {
            return Err(GknError::DimensionMismatch { expected: d2, got: tj.len() });
        }
    }
    let vecs: Vec<CVec> = t.traces().iter().map(|tj| tj.values().clone()).collect();
    let tmat = columns(d2, &vecs);
    for j in 0..k {
        let prefix = columns(d2, &vecs[..=j]);
        if rank(&prefix) <= j {
            return Err(GknError::InvalidGknSet(format!("t_{} is linearly dependent on the preceding traces", j + 1)));
        }
    }
    let s = bf.form.matrix();
    let scale = 1.0 + max_abs(s);
    for i in 0..k {
        for j in 0..k {
            let v = form_eval(&bf.form, &vecs[j], &vecs[i])?;
            let bound = 1e-10 * scale * vecs[i].norm() * vecs[j].norm();
            if v.norm() > bound {
                return Err(GknError::InvalidGknSet(format!(
                    "[t_{}, t_{}] = {v} is nonzero",
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    // Ω x = Σ_j [x, t_j] ξ_j = Xi (T* S) x
    let omega = w.xi() * (tmat.adjoint() * s);
    let g = w.gram();
    let mut s_ext = CMat::zeros(d2 + k, d2 + k);
    s_ext.view_mut((0, 0), (d2, d2)).copy_from(s);
    if k > 0 {
        s_ext.view_mut((0, d2), (d2, k)).copy_from(&(omega.adjoint() * g));
        s_ext.view_mut((d2, 0), (k, d2)).copy_from(&(-(g * &omega)));
    }
    let f_ext = SkewForm::new(s_ext)?;
    let lifted: Vec<CVec> = (0..k)
        .map(|j| {
            CVec::from_iterator(d2 + k, vecs[j].iter().copied().chain(w.xi().column(j).iter().copied()))
        })
        .collect();
    let m_min = Subspace::span(d2 + k, &lifted);

    let model = ExtendedModel { boundary_form: bf, w, b, gkn_partial: t, omega, f_ext, m_min };
    model.check_invariants()?;
    Ok(model)
}

impl ExtendedModel {
    fn check_invariants(&self) -> Result<()> {
        let om_scale = 1.0 + max_abs(&self.omega);
        for (j, tj) in self.gkn_partial.traces().iter().enumerate() {
            let r = (&self.omega * tj.values()).norm();
            if r > 1e-12 * om_scale * (1.0 + tj.values().norm()) {
                return Err(GknError::Inconsistent(format!("Ω t_{} = {r:.3e} is nonzero", j + 1)));
            }
        }
        let s_ext = self.f_ext.matrix();
        let residual = max_abs(&(s_ext * self.m_min.basis()));
        if residual > 1e-12 * (1.0 + max_abs(s_ext)) {
            return Err(GknError::Inconsistent(format!("M_min is not in the radical (residual {residual:.3e})")));
        }
        Ok(())
    }

    pub fn expr(&self) -> &DiffExpr {
        &self.boundary_form.expr
    }

    pub fn boundary_form(&self) -> &BoundaryForm {
        &self.boundary_form
    }

    pub fn w(&self) -> &ExtensionSpace {
        &self.w
    }

    pub fn b(&self) -> &OperatorB {
        &self.b
    }

    pub fn gkn_partial(&self) -> &PartialGknSet {
        &self.gkn_partial
    }

    /// `Ω` as a `k × 2d` matrix acting on traces.
    pub fn omega_matrix(&self) -> &CMat {
        &self.omega
    }

    pub fn omega(&self, trace: &TraceVector) -> CVec {
        &self.omega * trace.values()
    }

    pub fn f_ext(&self) -> &SkewForm {
        &self.f_ext
    }

    pub fn m_min(&self) -> &Subspace {
        &self.m_min
    }

    pub fn trace_dim(&self) -> usize {
        self.boundary_form.form.dim()
    }

    pub fn k(&self) -> usize {
        self.w.dim()
    }

    /// Ambient dimension `2d + k` of the extended boundary space.
    pub fn ext_dim(&self) -> usize {
        self.trace_dim() + self.k()
    }

    pub fn deficiency_index(&self) -> usize {
        self.expr().deficiency_index()
    }

    /// `[(x, a), (y, b)]_{H⊕W}`
    pub fn ext_form(&self, u: &ExtendedVector, v: &ExtendedVector) -> Result<Complex64> {
        form_eval(&self.f_ext, &u.stacked(), &v.stacked())
    }

    /// `Ψ` on the trace image of `Δ₀`: `Σ α_j t_j ↦ Σ α_j ξ_j`.
    pub fn psi(&self, t: &TraceVector) -> Result<CVec> {
        let d2 = self.trace_dim();
        if t.len() != d2 {
            return Err(GknError::DimensionMismatch { expected: d2, got: t.len() });
        }
        let k = self.k();
        let outside = || GknError::Domain("not in Δ₀ modulo minimal".into());
        if k == 0 {
            return if t.values().norm() <= PSI_TOL { Ok(CVec::zeros(0)) } else { Err(outside()) };
        }
        let vecs: Vec<CVec> = self.gkn_partial.traces().iter().map(|tj| tj.values().clone()).collect();
        let tmat = columns(d2, &vecs);
        let alpha = crate::linalg::least_squares(&tmat, t.values(), 1e-14);
        let residual = (&tmat * &alpha - t.values()).norm();
        if residual > PSI_TOL * (1.0 + t.values().norm()) {
            return Err(outside());
        }
        Ok(self.w.xi() * alpha)
    }

    /// `Ba − Ω(tr x)`, the `W` component of the maximal operator.
    pub fn w_action(&self, trace: &TraceVector, a: &CVec) -> CVec {
        self.b.matrix() * a - self.omega(trace)
    }

    /// `T̂₁(x, a) = (ℓx, Ba − Ωx)` for a polynomial `x`.
    pub fn maximal_action(&self, x: &Poly<Complex64>, a: &CVec) -> Result<(Poly<Complex64>, CVec)> {
        if a.len() != self.k() {
            return Err(GknError::DimensionMismatch { expected: self.k(), got: a.len() });
        }
        let image = apply_expr(self.expr(), x)?;
        let trace = crate::boundary::trace_vector_of_poly(self.expr(), x);
        Ok((image, self.w_action(&trace, a)))
    }

    /// `T̂₁(x, a)` for a patch function, the `H` part sampled on its grid.
    pub fn maximal_action_patch(&self, x: &PatchFunction, a: &CVec) -> Result<(Vec<Complex64>, CVec)> {
        if a.len() != self.k() {
            return Err(GknError::DimensionMismatch { expected: self.k(), got: a.len() });
        }
        Ok((x.apply_expr_sampled(self.expr())?, self.w_action(&x.trace, a)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GknExtendedReport {
    pub independent_mod_min: bool,
    pub symmetric: bool,
    pub count_ok: bool,
}

impl GknExtendedReport {
    pub fn passed(&self) -> bool {
        self.independent_mod_min && self.symmetric && self.count_ok
    }
}

fn stacked_candidates(model: &ExtendedModel, candidates: &[ExtendedVector]) -> Result<Vec<CVec>> {
    candidates
        .iter()
        .map(|v| {
            if v.trace.len() != model.trace_dim() {
                return Err(GknError::DimensionMismatch { expected: model.trace_dim(), got: v.trace.len() });
            }
            if v.w.len() != model.k() {
                return Err(GknError::DimensionMismatch { expected: model.k(), got: v.w.len() });
            }
            Ok(v.stacked())
        })
        .collect()
}

pub fn check_gkn_extended(model: &ExtendedModel, candidates: &[ExtendedVector]) -> Result<GknExtendedReport> {
    let vecs = stacked_candidates(model, candidates)?;
    let GknVectorCheck { independent_mod_m, symmetric } = check_gkn_vectors(&model.f_ext, &model.m_min, &vecs)?;
    Ok(GknExtendedReport {
        independent_mod_min: independent_mod_m,
        symmetric,
        count_ok: candidates.len() == model.deficiency_index(),
    })
}

/// Linear boundary conditions `C (tr x, a) = 0` on the extended space.
#[derive(Debug, Clone)]
pub struct BoundaryConditions {
    pub c: CMat,
    pub canonical: CMat,
    pub human_readable: Vec<String>,
}

impl BoundaryConditions {
    /// Wraps an arbitrary constraint matrix (rows act on `(trace, W)`).
    pub fn from_matrix(model: &ExtendedModel, c: CMat) -> Result<Self> {
        if c.ncols() != model.ext_dim() {
            return Err(GknError::DimensionMismatch { expected: model.ext_dim(), got: c.ncols() });
        }
        let canonical = rref(&c, PIVOT_TOL);
        let names = variable_names(model);
        let human_readable = render_rows(&canonical, &names, model.trace_dim())
            .unwrap_or_else(|e| vec![format!("error: {e}")]);
        Ok(BoundaryConditions { c, canonical, human_readable })
    }

    pub fn rows(&self) -> usize {
        self.c.nrows()
    }
}

/// Display names for the columns of `C`: trace names, then `a_W` or `a_W[j]`.
pub fn variable_names(model: &ExtendedModel) -> Vec<String> {
    let mut names = model.expr().trace_names();
    let k = model.k();
    if k == 1 {
        names.push("a_W".into());
    } else {
        names.extend((1..=k).map(|j| format!("a_W[{j}]")));
    }
    names
}

/// Row `j` of `C` is `(x, a) ↦ [(x, a), (x_j, a_j)]_{H⊕W}`.
pub fn derive_boundary_conditions(model: &ExtendedModel, gkn: &[ExtendedVector]) -> Result<BoundaryConditions> {
    let report = check_gkn_extended(model, gkn)?;
    if !report.passed() {
        return Err(GknError::InvalidGknSet(format!(
            "candidates fail the GKN conditions (independent: {}, symmetric: {}, count: {})",
            report.independent_mod_min, report.symmetric, report.count_ok
        )));
    }
    let n = model.ext_dim();
    let s_ext = model.f_ext.matrix();
    let mut c = CMat::zeros(gkn.len(), n);
    for (j, v) in gkn.iter().enumerate() {
        let row = v.stacked().adjoint() * s_ext;
        c.row_mut(j).copy_from(&row);
    }
    if rank(&c) != model.deficiency_index() {
        return Err(GknError::Inconsistent(format!(
            "derived condition matrix has rank {} instead of {}",
            rank(&c),
            model.deficiency_index()
        )));
    }
    BoundaryConditions::from_matrix(model, c)
}

/// True iff the solutions of `bc`, taken modulo `M_min`, form a complete
/// Lagrangian of dimension `def` in the quotient boundary space.
pub fn verify_self_adjoint_domain(model: &ExtendedModel, bc: &BoundaryConditions) -> Result<bool> {
    if bc.c.ncols() != model.ext_dim() {
        return Err(GknError::DimensionMismatch { expected: model.ext_dim(), got: bc.c.ncols() });
    }
    let (quotient, q) = quotient_with_basis(&model.f_ext, &model.m_min)?;
    let domain = nullspace(&bc.c);
    // Conditions that cut into the minimal part do not describe an extension.
    let dom_space = Subspace::column_span(&domain);
    if !model.m_min.is_within(&dom_space) {
        return Ok(false);
    }
    let pushed = Subspace::column_span(&(q.adjoint() * &domain));
    if pushed.dim() != model.deficiency_index() {
        return Ok(false);
    }
    is_complete_lagrangian(&quotient, &pushed)
}

/// A solution of `T̂₁(x, a) = ±i (x, a)` built from a closed-form exponential.
#[derive(Debug, Clone)]
pub struct ExtendedDeficiencyVector {
    pub mu: Complex64,
    pub trace: TraceVector,
    pub a: CVec,
    pub lambda: Complex64,
    /// `max |ℓx − λx| / max |x|` over sample points.
    pub h_residual: f64,
    /// `‖Ba − Ωx − λa‖_W`.
    pub w_residual: f64,
}

impl ExtendedDeficiencyVector {
    /// The `H` component, `e^{μu}`.
    pub fn eval(&self, u: f64) -> Complex64 {
        (self.mu * u).exp()
    }
}

/// `(x, (B − λ)^{-1} Ω x)` for each closed-form solution `x` of `ℓx = λx`.
pub fn extended_deficiency_vectors(model: &ExtendedModel, sign: Sign) -> Result<Vec<ExtendedDeficiencyVector>> {
    let expr = model.expr();
    let lambda = sign.lambda();
    let k = model.k();
    let shifted = model.b.matrix() - CMat::identity(k, k) * lambda;
    let inv = if k == 0 {
        CMat::zeros(0, 0)
    } else {
        shifted
            .try_inverse()
            .ok_or_else(|| GknError::Inconsistent("B ∓ iI is singular".into()))?
    };
    let coeffs = expr.expanded_coefficients();
    let (lo, hi) = expr.interval_f64();
    let samples: Vec<f64> = (0..=16).map(|i| lo + (hi - lo) * i as f64 / 16.0).collect();
    let mut out = Vec::new();
    for sol in deficiency_solutions(expr, sign)? {
        let a = &inv * model.omega(&sol.trace);
        let mut worst: f64 = 0.0;
        let mut size: f64 = 0.0;
        for &u in &samples {
            let uc = Complex64::new(u, 0.0);
            let lx: Complex64 = coeffs.iter().enumerate().map(|(j, c)| c.eval(&uc) * sol.derivative(u, j)).sum();
            worst = worst.max((lx - lambda * sol.eval(u)).norm());
            size = size.max(sol.eval(u).norm());
        }
        let w_res = model.w_action(&sol.trace, &a) - &a * lambda;
        out.push(ExtendedDeficiencyVector {
            mu: sol.mu,
            trace: sol.trace.clone(),
            h_residual: worst / size.max(f64::MIN_POSITIVE),
            w_residual: model.w.norm(&w_res),
            a,
            lambda,
        });
    }
    Ok(out)
}

/// One string per nonzero row of a canonical condition matrix.
pub fn render_conditions(bc: &BoundaryConditions, model: &ExtendedModel) -> Result<Vec<String>> {
    render_rows(&bc.canonical, &variable_names(model), model.trace_dim())
}

fn render_rows(canonical: &CMat, names: &[String], trace_dim: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for row in canonical.row_iter() {
        let terms: Vec<(usize, Complex64)> =
            row.iter().enumerate().filter(|(_, v)| v.norm() > PIVOT_TOL).map(|(i, v)| (i, *v)).collect();
        if terms.is_empty() {
            continue;
        }
        let w_terms: Vec<usize> = terms.iter().map(|(i, _)| *i).filter(|&i| i >= trace_dim).collect();
        // Solve for the single W variable when there is one, else for the pivot.
        let target = if w_terms.len() == 1 { w_terms[0] } else { terms[0].0 };
        let ct = terms.iter().find(|(i, _)| *i == target).map(|(_, v)| *v).unwrap();
        let rhs: Vec<(Complex64, &str)> =
            terms.iter().filter(|(i, _)| *i != target).map(|(i, v)| (-*v / ct, names[*i].as_str())).collect();
        out.push(format!("{} = {}", names[target], render_sum(&rhs)));
    }
    if out.is_empty() {
        return Err(GknError::Inconsistent("no nonzero boundary condition rows to render".into()));
    }
    Ok(out)
}

fn render_sum(terms: &[(Complex64, &str)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    // Equal coefficients 1/q render as "(x + y)/q".
    if terms.len() > 1 {
        let first = terms[0].0;
        if terms.iter().all(|(c, _)| (*c - first).norm() <= 1e-12 * (1.0 + first.norm())) && first.im.abs() <= 1e-12 {
            if let Some(q) = unit_fraction(first.re) {
                let inner: Vec<&str> = terms.iter().map(|(_, n)| *n).collect();
                return format!("({})/{q}", inner.join(" + "));
            }
        }
    }
    let mut s = String::new();
    for (idx, (c, name)) in terms.iter().enumerate() {
        let real = c.im.abs() <= 1e-12 * (1.0 + c.re.abs());
        let negative = real && c.re < 0.0;
        let mag = if negative { Complex64::new(-c.re, 0.0) } else { *c };
        let body = format!("{}{name}", coefficient_prefix(mag, real));
        match (idx, negative) {
            (0, false) => s.push_str(&body),
            (0, true) => s.push_str(&format!("\u{2212}{body}")),
            (_, false) => s.push_str(&format!(" + {body}")),
            (_, true) => s.push_str(&format!(" \u{2212} {body}")),
        }
    }
    s
}

fn unit_fraction(x: f64) -> Option<u32> {
    if x <= 0.0 {
        return None;
    }
    let q = (1.0 / x).round();
    (q >= 2.0 && q <= 64.0 && (x * q - 1.0).abs() <= 1e-10).then_some(q as u32)
}

fn coefficient_prefix(c: Complex64, real: bool) -> String {
    if real {
        if (c.re - 1.0).abs() <= 1e-12 {
            return String::new();
        }
        return format!("{}\u{00b7}", format_real(c.re));
    }
    format!("({} + {}i)\u{00b7}", format_real(c.re), format_real(c.im))
}

/// Small rationals `p/q` print exactly; anything else in shortest decimal form.
pub fn format_real(x: f64) -> String {
    for q in 1..=16u32 {
        let p = x * q as f64;
        if (p - p.round()).abs() <= 1e-10 * q as f64 {
            let p = p.round() as i64;
            let body = if q == 1 { p.abs().to_string() } else { format!("{}/{q}", p.abs()) };
            return if p < 0 { format!("\u{2212}{body}") } else { body };
        }
    }
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    match s.strip_prefix('-') {
        Some(rest) => format!("\u{2212}{rest}"),
        None => s,
    }
}

/// Complex matrix as rows of interleaved `[re, im, re, im, …]`.
pub fn cmat_to_rows(m: &CMat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().flat_map(|z| [z.re, z.im]).collect()).collect()
}

pub fn cvec_to_flat(v: &CVec) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelJson {
    pub kind: String,
    pub interval: [String; 2],
    pub parameters: Vec<String>,
    pub gram: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub xi: Vec<Vec<f64>>,
    pub gkn_traces: Vec<Vec<f64>>,
    pub omega: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryConditionsJson {
    pub matrix: Vec<Vec<f64>>,
    pub canonical: Vec<Vec<f64>>,
    pub conditions: Vec<String>,
}

impl ExtendedModel {
    pub fn to_json(&self) -> ModelJson {
        let expr = self.expr();
        let (kind, parameters) = match expr.kind() {
            ExprKind::FirstOrderI => ("first_order_i".to_string(), Vec::new()),
            ExprKind::Fourier => ("fourier".to_string(), Vec::new()),
            ExprKind::LegendreType { a } => ("legendre_type".to_string(), vec![format!("A={a}")]),
            ExprKind::GeneralEvenOrder { q } => (
                "general_even_order".to_string(),
                q.iter()
                    .enumerate()
                    .map(|(j, p)| {
                        let cs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                        format!("q{j}=[{}]", cs.join(", "))
                    })
                    .collect(),
            ),
        };
        ModelJson {
            kind,
            interval: [expr.left().to_string(), expr.right().to_string()],
            parameters,
            gram: cmat_to_rows(self.w.gram()),
            b: cmat_to_rows(self.b.matrix()),
            xi: cmat_to_rows(self.w.xi()),
            gkn_traces: self.gkn_partial.traces().iter().map(|t| cvec_to_flat(t.values())).collect(),
            omega: cmat_to_rows(&self.omega),
        }
    }
}

impl BoundaryConditions {
    pub fn to_json(&self) -> BoundaryConditionsJson {
        BoundaryConditionsJson {
            matrix: cmat_to_rows(&self.c),
            canonical: cmat_to_rows(&self.canonical),
            conditions: self.human_readable.clone(),
        }
    }
}
