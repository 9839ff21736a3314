//! Differential expressions, their endpoint traces, and the boundary forms
//! produced by Green's formula.
//!
//! Every supported expression has unit weight and is written in the
//! Lagrange symmetric form `ℓ[y] = Σ_j (-1)^j (q_j y^(j))^(j)`, except the
//! first-order expression `ℓ[y] = i y′`. A trace vector lists `x, x′, …`
//! at the left endpoint followed by the same derivatives at the right
//! endpoint.

use crate::error::{GknError, Result};
use crate::linalg::{CMat, CVec};
use crate::poly::{binomial, rat, rational_to_f64, ComplexRational, Poly, Rational, Scalar};
use crate::symplectic::SkewForm;
use num_complex::{Complex, Complex64};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// `i x′` on `[0, 1]`.
    FirstOrderI,
    /// `-x″` on a compact interval.
    Fourier,
    /// Fourth-order Legendre-type expression on `[-1, 1]` with parameter `A > 0`.
    LegendreType { a: Rational },
    /// `Σ_j (-1)^j (q_j y^(j))^(j)` with real polynomial coefficients, regular on `[a, b]`.
    GeneralEvenOrder { q: Vec<Poly<Rational>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffExpr {
    kind: ExprKind,
    left: Rational,
    right: Rational,
}

impl DiffExpr {
    pub fn first_order() -> Self {
        DiffExpr { kind: ExprKind::FirstOrderI, left: rat(0, 1), right: rat(1, 1) }
    }

    pub fn fourier(a: Rational, b: Rational) -> Result<Self> {
        if a >= b {
            return Err(GknError::Precondition(format!("empty interval [{a}, {b}]")));
        }
        Ok(DiffExpr { kind: ExprKind::Fourier, left: a, right: b })
    }

    pub fn legendre_type(a: Rational) -> Result<Self> {
        if !a.is_positive() {
            return Err(GknError::Precondition(format!("Legendre-type parameter must be positive, got {a}")));
        }
        Ok(DiffExpr { kind: ExprKind::LegendreType { a }, left: rat(-1, 1), right: rat(1, 1) })
    }

    /// `q[j]` multiplies the `j`-th derivative; the order is `2 (q.len() - 1)`.
    pub fn general_even_order(q: Vec<Poly<Rational>>, a: Rational, b: Rational) -> Result<Self> {
        if a >= b {
            return Err(GknError::Precondition(format!("empty interval [{a}, {b}]")));
        }
        if q.len() < 2 || q.last().is_some_and(Poly::is_zero) {
            return Err(GknError::Precondition("leading coefficient q_n must be nonzero with n >= 1".into()));
        }
        Ok(DiffExpr { kind: ExprKind::GeneralEvenOrder { q }, left: a, right: b })
    }

    pub fn kind(&self) -> &ExprKind {
        &self.kind
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn interval_f64(&self) -> (f64, f64) {
        (rational_to_f64(&self.left), rational_to_f64(&self.right))
    }

    pub fn order(&self) -> usize {
        match &self.kind {
            ExprKind::FirstOrderI => 1,
            ExprKind::Fourier => 2,
            ExprKind::LegendreType { .. } => 4,
            ExprKind::GeneralEvenOrder { q } => 2 * (q.len() - 1),
        }
    }

    /// Number of derivatives recorded per endpoint.
    ///
    /// The Legendre-type expression is fourth order, but its boundary form
    /// only involves `x` and `x′` at `±1`, so two traces per endpoint suffice.
    pub fn traces_per_endpoint(&self) -> usize {
        match &self.kind {
            ExprKind::FirstOrderI => 1,
            ExprKind::Fourier | ExprKind::LegendreType { .. } => 2,
            ExprKind::GeneralEvenOrder { q } => 2 * (q.len() - 1),
        }
    }

    pub fn trace_dim(&self) -> usize {
        2 * self.traces_per_endpoint()
    }

    /// Coefficients `q_0, …, q_n` of the symmetric form. Empty for the
    /// first-order expression.
    pub fn symmetric_coefficients(&self) -> Vec<Poly<Rational>> {
        match &self.kind {
            ExprKind::FirstOrderI => Vec::new(),
            ExprKind::Fourier => vec![Poly::zero(), Poly::constant(rat(1, 1))],
            ExprKind::LegendreType { a } => {
                // q_1 = 8 + 4A(1 - u²), q_2 = (1 - u²)²
                let one_minus_u2 = Poly::new(vec![rat(1, 1), rat(0, 1), rat(-1, 1)]);
                let q1 = &Poly::constant(rat(8, 1)) + &one_minus_u2.scale(&(a * rat(4, 1)));
                let q2 = &one_minus_u2 * &one_minus_u2;
                vec![Poly::zero(), q1, q2]
            }
            ExprKind::GeneralEvenOrder { q } => q.clone(),
        }
    }

    /// `c_k` with `ℓ[y] = Σ_k c_k y^(k)`.
    pub fn expanded_coefficients(&self) -> Vec<Poly<Complex64>> {
        let mut out = vec![Poly::zero(); self.order() + 1];
        if let ExprKind::FirstOrderI = self.kind {
            out[1] = Poly::constant(Complex64::new(0.0, 1.0));
            return out;
        }
        // (-1)^j (q_j y^(j))^(j) = (-1)^j Σ_s C(j, s) q_j^(j-s) y^(j+s)
        for (j, qj) in self.symmetric_coefficients().iter().enumerate() {
            for s in 0..=j {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let term = qj.nth_derivative(j - s).scale(&rat(sign * binomial(j, s), 1));
                out[j + s] = &out[j + s] + &term.to_c64();
            }
        }
        out
    }

    /// Deficiency index of the minimal operator.
    pub fn deficiency_index(&self) -> usize {
        match &self.kind {
            ExprKind::FirstOrderI => 1,
            ExprKind::Fourier | ExprKind::LegendreType { .. } => 2,
            ExprKind::GeneralEvenOrder { q } => 2 * (q.len() - 1),
        }
    }

    fn endpoint_labels(&self) -> [String; 2] {
        match &self.kind {
            ExprKind::Fourier | ExprKind::GeneralEvenOrder { .. } => ["a".into(), "b".into()],
            _ => [number_label(&self.left), number_label(&self.right)],
        }
    }

    /// Display names of the trace coordinates, in layout order.
    pub fn trace_names(&self) -> Vec<String> {
        let d = self.traces_per_endpoint();
        self.endpoint_labels()
            .iter()
            .flat_map(|label| (0..d).map(move |k| format!("x{}({label})", derivative_mark(k))))
            .collect()
    }
}

fn number_label(r: &Rational) -> String {
    let s = r.to_string();
    match s.strip_prefix('-') {
        Some(rest) => format!("\u{2212}{rest}"),
        None => s,
    }
}

fn derivative_mark(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "\u{2032}".into(),
        2 => "\u{2033}".into(),
        3 => "\u{2034}".into(),
        _ => format!("^({k})"),
    }
}

/// Endpoint data `(x(left), x′(left), …, x(right), x′(right), …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceVector {
    values: CVec,
}

impl TraceVector {
    pub fn new(expr: &DiffExpr, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != expr.trace_dim() {
            return Err(GknError::DimensionMismatch { expected: expr.trace_dim(), got: values.len() });
        }
        Ok(TraceVector { values: CVec::from_vec(values) })
    }

    pub fn from_real(expr: &DiffExpr, values: &[f64]) -> Result<Self> {
        Self::new(expr, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(expr: &DiffExpr) -> Self {
        TraceVector { values: CVec::zeros(expr.trace_dim()) }
    }

    pub fn values(&self) -> &CVec {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Green's-formula boundary form of an expression on its trace space.
#[derive(Debug, Clone)]
pub struct BoundaryForm {
    pub expr: DiffExpr,
    pub trace_arity: usize,
    pub form: SkewForm,
}

/// `ℓ[p]`, computed exactly over exact coefficient fields.
pub fn apply_expr<T: Scalar>(expr: &DiffExpr, p: &Poly<T>) -> Result<Poly<T>> {
    if let ExprKind::FirstOrderI = expr.kind {
        let i = T::imag_unit().ok_or_else(|| {
            GknError::Unsupported("i x′ needs a coefficient field containing i".into())
        })?;
        return Ok(p.derivative().scale(&i));
    }
    let mut out = Poly::zero();
    for (j, qj) in expr.symmetric_coefficients().iter().enumerate() {
        let q: Poly<T> = qj.map(T::from_rational);
        let inner = &q * &p.nth_derivative(j);
        let term = inner.nth_derivative(j);
        out = if j % 2 == 0 { &out + &term } else { &out - &term };
    }
    Ok(out)
}

/// Exact endpoint values and derivatives of `p`.
pub fn trace_of_poly<T: Scalar>(expr: &DiffExpr, p: &Poly<T>) -> Vec<T> {
    let d = expr.traces_per_endpoint();
    [expr.left.clone(), expr.right.clone()]
        .iter()
        .flat_map(|e| {
            let at = T::from_rational(e);
            (0..d).map(move |k| p.nth_derivative(k).eval(&at))
        })
        .collect()
}

pub fn trace_vector_of_poly<T: Scalar>(expr: &DiffExpr, p: &Poly<T>) -> TraceVector {
    TraceVector { values: CVec::from_vec(trace_of_poly(expr, p).iter().map(Scalar::to_c64).collect()) }
}

/// Exact boundary form matrix `S` with `[x, y] = y* S x` on trace vectors.
pub fn boundary_matrix_exact(expr: &DiffExpr) -> Result<Vec<Vec<ComplexRational>>> {
    let m = expr.trace_dim();
    let zero = ComplexRational::zero();
    let mut s = vec![vec![zero; m]; m];
    let real = |v: i64| Complex::new(rat(v, 1), Rational::zero());
    match &expr.kind {
        ExprKind::FirstOrderI => {
            // i x(1) ȳ(1) - i x(0) ȳ(0)
            s[0][0] = Complex::new(Rational::zero(), rat(-1, 1));
            s[1][1] = Complex::new(Rational::zero(), rat(1, 1));
        }
        ExprKind::LegendreType { .. } => {
            // 8 (x(1)ȳ′(1) - x′(1)ȳ(1) + x′(-1)ȳ(-1) - x(-1)ȳ′(-1))
            s[3][2] = real(8);
            s[2][3] = real(-8);
            s[0][1] = real(8);
            s[1][0] = real(-8);
        }
        ExprKind::Fourier => return Ok(lagrange_bracket(expr)),
        ExprKind::GeneralEvenOrder { q } => {
            if q.len() - 1 > 2 {
                return Err(GknError::Unsupported(format!(
                    "boundary forms are implemented up to order 4, got order {}",
                    expr.order()
                )));
            }
            return Ok(lagrange_bracket(expr));
        }
    }
    Ok(s)
}

/// Boundary terms of `⟨ℓf, g⟩ - ⟨f, ℓg⟩` obtained by integrating each
/// `(-1)^j (q_j f^(j))^(j)` by parts `j` times.
fn lagrange_bracket(expr: &DiffExpr) -> Vec<Vec<ComplexRational>> {
    let m = expr.trace_dim();
    let d = expr.traces_per_endpoint();
    let mut s = vec![vec![ComplexRational::zero(); m]; m];
    let q = expr.symmetric_coefficients();
    let endpoints = [(0usize, expr.left.clone(), -1i64), (1usize, expr.right.clone(), 1i64)];
    for (side, at, sign) in endpoints {
        let base = side * d;
        for (j, qj) in q.iter().enumerate().skip(1) {
            for mm in 0..j {
                let r = j - 1 - mm;
                let parity = if (j + mm) % 2 == 0 { 1 } else { -1 };
                for sidx in 0..=r {
                    let qv = qj.nth_derivative(r - sidx).eval(&at);
                    let coef = qv * rat(sign * parity * binomial(r, sidx), 1);
                    if coef.is_zero() {
                        continue;
                    }
                    let c = Complex::new(coef, Rational::zero());
                    // (q f^(j))^(r) ḡ^(mm)
                    let (row, col) = (base + mm, base + j + sidx);
                    s[row][col] = s[row][col].clone() + c.clone();
                    // - f^(mm) conj((q g^(j))^(r))
                    s[col][row] = s[col][row].clone() - c;
                }
            }
        }
    }
    s
}

pub fn exact_to_cmat(s: &[Vec<ComplexRational>]) -> CMat {
    let m = s.len();
    CMat::from_fn(m, m, |i, j| s[i][j].to_c64())
}

/// Boundary form of `expr` as a [`SkewForm`] on its trace space.
pub fn boundary_form(expr: &DiffExpr) -> Result<BoundaryForm> {
    let exact = boundary_matrix_exact(expr)?;
    let form = SkewForm::new(exact_to_cmat(&exact))?;
    if !form.is_nondegenerate() {
        return Err(GknError::Inconsistent("boundary form is degenerate on the trace space".into()));
    }
    Ok(BoundaryForm { expr: expr.clone(), trace_arity: expr.trace_dim(), form })
}

/// `[x, y]` evaluated exactly on exact traces.
pub fn bracket_exact<T: Scalar>(s: &[Vec<ComplexRational>], x: &[T], y: &[T]) -> ComplexRational
where
    T: Into<ComplexRational>,
{
    let xs: Vec<ComplexRational> = x.iter().cloned().map(Into::into).collect();
    let ys: Vec<ComplexRational> = y.iter().cloned().map(Into::into).collect();
    let mut acc = ComplexRational::zero();
    for (i, yi) in ys.iter().enumerate() {
        let ybar = yi.conj();
        for (j, xj) in xs.iter().enumerate() {
            if !s[i][j].is_zero() {
                acc = acc + ybar.clone() * s[i][j].clone() * xj.clone();
            }
        }
    }
    acc
}

/// A maximal-domain function with prescribed endpoint traces, supported
/// near the endpoints and identically zero on the middle third.
///
/// Near each endpoint it equals the Taylor polynomial determined by the
/// trace; it is then cut off by a quintic smoothstep, which keeps the
/// whole function `C²`.
#[derive(Debug, Clone)]
pub struct PatchFunction {
    pub trace: TraceVector,
    pieces: Vec<(f64, f64, Poly<Complex64>)>,
    pub nodes: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl PatchFunction {
    pub fn piece_at(&self, u: f64) -> Option<&Poly<Complex64>> {
        self.pieces.iter().find(|(lo, hi, _)| u >= *lo && u <= *hi).map(|(_, _, p)| p)
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        self.derivative(u, 0)
    }

    /// Exact `k`-th derivative of the piece containing `u` (zero outside
    /// the endpoint pieces).
    pub fn derivative(&self, u: f64, k: usize) -> Complex64 {
        self.piece_at(u)
            .map(|p| p.nth_derivative(k).eval(&Complex64::new(u, 0.0)))
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// `ℓ` applied piecewise, sampled on the patch grid.
    pub fn apply_expr_sampled(&self, expr: &DiffExpr) -> Result<Vec<Complex64>> {
        let images: Vec<(f64, f64, Poly<Complex64>)> = self
            .pieces
            .iter()
            .map(|(lo, hi, p)| apply_expr(expr, p).map(|img| (*lo, *hi, img)))
            .collect::<Result<_>>()?;
        Ok(self
            .nodes
            .iter()
            .map(|&u| {
                images
                    .iter()
                    .find(|(lo, hi, _)| u >= *lo && u <= *hi)
                    .map(|(_, _, p)| p.eval(&Complex64::new(u, 0.0)))
                    .unwrap_or(Complex64::new(0.0, 0.0))
            })
            .collect())
    }
}

/// `1 - (10τ³ - 15τ⁴ + 6τ⁵)`: falls from 1 to 0 on `[0, 1]` with vanishing
/// first and second derivatives at both ends.
fn smoothstep_down() -> Poly<Complex64> {
    Poly::new([1.0, 0.0, 0.0, -10.0, 15.0, -6.0].iter().map(|&v| Complex64::new(v, 0.0)).collect())
}

pub fn patch_realization(expr: &DiffExpr, t: &TraceVector, grid_size: usize) -> Result<PatchFunction> {
    if t.len() != expr.trace_dim() {
        return Err(GknError::DimensionMismatch { expected: expr.trace_dim(), got: t.len() });
    }
    let (a, b) = expr.interval_f64();
    let h = (b - a) / 3.0;
    let d = expr.traces_per_endpoint();
    let taylor = |at: f64, offset: usize| -> Poly<Complex64> {
        // Σ_k t_k (u - at)^k / k!
        let mut p = Poly::zero();
        let mut fact = 1.0;
        for k in 0..d {
            if k > 0 {
                fact *= k as f64;
            }
            let shifted = Poly::monomial(k, Complex64::new(1.0, 0.0))
                .compose_affine(&Complex64::new(1.0, 0.0), &Complex64::new(-at, 0.0));
            p = &p + &shifted.scale(&(t.values()[offset + k] / fact));
        }
        p
    };
    let left = taylor(a, 0);
    let right = taylor(b, d);
    let step = smoothstep_down();
    let half = h / 2.0;
    // τ = (u - (a + h/2)) / (h/2) on the left ramp, τ = ((b - h/2) - u) / (h/2) on the right.
    let left_ramp = &left
        * &step.compose_affine(&Complex64::new(1.0 / half, 0.0), &Complex64::new(-(a + half) / half, 0.0));
    let right_ramp = &right
        * &step.compose_affine(&Complex64::new(-1.0 / half, 0.0), &Complex64::new((b - half) / half, 0.0));
    let pieces = vec![
        (a, a + half, left),
        (a + half, a + h, left_ramp),
        (b - h, b - half, right_ramp),
        (b - half, b, right),
    ];
    let n = grid_size.max(2);
    let nodes: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    let mut patch = PatchFunction { trace: t.clone(), pieces, nodes, values: Vec::new() };
    patch.values = patch.nodes.iter().map(|&u| patch.eval(u)).collect();
    Ok(patch)
}

/// Which of the deficiency spaces `T₁x = ±ix`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `±i`
    pub fn lambda(self) -> Complex64 {
        match self {
            Sign::Plus => Complex64::new(0.0, 1.0),
            Sign::Minus => Complex64::new(0.0, -1.0),
        }
    }
}

/// Closed-form solution `x(u) = e^{μu}` of `ℓ[x] = ±i x`.
#[derive(Debug, Clone)]
pub struct DeficiencySolution {
    pub mu: Complex64,
    pub trace: TraceVector,
}

impl DeficiencySolution {
    pub fn derivative(&self, u: f64, k: usize) -> Complex64 {
        self.mu.powi(k as i32) * (self.mu * u).exp()
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        self.derivative(u, 0)
    }
}

pub fn deficiency_solutions(expr: &DiffExpr, sign: Sign) -> Result<Vec<DeficiencySolution>> {
    let lambda = sign.lambda();
    let mus: Vec<Complex64> = match expr.kind {
        // i μ = λ
        ExprKind::FirstOrderI => vec![lambda / Complex64::new(0.0, 1.0)],
        // -μ² = λ
        ExprKind::Fourier => {
            let root = (-lambda).sqrt();
            vec![root, -root]
        }
        _ => {
            return Err(GknError::Unsupported(
                "closed-form deficiency solutions exist only for the first-order and Fourier expressions".into(),
            ))
        }
    };
    let (a, b) = expr.interval_f64();
    let d = expr.traces_per_endpoint();
    Ok(mus
        .into_iter()
        .map(|mu| {
            let values = [a, b]
                .iter()
                .flat_map(|&e| (0..d).map(move |k| mu.powi(k as i32) * (mu * e).exp()))
                .collect();
            DeficiencySolution { mu, trace: TraceVector { values: CVec::from_vec(values) } }
        })
        .collect())
}

/// Exact `⟨p, q⟩ = ∫ p q̄` over the expression's interval.
pub fn l2_inner_exact(expr: &DiffExpr, p: &Poly<ComplexRational>, q: &Poly<ComplexRational>) -> ComplexRational {
    let prod = p * &q.conj();
    let a = ComplexRational::from(expr.left.clone());
    let b = ComplexRational::from(expr.right.clone());
    prod.integrate(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::form_eval;

    fn q(coeffs: &[i64]) -> Poly<Rational> {
        Poly::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn legendre_type_application() {
        let e = DiffExpr::legendre_type(rat(3, 1)).unwrap();
        assert!(apply_expr(&e, &q(&[1])).unwrap().is_zero());
        // ℓ[u] = 8A u
        assert_eq!(apply_expr(&e, &q(&[0, 1])).unwrap(), q(&[0, 24]));
        let f = DiffExpr::fourier(rat(0, 1), rat(1, 1)).unwrap();
        assert_eq!(apply_expr(&f, &q(&[0, 0, 1])).unwrap(), q(&[-2]));
    }

    #[test]
    fn first_order_needs_complex_field() {
        let e = DiffExpr::first_order();
        assert!(matches!(apply_expr(&e, &q(&[0, 1])), Err(GknError::Unsupported(_))));
        let p: Poly<ComplexRational> = q(&[0, 1]).map(|r| ComplexRational::from(r.clone()));
        let img = apply_expr(&e, &p).unwrap();
        assert_eq!(img.coeff(0), Complex::new(rat(0, 1), rat(1, 1)));
    }

    #[test]
    fn expanded_coefficients_match_divergence_form() {
        let e = DiffExpr::legendre_type(rat(5, 2)).unwrap();
        let p = q(&[3, -1, 4, 1, -5, 9]);
        let direct = apply_expr(&e, &p.to_c64()).unwrap();
        let expanded = e
            .expanded_coefficients()
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (k, ck)| &acc + &(ck * &p.to_c64().nth_derivative(k)));
        for k in 0..8 {
            assert!((direct.coeff(k) - expanded.coeff(k)).norm() < 1e-9);
        }
    }

    #[test]
    fn traces_of_polynomials() {
        let f = DiffExpr::fourier(rat(0, 1), rat(1, 1)).unwrap();
        assert_eq!(trace_of_poly(&f, &q(&[1])), vec![rat(1, 1), rat(0, 1), rat(1, 1), rat(0, 1)]);
        let lt = DiffExpr::legendre_type(rat(1, 1)).unwrap();
        assert_eq!(trace_of_poly(&lt, &q(&[-1, 1])), vec![rat(-2, 1), rat(1, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(trace_of_poly(&lt, &q(&[0, 1])), vec![rat(-1, 1), rat(1, 1), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn first_order_form_is_diagonal() {
        let bf = boundary_form(&DiffExpr::first_order()).unwrap();
        let s = bf.form.matrix();
        assert_eq!(s[(0, 0)], Complex64::new(0.0, -1.0));
        assert_eq!(s[(1, 1)], Complex64::new(0.0, 1.0));
        assert_eq!(s[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn legendre_form_against_gkn_traces() {
        let a = 2.0f64;
        let e = DiffExpr::legendre_type(rat(2, 1)).unwrap();
        let bf = boundary_form(&e).unwrap();
        let x = TraceVector::from_real(&e, &[0.3, -1.7, 2.2, 0.9]).unwrap();
        let t1 = TraceVector::from_real(&e, &[a.sqrt(), 0.0, 0.0, 0.0]).unwrap();
        let t2 = TraceVector::from_real(&e, &[0.0, 0.0, a.sqrt(), 0.0]).unwrap();
        let v1 = form_eval(&bf.form, x.values(), t1.values()).unwrap();
        let v2 = form_eval(&bf.form, x.values(), t2.values()).unwrap();
        assert!((v1.re - 8.0 * a.sqrt() * -1.7).abs() < 1e-12);
        assert!((v2.re + 8.0 * a.sqrt() * 0.9).abs() < 1e-12);
    }

    #[test]
    fn fourier_bracket_matches_closed_form() {
        let e = DiffExpr::fourier(rat(0, 1), rat(2, 1)).unwrap();
        let s = exact_to_cmat(&boundary_matrix_exact(&e).unwrap());
        let mut closed = CMat::zeros(4, 4);
        closed[(0, 1)] = Complex64::new(1.0, 0.0);
        closed[(1, 0)] = Complex64::new(-1.0, 0.0);
        closed[(2, 3)] = Complex64::new(-1.0, 0.0);
        closed[(3, 2)] = Complex64::new(1.0, 0.0);
        assert!((s - closed).norm() < 1e-12);
    }

    #[test]
    fn sixth_order_is_unsupported() {
        let e = DiffExpr::general_even_order(vec![q(&[0]), q(&[1]), q(&[1]), q(&[1])], rat(0, 1), rat(1, 1)).unwrap();
        assert!(matches!(boundary_form(&e), Err(GknError::Unsupported(_))));
        assert!(DiffExpr::general_even_order(vec![q(&[1]), q(&[])], rat(0, 1), rat(1, 1)).is_err());
        assert!(DiffExpr::legendre_type(rat(0, 1)).is_err());
        assert!(DiffExpr::fourier(rat(1, 1), rat(1, 1)).is_err());
    }

    #[test]
    fn deficiency_indices_and_solutions() {
        let fo = DiffExpr::first_order();
        let fr = DiffExpr::fourier(rat(0, 1), rat(1, 1)).unwrap();
        let lt = DiffExpr::legendre_type(rat(1, 1)).unwrap();
        assert_eq!(fo.deficiency_index(), 1);
        assert_eq!(fr.deficiency_index(), 2);
        assert_eq!(lt.deficiency_index(), 2);
        let plus = deficiency_solutions(&fo, Sign::Plus).unwrap();
        assert_eq!(plus.len(), 1);
        assert!((plus[0].mu - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((plus[0].trace.values()[1] - Complex64::new(1.0f64.exp(), 0.0)).norm() < 1e-14);
        for sign in [Sign::Plus, Sign::Minus] {
            let sols = deficiency_solutions(&fr, sign).unwrap();
            assert_eq!(sols.len(), fr.deficiency_index());
            for s in sols {
                assert!((-(s.mu * s.mu) - sign.lambda()).norm() < 1e-14);
            }
        }
        assert!(deficiency_solutions(&lt, Sign::Plus).is_err());
    }

    #[test]
    fn patch_realizations() {
        let lt = DiffExpr::legendre_type(rat(4, 1)).unwrap();
        let zero = patch_realization(&lt, &TraceVector::zeros(&lt), 31).unwrap();
        assert!(zero.values.iter().all(|v| v.norm() == 0.0));

        let t1 = TraceVector::from_real(&lt, &[2.0, 0.0, 0.0, 0.0]).unwrap();
        let p = patch_realization(&lt, &t1, 61).unwrap();
        assert!((p.eval(-1.0).re - 2.0).abs() < 1e-14);
        assert!((p.eval(-0.9).re - 2.0).abs() < 1e-14);
        assert!(p.eval(0.9).norm() < 1e-14);
        for &u in &[-0.3, 0.0, 0.3] {
            assert_eq!(p.eval(u).norm(), 0.0);
        }

        // x₁(u) = √A (u - 1) near 1
        let x1 = TraceVector::from_real(&lt, &[0.0, 0.0, 0.0, 2.0]).unwrap();
        let p = patch_realization(&lt, &x1, 61).unwrap();
        assert!((p.eval(0.95).re - 2.0 * (0.95 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn patch_is_c2_across_ramp_junctions() {
        let f = DiffExpr::fourier(rat(0, 1), rat(3, 1)).unwrap();
        let t = TraceVector::from_real(&f, &[1.0, -2.0, 0.5, 3.0]).unwrap();
        let p = patch_realization(&f, &t, 11).unwrap();
        for &junction in &[0.5, 1.0, 2.0, 2.5] {
            for k in 0..=2 {
                let lo = p.derivative(junction - 1e-12, k);
                let hi = p.derivative(junction + 1e-12, k);
                assert!((lo - hi).norm() < 1e-8, "k = {k} at {junction}");
            }
        }
    }

    #[test]
    fn trace_names_use_endpoint_labels() {
        let lt = DiffExpr::legendre_type(rat(1, 1)).unwrap();
        assert_eq!(lt.trace_names(), vec!["x(\u{2212}1)", "x\u{2032}(\u{2212}1)", "x(1)", "x\u{2032}(1)"]);
        assert_eq!(DiffExpr::first_order().trace_names(), vec!["x(0)", "x(1)"]);
    }
}
