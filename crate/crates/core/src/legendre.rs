//! Exact Legendre-type polynomials: the point-mass measure, Gram–Schmidt,
//! and the eigenvalue and boundary identities they satisfy.
//!
//! The measure is Lebesgue measure on `[-1, 1]` plus atoms of mass `1/A`
//! at `±1`, so `L²_μ` is isometric to `L²(-1, 1) ⊕ ℂ²` with the `W` inner
//! product `(a₁ā₂ + b₁b̄₂)/A`.

use crate::boundary::{apply_expr, boundary_matrix_exact, DiffExpr};
use crate::error::{GknError, Result};
use crate::poly::{rat, Poly, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub const MAX_DEGREE: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct MuMeasure {
    a: Rational,
}

impl MuMeasure {
    pub fn new(a: Rational) -> Result<Self> {
        if !a.is_positive() {
            return Err(GknError::Precondition(format!("A must be positive, got {a}")));
        }
        Ok(MuMeasure { a })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
}

/// `f(-1)g(-1)/A + ∫₋₁¹ f g + f(1)g(1)/A`
pub fn mu_inner(p: &Poly<Rational>, q: &Poly<Rational>, mu: &MuMeasure) -> Rational {
    let (m1, p1) = (rat(-1, 1), rat(1, 1));
    let integral = (p * q).integrate(&m1, &p1);
    let atoms = (p.eval(&m1) * q.eval(&m1) + p.eval(&p1) * q.eval(&p1)) / &mu.a;
    integral + atoms
}

/// Monic orthogonal polynomials `P_0, …, P_n` for `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LTBasis {
    mu: MuMeasure,
    polys: Vec<Poly<Rational>>,
}

impl LTBasis {
    pub fn mu(&self) -> &MuMeasure {
        &self.mu
    }

    pub fn polys(&self) -> &[Poly<Rational>] {
        &self.polys
    }

    pub fn get(&self, n: usize) -> Result<&Poly<Rational>> {
        self.polys
            .get(n)
            .ok_or_else(|| GknError::Precondition(format!("degree {n} exceeds the basis size {}", self.polys.len())))
    }

    pub fn n_max(&self) -> usize {
        self.polys.len() - 1
    }

    fn expr(&self) -> DiffExpr {
        DiffExpr::legendre_type(self.mu.a.clone()).expect("A > 0 is a MuMeasure invariant")
    }

    /// Coefficients as `[numerator, denominator]` string pairs, ascending.
    pub fn export(&self) -> Vec<Vec<[String; 2]>> {
        self.polys
            .iter()
            .map(|p| p.coeffs().iter().map(|c| [c.numer().to_string(), c.denom().to_string()]).collect())
            .collect()
    }
}

pub fn gram_schmidt(mu: &MuMeasure, n_max: usize) -> Result<LTBasis> {
    if n_max > MAX_DEGREE {
        return Err(GknError::Precondition(format!("n_max = {n_max} exceeds the cap {MAX_DEGREE}")));
    }
    let mut polys: Vec<Poly<Rational>> = Vec::with_capacity(n_max + 1);
    let mut norms: Vec<Rational> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mono = Poly::monomial(n, Rational::one());
        let mut p = mono.clone();
        for (pk, nk) in polys.iter().zip(&norms) {
            let coef = mu_inner(&mono, pk, mu) / nk;
            p = &p - &pk.scale(&coef);
        }
        norms.push(mu_inner(&p, &p, mu));
        polys.push(p);
    }
    Ok(LTBasis { mu: mu.clone(), polys })
}

/// `n(n+1)(n² + n + 4A − 2)`
pub fn lambda_formula(a: &Rational, n: usize) -> Rational {
    let n = Rational::from_integer(BigInt::from(n));
    let one = Rational::one();
    &n * (&n + &one) * (&n * &n + &n + a * rat(4, 1) - rat(2, 1))
}

/// Exact `λ` with `ℓ[P_n] = λ P_n`; fails if `ℓ[P_n]` is not a multiple of `P_n`.
pub fn eigen_check(basis: &LTBasis, n: usize) -> Result<Rational> {
    let p = basis.get(n)?;
    let image = apply_expr(&basis.expr(), p)?;
    let lambda = image.coeff(n) / p.leading();
    for k in 0..=n.max(image.degree().unwrap_or(0)) {
        if image.coeff(k) != &lambda * p.coeff(k) {
            return Err(GknError::Inconsistent(format!(
                "ℓ[P_{n}] is not a multiple of P_{n}: coefficient {k} differs"
            )));
        }
    }
    Ok(lambda)
}

/// Sign pairing in `s · 8A P′(±1) = λ P(±1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignPairing {
    /// `−8A P′(−1) = λ P(−1)` and `8A P′(1) = λ P(1)`.
    PlusAtPlusOne,
    /// `8A P′(−1) = λ P(−1)` and `−8A P′(1) = λ P(1)`.
    MinusAtPlusOne,
}

impl SignPairing {
    /// The sign `s` at `u = 1`; the sign at `u = −1` is its negative.
    fn sign_at_right(self) -> Rational {
        match self {
            SignPairing::PlusAtPlusOne => rat(1, 1),
            SignPairing::MinusAtPlusOne => rat(-1, 1),
        }
    }
}

/// Exact check of the endpoint identity under `pairing`, both endpoints.
pub fn boundary_identity_check(basis: &LTBasis, n: usize, pairing: SignPairing) -> Result<bool> {
    let p = basis.get(n)?;
    let lambda = eigen_check(basis, n)?;
    let dp = p.derivative();
    let eight_a = basis.mu.a.clone() * rat(8, 1);
    let s = pairing.sign_at_right();
    let right = &s * &eight_a * dp.eval(&rat(1, 1)) == &lambda * p.eval(&rat(1, 1));
    let left = -&s * &eight_a * dp.eval(&rat(-1, 1)) == &lambda * p.eval(&rat(-1, 1));
    Ok(left && right)
}

/// The pairing that holds for `P_1`, where both sides are nonzero.
pub fn resolve_sign_pairing(basis: &LTBasis) -> Result<SignPairing> {
    for pairing in [SignPairing::PlusAtPlusOne, SignPairing::MinusAtPlusOne] {
        if boundary_identity_check(basis, 1, pairing)? {
            return Ok(pairing);
        }
    }
    Err(GknError::Inconsistent("neither sign pairing holds for P_1".into()))
}

/// Real `2 × 2` operator on `W` given exactly.
pub type ExactB = [[Rational; 2]; 2];

pub fn zero_b() -> ExactB {
    [[Rational::zero(), Rational::zero()], [Rational::zero(), Rational::zero()]]
}

pub fn identity_b() -> ExactB {
    [[Rational::one(), Rational::zero()], [Rational::zero(), Rational::one()]]
}

/// `Ω x = A ([x, e₀], [x, e₂])`: the partial GKN traces are `√A` times the
/// unit traces at `x(-1)` and `x(1)`, and `ξ_j = √A e_j`, so the square
/// roots cancel.
fn omega_exact(basis: &LTBasis, p: &Poly<Rational>) -> Result<[Rational; 2]> {
    let expr = basis.expr();
    let s = boundary_matrix_exact(&expr)?;
    let trace = crate::boundary::trace_of_poly(&expr, p);
    let row = |i: usize| -> Rational {
        s[i].iter().zip(&trace).fold(Rational::zero(), |acc, (sij, xj)| acc + sij.re.clone() * xj)
    };
    Ok([&basis.mu.a * row(0), &basis.mu.a * row(2)])
}

/// Exact `T̂(P_n, (P_n(-1), P_n(1))) = λ_n (P_n, (P_n(-1), P_n(1)))`.
pub fn extended_eigen_check(basis: &LTBasis, n: usize, b: &ExactB) -> Result<bool> {
    let p = basis.get(n)?;
    let lambda = lambda_formula(&basis.mu.a, n);
    let image = apply_expr(&basis.expr(), p)?;
    if image != p.scale(&lambda) {
        return Ok(false);
    }
    let a = [p.eval(&rat(-1, 1)), p.eval(&rat(1, 1))];
    let omega = omega_exact(basis, p)?;
    Ok((0..2).all(|i| {
        let ba = &b[i][0] * &a[0] + &b[i][1] * &a[1];
        ba - &omega[i] == &lambda * &a[i]
    }))
}

/// `⟨(P_m, a_m), (P_n, a_n)⟩_{H⊕W}` with `a = (P(-1), P(1))`.
pub fn extended_orthogonality_check(basis: &LTBasis, m: usize, n: usize) -> Result<Rational> {
    let (pm, pn) = (basis.get(m)?, basis.get(n)?);
    let h = (pm * pn).integrate(&rat(-1, 1), &rat(1, 1));
    let w = (pm.eval(&rat(-1, 1)) * pn.eval(&rat(-1, 1)) + pm.eval(&rat(1, 1)) * pn.eval(&rat(1, 1))) / &basis.mu.a;
    Ok(h + w)
}
