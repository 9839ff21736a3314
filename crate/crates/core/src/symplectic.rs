//! Finite-dimensional complex symplectic linear algebra.
//!
//! A [`SkewForm`] is a sesquilinear skew-Hermitian form on ℂᵐ with the
//! convention `form(x, y) = y* S x`: linear in the first slot, conjugate
//! linear in the second, and `form(x, y) = -conj(form(y, x))`. Boundary
//! spaces of differential operators are modelled by such forms acting on
//! endpoint trace vectors.

use crate::error::{GknError, Result};
use crate::linalg::{self, CMat, CVec, RANK_TOL};
use num_complex::Complex64;

/// Tolerance on `‖S + S*‖_max` relative to `1 + ‖S‖_max`.
pub const SKEW_TOL: f64 = 1e-12;
/// Tolerance for "the form vanishes" tests, relative to basis norms.
pub const ISOTROPY_TOL: f64 = 1e-10;
/// Tolerance for the `M ⊆ radical(F)` precondition of [`quotient_by`].
pub const RADICAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SkewForm {
    s: CMat,
    nondegenerate: bool,
}

impl SkewForm {
    /// Wraps a skew-Hermitian matrix. The nondegeneracy flag is computed,
    /// never taken on trust.
    pub fn new(s: CMat) -> Result<Self> {
        if s.nrows() != s.ncols() {
            return Err(GknError::DimensionMismatch { expected: s.nrows(), got: s.ncols() });
        }
        let defect = linalg::max_abs(&(&s + s.adjoint()));
        let scale = 1.0 + linalg::max_abs(&s);
        if defect > SKEW_TOL * scale {
            return Err(GknError::Precondition(format!(
                "matrix is not skew-Hermitian: ‖S + S*‖_max = {defect:.3e}"
            )));
        }
        let nondegenerate = s.nrows() == 0 || linalg::rank(&s) == s.nrows();
        Ok(SkewForm { s, nondegenerate })
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.s
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    fn scale(&self) -> f64 {
        linalg::norm2(&self.s).max(1.0)
    }
}

/// A linear subspace of ℂᵐ stored through an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: CMat,
}

impl Subspace {
    /// Subspace spanned by the columns of `basis`, which must have full
    /// column rank.
    pub fn new(basis: CMat) -> Result<Self> {
        let r = linalg::rank(&basis);
        if r != basis.ncols() {
            return Err(GknError::Precondition(format!(
                "basis has rank {r} but {} columns",
                basis.ncols()
            )));
        }
        Ok(Subspace { ambient_dim: basis.nrows(), basis: linalg::range(&basis) })
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: &[CVec]) -> Self {
        let m = linalg::columns(ambient_dim, vectors);
        Subspace { ambient_dim, basis: linalg::range(&m) }
    }

    /// Span of the columns of `m`, dropping dependent directions.
    pub fn column_span(m: &CMat) -> Self {
        Subspace { ambient_dim: m.nrows(), basis: linalg::range(m) }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: CMat::zeros(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: CMat::identity(ambient_dim, ambient_dim) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthonormal basis as columns.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn contains(&self, v: &CVec) -> bool {
        let scale = v.norm().max(f64::MIN_POSITIVE);
        let m = CMat::from_column_slice(v.len(), 1, v.as_slice());
        linalg::projection_residual(&m, &self.basis) <= RANK_TOL * scale.max(1.0)
    }

    /// `self ⊆ other`, measured by projection residual.
    pub fn is_within(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && linalg::projection_residual(&self.basis, &other.basis) <= RANK_TOL
    }

    /// Mutual containment.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_within(other) && other.is_within(self)
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn orthogonal_complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient_dim);
        }
        Subspace { ambient_dim: self.ambient_dim, basis: linalg::nullspace(&self.basis.adjoint()) }
    }
}

/// `y* S x`.
pub fn form_eval(f: &SkewForm, x: &CVec, y: &CVec) -> Result<Complex64> {
    let m = f.dim();
    for v in [x, y] {
        if v.len() != m {
            return Err(GknError::DimensionMismatch { expected: m, got: v.len() });
        }
    }
    Ok((y.adjoint() * (f.matrix() * x))[(0, 0)])
}

/// Orthonormal basis of the nullspace of `S`.
pub fn radical(f: &SkewForm) -> Subspace {
    Subspace { ambient_dim: f.dim(), basis: linalg::nullspace(f.matrix()) }
}

/// The form induced on ℂᵐ / M, written in an orthonormal basis of M^⊥.
///
/// Requires `M ⊆ radical(F)`; otherwise the induced form would depend on
/// the choice of representatives.
pub fn quotient_by(f: &SkewForm, m: &Subspace) -> Result<SkewForm> {
    quotient_with_basis(f, m).map(|(form, _)| form)
}

/// As [`quotient_by`], also returning the orthonormal basis of M^⊥ in which
/// the quotient form is written.
pub fn quotient_with_basis(f: &SkewForm, m: &Subspace) -> Result<(SkewForm, CMat)> {
    if m.ambient_dim() != f.dim() {
        return Err(GknError::DimensionMismatch { expected: f.dim(), got: m.ambient_dim() });
    }
    let image = f.matrix() * m.basis();
    let tol = RADICAL_TOL * (1.0 + linalg::max_abs(f.matrix()));
    for j in 0..image.ncols() {
        for i in 0..image.nrows() {
            let v = image[(i, j)].norm();
            if v > tol {
                return Err(GknError::Precondition(format!(
                    "subspace is not inside the radical: form(m_{j}, e_{i}) has magnitude {v:.3e}"
                )));
            }
        }
    }
    let q = m.orthogonal_complement();
    let form = SkewForm::new(q.basis().adjoint() * f.matrix() * q.basis())?;
    Ok((form, q.basis().clone()))
}

/// Whether all pairwise form values on a basis of `L` vanish.
pub fn is_lagrangian(f: &SkewForm, l: &Subspace) -> bool {
    if l.ambient_dim() != f.dim() {
        return false;
    }
    isotropic_columns(f, l.basis())
}

fn isotropic_columns(f: &SkewForm, v: &CMat) -> bool {
    let gram = v.adjoint() * f.matrix() * v;
    let scale = f.scale();
    (0..v.ncols()).all(|i| {
        (0..v.ncols()).all(|j| {
            let bound = ISOTROPY_TOL * scale * v.column(i).norm() * v.column(j).norm();
            gram[(j, i)].norm() <= bound
        })
    })
}

/// `{x : form(x, l) = 0 for all l ∈ L}`.
pub fn symplectic_complement(f: &SkewForm, l: &Subspace) -> Subspace {
    if l.dim() == 0 {
        return Subspace::full(f.dim());
    }
    let constraints = l.basis().adjoint() * f.matrix();
    Subspace { ambient_dim: f.dim(), basis: linalg::nullspace(&constraints) }
}

/// `L` is Lagrangian and equals its own symplectic complement.
pub fn is_complete_lagrangian(f: &SkewForm, l: &Subspace) -> Result<bool> {
    if !f.is_nondegenerate() {
        return Err(GknError::Precondition(
            "complete-Lagrangian test needs a nondegenerate form; quotient by the radical first".into(),
        ));
    }
    if !is_lagrangian(f, l) {
        return Ok(false);
    }
    Ok(symplectic_complement(f, l).same_as(l))
}

/// Outcome of [`check_gkn_vectors`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GknVectorCheck {
    pub independent_mod_m: bool,
    pub symmetric: bool,
}

/// Tests independence of `V` modulo `M` and pairwise vanishing of the form.
pub fn check_gkn_vectors(f: &SkewForm, m: &Subspace, v: &[CVec]) -> Result<GknVectorCheck> {
    for x in v {
        if x.len() != f.dim() {
            return Err(GknError::DimensionMismatch { expected: f.dim(), got: x.len() });
        }
    }
    let vm = linalg::columns(f.dim(), v);
    let joint = linalg::hstack(&[m.basis(), &vm]);
    let independent_mod_m = linalg::rank(&joint) == m.dim() + v.len();
    Ok(GknVectorCheck { independent_mod_m, symmetric: isotropic_columns(f, &vm) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, I};
    use proptest::prelude::*;

    fn first_order() -> SkewForm {
        SkewForm::new(CMat::from_diagonal(&CVec::from_vec(vec![-I, I]))).unwrap()
    }

    fn fourier() -> SkewForm {
        let mut s = CMat::zeros(4, 4);
        s[(0, 1)] = c(1.0);
        s[(1, 0)] = c(-1.0);
        s[(2, 3)] = c(-1.0);
        s[(3, 2)] = c(1.0);
        SkewForm::new(s).unwrap()
    }

    fn v(xs: &[Complex64]) -> CVec {
        CVec::from_column_slice(xs)
    }

    #[test]
    fn form_eval_examples() {
        let f = first_order();
        let zero = v(&[c(0.0), c(0.0)]);
        let y = v(&[c(3.0), I]);
        assert_eq!(form_eval(&f, &zero, &y).unwrap(), c(0.0));
        let ones = v(&[c(1.0), c(1.0)]);
        assert!(form_eval(&f, &ones, &ones).unwrap().norm() < 1e-15);
        let e0 = v(&[c(1.0), c(0.0)]);
        let e1 = v(&[c(0.0), c(1.0)]);
        assert_eq!(form_eval(&f, &e0, &e1).unwrap(), c(0.0));
    }

    #[test]
    fn form_eval_rejects_wrong_length() {
        let f = first_order();
        let x = v(&[c(1.0)]);
        assert!(matches!(form_eval(&f, &x, &x), Err(GknError::DimensionMismatch { .. })));
    }

    #[test]
    fn non_skew_matrix_is_rejected() {
        assert!(SkewForm::new(CMat::identity(2, 2)).is_err());
    }

    #[test]
    fn radical_extremes() {
        assert_eq!(radical(&fourier()).dim(), 0);
        let zero = SkewForm::new(CMat::zeros(3, 3)).unwrap();
        assert_eq!(radical(&zero).dim(), 3);
        assert!(!zero.is_nondegenerate());
    }

    #[test]
    fn quotient_examples() {
        let f = fourier();
        let q = quotient_by(&f, &Subspace::zero(4)).unwrap();
        assert_eq!(q.dim(), 4);
        assert!(q.is_nondegenerate());
        let ref_sv = linalg::singular_values(f.matrix());
        let q_sv = linalg::singular_values(q.matrix());
        for (a, b) in ref_sv.iter().zip(&q_sv) {
            assert!((a - b).abs() < 1e-12);
        }

        let zero = SkewForm::new(CMat::zeros(2, 2)).unwrap();
        let q0 = quotient_by(&zero, &Subspace::full(2)).unwrap();
        assert_eq!(q0.dim(), 0);
    }

    #[test]
    fn quotient_rejects_non_radical_subspace() {
        let f = fourier();
        let m = Subspace::span(4, &[v(&[c(1.0), c(0.0), c(0.0), c(0.0)])]);
        let err = quotient_by(&f, &m).unwrap_err();
        assert!(err.to_string().contains("m_0"));
    }

    #[test]
    fn lagrangian_examples() {
        let f = first_order();
        assert!(is_lagrangian(&f, &Subspace::zero(2)));
        let diag = Subspace::span(2, &[v(&[c(1.0), c(1.0)])]);
        assert!(is_lagrangian(&f, &diag));
        assert!(is_complete_lagrangian(&f, &diag).unwrap());
        assert!(!is_complete_lagrangian(&f, &Subspace::zero(2)).unwrap());
        let e0 = Subspace::span(4, &[v(&[c(1.0), c(0.0), c(0.0), c(0.0)])]);
        assert!(is_lagrangian(&fourier(), &e0));
    }

    #[test]
    fn complement_dimensions() {
        let f = fourier();
        assert_eq!(symplectic_complement(&f, &Subspace::zero(4)).dim(), 4);
        let e0 = Subspace::span(4, &[v(&[c(1.0), c(0.0), c(0.0), c(0.0)])]);
        assert_eq!(symplectic_complement(&f, &e0).dim(), 3);
        // Dirichlet data: x(a) = x(b) = 0 directions.
        let l = Subspace::span(
            4,
            &[v(&[c(0.0), c(1.0), c(0.0), c(0.0)]), v(&[c(0.0), c(0.0), c(0.0), c(1.0)])],
        );
        assert!(symplectic_complement(&f, &l).same_as(&l));
    }

    #[test]
    fn complete_lagrangian_needs_nondegenerate_form() {
        let zero = SkewForm::new(CMat::zeros(2, 2)).unwrap();
        assert!(is_complete_lagrangian(&zero, &Subspace::zero(2)).is_err());
    }

    #[test]
    fn gkn_vector_checks() {
        let f = fourier();
        let t1 = v(&[c(0.0), c(0.0), c(1.0), c(0.0)]);
        let t1x2 = &t1 * c(2.0);
        let r = check_gkn_vectors(&f, &Subspace::zero(4), &[t1.clone(), t1x2]).unwrap();
        assert!(!r.independent_mod_m);
        let x = v(&[c(0.0), c(0.0), c(0.0), c(1.0)]);
        let r = check_gkn_vectors(&f, &Subspace::zero(4), &[t1, x]).unwrap();
        assert!(r.independent_mod_m);
        assert!(!r.symmetric);
    }

    fn arb_skew(max_dim: usize) -> impl Strategy<Value = CMat> {
        (1..=max_dim).prop_flat_map(|m| {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), m * m).prop_map(move |xs| {
                let raw = CMat::from_iterator(m, m, xs.into_iter().map(|(a, b)| Complex64::new(a, b)));
                (&raw - raw.adjoint()) * c(0.5)
            })
        })
    }

    proptest! {
        #[test]
        fn antisymmetry_law(s in arb_skew(6), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let f = SkewForm::new(s).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = f.dim();
            let x = CVec::from_fn(m, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let y = CVec::from_fn(m, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let a = form_eval(&f, &x, &y).unwrap();
            let b = form_eval(&f, &y, &x).unwrap();
            prop_assert!((a + b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn quotient_by_radical_is_nondegenerate(s in arb_skew(6), kill in 0usize..3) {
            // Force a nontrivial radical by zeroing rows/columns.
            let mut s = s;
            for k in 0..kill.min(s.nrows()) {
                s.row_mut(k).fill(c(0.0));
                s.column_mut(k).fill(c(0.0));
            }
            let f = SkewForm::new(s).unwrap();
            let rad = radical(&f);
            prop_assert_eq!(rad.dim() + linalg::rank(f.matrix()), f.dim());
            let q = quotient_by(&f, &rad).unwrap();
            prop_assert!(q.is_nondegenerate());
        }
    }
}
