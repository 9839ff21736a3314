//! Collocation discretization of the extended maximal operator restricted
//! by boundary conditions, and its symmetry and spectral diagnostics.

use super::grid::CollocationGrid;
use crate::error::{GknError, Result};
use crate::extension::{BoundaryConditions, ExtendedModel};
use crate::linalg::{eigenvalues, norm2, nullspace, singular_values, CMat, CVec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::io::Write;

/// The operator `(x, a) ↦ (ℓx, Ba − Ωx)` on `(samples, W)` coordinates,
/// and its compression to the subspace satisfying the boundary conditions.
#[derive(Debug, Clone)]
pub struct DiscreteExtendedOperator {
    pub samples: usize,
    pub k: usize,
    /// Trace extraction: samples to `(x(a), x′(a), …, x(b), …)`.
    pub trace_map: CMat,
    pub a_full: CMat,
    pub gram_full: CMat,
    /// Boundary rows acting on `(samples, W)`.
    pub constraints: CMat,
    /// Orthonormal basis of the discrete domain.
    pub p: CMat,
    pub a_red: CMat,
    pub gram_red: CMat,
}

fn to_complex(m: &super::grid::RMat) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

pub fn assemble(model: &ExtendedModel, bc: &BoundaryConditions, grid: &CollocationGrid) -> Result<DiscreteExtendedOperator> {
    let expr = model.expr();
    let order = expr.order();
    let n = grid.degree();
    if n < 2 * order + 4 {
        return Err(GknError::Precondition(format!(
            "grid degree {n} is below the minimum {} for an order-{order} expression",
            2 * order + 4
        )));
    }
    let (a, b) = expr.interval_f64();
    let (ga, gb) = grid.interval();
    if (ga - a).abs() > 1e-14 * (1.0 + a.abs()) || (gb - b).abs() > 1e-14 * (1.0 + b.abs()) {
        return Err(GknError::Precondition("grid interval differs from the expression interval".into()));
    }
    if bc.c.ncols() != model.ext_dim() {
        return Err(GknError::DimensionMismatch { expected: model.ext_dim(), got: bc.c.ncols() });
    }
    let ns = grid.len();
    let k = model.k();
    let d = expr.traces_per_endpoint();

    let mut l_op = CMat::zeros(ns, ns);
    for (j, cj) in expr.expanded_coefficients().iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let dj = to_complex(&grid.diff(j)?);
        for (r, &u) in grid.nodes().iter().enumerate() {
            let coef = cj.eval(&Complex64::new(u, 0.0));
            for col in 0..ns {
                l_op[(r, col)] += coef * dj[(r, col)];
            }
        }
    }

    let mut trace_map = CMat::zeros(2 * d, ns);
    for (side, idx) in [0, ns - 1].into_iter().enumerate() {
        for m in 0..d {
            let dm = grid.diff(m)?;
            for col in 0..ns {
                trace_map[(side * d + m, col)] = Complex64::new(dm[(idx, col)], 0.0);
            }
        }
    }

    let dim = ns + k;
    let mut a_full = CMat::zeros(dim, dim);
    a_full.view_mut((0, 0), (ns, ns)).copy_from(&l_op);
    if k > 0 {
        a_full.view_mut((ns, 0), (k, ns)).copy_from(&(-(model.omega_matrix() * &trace_map)));
        a_full.view_mut((ns, ns), (k, k)).copy_from(model.b().matrix());
    }
    let mut gram_full = CMat::zeros(dim, dim);
    gram_full.view_mut((0, 0), (ns, ns)).copy_from(&to_complex(grid.mass()));
    if k > 0 {
        gram_full.view_mut((ns, ns), (k, k)).copy_from(model.w().gram());
    }

    let d2 = 2 * d;
    let mut lift = CMat::zeros(d2 + k, dim);
    lift.view_mut((0, 0), (d2, ns)).copy_from(&trace_map);
    for j in 0..k {
        lift[(d2 + j, ns + j)] = Complex64::new(1.0, 0.0);
    }
    let constraints = &bc.c * lift;
    let p = nullspace(&constraints);
    let a_red = p.adjoint() * &gram_full * &a_full * &p;
    let gram_red = p.adjoint() * &gram_full * &p;
    Ok(DiscreteExtendedOperator { samples: ns, k, trace_map, a_full, gram_full, constraints, p, a_red, gram_red })
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_iterator(n, (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
}

/// `H = L⁻¹ A L⁻*` for `G = L L*`, i.e. the operator in `G`-orthonormal coordinates.
fn orthonormal_form(a: &CMat, gram: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    let herm = (gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let chol = herm.cholesky().ok_or_else(|| {
        let s = singular_values(gram);
        let cond = s.first().copied().unwrap_or(0.0) / s.last().copied().unwrap_or(0.0);
        GknError::Eigen(format!("reduced Gram matrix is not positive definite (condition estimate {cond:.3e})"))
    })?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(a)
        .ok_or_else(|| GknError::Eigen("singular Cholesky factor".into()))?;
    let y = l
        .solve_lower_triangular(&x.adjoint())
        .ok_or_else(|| GknError::Eigen("singular Cholesky factor".into()))?;
    Ok(y.adjoint())
}

impl DiscreteExtendedOperator {
    pub fn reduced_dim(&self) -> usize {
        self.p.ncols()
    }

    /// `max |c*(BC)| `: how far the domain basis is from satisfying the constraints.
    pub fn constraint_residual(&self) -> f64 {
        crate::linalg::max_abs(&(&self.constraints * &self.p))
    }

    pub fn symmetry_defect(&self, trials: usize, seed: u64) -> Result<f64> {
        reduced_symmetry_defect(&self.a_red, &self.gram_red, trials, seed)
    }

    /// `‖T̂(x, a) − λ(x, a)‖_{H⊕W}` for samples `x` on the grid.
    pub fn eigenrelation_residual(&self, x: &CVec, a: &CVec, lambda: Complex64) -> Result<f64> {
        if x.len() != self.samples || a.len() != self.k {
            return Err(GknError::DimensionMismatch { expected: self.samples + self.k, got: x.len() + a.len() });
        }
        let z = CVec::from_iterator(self.samples + self.k, x.iter().chain(a.iter()).copied());
        let r = &self.a_full * &z - &z * lambda;
        Ok((r.adjoint() * &self.gram_full * &r)[(0, 0)].re.max(0.0).sqrt())
    }
}

/// `max |⟨Au, v⟩ − ⟨u, Av⟩| / (‖u‖ ‖v‖ (1 + ‖A‖))` over seeded random pairs.
///
/// The pairs are random combinations of the domain basis vectors; norms
/// and `‖A‖` are taken in the `H ⊕ W` inner product.
pub fn reduced_symmetry_defect(a_red: &CMat, gram_red: &CMat, trials: usize, seed: u64) -> Result<f64> {
    let n = a_red.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let h = orthonormal_form(a_red, gram_red)?;
    let norm_a = singular_values(&h).first().copied().unwrap_or(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let cu = random_vec(&mut rng, n);
        let cv = random_vec(&mut rng, n);
        let au_v = (cv.adjoint() * a_red * &cu)[(0, 0)];
        let u_av = (cu.adjoint() * a_red * &cv)[(0, 0)].conj();
        let nu = (cu.adjoint() * gram_red * &cu)[(0, 0)].re.max(0.0).sqrt();
        let nv = (cv.adjoint() * gram_red * &cv)[(0, 0)].re.max(0.0).sqrt();
        worst = worst.max((au_v - u_av).norm() / (nu * nv * (1.0 + norm_a)));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// The `count` eigenvalues of smallest modulus, ordered by real part.
    pub eigenvalues: Vec<Complex64>,
    pub max_imag: f64,
    /// `‖Hv − λv‖ / (‖H‖ ‖v‖)` for an inverse-iteration eigenvector `v`,
    /// in Gram-orthonormal coordinates.
    pub residuals: Vec<f64>,
    pub symmetry_defect: f64,
    pub seed: u64,
}

pub const DEFAULT_TRIALS: usize = 32;

pub fn spectrum(op: &DiscreteExtendedOperator, count: usize, seed: u64) -> Result<SpectrumReport> {
    let n = op.reduced_dim();
    if count > n {
        return Err(GknError::Precondition(format!("requested {count} eigenvalues of a {n}-dimensional problem")));
    }
    let h = orthonormal_form(&op.a_red, &op.gram_red)?;
    let mut all = eigenvalues(&h).ok_or_else(|| GknError::Eigen("eigenvalue iteration did not converge".into()))?;
    all.sort_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap().then(x.re.partial_cmp(&y.re).unwrap()));
    let mut chosen: Vec<Complex64> = all.into_iter().take(count).collect();
    chosen.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
    let h_norm = norm2(&h).max(f64::MIN_POSITIVE);
    let residuals = chosen.iter().map(|&lam| eigen_residual(&h, lam, h_norm)).collect();
    let max_imag = chosen.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(SpectrumReport {
        eigenvalues: chosen,
        max_imag,
        residuals,
        symmetry_defect: op.symmetry_defect(DEFAULT_TRIALS, seed)?,
        seed,
    })
}

fn eigen_residual(h: &CMat, lam: Complex64, h_norm: f64) -> f64 {
    let n = h.nrows();
    // The shift keeps the factorization regular when λ is exact to working precision.
    let shift = lam + Complex64::new(1e-10 * h_norm, 0.0);
    let lu = (h - CMat::identity(n, n) * shift).lu();
    let mut v = CVec::from_fn(n, |i, _| Complex64::new(1.0, (i % 7) as f64 / 7.0));
    for _ in 0..3 {
        match lu.solve(&v) {
            Some(next) => v = next.unscale(next.norm()),
            None => break,
        }
    }
    (h * &v - &v * lam).norm() / (h_norm * v.norm())
}

impl SpectrumReport {
    /// Columns `index, re, im, residual`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "index,re,im,residual")?;
        for (i, (z, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            writeln!(out, "{i},{:e},{:e},{:e}", z.re, z.im, r)?;
        }
        Ok(())
    }
}
