#![allow(dead_code)]

use gkn_extend::boundary::TraceVector;
use gkn_extend::catalog::{build_example, ExampleId, ExampleModel, ExampleParams};
use gkn_extend::extension::{ExtendedModel, ExtendedVector};
use gkn_extend::linalg::{nullspace, rank, CMat, CVec};
use gkn_extend::symplectic::{
    form_eval, is_complete_lagrangian, is_lagrangian, quotient_by, quotient_with_basis, radical, SkewForm, Subspace,
};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    random_mat(rng, n, n).qr().q()
}

/// `-i A* D A` with `D = diag(1 × p, −1 × (m − p))`: skew-Hermitian, and
/// when `A` is invertible `iS` has exactly `p` positive eigenvalues.
pub fn skew_with_signature(rng: &mut ChaCha8Rng, m: usize, p: usize) -> CMat {
    let a = random_mat(rng, m, m);
    let d = CMat::from_fn(m, m, |i, j| match (i == j, i < p) {
        (false, _) => Complex64::new(0.0, 0.0),
        (true, true) => Complex64::new(1.0, 0.0),
        (true, false) => Complex64::new(-1.0, 0.0),
    });
    let s = -(a.adjoint() * d * &a) * I;
    // Exactly skew-Hermitian despite rounding.
    (&s - s.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Positive and negative eigenspaces of `iS`, scaled so `iS` restricts to `±I`.
fn signature_bases(s: &CMat) -> (CMat, CMat) {
    let h = s * I;
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let pick = |positive: bool| {
        let cols: Vec<CVec> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &e)| if positive { e > 1e-10 * scale } else { e < -1e-10 * scale })
            .map(|(j, &e)| eig.eigenvectors.column(j) / Complex64::new(e.abs().sqrt(), 0.0))
            .collect();
        if cols.is_empty() {
            CMat::zeros(s.nrows(), 0)
        } else {
            CMat::from_columns(&cols)
        }
    };
    (pick(true), pick(false))
}

/// A random Lagrangian of dimension `min(p, q)`: the graph `P + N U` of a
/// random isometry between the signature halves of `iS`. It is complete
/// exactly when `p = q`.
pub fn random_lagrangian(rng: &mut ChaCha8Rng, s: &CMat) -> CMat {
    let (pos, neg) = signature_bases(s);
    let d = pos.ncols().min(neg.ncols());
    let m = s.nrows();
    if d == 0 {
        return CMat::zeros(m, 0);
    }
    let u = random_unitary(rng, pos.ncols().max(neg.ncols()));
    if pos.ncols() <= neg.ncols() {
        &pos + &neg * u.view((0, 0), (neg.ncols(), d))
    } else {
        &pos * u.view((0, 0), (pos.ncols(), d)) + &neg
    }
}

pub fn arb_skew(max_dim: usize) -> impl Strategy<Value = CMat> {
    (1..=max_dim).prop_flat_map(|m| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), m * m).prop_map(move |xs| {
            let raw = CMat::from_iterator(m, m, xs.into_iter().map(|(a, b)| Complex64::new(a, b)));
            (&raw - raw.adjoint()) * Complex64::new(0.5, 0.0)
        })
    })
}

/// Form value antisymmetry for a random vector pair.
pub fn antisymmetry(s: &CMat, seed: u64) -> Result<(), String> {
    let f = SkewForm::new(s.clone()).map_err(|e| e.to_string())?;
    let mut r = rng(seed);
    let (x, y) = (random_vec(&mut r, f.dim()), random_vec(&mut r, f.dim()));
    let a = form_eval(&f, &x, &y).map_err(|e| e.to_string())?;
    let b = form_eval(&f, &y, &x).map_err(|e| e.to_string())?;
    let err = (a + b.conj()).norm();
    if err <= 1e-12 * (1.0 + a.norm()) {
        Ok(())
    } else {
        Err(format!("[x,y] + conj[y,x] = {err:e}"))
    }
}

/// `dim radical + rank S = m`, with `kill` rows and columns zeroed so the
/// radical is nontrivial, and the quotient by the radical nondegenerate.
pub fn radical_rank(s: &CMat, kill: usize) -> Result<(), String> {
    let mut s = s.clone();
    for k in 0..kill.min(s.nrows()) {
        s.row_mut(k).fill(Complex64::new(0.0, 0.0));
        s.column_mut(k).fill(Complex64::new(0.0, 0.0));
    }
    let f = SkewForm::new(s).map_err(|e| e.to_string())?;
    let rad = radical(&f);
    if rad.dim() + rank(f.matrix()) != f.dim() {
        return Err(format!("dim radical {} + rank {} != {}", rad.dim(), rank(f.matrix()), f.dim()));
    }
    let q = quotient_by(&f, &rad).map_err(|e| e.to_string())?;
    if !q.is_nondegenerate() {
        return Err("quotient by the radical is degenerate".into());
    }
    Ok(())
}

/// Complete Lagrangians of a nondegenerate form on `C^m` have dimension
/// `m/2`; every complete Lagrangian is Lagrangian; the random graph
/// construction is complete exactly for balanced signature.
pub fn complete_lagrangian_dimension(m: usize, p: usize, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let s = skew_with_signature(&mut r, m, p);
    let f = SkewForm::new(s.clone()).map_err(|e| e.to_string())?;
    if !f.is_nondegenerate() {
        // A nearly singular draw; nothing to check.
        return Ok(());
    }
    let mut candidates = vec![random_lagrangian(&mut r, &s)];
    for dim in 0..=m {
        candidates.push(random_mat(&mut r, m, dim));
    }
    for basis in candidates {
        let l = Subspace::column_span(&basis);
        let complete = is_complete_lagrangian(&f, &l).map_err(|e| e.to_string())?;
        if complete && 2 * l.dim() != m {
            return Err(format!("complete Lagrangian of dimension {} in dimension {m}", l.dim()));
        }
        if complete && !is_lagrangian(&f, &l) {
            return Err("complete but not Lagrangian".into());
        }
    }
    let graph = Subspace::column_span(&random_lagrangian(&mut r, &s));
    let complete = is_complete_lagrangian(&f, &graph).map_err(|e| e.to_string())?;
    if graph.dim() > 0 && !is_lagrangian(&f, &graph) {
        return Err("graph construction is not Lagrangian".into());
    }
    if complete != (2 * p == m) {
        return Err(format!("graph of signature ({p}, {}) has completeness {complete}", m - p));
    }
    Ok(())
}

pub fn example(id: ExampleId) -> ExampleModel {
    build_example(id, &ExampleParams::default()).expect("catalog example builds")
}

/// Splits stacked `(trace, W)` columns into extended vectors.
pub fn unstack(model: &ExtendedModel, basis: &CMat) -> Vec<ExtendedVector> {
    let n = model.trace_dim();
    basis
        .column_iter()
        .map(|col| {
            let trace = TraceVector::new(model.expr(), col.rows(0, n).iter().copied().collect()).unwrap();
            ExtendedVector::new(trace, col.rows(n, model.k()).into_owned())
        })
        .collect()
}

/// A random GKN set: a complete Lagrangian of the quotient by the minimal
/// part, lifted back into the extended trace space.
pub fn random_gkn_set(model: &ExtendedModel, seed: u64) -> Vec<ExtendedVector> {
    let (q, basis) = quotient_with_basis(model.f_ext(), model.m_min()).unwrap();
    let mut r = rng(seed);
    let l = random_lagrangian(&mut r, q.matrix());
    // Mixing in minimal-part directions must not matter.
    let mix = model.m_min().basis() * random_mat(&mut r, model.m_min().dim(), l.ncols());
    unstack(model, &(basis * l + mix))
}

/// Largest `|F_ext(u, v)|` over random pairs from `nullspace(C)`, relative to the pair's size.
pub fn domain_symmetry(model: &ExtendedModel, c: &CMat, trials: usize, seed: u64) -> f64 {
    let domain = nullspace(c);
    let mut r = rng(seed);
    let s = model.f_ext().matrix();
    (0..trials)
        .map(|_| {
            let u = &domain * random_vec(&mut r, domain.ncols());
            let v = &domain * random_vec(&mut r, domain.ncols());
            (v.adjoint() * s * &u)[(0, 0)].norm() / (u.norm() * v.norm())
        })
        .fold(0.0, f64::max)
}

pub const HONEST: [ExampleId; 7] = [
    ExampleId::LegendreType,
    ExampleId::FirstOrder,
    ExampleId::Fourier31,
    ExampleId::Fourier32a,
    ExampleId::Fourier33,
    ExampleId::Fourier34,
    ExampleId::Fourier35,
];

pub fn grid_for(model: &ExtendedModel, n: usize) -> gkn_extend::spectral::CollocationGrid {
    let (a, b) = model.expr().interval_f64();
    gkn_extend::spectral::CollocationGrid::new(n, a, b, model.expr().order()).unwrap()
}

pub fn discretize(
    model: &ExtendedModel,
    bc: &gkn_extend::extension::BoundaryConditions,
    n: usize,
) -> gkn_extend::spectral::DiscreteExtendedOperator {
    gkn_extend::spectral::assemble(model, bc, &grid_for(model, n)).unwrap()
}

/// Spectral eigenvalues next to the nearest shooting roots.
pub struct OracleComparison {
    pub spectral: Vec<Complex64>,
    pub roots: Vec<f64>,
    pub worst_rel: f64,
    pub symmetry_defect: f64,
    pub max_imag: f64,
}

/// Relative error is measured against `max(1, |λ|)` so that eigenvalues at
/// zero are compared absolutely.
pub fn compare_with_oracle(ex: &ExampleModel, n: usize, count: usize, seed: u64) -> OracleComparison {
    let bc = ex.conditions().unwrap();
    let op = discretize(&ex.model, &bc, n);
    let sp = gkn_extend::spectral::spectrum(&op, count, seed).unwrap();
    let lo = sp.eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) - 1.0;
    let hi = sp.eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let roots = gkn_extend::spectral::shooting_oracle(&ex.model, &bc, lo, hi, 0.05).unwrap();
    let worst_rel = sp
        .eigenvalues
        .iter()
        .map(|z| roots.iter().map(|r| (z.re - r).abs() / z.re.abs().max(1.0)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    OracleComparison {
        spectral: sp.eigenvalues.clone(),
        roots,
        worst_rel,
        symmetry_defect: sp.symmetry_defect,
        max_imag: sp.max_imag,
    }
}
