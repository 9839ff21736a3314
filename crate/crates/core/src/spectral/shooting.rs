//! Independent eigenvalue oracle: shoot basis solutions across the
//! interval and locate zeros of the boundary determinant.

use crate::boundary::ExprKind;
use crate::error::{GknError, Result};
use crate::extension::{BoundaryConditions, ExtendedModel};
use crate::linalg::CMat;
use num_complex::Complex64;

pub const RK_TOL: f64 = 1e-11;
pub const BISECT_TOL: f64 = 1e-10;

/// Dormand–Prince 5(4) with standard step control; integrates `y′ = f(u, y)`
/// from `a` to `b`.
pub fn dopri45<F>(f: F, a: f64, b: f64, y0: &[Complex64], tol: f64) -> Result<Vec<Complex64>>
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
{
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let m = y0.len();
    let mut y = y0.to_vec();
    let mut u = a;
    let span = b - a;
    let mut h = span * 1e-3;
    let mut steps = 0usize;
    while u < b {
        if steps > 2_000_000 {
            return Err(GknError::Inconsistent("adaptive integration exceeded its step budget".into()));
        }
        steps += 1;
        if u + h > b {
            h = b - u;
        }
        let mut k: Vec<Vec<Complex64>> = Vec::with_capacity(7);
        for s in 0..7 {
            let ys: Vec<Complex64> =
                (0..m).map(|i| y[i] + (0..s).map(|j| k[j][i] * (A[s][j] * h)).sum::<Complex64>()).collect();
            k.push(f(u + C[s] * h, &ys));
        }
        let y5: Vec<Complex64> = (0..m).map(|i| y[i] + (0..7).map(|s| k[s][i] * (B5[s] * h)).sum::<Complex64>()).collect();
        let err = (0..m)
            .map(|i| {
                let e: Complex64 = (0..7).map(|s| k[s][i] * ((B5[s] - B4[s]) * h)).sum();
                e.norm() / (tol + tol * y[i].norm().max(y5[i].norm()))
            })
            .fold(0.0, f64::max);
        if err <= 1.0 {
            u += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < span * 1e-14 {
            return Err(GknError::Inconsistent("adaptive step size underflow".into()));
        }
    }
    Ok(y)
}

/// `det K(λ)` where `K` couples the boundary rows of `bc` with the `W`
/// eigen-equation `(B − λ) z − Ω(tr x) = 0` over the span of basis solutions.
pub fn characteristic(model: &ExtendedModel, bc: &BoundaryConditions, lambda: f64) -> Result<Complex64> {
    let expr = model.expr();
    let (a, b) = expr.interval_f64();
    let lam = Complex64::new(lambda, 0.0);
    // Columns: traces of the basis solutions, and the phase that makes det real.
    let (traces, phase): (Vec<Vec<Complex64>>, Complex64) = match expr.kind() {
        ExprKind::FirstOrderI => {
            // i x′ = λ x  ⇒  x = e^{-iλ(u - a)}
            let end = Complex64::new(0.0, -lambda * (b - a)).exp();
            (vec![vec![Complex64::new(1.0, 0.0), end]], Complex64::new(0.0, lambda * (b - a) / 2.0).exp())
        }
        _ if expr.order() == 2 => {
            let c = expr.expanded_coefficients();
            let rhs = |u: f64, y: &[Complex64]| {
                let uc = Complex64::new(u, 0.0);
                let x2 = (lam * y[0] - c[1].eval(&uc) * y[1] - c[0].eval(&uc) * y[0]) / c[2].eval(&uc);
                vec![y[1], x2]
            };
            let one = Complex64::new(1.0, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            let mut cols = Vec::new();
            for init in [[one, zero], [zero, one]] {
                let end = dopri45(rhs, a, b, &init, RK_TOL)?;
                cols.push(vec![init[0], init[1], end[0], end[1]]);
            }
            (cols, one)
        }
        _ => return Err(GknError::Unsupported("the shooting oracle handles first- and second-order expressions".into())),
    };
    let nb = traces.len();
    let k = model.k();
    let d2 = model.trace_dim();
    let r = bc.canonical.nrows();
    if r + k != nb + k {
        return Err(GknError::Precondition(format!("{r} boundary rows for {nb} basis solutions")));
    }
    let phi = CMat::from_fn(d2, nb, |i, j| traces[j][i]);
    let cx = bc.canonical.columns(0, d2).into_owned();
    let cw = bc.canonical.columns(d2, k).into_owned();
    let mut kmat = CMat::zeros(nb + k, nb + k);
    kmat.view_mut((0, 0), (r, nb)).copy_from(&(&cx * &phi));
    if k > 0 {
        kmat.view_mut((0, nb), (r, k)).copy_from(&cw);
        kmat.view_mut((r, 0), (k, nb)).copy_from(&(-(model.omega_matrix() * &phi)));
        kmat.view_mut((r, nb), (k, k)).copy_from(&(model.b().matrix() - CMat::identity(k, k) * lam));
    }
    Ok(kmat.determinant() * phase)
}

/// Real eigenvalues in `[lo, hi]`: scan with `step`, bisect sign changes
/// to [`BISECT_TOL`].
pub fn shooting_oracle(model: &ExtendedModel, bc: &BoundaryConditions, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo < hi && step > 0.0) {
        return Err(GknError::Precondition("empty scan window".into()));
    }
    let count = ((hi - lo) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=count).map(|i| (lo + i as f64 * step).min(hi)).collect();
    let raw: Vec<Complex64> = grid.iter().map(|&l| characteristic(model, bc, l)).collect::<Result<_>>()?;
    // Remove the constant phase left by complex coefficients.
    let peak = raw.iter().copied().max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap()).unwrap_or_default();
    if peak.norm() == 0.0 {
        return Err(GknError::Inconsistent("characteristic function vanishes identically".into()));
    }
    let rot = peak.conj() / peak.norm();
    let imag = raw.iter().map(|z| (z * rot).im.abs()).fold(0.0, f64::max);
    if imag > 1e-6 * peak.norm() {
        return Err(GknError::Inconsistent(format!(
            "characteristic function is not real up to a constant phase (relative imaginary part {:.3e})",
            imag / peak.norm()
        )));
    }
    let g = |l: f64| -> Result<f64> { Ok((characteristic(model, bc, l)? * rot).re) };
    let vals: Vec<f64> = raw.iter().map(|z| (z * rot).re).collect();
    let floor = 1e-13 * peak.norm();
    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if vals[i].abs() <= floor {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() && vals[i + 1].abs() > floor && vals[i].signum() != vals[i + 1].signum() {
            let (mut x0, mut x1, mut f0) = (grid[i], grid[i + 1], vals[i]);
            while x1 - x0 > BISECT_TOL {
                let mid = 0.5 * (x0 + x1);
                let fm = g(mid)?;
                if fm == 0.0 {
                    x0 = mid;
                    x1 = mid;
                    break;
                }
                if fm.signum() == f0.signum() {
                    x0 = mid;
                    f0 = fm;
                } else {
                    x1 = mid;
                }
            }
            roots.push(0.5 * (x0 + x1));
        }
    }
    Ok(roots)
}
