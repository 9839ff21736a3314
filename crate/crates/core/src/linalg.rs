//! Dense complex linear algebra helpers shared by the symplectic and
//! spectral layers. All rank decisions go through [`RANK_TOL`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative singular-value threshold for rank and nullspace decisions.
pub const RANK_TOL: f64 = 1e-8;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn to_faer(m: &CMat) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full SVD `m = U Σ V*` as `(U, σ descending, V)`.
///
/// nalgebra's bidiagonal SVD occasionally returns a wrong factorization for
/// rank-deficient input, so factorizations go through faer.
pub fn svd(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    let f = to_faer(m).svd().expect("SVD of a finite matrix");
    let s = f.S().column_vector().iter().map(|z| z.re).collect();
    (from_faer(f.U()), s, from_faer(f.V()))
}

/// Singular values of `m`, descending. Empty for degenerate shapes.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("SVD of a finite matrix")
}

/// Eigenvalues of a general square matrix, in no particular order;
/// `None` when the iteration does not converge.
pub fn eigenvalues(m: &CMat) -> Option<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Some(Vec::new());
    }
    to_faer(m).eigenvalues().ok()
}

/// Minimum-norm least-squares solution of `m x = b`, dropping singular
/// values below `rel_tol · σ_max`.
pub fn least_squares(m: &CMat, b: &CVec, rel_tol: f64) -> CVec {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CVec::zeros(m.ncols());
    }
    let (u, s, v) = svd(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let mut x = CVec::zeros(m.ncols());
    for (i, &si) in s.iter().enumerate() {
        if smax > 0.0 && si > rel_tol * smax {
            let coeff = (u.column(i).adjoint() * b)[(0, 0)] / si;
            x += v.column(i) * coeff;
        }
    }
    x
}

/// Numerical rank with relative threshold `tol`.
pub fn rank_with(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&smax) if smax > 0.0 => s.iter().filter(|&&x| x > tol * smax).count(),
        _ => 0,
    }
}

pub fn rank(m: &CMat) -> usize {
    rank_with(m, RANK_TOL)
}

/// Orthonormal basis (as columns) of the nullspace of `m`.
pub fn nullspace(m: &CMat) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let (_, s, v) = svd(m);
    let smax = s.first().copied().unwrap_or(0.0);
    // Columns of V past min(rows, cols) have no singular value and are null directions.
    let null: Vec<usize> = (0..n).filter(|&i| smax == 0.0 || s.get(i).map_or(true, |&si| si <= RANK_TOL * smax)).collect();
    CMat::from_fn(n, null.len(), |j, col| v[(j, null[col])])
}

/// Orthonormal basis of the column range of `m`.
pub fn range(m: &CMat) -> CMat {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let (u, s, _) = svd(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let keep = s.iter().take_while(|&&si| smax > 0.0 && si > RANK_TOL * smax).count();
    u.columns(0, keep).into_owned()
}

/// Max-abs entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Spectral norm (largest singular value).
pub fn norm2(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Reduced row-echelon form. Pivots are normalized to 1 and entries below
/// `tol * max|m|` are flushed to zero.
pub fn rref(m: &CMat, tol: f64) -> CMat {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let scale = max_abs(&a).max(f64::MIN_POSITIVE);
    let cutoff = tol * scale;
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let (best, best_abs) = (pivot_row..rows)
            .map(|r| (r, a[(r, col)].norm()))
            .fold((pivot_row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_abs <= cutoff {
            continue;
        }
        a.swap_rows(pivot_row, best);
        let p = a[(pivot_row, col)];
        for j in 0..cols {
            a[(pivot_row, j)] /= p;
        }
        for r in 0..rows {
            if r != pivot_row {
                let f = a[(r, col)];
                if f.norm() > 0.0 {
                    for j in 0..cols {
                        let v = a[(pivot_row, j)];
                        a[(r, j)] -= f * v;
                    }
                }
            }
        }
        pivot_row += 1;
    }
    let flush = tol.max(1e-300);
    for z in a.iter_mut() {
        if z.re.abs() <= flush {
            z.re = 0.0;
        }
        if z.im.abs() <= flush {
            z.im = 0.0;
        }
    }
    a
}

/// Residual of projecting the columns of `a` onto the range of orthonormal `q`.
pub fn projection_residual(a: &CMat, q: &CMat) -> f64 {
    if a.ncols() == 0 {
        return 0.0;
    }
    if q.ncols() == 0 {
        return a.norm();
    }
    let p = q * (q.adjoint() * a);
    (a - p).norm()
}

/// Concatenate column blocks horizontally.
pub fn hstack(blocks: &[&CMat]) -> CMat {
    let rows = blocks.iter().map(|b| b.nrows()).max().unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut offset = 0;
    for b in blocks {
        if b.ncols() > 0 {
            out.view_mut((0, offset), (b.nrows(), b.ncols())).copy_from(*b);
        }
        offset += b.ncols();
    }
    out
}

/// Matrix whose columns are the given vectors (all of length `dim`).
pub fn columns(dim: usize, vectors: &[CVec]) -> CMat {
    let mut out = CMat::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}
