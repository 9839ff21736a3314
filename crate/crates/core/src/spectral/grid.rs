//! Chebyshev–Gauss–Lobatto collocation on `[a, b]`.

use crate::error::{GknError, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

pub type RMat = DMatrix<f64>;

/// `N + 1` Chebyshev–Lobatto nodes in ascending order, with
/// differentiation matrices and quadrature.
#[derive(Debug, Clone)]
pub struct CollocationGrid {
    n: usize,
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    /// `diff[k - 1]` is `D^k`.
    diff: Vec<RMat>,
    cc_weights: Vec<f64>,
    mass: RMat,
}

impl CollocationGrid {
    /// Grid of polynomial degree `n` (so `n + 1` nodes), with derivative
    /// matrices up to order `max_order`.
    pub fn new(n: usize, a: f64, b: f64, max_order: usize) -> Result<Self> {
        if n < 2 {
            return Err(GknError::Precondition(format!("grid degree {n} is too small")));
        }
        if !(a < b) {
            return Err(GknError::Precondition(format!("empty interval [{a}, {b}]")));
        }
        let theta = |j: usize| j as f64 * PI / n as f64;
        // t_j = -cos(jπ/N) ascends from -1 to 1.
        let nodes: Vec<f64> = (0..=n).map(|j| a + (b - a) * (1.0 - theta(j).cos()) / 2.0).collect();
        let d1 = cheb_diff(n).scale(2.0 / (b - a));
        let mut diff = vec![d1.clone()];
        for _ in 1..max_order.max(1) {
            let next = diff.last().unwrap() * &d1;
            diff.push(next);
        }
        let cc_weights = clenshaw_curtis(n).iter().map(|w| w * (b - a) / 2.0).collect();
        let mass = lagrange_mass(n).scale((b - a) / 2.0);
        Ok(CollocationGrid { n, a, b, nodes, diff, cc_weights, mass })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `D^k`; `D^0` is the identity.
    pub fn diff(&self, k: usize) -> Result<RMat> {
        if k == 0 {
            return Ok(RMat::identity(self.len(), self.len()));
        }
        self.diff
            .get(k - 1)
            .cloned()
            .ok_or_else(|| GknError::Precondition(format!("derivative order {k} was not precomputed")))
    }

    pub fn cc_weights(&self) -> &[f64] {
        &self.cc_weights
    }

    /// `M_ij = ∫ ℓ_i ℓ_j` for the Lagrange basis on the nodes; exact for
    /// the interpolating polynomials, unlike the diagonal weights.
    pub fn mass(&self) -> &RMat {
        &self.mass
    }
}

/// Derivative matrix on `t_j = -cos(jπ/N)`.
fn cheb_diff(n: usize) -> RMat {
    let th = |j: usize| j as f64 * PI / n as f64;
    let c = |j: usize| if j == 0 || j == n { 2.0 } else { 1.0 };
    let mut d = RMat::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            if i == j {
                continue;
            }
            // t_i - t_j = 2 sin((i+j)π/2N) sin((i-j)π/2N), without cancellation.
            let diff = 2.0 * ((th(i) + th(j)) / 2.0).sin() * ((th(i) - th(j)) / 2.0).sin();
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            d[(i, j)] = c(i) / c(j) * sign / diff;
        }
    }
    for i in 0..=n {
        let s: f64 = (0..=n).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
        d[(i, i)] = -s;
    }
    d
}

/// Clenshaw–Curtis weights on `[-1, 1]` (node order is irrelevant: the
/// weights are symmetric).
fn clenshaw_curtis(n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    let th = |j: usize| j as f64 * PI / n as f64;
    if n % 2 == 0 {
        w[0] = 1.0 / (n * n - 1) as f64;
        w[n] = w[0];
    } else {
        w[0] = 1.0 / (n * n) as f64;
        w[n] = w[0];
    }
    for (j, wj) in w.iter_mut().enumerate().take(n).skip(1) {
        let mut v = 1.0;
        if n % 2 == 0 {
            v -= (n as f64 * th(j)).cos() / (n * n - 1) as f64;
            for k in 1..n / 2 {
                v -= 2.0 * (2.0 * k as f64 * th(j)).cos() / (4 * k * k - 1) as f64;
            }
        } else {
            for k in 1..=(n - 1) / 2 {
                v -= 2.0 * (2.0 * k as f64 * th(j)).cos() / (4 * k * k - 1) as f64;
            }
        }
        *wj = 2.0 * v / n as f64;
    }
    w
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; q];
    let mut w = vec![0.0; q];
    for i in 0..q {
        let mut z = (PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=q {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_q(z), p0 = P_{q-1}(z)
            dp = q as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Mass matrix of the Lagrange basis on `t_j = -cos(jπ/N)`, via barycentric
/// evaluation at Gauss–Legendre points (exact for degree `2N`).
fn lagrange_mass(n: usize) -> RMat {
    let t: Vec<f64> = (0..=n).map(|j| -(j as f64 * PI / n as f64).cos()).collect();
    let bw: Vec<f64> = (0..=n)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                s / 2.0
            } else {
                s
            }
        })
        .collect();
    let (gx, gw) = gauss_legendre(n + 2);
    let mut interp = RMat::zeros(gx.len(), n + 1);
    for (r, &x) in gx.iter().enumerate() {
        if let Some(hit) = t.iter().position(|&tj| (x - tj).abs() < 1e-15) {
            interp[(r, hit)] = 1.0;
            continue;
        }
        let terms: Vec<f64> = (0..=n).map(|j| bw[j] / (x - t[j])).collect();
        let denom: f64 = terms.iter().sum();
        for j in 0..=n {
            interp[(r, j)] = terms[j] / denom;
        }
    }
    let weighted = RMat::from_fn(gx.len(), n + 1, |r, j| interp[(r, j)] * gw[r]);
    interp.transpose() * weighted
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_monomials() {
        let g = CollocationGrid::new(32, 0.0, 2.0, 2).unwrap();
        let d = g.diff(1).unwrap();
        for m in 1..=5 {
            let f = nalgebra::DVector::from_iterator(g.len(), g.nodes().iter().map(|u| u.powi(m)));
            let df = &d * f;
            for (i, u) in g.nodes().iter().enumerate() {
                assert!((df[i] - m as f64 * u.powi(m - 1)).abs() < 1e-10, "m={m}");
            }
        }
    }

    #[test]
    fn quadrature_is_exact_on_polynomials() {
        let (a, b) = (-0.5, 1.5);
        let g = CollocationGrid::new(16, a, b, 1).unwrap();
        for m in 0..16 {
            let exact = (b.powi(m + 1) - a.powi(m + 1)) / (m + 1) as f64;
            let cc: f64 = g.cc_weights().iter().zip(g.nodes()).map(|(w, u)| w * u.powi(m)).sum();
            assert!((cc - exact).abs() < 1e-12, "m={m}");
        }
        // u^m · u^m integrates exactly through the mass matrix up to 2N.
        for m in 0..=16 {
            let f = nalgebra::DVector::from_iterator(g.len(), g.nodes().iter().map(|u| u.powi(m)));
            let val = (f.transpose() * g.mass() * &f)[(0, 0)];
            let exact = (b.powi(2 * m + 1) - a.powi(2 * m + 1)) / (2 * m + 1) as f64;
            assert!((val - exact).abs() < 1e-11 * exact.abs().max(1.0), "m={m}");
        }
    }

    #[test]
    fn gauss_legendre_small() {
        let (x, w) = gauss_legendre(3);
        assert!((x[0] + (0.6f64).sqrt()).abs() < 1e-15 && x[1].abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15 && (w[0] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(CollocationGrid::new(1, 0.0, 1.0, 2).is_err());
        assert!(CollocationGrid::new(8, 1.0, 1.0, 2).is_err());
    }
}
