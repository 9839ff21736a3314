//! Ready-made extended models: the Legendre-type, first-order and
//! Fourier examples, with their GKN candidates and mutated controls.

use crate::boundary::{boundary_form, DiffExpr, TraceVector};
use crate::error::{GknError, Result};
use crate::extension::{
    build_model, BoundaryConditions, ExtendedModel, ExtendedVector, ExtensionSpace, OperatorB, PartialGknSet,
};
use crate::linalg::{CMat, CVec};
use crate::poly::{rat, rational_to_f64, Rational};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleId {
    LegendreType,
    FirstOrder,
    #[serde(rename = "fourier_3_1")]
    Fourier31,
    /// Action `(−x″, αz + x′(a))`, domain `z = x′(a)`, `x(b) = 0`.
    #[serde(rename = "fourier_3_2a")]
    Fourier32a,
    /// Same action with the literal domain `z = x′(b)`, `x(b) = 0`.
    #[serde(rename = "fourier_3_2b")]
    Fourier32b,
    #[serde(rename = "fourier_3_3")]
    Fourier33,
    #[serde(rename = "fourier_3_4")]
    Fourier34,
    #[serde(rename = "fourier_3_5")]
    Fourier35,
}

impl ExampleId {
    pub const ALL: [ExampleId; 8] = [
        ExampleId::LegendreType,
        ExampleId::FirstOrder,
        ExampleId::Fourier31,
        ExampleId::Fourier32a,
        ExampleId::Fourier32b,
        ExampleId::Fourier33,
        ExampleId::Fourier34,
        ExampleId::Fourier35,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::LegendreType => "legendre_type",
            ExampleId::FirstOrder => "first_order",
            ExampleId::Fourier31 => "fourier_3_1",
            ExampleId::Fourier32a => "fourier_3_2a",
            ExampleId::Fourier32b => "fourier_3_2b",
            ExampleId::Fourier33 => "fourier_3_3",
            ExampleId::Fourier34 => "fourier_3_4",
            ExampleId::Fourier35 => "fourier_3_5",
        }
    }

    /// The conditions the GKN construction is expected to produce. The
    /// literal-domain reading of the second Fourier example has none: its
    /// conditions are imposed, not derived.
    pub fn expected_conditions(self) -> &'static [&'static str] {
        match self {
            ExampleId::LegendreType => &["a_W[1] = x(\u{2212}1)", "a_W[2] = x(1)"],
            ExampleId::FirstOrder => &["a_W = (x(0) + x(1))/2"],
            ExampleId::Fourier31 => &["x(a) = 0", "a_W = x(b)"],
            ExampleId::Fourier32a => &["a_W = x\u{2032}(a)", "x(b) = 0"],
            ExampleId::Fourier32b => &["x(b) = 0", "a_W = x\u{2032}(b)"],
            ExampleId::Fourier33 => &["a_W[1] = x(a)", "a_W[2] = x(b)"],
            ExampleId::Fourier34 => &["a_W[1] = x\u{2032}(a)", "a_W[2] = x\u{2032}(b)"],
            ExampleId::Fourier35 => &["a_W[1] = x(a)", "a_W[2] = x\u{2032}(b)"],
        }
    }
}

/// Parameters shared by the examples; each example reads only its own.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleParams {
    /// Legendre-type parameter `A`.
    pub a_param: Rational,
    /// `W` weights `M` and `N`.
    pub m: f64,
    pub n_weight: f64,
    pub alpha: f64,
    pub beta: Complex64,
    pub gamma: f64,
    pub a: Rational,
    pub b: Rational,
}

impl Default for ExampleParams {
    fn default() -> Self {
        ExampleParams {
            a_param: rat(1, 1),
            m: 1.0,
            n_weight: 1.0,
            alpha: 0.0,
            beta: Complex64::new(0.0, 0.0),
            gamma: 0.0,
            a: rat(0, 1),
            b: rat(1, 1),
        }
    }
}

/// An example model with a verified GKN candidate set, or, for the
/// literal reading of the second Fourier example, with imposed conditions.
#[derive(Debug, Clone)]
pub struct ExampleModel {
    pub id: ExampleId,
    pub model: ExtendedModel,
    pub candidates: Vec<ExtendedVector>,
    pub imposed: Option<CMat>,
}

fn tv(expr: &DiffExpr, values: &[f64]) -> TraceVector {
    TraceVector::from_real(expr, values).expect("catalog traces match the expression arity")
}

fn cv(values: &[f64]) -> CVec {
    CVec::from_iterator(values.len(), values.iter().map(|&v| Complex64::new(v, 0.0)))
}

pub fn build_example(id: ExampleId, p: &ExampleParams) -> Result<ExampleModel> {
    let (m, n) = (p.m, p.n_weight);
    if !(m > 0.0 && n > 0.0) {
        return Err(GknError::Precondition("W weights M and N must be positive".into()));
    }
    let (sm, sn) = (m.sqrt(), n.sqrt());
    let fourier = || DiffExpr::fourier(p.a.clone(), p.b.clone());
    let scalar_b = |w: &ExtensionSpace| OperatorB::new(CMat::from_element(1, 1, Complex64::new(p.alpha, 0.0)), w);
    let pair_b = |w: &ExtensionSpace| {
        // [[α, β], [β̄ N/M, γ]] is self-adjoint for ⟨z, z′⟩ = z₁z̄₁′/M + z₂z̄₂′/N.
        let b = CMat::from_row_slice(
            2,
            2,
            &[Complex64::new(p.alpha, 0.0), p.beta, p.beta.conj() * (n / m), Complex64::new(p.gamma, 0.0)],
        );
        OperatorB::new(b, w)
    };
    let mut imposed = None;
    let (expr, w, b, t, candidates): (DiffExpr, ExtensionSpace, OperatorB, Vec<Vec<f64>>, Vec<(Vec<f64>, Vec<f64>)>) =
        match id {
            ExampleId::LegendreType => {
                let expr = DiffExpr::legendre_type(p.a_param.clone())?;
                let sa = rational_to_f64(&p.a_param).sqrt();
                let a_val = rational_to_f64(&p.a_param);
                let w = ExtensionSpace::weighted(&[a_val, a_val])?;
                // G = I/A, so any Hermitian B is self-adjoint in W.
                let bm = CMat::from_row_slice(
                    2,
                    2,
                    &[Complex64::new(p.alpha, 0.0), p.beta, p.beta.conj(), Complex64::new(p.gamma, 0.0)],
                );
                let b = OperatorB::new(bm, &w)?;
                let t = vec![vec![sa, 0.0, 0.0, 0.0], vec![0.0, 0.0, sa, 0.0]];
                let c = vec![(vec![0.0, 0.0, 0.0, sa], vec![0.0, 0.0]), (vec![0.0, sa, 0.0, 0.0], vec![0.0, 0.0])];
                (expr, w, b, t, c)
            }
            ExampleId::FirstOrder => {
                let expr = DiffExpr::first_order();
                let w = ExtensionSpace::euclidean(1);
                let b = scalar_b(&w)?;
                (expr, w, b, vec![vec![1.0, 1.0]], vec![(vec![0.0, 1.0], vec![0.5])])
            }
            ExampleId::Fourier31 => {
                let expr = fourier()?;
                let w = ExtensionSpace::weighted(&[m])?;
                let b = scalar_b(&w)?;
                let t = vec![vec![0.0, 0.0, sm, 0.0]];
                let c = vec![(vec![0.0, 0.0, 0.0, sm], vec![0.0]), (vec![0.0, 1.0, 0.0, 0.0], vec![0.0])];
                (expr, w, b, t, c)
            }
            ExampleId::Fourier32a | ExampleId::Fourier32b => {
                let expr = fourier()?;
                let w = ExtensionSpace::weighted(&[m])?;
                let b = scalar_b(&w)?;
                let t = vec![vec![0.0, sm, 0.0, 0.0]];
                let c = vec![(vec![sm, 0.0, 0.0, 0.0], vec![0.0]), (vec![0.0, 0.0, 0.0, 1.0], vec![0.0])];
                if id == ExampleId::Fourier32b {
                    // z − x′(b) = 0 and x(b) = 0, in (x(a), x′(a), x(b), x′(b), z) coordinates.
                    imposed = Some(CMat::from_row_slice(
                        2,
                        5,
                        &[0.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0].map(|v| Complex64::new(v, 0.0)),
                    ));
                }
                (expr, w, b, t, c)
            }
            ExampleId::Fourier33 => {
                let expr = fourier()?;
                let w = ExtensionSpace::weighted(&[m, n])?;
                let b = pair_b(&w)?;
                let t = vec![vec![sm, 0.0, 0.0, 0.0], vec![0.0, 0.0, sn, 0.0]];
                let c = vec![(vec![0.0, sm, 0.0, 0.0], vec![0.0, 0.0]), (vec![0.0, 0.0, 0.0, sn], vec![0.0, 0.0])];
                (expr, w, b, t, c)
            }
            ExampleId::Fourier34 => {
                let expr = fourier()?;
                let w = ExtensionSpace::weighted(&[m, n])?;
                let b = pair_b(&w)?;
                let t = vec![vec![0.0, sm, 0.0, 0.0], vec![0.0, 0.0, 0.0, sn]];
                let c = vec![(vec![sm, 0.0, 0.0, 0.0], vec![0.0, 0.0]), (vec![0.0, 0.0, sn, 0.0], vec![0.0, 0.0])];
                (expr, w, b, t, c)
            }
            ExampleId::Fourier35 => {
                let expr = fourier()?;
                let w = ExtensionSpace::weighted(&[m, n])?;
                let b = pair_b(&w)?;
                let t = vec![vec![sm, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, sn]];
                let c = vec![(vec![0.0, 0.0, sn, 0.0], vec![0.0, 0.0]), (vec![0.0, sm, 0.0, 0.0], vec![0.0, 0.0])];
                (expr, w, b, t, c)
            }
        };
    let bf = boundary_form(&expr)?;
    let traces = t.iter().map(|v| tv(&expr, v)).collect();
    let model = build_model(bf, w, b, PartialGknSet::new(traces))?;
    let candidates = candidates.iter().map(|(x, a)| ExtendedVector::new(tv(&expr, x), cv(a))).collect();
    Ok(ExampleModel { id, model, candidates, imposed })
}

impl ExampleModel {
    /// The boundary conditions of this example: derived from the GKN
    /// candidates, or the imposed literal conditions.
    pub fn conditions(&self) -> Result<BoundaryConditions> {
        match &self.imposed {
            Some(c) => BoundaryConditions::from_matrix(&self.model, c.clone()),
            None => crate::extension::derive_boundary_conditions(&self.model, &self.candidates),
        }
    }

    /// The partial GKN set lifted into the extended space: `(t_j, ξ_j)`.
    pub fn minimal_lift(&self, j: usize) -> ExtendedVector {
        minimal_lift(&self.model, j)
    }
}

/// `(t_j, ξ_j)`, the `j`-th spanning vector of the minimal part.
pub fn minimal_lift(model: &ExtendedModel, j: usize) -> ExtendedVector {
    let t = model.gkn_partial().traces()[j].clone();
    ExtendedVector::new(t, model.w().xi().column(j).into_owned())
}

/// The expression with no extension space (`k = 0`), for classical
/// boundary conditions such as periodic or Dirichlet ones.
pub fn plain_model(expr: &DiffExpr) -> Result<ExtendedModel> {
    build_model(boundary_form(expr)?, ExtensionSpace::euclidean(0), OperatorB::zero(0), PartialGknSet::new(Vec::new()))
}

/// Candidate sets that must fail the GKN conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Adds a multiple of another candidate's form partner so that the
    /// pairwise (or self) form value no longer vanishes.
    SymmetryBroken,
    /// Replaces one candidate by an element of the minimal part.
    IndependenceBroken,
    /// Drops one candidate, or duplicates it when there is only one.
    WrongCardinality,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [Mutation::SymmetryBroken, Mutation::IndependenceBroken, Mutation::WrongCardinality];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::SymmetryBroken => "symmetry_broken",
            Mutation::IndependenceBroken => "independence_broken",
            Mutation::WrongCardinality => "wrong_cardinality",
        }
    }
}

pub fn mutate_candidates(model: &ExtendedModel, candidates: &[ExtendedVector], mutation: Mutation) -> Vec<ExtendedVector> {
    let mut c = candidates.to_vec();
    match mutation {
        Mutation::SymmetryBroken => {
            // With v = S_ext z, [v, z] = −‖S_ext z‖² ≠ 0, so an imaginary
            // step along v makes the self-pairing of z nonzero.
            let f = model.f_ext().matrix();
            let z = c[0].stacked();
            let v = f * &z;
            let n = model.trace_dim();
            let scale = Complex64::new(0.0, 0.5) * z.norm() / v.norm().max(1e-300);
            let pert = &v * scale;
            let mut trace = c[0].trace.values().clone();
            let mut w = c[0].w.clone();
            for i in 0..n {
                trace[i] += pert[i];
            }
            for i in 0..w.len() {
                w[i] += pert[n + i];
            }
            c[0] = ExtendedVector::new(
                TraceVector::new(model.expr(), trace.iter().copied().collect()).expect("same arity"),
                w,
            );
        }
        Mutation::IndependenceBroken => {
            if model.k() > 0 {
                c[0] = minimal_lift(model, 0);
            } else {
                c[0] = ExtendedVector::new(TraceVector::zeros(model.expr()), CVec::zeros(0));
            }
        }
        Mutation::WrongCardinality => {
            if c.len() > 1 {
                c.pop();
            } else {
                c.push(c[0].clone());
            }
        }
    }
    c
}

/// How [`sabotage`] corrupts a condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sabotage {
    /// `a_W = x(b)` becomes `a_W = 2·x(b)`.
    Double,
    /// `a_W = x(b)` becomes `a_W = 0`, freeing the trace.
    Zero,
}

/// Corrupts the first trace coefficient of the first condition that
/// involves a `W` variable (or of the first condition, when none does).
pub fn sabotage(bc: &BoundaryConditions, model: &ExtendedModel, how: Sabotage) -> Result<BoundaryConditions> {
    let n = model.trace_dim();
    let mut c = bc.canonical.clone();
    let row = (0..c.nrows())
        .find(|&r| (n..c.ncols()).any(|j| c[(r, j)].norm() > 1e-12) && (0..n).any(|j| c[(r, j)].norm() > 1e-12))
        .or_else(|| (0..c.nrows()).find(|&r| (0..n).any(|j| c[(r, j)].norm() > 1e-12)))
        .ok_or_else(|| GknError::Precondition("no condition row with a trace coefficient".into()))?;
    let col = (0..n).find(|&j| c[(row, j)].norm() > 1e-12).expect("row chosen for its trace coefficient");
    c[(row, col)] *= Complex64::new(
        match how {
            Sabotage::Double => 2.0,
            Sabotage::Zero => 0.0,
        },
        0.0,
    );
    BoundaryConditions::from_matrix(model, c)
}
