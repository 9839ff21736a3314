//! The boundary form of `-x″` on `[0, 1]`, its Lagrangian subspaces, and
//! what happens once a one-dimensional `W` is attached.
//!
//!     cargo run --example symplectic_basics

use gkn_extend::boundary::{boundary_form, DiffExpr, TraceVector};
use gkn_extend::catalog::{build_example, ExampleId, ExampleParams};
use gkn_extend::error::Result;
use gkn_extend::linalg::CVec;
use gkn_extend::poly::rat;
use gkn_extend::symplectic::{is_complete_lagrangian, quotient_by, radical, Subspace};
use num_complex::Complex64;

fn real(v: &[f64]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
}

fn main() -> Result<()> {
    let expr = DiffExpr::fourier(rat(0, 1), rat(1, 1))?;
    let bf = boundary_form(&expr)?;
    println!("trace coordinates: {:?}", expr.trace_names());
    println!("boundary form S =\n{}", bf.form.matrix());
    println!("radical dimension: {}", radical(&bf.form).dim());

    // Boundary values allowed by x(0) = x(1) = 0, and by x(0) = x′(0) = 0.
    let dirichlet = Subspace::span(4, &[real(&[0.0, 1.0, 0.0, 0.0]), real(&[0.0, 0.0, 0.0, 1.0])]);
    let initial = Subspace::span(4, &[real(&[0.0, 0.0, 1.0, 0.0]), real(&[0.0, 0.0, 0.0, 1.0])]);
    println!("Dirichlet: complete Lagrangian = {}", is_complete_lagrangian(&bf.form, &dirichlet)?);
    println!("initial-value: complete Lagrangian = {}", is_complete_lagrangian(&bf.form, &initial)?);

    // With W = C attached, the minimal part is the radical of the extended form
    // and the quotient carries a nondegenerate form again.
    let ex = build_example(ExampleId::Fourier31, &ExampleParams::default())?;
    let model = &ex.model;
    let t = TraceVector::from_real(&expr, &[0.0, 0.0, 1.0, 0.0])?;
    println!("Ω t_1 = {}", model.omega(&t)[0]);
    let q = quotient_by(model.f_ext(), model.m_min())?;
    println!(
        "extended dimension {} / minimal part {} -> quotient {} (nondegenerate: {})",
        model.ext_dim(),
        model.m_min().dim(),
        q.dim(),
        q.is_nondegenerate()
    );
    Ok(())
}
