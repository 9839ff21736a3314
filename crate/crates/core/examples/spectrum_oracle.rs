//! Collocation eigenvalues of an eigenparameter-dependent problem next
//! to an independent shooting computation, at two grid sizes.
//!
//!     cargo run --release --example spectrum_oracle

use gkn_extend::catalog::{build_example, ExampleId, ExampleParams};
use gkn_extend::error::Result;
use gkn_extend::spectral::{assemble, shooting_oracle, spectrum, CollocationGrid};

fn main() -> Result<()> {
    let ex = build_example(ExampleId::Fourier33, &ExampleParams { alpha: 1.0, gamma: -2.0, ..Default::default() })?;
    let bc = ex.conditions()?;
    println!("{}", bc.human_readable.join(", "));
    let roots = shooting_oracle(&ex.model, &bc, -50.0, 200.0, 0.05)?;
    for n in [32, 64] {
        let op = assemble(&ex.model, &bc, &CollocationGrid::new(n, 0.0, 1.0, 2)?)?;
        let sp = spectrum(&op, 6, 1)?;
        println!("N = {n}: defect {:.1e}, max |Im| {:.1e}", sp.symmetry_defect, sp.max_imag);
        for z in &sp.eigenvalues {
            let nearest = roots.iter().copied().min_by(|a, b| (a - z.re).abs().total_cmp(&(b - z.re).abs()));
            println!("  {:>14.9}  shooting {:>14.9}", z.re, nearest.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
