//! `i x′` on `[0, 1]` with one extra dimension: the derived condition,
//! deficiency vectors in the extended space, and the spectrum.
//!
//!     cargo run --release --example first_order -- 0.5

use gkn_extend::boundary::Sign;
use gkn_extend::catalog::{build_example, ExampleId, ExampleParams};
use gkn_extend::error::Result;
use gkn_extend::extension::{extended_deficiency_vectors, verify_self_adjoint_domain};
use gkn_extend::spectral::{assemble, shooting_oracle, spectrum, CollocationGrid};

fn main() -> Result<()> {
    let alpha: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let ex = build_example(ExampleId::FirstOrder, &ExampleParams { alpha, ..Default::default() })?;
    let bc = ex.conditions()?;
    println!("conditions: {:?}", bc.human_readable);
    println!("self-adjoint: {}", verify_self_adjoint_domain(&ex.model, &bc)?);

    for sign in [Sign::Plus, Sign::Minus] {
        for v in extended_deficiency_vectors(&ex.model, sign)? {
            println!(
                "λ = {}: a = {}, residuals {:.1e} / {:.1e}",
                v.lambda, v.a[0], v.h_residual, v.w_residual
            );
        }
    }

    let grid = CollocationGrid::new(48, 0.0, 1.0, 1)?;
    let op = assemble(&ex.model, &bc, &grid)?;
    let sp = spectrum(&op, 5, 0)?;
    let roots = shooting_oracle(&ex.model, &bc, -20.0, 20.0, 0.05)?;
    println!("collocation: {:?}", sp.eigenvalues.iter().map(|z| z.re).collect::<Vec<_>>());
    println!("shooting:    {roots:?}");
    println!("symmetry defect {:.1e}", sp.symmetry_defect);
    Ok(())
}
