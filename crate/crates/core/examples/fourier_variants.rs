//! `-x″` coupled to `W` in five ways. Prints the derived conditions
//! and whether each domain is self-adjoint, including the literal
//! reading of the second variant, which is not.
//!
//!     cargo run --example fourier_variants

use gkn_extend::catalog::{build_example, ExampleId, ExampleParams};
use gkn_extend::error::Result;
use gkn_extend::extension::verify_self_adjoint_domain;
use gkn_extend::poly::rat;

fn main() -> Result<()> {
    let p = ExampleParams { a: rat(0, 1), b: rat(2, 1), alpha: 1.0, ..Default::default() };
    for id in ExampleId::ALL.into_iter().filter(|id| id.name().starts_with("fourier")) {
        let ex = build_example(id, &p)?;
        let bc = ex.conditions()?;
        println!(
            "{:<13} dim W = {}  self-adjoint = {:<5}  {}",
            id.name(),
            ex.model.k(),
            verify_self_adjoint_domain(&ex.model, &bc)?,
            bc.human_readable.join(", ")
        );
    }
    Ok(())
}
