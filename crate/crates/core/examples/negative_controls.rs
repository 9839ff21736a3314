//! Broken inputs the checks must reject: mutated GKN candidates, and
//! conditions with one coefficient knocked out, whose discrete operator
//! is measurably non-symmetric.
//!
//!     cargo run --release --example negative_controls

use gkn_extend::catalog::{build_example, mutate_candidates, sabotage, ExampleId, ExampleParams, Mutation, Sabotage};
use gkn_extend::error::Result;
use gkn_extend::extension::{check_gkn_extended, verify_self_adjoint_domain};
use gkn_extend::spectral::{assemble, CollocationGrid};

fn main() -> Result<()> {
    for id in [ExampleId::FirstOrder, ExampleId::Fourier31, ExampleId::Fourier35] {
        let ex = build_example(id, &ExampleParams::default())?;
        println!("{}", id.name());
        for m in Mutation::ALL {
            let r = check_gkn_extended(&ex.model, &mutate_candidates(&ex.model, &ex.candidates, m))?;
            println!("  {:<22} accepted = {}", m.name(), r.passed());
        }
        let bc = ex.conditions()?;
        let order = ex.model.expr().order();
        let grid = CollocationGrid::new(64, 0.0, 1.0, order)?;
        for (label, bc) in [("derived", bc.clone()), ("sabotaged", sabotage(&bc, &ex.model, Sabotage::Zero)?)] {
            let defect = assemble(&ex.model, &bc, &grid)?.symmetry_defect(32, 0)?;
            println!(
                "  {label:<10} {:<32} self-adjoint = {:<5} defect {defect:.1e}",
                bc.human_readable.join(", "),
                verify_self_adjoint_domain(&ex.model, &bc)?
            );
        }
    }
    Ok(())
}
