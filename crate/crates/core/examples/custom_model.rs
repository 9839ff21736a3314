//! A model described entirely in JSON, run through the same pipeline as
//! the command-line tool: `-x″` on `[0, 1]` with `W = C`,
//! `x(0) = 0` and `a_W = x′(1) − x(1)`.
//!
//!     cargo run --release --example custom_model

use gkn_extend::error::Result;
use gkn_extend::report::{run, Command, RunConfig};

const CONFIG: &str = r#"{
  "example": "custom",
  "grid_N": 48,
  "custom": {
    "expression": {"kind": "fourier", "a": 0, "b": 1},
    "w_weights": [1],
    "B": [[0.5, 0]],
    "gkn_traces": [[0, 0, 0, 0, 0, 0, 1, 0]],
    "candidates": [
      {"trace": [0, 0, 1, 0, 0, 0, 0, 0], "w": [0, 0]},
      {"trace": [0, 0, 0, 0, 1, 0, 0, 0], "w": [-1, 0]}
    ]
  }
}"#;

fn main() -> Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let report = run(&config, Command::All)?;
    println!("{}", report.boundary_conditions_rendered.join(", "));
    for c in &report.checks {
        println!("{:<40} {}", c.name, if c.pass { "ok" } else { "FAILED" });
    }
    for e in &report.eigenvalues {
        println!("λ_{} = {:.10}", e.index, e.re);
    }
    println!("status: {}", report.status);
    Ok(())
}
