//! Numerical verification: collocation assembly of extended operators,
//! symmetry defects, spectra, and the shooting oracle.

pub mod assemble;
pub mod grid;
pub mod shooting;

pub use assemble::{assemble, reduced_symmetry_defect, spectrum, DiscreteExtendedOperator, SpectrumReport};
pub use grid::CollocationGrid;
pub use shooting::{characteristic, shooting_oracle};
