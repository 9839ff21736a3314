pub mod boundary;
pub mod catalog;
pub mod error;
pub mod extension;
pub mod legendre;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod spectral;
pub mod symplectic;
