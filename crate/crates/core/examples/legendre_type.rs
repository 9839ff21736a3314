//! Exact checks for the fourth-order Legendre-type expression: its
//! orthogonal polynomials under the measure with point masses at ±1,
//! the eigenvalue formula, and the eigenparameter boundary identities.
//!
//!     cargo run --example legendre_type -- 3/2

use gkn_extend::error::Result;
use gkn_extend::legendre::{
    boundary_identity_check, eigen_check, extended_eigen_check, extended_orthogonality_check, gram_schmidt,
    lambda_formula, resolve_sign_pairing, zero_b, MuMeasure,
};
use gkn_extend::poly::{parse_rational, rat};

fn main() -> Result<()> {
    let a = std::env::args().nth(1).and_then(|s| parse_rational(&s)).unwrap_or_else(|| rat(1, 1));
    let mu = MuMeasure::new(a.clone())?;
    let basis = gram_schmidt(&mu, 6)?;
    let pairing = resolve_sign_pairing(&basis)?;
    println!("A = {a}, boundary identities hold with {pairing:?}");
    for n in 0..=basis.n_max() {
        let lambda = eigen_check(&basis, n)?;
        assert_eq!(lambda, lambda_formula(&a, n));
        println!(
            "P_{n}: λ = {lambda:>6}  boundary identity {}  extended eigenrelation {}  coeffs {:?}",
            boundary_identity_check(&basis, n, pairing)?,
            extended_eigen_check(&basis, n, &zero_b())?,
            basis.get(n)?.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        );
    }
    // Orthogonality in L² ⊕ W, with the boundary values as the W component.
    let off = (0..=basis.n_max())
        .flat_map(|m| (m + 1..=basis.n_max()).map(move |n| (m, n)))
        .filter(|&(m, n)| extended_orthogonality_check(&basis, m, n).map(|r| r != rat(0, 1)).unwrap_or(true))
        .count();
    println!("nonorthogonal pairs: {off}");
    Ok(())
}
