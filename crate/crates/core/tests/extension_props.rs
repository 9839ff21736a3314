mod common;

use common::*;
use gkn_extend::boundary::{
    apply_expr, boundary_matrix_exact, bracket_exact, l2_inner_exact, trace_of_poly, DiffExpr,
};
use gkn_extend::catalog::ExampleId;
use gkn_extend::extension::{check_gkn_extended, derive_boundary_conditions, verify_self_adjoint_domain};
use gkn_extend::poly::{rat, ComplexRational, Poly, Rational};
use num_complex::Complex;
use proptest::prelude::*;

fn arb_poly(max_degree: usize) -> impl Strategy<Value = Poly<ComplexRational>> {
    prop::collection::vec((-5i64..=5, -5i64..=5), 1..=max_degree + 1)
        .prop_map(|cs| Poly::new(cs.into_iter().map(|(re, im)| Complex::new(rat(re, 1), rat(im, 1))).collect()))
}

fn int_poly(cs: &[i64]) -> Poly<Rational> {
    Poly::new(cs.iter().map(|&c| rat(c, 1)).collect())
}

fn expressions() -> Vec<DiffExpr> {
    vec![
        DiffExpr::first_order(),
        DiffExpr::fourier(rat(0, 1), rat(1, 1)).unwrap(),
        DiffExpr::fourier(rat(-1, 2), rat(2, 1)).unwrap(),
        DiffExpr::general_even_order(vec![int_poly(&[1, 1]), int_poly(&[2, 0, 1])], rat(0, 1), rat(3, 2)).unwrap(),
        DiffExpr::general_even_order(vec![int_poly(&[0, 1]), int_poly(&[1]), int_poly(&[3, 1])], rat(-1, 1), rat(1, 1))
            .unwrap(),
        DiffExpr::legendre_type(rat(1, 1)).unwrap(),
        DiffExpr::legendre_type(rat(5, 2)).unwrap(),
    ]
}

/// Green's formula: `⟨ℓp, q⟩ − ⟨p, ℓq⟩ = [p, q]` exactly on polynomials.
fn green_holds(expr: &DiffExpr, p: &Poly<ComplexRational>, q: &Poly<ComplexRational>) -> bool {
    let s = boundary_matrix_exact(expr).unwrap();
    let lp = apply_expr(expr, p).unwrap();
    let lq = apply_expr(expr, q).unwrap();
    let lhs = l2_inner_exact(expr, &lp, q) - l2_inner_exact(expr, p, &lq);
    let rhs = bracket_exact(&s, &trace_of_poly(expr, p), &trace_of_poly(expr, q));
    lhs == rhs
}

proptest! {
    #[test]
    fn greens_formula_on_polynomials(p in arb_poly(6), q in arb_poly(6)) {
        for expr in expressions() {
            prop_assert!(green_holds(&expr, &p, &q), "{:?}", expr.kind());
        }
    }
}

const MODELS: [ExampleId; 8] = ExampleId::ALL;

#[test]
fn random_gkn_sets_derive_self_adjoint_domains() {
    for id in MODELS {
        let ex = example(id);
        for trial in 0..100 {
            let gkn = random_gkn_set(&ex.model, 1000 * trial + id as u64);
            let report = check_gkn_extended(&ex.model, &gkn).unwrap();
            assert!(report.passed(), "{} trial {trial}: {report:?}", id.name());
            let bc = derive_boundary_conditions(&ex.model, &gkn).unwrap();
            assert!(verify_self_adjoint_domain(&ex.model, &bc).unwrap(), "{} trial {trial}", id.name());
            let sym = domain_symmetry(&ex.model, &bc.c, 8, trial);
            assert!(sym <= 1e-10, "{} trial {trial}: symmetry {sym:e}", id.name());
        }
    }
}

#[test]
fn catalog_domains_are_symmetric() {
    for id in MODELS.into_iter().filter(|&id| id != ExampleId::Fourier32b) {
        let ex = example(id);
        let bc = ex.conditions().unwrap();
        let sym = domain_symmetry(&ex.model, &bc.c, 100, 3);
        assert!(sym <= 1e-10, "{}: {sym:e}", id.name());
    }
    // The literal reading of the second Fourier variant is not symmetric.
    let ex = example(ExampleId::Fourier32b);
    assert!(domain_symmetry(&ex.model, &ex.conditions().unwrap().c, 100, 3) > 1e-3);
}

