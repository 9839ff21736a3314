mod common;

use common::*;
use gkn_extend::boundary::Sign;
use gkn_extend::catalog::{build_example, sabotage, ExampleId, ExampleParams, Sabotage};
use gkn_extend::extension::extended_deficiency_vectors;
use gkn_extend::linalg::CVec;
use gkn_extend::spectral::spectrum;

#[test]
fn honest_assemblies_are_symmetric_with_real_spectra() {
    for id in HONEST {
        let ex = example(id);
        let op = discretize(&ex.model, &ex.conditions().unwrap(), 64);
        let sp = spectrum(&op, 10, 0).unwrap();
        assert!(sp.symmetry_defect <= 1e-8, "{}: defect {:e}", id.name(), sp.symmetry_defect);
        for z in &sp.eigenvalues {
            assert!(z.im.abs() <= 1e-6 * (1.0 + z.re.abs()), "{}: {z}", id.name());
        }
        assert!(sp.residuals.iter().all(|&r| r <= 1e-8), "{}: {:?}", id.name(), sp.residuals);
    }
}

#[test]
fn sabotaged_assemblies_are_not_symmetric() {
    for id in HONEST {
        let ex = example(id);
        let bc = sabotage(&ex.conditions().unwrap(), &ex.model, Sabotage::Zero).unwrap();
        let defect = discretize(&ex.model, &bc, 64).symmetry_defect(32, 0).unwrap();
        assert!(defect >= 1e-4, "{}: defect {defect:e}", id.name());
    }
}

#[test]
fn literal_second_variant_has_complex_spectrum() {
    let ex = example(ExampleId::Fourier32b);
    let op = discretize(&ex.model, &ex.conditions().unwrap(), 64);
    let sp = spectrum(&op, 10, 0).unwrap();
    assert!(sp.symmetry_defect > 1e-4);
    assert!(sp.max_imag > 1.0);
}

#[test]
fn first_eigenvalue_converges_in_the_grid() {
    let ex = example(ExampleId::Fourier31);
    let bc = ex.conditions().unwrap();
    let coarse = spectrum(&discretize(&ex.model, &bc, 32), 1, 0).unwrap().eigenvalues[0];
    let fine = spectrum(&discretize(&ex.model, &bc, 64), 1, 0).unwrap().eigenvalues[0];
    assert!((coarse - fine).norm() <= 1e-8, "{coarse} vs {fine}");
}

#[test]
fn fourier_variants_match_the_shooting_oracle() {
    let p = ExampleParams { alpha: 0.5, gamma: -1.0, ..Default::default() };
    for id in [ExampleId::Fourier31, ExampleId::Fourier32a, ExampleId::Fourier33, ExampleId::Fourier34, ExampleId::Fourier35] {
        let ex = build_example(id, &p).unwrap();
        let cmp = compare_with_oracle(&ex, 64, 5, 0);
        assert!(cmp.worst_rel <= 1e-6, "{}: {:?} vs {:?}", id.name(), cmp.spectral, cmp.roots);
    }
}

#[test]
fn deficiency_vectors_satisfy_the_discrete_eigenrelation() {
    let fourier = [ExampleId::Fourier31, ExampleId::Fourier32a, ExampleId::Fourier33, ExampleId::Fourier34, ExampleId::Fourier35];
    for id in std::iter::once(ExampleId::FirstOrder).chain(fourier) {
        let ex = example(id);
        let op = discretize(&ex.model, &ex.conditions().unwrap(), 64);
        let nodes = grid_for(&ex.model, 64).nodes().to_vec();
        for sign in [Sign::Plus, Sign::Minus] {
            let vs = extended_deficiency_vectors(&ex.model, sign).unwrap();
            assert_eq!(vs.len(), ex.model.deficiency_index(), "{}", id.name());
            for v in vs {
                let x = CVec::from_iterator(nodes.len(), nodes.iter().map(|&u| v.eval(u)));
                let r = op.eigenrelation_residual(&x, &v.a, v.lambda).unwrap();
                assert!(r <= 1e-8, "{} {sign:?}: residual {r:e}", id.name());
            }
        }
    }
}
