use num_complex::Complex64;
use proptest::prelude::*;
use ptlattice::model::relative_schrodinger_residual;
use ptlattice::scattering::{perfect_transmission, solve_scattering, symmetry_residuals};
use ptlattice::{Direction, ModelParams, ScatteringError};

fn triple() -> impl Strategy<Value = ModelParams> {
    (-1.0..1.0f64, -1.0..1.0f64, -2.0..2.0f64).prop_map(|(e0, e1, g)| ModelParams::new(e0, e1, g).unwrap())
}

fn wavenumber() -> impl Strategy<Value = f64> {
    (0.01..3.13f64, any::<bool>()).prop_map(|(k, neg)| if neg { -k } else { k })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pt_relations_hold(p in triple(), k in wavenumber()) {
        match symmetry_residuals(&p, k) {
            Err(ScatteringError::Pole { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
            Ok(r) => {
                let t = solve_scattering(&p, k, Direction::LeftToRight).unwrap().transmission;
                prop_assume!(t < 1e6);
                prop_assert!(r.max() < 1e-10 * t.max(1.0), "{:?}", r);
            }
        }
    }

    #[test]
    fn solutions_solve_the_lattice_equation(p in triple(), k in wavenumber(), right in any::<bool>()) {
        let dir = if right { Direction::RightToLeft } else { Direction::LeftToRight };
        if let Ok(s) = solve_scattering(&p, k, dir) {
            let r = relative_schrodinger_residual(&p, Complex64::new(s.energy(), 0.0), &s.wave(), -8..=8);
            prop_assert!(r < 1e-10);
            prop_assert!((s.transmission - s.t.norm_sqr()).abs() == 0.0);
            prop_assert!((s.reflection - s.r.norm_sqr()).abs() == 0.0);
        }
    }

    #[test]
    fn hermitian_limit_conserves_probability(e0 in -1.0..1.0f64, e1 in -1.0..1.0f64, k in wavenumber()) {
        let p = ModelParams::new(e0, e1, 0.0).unwrap();
        let l = solve_scattering(&p, k, Direction::LeftToRight).unwrap();
        let r = solve_scattering(&p, k, Direction::RightToLeft).unwrap();
        prop_assert!((l.transmission + l.reflection - 1.0).abs() < 1e-12);
        prop_assert!((l.r - r.r).norm() < 1e-12);
    }

    #[test]
    fn gain_side_incidence_reflects_less(g in 0.01..3.0f64, k in 0.01..3.13f64) {
        let p = ModelParams::gain_loss(g).unwrap();
        if let (Ok(l), Ok(r)) = (
            solve_scattering(&p, k, Direction::LeftToRight),
            solve_scattering(&p, k, Direction::RightToLeft),
        ) {
            prop_assert!(r.reflection <= l.reflection * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn reflectionless_wavenumbers_transmit(p in triple(), right in any::<bool>()) {
        let dir = if right { Direction::RightToLeft } else { Direction::LeftToRight };
        let set = perfect_transmission(&p, dir).unwrap();
        for k in set.ktildes {
            prop_assume!(k.sin().abs() > 1e-6);
            match solve_scattering(&p, k, dir) {
                Ok(s) => {
                    prop_assert!(s.r.norm() < 1e-9, "{} {:?}", k, s);
                    prop_assert!((s.transmission - 1.0).abs() < 1e-9);
                }
                Err(ScatteringError::Pole { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}

#[test]
fn pure_gain_loss_sets_factorize() {
    use std::f64::consts::FRAC_PI_2;
    for step in 1..40 {
        let gamma = 0.1 * f64::from(step) - 2.0;
        if gamma.abs() < 1e-9 {
            continue;
        }
        let p = ModelParams::gain_loss(gamma).unwrap();
        for (dir, sign) in [(Direction::LeftToRight, -1.0), (Direction::RightToLeft, 1.0)] {
            let set = perfect_transmission(&p, dir).unwrap();
            let target = sign * gamma / 2.0;
            let mut expected = vec![-FRAC_PI_2, FRAC_PI_2];
            if target.abs() < 1.0 {
                let a = target.asin();
                let b = if a >= 0.0 { std::f64::consts::PI - a } else { -std::f64::consts::PI - a };
                expected.extend([a, b]);
            }
            expected.sort_by(f64::total_cmp);
            expected.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            assert_eq!(set.ktildes.len(), expected.len(), "Γ = {gamma} {dir}: {:?}", set.ktildes);
            for (a, b) in set.ktildes.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-9, "Γ = {gamma} {dir}: {:?}", set.ktildes);
            }
        }
    }
}
