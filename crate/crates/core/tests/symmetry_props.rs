use hermsym::random::{random_hermitian, random_phase, trial_rng};
use hermsym::spectral::{eigendecompose, EigenOrdering};
use hermsym::symmetry::{construct_suite, ChiLabel, SymmetryOperator};
use hermsym::Tolerances;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn suite_invariants_hold_for_random_hamiltonians(n in 2usize..=64, seed in any::<u64>(), descending in any::<bool>()) {
        let h = random_hermitian(n, &mut trial_rng(seed, 0));
        let ordering = if descending { EigenOrdering::PaperTwoByTwo } else { EigenOrdering::Ascending };
        let s = eigendecompose(&h, ordering).unwrap();
        let tol = Tolerances::default();
        let suite = construct_suite(&h, &s, &tol).unwrap();
        for r in suite.residuals.iter() {
            prop_assert!(r.passed(), "{} = {:e} > {:e}", r.label, r.value, r.tolerance);
        }
        prop_assert_eq!(suite.c.matrix(), suite.p.matrix());
        prop_assert_eq!(suite.cpt.linear_part(), suite.t.linear_part());

        let pt = suite.norm_report(ChiLabel::PT, &s, 1e-10).unwrap();
        prop_assert!(pt.is_alternating());
        let p = suite.norm_report(ChiLabel::P, &s, 1e-10).unwrap();
        prop_assert_eq!(&p.signature, &pt.signature);
        let cpt = suite.norm_report(ChiLabel::CPT, &s, 1e-10).unwrap();
        prop_assert!(cpt.is_positive_definite());
        for report in [&pt, &p, &cpt] {
            prop_assert!(report.off_diagonal_max <= 1e-10);
        }
    }

    #[test]
    fn phases_change_t_but_nothing_observable(n in 2usize..=12, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 7);
        let h = random_hermitian(n, &mut rng);
        let s = eigendecompose(&h, EigenOrdering::Ascending).unwrap();
        let phases: Vec<_> = (0..n).map(|_| random_phase(&mut rng)).collect();
        let rotated = s.with_phases(&phases).unwrap();
        let tol = Tolerances::default();
        let a = construct_suite(&h, &s, &tol).unwrap();
        let b = construct_suite(&h, &rotated, &tol).unwrap();
        prop_assert!(a.p.matrix().max_abs_diff(b.p.matrix()) <= 1e-12);
        for r in b.residuals.iter() {
            prop_assert!(r.passed(), "{} = {:e}", r.label, r.value);
        }
        for label in ChiLabel::ALL {
            let x = a.norm_report(label, &s, 1e-10).unwrap();
            let y = b.norm_report(label, &rotated, 1e-10).unwrap();
            prop_assert_eq!(&x.signature, &y.signature);
            for (u, v) in x.gram_diagonal.iter().zip(&y.gram_diagonal) {
                prop_assert!((u - v).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn degenerate_input_still_satisfies_involutions() {
    let h = hermsym::spectral::check_hermitian(hermsym::ComplexMatrix::identity(4), 0.0).unwrap();
    let s = eigendecompose(&h, EigenOrdering::Ascending).unwrap();
    let suite = construct_suite(&h, &s, &Tolerances::default()).unwrap();
    assert!(suite.degeneracy_flag());
    assert!(suite.residuals.all_passed());
    assert!(suite.p.involution_residual() < 1e-15);
}
