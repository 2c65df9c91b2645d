use cayley_core::exterior::Form;
use cayley_core::random::{self, TestRng};
use cayley_core::scalar::{q, Q};
use cayley_core::spin7::frame;
use cayley_core::su3::{make_su3, omega0, pullback_su3, re_omega0, standard, SU3Structure};
use num::Zero;
use proptest::prelude::*;

fn structure(rng: &mut TestRng) -> SU3Structure<Q> {
    pullback_su3(&random::gl_plus(rng, 6, 2), &standard()).expect("GL+ pullback")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_form_split_is_an_orthogonal_projection(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let s = structure(&mut rng);
        let beta = random::form(&mut rng, 6, 2, 3);
        let p = s.project2(&beta);
        prop_assert_eq!(&(&p.b1 + &p.b6) + &p.b8, beta);
        for (x, y) in [(&p.b1, &p.b6), (&p.b1, &p.b8), (&p.b6, &p.b8)] {
            prop_assert!(s.inner(x, y).is_zero());
        }
        prop_assert!(p.b8.wedge(&s.omega.wedge(&s.omega)).is_zero());
        prop_assert!(p.b8.wedge(&s.re_omega).is_zero());
        prop_assert_eq!(&s.project2(&p.b8).b8, &p.b8);
        prop_assert_eq!(&s.project2(&p.b6).b6, &p.b6);
        prop_assert_eq!(&s.project2(&p.b1).b1, &p.b1);
    }

    #[test]
    fn three_form_split_is_an_orthogonal_projection(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let s = structure(&mut rng);
        let gamma = random::form(&mut rng, 6, 3, 3);
        let p = s.project3(&gamma);
        prop_assert_eq!(&(&p.g6 + &p.g11) + &p.g12, gamma);
        for (x, y) in [(&p.g6, &p.g11), (&p.g6, &p.g12), (&p.g11, &p.g12)] {
            prop_assert!(s.inner(x, y).is_zero());
        }
        for f in [&s.omega, &s.re_omega, &s.im_omega] {
            prop_assert!(p.g12.wedge(f).is_zero());
        }
        prop_assert_eq!(&s.project3(&p.g12).g12, &p.g12);
        prop_assert_eq!(&s.project3(&p.g6).g6, &p.g6);
    }

    #[test]
    fn pulled_back_structures_keep_the_monge_ampere_normalization(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let s = structure(&mut rng);
        prop_assert!(s.monge_ampere_defect().is_zero());
        let rebuilt = make_su3(&s.omega, &s.re_omega).unwrap();
        prop_assert_eq!(rebuilt.im_omega, s.im_omega);
    }

    #[test]
    fn circle_rotation_fixes_the_cayley_form(seed in any::<u64>(), m in 1i64..6, n in 1i64..6) {
        let mut rng = random::rng(seed);
        let d = random::spin7_data(&mut rng);
        let (fr, _) = frame(&d).unwrap();
        let r2 = m * m + n * n;
        let rot = fr.rotated(&q(m * m - n * n, r2), &q(2 * m * n, r2));
        prop_assert_eq!(rot.phi(), fr.phi());
    }
}

#[test]
fn scaling_re_omega_breaks_monge_ampere_without_normalization() {
    let s = make_su3(&omega0::<Q>(), &re_omega0().scale(&q(2, 1))).unwrap();
    assert!(!s.monge_ampere_defect().is_zero());
    let fixed = cayley_core::su3::make_su3_normalized(&omega0::<Q>(), &re_omega0().scale(&q(2, 1))).unwrap();
    assert!(fixed.monge_ampere_defect().is_zero());
    assert_eq!(fixed.re_omega, re_omega0());
}

#[test]
fn standard_structure_forms_have_the_expected_norms() {
    let s = standard::<Q>();
    assert_eq!(s.inner(&s.omega, &s.omega), q(3, 1));
    assert_eq!(s.inner(&s.re_omega, &s.re_omega), q(4, 1));
    assert_eq!(s.inner(&s.re_omega, &s.im_omega), q(0, 1));
    assert_eq!(s.star(&s.omega), s.omega.wedge(&s.omega).scale(&q(1, 2)));
    assert_eq!(s.star(&s.re_omega), s.im_omega);
    assert_eq!(s.vol, Form::e(6, &[1, 2, 3, 4, 5, 6]));
}
