use cayley_core::exterior::{hodge, pullback, top, Form, Hodge, Metric, Orientation};
use cayley_core::random::{self, TestRng};
use cayley_core::scalar::{q, Q};
use cayley_core::Matrix;
use proptest::prelude::*;
use rand::Rng;

fn sign(e: usize) -> Q {
    q(if e % 2 == 0 { 1 } else { -1 }, 1)
}

/// `g = AᵀA` for an integer matrix `A` with nonzero determinant, so that
/// `√det g = |det A|` is rational.
fn square_metric(rng: &mut TestRng, n: usize) -> Metric<Q> {
    let a = random::gl_plus(rng, n, 2);
    Metric::new(a.transpose().mul(&a)).expect("symmetric")
}

fn setup(seed: u64) -> (TestRng, usize) {
    let mut rng = random::rng(seed);
    let n = rng.gen_range(2..=6);
    (rng, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let (k, l) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        let a = random::form(&mut rng, n, k, 3);
        let b = random::form(&mut rng, n, l, 3);
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&sign(k * l)));
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let [a, b, c] = [0, 0, 0].map(|_| {
            let k = rng.gen_range(0..=2);
            random::form(&mut rng, n, k, 3)
        });
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn wedge_is_bilinear(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let (k, l) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        let a = random::form(&mut rng, n, k, 3);
        let a2 = random::form(&mut rng, n, k, 3);
        let b = random::form(&mut rng, n, l, 3);
        let c = random::rational(&mut rng, 5, 3);
        let lhs = (&a.scale(&c) + &a2).wedge(&b);
        prop_assert_eq!(lhs, &a.wedge(&b).scale(&c) + &a2.wedge(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interior_is_an_antiderivation(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let k = rng.gen_range(1..=n);
        let l = rng.gen_range(1..=n);
        let a = random::form(&mut rng, n, k, 3);
        let b = random::form(&mut rng, n, l, 3);
        let v = random::vector(&mut rng, n, 3);
        let lhs = a.wedge(&b).interior(&v);
        let rhs = &a.interior(&v).wedge(&b) + &a.wedge(&b.interior(&v)).scale(&sign(k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn double_hodge_star_is_a_sign(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let k = rng.gen_range(0..=n);
        let g = square_metric(&mut rng, n);
        let a = random::form(&mut rng, n, k, 3);
        let h = Hodge::new(&g, Orientation::Positive).unwrap();
        prop_assert_eq!(h.star(&h.star(&a)), a.scale(&sign(k * (n - k))));
    }

    #[test]
    fn hodge_star_pairs_with_the_inner_product(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let k = rng.gen_range(0..=n);
        let g = square_metric(&mut rng, n);
        let a = random::form(&mut rng, n, k, 3);
        let b = random::form(&mut rng, n, k, 3);
        let h = Hodge::new(&g, Orientation::Positive).unwrap();
        let vol = g.volume_coeff(Orientation::Positive).unwrap();
        prop_assert_eq!(top(&a.wedge(&h.star(&b))), h.inner(&a, &b) * vol);
    }

    #[test]
    fn hodge_pairing_is_symmetric(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let k = rng.gen_range(0..=n);
        let g = square_metric(&mut rng, n);
        let a = random::form(&mut rng, n, k, 3);
        let b = random::form(&mut rng, n, k, 3);
        let h = Hodge::new(&g, Orientation::Positive).unwrap();
        prop_assert_eq!(a.wedge(&h.star(&b)), b.wedge(&h.star(&a)));
    }

    #[test]
    fn pullback_commutes_with_interior_through_the_inverse(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let k = rng.gen_range(1..=n);
        let a = random::gl_plus(&mut rng, n, 2);
        let f = random::form(&mut rng, n, k, 3);
        let v = random::vector(&mut rng, n, 3);
        let w = a.inverse().unwrap().mul_vec(&v);
        prop_assert_eq!(pullback(&a, &f.interior(&v)).unwrap(), pullback(&a, &f).unwrap().interior(&w));
    }

    #[test]
    fn orientation_flips_the_hodge_star(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let k = rng.gen_range(0..=n);
        let g = square_metric(&mut rng, n);
        let a = random::form(&mut rng, n, k, 3);
        let pos = hodge(&a, &g, Orientation::Positive).unwrap();
        prop_assert_eq!(hodge(&a, &g, Orientation::Negative).unwrap(), -pos);
    }

    #[test]
    fn pullback_is_contravariant(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let k = rng.gen_range(0..=n);
        let a = random::gl_plus(&mut rng, n, 2);
        let b = random::gl_plus(&mut rng, n, 2);
        let f = random::form(&mut rng, n, k, 3);
        let lhs = pullback(&a.mul(&b), &f).unwrap();
        prop_assert_eq!(lhs, pullback(&b, &pullback(&a, &f).unwrap()).unwrap());
    }

    #[test]
    fn pullback_is_multiplicative(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let (k, l) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        let a = random::gl_plus(&mut rng, n, 2);
        let x = random::form(&mut rng, n, k, 3);
        let y = random::form(&mut rng, n, l, 3);
        let lhs = pullback(&a, &x.wedge(&y)).unwrap();
        prop_assert_eq!(lhs, pullback(&a, &x).unwrap().wedge(&pullback(&a, &y).unwrap()));
    }

    #[test]
    fn pullback_scales_top_forms_by_the_determinant(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let a = random::gl_plus(&mut rng, n, 2);
        let vol = Form::<Q>::from_coeffs(n, n, vec![q(1, 1)]);
        prop_assert_eq!(top(&pullback(&a, &vol).unwrap()), a.det());
    }

    #[test]
    fn sharp_inverts_flat(seed in any::<u64>()) {
        let (mut rng, n) = setup(seed);
        let g = square_metric(&mut rng, n);
        let v = random::vector(&mut rng, n, 3);
        prop_assert_eq!(g.sharp(&g.flat(&v)).unwrap(), v.clone());
        let gamma = random::form(&mut rng, n, 1, 3);
        prop_assert_eq!(g.flat(&g.sharp(&gamma).unwrap()), gamma);
    }
}

#[test]
fn dimension_mismatches_are_reported() {
    let a = Form::<Q>::e(4, &[1]);
    let b = Form::<Q>::e(5, &[2]);
    assert!(cayley_core::exterior::wedge(&a, &b).is_err());
    assert!(cayley_core::exterior::interior(&[q(1, 1)], &a).is_err());
    assert!(pullback(&Matrix::<Q>::identity(3), &a).is_err());
}

#[test]
fn singular_pullback_is_rejected() {
    let a = Matrix::<Q>::zeros(3, 3);
    assert!(pullback(&a, &Form::e(3, &[1])).is_err());
}
