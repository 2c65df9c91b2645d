use cayley_core::error::Error;
use cayley_core::presets::{self, Preset};
use cayley_core::scalar::{q, Q};
use cayley_core::topology::lattice::integer_kernel;
use cayley_core::topology::{
    admissibility_report, chern_scan, gysin_tower, CheckStatus, ChernCandidate, IntersectionLattice, KahlerVector, ScanFilters,
};
use num::{Integer, Zero};
use proptest::prelude::*;

fn symmetric_form(entries: &[i64], m: usize) -> Vec<Vec<Q>> {
    let mut form = vec![vec![q(0, 1); m]; m];
    let mut it = entries.iter().cycle();
    for i in 0..m {
        for j in i..m {
            let v = q(*it.next().unwrap(), 1);
            form[i][j] = v.clone();
            form[j][i] = v;
        }
    }
    form
}

fn lattice_and_kahler() -> impl Strategy<Value = (IntersectionLattice, Vec<i64>)> {
    (2usize..=5).prop_flat_map(|m| {
        (prop::collection::vec(-3i64..=3, m * (m + 1) / 2), prop::collection::vec(-4i64..=4, m)).prop_map(move |(e, k)| {
            (IntersectionLattice::new(symmetric_form(&e, m), Vec::new()).unwrap(), k)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scan_output_is_orthogonal_and_has_full_kernel_rank((l, k) in lattice_and_kahler()) {
        prop_assume!(k.iter().any(|&x| x != 0));
        let kv = KahlerVector::new(k.clone()).unwrap();
        let filters = ScanFilters { min_independent: 1, ..ScanFilters::default() };
        match chern_scan(&l, &kv, &filters) {
            Ok(res) => {
                prop_assert_eq!(res.kernel_rank(), l.rank() - 1);
                for v in res.kernel_basis.iter().chain(res.candidates.iter().map(|c| &c.a)) {
                    prop_assert!(l.pairing(v, &k).unwrap().is_zero());
                }
                for c in &res.candidates {
                    prop_assert_eq!(c.a.iter().fold(0i64, |g, x| g.gcd(x)), 1);
                }
            }
            Err(Error::DegenerateKahler) => {
                prop_assert!(l.apply(&k).unwrap().iter().all(Zero::is_zero));
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn integer_kernel_vectors_annihilate_the_rows(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 4), 1..=3)) {
        let basis = integer_kernel(&rows, 4).unwrap();
        for v in &basis {
            for r in &rows {
                prop_assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
        }
    }
}

#[test]
fn del_pezzo_presets_pass_the_necessary_conditions() {
    for name in ["dP6", "dP7"] {
        let Preset::Lattice(p) = presets::load(name, None).unwrap() else { panic!("{name} is a lattice preset") };
        let res = chern_scan(&p.lattice, &p.kahler, &ScanFilters::default()).unwrap();
        let (a, b) = res.independent_pair().expect("two independent candidates");
        let rep = admissibility_report(&p.lattice, &p.kahler, &[a, b], &p.link);
        assert!(rep.passed(), "{name}: {rep:?}");
        assert_eq!(rep.status("massey"), Some(CheckStatus::Vacuous));
    }
}

#[test]
fn weighted_projective_preset_clears_the_orbifold_denominator() {
    for k in 2..=8 {
        let Preset::Lattice(p) = presets::load("wp112k", Some(k)).unwrap() else { panic!("lattice preset") };
        let res = chern_scan(&p.lattice, &p.kahler, &ScanFilters::default()).unwrap();
        assert_eq!(res.clearing_factor, k);
        assert_eq!(res.kernel_rank(), 2);
    }
}

#[test]
fn small_resolution_preset_reproduces_the_betti_table() {
    for p in 2..=10 {
        let Preset::Gysin(g) = presets::load("cAp", Some(p)).unwrap() else { panic!("gysin preset") };
        let stages: Vec<Vec<i64>> = g.stages.iter().map(|s| s.ranks.clone()).collect();
        let tower = gysin_tower(g.base_betti.clone(), &stages).unwrap();
        let m = tower.last().unwrap();
        assert_eq!((m.get(2), m.get(3)), (p - 2, 2 * p - 1));
        assert_eq!(m.euler_characteristic(), 0);
    }
    assert!(presets::load("cAp", Some(1)).is_err());
}

#[test]
fn unknown_presets_and_bad_candidates_are_rejected() {
    assert!(presets::load("dP9", None).is_err());
    assert!(ChernCandidate::new(vec![0, 0]).is_err());
    assert!(KahlerVector::new(vec![0, 0, 0]).is_err());
}
