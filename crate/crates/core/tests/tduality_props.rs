use mirrorcalc::lattice::{saturate, LatVec, Sublattice};
use mirrorcalc::tduality::{
    annihilator, double_dual, leray_filtration_check, leray_level, t_dual_cycle, PureCycle, TDualityError,
};
use mirrorcalc::Int;
use mirrorcalc_testkit::*;
use num::Zero;
use proptest::prelude::*;
use rand::Rng;

fn dot(a: &LatVec, b: &LatVec) -> Int {
    a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum()
}

/// All vectors of `ℤⁿ` with entries in `[-r, r]`.
fn box_vectors(n: usize, r: i64) -> Vec<LatVec> {
    let mut out = vec![LatVec(Vec::new())];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-r..=r).map(move |x| {
                    let mut w = v.0.clone();
                    w.push(Int::from(x));
                    LatVec(w)
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn annihilator_is_an_involution(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let k = r.gen_range(0..=n);
        let s = random_saturated(&mut r, n, k);
        let a = annihilator(&s).unwrap();
        prop_assert_eq!(a.rank() + s.rank(), n);
        prop_assert!(a.is_saturated());
        for x in a.basis() {
            for y in s.basis() {
                prop_assert!(dot(x, y).is_zero());
            }
        }
        prop_assert!(double_dual(&s).unwrap().same_lattice(&s));
    }

    /// Box-search oracle: every small vector orthogonal to `S` lies in `Ann(S)`.
    #[test]
    fn annihilator_contains_every_orthogonal_vector(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let k = r.gen_range(0..=n);
        let s = random_saturated(&mut r, n, k);
        let a = annihilator(&s).unwrap();
        for x in box_vectors(n, 2) {
            let orth = s.basis().iter().all(|y| dot(&x, y).is_zero());
            prop_assert_eq!(orth, a.contains(&x), "{:?}", x);
        }
    }

    #[test]
    fn annihilator_of_a_sum_is_the_intersection(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let (k1, k2) = (r.gen_range(0..=n), r.gen_range(0..=n));
        let s1 = random_saturated(&mut r, n, k1);
        let s2 = random_saturated(&mut r, n, k2);
        let sum = saturate(&s1.sum(&s2).unwrap()).unwrap();
        let lhs = annihilator(&sum).unwrap();
        let rhs = annihilator(&s1).unwrap().intersection(&annihilator(&s2).unwrap()).unwrap();
        prop_assert!(lhs.same_lattice(&rhs));
    }

    #[test]
    fn annihilator_reverses_inclusion(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let k = r.gen_range(0..=n);
        let big = random_saturated(&mut r, n, k);
        let keep = r.gen_range(0..=big.rank());
        let small = Sublattice::new(n, big.basis()[..keep].to_vec()).unwrap();
        prop_assert!(small.is_saturated());
        let (a_big, a_small) = (annihilator(&big).unwrap(), annihilator(&small).unwrap());
        for x in a_big.basis() {
            prop_assert!(a_small.contains(x));
        }
    }

    #[test]
    fn t_dual_degree_and_leray_level(seed in any::<u64>(), n in 1usize..=6, mult in 1u64..=5) {
        let mut r = rng(seed);
        let rank = r.gen_range(0..=n);
        let s = random_saturated(&mut r, n, rank);
        let w = PureCycle::new(n, s, n - rank, mult).unwrap();
        let d = t_dual_cycle(&w).unwrap();
        prop_assert_eq!(d.degree, 2 * (n - rank));
        prop_assert_eq!(d.rank_hint, mult);
        prop_assert_eq!(leray_level(&w), n - rank);
        prop_assert!(leray_filtration_check(&[w], &[d]).unwrap());
    }
}

#[test]
fn anchor_cases() {
    for n in 1..=6 {
        let f = t_dual_cycle(&PureCycle::fiber_class(n)).unwrap();
        assert_eq!(f.degree, 0);
        assert_eq!(f.dual_lattice.rank(), 0);
        let s = t_dual_cycle(&PureCycle::section(n, 1).unwrap()).unwrap();
        assert_eq!(s.degree, 2 * n);
        assert!(s.dual_lattice.same_lattice(&Sublattice::full(n)));
        let m = t_dual_cycle(&PureCycle::section(n, 3).unwrap()).unwrap();
        assert_eq!(m.rank_hint, 3);
    }
}

#[test]
fn unsaturated_input_is_rejected() {
    let s = Sublattice::new(2, vec![LatVec(vec![Int::from(2), Int::from(0)])]).unwrap();
    assert_eq!(annihilator(&s), Err(TDualityError::NotSaturated));
    assert_eq!(PureCycle::new(2, s, 1, 1), Err(TDualityError::NotSaturated));
    assert!(matches!(PureCycle::section(3, 0), Err(TDualityError::ZeroMultiplicity)));
}
