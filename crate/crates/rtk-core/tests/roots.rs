use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;
use rtk_core::roots::{
    ambient_fundamental_weights, ambient_simple_roots, build_root_datum, cartan_matrix, Family,
    RootDatum, RootError, SimpleType, Weight,
};

fn ty(s: &str) -> SimpleType {
    s.parse().unwrap()
}

fn datum(s: &str) -> RootDatum {
    RootDatum::new(ty(s))
}

fn w(c: &[i64]) -> Weight {
    Weight::new(c.to_vec())
}

fn all_types_up_to(rank: usize) -> Vec<SimpleType> {
    let mut out = Vec::new();
    for n in 1..=rank {
        for f in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
            if let Ok(t) = SimpleType::new(f, n) {
                if t.family() == f && !out.contains(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn closure_orbit(d: &RootDatum, v: &Weight) -> HashSet<Weight> {
    let mut seen = HashSet::from([v.clone()]);
    let mut stack = vec![v.clone()];
    while let Some(x) = stack.pop() {
        for i in 1..=d.rank() {
            let y = d.reflect(i, &x).unwrap();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

#[test]
fn rank_validation() {
    assert!(matches!(build_root_datum(Family::B, 1), Err(RootError::InvalidRank { .. })));
    assert!(matches!(build_root_datum(Family::E, 5), Err(RootError::InvalidRank { .. })));
    assert!(matches!(build_root_datum(Family::F, 3), Err(RootError::InvalidRank { .. })));
    assert!(matches!(build_root_datum(Family::G, 3), Err(RootError::InvalidRank { .. })));
    assert!(matches!(build_root_datum(Family::A, 0), Err(RootError::InvalidRank { .. })));
    assert_eq!(SimpleType::new(Family::D, 3).unwrap(), ty("A3"));
    assert!("X3".parse::<SimpleType>().is_err());
}

#[test]
fn small_examples() {
    let a1 = datum("A1");
    assert_eq!(a1.positive_roots().len(), 1);
    assert_eq!(a1.cartan(), &[vec![2]]);
    let g2 = datum("G2");
    assert_eq!(g2.positive_roots().len(), 6);
    assert_eq!(g2.cartan(), &[vec![2, -1], vec![-3, 2]]);
    assert_eq!(datum("E8").positive_roots().len(), 120);
}

#[test]
fn positive_root_counts() {
    let expect = |t: SimpleType| -> usize {
        let n = t.rank();
        match t.family() {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => [36, 63, 120][n - 6],
            Family::F => 24,
            Family::G => 6,
        }
    };
    for t in all_types_up_to(9) {
        assert_eq!(RootDatum::new(t).positive_roots().len(), expect(t), "{t}");
    }
}

#[test]
fn weyl_group_orders() {
    let cases = [
        ("A1", 2u64),
        ("A4", 120),
        ("B3", 48),
        ("C4", 384),
        ("D4", 192),
        ("G2", 12),
        ("F4", 1152),
        ("E6", 51840),
        ("E7", 2903040),
        ("E8", 696729600),
    ];
    for (t, n) in cases {
        assert_eq!(datum(t).weyl_group_order(), &BigInt::from(n), "{t}");
    }
}

#[test]
fn cartan_matches_ambient_realization() {
    for t in all_types_up_to(8) {
        let (simple, scale) = ambient_simple_roots(t);
        let form = |x: &[Rational64], y: &[Rational64]| -> Rational64 {
            scale * x.iter().zip(y).map(|(a, b)| a * b).sum::<Rational64>()
        };
        let a = cartan_matrix(t);
        let n = t.rank();
        let mut longest = Rational64::from(0);
        for i in 0..n {
            let l = form(&simple[i], &simple[i]);
            if l > longest {
                longest = l;
            }
            for j in 0..n {
                let v = Rational64::from(2) * form(&simple[i], &simple[j]) / form(&simple[j], &simple[j]);
                assert_eq!(v, Rational64::from(a[i][j]), "{t} ({i},{j})");
            }
        }
        assert_eq!(longest, Rational64::from(2), "{t} long roots have squared length 2");
        let fw = ambient_fundamental_weights(t);
        for i in 0..n {
            for j in 0..n {
                let v = Rational64::from(2) * form(&fw[i], &simple[j]) / form(&simple[j], &simple[j]);
                let e = if i == j { 1 } else { 0 };
                assert_eq!(v, Rational64::from(e), "{t} (ω{}, α{}∨)", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn positive_roots_sum_to_two_rho() {
    for t in all_types_up_to(8) {
        let d = RootDatum::new(t);
        let mut s = Weight::zero(t.rank());
        for r in d.positive_roots_omega() {
            s = &s + r;
        }
        assert_eq!(s, d.rho().scale(2), "{t}");
    }
}

#[test]
fn reflection_examples() {
    let a2 = datum("A2");
    assert_eq!(a2.reflect(1, &w(&[1, 0])).unwrap(), w(&[-1, 1]));
    let c2 = datum("C2");
    assert_eq!(c2.reflect(2, &w(&[0, 1])).unwrap(), w(&[2, -1]));
    for t in all_types_up_to(8) {
        let d = RootDatum::new(t);
        for i in 1..=t.rank() {
            assert!(d.reflect(i, &Weight::zero(t.rank())).unwrap().is_zero());
        }
    }
    assert!(matches!(a2.reflect(0, &w(&[1, 0])), Err(RootError::IndexOutOfRange { .. })));
    assert!(matches!(a2.reflect(3, &w(&[1, 0])), Err(RootError::IndexOutOfRange { .. })));
}

#[test]
fn dominant_representative_examples() {
    let (v, s) = datum("A2").dominant_representative(&w(&[-1, 1])).unwrap();
    assert_eq!(v, w(&[1, 0]));
    assert_eq!(s, BTreeSet::from([2]));
    let (v, s) = datum("B2").dominant_representative(&w(&[0, 0])).unwrap();
    assert!(v.is_zero());
    assert_eq!(s, BTreeSet::from([1, 2]));
    let a3 = datum("A3");
    for x in a3.orbit(&w(&[0, 0, 1])).unwrap() {
        let (v, s) = a3.dominant_representative(&x).unwrap();
        assert_eq!(v, w(&[0, 0, 1]));
        assert_eq!(s, BTreeSet::from([1, 2]));
    }
}

#[test]
fn orbit_size_examples() {
    assert_eq!(datum("E8").orbit_size(&Weight::fundamental(8, 8)).unwrap(), BigInt::from(240));
    for n in 1..=7 {
        let d = RootDatum::new(SimpleType::new(Family::A, n).unwrap());
        assert_eq!(d.orbit_size(&Weight::zero(n)).unwrap(), BigInt::from(1));
    }
    assert_eq!(datum("A3").orbit_size(&w(&[0, 1, 0])).unwrap(), BigInt::from(6));
    assert!(matches!(datum("A3").orbit_size(&w(&[0, -1, 0])), Err(RootError::NotDominant(_))));
}

#[test]
fn orbit_size_matches_closure() {
    for t in all_types_up_to(4) {
        let d = RootDatum::new(t);
        let n = t.rank();
        // every 0/1 pattern, plus 2ρ
        for mask in 0..(1u32 << n) {
            let v = Weight::new((0..n).map(|i| ((mask >> i) & 1) as i64).collect());
            let brute = closure_orbit(&d, &v);
            assert_eq!(d.orbit_size(&v).unwrap(), BigInt::from(brute.len()), "{t} {v}");
            let listed: HashSet<Weight> = d.orbit(&v).unwrap().into_iter().collect();
            assert_eq!(listed, brute, "{t} {v}");
        }
        let two_rho = d.rho().scale(2);
        assert_eq!(d.orbit_size(&two_rho).unwrap(), d.weyl_group_order().clone());
    }
}

#[test]
fn highest_root_orbit_counts_long_roots() {
    // the highest root is long; its orbit is the set of long roots
    let e8 = datum("E8");
    let theta = e8.root_to_weight(e8.highest_root());
    assert_eq!(theta, Weight::fundamental(8, 8));
    let f4 = datum("F4");
    let theta = f4.root_to_weight(f4.highest_root());
    assert_eq!(f4.orbit_size(&theta).unwrap(), BigInt::from(24));
}

#[test]
fn longest_element_examples() {
    assert_eq!(datum("A4").longest_element_action(&Weight::fundamental(4, 1)), Weight::fundamental(4, 4));
    assert_eq!(datum("E6").longest_element_action(&Weight::fundamental(6, 1)), Weight::fundamental(6, 6));
    let f4 = datum("F4");
    let v = w(&[3, -1, 2, 5]);
    assert_eq!(f4.longest_element_action(&v), v);
}

#[test]
fn longest_element_matches_dominant_of_negative() {
    // -w0 λ is the dominant conjugate of -λ
    for t in all_types_up_to(8) {
        let d = RootDatum::new(t);
        let n = t.rank();
        for i in 1..=n {
            let om = Weight::fundamental(n, i);
            let (neg_dom, _) = d.dominant_representative(&-&om).unwrap();
            assert_eq!(d.longest_element_action(&om), neg_dom, "{t} ω{i}");
        }
        let perm = d.minus_w0_permutation();
        let mut img: Vec<usize> = perm.values().copied().collect();
        img.sort_unstable();
        assert_eq!(img, (1..=n).collect::<Vec<_>>());
    }
}

#[test]
fn coxeter_numbers() {
    for (t, h) in [("A6", 7), ("B4", 8), ("C3", 6), ("D5", 8), ("E6", 12), ("E7", 18), ("E8", 30), ("F4", 12), ("G2", 6)] {
        assert_eq!(datum(t).coxeter_number(), h, "{t}");
    }
}

#[test]
fn parsing_round_trip() {
    let v: Weight = "1,0,-2".parse().unwrap();
    assert_eq!(v, w(&[1, 0, -2]));
    assert_eq!(v.to_string(), "(1,0,-2)");
    assert_eq!(v.to_string().parse::<Weight>().unwrap(), v);
    assert_eq!(ty("e7").to_string(), "E7");
}

fn type_strategy() -> impl Strategy<Value = SimpleType> {
    prop::sample::select(all_types_up_to(8))
}

proptest! {
    #[test]
    fn reflections_are_involutions(t in type_strategy(), seed in prop::collection::vec(-5i64..=5, 8), i in 1usize..=8) {
        let d = RootDatum::new(t);
        let n = t.rank();
        let i = (i - 1) % n + 1;
        let v = Weight::new(seed[..n].to_vec());
        let once = d.reflect(i, &v).unwrap();
        prop_assert_eq!(d.reflect(i, &once).unwrap(), v);
    }

    #[test]
    fn longest_element_is_involution(t in type_strategy(), seed in prop::collection::vec(-5i64..=5, 8)) {
        let d = RootDatum::new(t);
        let v = Weight::new(seed[..t.rank()].to_vec());
        prop_assert_eq!(d.longest_element_action(&d.longest_element_action(&v)), v);
    }

    #[test]
    fn dominant_representative_is_conjugate(t in type_strategy(), seed in prop::collection::vec(-4i64..=4, 8)) {
        let d = RootDatum::new(t);
        let v = Weight::new(seed[..t.rank()].to_vec());
        let (dom, stab) = d.dominant_representative(&v).unwrap();
        prop_assert!(dom.is_dominant());
        let (again, _) = d.dominant_representative(&dom).unwrap();
        prop_assert_eq!(&again, &dom);
        for i in 1..=t.rank() {
            prop_assert_eq!(stab.contains(&i), dom.at(i) == 0);
        }
        // the shift recorded alongside is a root-lattice vector linking v to dom
        let (dom2, shift) = d.dominant_with_shift(&v);
        prop_assert_eq!(&dom2, &dom);
        prop_assert_eq!(&(&v + &d.root_to_weight(&shift)), &dom);
        prop_assert!(shift.iter().all(|&c| c >= 0));
    }
}
