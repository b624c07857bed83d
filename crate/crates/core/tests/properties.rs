//! Randomized invariants.

mod common;

use common::*;
use proptest::prelude::*;
use quiverlab::hall::{bar_involution, convolve, divided_power_element, HallElement};
use quiverlab::partition::{default_partition, monomial_of};
use quiverlab::reps::{classify, degenerates, end_and_orbit_dim, realize};
use quiverlab::{CountPolynomial, DimVector, Engine, LaurentPoly, RepClass};

const SPECS: [&str; 5] = ["1->2,2->3", "2->1,2->3", "1->0,2->0,3->0", "0->1,2->0,3->0", "1->2,3->2,3->4"];

fn dimvector(n: usize) -> impl Strategy<Value = DimVector> {
    prop::collection::vec(0u32..4, n).prop_map(DimVector)
}

fn mults(len: usize, max: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max, len)
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i32..6, -5i64..5), 0..5).prop_map(LaurentPoly::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_form_is_bilinear(s in 0..SPECS.len(), a in dimvector(4), b in dimvector(4), c in dimvector(4)) {
        let q = quiver(SPECS[s]);
        let n = q.vertex_count();
        let cut = |d: &DimVector| DimVector(d.0[..n].to_vec());
        let (a, b, c) = (cut(&a), cut(&b), cut(&c));
        let sum = DimVector(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
        prop_assert_eq!(
            q.euler_form(&sum, &c).unwrap(),
            q.euler_form(&a, &c).unwrap() + q.euler_form(&b, &c).unwrap()
        );
        prop_assert_eq!(
            q.euler_form(&c, &sum).unwrap(),
            q.euler_form(&c, &a).unwrap() + q.euler_form(&c, &b).unwrap()
        );
    }

    #[test]
    fn hom_minus_ext_is_euler(s in 0..SPECS.len(), x in mults(12, 2), y in mults(12, 2)) {
        let ar = knit(SPECS[s]);
        let m = RepClass(x[..ar.len()].to_vec());
        let n = RepClass(y[..ar.len()].to_vec());
        let (h, e) = quiverlab::reps::hom_ext_classes(&ar, &m, &n).unwrap();
        prop_assert_eq!(h as i64 - e as i64, ar.quiver().euler_form(&m.dim(&ar), &n.dim(&ar)).unwrap());
    }

    #[test]
    fn classify_inverts_realize(s in 0..SPECS.len(), x in mults(12, 1), p in prop::sample::select(vec![2u32, 3, 5])) {
        let ar = knit(SPECS[s]);
        let m = RepClass(x[..ar.len()].to_vec());
        let rep = realize(&ar, &m, p).unwrap();
        prop_assert_eq!(classify(&ar, &rep).unwrap(), m);
    }

    #[test]
    fn monomial_weights_add_up(s in 0..SPECS.len(), x in mults(12, 2)) {
        let ar = knit(SPECS[s]);
        let m = RepClass(x[..ar.len()].to_vec());
        let ft = monomial_of(&ar, &default_partition(&ar), ar.vertex_order(), &m);
        prop_assert_eq!(ft.weight(ar.quiver()), m.dim(&ar));
        let y = m.direct_sum(&m);
        let ft2 = monomial_of(&ar, &default_partition(&ar), ar.vertex_order(), &y);
        let doubled: Vec<u32> = ft.weights.iter().map(|w| 2 * w).collect();
        prop_assert_eq!(ft2.weights, doubled);
    }

    #[test]
    fn bar_is_an_involution(f in laurent(), g in laurent()) {
        prop_assert_eq!(f.bar().bar(), f.clone());
        prop_assert_eq!((&f * &g).bar(), &f.bar() * &g.bar());
        let fg = &f * &g;
        if !g.is_zero() {
            prop_assert_eq!(fg.div_exact(&g), Some(f.clone()));
        }
    }

    #[test]
    fn interpolation_recovers_polynomials(c in prop::collection::vec(-20i64..20, 1..6)) {
        let poly = CountPolynomial::new(c);
        let points: Vec<(u32, i128)> = [2u32, 3, 5, 7, 11, 13].iter().map(|&p| (p, poly.eval(p as i128))).collect();
        prop_assert_eq!(CountPolynomial::interpolate(&points).unwrap(), poly);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degeneration_is_a_partial_order(s in 0..3usize, d in dimvector(4)) {
        let e = Engine::new(&quiver(SPECS[s])).unwrap();
        let ar = e.ar();
        let d = DimVector(d.0[..ar.quiver().vertex_count()].to_vec());
        let t = e.table(&d).unwrap();
        for a in t.classes.iter() {
            prop_assert!(degenerates(ar, a, a).unwrap());
            for b in t.classes.iter() {
                let ab = degenerates(ar, a, b).unwrap();
                if ab && a != b {
                    prop_assert!(!degenerates(ar, b, a).unwrap());
                    prop_assert!(end_and_orbit_dim(ar, a).0 < end_and_orbit_dim(ar, b).0);
                }
                for c in t.classes.iter() {
                    if ab && degenerates(ar, b, c).unwrap() {
                        prop_assert!(degenerates(ar, a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn convolution_is_associative(i in 0..3usize, j in 0..3usize, k in 0..3usize) {
        let e = Engine::new(&quiver("1->2,2->3")).unwrap();
        let (a, b, c) = (
            divided_power_element(&e, i, 1).unwrap(),
            divided_power_element(&e, j, 1).unwrap(),
            divided_power_element(&e, k, 1).unwrap(),
        );
        let left = convolve(&e, &convolve(&e, &a, &b).unwrap(), &c).unwrap();
        let right = convolve(&e, &a, &convolve(&e, &b, &c).unwrap()).unwrap();
        prop_assert!(left.sub(&right).unwrap().is_zero());
        prop_assert!(convolve(&e, &HallElement::unit(&e), &a).unwrap().sub(&a).unwrap().is_zero());
    }

    #[test]
    fn bar_involution_squares_to_identity(i in 0..3usize, j in 0..3usize, n in 1u32..3) {
        let e = Engine::new(&quiver("1->2,2->3")).unwrap();
        let p = default_partition(e.ar());
        let f = convolve(&e, &divided_power_element(&e, i, n).unwrap(), &divided_power_element(&e, j, 1).unwrap()).unwrap();
        let f = f.scale(&LaurentPoly::from_terms([(1, 2), (-3, 1)]));
        let back = bar_involution(&e, &p, &bar_involution(&e, &p, &f).unwrap()).unwrap();
        prop_assert!(back.sub(&f).unwrap().is_zero());
    }
}
