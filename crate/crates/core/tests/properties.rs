mod common;

use num_traits::One;
use proptest::prelude::*;

use toric_mirror::algebra::series::reverse_shift;
use toric_mirror::algebra::{ratio, GradedQSeries, Poly, Rational, RationalFunction};
use toric_mirror::equivariant::{LambdaMode, Localization};
use toric_mirror::hypergeometric::build_psi;
use toric_mirror::toric::Toric;

use common::*;

const BOUND: u64 = 5;

fn series_strategy(constant: Option<i64>) -> impl Strategy<Value = GradedQSeries<Rational>> {
    let n = small_degrees(BOUND as i64).len() - 1;
    prop::collection::vec(prop::option::weighted(0.6, (-9i64..=9, 1i64..=4)), n).prop_map(move |coeffs| {
        let g = small_grading(BOUND);
        let constant = constant.map(|c| (vec![0, 0], ratio(c, 1)));
        let terms = small_degrees(BOUND as i64)
            .into_iter()
            .skip(1)
            .zip(coeffs)
            .filter_map(|(d, c)| c.map(|(a, b)| (d, ratio(a, b))));
        GradedQSeries::from_terms(g, constant.into_iter().chain(terms))
    })
}

fn geometry(i: usize) -> (&'static str, Toric) {
    geometries().swap_remove(i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exp_log_round_trip(s in series_strategy(None)) {
        let one = Rational::one();
        prop_assert_eq!(s.exp(&one).unwrap().log(&one).unwrap(), s.clone());
        let u = s.exp(&one).unwrap();
        prop_assert_eq!(u.log(&one).unwrap().exp(&one).unwrap(), u);
    }

    #[test]
    fn shift_reversion_is_two_sided(a in series_strategy(None), b in series_strategy(None)) {
        let phi = vec![a, b];
        let psi = reverse_shift(&phi).unwrap();
        for i in 0..2 {
            prop_assert!(psi[i].substitute_shift(&phi).unwrap().add(&phi[i]).unwrap().is_empty());
            prop_assert!(phi[i].substitute_shift(&psi).unwrap().add(&psi[i]).unwrap().is_empty());
        }
    }

    #[test]
    fn series_arithmetic_associates(a in series_strategy(Some(1)), b in series_strategy(None), c in series_strategy(Some(-2))) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        let distributed = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), distributed);
    }

    #[test]
    fn rational_function_field_laws(coeffs in prop::collection::vec(-5i64..=5, 9), shift in 1i64..=4) {
        let nv = 3;
        let lin = |c: &[i64]| Poly::linear(nv, ratio(shift, 1), &[(0, ratio(c[0], 1)), (1, ratio(c[1], 1)), (2, ratio(c[2], 1))]);
        let (p, q, r) = (lin(&coeffs[0..3]), lin(&coeffs[3..6]), lin(&coeffs[6..9]));
        let a = RationalFunction::new(p.clone(), q.clone()).unwrap();
        let b = RationalFunction::new(q.clone(), r.clone()).unwrap();
        let c = RationalFunction::from_poly(r.clone());
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.div(&b).unwrap().mul(&b), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn integrals_are_polynomial(g in 0usize..6, seed in any::<u64>()) {
        let (name, toric) = geometry(g);
        let loc = Localization::new(toric, LambdaMode::Symbolic);
        let r = check_integration(&loc, &mut rng(seed), 4);
        prop_assert!(r.is_ok(), "{}: {:?}", name, r);
    }

    #[test]
    fn integrals_vanish_below_top_degree(g in 0usize..6, seed in any::<u64>()) {
        let (name, toric) = geometry(g);
        let loc = Localization::new(toric, LambdaMode::Symbolic);
        let r = check_below_top(&loc, &mut rng(seed), 4);
        prop_assert!(r.is_ok(), "{}: {:?}", name, r);
    }

    #[test]
    fn line_mode_agrees_with_symbolic(seed in any::<u64>()) {
        let r = check_line_mode(&p2(), 3, seed);
        prop_assert!(r.is_ok(), "{:?}", r);
        let r = check_line_mode(&x2(), 2, seed);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    /// Ψ has degree 0 with deg q^d = ⟨w, d⟩, so its d-th coefficient is
    /// homogeneous of degree −⟨w, d⟩ at every fixed point, symbolically and
    /// on any line.
    #[test]
    fn psi_is_homogeneous(g in 0usize..6, seed in any::<u64>(), symbolic in any::<bool>()) {
        let (name, toric) = geometry(g);
        let mode = if symbolic { LambdaMode::Symbolic } else { LambdaMode::Specialized(seed) };
        let loc = Localization::new(toric.clone(), mode);
        let psi = build_psi(&loc, &toric, 2).unwrap();
        for (d, c) in psi.terms() {
            let expected = -toric.lattice.degree_of_q(d).unwrap();
            for (a, v) in c.values.iter().enumerate() {
                if !v.is_zero() {
                    prop_assert_eq!(homogeneous_degree(v), Some(expected), "{} d={:?} at {}", name, d, toric.fps[a].label());
                }
            }
        }
    }
}
