//! The hypergeometric series Ψ in localized form.

use crate::algebra::ratfunc::RationalFunction;
use crate::algebra::rational::{rat, Rational};
use crate::algebra::series::GradedQSeries;
use crate::equivariant::{ClassAlgebra, Factor, Localization};
use crate::error::{Error, Result};
use crate::toric::Toric;

/// Numerator and denominator factors of the q^d coefficient:
/// `Π_a Π_{m=1}^{L_a}(v_a+mħ) · Π_j Π_{m≤0}(u_j+mħ)/Π_{m≤D_j}(u_j+mħ)`.
pub fn psi_factors(toric: &Toric, d: &[i64]) -> Result<(Vec<Factor>, Vec<Factor>)> {
    let mut num = Vec::new();
    let mut den = Vec::new();
    for (a, &la) in toric.input.l_vals(d).iter().enumerate() {
        if la < 0 {
            return Err(Error::BundleNegative(format!("L_{}({d:?}) = {la}", a + 1)));
        }
        num.extend((1..=la).map(|m| Factor::V(a, m)));
    }
    for (j, &dj) in toric.input.d_vals(d).iter().enumerate() {
        if dj >= 0 {
            den.extend((1..=dj).map(|m| Factor::U(j, m)));
        } else {
            num.extend((dj + 1..=0).map(|m| Factor::U(j, m)));
        }
    }
    Ok((num, den))
}

/// Ψ truncated at ⟨t*, d⟩ ≤ bound, with coefficients in any class algebra.
pub fn build_psi<A: ClassAlgebra>(alg: &A, toric: &Toric, bound: u64) -> Result<GradedQSeries<A::Elem>> {
    let mut out = GradedQSeries::zero(toric.lattice.grading(bound));
    for d in toric.lattice.enumerate(bound)? {
        let (num, den) = psi_factors(toric, &d)?;
        out.add_term(d, alg.product(&rat(1), &num, &den)?);
    }
    Ok(out)
}

/// The closed form of Ψ_α's q^d coefficient, for any d.
pub fn psi_alpha(loc: &Localization, alpha: usize, d: &[i64]) -> Result<RationalFunction> {
    let (num, den) = psi_factors(&loc.toric, d)?;
    loc.product_at(alpha, &Rational::from_integer(1.into()), &num, &den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;
    use crate::algebra::ratfunc::product_of_factors;
    use crate::algebra::rational::factorial;
    use crate::algebra::series::Coefficient;
    use crate::equivariant::LambdaMode;
    use crate::toric::ToricInput;

    fn loc(m: Vec<Vec<i64>>, l: Vec<Vec<i64>>) -> Localization {
        let t = vec![rat(1); m.len()];
        let toric = Toric::new(ToricInput::new(m, t, l).unwrap(), None).unwrap();
        Localization::new(toric, LambdaMode::Symbolic)
    }

    #[test]
    fn projective_plane_degree_one() {
        let loc = loc(vec![vec![1, 1, 1]], vec![]);
        let nv = loc.nvars();
        let (l1, l2, l3, h) = (Poly::var(nv, 0), Poly::var(nv, 1), Poly::var(nv, 2), Poly::var(nv, 3));
        let expected = product_of_factors(nv, rat(1), &[], &[h.clone(), &(&l1 - &l2) + &h, &(&l1 - &l3) + &h]).unwrap();
        assert_eq!(psi_alpha(&loc, 0, &[1]).unwrap(), expected);
        let psi = build_psi(&loc, &loc.toric, 3).unwrap();
        assert!(psi.coefficient(&[0]).unwrap().is_one_class());
    }

    trait OneCheck {
        fn is_one_class(&self) -> bool;
    }

    impl OneCheck for crate::equivariant::LocalizedClass {
        fn is_one_class(&self) -> bool {
            self.values.iter().all(|v| v.is_one())
        }
    }

    #[test]
    fn quintic_degree_one_limit() {
        let loc = loc(vec![vec![1; 5]], vec![vec![5]]);
        let nv = loc.nvars();
        let z = psi_alpha(&loc, 0, &[1]).unwrap();
        let mut at = vec![rat(0); nv];
        at[loc.toric.vars.hbar()] = rat(1);
        // numerator Π(5λ₁ − λ′₁ + mħ) → 5!, denominator ħ·Π(λ₁ − λ_s + ħ) → 1
        assert_eq!(z.evaluate(&at).unwrap(), rat(120));
        for d in 0..4i64 {
            let v = psi_alpha(&loc, 2, &[d]).unwrap().evaluate(&at).unwrap();
            let expected = Rational::from_integer(factorial(5 * d as u64) / factorial(d as u64).pow(5));
            assert_eq!(v, expected);
        }
    }

    #[test]
    fn support_in_dual_orthant() {
        let loc = loc(vec![vec![1, 1, 0, -1, -1], vec![0, 0, 1, 1, 1]], vec![]);
        let psi = build_psi(&loc, &loc.toric, 6).unwrap();
        for (d, c) in psi.terms() {
            for a in 0..loc.n_points() {
                if !loc.toric.in_dual_orthant(a, d) {
                    assert!(c.values[a].is_zero(), "{d:?} at {a}");
                }
            }
        }
        assert!(!Coefficient::is_zero(psi.coefficient(&[1, 0]).unwrap()));
    }

    #[test]
    fn negative_bundle_degree() {
        let loc = loc(vec![vec![1, 1]], vec![]);
        let toric = Toric::new(ToricInput::new(vec![vec![1, 1]], vec![rat(1)], vec![vec![1]]).unwrap(), None).unwrap();
        assert!(matches!(psi_factors(&toric, &[-1]), Err(Error::BundleNegative(_))));
        assert!(psi_factors(&loc.toric, &[-1]).is_ok());
    }
}
