//! The ħ → ∞ expansion of Ψ to order ħ⁻¹ and the normalization to a series
//! of the form 1 + O(ħ⁻²).

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::hbar::expand_hbar_infinity;
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RationalFunction;
use crate::algebra::rational::{rat, Rational};
use crate::algebra::series::{reverse_shift, Coefficient, Degree, GradedQSeries};
use crate::equivariant::{ClassAlgebra, CohomologyRing, Localization, LocalizedClass, RingElement};
use crate::error::{Error, Result};
use crate::toric::{linalg, Toric};

/// `A + Σ B_i p_i + Σ C_j λ_j + Σ E_a λ′_a`; the λ-parts are `None` when the
/// algebra does not carry equivariant parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Linear {
    pub constant: Rational,
    pub p: Vec<Rational>,
    pub lambda: Option<(Vec<Rational>, Vec<Rational>)>,
}

/// Class algebras whose elements can be expanded at ħ = ∞.
pub trait AsymptoticAlgebra: ClassAlgebra {
    /// Coefficients of ħ⁰, ħ⁻¹, …, ħ^{-order}.
    fn hbar_expand(&self, x: &Self::Elem, order: usize) -> Result<Vec<Self::Elem>>;
    /// The rational number a class equals, if it is one.
    fn scalar_value(&self, x: &Self::Elem) -> Option<Rational>;
    fn decompose_linear(&self, x: &Self::Elem) -> Result<Linear>;

    /// `x` modulo ħ^{-order-1}, as a polynomial in ħ⁻¹.
    fn truncate_hbar(&self, x: &Self::Elem, order: usize) -> Result<Self::Elem> {
        let parts = self.hbar_expand(x, order)?;
        let inv_h = RationalFunction::from_poly(Poly::var(self.nvars(), self.hbar())).inv()?;
        let mut acc = parts[0].clone();
        let mut w = self.one();
        for part in &parts[1..] {
            w = w.mul(&self.scalar(&inv_h));
            acc = acc.add(&part.mul(&w));
        }
        Ok(acc)
    }
}

impl AsymptoticAlgebra for Localization {
    fn hbar_expand(&self, x: &LocalizedClass, order: usize) -> Result<Vec<LocalizedClass>> {
        let h = self.toric.vars.hbar();
        let tails: Vec<_> = x.values.iter().map(|v| expand_hbar_infinity(v, h, order)).collect::<Result<_>>()?;
        Ok((0..=order)
            .map(|m| LocalizedClass { values: tails.iter().map(|t| t.coefficient(m).clone()).collect() })
            .collect())
    }

    fn scalar_value(&self, x: &LocalizedClass) -> Option<Rational> {
        let first = x.values.first()?.constant_value()?;
        x.values.iter().all(|v| v.constant_value().as_ref() == Some(&first)).then_some(first)
    }

    fn decompose_linear(&self, x: &LocalizedClass) -> Result<Linear> {
        if self.is_specialized() {
            return Err(Error::AsymptoticsForm("decomposition needs symbolic λ".into()));
        }
        let vars = &self.toric.vars;
        let (k, n, l) = (self.toric.input.k, vars.n_lambda, vars.n_lambda_prime);
        let eq: Vec<usize> = vars.equivariant_vars().collect();
        let cols = 1 + k + n + l;
        // one equation per fixed point and per coordinate (1, λ₁, …, λ′_l)
        let coords = |p: &Poly| -> Vec<Rational> {
            let mut out = vec![p.constant_term()];
            for &v in &eq {
                let mut e = vec![0; p.nvars()];
                e[v] = 1;
                out.push(p.coefficient(&crate::algebra::poly::Monomial::new(e)));
            }
            out
        };
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (a, value) in x.values.iter().enumerate() {
            let y = value.as_poly().filter(|p| p.total_degree().is_none_or(|d| d <= 1)).ok_or_else(|| {
                Error::AsymptoticsForm(format!("order-1 part at {} is not linear", self.toric.fps[a].label()))
            })?;
            let pcoords: Vec<Vec<Rational>> = (0..k).map(|i| coords(self.p_at(a, i))).collect();
            for (c, target) in coords(y).into_iter().enumerate() {
                let mut row = vec![Rational::zero(); cols];
                if c == 0 {
                    row[0] = Rational::one();
                } else {
                    row[k + c] = Rational::one();
                }
                for i in 0..k {
                    row[1 + i] = pcoords[i][c].clone();
                }
                rows.push(row);
                rhs.push(target);
            }
        }
        let sol = linalg::solve(&rows, &rhs, cols)
            .ok_or_else(|| Error::AsymptoticsForm("order-1 class outside the span of 1, p, λ, λ′".into()))?;
        Ok(Linear {
            constant: sol[0].clone(),
            p: sol[1..=k].to_vec(),
            lambda: Some((sol[1 + k..1 + k + n].to_vec(), sol[1 + k + n..].to_vec())),
        })
    }
}

impl AsymptoticAlgebra for CohomologyRing {
    fn hbar_expand(&self, x: &RingElement, order: usize) -> Result<Vec<RingElement>> {
        let h = self.hbar();
        (0..=order)
            .map(|m| x.try_map_coefficients(|c| Ok(expand_hbar_infinity(c, h, order)?.coefficient(m).clone())))
            .collect()
    }

    fn scalar_value(&self, x: &RingElement) -> Option<Rational> {
        let s = x.scalar_part();
        (x.terms().len() <= usize::from(!s.is_zero())).then(|| s.constant_value()).flatten()
    }

    fn decompose_linear(&self, x: &RingElement) -> Result<Linear> {
        let k = self.rank();
        let mut out = Linear { constant: Rational::zero(), p: vec![Rational::zero(); k], lambda: None };
        for (e, c) in x.terms() {
            let v =
                c.constant_value().ok_or_else(|| Error::AsymptoticsForm("non-constant order-1 coefficient".into()))?;
            match e.iter().sum::<u32>() {
                0 => out.constant = v,
                1 => out.p[e.iter().position(|&x| x == 1).unwrap()] = v,
                _ => return Err(Error::AsymptoticsForm("order-1 class of degree > 1".into())),
            }
        }
        Ok(out)
    }
}

/// Ψ⁽⁰⁾ and the parts of Ψ⁽¹⁾/Ψ⁽⁰⁾ = H + Σ G_a v_a − Σ F_j u_j = A + Σ φ_i p_i + Σ F_j λ_j − Σ G_a λ′_a.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticData {
    pub psi0: GradedQSeries<Rational>,
    pub h: GradedQSeries<Rational>,
    /// `F_j`, empty without equivariant parameters.
    pub f: Vec<GradedQSeries<Rational>>,
    /// `G_a`, empty without equivariant parameters.
    pub g: Vec<GradedQSeries<Rational>>,
    pub phi: Vec<GradedQSeries<Rational>>,
}

/// Inverse of a scalar series with constant term 1.
fn scalar_inverse(s: &GradedQSeries<Rational>) -> Result<GradedQSeries<Rational>> {
    s.log(&Rational::one())?.neg().exp(&Rational::one())
}

pub fn expand_asymptotics<A: AsymptoticAlgebra>(
    alg: &A,
    toric: &Toric,
    psi: &GradedQSeries<A::Elem>,
) -> Result<AsymptoticData> {
    for g in &toric.lattice.generators {
        if toric.lattice.degree_of_q(g)? < 0 {
            return Err(Error::AsymptoticsForm(format!("first Chern class negative on {g:?}")));
        }
    }
    let grading = psi.grading().clone();
    let zero_series = || GradedQSeries::<Rational>::zero(grading.clone());
    let mut psi0 = zero_series();
    let mut order1 = GradedQSeries::<A::Elem>::zero(grading.clone());
    for (d, c) in psi.terms() {
        let tail = alg.hbar_expand(c, 1)?;
        let v0 = alg
            .scalar_value(&tail[0])
            .or_else(|| alg.is_zero_class(&tail[0]).then(Rational::zero))
            .ok_or_else(|| Error::AsymptoticsForm(format!("order-0 part at {d:?} is not a scalar")))?;
        psi0.add_term(d.clone(), v0);
        order1.add_term(d.clone(), tail[1].clone());
    }
    let zero: Degree = vec![0; toric.input.k];
    if psi0.coefficient(&zero) != Some(&Rational::one()) {
        return Err(Error::AsymptoticsForm("Ψ⁽⁰⁾ does not start with 1".into()));
    }
    let normalized = order1.mul_scalar_series(&scalar_inverse(&psi0)?)?;
    let input = &toric.input;
    let mut h = zero_series();
    let mut phi = vec![zero_series(); input.k];
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut equivariant = false;
    for (d, x) in normalized.terms() {
        let lin = alg.decompose_linear(x)?;
        h.add_term(d.clone(), lin.constant.clone());
        for (i, b) in lin.p.iter().enumerate() {
            phi[i].add_term(d.clone(), b.clone());
        }
        if let Some((c, e)) = &lin.lambda {
            if !equivariant {
                equivariant = true;
                f = vec![zero_series(); input.n];
                g = vec![zero_series(); input.l];
            }
            for (j, cj) in c.iter().enumerate() {
                f[j].add_term(d.clone(), cj.clone());
            }
            for (a, ea) in e.iter().enumerate() {
                g[a].add_term(d.clone(), -ea.clone());
            }
            // φ_i = Σ_a l_ia G_a − Σ_j m_ij F_j
            for (i, b) in lin.p.iter().enumerate() {
                let expected: Rational = (0..input.l).map(|a| -&e[a] * rat(input.bundle[i][a])).sum::<Rational>()
                    - (0..input.n).map(|j| &c[j] * rat(input.m[i][j])).sum::<Rational>();
                if *b != expected {
                    return Err(Error::AsymptoticsForm(format!("p_{} part at {d:?} is not Σ l G − Σ m F", i + 1)));
                }
            }
        }
    }
    for (name, s) in std::iter::once(("H", &h)).chain(f.iter().map(|s| ("F", s))).chain(g.iter().map(|s| ("G", s))) {
        if s.coefficient(&zero).is_some() {
            return Err(Error::AsymptoticsForm(format!("{name} has a constant term")));
        }
    }
    Ok(AsymptoticData { psi0, h, f, g, phi })
}

/// The change of variables and prefactors extracted from the asymptotics.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorMap {
    /// `f₀ = log Ψ⁽⁰⁾`.
    pub f0: GradedQSeries<Rational>,
    /// `f_i = φ_i`: new variables `Q_i = q_i e^{φ_i(q)}`.
    pub fi: Vec<GradedQSeries<Rational>>,
    /// `g_j = F_j`, the coefficients of λ_j in the ħ⁻¹ shift.
    pub gj: Vec<GradedQSeries<Rational>>,
    /// `G_a`, the coefficients of −λ′_a.
    pub ga: Vec<GradedQSeries<Rational>>,
    pub h: GradedQSeries<Rational>,
    /// ψ with `q_i = Q_i e^{ψ_i(Q)}`, the inverse direction.
    pub inverse: Vec<GradedQSeries<Rational>>,
}

impl MirrorMap {
    /// Support in Λ∖0 with grading degrees 0 for f₀, f_i, g_j and 1 for h.
    pub fn check_shape(&self, toric: &Toric) -> Result<()> {
        let zero_deg = std::iter::once(&self.f0).chain(&self.fi).chain(&self.gj).chain(&self.ga);
        for (s, want) in zero_deg.map(|s| (s, 0)).chain(std::iter::once((&self.h, 1))) {
            for (d, _) in s.terms() {
                if d.iter().all(|&x| x == 0) || toric.lattice.degree_of_q(d)? != want {
                    return Err(Error::NormalizationFailed(format!("mirror map term at {d:?} has the wrong degree")));
                }
            }
        }
        Ok(())
    }
}

/// Runs the three normalization steps and asserts the result is 1 + O(ħ⁻²).
///
/// With `precision = Some(K)` every intermediate series is reduced modulo
/// ħ^{-K-1}; the orders checked here only depend on orders ≤ 1 of Ψ.
pub fn normalize_to_flat<A: AsymptoticAlgebra>(
    alg: &A,
    toric: &Toric,
    psi: &GradedQSeries<A::Elem>,
    asym: &AsymptoticData,
    precision: Option<usize>,
) -> Result<(GradedQSeries<A::Elem>, MirrorMap)> {
    let reduce = |s: GradedQSeries<A::Elem>| -> Result<GradedQSeries<A::Elem>> {
        match precision {
            Some(k) => s.map(|_, c| alg.truncate_hbar(c, k)),
            None => Ok(s),
        }
    };
    let psi = &reduce(psi.clone())?;
    let nv = alg.nvars();
    let hbar = alg.hbar();
    let vars = &toric.vars;
    let inv_h = RationalFunction::from_poly(Poly::var(nv, hbar)).inv()?;
    let step1 = psi.mul_scalar_series(&scalar_inverse(&asym.psi0)?)?;
    // exponent −(H + Σ F_j λ_j − Σ G_a λ′_a + Σ φ_i p_i)/ħ
    let mut exponent = GradedQSeries::<A::Elem>::zero(psi.grading().clone());
    let mut degrees: BTreeMap<Degree, ()> = BTreeMap::new();
    for s in std::iter::once(&asym.h).chain(&asym.phi).chain(&asym.f).chain(&asym.g) {
        degrees.extend(s.terms().map(|(d, _)| (d.clone(), ())));
    }
    let get = |s: &GradedQSeries<Rational>, d: &[i64]| s.coefficient(d).cloned().unwrap_or_else(Rational::zero);
    for d in degrees.keys() {
        let mut scalar = Poly::constant(nv, get(&asym.h, d));
        for (j, s) in asym.f.iter().enumerate() {
            scalar = &scalar + &Poly::var(nv, vars.lambda(j)).scale(&get(s, d));
        }
        for (a, s) in asym.g.iter().enumerate() {
            scalar = &scalar - &Poly::var(nv, vars.lambda_prime(a)).scale(&get(s, d));
        }
        let mut class = alg.scalar(&RationalFunction::from_poly(scalar));
        for (i, s) in asym.phi.iter().enumerate() {
            class = class.add(&alg.p(i).scale(&get(s, d)));
        }
        exponent.add_term(d.clone(), class.mul(&alg.scalar(&inv_h)).neg());
    }
    let step2 = reduce(step1.mul(&reduce(exponent.exp(&alg.one())?)?)?)?;
    let inverse = reverse_shift(&asym.phi)?;
    let flat = reduce(step2.substitute_shift(&inverse)?)?;
    let zero: Degree = vec![0; toric.input.k];
    for (d, c) in flat.terms() {
        let tail = alg.hbar_expand(c, 1)?;
        let expected0 = if *d == zero { alg.one() } else { alg.scalar(&RationalFunction::zero(nv)) };
        if tail[0] != expected0 || !alg.is_zero_class(&tail[1]) {
            return Err(Error::NormalizationFailed(format!("residual ħ⁰ or ħ⁻¹ term at {d:?}")));
        }
    }
    let map = MirrorMap {
        f0: asym.psi0.log(&Rational::one())?,
        fi: asym.phi.clone(),
        gj: asym.f.clone(),
        ga: asym.g.clone(),
        h: asym.h.clone(),
        inverse,
    };
    map.check_shape(toric)?;
    Ok((flat, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::factorial;
    use crate::equivariant::LambdaMode;
    use crate::hypergeometric::build_psi;
    use crate::toric::ToricInput;

    fn loc(m: Vec<Vec<i64>>, t: Vec<i64>, l: Vec<Vec<i64>>) -> Localization {
        let input = ToricInput::new(m, t.into_iter().map(rat).collect(), l).unwrap();
        Localization::new(Toric::new(input, None).unwrap(), LambdaMode::Symbolic)
    }

    fn run(
        loc: &Localization,
        bound: u64,
    ) -> (AsymptoticData, MirrorMap, GradedQSeries<LocalizedClass>, GradedQSeries<LocalizedClass>) {
        let psi = build_psi(loc, &loc.toric, bound).unwrap();
        let asym = expand_asymptotics(loc, &loc.toric, &psi).unwrap();
        let (flat, map) = normalize_to_flat(loc, &loc.toric, &psi, &asym, Some(2)).unwrap();
        (asym, map, flat, psi)
    }

    #[test]
    fn fano_normalization_is_identity() {
        for (m, t) in [(vec![vec![1, 1, 1]], vec![1]), (vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]], vec![1, 1])] {
            let loc = loc(m, t, vec![]);
            let (asym, map, _, psi) = run(&loc, 4);
            assert_eq!(asym.psi0.len(), 1);
            assert!(map.fi.iter().all(|s| s.is_empty()) && map.h.is_empty() && map.f0.is_empty());
            let exact = normalize_to_flat(&loc, &loc.toric, &psi, &asym, None).unwrap().0;
            assert_eq!(exact, psi);
        }
    }

    #[test]
    fn quintic_hypergeometric_constant_term() {
        let loc = loc(vec![vec![1; 5]], vec![1], vec![vec![5]]);
        let (asym, map, _, _) = run(&loc, 4);
        for d in 0..=4i64 {
            let expected = Rational::from_integer(factorial(5 * d as u64) / factorial(d as u64).pow(5));
            assert_eq!(asym.psi0.coefficient(&[d]), Some(&expected));
        }
        assert_eq!(asym.psi0.coefficient(&[4]), Some(&rat(305540235000)));
        assert!(!map.fi[0].is_empty());
    }

    #[test]
    fn x2_equivariant_mirror_map() {
        let loc = loc(vec![vec![1, 1, 0, 0, -2], vec![0, 0, 1, 1, 1]], vec![1, 2], vec![]);
        let (asym, map, _, _) = run(&loc, 6);
        assert_eq!(asym.psi0.len(), 1);
        // φ = (2f, −f): F₅ = f and the other F_j vanish
        for d in 1..=6i64 {
            let f = Rational::new(factorial(2 * d as u64 - 1), factorial(d as u64).pow(2));
            assert_eq!(map.fi[0].coefficient(&[d, 0]), Some(&(&f * rat(2))));
            assert_eq!(asym.f[4].coefficient(&[d, 0]), Some(&f));
        }
        // oracle: x₁ = y₁/(1+y₁)², x₂ = y₂(1+y₁), i.e. ψ₁ = −2 log(1+y₁), ψ₂ = log(1+y₁)
        let grading = map.inverse[0].grading().clone();
        let mut log1p = GradedQSeries::<Rational>::zero(grading);
        for n in 1..=6i64 {
            let sign = if n % 2 == 1 { rat(1) } else { rat(-1) };
            log1p.add_term(vec![n, 0], sign / rat(n));
        }
        assert_eq!(map.inverse[0], log1p.scale(&rat(-2)));
        assert_eq!(map.inverse[1], log1p);
    }
}
