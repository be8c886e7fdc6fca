//! Φ: generating series of virtual integrals over the toric map spaces X_d,
//! computed as residue sums over their fixed points.

use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::{product_of_factors, RationalFunction};
use crate::algebra::rational::{factorial, rat, Rational};
use crate::algebra::series::{Degree, GradedQSeries};
use crate::equivariant::{sum_tree, Localization};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PhiSeries {
    /// Coefficients are polynomials in λ, λ′, ħ and z, truncated at total z-degree `zcap`.
    pub series: GradedQSeries<RationalFunction>,
    pub zcap: u32,
}

/// `exp(arg)` through total z-degree `zcap`; `arg` is linear in z.
pub(crate) fn exp_truncated(arg: &Poly, z: &[usize], zcap: u32) -> Poly {
    let nv = arg.nvars();
    let mut out = Poly::one(nv);
    let mut power = Poly::one(nv);
    for i in 1..=zcap {
        power = (&power * arg).truncate_vars(z, zcap);
        out = &out + &power.scale(&Rational::new(1.into(), factorial(i as u64)));
    }
    out
}

/// All r with `0 ≤ r_s ≤ tops[s]`.
fn boxes(tops: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &t in tops {
        out = out.into_iter().flat_map(|r| (0..=t).map(move |x| [r.clone(), vec![x]].concat())).collect();
    }
    out
}

/// The residue of the X_d integrand at the fixed point (α, r).
fn residue(loc: &Localization, alpha: usize, d: &[i64], r: &[i64], zcap: u32) -> Result<RationalFunction> {
    let toric = &loc.toric;
    let input = &toric.input;
    let fp = &toric.fps[alpha];
    let nv = loc.nvars();
    let h = Poly::var(nv, toric.vars.hbar());
    // p* = p(α) + ħ δ with δ = M_α^{-T} r
    let delta: Vec<Rational> =
        (0..input.k).map(|i| fp.alpha.iter().enumerate().map(|(s, _)| &fp.inv[s][i] * rat(r[s])).sum()).collect();
    let shift = |col: &dyn Fn(usize) -> i64| -> Rational { (0..input.k).map(|i| &delta[i] * rat(col(i))).sum() };
    let dvals = input.d_vals(d);
    let lvals = input.l_vals(d);
    let mut num = Vec::new();
    let mut den = Vec::new();
    for j in 0..input.n {
        let base = loc.u_at(alpha, j) + &h.scale(&shift(&|i| input.m[i][j]));
        let at = |m: i64| &base - &h.scale(&rat(m));
        let pole = fp.alpha.iter().position(|&x| x == j).map(|s| r[s]);
        if dvals[j] >= 0 {
            den.extend((0..=dvals[j]).filter(|&m| Some(m) != pole).map(at));
        } else {
            num.extend((dvals[j] + 1..=-1).map(at));
        }
    }
    for a in 0..input.l {
        let base = loc.v_at(alpha, a) + &h.scale(&shift(&|i| input.bundle[i][a]));
        num.extend((0..=lvals[a]).map(|m| &base - &h.scale(&rat(m))));
    }
    let weight = product_of_factors(nv, rat(fp.det_sign as i64), &num, &den)?;
    let z: Vec<usize> = toric.vars.z_vars().collect();
    let mut arg = Poly::zero(nv);
    for i in 0..input.k {
        let pi = loc.p_at(alpha, i) + &h.scale(&delta[i]);
        arg = &arg + &(&pi * &Poly::var(nv, z[i]));
    }
    Ok(weight.mul_poly(&exp_truncated(&arg, &z, zcap)))
}

/// Φ up to ⟨t*, d⟩ ≤ bound, failing on a coefficient that is not a polynomial.
pub fn build_phi(loc: &Localization, bound: u64, zcap: u32) -> Result<PhiSeries> {
    let toric = &loc.toric;
    let mut series = GradedQSeries::zero(toric.lattice.grading(bound));
    for d in toric.lattice.enumerate(bound)? {
        let dvals = toric.input.d_vals(&d);
        let mut terms = Vec::new();
        for alpha in 0..loc.n_points() {
            if !toric.in_dual_orthant(alpha, &d) {
                continue;
            }
            let tops: Vec<i64> = toric.fps[alpha].alpha.iter().map(|&j| dvals[j]).collect();
            for r in boxes(&tops) {
                terms.push(residue(loc, alpha, &d, &r, zcap)?);
            }
        }
        let value = sum_tree(terms, loc.nvars());
        if !value.is_polynomial() {
            return Err(Error::NonPolynomialIntegral(format!("Φ at d = {d:?}")));
        }
        series.add_term(d, value);
    }
    Ok(PhiSeries { series, zcap })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhiReport {
    pub coefficients: usize,
    /// `(d, z-exponents)` whose coefficient is not homogeneous of the expected degree.
    pub inhomogeneous: Vec<String>,
    /// Degrees where Φ(z, q e^{ħz}, −ħ) differs from Φ(z, q, ħ).
    pub asymmetric: Vec<Degree>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.inhomogeneous.is_empty() && self.asymmetric.is_empty()
    }
}

/// Weighted homogeneity (degree l + k − N with deg z = −1, deg q^d = ⟨w, d⟩)
/// and the symmetry Φ(z, q, ħ) = Φ(z, q e^{ħz}, −ħ).
pub fn check_phi(loc: &Localization, phi: &PhiSeries) -> Result<PhiReport> {
    let toric = &loc.toric;
    let input = &toric.input;
    let z: Vec<usize> = toric.vars.z_vars().collect();
    let base = input.l as i64 + input.k as i64 - input.n as i64;
    let mut report = PhiReport::default();
    for (d, c) in phi.series.terms() {
        let poly = c.as_poly().ok_or_else(|| Error::NonPolynomialIntegral(format!("Φ at d = {d:?}")))?;
        let wd = toric.lattice.degree_of_q(d)?;
        for (m, part) in poly.split_by_vars(&z) {
            report.coefficients += 1;
            let expected = base + m.iter().map(|&x| x as i64).sum::<i64>() - wd;
            let ok = part.is_zero() || (expected >= 0 && part.homogeneous_degree() == Some(expected as u32));
            if !ok {
                report.inhomogeneous.push(format!("d={d:?} z^{m:?}: expected degree {expected}"));
            }
        }
    }
    let nv = loc.nvars();
    let h = toric.vars.hbar();
    let minus_h = Poly::var(nv, h).scale(&rat(-1));
    let moved = phi.series.substitute_exp_hbar_z(nv, h, &z, phi.zcap)?;
    let moved = moved.map(|_, c| Ok(c.substitute(h, &minus_h)?.truncate_vars(&z, phi.zcap)))?;
    for d in toric.lattice.enumerate(phi.series.bound().to_integer().try_into().unwrap_or(0))? {
        let zero = RationalFunction::zero(nv);
        let a = phi.series.coefficient(&d).unwrap_or(&zero);
        let b = moved.coefficient(&d).unwrap_or(&zero);
        if a != b {
            report.asymmetric.push(d);
        }
    }
    Ok(report)
}
