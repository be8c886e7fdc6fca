//! Expansion of rational functions at ħ = ∞.

use super::poly::Poly;
use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};

/// `c₀ + c₁ħ⁻¹ + … + c_Kħ^{-K} + O(ħ^{-K-1})`; the coefficients do not involve ħ.
#[derive(Clone, Debug, PartialEq)]
pub struct HbarTail {
    pub coefficients: Vec<RationalFunction>,
}

impl HbarTail {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, m: usize) -> &RationalFunction {
        &self.coefficients[m]
    }

    /// The partial sum `Σ c_m ħ^{-m}` as a rational function.
    pub fn resum(&self, hbar: usize) -> RationalFunction {
        let nvars = self.coefficients[0].nvars();
        let h = Poly::var(nvars, hbar);
        let mut acc = RationalFunction::zero(nvars);
        for (m, c) in self.coefficients.iter().enumerate() {
            let w = RationalFunction::from_factors(Poly::one(nvars), &vec![h.clone(); m]);
            acc = acc.add(&c.mul(&w));
        }
        acc
    }
}

fn series_mul(a: &[RationalFunction], b: &[RationalFunction], len: usize) -> Vec<RationalFunction> {
    let nvars = a[0].nvars();
    let mut out = vec![RationalFunction::zero(nvars); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

fn series_inv(g: &[RationalFunction], len: usize) -> Result<Vec<RationalFunction>> {
    let inv0 = g[0].inv()?;
    let mut h = vec![inv0.clone()];
    for n in 1..len {
        let mut acc = RationalFunction::zero(g[0].nvars());
        for i in 1..=n.min(g.len() - 1) {
            acc = acc.add(&g[i].mul(&h[n - i]));
        }
        h.push(acc.mul(&inv0).neg());
    }
    Ok(h)
}

fn poly_coeffs_rf(p: &Poly, hbar: usize) -> Vec<RationalFunction> {
    p.coefficients_in(hbar).into_iter().map(RationalFunction::from_poly).collect()
}

/// `deg_ħ(den) − deg_ħ(num)`, the order of vanishing at ħ = ∞; `None` for zero.
pub fn order_at_infinity(f: &RationalFunction, hbar: usize) -> Option<i64> {
    if f.is_zero() {
        return None;
    }
    let den: u32 = f.den_factors().iter().map(|(p, e)| p.degree_in(hbar) * e).sum();
    Some(den as i64 - f.numerator().degree_in(hbar) as i64)
}

/// Expands `f` in powers of `1/ħ` through `ħ^{-K}`.
pub fn expand_hbar_infinity(f: &RationalFunction, hbar: usize, k: usize) -> Result<HbarTail> {
    let nvars = f.nvars();
    let len = k + 1;
    if f.is_zero() {
        return Ok(HbarTail { coefficients: vec![RationalFunction::zero(nvars); len] });
    }
    let ord = order_at_infinity(f, hbar).unwrap();
    if ord < 0 {
        return Err(Error::PoleAtInfinity((-ord) as u32));
    }
    // In w = 1/ħ: f = w^ord · (num reversed) / Π (factor reversed)^e.
    let num = poly_coeffs_rf(f.numerator(), hbar);
    let mut acc: Vec<RationalFunction> = num.into_iter().rev().collect();
    for (p, e) in f.den_factors() {
        let rev: Vec<RationalFunction> = poly_coeffs_rf(p, hbar).into_iter().rev().collect();
        let inv = series_inv(&rev, len)?;
        for _ in 0..*e {
            acc = series_mul(&acc, &inv, len);
        }
    }
    acc.resize(len, RationalFunction::zero(nvars));
    let mut coefficients = vec![RationalFunction::zero(nvars); len];
    for m in 0..len {
        let src = m as i64 - ord;
        if src >= 0 {
            coefficients[m] = acc[src as usize].clone();
        }
    }
    Ok(HbarTail { coefficients })
}
