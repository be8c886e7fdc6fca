//! Partial-fraction structure of Ψ_α in ħ along one-dimensional orbits.

use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::{product_of_factors, RationalFunction};
use crate::algebra::rational::{factorial, rat, ratio, Rational};
use crate::algebra::series::{sub_degrees, Degree};
use crate::equivariant::Localization;
use crate::error::{Error, Result};
use crate::toric::Edge;

use super::psi::psi_alpha;

#[derive(Clone, Debug, PartialEq)]
pub struct RecursionCoefficient {
    pub source: usize,
    pub j: usize,
    pub n: i64,
    /// ħ-free rational function of λ, λ′.
    pub value: RationalFunction,
}

/// Factors `X(m)` for the telescoped ratio `Π_{m≤top}X(m) / Π_{m≤bottom}X(m)`.
fn telescope(top: i64, bottom: i64, x: impl Fn(i64) -> Poly, num: &mut Vec<Poly>, den: &mut Vec<Poly>) {
    if top >= bottom {
        num.extend((bottom + 1..=top).map(&x));
    } else {
        den.extend((top + 1..=bottom).map(&x));
    }
}

/// `C_{α,j}(n)` for the edge leaving `edge.source` along `edge.j`:
///
/// `Π_a Π_{m=1}^{nL_a}(v_a − m u_j/n) · Π_{s∉β} [Π_{m≤0} / Π_{m≤nD_s}](u_s − m u_j/n)`
/// divided by `(n−1)! (u_j/n)^{n−1}`, everything restricted to α and
/// `L_a, D_s` taken at the edge degree.
pub fn recursion_coefficient(loc: &Localization, edge: &Edge, n: i64) -> Result<RecursionCoefficient> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("recursion multiplicity {n} < 1")));
    }
    let alpha = edge.source;
    let beta = &loc.toric.fps[edge.target];
    let w = loc.u_at(alpha, edge.j).scale(&ratio(1, n));
    let shifted = |base: &Poly, m: i64| base - &w.scale(&rat(m));
    let mut num = Vec::new();
    let mut den = Vec::new();
    for (a, &la) in edge.lvals.iter().enumerate() {
        num.extend((1..=n * la).map(|m| shifted(loc.v_at(alpha, a), m)));
    }
    for (s, &ds) in edge.dvals.iter().enumerate() {
        if beta.contains(s) {
            continue;
        }
        telescope(0, n * ds, |m| shifted(loc.u_at(alpha, s), m), &mut num, &mut den);
    }
    den.extend(std::iter::repeat_n(w.clone(), (n - 1) as usize));
    let scale = Rational::new(1.into(), factorial((n - 1) as u64));
    let value = product_of_factors(loc.nvars(), scale, &num, &den)
        .map_err(|_| Error::VanishingDenominator(format!("C at edge {}→{} with n = {n}", edge.source, edge.target)))?;
    Ok(RecursionCoefficient { source: alpha, j: edge.j, n, value })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecursionReport {
    pub poles_checked: usize,
    /// `(α, d, j, n)` of poles whose residue disagrees with the recursion.
    pub unmatched: Vec<String>,
    /// Coefficients whose remainder still has ħ-poles away from ħ = 0.
    pub extra_poles: Vec<String>,
    /// `(α label, d, R_{α,d})`.
    pub remainders: Vec<(String, Degree, RationalFunction)>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.unmatched.is_empty() && self.extra_poles.is_empty()
    }
}

/// Checks every pole `ħ = −u_j(α)/n` of every Ψ_α coefficient up to `bound`
/// against `C_{α,j}(n) · Ψ_β^{d−n·d(α,j)}(−u_j(α)/n)`.
pub fn check_recursion(loc: &Localization, bound: u64) -> Result<RecursionReport> {
    let toric = &loc.toric;
    let nv = loc.nvars();
    let hbar = Poly::var(nv, toric.vars.hbar());
    let mut report = RecursionReport::default();
    for d in toric.lattice.enumerate(bound)? {
        let dvals = toric.input.d_vals(&d);
        for alpha in 0..loc.n_points() {
            let label = toric.fps[alpha].label();
            let z = psi_alpha(loc, alpha, &d)?;
            let mut remainder = z.clone();
            for j in (0..toric.input.n).filter(|j| !toric.fps[alpha].contains(*j)) {
                if dvals[j] < 1 || z.is_zero() {
                    continue;
                }
                let edge = toric
                    .edge(alpha, j)
                    .ok_or_else(|| Error::EdgeStructure(format!("no edge from {label} along {}", j + 1)))?;
                for n in 1..=dvals[j] {
                    report.poles_checked += 1;
                    let uj = loc.u_at(alpha, j);
                    let pole = uj + &hbar.scale(&rat(n));
                    let at = uj.scale(&ratio(-1, n));
                    let residue = z.mul_poly(&pole).substitute(toric.vars.hbar(), &at)?;
                    let c = recursion_coefficient(loc, edge, n)?;
                    let shifted: Vec<i64> = sub_degrees(&d, &edge.degree.iter().map(|x| x * n).collect::<Vec<_>>());
                    let far = psi_alpha(loc, edge.target, &shifted)?.substitute(toric.vars.hbar(), &at)?;
                    let expected = c.value.mul(&far);
                    if residue != expected {
                        report.unmatched.push(format!("α={label} d={d:?} pole ħ=-u{}/{n}", j + 1));
                    }
                    remainder = remainder.sub(&expected.mul(&RationalFunction::from_poly(pole).inv()?));
                }
            }
            let hbar_var = toric.vars.hbar();
            if remainder.den_factors().iter().any(|(f, _)| f.uses_var(hbar_var) && *f != hbar) {
                report.extra_poles.push(format!("α={label} d={d:?}"));
            }
            report.remainders.push((label, d.clone(), remainder));
        }
    }
    Ok(report)
}
