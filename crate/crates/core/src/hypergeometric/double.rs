//! Φ against the pairing of two copies of Ψ.

use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RationalFunction;
use crate::algebra::rational::rat;
use crate::algebra::series::{Degree, GradedQSeries};
use crate::equivariant::{Localization, LocalizedClass};
use crate::error::Result;

use super::phi::{exp_truncated, PhiSeries};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DoubleReport {
    pub compared: usize,
    /// First degree at which the two sides differ, with the z-exponents of the first differing term.
    pub first_mismatch: Option<(Degree, Vec<u32>)>,
}

impl DoubleReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// `∫_{[Y]} Ψ(q e^{ħz}, ħ) e^{pz} Ψ(q, −ħ)` through total z-degree `zcap`.
pub fn double_construction(
    loc: &Localization,
    psi: &GradedQSeries<LocalizedClass>,
    zcap: u32,
) -> Result<GradedQSeries<RationalFunction>> {
    let toric = &loc.toric;
    let nv = loc.nvars();
    let h = toric.vars.hbar();
    let z: Vec<usize> = toric.vars.z_vars().collect();
    let minus_h = Poly::var(nv, h).scale(&rat(-1));
    let left = psi.substitute_exp_hbar_z(nv, h, &z, zcap)?;
    let right = psi.map(|_, c| c.try_map(|v| v.substitute(h, &minus_h)))?;
    let epz = LocalizedClass {
        values: (0..loc.n_points())
            .map(|a| {
                let mut arg = Poly::zero(nv);
                for (i, &zi) in z.iter().enumerate() {
                    arg = &arg + &(loc.p_at(a, i) * &Poly::var(nv, zi));
                }
                RationalFunction::from_poly(exp_truncated(&arg, &z, zcap))
            })
            .collect(),
    };
    let truncate = |c: &LocalizedClass| c.map(|v| v.truncate_vars(&z, zcap));
    let right = right.map(|_, c| Ok(truncate(&crate::algebra::series::Coefficient::mul(c, &epz))))?;
    let product = left.mul(&right)?;
    product.map(|_, c| Ok(loc.integrate(&truncate(c), true).value.truncate_vars(&z, zcap)))
}

/// Compares the double construction with Φ coefficient by coefficient.
pub fn check_double_construction(
    loc: &Localization,
    psi: &GradedQSeries<LocalizedClass>,
    phi: &PhiSeries,
) -> Result<DoubleReport> {
    let lhs = double_construction(loc, psi, phi.zcap)?;
    let z: Vec<usize> = loc.toric.vars.z_vars().collect();
    let bound: u64 = phi.series.bound().min(psi.bound()).to_integer().try_into().unwrap_or(0);
    let zero = RationalFunction::zero(loc.nvars());
    let mut report = DoubleReport::default();
    for d in loc.toric.lattice.enumerate(bound)? {
        report.compared += 1;
        let a = lhs.coefficient(&d).unwrap_or(&zero);
        let b = phi.series.coefficient(&d).unwrap_or(&zero);
        if a != b {
            let diff = a.sub(b);
            let m = diff.as_poly().and_then(|p| p.split_by_vars(&z).into_keys().next()).unwrap_or_default();
            report.first_mismatch = Some((d, m));
            break;
        }
    }
    Ok(report)
}
