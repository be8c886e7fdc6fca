//! The operators Δ_d acting on Ψ through the conjugated action
//! ħ∂_j ↦ u_j + ħD_j(d′) on the q^{d′} coefficient.

use crate::algebra::rational::rat;
use crate::algebra::series::{sub_degrees, Coefficient, Degree, GradedQSeries};
use crate::equivariant::{ClassAlgebra, Factor};
use crate::error::{Error, Result};
use crate::toric::Toric;

/// `Π_{D_j>0} Π_{m=0}^{D_j−1}(∂_j − mħ) − q^d Π_{D_j<0} Π_{m=0}^{−D_j−1}(∂_j − mħ) Π_a Π_{m=1}^{L_a}(∂′_a + mħ)`.
/// When every `D_j(d) ≥ 0` this is the operator Δ_d itself.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaOperator {
    pub d: Degree,
    pub dvals: Vec<i64>,
    pub lvals: Vec<i64>,
}

impl DeltaOperator {
    /// The strict form: requires `D_j(d) ≥ 0` for all j.
    pub fn new(toric: &Toric, d: &[i64]) -> Result<Self> {
        let op = Self::generalized(toric, d)?;
        if let Some(j) = op.dvals.iter().position(|&x| x < 0) {
            return Err(Error::OperatorUndefined(format!("D_{}({d:?}) < 0", j + 1)));
        }
        Ok(op)
    }

    /// Moves the factors with `D_j(d) < 0` to the q^d side.
    pub fn generalized(toric: &Toric, d: &[i64]) -> Result<Self> {
        if d.len() != toric.input.k || !toric.lattice.contains(d) {
            return Err(Error::NotInSemigroup(format!("{d:?}")));
        }
        let lvals = toric.input.l_vals(d);
        if let Some(a) = lvals.iter().position(|&x| x < 0) {
            return Err(Error::BundleNegative(format!("L_{}({d:?}) < 0", a + 1)));
        }
        Ok(DeltaOperator { d: d.to_vec(), dvals: toric.input.d_vals(d), lvals })
    }

    /// Factors multiplying the q^{d′} coefficient in the first term.
    pub fn lhs_factors(&self, toric: &Toric, target: &[i64]) -> Vec<Factor> {
        let at = toric.input.d_vals(target);
        let mut out = Vec::new();
        for (j, &dj) in self.dvals.iter().enumerate() {
            out.extend((0..dj.max(0)).map(|m| Factor::U(j, at[j] - m)));
        }
        out
    }

    /// Factors multiplying the q^{d′−d} coefficient in the second term.
    pub fn rhs_factors(&self, toric: &Toric, source: &[i64]) -> Vec<Factor> {
        let at = toric.input.d_vals(source);
        let lat = toric.input.l_vals(source);
        let mut out = Vec::new();
        for (j, &dj) in self.dvals.iter().enumerate() {
            out.extend((0..(-dj).max(0)).map(|m| Factor::U(j, at[j] - m)));
        }
        for (a, &la) in self.lvals.iter().enumerate() {
            out.extend((1..=la).map(|m| Factor::V(a, lat[a] + m)));
        }
        out
    }
}

/// `e^{−p log q/ħ} Δ e^{p log q/ħ}` applied to `series`, through its truncation.
pub fn apply_delta<A: ClassAlgebra>(
    alg: &A,
    toric: &Toric,
    series: &GradedQSeries<A::Elem>,
    op: &DeltaOperator,
) -> Result<GradedQSeries<A::Elem>> {
    let bound: u64 = series.bound().to_integer().try_into().unwrap_or(0);
    let mut out = GradedQSeries::zero(series.grading().clone());
    for target in toric.lattice.enumerate(bound)? {
        if let Some(c) = series.coefficient(&target) {
            out.add_term(target.clone(), c.mul(&alg.product(&rat(1), &op.lhs_factors(toric, &target), &[])?));
        }
        let source = sub_degrees(&target, &op.d);
        if let Some(c) = series.coefficient(&source) {
            let term = c.mul(&alg.product(&rat(1), &op.rhs_factors(toric, &source), &[])?);
            out.add_term(target.clone(), term.neg());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnnihilationReport {
    /// Per operator degree: `None` on success, else the first failing `(d′, locus)`.
    pub results: Vec<(Degree, Option<String>)>,
}

impl AnnihilationReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|(_, r)| r.is_none())
    }
}

pub fn check_annihilation<A: ClassAlgebra>(
    alg: &A,
    toric: &Toric,
    series: &GradedQSeries<A::Elem>,
    ops: &[DeltaOperator],
) -> Result<AnnihilationReport> {
    let mut report = AnnihilationReport::default();
    for op in ops {
        let image = apply_delta(alg, toric, series, op)?;
        let failure = image
            .sorted_terms()
            .into_iter()
            .find(|(_, c)| !alg.is_zero_class(c))
            .map(|(d, c)| format!("d′={d:?} {}", alg.nonzero_locus(c)));
        report.results.push((op.d.clone(), failure));
    }
    Ok(report)
}

/// Edge classes of Λ that are not sums of two other edge classes.
pub fn default_operator_degrees(toric: &Toric) -> Vec<Degree> {
    let classes = &toric.lattice.edge_classes;
    let mut out: Vec<Degree> = classes
        .iter()
        .filter(|c| {
            !classes.iter().any(|a| {
                let rest = sub_degrees(c, a);
                a != *c && classes.contains(&rest)
            })
        })
        .cloned()
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::{LambdaMode, Localization};
    use crate::hypergeometric::build_psi;
    use crate::toric::ToricInput;

    fn loc(m: Vec<Vec<i64>>, t: Vec<i64>, l: Vec<Vec<i64>>) -> Localization {
        let input = ToricInput::new(m, t.into_iter().map(rat).collect(), l).unwrap();
        Localization::new(Toric::new(input, None).unwrap(), LambdaMode::Symbolic)
    }

    #[test]
    fn projective_plane_picard_fuchs() {
        let loc = loc(vec![vec![1, 1, 1]], vec![1], vec![]);
        let psi = build_psi(&loc, &loc.toric, 4).unwrap();
        let op = DeltaOperator::new(&loc.toric, &[1]).unwrap();
        let r = check_annihilation(&loc, &loc.toric, &psi, &[op]).unwrap();
        assert!(r.passed(), "{r:?}");
        // the d = 0 operator is 1 − 1
        let op0 = DeltaOperator::new(&loc.toric, &[0]).unwrap();
        assert!(apply_delta(&loc, &loc.toric, &psi, &op0).unwrap().is_empty());
    }

    #[test]
    fn wrong_operator_fails() {
        let loc = loc(vec![vec![1, 1, 1]], vec![1], vec![]);
        let psi = build_psi(&loc, &loc.toric, 3).unwrap();
        let op = DeltaOperator::new(&loc.toric, &[2]).unwrap();
        // Δ_2 also annihilates; a shifted operator does not
        assert!(check_annihilation(&loc, &loc.toric, &psi, std::slice::from_ref(&op)).unwrap().passed());
        let mut bad = op;
        bad.dvals = vec![2, 2, 1];
        assert!(!check_annihilation(&loc, &loc.toric, &psi, &[bad]).unwrap().passed());
    }

    #[test]
    fn x1_operators() {
        let loc = loc(vec![vec![1, 1, 0, -1, -1], vec![0, 0, 1, 1, 1]], vec![1, 2], vec![]);
        assert_eq!(default_operator_degrees(&loc.toric), vec![vec![1, 0], vec![0, 1]]);
        assert!(matches!(DeltaOperator::new(&loc.toric, &[1, 0]), Err(Error::OperatorUndefined(_))));
        let psi = build_psi(&loc, &loc.toric, 6).unwrap();
        let ops: Vec<_> = [[1, 0], [0, 1]].iter().map(|d| DeltaOperator::generalized(&loc.toric, d).unwrap()).collect();
        let r = check_annihilation(&loc, &loc.toric, &psi, &ops).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn quintic_operator() {
        let loc = loc(vec![vec![1; 5]], vec![1], vec![vec![5]]);
        let psi = build_psi(&loc, &loc.toric, 3).unwrap();
        let op = DeltaOperator::new(&loc.toric, &[1]).unwrap();
        assert!(check_annihilation(&loc, &loc.toric, &psi, &[op]).unwrap().passed());
    }
}
