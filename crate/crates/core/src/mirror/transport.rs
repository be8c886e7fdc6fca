//! Moving Ψ of one toric presentation through its mirror map into another
//! presentation of the same cohomology ring.

use crate::algebra::series::{Degree, GradedQSeries};
use crate::equivariant::{CohomologyRing, LambdaMode, Localization, RingElement};
use crate::error::{Error, Result};
use crate::hypergeometric::build_psi;
use crate::toric::Toric;

use super::asymptotics::{expand_asymptotics, normalize_to_flat, MirrorMap};
use super::delta::{check_annihilation, AnnihilationReport, DeltaOperator};

#[derive(Clone, Debug)]
pub struct TransportReport {
    pub map: MirrorMap,
    /// The normalized source series, written in the target ring.
    pub transported: GradedQSeries<RingElement>,
    /// Degrees where it differs from the target's own Ψ.
    pub mismatches: Vec<Degree>,
    pub annihilation: AnnihilationReport,
}

impl TransportReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.annihilation.passed()
    }
}

/// Normalizes the source Ψ in ordinary cohomology, moves it to the target
/// ring and applies the target's operators.
pub fn check_transport(source: &Toric, target: &Toric, bound: u64, degrees: &[Degree]) -> Result<TransportReport> {
    let ring_s = CohomologyRing::new(&Localization::new(source.clone(), LambdaMode::Symbolic))?;
    let ring_t = CohomologyRing::new(&Localization::new(target.clone(), LambdaMode::Symbolic))?;
    if !ring_s.same_presentation(&ring_t) {
        return Err(Error::InvalidInput("source and target cohomology rings differ".into()));
    }
    let psi_s = build_psi(&ring_s, source, bound)?;
    let asym = expand_asymptotics(&ring_s, source, &psi_s)?;
    let (flat, map) = normalize_to_flat(&ring_s, source, &psi_s, &asym, None)?;
    let grading = target.lattice.grading(bound);
    let transported = GradedQSeries::from_terms(grading, flat.terms().map(|(d, c)| (d.clone(), ring_t.transfer(c))));
    let own = build_psi(&ring_t, target, bound)?;
    let mut mismatches = Vec::new();
    for d in target.lattice.enumerate(bound)? {
        if transported.coefficient(&d) != own.coefficient(&d) {
            mismatches.push(d);
        }
    }
    let ops: Vec<DeltaOperator> =
        degrees.iter().map(|d| DeltaOperator::generalized(target, d)).collect::<Result<_>>()?;
    let annihilation = check_annihilation(&ring_t, target, &transported, &ops)?;
    Ok(TransportReport { map, transported, mismatches, annihilation })
}
