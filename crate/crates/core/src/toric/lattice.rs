use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::edges::Edge;
use super::fixed::{subsets, FixedPoint};
use super::input::ToricInput;
use super::linalg;
use crate::algebra::rational::{rat, Rational};
use crate::algebra::series::{add_degrees, Degree, Grading};
use crate::error::{Error, Result};

/// The degree semigroup Λ together with the truncation functional.
#[derive(Clone, Debug)]
pub struct DegreeLattice {
    /// Ray generators of Λ: the dual bases of all `M_α`.
    pub generators: Vec<Vec<i64>>,
    /// Ray generators of the closed chamber K̄ (facet normals of Λ).
    pub chamber_rays: Vec<Vec<i64>>,
    pub edge_classes: Vec<Vec<i64>>,
    pub grading_weights: Vec<i64>,
    pub ample: Vec<Rational>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl DegreeLattice {
    pub fn new(input: &ToricInput, fps: &[FixedPoint], edges: &[Edge], ample: Option<Vec<Rational>>) -> Result<Self> {
        let k = input.k;
        let mut gens: BTreeSet<Vec<i64>> = BTreeSet::new();
        for fp in fps {
            for row in &fp.inv {
                gens.insert(linalg::primitive_integer(row));
            }
        }
        let generators: Vec<Vec<i64>> = gens.into_iter().collect();
        let mut rays: BTreeSet<Vec<i64>> = BTreeSet::new();
        for sub in subsets(generators.len(), k - 1) {
            let m = linalg::from_int(&sub.iter().map(|&i| generators[i].clone()).collect::<Vec<_>>());
            let ns = linalg::nullspace(&m, k);
            if ns.len() != 1 {
                continue;
            }
            let kappa = linalg::primitive_integer(&ns[0]);
            let pairs: Vec<i64> = generators.iter().map(|g| dot(&kappa, g)).collect();
            if pairs.iter().all(|&x| x >= 0) {
                rays.insert(kappa);
            } else if pairs.iter().all(|&x| x <= 0) {
                rays.insert(kappa.iter().map(|x| -x).collect());
            }
        }
        let edge_classes: Vec<Vec<i64>> =
            edges.iter().map(|e| e.degree.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let lattice = DegreeLattice {
            generators,
            chamber_rays: rays.into_iter().collect(),
            edge_classes,
            grading_weights: input.grading_weights(),
            ample: ample.unwrap_or_else(|| input.t.clone()),
        };
        if lattice.ample.len() != k {
            return Err(Error::InvalidInput(format!("t* has length {}, expected {k}", lattice.ample.len())));
        }
        for g in lattice.generators.iter().chain(&lattice.edge_classes) {
            if !lattice.pair(g).is_positive() {
                return Err(Error::NotAmple(format!("⟨t*, {g:?}⟩ ≤ 0")));
            }
        }
        for e in &lattice.edge_classes {
            if !lattice.contains(e) {
                return Err(Error::EdgeStructure(format!("edge class {e:?} outside Λ")));
            }
        }
        for a in 0..input.l {
            if lattice.generators.iter().any(|g| input.l_vals(g)[a] < 0) {
                return Err(Error::InvalidInput(format!("bundle column {} is not in the closed chamber", a + 1)));
            }
        }
        Ok(lattice)
    }

    pub fn rank(&self) -> usize {
        self.ample.len()
    }

    pub fn pair(&self, d: &[i64]) -> Rational {
        self.ample.iter().zip(d).map(|(w, &x)| w * rat(x)).sum()
    }

    pub fn contains(&self, d: &[i64]) -> bool {
        self.chamber_rays.iter().all(|kappa| dot(kappa, d) >= 0)
    }

    pub fn grading(&self, bound: u64) -> Arc<Grading> {
        Grading::new(self.ample.clone(), bound)
    }

    /// `deg q^d = ⟨w, d⟩`.
    pub fn degree_of_q(&self, d: &[i64]) -> Result<i64> {
        if !self.contains(d) {
            return Err(Error::NotInSemigroup(format!("{d:?}")));
        }
        Ok(dot(&self.grading_weights, d))
    }

    /// Lattice points of Λ with ⟨t*, d⟩ ≤ bound, sorted by ⟨t*, d⟩.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<Degree>> {
        let k = self.rank();
        let b = rat(bound as i64);
        let mut lo = vec![0i64; k];
        let mut hi = vec![0i64; k];
        for g in &self.generators {
            let s = &b / self.pair(g);
            for i in 0..k {
                let x = &s * rat(g[i]);
                lo[i] = lo[i].min(i64::try_from(x.floor().to_integer()).unwrap());
                hi[i] = hi[i].max(i64::try_from(x.ceil().to_integer()).unwrap());
            }
        }
        let mut out = Vec::new();
        let mut d = lo.clone();
        loop {
            if self.contains(&d) && self.pair(&d) <= b {
                out.push(d.clone());
            }
            let mut i = 0;
            loop {
                if i == k {
                    out.sort_by(|x, y| self.pair(x).cmp(&self.pair(y)).then(x.cmp(y)));
                    self.certify_generated(&out, bound)?;
                    return Ok(out);
                }
                if d[i] < hi[i] {
                    d[i] += 1;
                    break;
                }
                d[i] = lo[i];
                i += 1;
            }
        }
    }

    /// Checks that each degree is a non-negative integer combination of edge classes.
    fn certify_generated(&self, degrees: &[Degree], bound: u64) -> Result<()> {
        let b = rat(bound as i64);
        let zero = vec![0i64; self.rank()];
        let mut reached: HashSet<Degree> = HashSet::from([zero.clone()]);
        let mut frontier = vec![zero];
        while let Some(d) = frontier.pop() {
            for e in &self.edge_classes {
                let next = add_degrees(&d, e);
                if self.pair(&next) <= b && reached.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        for d in degrees {
            if !reached.contains(d) {
                return Err(Error::NotInSemigroup(format!("{d:?} is not a sum of edge classes")));
            }
        }
        Ok(())
    }

    pub fn is_zero_degree(d: &[i64]) -> bool {
        d.iter().all(|x| x.is_zero())
    }
}
