//! Fixed points, one-dimensional orbits and curve degrees of `ℂᴺ//T^k`.

pub mod edges;
pub mod fixed;
pub mod input;
pub mod lattice;
pub mod linalg;

use std::collections::HashMap;

pub use edges::{build_edges, Edge};
pub use fixed::{enumerate_fixed_points, verify_smooth, FixedPoint, SmoothnessCertificate};
pub use input::ToricInput;
pub use lattice::DegreeLattice;

use crate::algebra::rational::Rational;
use crate::algebra::vars::VarSpace;
use crate::error::{Error, Result};

/// All combinatorial data derived from a smooth compact toric input.
#[derive(Clone, Debug)]
pub struct Toric {
    pub input: ToricInput,
    pub vars: VarSpace,
    pub fps: Vec<FixedPoint>,
    pub edges: Vec<Edge>,
    pub lattice: DegreeLattice,
    edge_index: HashMap<(usize, usize), usize>,
    fp_index: HashMap<Vec<usize>, usize>,
}

impl Toric {
    pub fn new(input: ToricInput, ample: Option<Vec<Rational>>) -> Result<Self> {
        let vars = VarSpace::new(input.n, input.l, input.k);
        let fps = enumerate_fixed_points(&input, &vars)?;
        let cert = verify_smooth(&fps);
        if let Some((alpha, det)) = cert.violations.first() {
            let idx: Vec<usize> = alpha.iter().map(|j| j + 1).collect();
            return Err(Error::InvalidInput(format!("not smooth: det M_α = {det} at α = {idx:?}")));
        }
        fixed::check_compact(&input, &fps)?;
        let edges = build_edges(&input, &fps)?;
        let lattice = DegreeLattice::new(&input, &fps, &edges, ample)?;
        let edge_index = edges.iter().enumerate().map(|(i, e)| ((e.source, e.j), i)).collect();
        let fp_index = fps.iter().enumerate().map(|(i, fp)| (fp.alpha.clone(), i)).collect();
        Ok(Toric { input, vars, fps, edges, lattice, edge_index, fp_index })
    }

    pub fn nvars(&self) -> usize {
        self.vars.nvars()
    }

    /// Complex dimension `N − k` of X.
    pub fn dim(&self) -> usize {
        self.input.n - self.input.k
    }

    pub fn edge(&self, source: usize, j: usize) -> Option<&Edge> {
        self.edge_index.get(&(source, j)).map(|&i| &self.edges[i])
    }

    pub fn fixed_point_index(&self, alpha: &[usize]) -> Option<usize> {
        self.fp_index.get(alpha).copied()
    }

    /// Whether d lies in the orthant Δ*_α, i.e. `D_j(d) ≥ 0` for all j ∈ α.
    pub fn in_dual_orthant(&self, alpha: usize, d: &[i64]) -> bool {
        let dv = self.input.d_vals(d);
        self.fps[alpha].alpha.iter().all(|&j| dv[j] >= 0)
    }

    /// Minimal index sets S with `Π_{j∈S} u_j = 0`: S meets every fixed point.
    pub fn primitive_collections(&self) -> Vec<Vec<usize>> {
        let mut found: Vec<Vec<usize>> = Vec::new();
        for size in 1..=self.input.n {
            for s in fixed::subsets(self.input.n, size) {
                if found.iter().any(|f| f.iter().all(|j| s.contains(j))) {
                    continue;
                }
                if self.fps.iter().all(|fp| s.iter().any(|&j| fp.contains(j))) {
                    found.push(s);
                }
            }
        }
        found
    }
}
