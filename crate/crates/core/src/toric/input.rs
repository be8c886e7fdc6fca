use num_traits::Zero;

use super::linalg;
use crate::algebra::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// `X = ℂᴺ//T^k` given by the weight matrix `M` (k×N) at level `t`, with
/// the split bundle whose summands have characters the columns of `L` (k×l).
#[derive(Clone, Debug, PartialEq)]
pub struct ToricInput {
    pub k: usize,
    pub n: usize,
    pub l: usize,
    pub m: Vec<Vec<i64>>,
    pub t: Vec<Rational>,
    pub bundle: Vec<Vec<i64>>,
}

impl ToricInput {
    /// `bundle` may be empty (no summands) or k rows of equal length.
    pub fn new(m: Vec<Vec<i64>>, t: Vec<Rational>, bundle: Vec<Vec<i64>>) -> Result<Self> {
        let k = m.len();
        if k == 0 {
            return Err(Error::InvalidInput("M has no rows".into()));
        }
        let n = m[0].len();
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!("M row {} has length {}, expected {n}", i + 1, row.len())));
            }
        }
        if t.len() != k {
            return Err(Error::InvalidInput(format!("t has length {}, expected {k}", t.len())));
        }
        let bundle = if bundle.is_empty() { vec![Vec::new(); k] } else { bundle };
        if bundle.len() != k {
            return Err(Error::InvalidInput(format!("L has {} rows, expected {k}", bundle.len())));
        }
        let l = bundle[0].len();
        for (i, row) in bundle.iter().enumerate() {
            if row.len() != l {
                return Err(Error::InvalidInput(format!("L row {} has length {}, expected {l}", i + 1, row.len())));
            }
        }
        if linalg::rank(&linalg::from_int(&m)) != k {
            return Err(Error::InvalidInput("M does not have full row rank".into()));
        }
        for a in 0..l {
            if bundle.iter().all(|row| row[a] == 0) {
                return Err(Error::InvalidInput(format!("bundle column {} is zero", a + 1)));
            }
        }
        if t.iter().all(|x| x.is_zero()) {
            return Err(Error::ChamberOnWall("t = 0".into()));
        }
        Ok(ToricInput { k, n, l, m, t, bundle })
    }

    /// `D_j(d) = Σᵢ dᵢ m_ij` for all j.
    pub fn d_vals(&self, d: &[i64]) -> Vec<i64> {
        (0..self.n).map(|j| (0..self.k).map(|i| d[i] * self.m[i][j]).sum()).collect()
    }

    /// `L_a(d) = Σᵢ dᵢ l_ia` for all a.
    pub fn l_vals(&self, d: &[i64]) -> Vec<i64> {
        (0..self.l).map(|a| (0..self.k).map(|i| d[i] * self.bundle[i][a]).sum()).collect()
    }

    /// `wᵢ = Σ_j m_ij − Σ_a l_ia`, so that deg q^d = ⟨w, d⟩.
    pub fn grading_weights(&self) -> Vec<i64> {
        (0..self.k).map(|i| self.m[i].iter().sum::<i64>() - self.bundle[i].iter().sum::<i64>()).collect()
    }

    /// Coefficients of `Σ_j u_j` at λ = 0 in the basis p.
    pub fn anticanonical(&self) -> Vec<i64> {
        (0..self.k).map(|i| self.m[i].iter().sum()).collect()
    }

    pub fn describe(&self) -> String {
        let t: Vec<String> = self.t.iter().map(format_rational).collect();
        format!("k={} N={} l={} M={:?} t=({}) L={:?}", self.k, self.n, self.l, self.m, t.join(", "), self.bundle)
    }
}
