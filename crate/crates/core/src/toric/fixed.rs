use num_traits::{One, Signed, Zero};

use super::input::ToricInput;
use super::linalg::{self, Matrix};
use crate::algebra::poly::Poly;
use crate::algebra::rational::{rat, Rational};
use crate::algebra::vars::VarSpace;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FixedPoint {
    /// Sorted 0-based column indices.
    pub alpha: Vec<usize>,
    pub det: Rational,
    pub det_sign: i32,
    /// `M_α⁻¹`, rows indexed by position in `alpha`.
    pub inv: Matrix,
    pub p: Vec<Poly>,
    pub u: Vec<Poly>,
    pub v: Vec<Poly>,
}

impl FixedPoint {
    pub fn contains(&self, j: usize) -> bool {
        self.alpha.binary_search(&j).is_ok()
    }

    pub fn label(&self) -> String {
        let idx: Vec<String> = self.alpha.iter().map(|j| (j + 1).to_string()).collect();
        format!("{{{}}}", idx.join(","))
    }
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            if n - j < k - cur.len() {
                break;
            }
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn solved_point(input: &ToricInput, vars: &VarSpace, alpha: Vec<usize>, det: Rational, inv: Matrix) -> FixedPoint {
    let nv = vars.nvars();
    let k = input.k;
    // p = M_α^{-T} λ_α
    let p: Vec<Poly> = (0..k)
        .map(|i| {
            let coeffs: Vec<(usize, Rational)> =
                alpha.iter().enumerate().map(|(s, &j)| (vars.lambda(j), inv[s][i].clone())).collect();
            Poly::linear(nv, Rational::zero(), &coeffs)
        })
        .collect();
    let combine = |col: &dyn Fn(usize) -> i64, shift: usize| -> Poly {
        let mut acc = -&Poly::var(nv, shift);
        for (i, pi) in p.iter().enumerate() {
            let c = col(i);
            if c != 0 {
                acc = &acc + &pi.scale(&rat(c));
            }
        }
        acc
    };
    let u = (0..input.n).map(|j| combine(&|i| input.m[i][j], vars.lambda(j))).collect();
    let v = (0..input.l).map(|a| combine(&|i| input.bundle[i][a], vars.lambda_prime(a))).collect();
    let det_sign = if det.is_positive() { 1 } else { -1 };
    FixedPoint { alpha, det, det_sign, inv, p, u, v }
}

/// Vertices of the momentum polyhedron `{x ≥ 0 : Mx = t}`.
pub fn enumerate_fixed_points(input: &ToricInput, vars: &VarSpace) -> Result<Vec<FixedPoint>> {
    let mut out = Vec::new();
    for alpha in subsets(input.n, input.k) {
        let ma = linalg::columns(&input.m, &alpha);
        let det = linalg::det(&ma);
        if det.is_zero() {
            continue;
        }
        let inv = linalg::inverse(&ma).expect("nonzero determinant");
        let x = linalg::mul_vec(&inv, &input.t);
        if x.iter().all(|c| !c.is_negative()) {
            if x.iter().any(|c| c.is_zero()) {
                let idx: Vec<usize> = alpha.iter().map(|j| j + 1).collect();
                return Err(Error::ChamberOnWall(format!("boundary solution for columns {idx:?}")));
            }
            out.push(solved_point(input, vars, alpha, det, inv));
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessCertificate {
    /// Fixed points whose determinant is not ±1.
    pub violations: Vec<(Vec<usize>, Rational)>,
}

impl SmoothnessCertificate {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_smooth(fps: &[FixedPoint]) -> SmoothnessCertificate {
    let violations =
        fps.iter().filter(|fp| !fp.det.abs().is_one()).map(|fp| (fp.alpha.clone(), fp.det.clone())).collect();
    SmoothnessCertificate { violations }
}

/// Fails when some edge leaving a vertex is unbounded.
pub fn check_compact(input: &ToricInput, fps: &[FixedPoint]) -> Result<()> {
    for fp in fps {
        for j in (0..input.n).filter(|j| !fp.contains(*j)) {
            let col: Vec<Rational> = (0..input.k).map(|i| rat(input.m[i][j])).collect();
            let dir = linalg::mul_vec(&fp.inv, &col);
            if dir.iter().all(|c| !c.is_positive()) {
                return Err(Error::NonCompact(format!("unbounded edge from {} in direction {}", fp.label(), j + 1)));
            }
        }
    }
    Ok(())
}

/// The index leaving `alpha` when moving along direction `j` (simplex ratio test).
pub fn ratio_test(input: &ToricInput, fp: &FixedPoint, j: usize) -> Option<usize> {
    let col: Vec<Rational> = (0..input.k).map(|i| rat(input.m[i][j])).collect();
    let dir = linalg::mul_vec(&fp.inv, &col);
    let x = linalg::mul_vec(&fp.inv, &input.t);
    let mut best: Option<(Rational, usize)> = None;
    for (s, d) in dir.iter().enumerate() {
        if d.is_positive() {
            let r = &x[s] / d;
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, fp.alpha[s]));
            }
        }
    }
    best.map(|(_, j)| j)
}
