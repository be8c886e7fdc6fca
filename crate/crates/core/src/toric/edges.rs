use std::collections::HashMap;

use num_traits::{One, Zero};

use super::fixed::{ratio_test, FixedPoint};
use super::input::ToricInput;
use super::linalg;
use crate::algebra::poly::Poly;
use crate::algebra::rational::{rat, Rational};
use crate::error::{Error, Result};

/// The one-dimensional orbit joining `source` and `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub j: usize,
    pub target: usize,
    pub jprime: usize,
    pub degree: Vec<i64>,
    pub dvals: Vec<i64>,
    pub lvals: Vec<i64>,
}

fn target_subset(alpha: &[usize], jprime: usize, j: usize) -> Vec<usize> {
    let mut b: Vec<usize> = alpha.iter().copied().filter(|&s| s != jprime).collect();
    b.push(j);
    b.sort_unstable();
    b
}

/// Solves `D_s(d) = 0 (s ∈ α∖{j′}), D_j(d) = 1`; `None` if singular.
fn trial_degree(input: &ToricInput, alpha: &[usize], jprime: usize, j: usize) -> Option<Vec<Rational>> {
    let mut rows: Vec<usize> = alpha.iter().copied().filter(|&s| s != jprime).collect();
    rows.push(j);
    let a: Vec<Vec<Rational>> = rows.iter().map(|&s| (0..input.k).map(|i| rat(input.m[i][s])).collect()).collect();
    let inv = linalg::inverse(&a)?;
    let mut rhs = vec![Rational::zero(); input.k];
    rhs[input.k - 1] = Rational::one();
    Some(linalg::mul_vec(&inv, &rhs))
}

pub fn build_edges(input: &ToricInput, fps: &[FixedPoint]) -> Result<Vec<Edge>> {
    let index: HashMap<&[usize], usize> = fps.iter().enumerate().map(|(i, fp)| (fp.alpha.as_slice(), i)).collect();
    let mut edges = Vec::new();
    for (src, fp) in fps.iter().enumerate() {
        for j in (0..input.n).filter(|j| !fp.contains(*j)) {
            let mut found: Vec<(usize, usize, Vec<i64>)> = Vec::new();
            for &jprime in &fp.alpha {
                let Some(d) = trial_degree(input, &fp.alpha, jprime, j) else {
                    continue;
                };
                if d.iter().any(|x| !x.is_integer()) {
                    continue;
                }
                let d: Vec<i64> = d.iter().map(|x| i64::try_from(x.to_integer()).expect("small degree")).collect();
                if input.d_vals(&d)[jprime] != 1 {
                    continue;
                }
                if let Some(&tgt) = index.get(target_subset(&fp.alpha, jprime, j).as_slice()) {
                    found.push((jprime, tgt, d));
                }
            }
            let label = format!("{} in direction {}", fp.label(), j + 1);
            if found.len() != 1 {
                return Err(Error::EdgeStructure(format!("{} admissible j′ for {label}", found.len())));
            }
            let (jprime, target, degree) = found.pop().unwrap();
            if ratio_test(input, fp, j) != Some(jprime) {
                return Err(Error::EdgeStructure(format!("ratio test disagrees for {label}")));
            }
            let edge = Edge {
                source: src,
                j,
                target,
                jprime,
                dvals: input.d_vals(&degree),
                lvals: input.l_vals(&degree),
                degree,
            };
            verify_edge(fps, &edge).map_err(|e| Error::EdgeStructure(format!("{label}: {e}")))?;
            edges.push(edge);
        }
    }
    Ok(edges)
}

fn verify_edge(fps: &[FixedPoint], e: &Edge) -> std::result::Result<(), String> {
    let a = &fps[e.source];
    let b = &fps[e.target];
    for &s in &a.alpha {
        if b.contains(s) && e.dvals[s] != 0 {
            return Err(format!("D_{} ≠ 0 on a common index", s + 1));
        }
    }
    if e.dvals[e.j] != 1 || e.dvals[e.jprime] != 1 {
        return Err("D_j or D_j′ differs from 1".into());
    }
    let uj = &a.u[e.j];
    if *uj != -&b.u[e.jprime] {
        return Err("u_j(α) ≠ −u_j′(β)".into());
    }
    let shifted = |x: &Poly, y: &Poly, c: i64| *x == y + &uj.scale(&rat(c));
    for s in 0..a.u.len() {
        if !shifted(&a.u[s], &b.u[s], e.dvals[s]) {
            return Err(format!("u_{} transport identity fails", s + 1));
        }
    }
    for t in 0..a.v.len() {
        if !shifted(&a.v[t], &b.v[t], e.lvals[t]) {
            return Err(format!("v_{} transport identity fails", t + 1));
        }
    }
    Ok(())
}
