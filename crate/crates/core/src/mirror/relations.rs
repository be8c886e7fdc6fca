//! Quantum-cohomology relation symbols `u^{D(d)} = q^d v^{L(d)}` written in the basis p.

use crate::algebra::series::Degree;
use crate::error::{Error, Result};
use crate::toric::Toric;

#[derive(Clone, Debug, PartialEq)]
pub struct RelationSymbol {
    pub d: Degree,
    /// `(j, D_j)` with `D_j > 0`.
    pub lhs: Vec<(usize, i64)>,
    /// `(j, −D_j)` with `D_j < 0`, moved to the q^d side.
    pub rhs_u: Vec<(usize, i64)>,
    /// `(a, L_a)` with `L_a > 0`.
    pub rhs_v: Vec<(usize, i64)>,
}

fn generator(prefix: &str, i: usize, k: usize) -> String {
    if k == 1 {
        prefix.to_string()
    } else {
        format!("{prefix}{}", i + 1)
    }
}

/// `Σ c_i p_i`, positive terms first.
pub fn linear_form(coeffs: &[i64]) -> String {
    let k = coeffs.len();
    let mut order: Vec<usize> = (0..k).filter(|&i| coeffs[i] > 0).collect();
    order.extend((0..k).filter(|&i| coeffs[i] < 0));
    let mut out = String::new();
    for (n, &i) in order.iter().enumerate() {
        let c = coeffs[i];
        let mag = c.unsigned_abs();
        let body = if mag == 1 { generator("p", i, k) } else { format!("{mag}*{}", generator("p", i, k)) };
        match (n, c < 0) {
            (0, false) => out.push_str(&body),
            (0, true) => out.push_str(&format!("-{body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
            (_, true) => out.push_str(&format!(" - {body}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Product of powers of linear forms, merging equal forms in first-seen order.
fn product(forms: Vec<(Vec<i64>, i64)>) -> String {
    let mut merged: Vec<(Vec<i64>, i64)> = Vec::new();
    for (f, e) in forms {
        match merged.iter_mut().find(|(g, _)| *g == f) {
            Some((_, x)) => *x += e,
            None => merged.push((f, e)),
        }
    }
    let parts: Vec<String> = merged
        .into_iter()
        .map(|(f, e)| {
            let s = linear_form(&f);
            let s = if f.iter().filter(|&&c| c != 0).count() > 1 || f.iter().any(|&c| c.abs() > 1 || c < 0) {
                format!("({s})")
            } else {
                s
            };
            if e == 1 {
                s
            } else {
                format!("{s}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

impl RelationSymbol {
    /// e.g. `p1^2 = q1*(p2 - p1)^2`.
    pub fn render(&self, toric: &Toric) -> String {
        let input = &toric.input;
        let k = input.k;
        let column = |rows: &Vec<Vec<i64>>, j: usize| -> Vec<i64> { rows.iter().map(|r| r[j]).collect() };
        let lhs = product(self.lhs.iter().map(|&(j, e)| (column(&input.m, j), e)).collect());
        let mut q: Vec<String> = Vec::new();
        for (i, &di) in self.d.iter().enumerate() {
            match di {
                0 => {}
                1 => q.push(generator("q", i, k)),
                _ => q.push(format!("{}^{di}", generator("q", i, k))),
            }
        }
        let mut forms: Vec<(Vec<i64>, i64)> = self.rhs_u.iter().map(|&(j, e)| (column(&input.m, j), e)).collect();
        forms.extend(self.rhs_v.iter().map(|&(a, e)| (column(&input.bundle, a), e)));
        let rest = product(forms);
        let mut rhs = q.join("*");
        if !rest.is_empty() {
            rhs = if rhs.is_empty() { rest } else { format!("{rhs}*{rest}") };
        }
        let lhs = if lhs.is_empty() { "1".to_string() } else { lhs };
        let rhs = if rhs.is_empty() { "1".to_string() } else { rhs };
        format!("{lhs} = {rhs}")
    }
}

pub fn quantum_relations(toric: &Toric, degrees: &[Degree]) -> Result<Vec<RelationSymbol>> {
    degrees
        .iter()
        .map(|d| {
            if d.len() != toric.input.k || !toric.lattice.contains(d) {
                return Err(Error::NotInSemigroup(format!("{d:?}")));
            }
            let dv = toric.input.d_vals(d);
            let lv = toric.input.l_vals(d);
            if let Some(a) = lv.iter().position(|&x| x < 0) {
                return Err(Error::BundleNegative(format!("L_{}({d:?}) < 0", a + 1)));
            }
            Ok(RelationSymbol {
                d: d.clone(),
                lhs: dv.iter().enumerate().filter(|(_, &x)| x > 0).map(|(j, &x)| (j, x)).collect(),
                rhs_u: dv.iter().enumerate().filter(|(_, &x)| x < 0).map(|(j, &x)| (j, -x)).collect(),
                rhs_v: lv.iter().enumerate().filter(|(_, &x)| x > 0).map(|(a, &x)| (a, x)).collect(),
            })
        })
        .collect()
}

/// The q = 0 relations `u_{j₁}⋯u_{j_r} = 0` from primitive collections.
pub fn classical_relations(toric: &Toric) -> Vec<String> {
    toric
        .primitive_collections()
        .iter()
        .map(|c| {
            let names: Vec<String> = c.iter().map(|j| format!("u{}", j + 1)).collect();
            format!("{} = 0", names.join("*"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::toric::ToricInput;

    fn toric(m: Vec<Vec<i64>>, t: Vec<i64>, l: Vec<Vec<i64>>) -> Toric {
        Toric::new(ToricInput::new(m, t.into_iter().map(rat).collect(), l).unwrap(), None).unwrap()
    }

    #[test]
    fn projective_plane() {
        let x = toric(vec![vec![1, 1, 1]], vec![1], vec![]);
        let r = quantum_relations(&x, &[vec![1]]).unwrap();
        assert_eq!(r[0].render(&x), "p^3 = q");
    }

    #[test]
    fn x1_relations() {
        let x = toric(vec![vec![1, 1, 0, -1, -1], vec![0, 0, 1, 1, 1]], vec![1, 2], vec![]);
        let r = quantum_relations(&x, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(r[0].render(&x), "p1^2 = q1*(p2 - p1)^2");
        assert_eq!(r[1].render(&x), "p2*(p2 - p1)^2 = q2");
        assert_eq!(classical_relations(&x), vec!["u1*u2 = 0", "u3*u4*u5 = 0"]);
        assert!(quantum_relations(&x, &[vec![-1, 0]]).is_err());
    }

    #[test]
    fn quintic_and_x2() {
        let q = toric(vec![vec![1; 5]], vec![1], vec![vec![5]]);
        assert_eq!(quantum_relations(&q, &[vec![1]]).unwrap()[0].render(&q), "p^5 = q*(5*p)^5");
        let x = toric(vec![vec![1, 1, 0, 0, -2], vec![0, 0, 1, 1, 1]], vec![1, 2], vec![]);
        let r = quantum_relations(&x, &[vec![1, 0]]).unwrap();
        assert_eq!(r[0].render(&x), "p1^2 = q1*(p2 - 2*p1)^2");
    }
}
