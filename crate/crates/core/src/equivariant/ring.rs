//! Ordinary cohomology `H*(X)` presented by the classes `p_i` and the top
//! intersection numbers, with coefficients rational in the global variables.
//!
//! Elements are kept in a normal form: each graded piece is expressed in a
//! monomial basis chosen greedily so that the Poincaré pairing is nondegenerate.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::{ClassAlgebra, Factor, Localization};
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RationalFunction;
use crate::algebra::rational::{rat, Rational};
use crate::algebra::series::Coefficient;
use crate::error::{Error, Result};
use crate::toric::linalg::{self, Matrix};

type Exps = Vec<u32>;

fn monomials(k: usize, degree: u32) -> Vec<Exps> {
    fn rec(i: usize, left: u32, cur: &mut Exps, out: &mut Vec<Exps>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, degree, &mut vec![0; k], &mut out);
    out
}

fn add_exps(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[derive(Debug, PartialEq)]
struct Graded {
    basis: Vec<Exps>,
    dual: Vec<Exps>,
    /// `inv[d][b]`: coordinate b of the class whose pairing vector is the unit vector at d.
    inv: Matrix,
}

#[derive(Debug, PartialEq)]
pub struct RingTables {
    k: usize,
    dim: usize,
    nvars: usize,
    top: BTreeMap<Exps, Rational>,
    graded: Vec<Graded>,
}

impl RingTables {
    fn integral(&self, e: &[u32]) -> Rational {
        self.top.get(e).cloned().unwrap_or_else(Rational::zero)
    }
}

#[derive(Clone, Debug)]
pub struct RingElement {
    tables: Arc<RingTables>,
    terms: BTreeMap<Exps, RationalFunction>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl RingElement {
    pub fn terms(&self) -> &BTreeMap<Exps, RationalFunction> {
        &self.terms
    }

    fn raw(tables: &Arc<RingTables>, terms: BTreeMap<Exps, RationalFunction>) -> Self {
        RingElement { tables: tables.clone(), terms }
    }

    /// Rewrites every graded piece in the chosen basis.
    fn normalize(tables: &Arc<RingTables>, terms: BTreeMap<Exps, RationalFunction>) -> Self {
        let mut by_degree: BTreeMap<u32, Vec<(Exps, RationalFunction)>> = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let deg: u32 = e.iter().sum();
            if deg as usize > tables.dim {
                continue;
            }
            by_degree.entry(deg).or_default().push((e, c));
        }
        let mut out = BTreeMap::new();
        for (deg, parts) in by_degree {
            let g = &tables.graded[deg as usize];
            if g.basis.is_empty() {
                continue;
            }
            let w: Vec<RationalFunction> = g
                .dual
                .iter()
                .map(|d| {
                    parts.iter().fold(RationalFunction::zero(tables.nvars), |acc, (e, c)| {
                        let i = tables.integral(&add_exps(e, d));
                        if Zero::is_zero(&i) {
                            acc
                        } else {
                            acc.add(&c.scale(&i))
                        }
                    })
                })
                .collect();
            for (bi, b) in g.basis.iter().enumerate() {
                let mut coord = RationalFunction::zero(tables.nvars);
                for (di, wd) in w.iter().enumerate() {
                    let x = &g.inv[di][bi];
                    if !Zero::is_zero(x) && !wd.is_zero() {
                        coord = coord.add(&wd.scale(x));
                    }
                }
                if !coord.is_zero() {
                    out.insert(b.clone(), coord);
                }
            }
        }
        RingElement { tables: tables.clone(), terms: out }
    }

    /// Applies `f` to every basis coordinate.
    pub fn try_map_coefficients(&self, f: impl Fn(&RationalFunction) -> Result<RationalFunction>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.insert(e.clone(), v);
            }
        }
        Ok(RingElement::raw(&self.tables, terms))
    }

    /// Degree-zero coefficient.
    pub fn scalar_part(&self) -> RationalFunction {
        self.terms.get(&vec![0; self.tables.k]).cloned().unwrap_or_else(|| RationalFunction::zero(self.tables.nvars))
    }

    pub fn inv(&self) -> Result<Self> {
        let s = self.scalar_part();
        if s.is_zero() {
            return Err(Error::NotInvertible("class with zero scalar part".into()));
        }
        let s_inv = s.inv()?;
        let mut nil = self.terms.clone();
        nil.remove(&vec![0; self.tables.k]);
        let n = RingElement::raw(&self.tables, nil).scale_rf(&s_inv).neg();
        let one = RingElement::scalar_in(&self.tables, RationalFunction::one(self.tables.nvars));
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.tables.dim {
            power = power.mul(&n);
            acc = acc.add(&power);
        }
        Ok(acc.scale_rf(&s_inv))
    }

    pub fn scale_rf(&self, f: &RationalFunction) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.mul(f))).filter(|(_, c)| !c.is_zero()).collect();
        RingElement::raw(&self.tables, terms)
    }

    fn scalar_in(tables: &Arc<RingTables>, f: RationalFunction) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(vec![0; tables.k], f);
        }
        RingElement::raw(tables, terms)
    }

    /// `∫_X` of the element.
    pub fn integral(&self) -> RationalFunction {
        let mut acc = RationalFunction::zero(self.tables.nvars);
        for (e, c) in &self.terms {
            let i = self.tables.integral(e);
            if !Zero::is_zero(&i) {
                acc = acc.add(&c.scale(&i));
            }
        }
        acc
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("p{}", i + 1) } else { format!("p{}^{x}", i + 1) })
                    .collect();
                let c = c.fmt_with(names);
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl Coefficient for RingElement {
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let v = match terms.remove(e) {
                Some(x) => x.add(c),
                None => c.clone(),
            };
            if !v.is_zero() {
                terms.insert(e.clone(), v);
            }
        }
        RingElement::raw(&self.tables, terms)
    }

    fn neg(&self) -> Self {
        RingElement::raw(&self.tables, self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Exps, RationalFunction> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = add_exps(e1, e2);
                if e.iter().sum::<u32>() as usize > self.tables.dim {
                    continue;
                }
                let v = c1.mul(c2);
                let slot = terms.entry(e).or_insert_with(|| RationalFunction::zero(self.tables.nvars));
                *slot = slot.add(&v);
            }
        }
        RingElement::normalize(&self.tables, terms)
    }

    fn scale(&self, c: &Rational) -> Self {
        if Zero::is_zero(c) {
            return RingElement::raw(&self.tables, BTreeMap::new());
        }
        RingElement::raw(&self.tables, self.terms.iter().map(|(e, x)| (e.clone(), x.scale(c))).collect())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn compatible(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tables, &other.tables) || self.tables == other.tables
    }

    fn mul_poly(&self, p: &Poly) -> Result<Self> {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.mul_poly(p))).filter(|(_, c)| !c.is_zero()).collect();
        Ok(RingElement::raw(&self.tables, terms))
    }
}

/// `H*(X)` together with the linear forms `u_j`, `v_a` of a toric presentation.
pub struct CohomologyRing {
    tables: Arc<RingTables>,
    m: Vec<Vec<i64>>,
    bundle: Vec<Vec<i64>>,
    hbar: usize,
}

impl CohomologyRing {
    /// Reads the intersection numbers off certified residue sums at λ = 0.
    pub fn new(loc: &Localization) -> Result<Self> {
        if loc.is_specialized() {
            return Err(Error::Uncertified);
        }
        let input = &loc.toric.input;
        let (k, dim) = (input.k, loc.toric.dim());
        let nvars = loc.toric.nvars();
        let mut top = BTreeMap::new();
        for e in monomials(k, dim as u32) {
            let mut class = loc.one();
            for (i, &x) in e.iter().enumerate() {
                for _ in 0..x {
                    class = class.mul(&loc.class_p(i));
                }
            }
            let r = loc.integrate_certified(&class, false)?;
            let v = loc.nonequivariant_limit(&r)?.constant_value().ok_or(Error::Uncertified)?;
            if !Zero::is_zero(&v) {
                top.insert(e, v);
            }
        }
        let mut graded = Vec::new();
        for s in 0..=dim as u32 {
            let mons = monomials(k, s);
            let duals = monomials(k, dim as u32 - s);
            let pair = |b: &Exps, d: &Exps| top.get(&add_exps(b, d)).cloned().unwrap_or_else(Rational::zero);
            let mut basis: Vec<Exps> = Vec::new();
            for mono in &mons {
                let mut trial = basis.clone();
                trial.push(mono.clone());
                let mat: Matrix = trial.iter().map(|b| duals.iter().map(|d| pair(b, d)).collect()).collect();
                if linalg::rank(&mat) == trial.len() {
                    basis = trial;
                }
            }
            let mut dual: Vec<Exps> = Vec::new();
            for d in &duals {
                let mut trial = dual.clone();
                trial.push(d.clone());
                let mat: Matrix = trial.iter().map(|d| basis.iter().map(|b| pair(b, d)).collect()).collect();
                if linalg::rank(&mat) == trial.len() {
                    dual = trial;
                }
            }
            // inv maps the pairing vector w (indexed by dual) to basis coordinates
            let g: Matrix = dual.iter().map(|d| basis.iter().map(|b| pair(b, d)).collect()).collect();
            let inv = if basis.is_empty() {
                Vec::new()
            } else {
                linalg::transpose(&linalg::inverse(&g).expect("nondegenerate pairing"))
            };
            graded.push(Graded { basis, dual, inv });
        }
        let tables = Arc::new(RingTables { k, dim, nvars, top, graded });
        Ok(CohomologyRing { tables, m: input.m.clone(), bundle: input.bundle.clone(), hbar: loc.toric.vars.hbar() })
    }

    /// Whether both rings have the same intersection numbers in the basis p.
    pub fn same_presentation(&self, other: &CohomologyRing) -> bool {
        self.tables == other.tables
    }

    /// Re-expresses an element of a ring with the same presentation in this ring.
    pub fn transfer(&self, x: &RingElement) -> RingElement {
        assert!(self.tables == x.tables, "rings differ");
        RingElement::raw(&self.tables, x.terms.clone())
    }

    /// Number of generators `p_i`.
    pub fn rank(&self) -> usize {
        self.tables.k
    }

    pub fn betti(&self) -> Vec<usize> {
        self.tables.graded.iter().map(|g| g.basis.len()).collect()
    }

    pub fn top_intersections(&self) -> &BTreeMap<Exps, Rational> {
        &self.tables.top
    }

    fn linear(&self, coeffs: impl Fn(usize) -> i64) -> RingElement {
        let k = self.tables.k;
        let mut terms = BTreeMap::new();
        for i in 0..k {
            let c = coeffs(i);
            if c != 0 {
                let mut e = vec![0; k];
                e[i] = 1;
                terms.insert(e, RationalFunction::constant(self.tables.nvars, rat(c)));
            }
        }
        RingElement::normalize(&self.tables, terms)
    }

    pub fn u(&self, j: usize) -> RingElement {
        self.linear(|i| self.m[i][j])
    }

    pub fn v(&self, a: usize) -> RingElement {
        self.linear(|i| self.bundle[i][a])
    }

    fn factor(&self, f: &Factor) -> RingElement {
        let (base, m) = match f {
            Factor::U(j, m) => (self.u(*j), *m),
            Factor::V(a, m) => (self.v(*a), *m),
        };
        let h = Poly::var(self.tables.nvars, self.hbar).scale(&rat(m));
        base.add(&RingElement::scalar_in(&self.tables, RationalFunction::from_poly(h)))
    }
}

impl ClassAlgebra for CohomologyRing {
    type Elem = RingElement;

    fn nvars(&self) -> usize {
        self.tables.nvars
    }

    fn hbar(&self) -> usize {
        self.hbar
    }

    fn one(&self) -> RingElement {
        RingElement::scalar_in(&self.tables, RationalFunction::one(self.tables.nvars))
    }

    fn p(&self, i: usize) -> RingElement {
        self.linear(|x| i64::from(x == i))
    }

    fn scalar(&self, f: &RationalFunction) -> RingElement {
        RingElement::scalar_in(&self.tables, f.clone())
    }

    fn product(&self, c: &Rational, num: &[Factor], den: &[Factor]) -> Result<RingElement> {
        let mut acc = self.one().scale(c);
        for f in num {
            acc = acc.mul(&self.factor(f));
        }
        for f in den {
            acc = acc.mul(&self.factor(f).inv()?);
        }
        Ok(acc)
    }

    fn is_zero_class(&self, x: &RingElement) -> bool {
        Coefficient::is_zero(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::LambdaMode;
    use crate::toric::{Toric, ToricInput};

    fn ring(m: Vec<Vec<i64>>, t: Vec<i64>) -> CohomologyRing {
        let input = ToricInput::new(m, t.into_iter().map(rat).collect(), vec![]).unwrap();
        let loc = Localization::new(Toric::new(input, None).unwrap(), LambdaMode::Symbolic);
        CohomologyRing::new(&loc).unwrap()
    }

    #[test]
    fn x1_and_x2_share_a_presentation() {
        let r1 = ring(vec![vec![1, 1, 0, -1, -1], vec![0, 0, 1, 1, 1]], vec![1, 2]);
        let r2 = ring(vec![vec![1, 1, 0, 0, -2], vec![0, 0, 1, 1, 1]], vec![1, 2]);
        assert!(r1.same_presentation(&r2));
        assert_eq!(r1.betti(), vec![1, 2, 2, 1]);
        // p1² = 0 and p2³ = 2 p1 p2²
        let p1 = r1.p(0);
        let p2 = r1.p(1);
        assert!(p1.mul(&p1).is_zero());
        let lhs = p2.mul(&p2).mul(&p2);
        let rhs = p1.mul(&p2).mul(&p2).scale(&rat(2));
        assert_eq!(lhs, rhs);
        // the classical relations hold in both presentations
        assert!(r1.u(0).mul(&r1.u(1)).is_zero());
        assert!(r1.u(2).mul(&r1.u(3)).mul(&r1.u(4)).is_zero());
        assert!(r2.u(2).mul(&r2.u(3)).mul(&r2.u(4)).is_zero());
    }

    #[test]
    fn nilpotent_inverse() {
        let r = ring(vec![vec![1, 1, 1]], vec![1]);
        let x = r.product(&rat(1), &[Factor::U(0, 2)], &[]).unwrap();
        let y = r.product(&rat(1), &[], &[Factor::U(0, 2)]).unwrap();
        assert_eq!(x.mul(&y), r.one());
    }
}
