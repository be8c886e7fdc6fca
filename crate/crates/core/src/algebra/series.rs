//! Truncated power series in q = (q₁..q_k), graded by an ample class t*.
//!
//! A term q^d is kept iff ⟨t*, d⟩ ≤ bound. The coefficients are generic so
//! that the same machinery serves scalar series, rational-function series and
//! series of localized classes.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::ratfunc::RationalFunction;
use super::rational::{factorial, rat, Rational};
use crate::error::{Error, Result};

pub type Degree = Vec<i64>;

pub trait Coefficient: Clone + Debug + PartialEq {
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    /// Whether the two values live in the same coefficient ring.
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
    /// Multiplication by a polynomial in the global variables (ħ, z, …).
    fn mul_poly(&self, _p: &Poly) -> Result<Self> {
        Err(Error::PayloadMismatch("coefficients cannot absorb polynomial factors".into()))
    }
}

impl Coefficient for Rational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Coefficient for RationalFunction {
    fn add(&self, other: &Self) -> Self {
        RationalFunction::add(self, other)
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunction::mul(self, other)
    }
    fn scale(&self, c: &Rational) -> Self {
        RationalFunction::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn compatible(&self, other: &Self) -> bool {
        self.nvars() == other.nvars()
    }
    fn mul_poly(&self, p: &Poly) -> Result<Self> {
        Ok(self.mul_poly(p))
    }
}

/// The truncation functional ⟨t*, ·⟩ with its bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub weights: Vec<Rational>,
    pub bound: Rational,
}

impl Grading {
    pub fn new(weights: Vec<Rational>, bound: u64) -> Arc<Self> {
        Arc::new(Grading { weights, bound: rat(bound as i64) })
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn pair(&self, d: &[i64]) -> Rational {
        self.weights.iter().zip(d).map(|(w, &x)| w * rat(x)).sum()
    }

    pub fn admits(&self, d: &[i64]) -> bool {
        self.pair(d) <= self.bound
    }

    pub fn with_bound(&self, bound: u64) -> Arc<Self> {
        Arc::new(Grading { weights: self.weights.clone(), bound: rat(bound as i64) })
    }
}

pub fn add_degrees(a: &[i64], b: &[i64]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_degrees(a: &[i64], b: &[i64]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedQSeries<C> {
    grading: Arc<Grading>,
    terms: BTreeMap<Degree, C>,
}

impl<C: Coefficient> GradedQSeries<C> {
    pub fn zero(grading: Arc<Grading>) -> Self {
        GradedQSeries { grading, terms: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (Degree, C)>>(grading: Arc<Grading>, it: I) -> Self {
        let mut s = Self::zero(grading);
        for (d, c) in it {
            s.add_term(d, c);
        }
        s
    }

    pub fn constant(grading: Arc<Grading>, c: C) -> Self {
        let k = grading.rank();
        Self::from_terms(grading, [(vec![0; k], c)])
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    pub fn rank(&self) -> usize {
        self.grading.rank()
    }

    pub fn bound(&self) -> &Rational {
        &self.grading.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Degree, &C)> {
        self.terms.iter()
    }

    /// Terms sorted by ⟨t*, d⟩, then lexicographically.
    pub fn sorted_terms(&self) -> Vec<(&Degree, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.grading.pair(a.0).cmp(&self.grading.pair(b.0)).then(a.0.cmp(b.0)));
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &[i64]) -> Option<&C> {
        self.terms.get(d)
    }

    /// Adds `c q^d`, ignoring degrees beyond the truncation.
    pub fn add_term(&mut self, d: Degree, c: C) {
        assert_eq!(d.len(), self.rank(), "degree rank mismatch");
        if c.is_zero() || !self.grading.admits(&d) {
            return;
        }
        match self.terms.remove(&d) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(d, s);
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<Arc<Grading>> {
        if self.grading.weights != other.grading.weights {
            return Err(Error::PayloadMismatch("series with different gradings".into()));
        }
        if let (Some(a), Some(b)) = (self.terms.values().next(), other.terms.values().next()) {
            if !a.compatible(b) {
                return Err(Error::PayloadMismatch("incompatible coefficient rings".into()));
            }
        }
        Ok(if self.grading.bound <= other.grading.bound { self.grading.clone() } else { other.grading.clone() })
    }

    pub fn truncate(&self, grading: Arc<Grading>) -> Self {
        Self::from_terms(grading, self.terms.iter().map(|(d, c)| (d.clone(), c.clone())))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let g = self.check_compatible(other)?;
        let mut out = self.truncate(g);
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        GradedQSeries {
            grading: self.grading.clone(),
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let g = self.check_compatible(other)?;
        let mut out = Self::zero(g.clone());
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let d = add_degrees(d1, d2);
                if g.admits(&d) {
                    out.add_term(d, c1.mul(c2));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.grading.clone(), self.terms.iter().map(|(d, x)| (d.clone(), x.scale(c))))
    }

    pub fn map<D: Coefficient, F: FnMut(&Degree, &C) -> Result<D>>(&self, mut f: F) -> Result<GradedQSeries<D>> {
        let mut out = GradedQSeries::zero(self.grading.clone());
        for (d, c) in &self.terms {
            out.add_term(d.clone(), f(d, c)?);
        }
        Ok(out)
    }

    /// Multiplies every coefficient by a scalar series.
    pub fn mul_scalar_series(&self, s: &GradedQSeries<Rational>) -> Result<Self> {
        if self.grading.weights != s.grading.weights {
            return Err(Error::PayloadMismatch("series with different gradings".into()));
        }
        let g = if self.grading.bound <= s.grading.bound { self.grading.clone() } else { s.grading.clone() };
        let mut out = Self::zero(g.clone());
        for (d1, c) in &self.terms {
            for (d2, x) in &s.terms {
                let d = add_degrees(d1, d2);
                if g.admits(&d) {
                    out.add_term(d, c.scale(x));
                }
            }
        }
        Ok(out)
    }

    fn zero_degree(&self) -> Degree {
        vec![0; self.rank()]
    }

    /// Smallest positive ⟨t*, d⟩ over the support; errors on a non-positive one.
    fn min_positive_grade(&self) -> Result<Option<Rational>> {
        let mut min: Option<Rational> = None;
        for d in self.terms.keys() {
            let g = self.grading.pair(d);
            if !g.is_positive() {
                return Err(Error::Series(format!("term q^{d:?} has non-positive grade")));
            }
            min = Some(match min {
                Some(m) if m <= g => m,
                _ => g,
            });
        }
        Ok(min)
    }

    fn power_count(&self) -> Result<usize> {
        Ok(match self.min_positive_grade()? {
            None => 0,
            Some(g) => (&self.grading.bound / g).floor().to_integer().try_into().unwrap_or(0),
        })
    }

    /// Formal exponential; `one` is the unit of the coefficient ring.
    pub fn exp(&self, one: &C) -> Result<Self> {
        if self.terms.contains_key(&self.zero_degree()) {
            return Err(Error::Series("exp requires a zero constant term".into()));
        }
        let n = self.power_count()?;
        let mut out = Self::constant(self.grading.clone(), one.clone());
        let mut power = out.clone();
        for i in 1..=n {
            power = power.mul(self)?;
            out = out.add(&power.scale(&(Rational::one() / Rational::from_integer(factorial(i as u64)))))?;
        }
        Ok(out)
    }

    /// Formal logarithm of a series with constant term `one`.
    pub fn log(&self, one: &C) -> Result<Self> {
        match self.terms.get(&self.zero_degree()) {
            Some(c) if c == one => {}
            _ => return Err(Error::Series("log requires constant term 1".into())),
        }
        let b = self.sub(&Self::constant(self.grading.clone(), one.clone()))?;
        let n = b.power_count()?;
        let mut out = Self::zero(self.grading.clone());
        let mut power = Self::constant(self.grading.clone(), one.clone());
        for i in 1..=n {
            power = power.mul(&b)?;
            let sign = if i % 2 == 1 { rat(1) } else { rat(-1) };
            out = out.add(&power.scale(&(sign / rat(i as i64))))?;
        }
        Ok(out)
    }

    /// q^d ↦ q^d · exp(Σ dᵢ φᵢ(q)).
    pub fn substitute_shift(&self, phi: &[GradedQSeries<Rational>]) -> Result<Self> {
        if phi.len() != self.rank() {
            return Err(Error::Series("one shift series per q-variable required".into()));
        }
        let zero = self.zero_degree();
        for p in phi {
            if p.coefficient(&zero).is_some() {
                return Err(Error::NonTriangular);
            }
        }
        let mut out = Self::zero(self.grading.clone());
        for (d, c) in &self.terms {
            let mut exponent = GradedQSeries::<Rational>::zero(self.grading.clone());
            for (p, &di) in phi.iter().zip(d) {
                if di != 0 {
                    exponent = exponent.add(&p.scale(&rat(di)))?;
                }
            }
            let e = exponent.exp(&Rational::one())?;
            for (d2, s) in &e.terms {
                out.add_term(add_degrees(d, d2), c.scale(s));
            }
        }
        Ok(out)
    }

    /// q^d ↦ q^d · exp(ħ⟨z, d⟩), expanded through total z-degree `zcap`.
    pub fn substitute_exp_hbar_z(&self, nvars: usize, hbar: usize, z: &[usize], zcap: u32) -> Result<Self> {
        if z.len() != self.rank() {
            return Err(Error::Series("one z-variable per q-variable required".into()));
        }
        let mut out = Self::zero(self.grading.clone());
        for (d, c) in &self.terms {
            let mut arg: Option<Poly> = None;
            for (&zi, &di) in z.iter().zip(d) {
                if di == 0 {
                    continue;
                }
                let term = (&Poly::var(nvars, hbar) * &Poly::var(nvars, zi)).scale(&rat(di));
                arg = Some(match arg {
                    Some(a) => &a + &term,
                    None => term,
                });
            }
            let Some(arg) = arg else {
                out.add_term(d.clone(), c.clone());
                continue;
            };
            let mut factor = Poly::one(nvars);
            let mut power = Poly::one(nvars);
            for i in 1..=zcap {
                power = &power * &arg;
                factor = &factor + &power.scale(&(Rational::one() / Rational::from_integer(factorial(i as u64))));
            }
            out.add_term(d.clone(), c.mul_poly(&factor)?);
        }
        Ok(out)
    }
}

/// Compositional inverse of the triangular shift q ↦ Q = q·exp(φ(q)):
/// returns ψ with q = Q·exp(ψ(Q)).
pub fn reverse_shift(phi: &[GradedQSeries<Rational>]) -> Result<Vec<GradedQSeries<Rational>>> {
    let Some(first) = phi.first() else {
        return Ok(Vec::new());
    };
    let mut psi: Vec<GradedQSeries<Rational>> = phi.iter().map(|p| GradedQSeries::zero(p.grading().clone())).collect();
    // Each pass fixes at least one more grade level; there are finitely many.
    let levels: usize = first.grading().bound.to_integer().try_into().unwrap_or(0);
    for _ in 0..(levels + 2) * 64 {
        let mut next = Vec::with_capacity(phi.len());
        for p in phi {
            next.push(p.substitute_shift(&psi)?.neg());
        }
        if next == psi {
            return Ok(psi);
        }
        psi = next;
    }
    Err(Error::Series("series reversion did not converge".into()))
}
