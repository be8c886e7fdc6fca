//! Equivariant classes via their restrictions to fixed points, and the
//! residue formula for integrating them.

pub mod ring;
pub mod symbol;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::{product_of_factors, RationalFunction};
use crate::algebra::rational::{rat, ratio, Rational};
use crate::algebra::series::Coefficient;
use crate::error::{Error, Result};
use crate::toric::Toric;
pub use ring::{CohomologyRing, RingElement};
pub use symbol::{parse_symbol, Atom, Expr};

/// Whether the equivariant parameters stay symbolic or are restricted to a
/// random line `λ = c·s` through the origin, with `c` drawn from a seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaMode {
    Symbolic,
    Specialized(u64),
}

/// `u_j + mħ` or `v_a + mħ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    U(usize, i64),
    V(usize, i64),
}

/// A commutative algebra of classes in which the hypergeometric products can
/// be formed.
pub trait ClassAlgebra {
    type Elem: Coefficient;

    fn nvars(&self) -> usize;
    fn hbar(&self) -> usize;
    fn one(&self) -> Self::Elem;
    fn p(&self, i: usize) -> Self::Elem;
    /// A scalar (class-independent) rational function as a class.
    fn scalar(&self, f: &RationalFunction) -> Self::Elem;
    /// `c · Π num / Π den`.
    fn product(&self, c: &Rational, num: &[Factor], den: &[Factor]) -> Result<Self::Elem>;
    fn is_zero_class(&self, x: &Self::Elem) -> bool;
    /// Where a nonzero class is supported, for failure reports.
    fn nonzero_locus(&self, _x: &Self::Elem) -> String {
        "class".into()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedClass {
    pub values: Vec<RationalFunction>,
}

impl LocalizedClass {
    pub fn zip(&self, other: &Self, f: impl Fn(&RationalFunction, &RationalFunction) -> RationalFunction) -> Self {
        assert_eq!(self.values.len(), other.values.len(), "classes over different fixed-point sets");
        LocalizedClass { values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        LocalizedClass { values: self.values.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&RationalFunction) -> Result<RationalFunction>) -> Result<Self> {
        Ok(LocalizedClass { values: self.values.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn inv(&self) -> Result<Self> {
        self.try_map(|v| v.inv().map_err(|_| Error::NotInvertible("class vanishes at a fixed point".into())))
    }
}

impl Coefficient for LocalizedClass {
    fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }
    fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.mul(b))
    }
    fn scale(&self, c: &Rational) -> Self {
        self.map(|a| a.scale(c))
    }
    fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
    fn compatible(&self, other: &Self) -> bool {
        self.values.len() == other.values.len()
    }
    fn mul_poly(&self, p: &Poly) -> Result<Self> {
        Ok(self.map(|a| a.mul_poly(p)))
    }
}

/// A residue sum together with its polynomiality certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Integral {
    pub value: RationalFunction,
    /// The reduced denominator is 1.
    pub certified: bool,
    /// Computed with numeric equivariant parameters.
    pub specialized: bool,
}

pub struct Localization {
    pub toric: Toric,
    pub mode: LambdaMode,
    /// The direction `c` of λ₁..λ_N, λ′₁..λ′_l in specialized mode.
    pub direction: Option<Vec<Rational>>,
    p: Vec<Vec<Poly>>,
    u: Vec<Vec<Poly>>,
    v: Vec<Vec<Poly>>,
}

/// Random direction `c` for the line `λ = c·s`, with all tangent weights nonzero on it.
fn random_direction(toric: &Toric, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = toric.vars.equivariant_vars().len();
    loop {
        let dir: Vec<Rational> = (0..count)
            .map(|_| {
                let mut n = 0;
                while n == 0 {
                    n = rng.gen_range(-97i64..=97);
                }
                ratio(n, rng.gen_range(1i64..=13))
            })
            .collect();
        let generic = toric.fps.iter().all(|fp| {
            let nonzero = |p: &Poly| !restrict_to_line(p, &dir).is_zero();
            (0..toric.input.n).filter(|j| !fp.contains(*j)).all(|j| nonzero(&fp.u[j])) && fp.v.iter().all(nonzero)
        });
        if generic {
            return dir;
        }
    }
}

/// Substitutes `λ_i = c_i·s`, where `s` occupies the slot of the first variable.
fn restrict_to_line(p: &Poly, dir: &[Rational]) -> Poly {
    let nv = p.nvars();
    let s = Poly::var(nv, 0);
    let mut out = p.substitute(0, &s.scale(&dir[0]));
    for (i, c) in dir.iter().enumerate().skip(1) {
        out = out.substitute(i, &s.scale(c));
    }
    out
}

fn restrict_rf_to_line(f: &RationalFunction, dir: &[Rational]) -> Result<RationalFunction> {
    let nv = f.nvars();
    let s = Poly::var(nv, 0);
    let mut out = f.substitute(0, &s.scale(&dir[0]))?;
    for (i, c) in dir.iter().enumerate().skip(1) {
        out = out.substitute(i, &s.scale(c))?;
    }
    Ok(out)
}

/// Pairwise summation keeps intermediate denominators small.
pub fn sum_tree(mut terms: Vec<RationalFunction>, nvars: usize) -> RationalFunction {
    if terms.is_empty() {
        return RationalFunction::zero(nvars);
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.add(&b)),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

impl Localization {
    pub fn new(toric: Toric, mode: LambdaMode) -> Self {
        let direction = match mode {
            LambdaMode::Symbolic => None,
            LambdaMode::Specialized(seed) => Some(random_direction(&toric, seed)),
        };
        let spec = |p: &Poly| match &direction {
            None => p.clone(),
            Some(dir) => restrict_to_line(p, dir),
        };
        let p = toric.fps.iter().map(|fp| fp.p.iter().map(spec).collect()).collect();
        let u = toric.fps.iter().map(|fp| fp.u.iter().map(spec).collect()).collect();
        let v = toric.fps.iter().map(|fp| fp.v.iter().map(spec).collect()).collect();
        Localization { toric, mode, direction, p, u, v }
    }

    pub fn is_specialized(&self) -> bool {
        self.direction.is_some()
    }

    /// Variable names; in specialized mode the first slot holds the line parameter `s`.
    pub fn var_names(&self) -> Vec<String> {
        let mut names = self.toric.vars.names();
        if self.is_specialized() {
            names[0] = "s".into();
        }
        names
    }

    pub fn nvars(&self) -> usize {
        self.toric.nvars()
    }

    pub fn n_points(&self) -> usize {
        self.toric.fps.len()
    }

    pub fn p_at(&self, alpha: usize, i: usize) -> &Poly {
        &self.p[alpha][i]
    }

    pub fn u_at(&self, alpha: usize, j: usize) -> &Poly {
        &self.u[alpha][j]
    }

    pub fn v_at(&self, alpha: usize, a: usize) -> &Poly {
        &self.v[alpha][a]
    }

    /// Applies this localization's λ-specialization to a symbolic value.
    pub fn specialize(&self, f: &RationalFunction) -> Result<RationalFunction> {
        match &self.direction {
            None => Ok(f.clone()),
            Some(dir) => restrict_rf_to_line(f, dir),
        }
    }

    fn per_point(&self, f: impl Fn(usize) -> RationalFunction) -> LocalizedClass {
        LocalizedClass { values: (0..self.n_points()).map(f).collect() }
    }

    pub fn constant(&self, f: &RationalFunction) -> LocalizedClass {
        self.per_point(|_| f.clone())
    }

    pub fn class_p(&self, i: usize) -> LocalizedClass {
        self.per_point(|a| RationalFunction::from_poly(self.p[a][i].clone()))
    }

    pub fn class_u(&self, j: usize) -> LocalizedClass {
        self.per_point(|a| RationalFunction::from_poly(self.u[a][j].clone()))
    }

    pub fn class_v(&self, b: usize) -> LocalizedClass {
        self.per_point(|a| RationalFunction::from_poly(self.v[a][b].clone()))
    }

    pub fn class_from_expr(&self, e: &Expr) -> Result<LocalizedClass> {
        let inp = &self.toric.input;
        e.check_indices(inp.k, inp.n, inp.l)?;
        let nv = self.nvars();
        let values = (0..self.n_points())
            .map(|a| {
                let atom = |x: &Atom| -> Result<Poly> {
                    Ok(match x {
                        Atom::P(i) => self.p[a][*i].clone(),
                        Atom::U(j) => self.u[a][*j].clone(),
                        Atom::V(b) => self.v[a][*b].clone(),
                        Atom::Hbar => Poly::var(nv, self.hbar()),
                    })
                };
                let poly = e.eval(&atom, &|c| Poly::constant(nv, c.clone()), &|x, y| x + y, &|x, y| x * y)?;
                Ok(RationalFunction::from_poly(poly))
            })
            .collect::<Result<_>>()?;
        Ok(LocalizedClass { values })
    }

    /// Evaluates a polynomial in the generators `p_i, u_j, v_a, h` at every fixed point.
    pub fn class_from_symbol(&self, text: &str) -> Result<LocalizedClass> {
        self.class_from_expr(&parse_symbol(text)?)
    }

    /// `detSign(α) · [Π_a v_a(α)] / Π_{j∉α} u_j(α)`.
    pub fn residue_weight(&self, alpha: usize, virtual_class: bool) -> RationalFunction {
        let fp = &self.toric.fps[alpha];
        let den: Vec<Poly> =
            (0..self.toric.input.n).filter(|j| !fp.contains(*j)).map(|j| self.u[alpha][j].clone()).collect();
        let num: Vec<Poly> = if virtual_class { self.v[alpha].clone() } else { Vec::new() };
        product_of_factors(self.nvars(), rat(fp.det_sign as i64), &num, &den).expect("generic weights")
    }

    pub fn integrate(&self, f: &LocalizedClass, virtual_class: bool) -> Integral {
        let terms = (0..self.n_points()).map(|a| f.values[a].mul(&self.residue_weight(a, virtual_class))).collect();
        let value = sum_tree(terms, self.nvars());
        Integral { certified: value.is_polynomial(), value, specialized: self.is_specialized() }
    }

    /// As [`Self::integrate`], failing when the sum is not a polynomial.
    pub fn integrate_certified(&self, f: &LocalizedClass, virtual_class: bool) -> Result<Integral> {
        let r = self.integrate(f, virtual_class);
        if !r.certified {
            return Err(Error::NonPolynomialIntegral(format!("{:?}", r.value)));
        }
        Ok(r)
    }

    pub fn pairing(&self, a: &LocalizedClass, b: &LocalizedClass, virtual_class: bool) -> Result<Integral> {
        self.integrate_certified(&a.mul(b), virtual_class)
    }

    /// Value at λ = λ′ = 0 of a certified symbolic integral.
    pub fn nonequivariant_limit(&self, r: &Integral) -> Result<RationalFunction> {
        if !r.certified || r.specialized {
            return Err(Error::Uncertified);
        }
        let mut values = vec![None; self.nvars()];
        for i in self.toric.vars.equivariant_vars() {
            values[i] = Some(Rational::zero());
        }
        r.value.evaluate_partial(&values)
    }

    /// `c · Π num / Π den` restricted to the fixed point `alpha`.
    pub fn product_at(&self, alpha: usize, c: &Rational, num: &[Factor], den: &[Factor]) -> Result<RationalFunction> {
        let n: Vec<Poly> = num.iter().map(|f| self.factor_poly(alpha, f)).collect();
        let d: Vec<Poly> = den.iter().map(|f| self.factor_poly(alpha, f)).collect();
        product_of_factors(self.nvars(), c.clone(), &n, &d)
    }

    fn factor_poly(&self, alpha: usize, f: &Factor) -> Poly {
        let (base, m) = match f {
            Factor::U(j, m) => (&self.u[alpha][*j], *m),
            Factor::V(a, m) => (&self.v[alpha][*a], *m),
        };
        base + &Poly::var(self.nvars(), self.hbar()).scale(&rat(m))
    }
}

impl ClassAlgebra for Localization {
    type Elem = LocalizedClass;

    fn nvars(&self) -> usize {
        Localization::nvars(self)
    }

    fn hbar(&self) -> usize {
        self.toric.vars.hbar()
    }

    fn one(&self) -> LocalizedClass {
        self.constant(&RationalFunction::one(self.nvars()))
    }

    fn p(&self, i: usize) -> LocalizedClass {
        self.class_p(i)
    }

    fn scalar(&self, f: &RationalFunction) -> LocalizedClass {
        self.constant(f)
    }

    fn product(&self, c: &Rational, num: &[Factor], den: &[Factor]) -> Result<LocalizedClass> {
        let values = (0..self.n_points()).map(|a| self.product_at(a, c, num, den)).collect::<Result<_>>()?;
        Ok(LocalizedClass { values })
    }

    fn is_zero_class(&self, x: &LocalizedClass) -> bool {
        Coefficient::is_zero(x)
    }

    fn nonzero_locus(&self, x: &LocalizedClass) -> String {
        let labels: Vec<String> =
            x.values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(a, _)| self.toric.fps[a].label()).collect();
        format!("α ∈ {}", labels.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::ToricInput;

    fn toric(m: Vec<Vec<i64>>, t: Vec<i64>, l: Vec<Vec<i64>>) -> Toric {
        Toric::new(ToricInput::new(m, t.into_iter().map(rat).collect(), l).unwrap(), None).unwrap()
    }

    fn p2() -> Localization {
        Localization::new(toric(vec![vec![1, 1, 1]], vec![1], vec![]), LambdaMode::Symbolic)
    }

    fn x1() -> Localization {
        Localization::new(
            toric(vec![vec![1, 1, 0, -1, -1], vec![0, 0, 1, 1, 1]], vec![1, 2], vec![]),
            LambdaMode::Symbolic,
        )
    }

    fn limit(loc: &Localization, sym: &str, virtual_class: bool) -> RationalFunction {
        let c = loc.class_from_symbol(sym).unwrap();
        let r = loc.integrate_certified(&c, virtual_class).unwrap();
        loc.nonequivariant_limit(&r).unwrap()
    }

    #[test]
    fn symbols_localize() {
        let loc = p2();
        let u2 = loc.class_from_symbol("u2").unwrap();
        let nv = loc.nvars();
        assert_eq!(u2.values[0], RationalFunction::from_poly(&Poly::var(nv, 0) - &Poly::var(nv, 1)));
        assert!(u2.values[1].is_zero());
        let x = x1();
        let c = x.class_from_symbol("p2 - p1").unwrap();
        // p₂ − p₁ = u₄ + λ₄ = u₅ + λ₅ equivariantly
        let nv = x.nvars();
        for (j, class) in [(3, x.class_u(3)), (4, x.class_u(4))] {
            let shifted = class.add(&x.constant(&RationalFunction::var(nv, j)));
            assert_eq!(c, shifted);
        }
        assert!(matches!(x.class_from_symbol("v1"), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn projective_plane_integrals() {
        let loc = p2();
        let one = loc.integrate_certified(&loc.one(), false).unwrap();
        assert!(one.value.is_zero());
        let r = loc.integrate_certified(&loc.class_from_symbol("p1^2").unwrap(), false).unwrap();
        assert!(r.value.is_one());
        assert!(loc.nonequivariant_limit(&r).unwrap().is_one());
    }

    #[test]
    fn line_self_pairing() {
        let loc = Localization::new(toric(vec![vec![1, 1]], vec![1], vec![]), LambdaMode::Symbolic);
        let p = loc.class_p(0);
        let r = loc.pairing(&p, &p, false).unwrap();
        let nv = loc.nvars();
        assert_eq!(r.value, RationalFunction::from_poly(&Poly::var(nv, 0) + &Poly::var(nv, 1)));
        assert!(loc.nonequivariant_limit(&r).unwrap().is_zero());
    }

    #[test]
    fn x1_intersection_numbers() {
        let loc = x1();
        assert!(limit(&loc, "p1*p2^2", false).is_one());
        assert_eq!(limit(&loc, "p2^3", false).constant_value(), Some(rat(2)));
        assert!(limit(&loc, "p1^2*p2", false).is_zero());
    }

    #[test]
    fn quintic_degree() {
        let loc = Localization::new(toric(vec![vec![1; 5]], vec![1], vec![vec![5]]), LambdaMode::Symbolic);
        assert_eq!(limit(&loc, "p1^3", true).constant_value(), Some(rat(5)));
        assert!(limit(&loc, "p1^2", true).is_zero());
    }

    #[test]
    fn uncertified_limit_is_refused() {
        let loc = p2();
        let bogus = Integral { value: RationalFunction::one(loc.nvars()), certified: false, specialized: false };
        assert_eq!(loc.nonequivariant_limit(&bogus).unwrap_err(), Error::Uncertified);
    }
}
