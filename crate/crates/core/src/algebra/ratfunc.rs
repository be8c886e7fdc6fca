//! Rational functions with a factored denominator.
//!
//! The denominator is kept as a list of coprime, integer-primitive factors with
//! positive leading coefficient; almost every denominator met in localization
//! is a product of linear forms, for which trial division gives the fully
//! reduced form. Non-linear factors are reduced with [`gcd`].

use std::fmt;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct RationalFunction {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

fn is_linear(p: &Poly) -> bool {
    p.total_degree().is_some_and(|d| d <= 1)
}

fn insert_factor(list: &mut Vec<(Poly, u32)>, f: Poly, e: u32) {
    if e == 0 || f.is_constant() {
        return;
    }
    for idx in 0..list.len() {
        if list[idx].0 == f {
            list[idx].1 += e;
            return;
        }
        if is_linear(&list[idx].0) && is_linear(&f) {
            continue;
        }
        let h = gcd(&list[idx].0, &f);
        if !h.is_constant() {
            let (g, eg) = list.remove(idx);
            let g_rest = g.div_exact(&h).expect("gcd divides");
            let f_rest = f.div_exact(&h).expect("gcd divides");
            insert_factor(list, h, e + eg);
            insert_factor(list, g_rest.primitive_normalized().1, eg);
            insert_factor(list, f_rest.primitive_normalized().1, e);
            return;
        }
    }
    list.push((f, e));
}

impl RationalFunction {
    pub fn zero(nvars: usize) -> Self {
        RationalFunction { num: Poly::zero(nvars), den: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Vec::new() }
    }

    /// Reduced canonical quotient `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_factors(num, &[den]))
    }

    /// `num / Π den_factors`; factors may be arbitrary nonzero polynomials.
    pub fn from_factors(num: Poly, den_factors: &[Poly]) -> Self {
        let nvars = num.nvars();
        let mut scale = Rational::one();
        let mut den = Vec::new();
        for f in den_factors {
            assert!(!f.is_zero(), "zero denominator factor");
            if let Some(c) = f.constant_value() {
                scale /= c;
                continue;
            }
            let (c, prim) = f.primitive_normalized();
            scale /= c;
            insert_factor(&mut den, prim, 1);
        }
        let mut rf = RationalFunction { num: num.scale(&scale), den };
        if rf.num.is_zero() {
            return Self::zero(nvars);
        }
        rf.cancel();
        rf
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> Poly {
        let mut d = Poly::one(self.nvars());
        for (f, e) in &self.den {
            d = &d * &f.pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.num.uses_var(var) || self.den.iter().any(|(f, _)| f.uses_var(var))
    }

    fn cancel(&mut self) {
        let mut idx = 0;
        while idx < self.den.len() {
            if self.num.is_zero() {
                self.den.clear();
                return;
            }
            let linear = is_linear(&self.den[idx].0);
            while self.den[idx].1 > 0 {
                match self.num.div_exact(&self.den[idx].0) {
                    Some(q) => {
                        self.num = q;
                        self.den[idx].1 -= 1;
                    }
                    None => break,
                }
            }
            if self.den[idx].1 > 0 && !linear {
                let h = gcd(&self.num, &self.den[idx].0);
                if !h.is_constant() {
                    let (f, e) = self.den.remove(idx);
                    self.num = self.num.div_exact(&h).expect("gcd divides");
                    let rest = f.div_exact(&h).expect("gcd divides").primitive_normalized().1;
                    insert_factor(&mut self.den, rest, e);
                    insert_factor(&mut self.den, h, e - 1);
                    idx = 0;
                    continue;
                }
            }
            if self.den[idx].1 == 0 {
                self.den.remove(idx);
            } else {
                idx += 1;
            }
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut out = RationalFunction { num: &self.num * p, den: self.den.clone() };
        out.cancel();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut a = RationalFunction { num: self.num.clone(), den: other.den.clone() };
        a.cancel();
        let mut b = RationalFunction { num: other.num.clone(), den: self.den.clone() };
        b.cancel();
        let mut den = a.den;
        for (f, e) in b.den {
            insert_factor(&mut den, f, e);
        }
        let mut out = RationalFunction { num: &a.num * &b.num, den };
        if out.den.iter().any(|(f, _)| !is_linear(f)) {
            out.cancel();
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut lcm = self.den.clone();
        for (f, e) in &other.den {
            let cur = lcm.iter().position(|(g, _)| g == f);
            match cur {
                Some(i) => lcm[i].1 = lcm[i].1.max(*e),
                None => insert_factor(&mut lcm, f.clone(), *e),
            }
        }
        let cofactor = |den: &[(Poly, u32)]| -> Poly {
            let mut c = Poly::one(self.nvars());
            for (f, e) in &lcm {
                let have = den.iter().find(|(g, _)| g == f).map(|(_, k)| *k).unwrap_or(0);
                if *e > have {
                    c = &c * &f.pow(e - have);
                }
            }
            c
        };
        let simple = self.den.iter().chain(&other.den).all(|(f, _)| lcm.iter().any(|(g, _)| g == f));
        if !simple {
            // coprime refinement split a factor; fall back to full cross-multiplication
            let num = &(&self.num * &other.denominator()) + &(&other.num * &self.denominator());
            let den = &self.denominator() * &other.denominator();
            return Self::from_factors(num, &[den]);
        }
        let num = &(&self.num * &cofactor(&self.den)) + &(&other.num * &cofactor(&other.den));
        let mut out = RationalFunction { num, den: lcm };
        out.cancel();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = Poly::one(self.nvars());
        for (f, e) in &self.den {
            num = &num * &f.pow(*e);
        }
        Ok(Self::from_factors(num, std::slice::from_ref(&self.num)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces `var` by the polynomial `value`.
    pub fn substitute(&self, var: usize, value: &Poly) -> Result<Self> {
        let num = self.num.substitute(var, value);
        let mut dens = Vec::new();
        for (f, e) in &self.den {
            let g = f.substitute(var, value);
            if g.is_zero() {
                return Err(Error::VanishingDenominator(format!("{f:?}")));
            }
            for _ in 0..*e {
                dens.push(g.clone());
            }
        }
        Ok(Self::from_factors(num, &dens))
    }

    /// Substitutes rational values for the variables marked `Some`.
    pub fn evaluate_partial(&self, values: &[Option<Rational>]) -> Result<Self> {
        let num = self.num.evaluate_partial(values);
        let mut dens = Vec::new();
        for (f, e) in &self.den {
            let g = f.evaluate_partial(values);
            if g.is_zero() {
                return Err(Error::VanishingDenominator(format!("{f:?}")));
            }
            for _ in 0..*e {
                dens.push(g.clone());
            }
        }
        Ok(Self::from_factors(num, &dens))
    }

    pub fn evaluate(&self, values: &[Rational]) -> Result<Rational> {
        let mut d = Rational::one();
        for (f, e) in &self.den {
            let v = f.evaluate(values);
            if v.is_zero() {
                return Err(Error::VanishingDenominator(format!("{f:?}")));
            }
            d *= num_traits::pow::pow(v, *e as usize);
        }
        Ok(self.num.evaluate(values) / d)
    }

    pub fn truncate_vars(&self, vars: &[usize], cap: u32) -> Self {
        assert!(
            self.den.iter().all(|(f, _)| vars.iter().all(|&v| !f.uses_var(v))),
            "truncation variables in a denominator"
        );
        RationalFunction { num: self.num.truncate_vars(vars, cap), den: self.den.clone() }
    }

    fn all_linear(&self) -> bool {
        self.den.iter().all(|(f, _)| is_linear(f))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.den.is_empty() {
            return self.num.fmt_with(names);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(f, e)| {
                let s = format!("({})", f.fmt_with(names));
                if *e == 1 {
                    s
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        format!("({})/({})", self.num.fmt_with(names), den.join("*"))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars() != other.nvars() {
            return false;
        }
        if self.all_linear() && other.all_linear() {
            if self.num != other.num || self.den.len() != other.den.len() {
                return false;
            }
            return self.den.iter().all(|(f, e)| other.den.iter().any(|(g, k)| g == f && k == e));
        }
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

/// Builds `c · Π num_factors / Π den_factors`, cancelling equal factors first.
pub fn product_of_factors(
    nvars: usize,
    c: Rational,
    num_factors: &[Poly],
    den_factors: &[Poly],
) -> Result<RationalFunction> {
    let mut scale = c;
    let mut nums: Vec<Poly> = Vec::new();
    for f in num_factors {
        if let Some(v) = f.constant_value() {
            scale *= v;
            continue;
        }
        let (s, p) = f.primitive_normalized();
        scale *= s;
        nums.push(p);
    }
    let mut dens: Vec<Poly> = Vec::new();
    for f in den_factors {
        if f.is_zero() {
            return Err(Error::VanishingDenominator("zero factor in product".into()));
        }
        if let Some(v) = f.constant_value() {
            scale /= v;
            continue;
        }
        let (s, p) = f.primitive_normalized();
        scale /= s;
        if let Some(i) = nums.iter().position(|n| *n == p) {
            nums.swap_remove(i);
        } else {
            dens.push(p);
        }
    }
    if scale.is_zero() {
        return Ok(RationalFunction::zero(nvars));
    }
    let mut num = Poly::constant(nvars, scale);
    for f in &nums {
        num = &num * f;
    }
    Ok(RationalFunction::from_factors(num, &dens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn x(i: usize) -> Poly {
        Poly::var(3, i)
    }

    #[test]
    fn normalize_difference_of_squares() {
        let num = &(&x(0) * &x(0)) - &(&x(1) * &x(1));
        let rf = RationalFunction::new(num, &x(0) - &x(1)).unwrap();
        assert!(rf.is_polynomial());
        assert_eq!(rf.numerator(), &(&x(0) + &x(1)));
    }

    #[test]
    fn normalize_zero_numerator() {
        let rf = RationalFunction::new(Poly::zero(3), x(0)).unwrap();
        assert!(rf.is_zero());
        assert!(rf.is_polynomial());
    }

    #[test]
    fn normalize_content_and_gcd() {
        // (2 x0 x2) / (4 x2^2) = x0 / (2 x2)
        let num = (&x(0) * &x(2)).scale(&rat(2));
        let den = (&x(2) * &x(2)).scale(&rat(4));
        let rf = RationalFunction::new(num, den).unwrap();
        let expected = RationalFunction::new(x(0), x(2).scale(&rat(2))).unwrap();
        assert_eq!(rf, expected);
        assert_eq!(rf.denominator(), x(2));
        assert_eq!(rf.numerator(), &x(0).scale(&crate::algebra::rational::ratio(1, 2)));
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(RationalFunction::new(x(0), Poly::zero(3)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn sums_cancel_to_polynomials() {
        // x0^2/(x0-x1) + x1^2/(x1-x0) = x0 + x1
        let a = RationalFunction::new(&x(0) * &x(0), &x(0) - &x(1)).unwrap();
        let b = RationalFunction::new(&x(1) * &x(1), &x(1) - &x(0)).unwrap();
        let s = a.add(&b);
        assert!(s.is_polynomial());
        assert_eq!(s.numerator(), &(&x(0) + &x(1)));
    }

    #[test]
    fn nonlinear_denominators_reduce() {
        let q = &(&x(0) * &x(0)) + &x(1);
        let a = RationalFunction::new(x(2), q.clone()).unwrap();
        let b = RationalFunction::from_poly(&q * &x(0));
        assert_eq!(a.mul(&b), RationalFunction::from_poly(&x(2) * &x(0)));
        let inv = a.inv().unwrap();
        assert_eq!(inv.mul(&a), RationalFunction::one(3));
    }
}
