//! Polynomial expressions in the generators `p_i`, `u_j`, `v_a` (and `h` for ħ).

use crate::algebra::rational::{rat, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    P(usize),
    U(usize),
    V(usize),
    Hbar,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Rational),
    Atom(Atom),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Evaluates with `+`, `*` and negation supplied by the caller.
    pub fn eval<T: Clone>(
        &self,
        atom: &dyn Fn(&Atom) -> Result<T>,
        constant: &dyn Fn(&Rational) -> T,
        add: &dyn Fn(&T, &T) -> T,
        mul: &dyn Fn(&T, &T) -> T,
    ) -> Result<T> {
        let rec = |e: &Expr| e.eval(atom, constant, add, mul);
        Ok(match self {
            Expr::Const(c) => constant(c),
            Expr::Atom(a) => atom(a)?,
            Expr::Add(a, b) => add(&rec(a)?, &rec(b)?),
            Expr::Sub(a, b) => add(&rec(a)?, &mul(&constant(&rat(-1)), &rec(b)?)),
            Expr::Mul(a, b) => mul(&rec(a)?, &rec(b)?),
            Expr::Neg(a) => mul(&constant(&rat(-1)), &rec(a)?),
            Expr::Pow(a, e) => {
                let base = rec(a)?;
                let mut acc = constant(&rat(1));
                for _ in 0..*e {
                    acc = mul(&acc, &base);
                }
                acc
            }
        })
    }

    /// Checks that every generator index is in range.
    pub fn check_indices(&self, k: usize, n: usize, l: usize) -> Result<()> {
        match self {
            Expr::Const(_) | Expr::Atom(Atom::Hbar) => Ok(()),
            Expr::Atom(a) => {
                let (name, idx, max) = match a {
                    Atom::P(i) => ("p", *i, k),
                    Atom::U(j) => ("u", *j, n),
                    Atom::V(b) => ("v", *b, l),
                    Atom::Hbar => unreachable!(),
                };
                if idx < max {
                    Ok(())
                } else {
                    Err(Error::UnknownSymbol(format!("{name}{}", idx + 1)))
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.check_indices(k, n, l)?;
                b.check_indices(k, n, l)
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.check_indices(k, n, l),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::UnknownSymbol(format!("{msg} at position {}", self.pos))
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("expected a number"))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.number()?;
            return Ok(Expr::Pow(Box::new(base), e as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Const(rat(self.number()? as i64))),
            Some(c @ (b'p' | b'u' | b'v')) => {
                self.pos += 1;
                let idx = self.number()? as usize;
                if idx == 0 {
                    return Err(Error::UnknownSymbol(format!("{}0", c as char)));
                }
                Ok(Expr::Atom(match c {
                    b'p' => Atom::P(idx - 1),
                    b'u' => Atom::U(idx - 1),
                    _ => Atom::V(idx - 1),
                }))
            }
            Some(b'h') => {
                self.pos += 1;
                Ok(Expr::Atom(Atom::Hbar))
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

/// Parses e.g. `"p1*p2^2 - 2*u3 + v1"`.
pub fn parse_symbol(text: &str) -> Result<Expr> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}
