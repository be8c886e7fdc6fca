//! Multivariate gcd over ℚ by recursive primitive pseudo-remainder sequences.

use super::poly::Poly;

fn normalized(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    if p.is_constant() {
        return Poly::one(p.nvars());
    }
    p.primitive_normalized().1
}

fn first_var(a: &Poly, b: &Poly) -> Option<usize> {
    (0..a.nvars()).find(|&v| a.uses_var(v) || b.uses_var(v))
}

/// Gcd of the coefficients of `p` viewed as univariate in `var`.
fn content_in(p: &Poly, var: usize) -> Poly {
    let mut g = Poly::zero(p.nvars());
    for c in p.coefficients_in(var) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one(p.nvars());
        }
    }
    g
}

fn primitive_in(p: &Poly, var: usize) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    normalized(&p.div_exact(&c).expect("content divides"))
}

fn pseudo_remainder(a: &Poly, b: &Poly, var: usize) -> Poly {
    let n = b.degree_in(var);
    let bc = b.coefficients_in(var);
    let lb = bc[n as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= n {
        let m = r.degree_in(var);
        let lr = r.coefficients_in(var)[m as usize].clone();
        let shift = Poly::var(r.nvars(), var).pow(m - n);
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

/// Greatest common divisor, normalized to be integer-primitive with positive
/// leading coefficient; the gcd of two nonzero constants is 1.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalized(b);
    }
    if b.is_zero() {
        return normalized(a);
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars());
    }
    let var = match first_var(a, b) {
        Some(v) => v,
        None => return Poly::one(a.nvars()),
    };
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let g_content = gcd(&ca, &cb);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    if pa.degree_in(var) < pb.degree_in(var) {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g_prim = if pb.degree_in(var) == 0 {
        Poly::one(a.nvars())
    } else {
        loop {
            let r = pseudo_remainder(&pa, &pb, var);
            if r.is_zero() {
                break primitive_in(&pb, var);
            }
            if r.degree_in(var) == 0 {
                break Poly::one(a.nvars());
            }
            pa = pb;
            pb = primitive_in(&r, var);
        }
    };
    normalized(&(&g_content * &g_prim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn gcd_of_products() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let f = &(&x + &y) * &(&(&x * &z) - &y);
        let g = &(&x + &y) * &(&z + &Poly::constant(3, rat(3)));
        assert_eq!(gcd(&f, &g), &x + &y);
        let h = (&(&x * &x) + &(&y * &z)).pow(2);
        let k = &(&(&x * &x) + &(&y * &z)) * &(&x - &z);
        assert_eq!(gcd(&h, &k), &(&x * &x) + &(&y * &z));
        assert_eq!(gcd(&x, &y), Poly::one(3));
    }
}
