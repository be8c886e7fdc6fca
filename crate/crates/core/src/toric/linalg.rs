//! Dense exact linear algebra over ℚ for the small matrices of toric data.

use num_traits::{One, Zero};

use crate::algebra::rational::{rat, Rational};

pub type Matrix = Vec<Vec<Rational>>;

pub fn from_int(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

/// Columns `cols` of `m`, in the given order.
pub fn columns(m: &[Vec<i64>], cols: &[usize]) -> Matrix {
    m.iter().map(|row| cols.iter().map(|&j| rat(row[j])).collect()).collect()
}

/// Row echelon form in place; returns the pivot columns and the determinant
/// factor accumulated from swaps and pivots.
fn echelon(a: &mut Matrix) -> (Vec<usize>, Rational) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut factor = Rational::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            factor = -factor;
        }
        let piv = a[r][c].clone();
        factor *= &piv;
        for x in a[r].iter_mut() {
            *x /= &piv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for cc in 0..cols {
                    let v = &a[r][cc] * &f;
                    a[i][cc] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, factor)
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    echelon(&mut a).0.len()
}

pub fn det(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let (pivots, factor) = echelon(&mut a);
    if pivots.len() < n {
        Rational::zero()
    } else {
        factor
    }
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (pivots, _) = echelon(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// The unique solution of `m x = b`; `None` when inconsistent or underdetermined.
pub fn solve(m: &Matrix, b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let mut aug: Matrix = m.iter().zip(b).map(|(row, x)| [row.clone(), vec![x.clone()]].concat()).collect();
    let (pivots, _) = echelon(&mut aug);
    if pivots.contains(&cols) || pivots.len() < cols {
        return None;
    }
    Some((0..cols).map(|r| aug[r][cols].clone()).collect())
}

pub fn mul_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}

/// A basis of the right null space of `m` (with `cols` columns).
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.clone();
    let (pivots, _) = echelon(&mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<i64> {
    use num_integer::Integer;
    let mut l = num_bigint::BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<num_bigint::BigInt> =
        v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = num_bigint::BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return vec![0; v.len()];
    }
    ints.iter().map(|x| i64::try_from(x / &g).expect("lattice vector fits in i64")).collect()
}
