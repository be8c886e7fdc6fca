#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_mirror::algebra::series::reverse_shift;
use toric_mirror::algebra::{rat, ratio, Degree, GradedQSeries, Grading, Rational, RationalFunction};
use toric_mirror::equivariant::{LambdaMode, Localization};
use toric_mirror::hypergeometric::build_psi;
use toric_mirror::toric::{Toric, ToricInput};

pub fn toric(m: Vec<Vec<i64>>, t: &[i64], bundle: Vec<Vec<i64>>) -> Toric {
    let t: Vec<Rational> = t.iter().map(|&x| rat(x)).collect();
    Toric::new(ToricInput::new(m, t, bundle).unwrap(), None).unwrap()
}

pub fn p1() -> Toric {
    toric(vec![vec![1, 1]], &[1], vec![])
}

pub fn p2() -> Toric {
    toric(vec![vec![1, 1, 1]], &[1], vec![])
}

pub fn p1xp1() -> Toric {
    toric(vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]], &[1, 1], vec![])
}

pub fn x1() -> Toric {
    toric(vec![vec![1, 1, 0, -1, -1], vec![0, 0, 1, 1, 1]], &[1, 2], vec![])
}

pub fn x2() -> Toric {
    toric(vec![vec![1, 1, 0, 0, -2], vec![0, 0, 1, 1, 1]], &[1, 2], vec![])
}

pub fn quintic() -> Toric {
    toric(vec![vec![1, 1, 1, 1, 1]], &[1], vec![vec![5]])
}

pub fn geometries() -> Vec<(&'static str, Toric)> {
    vec![("p1", p1()), ("p2", p2()), ("p1xp1", p1xp1()), ("x1", x1()), ("x2", x2()), ("quintic", quintic())]
}

pub fn job_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs").join(format!("{name}.job"))
}

/// A monomial of the given degree in the generators `p_i`, `u_j`, `v_a`.
pub fn random_monomial(rng: &mut ChaCha8Rng, toric: &Toric, degree: u32) -> String {
    let input = &toric.input;
    let mut gens: Vec<String> = (1..=input.k).map(|i| format!("p{i}")).collect();
    gens.extend((1..=input.n).map(|j| format!("u{j}")));
    gens.extend((1..=input.l).map(|a| format!("v{a}")));
    let mut parts = vec![rng.gen_range(1..=9u32).to_string()];
    for _ in 0..degree {
        parts.push(gens[rng.gen_range(0..gens.len())].clone());
    }
    parts.join("*")
}

/// A random polynomial class, optionally homogeneous of one degree and
/// optionally involving ħ.
pub fn random_class(
    rng: &mut ChaCha8Rng,
    toric: &Toric,
    max_degree: u32,
    homogeneous: bool,
    with_hbar: bool,
) -> String {
    let terms = rng.gen_range(1..=4);
    let fixed = rng.gen_range(0..=max_degree);
    let mut out = String::new();
    for i in 0..terms {
        let degree = if homogeneous { fixed } else { rng.gen_range(0..=max_degree) };
        let mut m = random_monomial(rng, toric, degree);
        if with_hbar && rng.gen_bool(0.3) {
            m.push_str("*h");
        }
        if i > 0 {
            out.push_str(if rng.gen_bool(0.5) { " + " } else { " - " });
        }
        out.push_str(&m);
    }
    out
}

/// Degree of a homogeneous rational function, `None` for zero or
/// inhomogeneous input.
pub fn homogeneous_degree(f: &RationalFunction) -> Option<i64> {
    let mut deg = f.numerator().homogeneous_degree()? as i64;
    for (p, e) in f.den_factors() {
        deg -= p.homogeneous_degree()? as i64 * *e as i64;
    }
    Some(deg)
}

/// All degrees `d ≥ 0` with `⟨w, d⟩ ≤ bound` for the rank-2 weights (1, 2).
pub fn small_degrees(bound: i64) -> Vec<Degree> {
    let mut out = Vec::new();
    for a in 0..=bound {
        for b in 0..=(bound - a) / 2 {
            out.push(vec![a, b]);
        }
    }
    out
}

pub fn small_grading(bound: u64) -> Arc<Grading> {
    Grading::new(vec![rat(1), rat(2)], bound)
}

/// A sparse random series in two variables; with `constant` = None it has
/// no constant term.
pub fn random_series(
    rng: &mut ChaCha8Rng,
    grading: &Arc<Grading>,
    constant: Option<Rational>,
) -> GradedQSeries<Rational> {
    let bound = grading.bound.to_integer().try_into().unwrap();
    let mut terms: Vec<(Degree, Rational)> = constant.map(|c| (vec![0, 0], c)).into_iter().collect();
    for d in small_degrees(bound).into_iter().skip(1) {
        if rng.gen_bool(0.6) {
            terms.push((d, ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))));
        }
    }
    GradedQSeries::from_terms(grading.clone(), terms)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random classes (with ħ) integrate to polynomials, on the fundamental and,
/// when there is a bundle, the virtual class.
pub fn check_integration(loc: &Localization, rng: &mut ChaCha8Rng, count: usize) -> Result<(), String> {
    let dim = loc.toric.dim() as u32;
    for _ in 0..count {
        let text = random_class(rng, &loc.toric, dim + 1, false, true);
        let class = loc.class_from_symbol(&text).map_err(|e| format!("{text}: {e}"))?;
        for virtual_class in [false, loc.toric.input.l > 0] {
            loc.integrate_certified(&class, virtual_class).map_err(|e| format!("∫ {text}: {e}"))?;
        }
    }
    Ok(())
}

/// Homogeneous classes of degree below the dimension integrate to zero.
pub fn check_below_top(loc: &Localization, rng: &mut ChaCha8Rng, count: usize) -> Result<(), String> {
    let dim = loc.toric.dim() as u32;
    for _ in 0..count {
        let degree = rng.gen_range(0..dim);
        let terms: Vec<String> = (0..rng.gen_range(1..=3)).map(|_| random_monomial(rng, &loc.toric, degree)).collect();
        let text = terms.join(" - ");
        let class = loc.class_from_symbol(&text).map_err(|e| format!("{text}: {e}"))?;
        let value = loc.integrate(&class, false).value;
        if !value.is_zero() {
            return Err(format!("∫ {text} = {value:?} in degree {degree} < {dim}"));
        }
    }
    Ok(())
}

/// exp/log, shift reversion and product/sum associativity on random series.
pub fn check_series_roundtrips(rng: &mut ChaCha8Rng, count: usize) -> Result<(), String> {
    let g = small_grading(6);
    let one = Rational::one();
    for _ in 0..count {
        let s = random_series(rng, &g, None);
        let back = s.exp(&one).and_then(|e| e.log(&one)).map_err(|e| e.to_string())?;
        if back != s {
            return Err(format!("log(exp(s)) != s for {s:?}"));
        }
        let u = random_series(rng, &g, Some(one.clone()));
        let back = u.log(&one).and_then(|l| l.exp(&one)).map_err(|e| e.to_string())?;
        if back != u {
            return Err(format!("exp(log(u)) != u for {u:?}"));
        }
        let phi = vec![random_series(rng, &g, None), random_series(rng, &g, None)];
        let psi = reverse_shift(&phi).map_err(|e| e.to_string())?;
        for (a, b) in [(&phi, &psi), (&psi, &phi)] {
            for i in 0..2 {
                let round = b[i].substitute_shift(a).and_then(|x| x.add(&a[i])).map_err(|e| e.to_string())?;
                if !round.is_empty() {
                    return Err(format!("shift reversion fails in component {i}"));
                }
            }
        }
        let (a, b, c) =
            (random_series(rng, &g, Some(rat(2))), random_series(rng, &g, None), random_series(rng, &g, Some(rat(-1))));
        let left = a.mul(&b).and_then(|x| x.mul(&c)).map_err(|e| e.to_string())?;
        let right = b.mul(&c).and_then(|x| a.mul(&x)).map_err(|e| e.to_string())?;
        if left != right {
            return Err("(ab)c != a(bc)".into());
        }
        let left = a.add(&b).and_then(|x| x.add(&c)).map_err(|e| e.to_string())?;
        let right = b.add(&c).and_then(|x| a.add(&x)).map_err(|e| e.to_string())?;
        if left != right {
            return Err("(a+b)+c != a+(b+c)".into());
        }
    }
    Ok(())
}

/// Ψ computed on a random line through the origin equals the symbolic Ψ
/// restricted to that line.
pub fn check_line_mode(toric: &Toric, bound: u64, seed: u64) -> Result<(), String> {
    let sym = Localization::new(toric.clone(), LambdaMode::Symbolic);
    let line = Localization::new(toric.clone(), LambdaMode::Specialized(seed));
    let a = build_psi(&sym, toric, bound).map_err(|e| e.to_string())?;
    let b = build_psi(&line, toric, bound).map_err(|e| e.to_string())?;
    for d in toric.lattice.enumerate(bound).map_err(|e| e.to_string())? {
        let (x, y) = (a.coefficient(&d), b.coefficient(&d));
        let n = toric.fps.len();
        for alpha in 0..n {
            let xs = x.map(|c| line.specialize(&c.values[alpha])).transpose().map_err(|e| e.to_string())?;
            let ys = y.map(|c| c.values[alpha].clone());
            let zero = RationalFunction::zero(toric.nvars());
            if xs.unwrap_or_else(|| zero.clone()) != ys.unwrap_or(zero) {
                return Err(format!("seed {seed}: Ψ differs at d = {d:?}, {}", toric.fps[alpha].label()));
            }
        }
    }
    Ok(())
}
