//! Runs the sections of a job and collects their results.

use num_traits::One;

use crate::algebra::rational::{format_rational, Rational};
use crate::algebra::series::{Coefficient, Degree, GradedQSeries};
use crate::equivariant::{CohomologyRing, LambdaMode, Localization};
use crate::error::Result;
use crate::hypergeometric::{build_phi, build_psi, check_double_construction, check_phi, check_recursion};
use crate::mirror::{
    check_annihilation, check_transport, classical_relations, default_operator_degrees, expand_asymptotics,
    linear_form, normalize_to_flat, quantum_relations, AsymptoticAlgebra, DeltaOperator,
};
use crate::toric::fixed::check_compact;
use crate::toric::{verify_smooth, Toric, ToricInput};

use super::config::{format_matrix, format_rationals, Command, JobConfig, SectionKind, TransportTarget};
use super::report::{Record, Report, Section};

/// Command-line overrides applied on top of a job file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub bound: Option<u64>,
    pub zcap: Option<u32>,
    pub lambda_mode: Option<LambdaMode>,
    /// When non-empty, only these sections run.
    pub sections: Vec<SectionKind>,
}

impl JobConfig {
    /// Overridden values replace both the job-level and per-command settings.
    pub fn with_overrides(&self, o: &Overrides) -> JobConfig {
        let mut cfg = self.clone();
        if let Some(b) = o.bound {
            cfg.bound = b;
        }
        if let Some(z) = o.zcap {
            cfg.zcap = z;
        }
        if let Some(mode) = &o.lambda_mode {
            cfg.lambda_mode = mode.clone();
        }
        for c in &mut cfg.commands {
            c.bound = c.bound.filter(|_| o.bound.is_none());
            c.zcap = c.zcap.filter(|_| o.zcap.is_none());
        }
        if !o.sections.is_empty() {
            cfg.commands.retain(|c| o.sections.contains(&c.section));
            for &s in &o.sections {
                if !cfg.commands.iter().any(|c| c.section == s) {
                    cfg.commands.push(Command::new(s));
                }
            }
        }
        cfg
    }
}

pub fn format_degree(d: &[i64]) -> String {
    let parts: Vec<String> = d.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn records<C: Coefficient>(toric: &Toric, s: &GradedQSeries<C>, fmt: impl Fn(&C) -> String) -> Vec<Record> {
    let w = toric.input.grading_weights();
    s.sorted_terms()
        .into_iter()
        .map(|(d, c)| Record {
            d: d.clone(),
            grade: d.iter().zip(&w).map(|(a, b)| a * b).sum(),
            pairing: format_rational(&toric.lattice.pair(d)),
            coefficient: fmt(c),
        })
        .collect()
}

fn rational_records(toric: &Toric, s: &GradedQSeries<Rational>) -> Vec<Record> {
    records(toric, s, format_rational)
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

/// Runs each command of the job; sections run concurrently and are reported
/// in command order.
pub fn execute(config: &JobConfig) -> Result<Report> {
    let toric = config.toric()?;
    let loc = Localization::new(toric.clone(), config.lambda_mode.clone());
    let sections = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .commands
            .iter()
            .map(|cmd| {
                let (loc, toric) = (&loc, &toric);
                std::thread::Builder::new()
                    .stack_size(256 << 20)
                    .spawn_scoped(scope, move || run_section(config, cmd, toric, loc))
                    .expect("spawn section thread")
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("section thread panicked")).collect::<Vec<_>>()
    });
    Ok(Report::new(config.name.clone(), config.to_document(), sections))
}

fn run_section(cfg: &JobConfig, cmd: &Command, toric: &Toric, loc: &Localization) -> Section {
    let mut s = Section::new(cmd.section.name());
    let bound = cmd.bound.unwrap_or(cfg.bound);
    let zcap = cmd.zcap.unwrap_or(cfg.zcap);
    let degrees = || cmd.degrees.clone().unwrap_or_else(|| default_operator_degrees(toric));
    let result = match cmd.section {
        SectionKind::Toric => toric_section(&mut s, toric, loc),
        SectionKind::Psi => psi_section(&mut s, loc, bound),
        SectionKind::Phi => phi_section(&mut s, loc, bound, zcap),
        SectionKind::Recursion => recursion_section(&mut s, loc, bound),
        SectionKind::Double => double_section(&mut s, loc, bound, zcap),
        SectionKind::Mirror => mirror_section(&mut s, cfg, loc, bound, cmd.transport.as_ref()),
        SectionKind::Pde => pde_section(&mut s, loc, bound, &degrees()),
        SectionKind::Relations => relations_section(&mut s, toric, &degrees()),
    };
    if let Err(e) = result {
        s.error(format!("{}: {e}", cmd.section.name()));
    }
    s
}

fn toric_section(s: &mut Section, toric: &Toric, loc: &Localization) -> Result<()> {
    let input = &toric.input;
    s.field("M", format_matrix(&input.m));
    s.field("t", format_rationals(&input.t));
    s.field("L", format_matrix(if input.l == 0 { &[] } else { &input.bundle }));
    s.field("ample", format_rationals(&toric.lattice.ample));
    s.field("dimension", toric.dim().to_string());
    s.field("fixed points", toric.fps.len().to_string());
    for fp in &toric.fps {
        s.field(format!("fixed point {}", fp.label()), format!("det M_α = {}", format_rational(&fp.det)));
    }
    let cert = verify_smooth(&toric.fps);
    let witness = if cert.ok() {
        format!("|det M_α| = 1 at all {} fixed points", toric.fps.len())
    } else {
        join(&cert.violations, |(a, det)| format!("det at {a:?} is {}", format_rational(det)))
    };
    s.check("smooth", cert.ok(), witness);
    match check_compact(input, &toric.fps) {
        Ok(()) => s.check("compact", true, "every edge direction ends at a fixed point"),
        Err(e) => s.check("compact", false, e.to_string()),
    }
    s.field("edges", toric.edges.len().to_string());
    for e in &toric.edges {
        s.field(
            format!("edge {} -u{}-> {}", toric.fps[e.source].label(), e.j + 1, toric.fps[e.target].label()),
            format!("d = {}", format_degree(&e.degree)),
        );
    }
    s.field("Λ generators", join(&toric.lattice.generators, |g| format_degree(g)));
    s.field("chamber rays", join(&toric.lattice.chamber_rays, |g| format_degree(g)));
    s.field("edge classes", join(&toric.lattice.edge_classes, |g| format_degree(g)));
    let w = input.grading_weights();
    let q = |i: usize| if input.k == 1 { "q".to_string() } else { format!("q{}", i + 1) };
    s.field("grading", (0..input.k).map(|i| format!("deg {} = {}", q(i), w[i])).collect::<Vec<_>>().join(", "));
    s.field("anticanonical", linear_form(&input.anticanonical()));
    s.field("c1(X) - c1(E)", linear_form(&w));
    for r in classical_relations(toric) {
        s.field("classical relation", r);
    }
    let ring = CohomologyRing::new(&Localization::new(loc.toric.clone(), LambdaMode::Symbolic))?;
    s.field("betti numbers", join(&ring.betti(), usize::to_string));
    Ok(())
}

fn lambda_fields(s: &mut Section, loc: &Localization) {
    s.field("variables", loc.var_names().join(", "));
    if let Some(dir) = &loc.direction {
        s.field("λ line", format!("λ = s·{}", format_rationals(dir)));
    }
}

fn psi_section(s: &mut Section, loc: &Localization, bound: u64) -> Result<()> {
    lambda_fields(s, loc);
    let psi = build_psi(loc, &loc.toric, bound)?;
    let names = loc.var_names();
    for (a, fp) in loc.toric.fps.iter().enumerate() {
        s.series(format!("Ψ at {}", fp.label()), records(&loc.toric, &psi, |c| c.values[a].fmt_with(&names)));
    }
    Ok(())
}

fn phi_section(s: &mut Section, loc: &Localization, bound: u64, zcap: u32) -> Result<()> {
    lambda_fields(s, loc);
    s.field("zcap", zcap.to_string());
    let phi = build_phi(loc, bound, zcap)?;
    let degrees = loc.toric.lattice.enumerate(bound)?.len();
    s.check(
        "polynomial",
        true,
        format!("residue sums at {degrees} degrees are polynomials, {} nonzero", phi.series.len()),
    );
    let names = loc.var_names();
    s.series("Φ", records(&loc.toric, &phi.series, |c| c.fmt_with(&names)));
    let report = check_phi(loc, &phi)?;
    let witness = match report.inhomogeneous.first() {
        None => format!("{} nonzero (d, z-monomial) coefficients", report.coefficients),
        Some(w) => w.clone(),
    };
    s.check("homogeneous", report.inhomogeneous.is_empty(), witness);
    let witness = match report.asymmetric.first() {
        None => "Φ(z, q e^{ħz}, -ħ) = Φ(z, q, ħ)".to_string(),
        Some(d) => format!("differs at d = {}", format_degree(d)),
    };
    s.check("symmetric", report.asymmetric.is_empty(), witness);
    Ok(())
}

fn recursion_section(s: &mut Section, loc: &Localization, bound: u64) -> Result<()> {
    lambda_fields(s, loc);
    let report = check_recursion(loc, bound)?;
    let witness = match report.unmatched.first() {
        None => format!("{} poles checked", report.poles_checked),
        Some(w) => w.clone(),
    };
    s.check("poles matched", report.unmatched.is_empty(), witness);
    let witness =
        report.extra_poles.first().cloned().unwrap_or_else(|| "remainders have no poles besides ħ = 0".into());
    s.check("remainders", report.extra_poles.is_empty(), witness);
    let names = loc.var_names();
    for (label, d, r) in &report.remainders {
        s.field(format!("R at {label}, d = {}", format_degree(d)), r.fmt_with(&names));
    }
    Ok(())
}

fn double_section(s: &mut Section, loc: &Localization, bound: u64, zcap: u32) -> Result<()> {
    lambda_fields(s, loc);
    s.field("zcap", zcap.to_string());
    let psi = build_psi(loc, &loc.toric, bound)?;
    let phi = build_phi(loc, bound, zcap)?;
    let report = check_double_construction(loc, &psi, &phi)?;
    let witness = match &report.first_mismatch {
        None => format!("{} coefficients agree", report.compared),
        Some((d, m)) => format!("first mismatch at d = {}, z^{m:?}", format_degree(d)),
    };
    s.check("double construction", report.passed(), witness);
    Ok(())
}

fn pde_section(s: &mut Section, loc: &Localization, bound: u64, degrees: &[Degree]) -> Result<()> {
    let toric = &loc.toric;
    let psi = build_psi(loc, toric, bound)?;
    let ops: Vec<DeltaOperator> =
        degrees.iter().map(|d| DeltaOperator::generalized(toric, d)).collect::<Result<_>>()?;
    let report = check_annihilation(loc, toric, &psi, &ops)?;
    for (d, failure) in &report.results {
        let witness = match failure {
            None => format!("zero at {} fixed points through <t*,d> <= {bound}", toric.fps.len()),
            Some(w) => w.clone(),
        };
        s.check(format!("Δ_{}", format_degree(d)), failure.is_none(), witness);
    }
    Ok(())
}

fn relations_section(s: &mut Section, toric: &Toric, degrees: &[Degree]) -> Result<()> {
    for r in quantum_relations(toric, degrees)? {
        s.field(format!("relation {}", format_degree(&r.d)), r.render(toric));
    }
    for r in classical_relations(toric) {
        s.field("classical relation", r);
    }
    Ok(())
}

fn mirror_section(
    s: &mut Section,
    cfg: &JobConfig,
    loc: &Localization,
    bound: u64,
    transport: Option<&TransportTarget>,
) -> Result<()> {
    let toric = &loc.toric;
    if loc.is_specialized() {
        // the λ-parts of the shift cannot be separated on a line, so use ordinary cohomology
        s.field("algebra", "ordinary cohomology");
        let ring = CohomologyRing::new(&Localization::new(toric.clone(), LambdaMode::Symbolic))?;
        mirror_with(s, &ring, toric, bound)?;
    } else {
        s.field("algebra", "equivariant localization");
        mirror_with(s, loc, toric, bound)?;
    }
    if let Some(t) = transport {
        let target = Toric::new(ToricInput::new(t.m.clone(), t.t.clone(), cfg.bundle.clone())?, None)?;
        let degrees = t.degrees.clone().unwrap_or_else(|| default_operator_degrees(&target));
        let report = check_transport(toric, &target, bound, &degrees)?;
        s.field("transport target M", format_matrix(&target.input.m));
        let witness = match report.mismatches.first() {
            None => "normalized Ψ equals the target's Ψ in its ring".to_string(),
            Some(d) => format!("differs at d = {}", format_degree(d)),
        };
        s.check("transported Ψ", report.mismatches.is_empty(), witness);
        for (d, failure) in &report.annihilation.results {
            let witness = failure.clone().unwrap_or_else(|| format!("zero through <t*,d> <= {bound}"));
            s.check(format!("target Δ_{} on transported Ψ", format_degree(d)), failure.is_none(), witness);
        }
    }
    Ok(())
}

fn mirror_with<A: AsymptoticAlgebra>(s: &mut Section, alg: &A, toric: &Toric, bound: u64) -> Result<()> {
    let psi = build_psi(alg, toric, bound)?;
    let asym = expand_asymptotics(alg, toric, &psi)?;
    s.series("Ψ⁽⁰⁾", rational_records(toric, &asym.psi0));
    let (_, map) = normalize_to_flat(alg, toric, &psi, &asym, Some(2))?;
    s.check("normalized", true, "Ψ becomes 1 + O(ħ⁻²)");
    let shape = map.check_shape(toric);
    s.check(
        "map shape",
        shape.is_ok(),
        shape.err().map_or("f₀, f_i, g_j of degree 0; h of degree 1".into(), |e| e.to_string()),
    );
    s.series("f0", rational_records(toric, &map.f0));
    s.series("h", rational_records(toric, &map.h));
    for (i, f) in map.fi.iter().enumerate() {
        s.series(format!("f{}", i + 1), rational_records(toric, f));
    }
    for (j, g) in map.gj.iter().enumerate() {
        s.series(format!("g{}", j + 1), rational_records(toric, g));
    }
    for (a, g) in map.ga.iter().enumerate() {
        s.series(format!("G{}", a + 1), rational_records(toric, g));
    }
    let one = Rational::one();
    for (i, f) in map.fi.iter().enumerate() {
        s.series(format!("Q{0}/q{0}", i + 1), rational_records(toric, &f.exp(&one)?));
    }
    for (i, psi_i) in map.inverse.iter().enumerate() {
        s.series(format!("q{0}/Q{0}", i + 1), rational_records(toric, &psi_i.exp(&one)?));
    }
    // ψ(Q(q)) + φ(q) = 0 says the two changes of variables are inverse
    let mut failure = None;
    for (i, psi_i) in map.inverse.iter().enumerate() {
        let round = psi_i.substitute_shift(&map.fi)?.add(&map.fi[i])?;
        if let Some((d, _)) = round.sorted_terms().first() {
            failure.get_or_insert(format!("component {} differs at d = {}", i + 1, format_degree(d)));
        }
    }
    let ok = failure.is_none();
    s.check(
        "reversion",
        ok,
        failure.unwrap_or_else(|| format!("q = Q e^ψ(Q) inverts Q = q e^φ(q) through <t*,d> <= {bound}")),
    );
    Ok(())
}
