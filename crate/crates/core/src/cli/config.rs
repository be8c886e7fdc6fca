//! Job files: one `[job]` table per document, matrices as arrays of integer
//! arrays, rationals as `"p/q"` strings.

use std::fmt::Write as _;

use toml::{Table, Value};

use crate::algebra::rational::{format_rational, parse_rational, Rational};
use crate::algebra::series::Degree;
use crate::equivariant::LambdaMode;
use crate::error::{Error, Result};
use crate::toric::{Toric, ToricInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SectionKind {
    Toric,
    Psi,
    Phi,
    Recursion,
    Double,
    Mirror,
    Pde,
    Relations,
}

impl SectionKind {
    pub const ALL: [SectionKind; 8] = [
        SectionKind::Toric,
        SectionKind::Psi,
        SectionKind::Phi,
        SectionKind::Recursion,
        SectionKind::Double,
        SectionKind::Mirror,
        SectionKind::Pde,
        SectionKind::Relations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SectionKind::Toric => "toric",
            SectionKind::Psi => "psi",
            SectionKind::Phi => "phi",
            SectionKind::Recursion => "recursion",
            SectionKind::Double => "double",
            SectionKind::Mirror => "mirror",
            SectionKind::Pde => "pde",
            SectionKind::Relations => "relations",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// A second presentation to which the mirror section moves Ψ.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportTarget {
    pub m: Vec<Vec<i64>>,
    pub t: Vec<Rational>,
    pub degrees: Option<Vec<Degree>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Command {
    pub section: SectionKind,
    pub bound: Option<u64>,
    pub zcap: Option<u32>,
    /// Operator or relation degrees; defaults to the minimal edge classes.
    pub degrees: Option<Vec<Degree>>,
    pub transport: Option<TransportTarget>,
}

impl Command {
    pub fn new(section: SectionKind) -> Self {
        Command { section, bound: None, zcap: None, degrees: None, transport: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub name: String,
    pub k: usize,
    pub n: usize,
    pub l: usize,
    pub m: Vec<Vec<i64>>,
    pub t: Vec<Rational>,
    /// k rows of length l, or empty when l = 0.
    pub bundle: Vec<Vec<i64>>,
    pub ample: Option<Vec<Rational>>,
    pub bound: u64,
    pub zcap: u32,
    pub lambda_mode: LambdaMode,
    pub commands: Vec<Command>,
}

pub const DEFAULT_ZCAP: u32 = 2;

fn cfg_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config { path: path.into(), message: message.into() }
}

pub fn parse_lambda_mode(s: &str) -> Option<LambdaMode> {
    if s == "symbolic" {
        return Some(LambdaMode::Symbolic);
    }
    s.strip_prefix("seed:").and_then(|n| n.trim().parse().ok()).map(LambdaMode::Specialized)
}

pub fn format_lambda_mode(mode: &LambdaMode) -> String {
    match mode {
        LambdaMode::Symbolic => "symbolic".into(),
        LambdaMode::Specialized(seed) => format!("seed:{seed}"),
    }
}

fn get_int(v: &Value, path: &str) -> Result<i64> {
    v.as_integer().ok_or_else(|| cfg_err(path, format!("expected an integer, found {}", v.type_str())))
}

fn get_nonneg(v: &Value, path: &str) -> Result<u64> {
    let x = get_int(v, path)?;
    u64::try_from(x).map_err(|_| cfg_err(path, format!("must be non-negative, found {x}")))
}

fn get_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| cfg_err(path, format!("expected an array, found {}", v.type_str())))
}

fn get_int_row(v: &Value, path: &str) -> Result<Vec<i64>> {
    get_array(v, path)?.iter().enumerate().map(|(i, x)| get_int(x, &format!("{path}[{i}]"))).collect()
}

fn get_matrix(v: &Value, path: &str) -> Result<Vec<Vec<i64>>> {
    get_array(v, path)?.iter().enumerate().map(|(i, r)| get_int_row(r, &format!("{path}[{i}]"))).collect()
}

fn get_rational(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| cfg_err(path, format!("\"{s}\" is not a rational \"p/q\"")))
        }
        Value::Integer(x) => Ok(Rational::from_integer((*x).into())),
        other => Err(cfg_err(path, format!("expected a rational string \"p/q\", found {}", other.type_str()))),
    }
}

fn get_rational_vec(v: &Value, path: &str) -> Result<Vec<Rational>> {
    get_array(v, path)?.iter().enumerate().map(|(i, x)| get_rational(x, &format!("{path}[{i}]"))).collect()
}

fn check_keys(table: &Table, allowed: &[&str], path: &str) -> Result<()> {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(cfg_err(
                &format!("{path}.{key}"),
                format!("unknown key; expected one of {}", allowed.join(", ")),
            ));
        }
    }
    Ok(())
}

fn required<'a>(table: &'a Table, key: &str, path: &str) -> Result<&'a Value> {
    table.get(key).ok_or_else(|| cfg_err(&format!("{path}.{key}"), "missing"))
}

fn check_rows(m: &[Vec<i64>], rows: usize, cols: usize, path: &str, what: &str) -> Result<()> {
    if m.len() != rows {
        return Err(cfg_err(path, format!("has {} rows, expected {rows} (k)", m.len())));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(cfg_err(
                &format!("{path}[{i}]"),
                format!("row {i} has {} entries, expected {cols} ({what})", row.len()),
            ));
        }
    }
    Ok(())
}

fn check_length<T>(v: &[T], k: usize, path: &str) -> Result<()> {
    if v.len() != k {
        return Err(cfg_err(path, format!("has {} entries, expected {k} (k)", v.len())));
    }
    Ok(())
}

/// Builds the toric data, attributing failures to the key that caused them.
fn validate_toric(
    m: &[Vec<i64>],
    t: &[Rational],
    bundle: &[Vec<i64>],
    ample: Option<&[Rational]>,
    path: &str,
) -> Result<Toric> {
    let at = |key: &str| format!("{path}.{key}");
    let input = ToricInput::new(m.to_vec(), t.to_vec(), bundle.to_vec()).map_err(|e| match e {
        Error::ChamberOnWall(msg) => cfg_err(&at("t"), format!("chamber point on a wall: {msg}")),
        Error::InvalidInput(msg) if msg.contains("bundle") || msg.starts_with('L') => cfg_err(&at("L"), msg),
        Error::InvalidInput(msg) => cfg_err(&at("M"), msg),
        other => cfg_err(path, other.to_string()),
    })?;
    Toric::new(input, ample.map(<[Rational]>::to_vec)).map_err(|e| match e {
        Error::ChamberOnWall(msg) => cfg_err(&at("t"), format!("chamber point on a wall: {msg}")),
        Error::EmptyPolyhedron => cfg_err(&at("t"), "empty momentum polyhedron"),
        Error::NotAmple(msg) => cfg_err(&at("ample"), format!("not ample: {msg}")),
        Error::NonCompact(msg) => cfg_err(&at("M"), format!("non-compact: {msg}")),
        other => cfg_err(path, other.to_string()),
    })
}

fn parse_degrees(v: &Value, k: usize, path: &str) -> Result<Vec<Degree>> {
    let ds = get_matrix(v, path)?;
    for (i, d) in ds.iter().enumerate() {
        check_length(d, k, &format!("{path}[{i}]"))?;
    }
    Ok(ds)
}

fn parse_transport(v: &Value, k: usize, path: &str) -> Result<TransportTarget> {
    let table = v.as_table().ok_or_else(|| cfg_err(path, "expected a table"))?;
    check_keys(table, &["M", "t", "degrees"], path)?;
    let m = get_matrix(required(table, "M", path)?, &format!("{path}.M"))?;
    let n = m.first().map_or(0, Vec::len);
    check_rows(&m, k, n, &format!("{path}.M"), "columns of the first row")?;
    let t = get_rational_vec(required(table, "t", path)?, &format!("{path}.t"))?;
    check_length(&t, k, &format!("{path}.t"))?;
    let degrees = table.get("degrees").map(|d| parse_degrees(d, k, &format!("{path}.degrees"))).transpose()?;
    validate_toric(&m, &t, &[], None, path)?;
    Ok(TransportTarget { m, t, degrees })
}

fn parse_command(v: &Value, k: usize, path: &str) -> Result<Command> {
    let table = v.as_table().ok_or_else(|| cfg_err(path, "expected a table"))?;
    check_keys(table, &["section", "bound", "zcap", "degrees", "transport"], path)?;
    let name = required(table, "section", path)?;
    let name = name.as_str().ok_or_else(|| cfg_err(&format!("{path}.section"), "expected a string"))?;
    let section = SectionKind::parse(name).ok_or_else(|| {
        let all: Vec<&str> = SectionKind::ALL.iter().map(|s| s.name()).collect();
        cfg_err(&format!("{path}.section"), format!("unknown section \"{name}\"; expected one of {}", all.join(", ")))
    })?;
    let bound = table.get("bound").map(|b| get_nonneg(b, &format!("{path}.bound"))).transpose()?;
    let zcap = table.get("zcap").map(|z| get_nonneg(z, &format!("{path}.zcap")).map(|z| z as u32)).transpose()?;
    let degrees = table.get("degrees").map(|d| parse_degrees(d, k, &format!("{path}.degrees"))).transpose()?;
    let transport = table.get("transport").map(|t| parse_transport(t, k, &format!("{path}.transport"))).transpose()?;
    if transport.is_some() && section != SectionKind::Mirror {
        return Err(cfg_err(&format!("{path}.transport"), "only the mirror section takes a transport target"));
    }
    Ok(Command { section, bound, zcap, degrees, transport })
}

/// Parses and validates a job document.
pub fn parse_config(text: &str) -> Result<JobConfig> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| cfg_err("document", e.message().to_string()))?;
    check_keys(&doc, &["job"], "")?;
    let job = doc.get("job").and_then(Value::as_table).ok_or_else(|| cfg_err("job", "missing [job] table"))?;
    let p = "job";
    check_keys(job, &["name", "k", "N", "l", "M", "t", "L", "ample", "bound", "zcap", "lambda_mode", "commands"], p)?;
    let name = required(job, "name", p)?.as_str().ok_or_else(|| cfg_err("job.name", "expected a string"))?.to_string();
    let k = get_nonneg(required(job, "k", p)?, "job.k")? as usize;
    let n = get_nonneg(required(job, "N", p)?, "job.N")? as usize;
    let l = match job.get("l") {
        Some(v) => get_nonneg(v, "job.l")? as usize,
        None => 0,
    };
    if k == 0 {
        return Err(cfg_err("job.k", "must be positive"));
    }
    let m = get_matrix(required(job, "M", p)?, "job.M")?;
    check_rows(&m, k, n, "job.M", "N")?;
    let t = get_rational_vec(required(job, "t", p)?, "job.t")?;
    check_length(&t, k, "job.t")?;
    let mut bundle = match job.get("L") {
        Some(v) => get_matrix(v, "job.L")?,
        None => Vec::new(),
    };
    if l == 0 && bundle.iter().all(Vec::is_empty) {
        bundle.clear();
    } else {
        check_rows(&bundle, k, l, "job.L", "l")?;
    }
    let ample = job.get("ample").map(|v| get_rational_vec(v, "job.ample")).transpose()?;
    if let Some(a) = &ample {
        check_length(a, k, "job.ample")?;
    }
    let bound = get_nonneg(required(job, "bound", p)?, "job.bound")?;
    let zcap = match job.get("zcap") {
        Some(v) => get_nonneg(v, "job.zcap")? as u32,
        None => DEFAULT_ZCAP,
    };
    let lambda_mode = match job.get("lambda_mode") {
        Some(v) => {
            let s = v.as_str().ok_or_else(|| cfg_err("job.lambda_mode", "expected a string"))?;
            parse_lambda_mode(s).ok_or_else(|| {
                cfg_err("job.lambda_mode", format!("\"{s}\" is neither \"symbolic\" nor \"seed:<int>\""))
            })?
        }
        None => LambdaMode::Symbolic,
    };
    let commands = match job.get("commands") {
        Some(v) => get_array(v, "job.commands")?
            .iter()
            .enumerate()
            .map(|(i, c)| parse_command(c, k, &format!("job.commands[{i}]")))
            .collect::<Result<_>>()?,
        None => SectionKind::ALL.into_iter().map(Command::new).collect(),
    };
    validate_toric(&m, &t, &bundle, ample.as_deref(), p)?;
    Ok(JobConfig { name, k, n, l, m, t, bundle, ample, bound, zcap, lambda_mode, commands })
}

pub fn format_matrix(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", join(r.iter().map(i64::to_string)))).collect();
    format!("[{}]", rows.join(", "))
}

pub fn format_rationals(v: &[Rational]) -> String {
    format!("[{}]", join(v.iter().map(|x| format!("\"{}\"", format_rational(x)))))
}

fn join(it: impl Iterator<Item = String>) -> String {
    it.collect::<Vec<_>>().join(", ")
}

impl JobConfig {
    pub fn toric(&self) -> Result<Toric> {
        validate_toric(&self.m, &self.t, &self.bundle, self.ample.as_deref(), "job")
    }

    /// The canonical job document; `parse_config` maps it back to `self`.
    pub fn to_document(&self) -> String {
        let mut s = String::from("[job]\n");
        let _ = writeln!(s, "name = {}", Value::String(self.name.clone()));
        let _ = writeln!(s, "k = {}\nN = {}\nl = {}", self.k, self.n, self.l);
        let _ = writeln!(s, "M = {}", format_matrix(&self.m));
        let _ = writeln!(s, "t = {}", format_rationals(&self.t));
        let _ = writeln!(s, "L = {}", format_matrix(&self.bundle));
        if let Some(a) = &self.ample {
            let _ = writeln!(s, "ample = {}", format_rationals(a));
        }
        let _ = writeln!(s, "bound = {}\nzcap = {}", self.bound, self.zcap);
        let _ = writeln!(s, "lambda_mode = \"{}\"", format_lambda_mode(&self.lambda_mode));
        if self.commands.is_empty() {
            s.push_str("commands = []\n");
        }
        for c in &self.commands {
            let _ = write!(s, "\n[[job.commands]]\nsection = \"{}\"\n", c.section.name());
            if let Some(b) = c.bound {
                let _ = writeln!(s, "bound = {b}");
            }
            if let Some(z) = c.zcap {
                let _ = writeln!(s, "zcap = {z}");
            }
            if let Some(d) = &c.degrees {
                let _ = writeln!(s, "degrees = {}", format_matrix(d));
            }
            if let Some(t) = &c.transport {
                let _ = write!(s, "transport = {{ M = {}, t = {}", format_matrix(&t.m), format_rationals(&t.t));
                if let Some(d) = &t.degrees {
                    let _ = write!(s, ", degrees = {}", format_matrix(d));
                }
                s.push_str(" }\n");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    const X1: &str = r#"
[job]
name = "x1"
k = 2
N = 5
M = [[1, 1, 0, -1, -1], [0, 0, 1, 1, 1]]
t = ["1", "2"]
bound = 6

[[job.commands]]
section = "relations"
degrees = [[1, 0], [0, 1]]
"#;

    #[test]
    fn parses_x1() {
        let cfg = parse_config(X1).unwrap();
        assert_eq!((cfg.k, cfg.n, cfg.l), (2, 5, 0));
        assert_eq!(cfg.m, vec![vec![1, 1, 0, -1, -1], vec![0, 0, 1, 1, 1]]);
        assert_eq!(cfg.t, vec![rat(1), rat(2)]);
        assert_eq!(cfg.zcap, DEFAULT_ZCAP);
        assert_eq!(cfg.lambda_mode, LambdaMode::Symbolic);
        assert_eq!(cfg.commands[0].degrees, Some(vec![vec![1, 0], vec![0, 1]]));
        assert_eq!(parse_config(&cfg.to_document()).unwrap(), cfg);
    }

    fn err_path(text: &str) -> String {
        match parse_config(text).unwrap_err() {
            Error::Config { path, .. } => path,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_key_paths() {
        assert_eq!(err_path(&X1.replace("[0, 0, 1, 1, 1]", "[0, 0, 1, 1]")), "job.M[1]");
        assert_eq!(err_path(&X1.replace("t = [\"1\", \"2\"]", "t = [\"1\", \"0\"]")), "job.t");
        assert_eq!(err_path(&X1.replace("t = [\"1\", \"2\"]", "t = [\"1\", \"x\"]")), "job.t[1]");
        assert_eq!(err_path(&X1.replace("bound = 6", "bound = -1")), "job.bound");
        assert_eq!(err_path(&X1.replace("\"relations\"", "\"nope\"")), "job.commands[0].section");
        assert_eq!(err_path(&X1.replace("bound = 6", "bound = 6\nextra = 1")), "job.extra");
        let p2_zero_column =
            "[job]\nname = \"p\"\nk = 1\nN = 3\nl = 1\nM = [[1, 1, 1]]\nt = [\"1\"]\nL = [[0]]\nbound = 1\n";
        assert_eq!(err_path(p2_zero_column), "job.L");
    }

    #[test]
    fn lambda_modes() {
        assert_eq!(parse_lambda_mode("seed:17"), Some(LambdaMode::Specialized(17)));
        assert_eq!(parse_lambda_mode("seed:x"), None);
        assert_eq!(format_lambda_mode(&LambdaMode::Specialized(3)), "seed:3");
    }
}
