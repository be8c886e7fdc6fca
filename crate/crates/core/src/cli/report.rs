//! One report tree, rendered as text or as JSON.

use std::fmt::Write as _;

use serde::Serialize;

/// One term of a printed series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    /// Exponents of `q` in the input basis.
    pub d: Vec<i64>,
    /// `deg q^d`.
    pub grade: i64,
    /// `⟨t*, d⟩`.
    pub pairing: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Item {
    Field { key: String, value: String },
    Series { name: String, records: Vec<Record> },
    Check { name: String, passed: bool, witness: String },
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub passed: bool,
    pub items: Vec<Item>,
}

impl Section {
    pub fn new(name: &str) -> Self {
        Section { name: name.into(), passed: true, items: Vec::new() }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.items.push(Item::Field { key: key.into(), value: value.into() });
    }

    pub fn series(&mut self, name: impl Into<String>, records: Vec<Record>) {
        self.items.push(Item::Series { name: name.into(), records });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: impl Into<String>) {
        self.passed &= passed;
        self.items.push(Item::Check { name: name.into(), passed, witness: witness.into() });
    }

    pub fn error(&mut self, message: impl Into<String>) {
        self.passed = false;
        self.items.push(Item::Error { message: message.into() });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub job: String,
    /// The canonical job document the run used.
    pub config: String,
    pub sections: Vec<Section>,
    pub passed: bool,
}

impl Report {
    pub fn new(job: String, config: String, sections: Vec<Section>) -> Self {
        let passed = sections.iter().all(|s| s.passed);
        Report { job, config, sections, passed }
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "job {}", self.job);
        for line in self.config.lines() {
            let _ = writeln!(out, "  | {line}");
        }
        for s in &self.sections {
            let _ = writeln!(out, "\n== {} ==", s.name);
            for item in &s.items {
                match item {
                    Item::Field { key, value } => {
                        let _ = writeln!(out, "{key}: {value}");
                    }
                    Item::Series { name, records } => {
                        let _ = writeln!(out, "{name}:");
                        for r in records {
                            let d: Vec<String> = r.d.iter().map(i64::to_string).collect();
                            let _ = writeln!(
                                out,
                                "  d=({}) deg={} <t*,d>={}  {}",
                                d.join(","),
                                r.grade,
                                r.pairing,
                                r.coefficient
                            );
                        }
                    }
                    Item::Check { name, passed, witness } => {
                        let _ = writeln!(out, "{} {name}  [{witness}]", if *passed { "PASS" } else { "FAIL" });
                    }
                    Item::Error { message } => {
                        let _ = writeln!(out, "ERROR {message}");
                    }
                }
            }
            let _ = writeln!(out, "-- {}: {}", s.name, if s.passed { "passed" } else { "failed" });
        }
        let _ = writeln!(out, "\nresult: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }

    pub fn to_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
