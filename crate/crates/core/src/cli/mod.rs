//! Job files, section dispatch and report rendering.

pub mod config;
pub mod execute;
pub mod report;

pub use config::{parse_config, Command, JobConfig, SectionKind, TransportTarget};
pub use execute::{execute, format_degree, Overrides};
pub use report::{Item, Record, Report, Section};
