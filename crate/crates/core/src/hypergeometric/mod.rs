//! The series Ψ, the map-space series Φ, and the identities relating them.

pub mod double;
pub mod phi;
pub mod psi;
pub mod recursion;

pub use double::{check_double_construction, DoubleReport};
pub use phi::{build_phi, check_phi, PhiReport, PhiSeries};
pub use psi::{build_psi, psi_alpha, psi_factors};
pub use recursion::{check_recursion, recursion_coefficient, RecursionCoefficient, RecursionReport};
