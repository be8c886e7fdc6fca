//! Asymptotics of Ψ, normalization to flat coordinates, the operators Δ_d and
//! the relation symbols they produce.

pub mod asymptotics;
pub mod delta;
pub mod relations;
pub mod transport;

pub use asymptotics::{expand_asymptotics, normalize_to_flat, AsymptoticAlgebra, AsymptoticData, Linear, MirrorMap};
pub use delta::{apply_delta, check_annihilation, default_operator_degrees, AnnihilationReport, DeltaOperator};
pub use relations::{classical_relations, linear_form, quantum_relations, RelationSymbol};
pub use transport::{check_transport, TransportReport};
