mod angle;
mod bits;
pub mod chform;
pub mod circuit;
pub mod clifford;
pub mod decompose;
mod error;
pub mod oracle;
pub mod pauli;
pub mod recompile;
pub mod sparsify;

pub use angle::Angle;
pub use bits::BitString;
pub use chform::{CHForm, StabilizerKey};
pub use circuit::{Circuit, Gate, GateCounts, PauliRotation, RandomCircuitSpec};
pub use clifford::{CliffordGate, Tableau};
pub use error::{Error, Result};
pub use oracle::{fidelity_distance, DenseState};
pub use pauli::{binary_rank, commutes, multiply, PauliOperator, SinglePauli};
pub use recompile::{recompile, RecompiledCircuit, Rotation};
pub use decompose::{CliffordDecomposition, CliffordTerm, Grouping};
pub use sparsify::{Engine, SamplingPlan, SparseSample, SparseState, TrajectoryStats};
