//! Dense small-dimension quantum state arithmetic.

mod density;
mod distance;
mod measure;
mod pauli;


pub use density::{CMatrix, DensityMatrix, Subsystem};
pub use distance::{channel_choi_distance, choi_state, trace_distance, Channel, IdentityChannel};
pub use measure::{measure_and_discard, measure_computational, measurement_distribution, project};
pub use pauli::{
    apply_pauli, apply_unitary, pauli_from_key, qotp_average, qotp_average_with_limit, squares_to_identity,
    PauliKey, UnitaryMatrix,
};

/// Tolerance for density-matrix invariant checks.
pub const TOL_PSD: f64 = 1e-9;

/// Tolerance for algebraic identities.
pub const TOL_ALGEBRA: f64 = 1e-10;

/// Largest qubit count for which every Pauli key is enumerated.
pub const N_MAX_EXHAUSTIVE: usize = 3;
