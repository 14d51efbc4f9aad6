//! Simulation of entanglement and mutual-information recovery for a Bell pair
//! whose first photon crosses a decohering, lossy polarization channel, using
//! a local filter on the second photon.
//!
//! Modules, bottom up:
//!
//! * [`qmat`]: 2x2 / 4x4 complex matrices, Jacobi eigensolver, partial trace.
//! * [`qstate`]: density matrices, entropy, mutual information, concurrence.
//! * [`channel`]: filters, birefringence, Pauli noise, the filtered state.
//! * [`recover`]: optimal compensating filter and parameter sweeps.
//! * [`tomo`]: simulated tomography and linear-inversion reconstruction.
//! * [`cli`]: the `qfilter` command line.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod error;
pub mod qmat;
pub mod qstate;
pub mod recover;
pub mod sample;
pub mod stokes;
pub mod tomo;

pub use channel::{
    apply_filters, apply_pauli_channel, bloch_ellipsoid, dephasing_from_spectrum, filter_operator,
    pauli_channel_state, unitary_operator, BirefringenceSpec, BlochEllipsoid, FilterElement,
    FilteredState, PauliNoiseSpec,
};
pub use error::{Error, Result};
pub use qmat::{ComplexMatrix, EigenDecomposition, Qubit, C64};
pub use qstate::{
    bell_diagonal_weights, bell_state, concurrence, correlation_matrix, fidelity, fidelity_pure,
    mutual_information, von_neumann_entropy, BellLabel, BellWeights, CorrelationMatrix, DensityMatrix,
};
pub use recover::{
    average_entanglement, concurrence_after_filtering, optimal_magnitude, optimal_orientation,
    plan_recovery, ratio_scan, sweep, Metric, RecoveryPlan, Strategy, SweepPoint,
};
pub use stokes::UnitVector;
pub use tomo::{reconstruct, simulate_counts, standard_settings, MeasurementSetting, TomographyRecord};
