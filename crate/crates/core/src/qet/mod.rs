//! Grid-vacuum preparation by quantum eigenvalue transformation of a
//! sin block-encoding, followed by exact amplitude amplification.

mod circuits;
mod phases;
mod poly;

pub use circuits::{
    plan_amplification, prepare_vacuum, prepare_vacuum_u0, prepare_with_phases, qsp_real_circuit, signal_value,
    sin_block_encoding, zero_reflection, AmplificationPlan, ExactSchedule, QspQubits, VacuumPreparation,
    DEFAULT_DEGREE, PHASE_TOLERANCE, SAFETY_SCALE,
};
pub use phases::{conjugate_phases, solve_phase_factors, PhaseConvention, PhaseFactorSet, RECONSTRUCTION_GRID_POINTS};
pub use poly::{approx_gaussian_poly, ChebyshevPolynomial, GaussianApproximation, Parity, TargetFunction, ERROR_GRID_POINTS};
