//! Warm-start state preparation for the single-electron Holstein polaron.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] builds the Holstein Hamiltonian on a truncated phonon space and
//!   finds its ground state with a restarted Lanczos solver.
//! * [`ansatz`] constructs the Lang-Firsov trial state, solves for the
//!   energy-optimal displacement and computes ground-state overlaps.
//! * [`circuit`] is a small gate-level circuit model with a dense statevector
//!   simulator, plus the QFT-based displacement and the full preparation circuit.
//! * [`qet`] prepares the grid-encoded oscillator vacuum through quantum
//!   eigenvalue transformation and exact amplitude amplification.
//! * [`resources`] tallies gates under an explicit decomposition policy and
//!   computes T-counts and the warm-start cost ratio.

pub mod ansatz;
pub mod circuit;
pub mod error;
pub mod lattice;
pub mod qet;
pub mod resources;
pub mod state;

pub use error::{Error, Result};
pub use state::QuantumState;
