//! Single-electron Holstein model on a ring or open chain.
//!
//! `H = -t sum_<ij> c_i^dag c_j + omega0 sum_i b_i^dag b_i + g sum_i n_i (b_i^dag + b_i)`
//! with the zero-point energy dropped.

mod basis;
mod hamiltonian;
mod lanczos;

use serde::{Deserialize, Serialize};

pub use basis::{FockBasis, FockState, PhononBasis, Truncation};
pub use hamiltonian::{
    build_hamiltonian, build_hamiltonian_with, build_momentum_zero_hamiltonian, SparseHamiltonian,
    DEFAULT_DIMENSION_CAP,
};
pub use lanczos::{ground_state, ground_state_with, GroundState, LanczosOptions};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

/// Holstein parameters in units with hbar = 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub t: f64,
    pub omega0: f64,
    pub g: f64,
    pub sites: usize,
    pub n_max: usize,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub truncation: Truncation,
}

impl ModelParams {
    pub fn new(t: f64, omega0: f64, g: f64, sites: usize, n_max: usize) -> Result<Self> {
        let p = Self {
            t,
            omega0,
            g,
            sites,
            n_max,
            boundary: Boundary::Periodic,
            truncation: Truncation::PerSite,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters at effective coupling `lambda`, i.e. `g = sqrt(2 t omega0 lambda)`.
    pub fn from_lambda(t: f64, omega0: f64, lambda: f64, sites: usize, n_max: usize) -> Result<Self> {
        if t <= 0.0 || lambda < 0.0 {
            return Err(Error::InvalidParams(format!(
                "lambda parametrisation needs t > 0 and lambda >= 0 (t = {t}, lambda = {lambda})"
            )));
        }
        Self::new(t, omega0, (2.0 * t * omega0 * lambda).sqrt(), sites, n_max)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_coupling(&self, g: f64) -> Self {
        Self { g, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.t.is_finite() && self.t >= 0.0) {
            return bad(format!("t must be finite and >= 0, got {}", self.t));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return bad(format!("omega0 must be finite and > 0, got {}", self.omega0));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return bad(format!("g must be finite and >= 0, got {}", self.g));
        }
        if self.sites == 0 || !self.sites.is_power_of_two() {
            return bad(format!("site count must be a power of two, got {}", self.sites));
        }
        if self.n_max == 0 {
            return bad("n_max must be at least 1".into());
        }
        Ok(())
    }

    /// `g / omega0`, the displacement of the `t = 0` ground state.
    pub fn strong_coupling_alpha(&self) -> f64 {
        self.g / self.omega0
    }

    pub fn electron_qubits(&self) -> usize {
        self.sites.trailing_zeros() as usize
    }
}

/// Effective coupling `g^2 / (2 t omega0)`.
pub fn lambda_of(params: &ModelParams) -> Result<f64> {
    if params.t == 0.0 {
        return Err(Error::LambdaUndefined);
    }
    Ok(params.g * params.g / (2.0 * params.t * params.omega0))
}

/// Cutoff heuristic covering the coherent-state tail: `max(10, ceil(a^2 + 5 a))`, `a = g/omega0`.
pub fn default_n_max(g: f64, omega0: f64) -> usize {
    let a = g / omega0;
    (a * a + 5.0 * a).ceil().max(10.0) as usize
}
