//! Lang-Firsov trial states and their overlap with the exact ground state.
//!
//! The trial state is `N^{-1/2} sum_i |i>_E (x) |-alpha>_{B_i} (x)_{j != i} |vac>_{B_j}`
//! with the coherent amplitudes `e^{-alpha^2/2} (-alpha)^nu / sqrt(nu!)` truncated at
//! the phonon cutoff and renormalised.

use serde::{Deserialize, Serialize};

use crate::lattice::{
    build_hamiltonian_with, build_momentum_zero_hamiltonian, default_n_max, ground_state_with, Boundary,
    FockBasis, FockState, LanczosOptions, ModelParams, PhononBasis, Truncation, DEFAULT_DIMENSION_CAP,
};
use crate::state::overlap;
use crate::{Error, QuantumState, Result};

/// Minimum fraction of the coherent-state norm that must survive truncation.
pub const MIN_COHERENT_NORM2: f64 = 0.999;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "value")]
pub enum AlphaChoice {
    Zero,
    StrongCoupling,
    Variational,
    Explicit(f64),
}

impl AlphaChoice {
    pub fn resolve(&self, params: &ModelParams) -> Result<f64> {
        match *self {
            AlphaChoice::Zero => Ok(0.0),
            AlphaChoice::StrongCoupling => Ok(params.strong_coupling_alpha()),
            AlphaChoice::Variational => solve_variational_alpha(params, 1e-12, 200),
            AlphaChoice::Explicit(a) if a.is_finite() => Ok(a),
            AlphaChoice::Explicit(a) => Err(Error::InvalidParams(format!("non-finite alpha {a}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            AlphaChoice::Zero => "zero",
            AlphaChoice::StrongCoupling => "strong",
            AlphaChoice::Variational => "variational",
            AlphaChoice::Explicit(_) => "explicit",
        }
    }
}

/// Variational energy of the trial state in the untruncated space:
/// `E(alpha) = -2 t e^{-alpha^2} + omega0 alpha^2 - 2 g alpha`.
pub fn lf_energy(params: &ModelParams, alpha: f64) -> f64 {
    -2.0 * params.t * (-alpha * alpha).exp() + params.omega0 * alpha * alpha - 2.0 * params.g * alpha
}

/// `alpha - g/omega0 + (2 t alpha / omega0) e^{-alpha^2}`; zero at stationary points of [`lf_energy`].
pub fn displacement_residual(params: &ModelParams, alpha: f64) -> f64 {
    alpha - params.g / params.omega0 + 2.0 * params.t * alpha / params.omega0 * (-alpha * alpha).exp()
}

/// Solves the stationarity condition for alpha, returning the root of lowest energy.
///
/// Every local minimum of `E` lies in `[0, g/omega0]`, where the residual
/// changes sign from negative to positive. The interval is scanned on a fine
/// grid and each upward crossing is bisected.
pub fn solve_variational_alpha(params: &ModelParams, tol: f64, max_iter: usize) -> Result<f64> {
    params.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let upper = params.strong_coupling_alpha();
    if params.g == 0.0 {
        return Ok(0.0);
    }
    if params.t == 0.0 {
        return Ok(upper);
    }
    const SCAN: usize = 4096;
    let f = |a: f64| displacement_residual(params, a);
    let mut best: Option<(f64, f64)> = None;
    let mut lo = 0.0;
    let mut f_lo = f(lo);
    for k in 1..=SCAN {
        let hi = upper * k as f64 / SCAN as f64;
        let f_hi = f(hi);
        if f_lo <= 0.0 && f_hi > 0.0 {
            let root = bisect(&f, lo, hi, tol, max_iter)?;
            let e = lf_energy(params, root);
            if best.map_or(true, |(_, be)| e < be) {
                best = Some((root, e));
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    best.map(|(a, _)| a).ok_or(Error::NoBracket)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < tol * 1e-3 || hi - lo < f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
        if fm > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let residual = f(mid).abs();
    if residual < tol {
        Ok(mid)
    } else {
        Err(Error::NotConverged {
            iterations: max_iter,
            residual,
        })
    }
}

/// Fock amplitudes of the coherent state `|-alpha>` on `0..=n_max`, renormalised.
pub fn coherent_amplitudes(alpha: f64, n_max: usize) -> Result<Vec<f64>> {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut c = (-0.5 * alpha * alpha).exp();
    for nu in 0..=n_max {
        amps.push(c);
        c *= -alpha / ((nu + 1) as f64).sqrt();
    }
    let norm2: f64 = amps.iter().map(|a| a * a).sum();
    if norm2 < MIN_COHERENT_NORM2 {
        return Err(Error::TruncationLoss { alpha, n_max, norm2 });
    }
    let n = norm2.sqrt();
    Ok(amps.into_iter().map(|a| a / n).collect())
}

#[derive(Clone, Debug)]
pub struct AnsatzState {
    pub alpha: f64,
    pub state: QuantumState,
}

/// The trial state on the real-space basis of [`build_hamiltonian_with`].
pub fn build_lf_state(params: &ModelParams, alpha: f64) -> Result<AnsatzState> {
    let basis = FockBasis::new(params.sites, params.n_max, params.truncation, DEFAULT_DIMENSION_CAP)?;
    build_lf_state_on(&basis, alpha)
}

pub fn build_lf_state_on(basis: &FockBasis, alpha: f64) -> Result<AnsatzState> {
    let sites = basis.sites();
    let coherent = coherent_amplitudes(alpha, basis.phonons().cutoff())?;
    let mut amps = vec![0.0; basis.len()];
    let weight = 1.0 / (sites as f64).sqrt();
    for site in 0..sites {
        for (nu, &c) in coherent.iter().enumerate() {
            let mut occupations = vec![0u8; sites];
            occupations[site] = nu as u8;
            let idx = basis
                .index_of(&FockState {
                    electron_site: site,
                    occupations,
                })
                .expect("single-site excitation lies in the basis");
            amps[idx] = weight * c;
        }
    }
    Ok(AnsatzState {
        alpha,
        state: QuantumState::from_real(&amps)?,
    })
}

/// The trial state in the zero-momentum sector of [`build_momentum_zero_hamiltonian`].
pub fn build_lf_state_momentum_zero(basis: &PhononBasis, alpha: f64) -> Result<AnsatzState> {
    let coherent = coherent_amplitudes(alpha, basis.cutoff())?;
    let mut amps = vec![0.0; basis.len()];
    let mut config = vec![0u8; basis.sites()];
    for (nu, &c) in coherent.iter().enumerate() {
        config[0] = nu as u8;
        amps[basis.rank(&config).expect("on-site excitation lies in the basis")] = c;
    }
    Ok(AnsatzState {
        alpha,
        state: QuantumState::from_real(&amps)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffPolicy {
    Fixed(usize),
    /// [`default_n_max`] but never below the given floor.
    Heuristic { min: usize },
}

impl CutoffPolicy {
    pub fn resolve(&self, g: f64, omega0: f64) -> usize {
        match *self {
            CutoffPolicy::Fixed(n) => n,
            CutoffPolicy::Heuristic { min } => default_n_max(g, omega0).max(min),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    /// Zero-momentum sector on rings, full real space on open chains.
    Auto,
    RealSpace,
    MomentumZero,
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub cutoff: CutoffPolicy,
    pub truncation: Truncation,
    pub sector: Sector,
    pub lanczos: LanczosOptions,
    pub dimension_cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            cutoff: CutoffPolicy::Heuristic { min: 12 },
            truncation: Truncation::TotalPhonons,
            sector: Sector::Auto,
            lanczos: LanczosOptions::default(),
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OverlapResult {
    pub lambda: f64,
    pub mode: AlphaChoice,
    pub alpha_used: f64,
    pub omega_gs: f64,
    pub ground_energy: f64,
    pub params: ModelParams,
}

impl OverlapResult {
    /// `|<GS|psi>|`, the square root of `omega_gs`.
    pub fn amplitude(&self) -> f64 {
        self.omega_gs.sqrt()
    }
}

/// Ground state of `params` together with a constructor for trial states on the same basis.
pub struct SolvedModel {
    pub params: ModelParams,
    pub energy: f64,
    ground: QuantumState,
    basis: SolvedBasis,
}

enum SolvedBasis {
    RealSpace(FockBasis),
    MomentumZero(PhononBasis),
}

impl SolvedModel {
    pub fn solve(params: &ModelParams, opts: &SweepOptions) -> Result<Self> {
        let sector = match opts.sector {
            Sector::Auto if params.boundary == Boundary::Periodic => Sector::MomentumZero,
            Sector::Auto => Sector::RealSpace,
            s => s,
        };
        let (h, basis) = match sector {
            Sector::MomentumZero => {
                let (h, b) = build_momentum_zero_hamiltonian(params, opts.dimension_cap)?;
                (h, SolvedBasis::MomentumZero(b))
            }
            _ => {
                let (h, b) = build_hamiltonian_with(params, opts.dimension_cap)?;
                (h, SolvedBasis::RealSpace(b))
            }
        };
        let gs = ground_state_with(&h, &opts.lanczos)?;
        Ok(Self {
            params: params.clone(),
            energy: gs.energy,
            ground: gs.state(),
            basis,
        })
    }

    pub fn ground_state(&self) -> &QuantumState {
        &self.ground
    }

    pub fn trial_state(&self, alpha: f64) -> Result<AnsatzState> {
        match &self.basis {
            SolvedBasis::RealSpace(b) => build_lf_state_on(b, alpha),
            SolvedBasis::MomentumZero(b) => build_lf_state_momentum_zero(b, alpha),
        }
    }

    pub fn overlap_with(&self, alpha: f64) -> Result<f64> {
        overlap(&self.ground, &self.trial_state(alpha)?.state)
    }
}

/// Overlaps for every `(lambda, mode)` pair, in grid order with modes innermost.
pub fn overlap_sweep(
    base: &ModelParams,
    lambda_grid: &[f64],
    modes: &[AlphaChoice],
    opts: &SweepOptions,
) -> Result<Vec<OverlapResult>> {
    if base.t <= 0.0 {
        return Err(Error::InvalidParams("an overlap sweep over lambda needs t > 0".into()));
    }
    let mut out = Vec::with_capacity(lambda_grid.len() * modes.len());
    for &lambda in lambda_grid {
        let attach = |e: Error| Error::AtLambda {
            lambda,
            source: Box::new(e),
        };
        let g = (2.0 * base.t * base.omega0 * lambda).sqrt();
        let n_max = opts.cutoff.resolve(g, base.omega0);
        let params = ModelParams {
            g,
            n_max,
            truncation: opts.truncation,
            ..base.clone()
        };
        let solved = SolvedModel::solve(&params, opts).map_err(attach)?;
        for mode in modes {
            let alpha = mode.resolve(&params).map_err(attach)?;
            let omega_gs = solved.overlap_with(alpha).map_err(attach)?;
            out.push(OverlapResult {
                lambda,
                mode: *mode,
                alpha_used: alpha,
                omega_gs,
                ground_energy: solved.energy,
                params: params.clone(),
            });
        }
    }
    Ok(out)
}
