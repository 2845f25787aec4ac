use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use warmstart::ansatz::{overlap_sweep, CutoffPolicy, SweepOptions};
use warmstart::circuit::{
    build_lf_circuit, fidelity_grid_lf, gaussian_loader, grid_gaussian, simulate, GridSpec, RegisterLayout,
    DEFAULT_SIMULATION_QUBITS,
};
use warmstart::lattice::ModelParams;
use warmstart::qet::prepare_vacuum;
use warmstart::resources::{cost_ratio_sweep, tcount_table, PreparationCost};
use warmstart::QuantumState;

use crate::settings::{Format, Settings};
use crate::Failure;

const OVERLAP_GRID: [f64; 9] = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];
const RATIO_GRID: [f64; 10] = [0.0, 0.05, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];
const TCOUNT_SITES: [usize; 5] = [64, 128, 256, 512, 1024];

fn base_params(s: &Settings, sites: usize) -> Result<ModelParams, Failure> {
    Ok(ModelParams::new(s.t()?, s.omega0()?, 0.0, sites, 1)?
        .with_boundary(s.boundary())
        .with_truncation(s.truncation()))
}

fn sweep_options(s: &Settings) -> Result<SweepOptions, Failure> {
    let cutoff = match s.nmax {
        Some(0) => return Err(Failure::Config("nmax must be at least 1".into())),
        Some(n) => CutoffPolicy::Fixed(n),
        None => CutoffPolicy::Heuristic { min: 12 },
    };
    Ok(SweepOptions {
        cutoff,
        truncation: s.truncation(),
        ..SweepOptions::default()
    })
}

#[derive(Serialize)]
struct OverlapRow {
    #[serde(rename = "N")]
    sites: usize,
    lambda: f64,
    mode: &'static str,
    alpha: f64,
    omega_gs: f64,
    e_gs: f64,
    nmax: usize,
}

/// Writes rows for every completed point even when a later point fails.
pub fn overlap(s: &Settings) -> Result<(), Failure> {
    let sites = s.sites(&[8])?;
    let lambdas = s.lambdas(&OVERLAP_GRID)?;
    let modes = s.modes()?;
    let opts = sweep_options(s)?;
    let bases = sites.iter().map(|&n| base_params(s, n)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    let mut failure = None;
    'outer: for base in &bases {
        for &lambda in &lambdas {
            match overlap_sweep(base, &[lambda], &modes, &opts) {
                Ok(results) => rows.extend(results.into_iter().map(|r| OverlapRow {
                    sites: base.sites,
                    lambda,
                    mode: r.mode.label(),
                    alpha: r.alpha_used,
                    omega_gs: r.omega_gs,
                    e_gs: r.ground_energy,
                    nmax: r.params.n_max,
                })),
                Err(e) => {
                    failure = Some(Failure::from(e));
                    break 'outer;
                }
            }
        }
    }
    emit(s, &rows)?;
    failure.map_or(Ok(()), Err)
}

#[derive(Serialize)]
struct VerifyRow {
    #[serde(rename = "N")]
    sites: usize,
    m: usize,
    #[serde(rename = "W")]
    width: f64,
    alpha: f64,
    q_total: usize,
    fidelity: f64,
    u0_vacuum_fidelity: f64,
    u0_success_amplitude: f64,
    p_succ: f64,
    rounds: usize,
}

struct VacuumCheck {
    fidelity: f64,
    success_amplitude: f64,
    p_succ: f64,
    rounds: usize,
}

/// Simulates the QET vacuum loader on its own `m + 3` qubits.
fn check_vacuum(grid: &GridSpec, degree: usize) -> Result<VacuumCheck, Failure> {
    let prep = prepare_vacuum(grid.m, grid.w, degree)?;
    let out = simulate(&prep.circuit, &QuantumState::zero_qubits(grid.m + 3))?;
    let good = &out.amplitudes()[..grid.points()];
    let prob: f64 = good.iter().map(|a| a.norm_sqr()).sum();
    let vacuum = grid_gaussian(grid, 0.0);
    let overlap: Complex64 = good.iter().zip(&vacuum).map(|(a, v)| a.conj() * v).sum();
    Ok(VacuumCheck {
        fidelity: overlap.norm_sqr() / prob,
        success_amplitude: prob.sqrt(),
        p_succ: prep.plan.p_succ,
        rounds: prep.schedule.rounds,
    })
}

pub fn circuit_verify(s: &Settings) -> Result<(), Failure> {
    let sites = s.sites(&[2])?;
    let alphas = s.alphas()?;
    let m = s.m(6)?;
    let width = s.width()?;
    let degree = s.degree()?;
    let t = s.t()?;
    let omega0 = s.omega0()?;
    for &n in &sites {
        let required = RegisterLayout::new(n, m)?.total_qubits();
        if required > DEFAULT_SIMULATION_QUBITS {
            return Err(Failure::Config(format!(
                "N={n}, m={m} needs {required} qubits, above the simulation cap of {DEFAULT_SIMULATION_QUBITS}"
            )));
        }
    }
    let mut rows = Vec::new();
    for &alpha in &alphas {
        let w = width.unwrap_or_else(|| GridSpec::default_width(alpha, 1.0));
        let grid = GridSpec::new(m, w, 1.0)?;
        let vacuum = check_vacuum(&grid, degree)?;
        let u0 = gaussian_loader(&grid, 0.0)?;
        for &n in &sites {
            let params = ModelParams::new(t, omega0, 0.0, n, 1)?;
            let circuit = build_lf_circuit(&params, alpha, &grid, &u0)?;
            let state = simulate(&circuit, &QuantumState::zero_qubits(circuit.num_qubits()))?;
            rows.push(VerifyRow {
                sites: n,
                m,
                width: w,
                alpha,
                q_total: circuit.num_qubits(),
                fidelity: fidelity_grid_lf(&state, &params, alpha, &grid)?,
                u0_vacuum_fidelity: vacuum.fidelity,
                u0_success_amplitude: vacuum.success_amplitude,
                p_succ: vacuum.p_succ,
                rounds: vacuum.rounds,
            });
        }
    }
    emit(s, &rows)
}

pub fn tcount(s: &Settings) -> Result<(), Failure> {
    let sites = s.sites(&TCOUNT_SITES)?;
    let rows = tcount_table(&sites, s.m(6)?, s.degree()?, &s.policy()?)?;
    emit(s, &rows)
}

#[derive(Serialize)]
struct RatioRow {
    #[serde(rename = "N")]
    sites: usize,
    m: usize,
    lambda: f64,
    alpha: f64,
    omega_lf: f64,
    omega_vac: f64,
    t_lf: u64,
    t_vac: u64,
    ratio: f64,
}

pub fn ratio(s: &Settings) -> Result<(), Failure> {
    let sites = s.sites(&[8])?;
    let lambdas = s.lambdas(&RATIO_GRID)?;
    let m = s.m(6)?;
    let degree = s.degree()?;
    let policy = s.policy()?;
    let opts = sweep_options(s)?;
    let bases = sites.iter().map(|&n| base_params(s, n)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for base in &bases {
        let cost = PreparationCost::new(base.sites, m, degree)?;
        let sweep = cost_ratio_sweep(base, &lambdas, &cost, &policy, s.measure(), &opts)?;
        for (lambda, why) in &sweep.excluded {
            eprintln!("warning: N={} lambda={lambda} excluded: {why}", base.sites);
        }
        rows.extend(sweep.points.into_iter().map(|p| RatioRow {
            sites: base.sites,
            m,
            lambda: p.lambda,
            alpha: p.alpha,
            omega_lf: p.omega_lf,
            omega_vac: p.omega_vac,
            t_lf: p.t_lf,
            t_vac: p.t_vac,
            ratio: p.ratio,
        }));
    }
    emit(s, &rows)
}

fn emit<T: Serialize>(s: &Settings, rows: &[T]) -> Result<(), Failure> {
    let sink: Box<dyn Write> = match &s.out {
        Some(path) => Box::new(
            std::fs::File::create(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    };
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    match s.format() {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            for row in rows {
                w.serialize(row).map_err(|e| Failure::Io(e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
        Format::Json => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, rows).map_err(|e| Failure::Io(e.to_string()))?;
            writeln!(sink).map_err(io)?;
            sink.flush().map_err(io)?;
        }
    }
    Ok(())
}
