//! Gate tallies, T-counts and the warm-start cost ratio.
//!
//! Counting never looks at rotation angles. A rotation with `k >= 1` controls
//! is expanded as `A X B X C` with `ABC = I`: three single-qubit rotations and
//! two `k`-controlled NOTs. Every negative control costs two extra X gates.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::ansatz::{overlap_sweep, AlphaChoice, SweepOptions};
use crate::circuit::{controlled_fragment, displacement_fragment, Circuit, GateKind, GridSpec, RegisterLayout};
use crate::lattice::ModelParams;
use crate::qet::prepare_vacuum_u0;
use crate::{Error, Result};

/// Gaussian width used for the vacuum loader in resource counts.
pub const VACUUM_WIDTH: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McxScheme {
    /// `2k - 3` Toffolis with `k - 2` clean ancillas.
    LinearClean,
    /// `4(k - 2)` Toffolis with borrowed ancillas.
    LinearDirty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionPolicy {
    #[serde(default = "default_policy_name")]
    pub name: String,
    pub t_per_rz: u64,
    pub toffoli_as_t: u64,
    pub mcx_scheme: McxScheme,
}

fn default_policy_name() -> String {
    "custom".into()
}

impl Default for DecompositionPolicy {
    fn default() -> Self {
        Self {
            name: "default".into(),
            t_per_rz: 30,
            toffoli_as_t: 0,
            mcx_scheme: McxScheme::LinearClean,
        }
    }
}

impl DecompositionPolicy {
    /// Default budgets with every Toffoli folded into 7 T gates.
    pub fn folded() -> Self {
        Self {
            name: "folded".into(),
            toffoli_as_t: 7,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("policy: {e}")))
    }

    /// Toffolis needed for a NOT with `k` controls.
    pub fn mcx_toffoli(&self, k: usize) -> u64 {
        let k = k as u64;
        match (k, self.mcx_scheme) {
            (0 | 1, _) => 0,
            (2, _) => 1,
            (_, McxScheme::LinearClean) => 2 * k - 3,
            (_, McxScheme::LinearDirty) => 4 * (k - 2),
        }
    }
}

/// Gate counts by category. Toffolis are two-control NOTs; `mcx_by_k` holds
/// NOTs with three or more controls keyed by their control count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateTally {
    pub clifford_1q: u64,
    pub clifford_2q: u64,
    pub rz: u64,
    pub ry: u64,
    pub toffoli: u64,
    pub mcx_by_k: BTreeMap<usize, u64>,
}

impl GateTally {
    pub fn t_count(&self, policy: &DecompositionPolicy) -> u64 {
        let mcx: u64 = self.mcx_by_k.iter().map(|(&k, &n)| n * policy.mcx_toffoli(k)).sum();
        (self.rz + self.ry) * policy.t_per_rz + (mcx + self.toffoli) * policy.toffoli_as_t
    }

    pub fn rotations(&self) -> u64 {
        self.rz + self.ry
    }

    pub fn scaled(&self, factor: u64) -> Self {
        Self {
            clifford_1q: self.clifford_1q * factor,
            clifford_2q: self.clifford_2q * factor,
            rz: self.rz * factor,
            ry: self.ry * factor,
            toffoli: self.toffoli * factor,
            mcx_by_k: self.mcx_by_k.iter().map(|(&k, &n)| (k, n * factor)).collect(),
        }
    }

    fn not_gates(&mut self, controls: usize, count: u64) {
        match controls {
            0 => self.clifford_1q += count,
            1 => self.clifford_2q += count,
            2 => self.toffoli += count,
            k => *self.mcx_by_k.entry(k).or_insert(0) += count,
        }
    }
}

impl AddAssign<&GateTally> for GateTally {
    fn add_assign(&mut self, rhs: &GateTally) {
        self.clifford_1q += rhs.clifford_1q;
        self.clifford_2q += rhs.clifford_2q;
        self.rz += rhs.rz;
        self.ry += rhs.ry;
        self.toffoli += rhs.toffoli;
        for (&k, &n) in &rhs.mcx_by_k {
            *self.mcx_by_k.entry(k).or_insert(0) += n;
        }
    }
}

impl Add for GateTally {
    type Output = GateTally;

    fn add(mut self, rhs: GateTally) -> GateTally {
        self += &rhs;
        self
    }
}

/// Classifies every gate of `circuit`. The tally is policy-free; apply a
/// policy with [`GateTally::t_count`].
pub fn tally(circuit: &Circuit) -> GateTally {
    let mut t = GateTally::default();
    for gate in circuit.gates() {
        let k = gate.controls.len();
        let negative = gate.controls.iter().filter(|c| !c.positive).count() as u64;
        t.clifford_1q += 2 * negative;
        match gate.kind {
            GateKind::X => t.not_gates(k, 1),
            GateKind::Z => match k {
                0 => t.clifford_1q += 1,
                1 => t.clifford_2q += 1,
                _ => {
                    t.clifford_1q += 2;
                    t.not_gates(k, 1);
                }
            },
            GateKind::H if k == 0 => t.clifford_1q += 1,
            GateKind::Ry(_) if k == 0 => t.ry += 1,
            GateKind::Rz(_) | GateKind::Phase(_) if k == 0 => t.rz += 1,
            GateKind::H | GateKind::Ry(_) => {
                t.ry += 3;
                t.not_gates(k, 2);
            }
            GateKind::Rz(_) | GateKind::Phase(_) => {
                t.rz += 3;
                t.not_gates(k, 2);
            }
        }
    }
    t
}

/// Tallies of the two building blocks of the preparation circuits for one
/// lattice size. Both are angle independent.
#[derive(Clone, Debug, Serialize)]
pub struct PreparationCost {
    pub sites: usize,
    pub m: usize,
    pub degree: usize,
    /// Vacuum loader acting on one phonon register (with its ancillas).
    pub vacuum_loader: GateTally,
    /// Displacement of one phonon register conditioned on the electron site.
    pub controlled_displacement: GateTally,
    /// Hadamards spreading the electron over the lattice.
    pub electron: GateTally,
}

impl PreparationCost {
    pub fn new(sites: usize, m: usize, degree: usize) -> Result<Self> {
        let layout = RegisterLayout::new(sites, m)?;
        let (u0, _) = prepare_vacuum_u0(m, VACUUM_WIDTH, degree)?;
        let total = layout.total_qubits();
        let register: Vec<usize> = layout.phonon_register(0).collect();
        let electrons: Vec<usize> = layout.electron_register().collect();
        let grid = GridSpec::new(m, VACUUM_WIDTH, 1.0)?;
        let shift = displacement_fragment(&grid, 1.0)?.remap(&register, total)?;
        let displacement = tally(&controlled_fragment(&shift, &electrons, 0)?);
        let mut spread = Circuit::new(total);
        for &q in &electrons {
            spread.h(q)?;
        }
        Ok(Self {
            sites,
            m,
            degree,
            vacuum_loader: tally(&u0),
            controlled_displacement: displacement,
            electron: tally(&spread),
        })
    }

    pub fn vacuum_tally(&self) -> GateTally {
        self.electron.clone() + self.vacuum_loader.scaled(self.sites as u64)
    }

    pub fn lf_tally(&self) -> GateTally {
        self.vacuum_tally() + self.controlled_displacement.scaled(self.sites as u64)
    }

    pub fn t_vacuum(&self, policy: &DecompositionPolicy) -> u64 {
        self.vacuum_tally().t_count(policy)
    }

    pub fn t_lf(&self, policy: &DecompositionPolicy) -> u64 {
        self.lf_tally().t_count(policy)
    }
}

pub fn tcount_vacuum(sites: usize, m: usize, degree: usize, policy: &DecompositionPolicy) -> Result<u64> {
    Ok(PreparationCost::new(sites, m, degree)?.t_vacuum(policy))
}

pub fn tcount_lf(sites: usize, m: usize, degree: usize, policy: &DecompositionPolicy) -> Result<u64> {
    Ok(PreparationCost::new(sites, m, degree)?.t_lf(policy))
}

/// One row of a T-count table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TcountRow {
    #[serde(rename = "N")]
    pub sites: usize,
    pub m: usize,
    pub d: usize,
    pub policy_id: String,
    pub t_vacuum: u64,
    pub t_lf: u64,
}

pub fn tcount_table(sites: &[usize], m: usize, degree: usize, policy: &DecompositionPolicy) -> Result<Vec<TcountRow>> {
    sites
        .iter()
        .map(|&n| {
            let cost = PreparationCost::new(n, m, degree)?;
            Ok(TcountRow {
                sites: n,
                m,
                d: degree,
                policy_id: policy.name.clone(),
                t_vacuum: cost.t_vacuum(policy),
                t_lf: cost.t_lf(policy),
            })
        })
        .collect()
}

/// How a ground-state overlap enters the repetition count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapMeasure {
    /// `|<GS|psi>|^2`, the success probability of projective QPE.
    #[default]
    Probability,
    /// `|<GS|psi>|`.
    Amplitude,
}

impl OverlapMeasure {
    pub fn apply(&self, omega_gs: f64) -> f64 {
        match self {
            OverlapMeasure::Probability => omega_gs,
            OverlapMeasure::Amplitude => omega_gs.sqrt(),
        }
    }
}

/// Relative cost of the Lang-Firsov warm start against the vacuum start.
/// `omega_lf` and `omega_vac` are stored after applying `measure`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostRatioPoint {
    pub lambda: f64,
    pub alpha: f64,
    pub measure: OverlapMeasure,
    pub omega_lf: f64,
    pub omega_vac: f64,
    pub t_lf: u64,
    pub t_vac: u64,
    pub ratio: f64,
}

impl CostRatioPoint {
    pub fn new(
        lambda: f64,
        alpha: f64,
        measure: OverlapMeasure,
        omega_lf: f64,
        omega_vac: f64,
        t_lf: u64,
        t_vac: u64,
    ) -> Result<Self> {
        if !(omega_lf > 0.0 && omega_vac > 0.0) || t_vac == 0 {
            return Err(Error::ZeroOverlap { lambda });
        }
        let mut p = Self {
            lambda,
            alpha,
            measure,
            omega_lf,
            omega_vac,
            t_lf,
            t_vac,
            ratio: 0.0,
        };
        p.ratio = p.recomputed_ratio();
        Ok(p)
    }

    pub fn recomputed_ratio(&self) -> f64 {
        (self.t_lf as f64 / self.omega_lf) / (self.t_vac as f64 / self.omega_vac)
    }
}

/// A ratio sweep; points whose overlap vanished are listed in `excluded`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RatioSweep {
    pub points: Vec<CostRatioPoint>,
    pub excluded: Vec<(f64, String)>,
}

/// Cost ratios along `lambda_grid` using the variational displacement for the
/// warm start and `alpha = 0` for the reference.
pub fn cost_ratio_sweep(
    base: &ModelParams,
    lambda_grid: &[f64],
    cost: &PreparationCost,
    policy: &DecompositionPolicy,
    measure: OverlapMeasure,
    opts: &SweepOptions,
) -> Result<RatioSweep> {
    if cost.sites != base.sites {
        return Err(Error::Layout(format!(
            "costs were tallied for {} sites but the model has {}",
            cost.sites, base.sites
        )));
    }
    let overlaps = overlap_sweep(base, lambda_grid, &[AlphaChoice::Variational, AlphaChoice::Zero], opts)?;
    let (t_lf, t_vac) = (cost.t_lf(policy), cost.t_vacuum(policy));
    let mut sweep = RatioSweep::default();
    for pair in overlaps.chunks(2) {
        let (lf, vac) = (&pair[0], &pair[1]);
        match CostRatioPoint::new(
            lf.lambda,
            lf.alpha_used,
            measure,
            measure.apply(lf.omega_gs),
            measure.apply(vac.omega_gs),
            t_lf,
            t_vac,
        ) {
            Ok(p) => sweep.points.push(p),
            Err(e) => sweep.excluded.push((lf.lambda, e.to_string())),
        }
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Control, Gate};

    #[test]
    fn mcx_rules() {
        let clean = DecompositionPolicy::default();
        let dirty = DecompositionPolicy {
            mcx_scheme: McxScheme::LinearDirty,
            ..clean.clone()
        };
        for p in [&clean, &dirty] {
            assert_eq!(p.mcx_toffoli(0), 0);
            assert_eq!(p.mcx_toffoli(1), 0);
            assert_eq!(p.mcx_toffoli(2), 1);
        }
        assert_eq!(clean.mcx_toffoli(5), 7);
        assert_eq!(dirty.mcx_toffoli(5), 12);
    }

    #[test]
    fn negative_controls_cost_cliffords() {
        let mut c = Circuit::new(3);
        c.push(Gate::controlled(GateKind::Rz(0.3), 2, vec![Control::neg(0), Control::pos(1)]))
            .unwrap();
        let t = tally(&c);
        assert_eq!(t.clifford_1q, 2);
        assert_eq!(t.rz, 3);
        assert_eq!(t.toffoli, 2);
    }

    #[test]
    fn policy_json() {
        let p = DecompositionPolicy::from_json(r#"{"t_per_rz":40,"toffoli_as_t":7,"mcx_scheme":"linear_dirty"}"#).unwrap();
        assert_eq!(p.name, "custom");
        assert_eq!(p.mcx_scheme, McxScheme::LinearDirty);
        assert!(DecompositionPolicy::from_json(r#"{"t_per_rz":-1,"toffoli_as_t":0,"mcx_scheme":"linear_clean"}"#).is_err());
        assert!(DecompositionPolicy::from_json(r#"{"t_per_rz":1,"toffoli_as_t":0,"mcx_scheme":"ladder"}"#).is_err());
        let back: DecompositionPolicy = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
