//! Symmetric QSP phase factors.
//!
//! | convention      | product for `<0|U|0>`                                     | signal                            |
//! |-----------------|-----------------------------------------------------------|-----------------------------------|
//! | `symmetric-phi` | `e^{i phi_0 Z} prod_j W(x) e^{i phi_j Z}`, `Re <0|U|0> = p` | `W = [[x, i s], [i s, x]]`        |
//! | `varphi`        | same with `R(x)` in place of `W(x)`                        | `R = [[x, s], [s, -x]]`           |
//!
//! with `s = sqrt(1 - x^2)`. The maps are `varphi_0 = phi_0 + pi/4`,
//! `varphi_j = phi_j + pi/2`, `varphi_d = phi_d + pi/4`; for `d = 0` the
//! single angle is unchanged. Under this map `P_R = i^d P_W`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::{linspace, ChebyshevPolynomial, Parity};
use crate::{Error, Result};

/// Sample count of the reconstruction check.
pub const RECONSTRUCTION_GRID_POINTS: usize = 501;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseConvention {
    SymmetricPhi,
    Varphi,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PhaseRecord")]
pub struct PhaseFactorSet {
    pub degree: usize,
    pub convention: PhaseConvention,
    pub angles: Vec<f64>,
}

#[derive(Deserialize)]
struct PhaseRecord {
    degree: usize,
    convention: PhaseConvention,
    angles: Vec<f64>,
}

impl TryFrom<PhaseRecord> for PhaseFactorSet {
    type Error = Error;

    fn try_from(r: PhaseRecord) -> Result<Self> {
        let set = PhaseFactorSet::new(r.convention, r.angles)?;
        if set.degree != r.degree {
            return Err(Error::InvalidParams(format!(
                "degree {} does not match {} angles",
                r.degree,
                set.angles.len()
            )));
        }
        Ok(set)
    }
}

type Mat2 = [[Complex64; 2]; 2];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn z_phase(phi: f64) -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    [[Complex64::from_polar(1.0, phi), zero], [zero, Complex64::from_polar(1.0, -phi)]]
}

fn identity() -> Mat2 {
    z_phase(0.0)
}

fn signal(convention: PhaseConvention, x: f64) -> Mat2 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match convention {
        PhaseConvention::SymmetricPhi => [[c(x, 0.0), c(0.0, s)], [c(0.0, s), c(x, 0.0)]],
        PhaseConvention::Varphi => [[c(x, 0.0), c(s, 0.0)], [c(s, 0.0), c(-x, 0.0)]],
    }
}

impl PhaseFactorSet {
    pub fn new(convention: PhaseConvention, angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() || angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParams("phase set needs finite angles".into()));
        }
        Ok(Self {
            degree: angles.len() - 1,
            convention,
            angles,
        })
    }

    pub fn symmetric(angles: Vec<f64>) -> Result<Self> {
        Self::new(PhaseConvention::SymmetricPhi, angles)
    }

    fn offsets(&self) -> impl Iterator<Item = f64> + '_ {
        let d = self.degree;
        (0..=d).map(move |j| match j {
            _ if d == 0 => 0.0,
            0 => FRAC_PI_4,
            j if j == d => FRAC_PI_4,
            _ => FRAC_PI_2,
        })
    }

    pub fn to_varphi(&self) -> Self {
        match self.convention {
            PhaseConvention::Varphi => self.clone(),
            PhaseConvention::SymmetricPhi => Self {
                degree: self.degree,
                convention: PhaseConvention::Varphi,
                angles: self.angles.iter().zip(self.offsets()).map(|(a, o)| a + o).collect(),
            },
        }
    }

    pub fn to_symmetric(&self) -> Self {
        match self.convention {
            PhaseConvention::SymmetricPhi => self.clone(),
            PhaseConvention::Varphi => Self {
                degree: self.degree,
                convention: PhaseConvention::SymmetricPhi,
                angles: self.angles.iter().zip(self.offsets()).map(|(a, o)| a - o).collect(),
            },
        }
    }

    /// Largest `|phi_j - phi_{d-j}|` of the symmetric-phi form.
    pub fn symmetry_defect(&self) -> f64 {
        let s = self.to_symmetric();
        let a = &s.angles;
        (0..a.len()).map(|j| (a[j] - a[a.len() - 1 - j]).abs()).fold(0.0, f64::max)
    }

    /// `<0|U(x)|0>` in this set's own convention.
    pub fn reconstruct(&self, x: f64) -> Complex64 {
        let w = signal(self.convention, x);
        let mut u = z_phase(self.angles[0]);
        for &phi in &self.angles[1..] {
            u = mul(&mul(&u, &w), &z_phase(phi));
        }
        u[0][0]
    }

    /// The real polynomial the set encodes, `Re P_W(x)`.
    pub fn real_polynomial(&self, x: f64) -> f64 {
        match self.convention {
            PhaseConvention::SymmetricPhi => self.reconstruct(x).re,
            PhaseConvention::Varphi => (self.reconstruct(x) * Complex64::i().powi(-(self.degree as i32))).re,
        }
    }

    /// `max |Re P_W(x) - p(x)|` on the reconstruction grid.
    pub fn reconstruction_error(&self, p: &ChebyshevPolynomial) -> f64 {
        linspace(RECONSTRUCTION_GRID_POINTS)
            .map(|x| (self.real_polynomial(x) - p.eval(x)).abs())
            .fold(0.0, f64::max)
    }
}

/// The `-Phi` set: `varphi_j + pi` for `j < d`, `varphi_d` unchanged.
pub fn conjugate_phases(set: &PhaseFactorSet) -> PhaseFactorSet {
    let mut v = set.to_varphi();
    let d = v.degree;
    for a in &mut v.angles[..d] {
        *a += std::f64::consts::PI;
    }
    v
}

fn expand(reduced: &[f64], degree: usize) -> Vec<f64> {
    (0..=degree).map(|j| reduced[j.min(degree - j)]).collect()
}

/// `Re <0|U|0>` and its gradient with respect to every full-set angle.
fn value_and_gradient(phis: &[f64], x: f64) -> (f64, Vec<f64>) {
    let w = signal(PhaseConvention::SymmetricPhi, x);
    let d = phis.len() - 1;
    let mut prefix = Vec::with_capacity(d + 1);
    let mut acc = identity();
    for (j, &phi) in phis.iter().enumerate() {
        prefix.push(acc);
        acc = mul(&acc, &z_phase(phi));
        if j < d {
            acc = mul(&acc, &w);
        }
    }
    let value = acc[0][0].re;
    let mut suffix = vec![identity(); d + 1];
    let mut acc = identity();
    for j in (0..=d).rev() {
        suffix[j] = acc;
        acc = mul(&z_phase(phis[j]), &acc);
        if j > 0 {
            acc = mul(&w, &acc);
        }
    }
    let iz = [
        [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
    ];
    let grad = (0..=d)
        .map(|j| {
            let m = mul(&mul(&prefix[j], &mul(&iz, &z_phase(phis[j]))), &suffix[j]);
            m[0][0].re
        })
        .collect();
    (value, grad)
}

/// Damped Newton solve for symmetric phases with `Re P_W = p`.
///
/// The free parameters are `phi_0 .. phi_{floor(d/2)}`, fitted at the
/// positive Chebyshev nodes `cos((2j - 1) pi / (4 d~))`, `d~ = ceil((d+1)/2)`.
/// The result is accepted only if the reconstruction error on a 501-point
/// grid is below `tol`.
pub fn solve_phase_factors(p: &ChebyshevPolynomial, tol: f64) -> Result<PhaseFactorSet> {
    let d = p.degree();
    let expected = if d % 2 == 0 { Parity::Even } else { Parity::Odd };
    if p.parity() != Some(expected) {
        return Err(Error::InvalidParams(format!(
            "degree-{d} polynomial must have {expected:?} parity"
        )));
    }
    if p.max_abs(20001) > 1.0 {
        return Err(Error::InvalidParams("polynomial exceeds 1 in magnitude on [-1, 1]".into()));
    }
    if d == 0 {
        return PhaseFactorSet::symmetric(vec![p.coeffs()[0].acos()]);
    }
    let n = d / 2 + 1;
    let nodes: Vec<f64> = (1..=n)
        .map(|j| ((2 * j - 1) as f64 * std::f64::consts::PI / (4 * n) as f64).cos())
        .collect();
    let targets: Vec<f64> = nodes.iter().map(|&x| p.eval(x)).collect();
    let residual = |reduced: &[f64]| -> (DVector<f64>, DMatrix<f64>) {
        let phis = expand(reduced, d);
        let mut r = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, n);
        for (i, &x) in nodes.iter().enumerate() {
            let (v, g) = value_and_gradient(&phis, x);
            r[i] = v - targets[i];
            for (j, gj) in g.into_iter().enumerate() {
                jac[(i, j.min(d - j))] += gj;
            }
        }
        (r, jac)
    };
    let mut reduced = vec![0.0; n];
    reduced[0] = FRAC_PI_4;
    let (mut r, mut jac) = residual(&reduced);
    let mut iterations = 0;
    const MAX_ITER: usize = 200;
    while r.amax() > 1e-15 && iterations < MAX_ITER {
        iterations += 1;
        let step = match jac.clone().lu().solve(&r) {
            Some(s) => s,
            None => break,
        };
        let norm = r.norm();
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = reduced.iter().zip(step.iter()).map(|(a, s)| a - scale * s).collect();
            let (tr, tj) = residual(&trial);
            if tr.norm() < norm {
                reduced = trial;
                r = tr;
                jac = tj;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let set = PhaseFactorSet::symmetric(expand(&reduced, d))?;
    let err = set.reconstruction_error(p);
    if err < tol {
        Ok(set)
    } else {
        Err(Error::PhaseSolver { iterations, residual: err })
    }
}
