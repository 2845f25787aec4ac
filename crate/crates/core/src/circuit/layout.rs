use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Electron register on the lowest `k_E` qubits, then one `m`-qubit phonon
/// register per site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub sites: usize,
    pub m: usize,
}

impl RegisterLayout {
    pub fn new(sites: usize, m: usize) -> Result<Self> {
        if sites == 0 || !sites.is_power_of_two() {
            return Err(Error::InvalidParams(format!("site count {sites} is not a power of two")));
        }
        if m == 0 {
            return Err(Error::InvalidParams("phonon registers need at least one qubit".into()));
        }
        Ok(Self { sites, m })
    }

    pub fn electron_qubits(&self) -> usize {
        self.sites.trailing_zeros() as usize
    }

    pub fn electron_register(&self) -> Range<usize> {
        0..self.electron_qubits()
    }

    pub fn phonon_register(&self, site: usize) -> Range<usize> {
        let start = self.electron_qubits() + site * self.m;
        start..start + self.m
    }

    pub fn total_qubits(&self) -> usize {
        self.electron_qubits() + self.sites * self.m
    }
}

/// Position grid `x_j = -W + j dx` on `2^m` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub m: usize,
    pub w: f64,
    pub sigma: f64,
}

impl GridSpec {
    pub fn new(m: usize, w: f64, sigma: f64) -> Result<Self> {
        if m == 0 || m > 30 {
            return Err(Error::InvalidParams(format!("grid qubits m = {m} outside 1..=30")));
        }
        if !(w > 0.0 && w.is_finite()) || !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParams(format!("grid needs W > 0 and sigma > 0, got {w}, {sigma}")));
        }
        Ok(Self { m, w, sigma })
    }

    /// `m = 6`, `sigma = 1` and a window wide enough for a packet displaced by `alpha`.
    pub fn for_alpha(alpha: f64) -> Self {
        Self {
            m: 6,
            w: Self::default_width(alpha, 1.0),
            sigma: 1.0,
        }
    }

    pub fn default_width(alpha: f64, sigma: f64) -> f64 {
        f64::max(6.0, std::f64::consts::SQRT_2 * alpha.abs() * sigma + 6.0 * sigma)
    }

    pub fn points(&self) -> usize {
        1 << self.m
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.w / self.points() as f64
    }

    pub fn dp(&self) -> f64 {
        std::f64::consts::PI / self.w
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.w + j as f64 * self.dx()
    }

    pub fn p(&self, k: usize) -> f64 {
        (k as f64 - (self.points() / 2) as f64) * self.dp()
    }

    /// Position shift of the coherent displacement by `alpha`.
    pub fn shift(&self, alpha: f64) -> f64 {
        std::f64::consts::SQRT_2 * alpha * self.sigma
    }
}

/// Normalised samples of `exp(-(x - centre)^2 / (2 sigma^2))` on the grid.
pub fn grid_gaussian(grid: &GridSpec, centre: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..grid.points())
        .map(|j| {
            let z = (grid.x(j) - centre) / grid.sigma;
            (-0.5 * z * z).exp()
        })
        .collect();
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_counts() {
        let l = RegisterLayout::new(4, 6).unwrap();
        assert_eq!(l.total_qubits(), 26);
        assert_eq!(l.phonon_register(3), 20..26);
        assert_eq!(RegisterLayout::new(1, 3).unwrap().total_qubits(), 3);
        assert!(RegisterLayout::new(3, 3).is_err());
    }

    #[test]
    fn grid_reciprocity() {
        let g = GridSpec::new(6, 7.5, 1.0).unwrap();
        let prod = g.dx() * g.dp() * g.points() as f64;
        assert!((prod - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(g.x(0), -7.5);
        assert!((g.x(63) + g.dx() - 7.5).abs() < 1e-12);
        assert_eq!(GridSpec::for_alpha(0.0).w, 6.0);
        assert!(GridSpec::new(6, -1.0, 1.0).is_err());
    }
}
