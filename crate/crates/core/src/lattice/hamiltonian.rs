//! Sparse assembly of the Holstein Hamiltonian.

use super::basis::{FockBasis, PhononBasis};
use super::{Boundary, ModelParams};
use crate::{Error, Result};

/// Largest Hilbert-space dimension the builders accept by default.
pub const DEFAULT_DIMENSION_CAP: usize = 4_000_000;

/// Real symmetric matrix in compressed-row form. Coordinates are unique and
/// sorted within each row.
#[derive(Clone, Debug)]
pub struct SparseHamiltonian {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<f64>,
}

impl SparseHamiltonian {
    /// Assembles from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(u32, u32, f64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets
            .iter()
            .find(|&&(r, c, _)| r as usize >= dim || c as usize >= dim)
        {
            return Err(Error::InvalidParams(format!(
                "entry ({r}, {c}) outside a {dim}-dimensional matrix"
            )));
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(u32, u32)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            row_ptr[r as usize + 1] += 1;
            cols.push(c);
            values.push(v);
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            dim,
            row_ptr,
            cols,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Coordinate-format view of the stored entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k] as usize, self.values[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let span = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[span.clone()].binary_search(&(col as u32)) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    /// `out = H x`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.cols[k] as usize];
            }
            *o = acc;
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries().all(|(r, c, v)| self.get(c, r) == v)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.dim]; self.dim];
        for (r, c, v) in self.entries() {
            m[r][c] = v;
        }
        m
    }
}

/// Real-space Hamiltonian on the basis selected by `params.truncation`.
pub fn build_hamiltonian(params: &ModelParams) -> Result<SparseHamiltonian> {
    build_hamiltonian_with(params, DEFAULT_DIMENSION_CAP).map(|(h, _)| h)
}

/// Real-space Hamiltonian together with its basis, under an explicit dimension cap.
pub fn build_hamiltonian_with(params: &ModelParams, cap: usize) -> Result<(SparseHamiltonian, FockBasis)> {
    params.validate()?;
    let basis = FockBasis::new(params.sites, params.n_max, params.truncation, cap)?;
    let phonons = basis.phonons();
    let n = params.sites;
    let n_ph = phonons.len();
    let configs = phonons.configurations();
    let mut triplets = Vec::new();

    for (p, cfg) in configs.chunks(n).enumerate() {
        let occupation: usize = cfg.iter().map(|&v| v as usize).sum();
        let mut raised = cfg.to_vec();
        for site in 0..n {
            let row = site * n_ph + p;
            if occupation > 0 {
                triplets.push((row as u32, row as u32, params.omega0 * occupation as f64));
            }
            for neighbour in neighbours(site, n, params.boundary) {
                triplets.push(((neighbour * n_ph + p) as u32, row as u32, -params.t));
            }
            if params.g != 0.0 && phonons.can_add(cfg, site) {
                raised[site] += 1;
                let q = phonons.rank(&raised).expect("raised configuration is in the basis");
                raised[site] -= 1;
                let col = site * n_ph + q;
                let v = params.g * ((cfg[site] as f64) + 1.0).sqrt();
                triplets.push((row as u32, col as u32, v));
                triplets.push((col as u32, row as u32, v));
            }
        }
    }
    Ok((SparseHamiltonian::from_triplets(basis.len(), triplets)?, basis))
}

/// Hamiltonian restricted to total crystal momentum zero on a ring.
///
/// Basis states are phonon configurations measured relative to the electron:
/// `|K=0, c> = N^{-1/2} sum_j T^j |electron at 0, c>`. Hopping by `d`
/// relabels the configuration cyclically, `c'_k = c_{k+d}`; the coupling acts
/// on relative site 0 only.
pub fn build_momentum_zero_hamiltonian(
    params: &ModelParams,
    cap: usize,
) -> Result<(SparseHamiltonian, PhononBasis)> {
    params.validate()?;
    if params.boundary != Boundary::Periodic {
        return Err(Error::InvalidParams(
            "the momentum-zero sector requires periodic boundaries".into(),
        ));
    }
    let n = params.sites;
    let basis = PhononBasis::new(n, params.n_max, params.truncation, cap)?;
    let configs = basis.configurations();
    let mut triplets = Vec::new();
    let mut shifted = vec![0u8; n];
    let mut raised = vec![0u8; n];

    for (p, cfg) in configs.chunks(n).enumerate() {
        let occupation: usize = cfg.iter().map(|&v| v as usize).sum();
        if occupation > 0 {
            triplets.push((p as u32, p as u32, params.omega0 * occupation as f64));
        }
        for d in neighbours(0, n, Boundary::Periodic) {
            for (k, slot) in shifted.iter_mut().enumerate() {
                *slot = cfg[(k + d) % n];
            }
            let q = basis.rank(&shifted).expect("cyclic shift stays in the basis");
            triplets.push((q as u32, p as u32, -params.t));
        }
        if params.g != 0.0 && basis.can_add(cfg, 0) {
            raised.copy_from_slice(cfg);
            raised[0] += 1;
            let q = basis.rank(&raised).expect("raised configuration is in the basis");
            let v = params.g * ((cfg[0] as f64) + 1.0).sqrt();
            triplets.push((p as u32, q as u32, v));
            triplets.push((q as u32, p as u32, v));
        }
    }
    Ok((SparseHamiltonian::from_triplets(basis.len(), triplets)?, basis))
}

/// Sites reached by one hop from `site`. On a ring of two sites both bonds
/// connect the same pair, so the neighbour appears twice; self-bonds (N = 1)
/// are skipped.
fn neighbours(site: usize, n: usize, boundary: Boundary) -> impl Iterator<Item = usize> {
    let right = match boundary {
        Boundary::Periodic => Some((site + 1) % n),
        Boundary::Open => (site + 1 < n).then_some(site + 1),
    };
    let left = match boundary {
        Boundary::Periodic => Some((site + n - 1) % n),
        Boundary::Open => site.checked_sub(1),
    };
    [right, left].into_iter().flatten().filter(move |&j| j != site)
}
