//! Restarted Lanczos with full reorthogonalisation for the lowest eigenpair.

use nalgebra::{DMatrix, SymmetricEigen};

use super::hamiltonian::SparseHamiltonian;
use crate::{Error, QuantumState, Result};

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// Target for `||H v - E v||_2`.
    pub tol: f64,
    /// Krylov vectors kept per cycle.
    pub krylov_dim: usize,
    /// Cycles before giving up.
    pub max_restarts: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            krylov_dim: 80,
            max_restarts: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    /// Unit-norm real eigenvector.
    pub vector: Vec<f64>,
    pub residual: f64,
    pub matvecs: usize,
}

impl GroundState {
    pub fn state(&self) -> QuantumState {
        QuantumState::from_real(&self.vector).expect("eigenvector has unit norm")
    }
}

pub fn ground_state(h: &SparseHamiltonian, tol: f64) -> Result<GroundState> {
    ground_state_with(
        h,
        &LanczosOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn ground_state_with(h: &SparseHamiltonian, opts: &LanczosOptions) -> Result<GroundState> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::InvalidParams("empty Hamiltonian".into()));
    }
    let krylov = opts.krylov_dim.clamp(2, dim.max(2));

    // Deterministic, generic start vector.
    let mut start: Vec<f64> = (0..dim)
        .map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_7 + 0.3).sin())
        .collect();
    normalize(&mut start);

    let mut matvecs = 0;
    let mut best = f64::INFINITY;
    let mut hv = vec![0.0; dim];

    for _ in 0..=opts.max_restarts {
        let (theta, y) = lanczos_cycle(h, &start, krylov, &mut matvecs);
        h.apply(&y, &mut hv);
        matvecs += 1;
        let residual = hv
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - theta * b).powi(2))
            .sum::<f64>()
            .sqrt();
        best = best.min(residual);
        if residual < opts.tol {
            return Ok(GroundState {
                energy: theta,
                vector: y,
                residual,
                matvecs,
            });
        }
        start = y;
    }
    Err(Error::NotConverged {
        iterations: matvecs,
        residual: best,
    })
}

/// One Lanczos cycle from `start`; returns the lowest Ritz pair.
fn lanczos_cycle(h: &SparseHamiltonian, start: &[f64], krylov: usize, matvecs: &mut usize) -> (f64, Vec<f64>) {
    let dim = start.len();
    let mut basis: Vec<Vec<f64>> = vec![start.to_vec()];
    let mut alphas = Vec::with_capacity(krylov);
    let mut betas: Vec<f64> = Vec::with_capacity(krylov);
    let mut w = vec![0.0; dim];

    loop {
        let j = basis.len() - 1;
        h.apply(&basis[j], &mut w);
        *matvecs += 1;
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        axpy(-alpha, &basis[j], &mut w);
        if j > 0 {
            axpy(-betas[j - 1], &basis[j - 1], &mut w);
        }
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
            }
        }
        let beta = dot(&w, &w).sqrt();
        let scale = alphas.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        if basis.len() >= krylov || basis.len() >= dim || beta <= 1e-13 * scale {
            break;
        }
        betas.push(beta);
        basis.push(w.iter().map(|x| x / beta).collect());
    }

    let k = alphas.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (imin, theta) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty tridiagonal");
    let mut y = vec![0.0; dim];
    for (i, v) in basis.iter().enumerate() {
        axpy(eig.eigenvectors[(i, imin)], v, &mut y);
    }
    normalize(&mut y);
    (theta, y)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let h = SparseHamiltonian::from_triplets(3, vec![(1, 1, 1.0), (2, 2, 2.0)]).unwrap();
        let gs = ground_state(&h, 1e-12).unwrap();
        assert!(gs.energy.abs() < 1e-12);
        assert!((gs.vector[0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_space() {
        let h = SparseHamiltonian::from_triplets(1, vec![(0, 0, -3.0)]).unwrap();
        let gs = ground_state(&h, 1e-12).unwrap();
        assert_eq!(gs.energy, -3.0);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let h = SparseHamiltonian::from_triplets(1, vec![(0, 0, 1.0)]).unwrap();
        assert!(ground_state(&h, 0.0).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        // a long path graph with almost no Krylov room converges slowly
        let n = 400;
        let mut trip = Vec::new();
        for i in 0..n - 1 {
            trip.push((i as u32, i as u32 + 1, -1.0));
            trip.push((i as u32 + 1, i as u32, -1.0));
        }
        let h = SparseHamiltonian::from_triplets(n, trip).unwrap();
        let opts = LanczosOptions {
            tol: 1e-12,
            krylov_dim: 3,
            max_restarts: 2,
        };
        match ground_state_with(&h, &opts) {
            Err(Error::NotConverged { residual, .. }) => assert!(residual > 1e-12),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
