//! Cross-checks of the sparse Holstein model and the trial states against a
//! dense matrix assembled here from scratch.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use warmstart::ansatz::{
    build_lf_state, coherent_amplitudes, solve_variational_alpha, AlphaChoice, Sector, SolvedModel,
    SweepOptions,
};
use warmstart::lattice::{
    build_hamiltonian_with, ground_state, Boundary, FockBasis, FockState, LanczosOptions, ModelParams,
    Truncation,
};

struct Dense {
    energy: f64,
    ground: Vec<f64>,
    states: Vec<(usize, Vec<usize>)>,
}

fn enumerate(sites: usize, cutoff: usize, total: bool) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..sites {
        let mut next = Vec::new();
        for c in &out {
            for n in 0..=cutoff {
                let mut v = c.clone();
                v.push(n);
                next.push(v);
            }
        }
        out = next;
    }
    if total {
        out.retain(|c| c.iter().sum::<usize>() <= cutoff);
    }
    out
}

fn dense_holstein(t: f64, w: f64, g: f64, sites: usize, cutoff: usize, total: bool, periodic: bool) -> Dense {
    let configs = enumerate(sites, cutoff, total);
    let mut states = Vec::new();
    for i in 0..sites {
        for c in &configs {
            states.push((i, c.clone()));
        }
    }
    let index: HashMap<_, _> = states.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
    let dim = states.len();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    let mut bonds = Vec::new();
    for i in 0..sites {
        if i + 1 < sites {
            bonds.push((i, i + 1));
        } else if periodic && sites > 1 {
            bonds.push((i, 0));
        }
    }
    for (k, (site, occ)) in states.iter().enumerate() {
        h[(k, k)] += w * occ.iter().sum::<usize>() as f64;
        for &(a, b) in &bonds {
            for (from, to) in [(a, b), (b, a)] {
                if *site == from {
                    let j = index[&(to, occ.clone())];
                    h[(j, k)] -= t;
                }
            }
        }
        let n = occ[*site];
        if n < cutoff {
            let mut up = occ.clone();
            up[*site] += 1;
            if let Some(&j) = index.get(&(*site, up)) {
                let v = g * ((n + 1) as f64).sqrt();
                h[(j, k)] += v;
                h[(k, j)] += v;
            }
        }
    }
    let eig = SymmetricEigen::new(h);
    let (imin, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    Dense {
        energy: eig.eigenvalues[imin],
        ground: eig.eigenvectors.column(imin).iter().copied().collect(),
        states,
    }
}

fn dense_overlap(d: &Dense, alpha: f64, cutoff: usize) -> f64 {
    let sites = d.states[0].1.len();
    let mut c: Vec<f64> = (0..=cutoff)
        .map(|n| {
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            (-alpha * alpha / 2.0).exp() * (-alpha).powi(n as i32) / fact.sqrt()
        })
        .collect();
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    c.iter_mut().for_each(|x| *x /= norm);
    let mut amp = 0.0;
    for (k, (site, occ)) in d.states.iter().enumerate() {
        let others_vacant = occ.iter().enumerate().all(|(j, &n)| j == *site || n == 0);
        if others_vacant {
            amp += d.ground[k] * c[occ[*site]] / (sites as f64).sqrt();
        }
    }
    amp * amp
}

fn params(lambda: f64, sites: usize, cutoff: usize, trunc: Truncation, boundary: Boundary) -> ModelParams {
    ModelParams::from_lambda(1.0, 1.0, lambda, sites, cutoff)
        .unwrap()
        .with_truncation(trunc)
        .with_boundary(boundary)
}

fn opts(sector: Sector, trunc: Truncation) -> SweepOptions {
    SweepOptions {
        sector,
        truncation: trunc,
        ..SweepOptions::default()
    }
}

#[test]
fn two_site_ring_matches_dense_oracle() {
    for lambda in [0.3, 1.0, 2.0] {
        let p = params(lambda, 2, 6, Truncation::PerSite, Boundary::Periodic);
        let dense = dense_holstein(1.0, 1.0, p.g, 2, 6, false, true);
        let solved = SolvedModel::solve(&p, &opts(Sector::RealSpace, Truncation::PerSite)).unwrap();
        assert!((solved.energy - dense.energy).abs() < 1e-9, "lambda {lambda}");
        for alpha in [0.0, 0.5, 1.0] {
            let want = dense_overlap(&dense, alpha, 6);
            let got = solved.overlap_with(alpha).unwrap();
            assert!((got - want).abs() < 1e-8, "lambda {lambda} alpha {alpha}: {got} vs {want}");
        }
    }
}

#[test]
fn four_site_chain_matches_dense_oracle() {
    for (boundary, periodic) in [(Boundary::Periodic, true), (Boundary::Open, false)] {
        let p = params(1.2, 4, 6, Truncation::TotalPhonons, boundary);
        let dense = dense_holstein(1.0, 1.0, p.g, 4, 6, true, periodic);
        let real = SolvedModel::solve(&p, &opts(Sector::RealSpace, Truncation::TotalPhonons)).unwrap();
        assert!((real.energy - dense.energy).abs() < 1e-9);
        let alpha = solve_variational_alpha(&p, 1e-12, 200).unwrap();
        let want = dense_overlap(&dense, alpha, 6);
        assert!((real.overlap_with(alpha).unwrap() - want).abs() < 1e-8);
        if periodic {
            let k0 = SolvedModel::solve(&p, &opts(Sector::MomentumZero, Truncation::TotalPhonons)).unwrap();
            assert!((k0.energy - dense.energy).abs() < 1e-9);
            assert!((k0.overlap_with(alpha).unwrap() - want).abs() < 1e-8);
        }
    }
}

#[test]
fn per_site_cutoff_matches_dense_oracle_on_four_sites() {
    let p = params(0.8, 4, 3, Truncation::PerSite, Boundary::Periodic);
    let dense = dense_holstein(1.0, 1.0, p.g, 4, 3, false, true);
    let (h, _) = build_hamiltonian_with(&p, 1 << 20).unwrap();
    let gs = ground_state(&h, 1e-10).unwrap();
    assert!((gs.energy - dense.energy).abs() < 1e-9);
}

#[test]
fn atomic_limit_closed_forms() {
    for g in [0.5, 1.0, 2.0, 3.0] {
        let p = ModelParams::new(0.0, 1.0, g, 1, 40).unwrap();
        let solved = SolvedModel::solve(&p, &opts(Sector::RealSpace, Truncation::PerSite)).unwrap();
        assert!((solved.energy + g * g).abs() < 1e-6);
        let vac = solved.overlap_with(0.0).unwrap();
        assert!((vac - (-g * g).exp()).abs() < 1e-6);
        let lf = solved.overlap_with(AlphaChoice::StrongCoupling.resolve(&p).unwrap()).unwrap();
        assert!((lf - 1.0).abs() < 1e-9);
    }
}

#[test]
fn occupied_site_carries_alpha_squared_phonons() {
    let p = ModelParams::new(1.0, 1.0, 1.0, 2, 24).unwrap();
    let s = build_lf_state(&p, 1.0).unwrap();
    let basis = FockBasis::new(2, 24, Truncation::PerSite, 1 << 20).unwrap();
    let (mut occupied, mut empty) = (0.0, 0.0);
    for (k, a) in s.state.amplitudes().iter().enumerate() {
        let FockState {
            electron_site,
            occupations,
        } = basis.state_at(k).unwrap();
        let w = a.norm_sqr();
        occupied += w * occupations[electron_site] as f64;
        empty += w * occupations[1 - electron_site] as f64;
    }
    assert!((occupied - 1.0).abs() < 1e-12);
    assert_eq!(empty, 0.0);
}

#[test]
fn lf_state_is_separable_per_electron_block() {
    let p = ModelParams::new(1.0, 1.0, 1.0, 4, 10).unwrap().with_truncation(Truncation::TotalPhonons);
    let alpha = 0.9;
    let s = build_lf_state(&p, alpha).unwrap();
    let c = coherent_amplitudes(alpha, 10).unwrap();
    let basis = FockBasis::new(4, 10, Truncation::TotalPhonons, 1 << 22).unwrap();
    for (k, a) in s.state.amplitudes().iter().enumerate() {
        let st = basis.state_at(k).unwrap();
        let lone = st
            .occupations
            .iter()
            .enumerate()
            .all(|(j, &n)| j == st.electron_site || n == 0);
        let want = if lone { 0.5 * c[st.occupations[st.electron_site] as usize] } else { 0.0 };
        assert!((a.re - want).abs() < 1e-15 && a.im == 0.0);
    }
}

#[test]
fn decoupled_ground_state_is_the_phonon_free_state() {
    let p = params(0.0, 4, 6, Truncation::TotalPhonons, Boundary::Periodic);
    let solved = SolvedModel::solve(&p, &SweepOptions::default()).unwrap();
    for mode in [AlphaChoice::Zero, AlphaChoice::StrongCoupling, AlphaChoice::Variational] {
        let alpha = mode.resolve(&p).unwrap();
        assert!((solved.overlap_with(alpha).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn energy_non_increasing_in_cutoff() {
    let mut prev = f64::INFINITY;
    let mut energies = Vec::new();
    for n_max in 2..=14 {
        let p = params(1.5, 2, n_max, Truncation::PerSite, Boundary::Periodic);
        let (h, _) = build_hamiltonian_with(&p, 1 << 20).unwrap();
        let e = ground_state(&h, 1e-11).unwrap().energy;
        assert!(e <= prev + 1e-10, "n_max {n_max}: {e} > {prev}");
        prev = e;
        energies.push(e);
    }
    let gaps: Vec<f64> = energies.windows(5).map(|w| (w[0] - w[4]).abs()).collect();
    assert!(gaps.windows(2).all(|g| g[1] <= g[0]), "{gaps:?}");
}

#[test]
fn cyclic_relabelling_is_a_symmetry() {
    let p = params(1.0, 4, 3, Truncation::PerSite, Boundary::Periodic);
    let (h, basis) = build_hamiltonian_with(&p, 1 << 20).unwrap();
    let shift = |k: usize| {
        let s = basis.state_at(k).unwrap();
        let mut occ = s.occupations.clone();
        occ.rotate_right(1);
        basis
            .index_of(&FockState {
                electron_site: (s.electron_site + 1) % 4,
                occupations: occ,
            })
            .unwrap()
    };
    for (r, c, v) in h.entries() {
        assert_eq!(h.get(shift(r), shift(c)), v);
    }
    let perm: Vec<usize> = (0..h.dim()).map(shift).collect();
    let triplets = h.entries().map(|(r, c, v)| (perm[r] as u32, perm[c] as u32, v)).collect();
    let relabelled = warmstart::lattice::SparseHamiltonian::from_triplets(h.dim(), triplets).unwrap();
    let a = ground_state(&h, 1e-10).unwrap().energy;
    let b = ground_state(&relabelled, 1e-10).unwrap().energy;
    assert!((a - b).abs() < 1e-10);
}

#[test]
fn lanczos_residual_is_reported() {
    let p = params(1.0, 4, 8, Truncation::TotalPhonons, Boundary::Periodic);
    let (h, _) = build_hamiltonian_with(&p, 1 << 22).unwrap();
    let gs = warmstart::lattice::ground_state_with(&h, &LanczosOptions::default()).unwrap();
    assert!(gs.residual < 1e-10);
}
