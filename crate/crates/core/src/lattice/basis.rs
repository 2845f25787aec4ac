//! Phonon-configuration bases and the flat electron-phonon index.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How the phonon space is truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// Every site holds at most `cutoff` phonons: `(cutoff+1)^N` configurations.
    #[default]
    PerSite,
    /// At most `cutoff` phonons in total: `C(cutoff+N, N)` configurations.
    TotalPhonons,
}

/// Enumerates phonon occupation vectors `(nu_0, ..., nu_{N-1})` under a cutoff.
///
/// Per-site indices are little-endian in base `cutoff+1`. Total-number
/// indices follow the nested order with site 0 outermost.
#[derive(Clone, Debug)]
pub struct PhononBasis {
    sites: usize,
    cutoff: usize,
    truncation: Truncation,
    len: usize,
    // binom[k][r] = number of k-site configurations with at most r phonons
    counts: Vec<Vec<usize>>,
}

impl PhononBasis {
    pub fn new(sites: usize, cutoff: usize, truncation: Truncation, cap: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidParams("phonon basis needs at least one site".into()));
        }
        if cutoff > u8::MAX as usize {
            return Err(Error::InvalidParams(format!("cutoff {cutoff} exceeds 255")));
        }
        let exact = Self::dimension(sites, cutoff, truncation);
        if exact > cap as u128 {
            return Err(Error::DimensionCap { dim: exact, cap });
        }
        let counts = match truncation {
            Truncation::PerSite => Vec::new(),
            Truncation::TotalPhonons => (0..=sites)
                .map(|k| {
                    (0..=cutoff)
                        .map(|r| binomial((r + k) as u128, k as u128) as usize)
                        .collect()
                })
                .collect(),
        };
        Ok(Self {
            sites,
            cutoff,
            truncation,
            len: exact as usize,
            counts,
        })
    }

    /// Number of configurations, computed without overflow.
    pub fn dimension(sites: usize, cutoff: usize, truncation: Truncation) -> u128 {
        match truncation {
            Truncation::PerSite => {
                let base = cutoff as u128 + 1;
                let mut d: u128 = 1;
                for _ in 0..sites {
                    d = d.saturating_mul(base);
                }
                d
            }
            Truncation::TotalPhonons => binomial((cutoff + sites) as u128, sites as u128),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Whether adding one phonon on `site` keeps the configuration inside the basis.
    pub fn can_add(&self, config: &[u8], site: usize) -> bool {
        match self.truncation {
            Truncation::PerSite => (config[site] as usize) < self.cutoff,
            Truncation::TotalPhonons => {
                config.iter().map(|&n| n as usize).sum::<usize>() < self.cutoff
            }
        }
    }

    pub fn rank(&self, config: &[u8]) -> Option<usize> {
        if config.len() != self.sites {
            return None;
        }
        match self.truncation {
            Truncation::PerSite => {
                let base = self.cutoff + 1;
                let mut idx = 0usize;
                for &n in config.iter().rev() {
                    if n as usize > self.cutoff {
                        return None;
                    }
                    idx = idx * base + n as usize;
                }
                Some(idx)
            }
            Truncation::TotalPhonons => {
                let mut remaining = self.cutoff;
                let mut idx = 0usize;
                for (i, &n) in config.iter().enumerate() {
                    let n = n as usize;
                    if n > remaining {
                        return None;
                    }
                    let rest = self.sites - 1 - i;
                    for v in 0..n {
                        idx += self.counts[rest][remaining - v];
                    }
                    remaining -= n;
                }
                Some(idx)
            }
        }
    }

    pub fn unrank(&self, mut idx: usize) -> Option<Vec<u8>> {
        if idx >= self.len {
            return None;
        }
        let mut config = vec![0u8; self.sites];
        match self.truncation {
            Truncation::PerSite => {
                let base = self.cutoff + 1;
                for slot in config.iter_mut() {
                    *slot = (idx % base) as u8;
                    idx /= base;
                }
            }
            Truncation::TotalPhonons => {
                let mut remaining = self.cutoff;
                for i in 0..self.sites {
                    let rest = self.sites - 1 - i;
                    let mut v = 0;
                    while idx >= self.counts[rest][remaining - v] {
                        idx -= self.counts[rest][remaining - v];
                        v += 1;
                    }
                    config[i] = v as u8;
                    remaining -= v;
                }
            }
        }
        Some(config)
    }

    /// All configurations in index order, flattened with stride `sites`.
    pub fn configurations(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len * self.sites);
        match self.truncation {
            Truncation::PerSite => {
                let mut config = vec![0u8; self.sites];
                for _ in 0..self.len {
                    out.extend_from_slice(&config);
                    // little-endian increment
                    for slot in config.iter_mut() {
                        if (*slot as usize) < self.cutoff {
                            *slot += 1;
                            break;
                        }
                        *slot = 0;
                    }
                }
            }
            Truncation::TotalPhonons => {
                let mut config = vec![0u8; self.sites];
                self.push_total(0, self.cutoff, &mut config, &mut out);
            }
        }
        out
    }

    fn push_total(&self, site: usize, remaining: usize, config: &mut [u8], out: &mut Vec<u8>) {
        if site == self.sites {
            out.extend_from_slice(config);
            return;
        }
        for v in 0..=remaining {
            config[site] = v as u8;
            self.push_total(site + 1, remaining - v, config, out);
        }
        config[site] = 0;
    }
}

/// An electron position together with the phonon occupations of every site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockState {
    pub electron_site: usize,
    pub occupations: Vec<u8>,
}

/// Full single-electron basis. The electron site is the most significant digit
/// of the flat index: `index = site * phonons.len() + rank(occupations)`.
#[derive(Clone, Debug)]
pub struct FockBasis {
    phonons: PhononBasis,
}

impl FockBasis {
    pub fn new(sites: usize, cutoff: usize, truncation: Truncation, cap: usize) -> Result<Self> {
        let total = PhononBasis::dimension(sites, cutoff, truncation).saturating_mul(sites as u128);
        if total > cap as u128 {
            return Err(Error::DimensionCap { dim: total, cap });
        }
        Ok(Self {
            phonons: PhononBasis::new(sites, cutoff, truncation, cap)?,
        })
    }

    pub fn phonons(&self) -> &PhononBasis {
        &self.phonons
    }

    pub fn sites(&self) -> usize {
        self.phonons.sites()
    }

    pub fn len(&self) -> usize {
        self.sites() * self.phonons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, state: &FockState) -> Option<usize> {
        if state.electron_site >= self.sites() {
            return None;
        }
        let ph = self.phonons.rank(&state.occupations)?;
        Some(state.electron_site * self.phonons.len() + ph)
    }

    pub fn state_at(&self, index: usize) -> Option<FockState> {
        if index >= self.len() {
            return None;
        }
        let n_ph = self.phonons.len();
        Some(FockState {
            electron_site: index / n_ph,
            occupations: self.phonons.unrank(index % n_ph)?,
        })
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}
