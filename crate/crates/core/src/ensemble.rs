//! Seeded Monte Carlo over random placements of `b` extra leaf bonds.
//!
//! Every realization draws from its own generator, seeded from the master
//! seed and the realization index, and realizations are reduced in fixed
//! blocks in index order. Results are therefore bit-identical for a given
//! configuration whatever the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{ReturnEvaluator, TimeGrid, TimeSeries};
use crate::error::{Error, Result};
use crate::graph::{b_max, leaf_pairs, star_plus_bonds, BondBudget, Graph};
use crate::par::{map_indices, Execution};
use crate::spectral::{eigendecompose, eigenvalues, TOL_EIG};

/// Realizations per reduction block.
const BLOCK: usize = 32;

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleConfig {
    pub n: usize,
    pub b: usize,
    pub r: usize,
    pub seed: u64,
    pub grid: TimeGrid,
}

impl EnsembleConfig {
    pub fn new(n: usize, b: usize, r: usize, seed: u64, grid: TimeGrid) -> Result<Self> {
        BondBudget::new(n, b)?;
        if r == 0 {
            return Err(Error::InvalidConfig("at least one realization is required"));
        }
        Ok(EnsembleConfig {
            n,
            b,
            r,
            seed,
            grid,
        })
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.n, self.b, self.r, self.seed, self.grid.clone()).map(|_| ())
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleSummary {
    pub n: usize,
    pub b: usize,
    pub mean_pbar: TimeSeries,
    pub mean_alpha_sq: TimeSeries,
    pub mean_pibar: TimeSeries,
    pub mean_p_qw: f64,
    pub stderr_p_qw: f64,
    pub realizations_used: usize,
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generator for realization `index` under `seed`.
pub fn realization_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ splitmix64(index as u64))
}

/// Master seed for the `b`-th member of a sweep.
pub fn sweep_seed(seed: u64, b: usize) -> u64 {
    splitmix64(seed ^ splitmix64(0x5EED_0000_0000_0000 ^ b as u64))
}

/// Star on `n` nodes plus a uniformly random `b`-subset of the leaf pairs,
/// drawn by a partial Fisher-Yates shuffle of the pair indices.
pub fn sample_realization<R: Rng + ?Sized>(n: usize, b: usize, rng: &mut R) -> Result<Graph> {
    BondBudget::new(n, b)?;
    let mut pairs = leaf_pairs(n);
    let m = pairs.len();
    for i in 0..b {
        let j = rng.gen_range(i..m);
        pairs.swap(i, j);
    }
    star_plus_bonds(n, &pairs[..b])
}

struct BlockSums {
    pbar: Vec<f64>,
    alpha_sq: Vec<f64>,
    pibar: Vec<f64>,
    /// Σ D(E)² per realization.
    deg_sq: Vec<u64>,
}

fn run_block(cfg: &EnsembleConfig, block: usize) -> Result<BlockSums> {
    let len = cfg.grid.len();
    let start = block * BLOCK;
    let end = (start + BLOCK).min(cfg.r);
    let mut sums = BlockSums {
        pbar: vec![0.0; len],
        alpha_sq: vec![0.0; len],
        pibar: vec![0.0; len],
        deg_sq: Vec::with_capacity(end - start),
    };
    for index in start..end {
        let wrap = |e: Error| Error::Realization {
            index,
            source: Box::new(e),
        };
        let mut rng = realization_rng(cfg.seed, index);
        let g = sample_realization(cfg.n, cfg.b, &mut rng).map_err(wrap)?;
        let dec = eigendecompose(&g.connectivity_matrix()).map_err(wrap)?;
        sums.deg_sq.push(dec.spectrum().degeneracy_square_sum());
        let mut ev = ReturnEvaluator::new(&dec);
        for (i, &t) in cfg.grid.points().iter().enumerate() {
            let s = ev.eval(t);
            sums.pbar[i] += s.pbar;
            sums.alpha_sq[i] += s.alpha_sq;
            sums.pibar[i] += s.pibar;
        }
    }
    Ok(sums)
}

fn block_count(r: usize) -> usize {
    r.div_ceil(BLOCK)
}

/// Ensemble means of `p̄(t)`, `|ᾱ(t)|²`, `π̄(t)` and of the per-realization
/// `P_QW`.
pub fn run_ensemble(cfg: &EnsembleConfig, exec: Execution) -> Result<EnsembleSummary> {
    cfg.validate()?;
    let blocks = map_indices(exec, block_count(cfg.r), |blk| run_block(cfg, blk));

    let len = cfg.grid.len();
    let mut pbar = vec![0.0; len];
    let mut alpha_sq = vec![0.0; len];
    let mut pibar = vec![0.0; len];
    let mut deg_sq = Vec::with_capacity(cfg.r);
    for blk in blocks {
        let blk = blk?;
        for i in 0..len {
            pbar[i] += blk.pbar[i];
            alpha_sq[i] += blk.alpha_sq[i];
            pibar[i] += blk.pibar[i];
        }
        deg_sq.extend(blk.deg_sq);
    }

    let r = cfg.r as f64;
    let series = |label: &str, sums: Vec<f64>| TimeSeries {
        label: label.to_string(),
        grid: cfg.grid.clone(),
        values: sums.into_iter().map(|s| s / r).collect(),
    };

    // P_QW = x / n² with integer x, so mean and variance are formed exactly
    // in integers and rounded once.
    let n2 = (cfg.n * cfg.n) as f64;
    let sum: u128 = deg_sq.iter().map(|&x| x as u128).sum();
    let sum_sq: u128 = deg_sq.iter().map(|&x| (x as u128) * (x as u128)).sum();
    let mean_p_qw = sum as f64 / (r * n2);
    let stderr_p_qw = if cfg.r > 1 {
        let rr = cfg.r as u128;
        let num = rr * sum_sq - sum * sum;
        let var = num as f64 / ((rr * (rr - 1)) as f64 * n2 * n2);
        (var / r).sqrt()
    } else {
        0.0
    };

    Ok(EnsembleSummary {
        n: cfg.n,
        b: cfg.b,
        mean_pbar: series("pbar", pbar),
        mean_alpha_sq: series("alpha_sq", alpha_sq),
        mean_pibar: series("pibar", pibar),
        mean_p_qw,
        stderr_p_qw,
        realizations_used: cfg.r,
    })
}

/// Ensemble-averaged count of eigenvalues below each energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueStaircase {
    pub energies: Vec<f64>,
    pub counts: Vec<f64>,
}

impl EigenvalueStaircase {
    /// Largest increase between neighbouring grid energies.
    pub fn max_jump(&self) -> f64 {
        self.counts
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

/// `d(E) = (1/R) Σ_{n,r} θ(E - E_n^(r))` with `θ(0) = 1`. An eigenvalue
/// within the eigenvalue tolerance of `E` counts as below `E`, so integer
/// grid energies capture integer eigenvalues despite rounding.
pub fn staircase(
    cfg: &EnsembleConfig,
    e_grid: &[f64],
    exec: Execution,
) -> Result<EigenvalueStaircase> {
    cfg.validate()?;
    if e_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidConfig("energy grid must be ascending"));
    }
    let blocks = map_indices(exec, block_count(cfg.r), |blk| -> Result<Vec<u64>> {
        let mut counts = vec![0u64; e_grid.len()];
        let start = blk * BLOCK;
        for index in start..(start + BLOCK).min(cfg.r) {
            let wrap = |e: Error| Error::Realization {
                index,
                source: Box::new(e),
            };
            let mut rng = realization_rng(cfg.seed, index);
            let g = sample_realization(cfg.n, cfg.b, &mut rng).map_err(wrap)?;
            let values = eigenvalues(&g.connectivity_matrix()).map_err(wrap)?;
            // values ascending; walk both lists once
            let mut below = 0;
            for (c, &e) in counts.iter_mut().zip(e_grid) {
                while below < values.len() && values[below] <= e + TOL_EIG {
                    below += 1;
                }
                *c += below as u64;
            }
        }
        Ok(counts)
    });
    let mut total = vec![0u64; e_grid.len()];
    for blk in blocks {
        for (t, c) in total.iter_mut().zip(blk?) {
            *t += c;
        }
    }
    Ok(EigenvalueStaircase {
        energies: e_grid.to_vec(),
        counts: total.into_iter().map(|c| c as f64 / cfg.r as f64).collect(),
    })
}

/// One ensemble per `b`, each seeded with [`sweep_seed`] of the master seed.
pub fn sweep_b(
    n: usize,
    b_list: &[usize],
    r: usize,
    seed: u64,
    grid: &TimeGrid,
    exec: Execution,
) -> Result<Vec<(usize, EnsembleSummary)>> {
    for &b in b_list {
        BondBudget::new(n, b)?;
    }
    b_list
        .iter()
        .map(|&b| {
            let cfg = EnsembleConfig::new(n, b, r, sweep_seed(seed, b), grid.clone())?;
            Ok((b, run_ensemble(&cfg, exec)?))
        })
        .collect()
}

/// Every `b` from 0 to `b_max(n)`.
pub fn full_sweep_range(n: usize) -> Vec<usize> {
    (0..=b_max(n)).collect()
}
