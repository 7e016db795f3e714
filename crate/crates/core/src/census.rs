//! Exhaustive census of distinct eigenvalue sets ("clans").
//!
//! For a star on `n` nodes there are `m = (n-1)(n-2)/2` possible leaf bonds.
//! The clan of `b` is the set of distinct spectra reachable by adding exactly
//! `b` of them. Spectra are compared through exact characteristic-polynomial
//! fingerprints, and each fingerprint carries the number of bond subsets
//! that produce it, i.e. its weight under uniform random bond placement.
//!
//! Subsets of a fixed size are visited in colexicographic order as `u64`
//! bit masks (bit `k` selects `leaf_pairs(n)[k]`). Ranks in that order
//! partition the work into chunks for parallel workers; per-chunk counts are
//! merged by addition, and the representative of each fingerprint is the
//! subset of lowest rank, so the merged result does not depend on the
//! schedule.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{b_max, leaf_pairs, mask_to_bonds, star_plus_bonds, ConnectivityMatrix};
use crate::par::{map_indices, Execution};
use crate::spectral::{eigenvalues, fingerprint, SpectralFingerprint};

/// Subsets per work unit.
const CHUNK: u64 = 1 << 12;
/// Work units merged into the running map at a time.
const BATCH: usize = 256;
/// Largest number of leaf pairs a `u64` mask can hold.
const MAX_PAIRS: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusOptions {
    /// Largest `n` for a full (unfiltered) census without `force`.
    pub n_cap: usize,
    /// Largest number of subsets enumerated without `force`.
    pub work_budget: u128,
    pub force: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            n_cap: 8,
            work_budget: 100_000_000,
            force: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClanEntry {
    pub count: u64,
    /// Colex rank of the first subset producing this fingerprint.
    pub first_rank: u64,
}

/// All fingerprints of one clan with their occurrence counts.
#[derive(Debug, Clone)]
pub struct ClanRecord {
    pub n: usize,
    pub b: usize,
    pub total_subsets: u64,
    pub entries: BTreeMap<SpectralFingerprint, ClanEntry>,
}

impl ClanRecord {
    /// Number of distinct eigenvalue sets `N_B`.
    pub fn n_b(&self) -> usize {
        self.entries.len()
    }

    /// Highest count; ties go to the lexicographically smallest fingerprint.
    pub fn most_probable(&self) -> (&SpectralFingerprint, &ClanEntry) {
        let max = self.entries.values().map(|e| e.count).max().unwrap_or(0);
        self.entries
            .iter()
            .find(|(_, e)| e.count == max)
            .expect("clan is never empty")
    }

    /// Lowest count; ties go to the lexicographically smallest fingerprint.
    pub fn least_probable(&self) -> (&SpectralFingerprint, &ClanEntry) {
        let min = self.entries.values().map(|e| e.count).min().unwrap_or(0);
        self.entries
            .iter()
            .find(|(_, e)| e.count == min)
            .expect("clan is never empty")
    }

    /// Leaf bonds of the subset with the given colex rank.
    pub fn bonds_for_rank(&self, rank: u64) -> Vec<(usize, usize)> {
        let pairs = leaf_pairs(self.n);
        let table = Binomials::new(pairs.len());
        mask_to_bonds(&pairs, table.unrank(rank, self.b))
    }
}

/// One end of a clan's probability range, in human-comparable form.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremeConfiguration {
    pub fingerprint: SpectralFingerprint,
    pub count: u64,
    pub probability: f64,
    pub bonds: Vec<(usize, usize)>,
    /// Descending, as printed in census tables.
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClanSummary {
    pub b: usize,
    pub n_b: usize,
    pub total_subsets: u64,
    pub least_probable: ExtremeConfiguration,
    pub most_probable: ExtremeConfiguration,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub clans: Vec<ClanSummary>,
}

impl CensusReport {
    pub fn clan(&self, b: usize) -> Option<&ClanSummary> {
        self.clans.iter().find(|c| c.b == b)
    }
}

/// Pascal table `C(i, k)` for `i, k <= m`.
struct Binomials {
    m: usize,
    table: Vec<u64>,
}

impl Binomials {
    fn new(m: usize) -> Self {
        let w = m + 1;
        let mut table = vec![0u64; w * w];
        for i in 0..=m {
            table[i * w] = 1;
            for k in 1..=i {
                table[i * w + k] = table[(i - 1) * w + k - 1] + table[(i - 1) * w + k];
            }
        }
        Binomials { m, table }
    }

    fn get(&self, i: usize, k: usize) -> u64 {
        if k > i {
            0
        } else {
            self.table[i * (self.m + 1) + k]
        }
    }

    /// Mask of the `rank`-th `k`-subset of `0..m` in colex order.
    fn unrank(&self, mut rank: u64, k: usize) -> u64 {
        let mut mask = 0u64;
        let mut hi = self.m;
        for i in (1..=k).rev() {
            // largest c < hi with C(c, i) <= rank
            let mut c = hi - 1;
            while self.get(c, i) > rank {
                c -= 1;
            }
            mask |= 1u64 << c;
            rank -= self.get(c, i);
            hi = c;
        }
        mask
    }
}

/// Next mask with the same popcount (Gosper's hack); colex successor.
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

pub fn binomial(m: usize, k: usize) -> u64 {
    Binomials::new(m).get(m, k)
}

fn check_pairs(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidSize { n });
    }
    let m = b_max(n);
    if m > MAX_PAIRS {
        return Err(Error::Capacity { n, cap: 12 });
    }
    Ok(m)
}

/// Enumerates every `b`-subset of leaf bonds and groups them by spectral
/// fingerprint.
pub fn enumerate_clan(n: usize, b: usize, exec: Execution) -> Result<ClanRecord> {
    let m = check_pairs(n)?;
    if b > m {
        return Err(Error::BondCountOutOfRange { n, b, b_max: m });
    }
    let pairs = leaf_pairs(n);
    let table = Binomials::new(m);
    let total = table.get(m, b);
    let chunks = total.div_ceil(CHUNK) as usize;

    let mut merged: HashMap<SpectralFingerprint, ClanEntry> = HashMap::new();
    for batch_start in (0..chunks).step_by(BATCH) {
        let batch_len = BATCH.min(chunks - batch_start);
        let parts = map_indices(exec, batch_len, |i| {
            let chunk = (batch_start + i) as u64;
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut local: HashMap<SpectralFingerprint, ClanEntry> = HashMap::new();
            let mut mask = table.unrank(start, b);
            for rank in start..end {
                if rank > start {
                    mask = next_combination(mask);
                }
                let fp = fingerprint(&ConnectivityMatrix::star_with_mask(n, &pairs, mask))?;
                local
                    .entry(fp)
                    .and_modify(|e| e.count += 1)
                    .or_insert(ClanEntry {
                        count: 1,
                        first_rank: rank,
                    });
            }
            Ok::<_, Error>(local)
        });
        for part in parts {
            for (fp, e) in part? {
                merged
                    .entry(fp)
                    .and_modify(|m| {
                        m.count += e.count;
                        m.first_rank = m.first_rank.min(e.first_rank);
                    })
                    .or_insert(e);
            }
        }
    }

    Ok(ClanRecord {
        n,
        b,
        total_subsets: total,
        entries: merged.into_iter().collect(),
    })
}

fn extreme(
    record: &ClanRecord,
    fp: &SpectralFingerprint,
    e: &ClanEntry,
) -> Result<ExtremeConfiguration> {
    let bonds = record.bonds_for_rank(e.first_rank);
    let g = star_plus_bonds(record.n, &bonds)?;
    let mut values = eigenvalues(&g.connectivity_matrix())?;
    values.reverse();
    Ok(ExtremeConfiguration {
        fingerprint: fp.clone(),
        count: e.count,
        probability: e.count as f64 / record.total_subsets as f64,
        bonds,
        eigenvalues: values,
    })
}

pub fn summarize(record: &ClanRecord) -> Result<ClanSummary> {
    let (least_fp, least) = record.least_probable();
    let (most_fp, most) = record.most_probable();
    Ok(ClanSummary {
        b: record.b,
        n_b: record.n_b(),
        total_subsets: record.total_subsets,
        least_probable: extreme(record, least_fp, least)?,
        most_probable: extreme(record, most_fp, most)?,
    })
}

/// Total subsets a census over `bs` would enumerate.
pub fn census_work(n: usize, bs: &[usize]) -> Result<u128> {
    let m = check_pairs(n)?;
    let table = Binomials::new(m);
    Ok(bs.iter().map(|&b| table.get(m, b) as u128).sum())
}

/// Counts distinct eigenvalue sets for each requested `b` (all `b` when no
/// filter is given).
///
/// A full census is refused for `n > n_cap`, and any census whose subset
/// count exceeds the work budget is refused, unless `force` is set.
pub fn census(
    n: usize,
    b_filter: Option<&[usize]>,
    opts: &CensusOptions,
    exec: Execution,
) -> Result<CensusReport> {
    let m = check_pairs(n)?;
    let bs: Vec<usize> = match b_filter {
        Some(list) => {
            for &b in list {
                if b > m {
                    return Err(Error::BondCountOutOfRange { n, b, b_max: m });
                }
            }
            list.to_vec()
        }
        None => {
            if n > opts.n_cap && !opts.force {
                return Err(Error::Capacity { n, cap: opts.n_cap });
            }
            (0..=m).collect()
        }
    };
    let work = census_work(n, &bs)?;
    if work > opts.work_budget && !opts.force {
        return Err(Error::Budget {
            required: work,
            budget: opts.work_budget,
            coverage: String::new(),
        });
    }
    let clans = bs
        .iter()
        .map(|&b| summarize(&enumerate_clan(n, b, exec)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(CensusReport { n, clans })
}

/// `(b, N_B)` pairs of a report.
pub fn clan_curve(report: &CensusReport) -> Vec<(usize, usize)> {
    report.clans.iter().map(|c| (c.b, c.n_b)).collect()
}

/// Searches the `b`-subsets for one whose sorted spectrum matches `target`
/// entrywise within `tol`. Returns the lowest-rank witness, or `None` when
/// every subset was checked without a match. If the subset count exceeds
/// `budget`, the first `budget` subsets are searched and a budget error
/// reports the coverage when nothing was found.
pub fn verify_eigenvalue_set(
    n: usize,
    b: usize,
    target: &[f64],
    tol: f64,
    budget: u64,
    exec: Execution,
) -> Result<Option<Vec<(usize, usize)>>> {
    let m = check_pairs(n)?;
    if b > m {
        return Err(Error::BondCountOutOfRange { n, b, b_max: m });
    }
    let table = Binomials::new(m);
    let total = table.get(m, b);
    if target.len() != n {
        return Ok(None);
    }
    let mut want = target.to_vec();
    want.sort_by(f64::total_cmp);
    let pairs = leaf_pairs(n);
    let limit = total.min(budget);
    let chunks = limit.div_ceil(CHUNK) as usize;

    for batch_start in (0..chunks).step_by(BATCH) {
        let batch_len = BATCH.min(chunks - batch_start);
        let hits = map_indices(exec, batch_len, |i| -> Result<Option<u64>> {
            let start = (batch_start + i) as u64 * CHUNK;
            let end = (start + CHUNK).min(limit);
            let mut mask = table.unrank(start, b);
            for rank in start..end {
                if rank > start {
                    mask = next_combination(mask);
                }
                let values = eigenvalues(&ConnectivityMatrix::star_with_mask(n, &pairs, mask))?;
                if values.iter().zip(&want).all(|(x, y)| (x - y).abs() <= tol) {
                    return Ok(Some(rank));
                }
            }
            Ok(None)
        });
        for hit in hits {
            if let Some(rank) = hit? {
                return Ok(Some(mask_to_bonds(&pairs, table.unrank(rank, b))));
            }
        }
    }
    if limit < total {
        return Err(Error::Budget {
            required: total as u128,
            budget: budget as u128,
            coverage: format!(
                "; searched {limit} of {total} subsets ({:.2}%) without a match",
                100.0 * limit as f64 / total as f64
            ),
        });
    }
    Ok(None)
}
