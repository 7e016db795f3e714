//! Classical (CTRW) and quantum (CTQW) walk observables.
//!
//! With `γ = 1` the classical transfer matrix is `-A` and the quantum
//! Hamiltonian is `A`, so one spectral decomposition serves both:
//!
//! ```text
//! p_kj(t)  = Σ_m v_m[k] v_m[j] exp(-E_m t)
//! π_kj(t)  = |Σ_m v_m[k] v_m[j] exp(-i E_m t)|²
//! p̄(t)     = Σ_E ρ(E) exp(-E t)
//! |ᾱ(t)|²  = |Σ_E ρ(E) exp(-i E t)|²
//! π̄(t)     = (1/n) Σ_j π_jj(t)  ≥ |ᾱ(t)|²
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{SpectralDecomposition, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// Sample times in units of `1/γ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    samples: usize,
    spacing: Spacing,
    #[serde(skip)]
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, samples: usize, spacing: Spacing) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite"));
        }
        if t_start < 0.0 {
            return Err(Error::InvalidGrid("t_start must be non-negative"));
        }
        if samples < 2 {
            return Err(Error::InvalidGrid("at least two samples are required"));
        }
        if t_end <= t_start {
            return Err(Error::InvalidGrid("t_end must exceed t_start"));
        }
        let last = (samples - 1) as f64;
        let points: Vec<f64> = match spacing {
            Spacing::Linear => (0..samples)
                .map(|i| t_start + (t_end - t_start) * i as f64 / last)
                .collect(),
            Spacing::Logarithmic => {
                if t_start == 0.0 {
                    return Err(Error::InvalidGrid("logarithmic grid needs t_start > 0"));
                }
                let (l0, l1) = (t_start.ln(), t_end.ln());
                (0..samples)
                    .map(|i| (l0 + (l1 - l0) * i as f64 / last).exp())
                    .collect()
            }
        };
        let mut points = points;
        points[0] = t_start;
        points[samples - 1] = t_end;
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("grid is not strictly increasing"));
        }
        Ok(TimeGrid {
            t_start,
            t_end,
            samples,
            spacing,
            points,
        })
    }

    pub fn linear(t_start: f64, t_end: f64, samples: usize) -> Result<Self> {
        Self::new(t_start, t_end, samples, Spacing::Linear)
    }

    pub fn logarithmic(t_start: f64, t_end: f64, samples: usize) -> Result<Self> {
        Self::new(t_start, t_end, samples, Spacing::Logarithmic)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.samples
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }
}

impl Default for TimeGrid {
    /// 400 log-spaced points on `[1e-2, 1e2]`.
    fn default() -> Self {
        TimeGrid::logarithmic(1e-2, 1e2, 400).expect("default grid is valid")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub label: String,
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

impl TimeSeries {
    fn from_fn(label: &str, grid: &TimeGrid, f: impl FnMut(f64) -> f64) -> Self {
        TimeSeries {
            label: label.to_string(),
            grid: grid.clone(),
            values: grid.points().iter().copied().map(f).collect(),
        }
    }

    pub fn times(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times()
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }
}

/// Long-time averages of `p̄(t)` and `|ᾱ(t)|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LongTimeAverages {
    pub p_rw: f64,
    pub p_qw: f64,
}

fn check_node(node: usize, n: usize) -> Result<usize> {
    if node == 0 || node > n {
        Err(Error::NodeOutOfRange { node, n })
    } else {
        Ok(node - 1)
    }
}

/// `p_kj(t)`: probability that a classical walker started at node `j` is at
/// node `k`. Nodes are 1-based.
pub fn classical_transition(
    dec: &SpectralDecomposition,
    k: usize,
    j: usize,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let n = dec.n();
    let (k, j) = (check_node(k, n)?, check_node(j, n)?);
    let weights: Vec<(f64, f64)> = dec
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(m, &e)| (e, dec.vector(m)[k] * dec.vector(m)[j]))
        .collect();
    Ok(TimeSeries::from_fn("p_kj", grid, |t| {
        weights.iter().map(|&(e, w)| w * (-e * t).exp()).sum()
    }))
}

/// `π_kj(t)`: quantum transition probability from node `j` to node `k`.
pub fn quantum_transition(
    dec: &SpectralDecomposition,
    k: usize,
    j: usize,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let n = dec.n();
    let (k, j) = (check_node(k, n)?, check_node(j, n)?);
    let weights: Vec<(f64, f64)> = dec
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(m, &e)| (e, dec.vector(m)[k] * dec.vector(m)[j]))
        .collect();
    Ok(TimeSeries::from_fn("pi_kj", grid, |t| {
        let (mut re, mut im) = (0.0, 0.0);
        for &(e, w) in &weights {
            let (s, c) = (e * t).sin_cos();
            re += w * c;
            im -= w * s;
        }
        re * re + im * im
    }))
}

fn rho(s: &Spectrum) -> Vec<(f64, f64)> {
    let n = s.n() as f64;
    s.groups()
        .iter()
        .map(|g| (g.value, g.multiplicity as f64 / n))
        .collect()
}

/// `p̄(t) = Σ_E ρ(E) exp(-E t)`, the classical return probability averaged
/// over start nodes.
pub fn avg_return_classical(s: &Spectrum, grid: &TimeGrid) -> TimeSeries {
    let dos = rho(s);
    TimeSeries::from_fn("pbar", grid, |t| pbar_at(&dos, t))
}

/// `|ᾱ(t)|² = |Σ_E ρ(E) exp(-i E t)|²`, the spectral lower bound on the
/// quantum return probability.
pub fn avg_return_amplitude_sq(s: &Spectrum, grid: &TimeGrid) -> TimeSeries {
    let dos = rho(s);
    TimeSeries::from_fn("alpha_sq", grid, |t| alpha_sq_at(&dos, t))
}

fn pbar_at(dos: &[(f64, f64)], t: f64) -> f64 {
    dos.iter().map(|&(e, r)| r * (-e * t).exp()).sum()
}

fn alpha_sq_at(dos: &[(f64, f64)], t: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for &(e, r) in dos {
        let (s, c) = (e * t).sin_cos();
        re += r * c;
        im -= r * s;
    }
    re * re + im * im
}

/// Squared eigenvector components summed within each degenerate level:
/// `w[j][g] = Σ_{m ∈ g} v_m[j]²`, so that `α_jj(t) = Σ_g w[j][g] e^{-i E_g t}`.
fn diagonal_projector_weights(dec: &SpectralDecomposition) -> Vec<f64> {
    let n = dec.n();
    let groups = dec.spectrum().groups();
    let g = groups.len();
    let mut w = vec![0.0; n * g];
    let mut m = 0;
    for (gi, grp) in groups.iter().enumerate() {
        for _ in 0..grp.multiplicity {
            let v = dec.vector(m);
            for j in 0..n {
                w[j * g + gi] += v[j] * v[j];
            }
            m += 1;
        }
    }
    w
}

/// Exact `π̄(t) = (1/n) Σ_j π_jj(t)`; needs eigenvectors.
pub fn avg_return_quantum_exact(dec: &SpectralDecomposition, grid: &TimeGrid) -> TimeSeries {
    let mut ev = ReturnEvaluator::new(dec);
    TimeSeries::from_fn("pibar", grid, |t| ev.eval(t).pibar)
}

/// All three averaged return observables at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnSample {
    pub pbar: f64,
    pub alpha_sq: f64,
    pub pibar: f64,
}

/// Evaluates `p̄`, `|ᾱ|²` and `π̄` together, sharing the per-level
/// exponentials. Used by the ensemble loop.
pub struct ReturnEvaluator {
    n: usize,
    energies: Vec<f64>,
    rho: Vec<f64>,
    weights: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl ReturnEvaluator {
    pub fn new(dec: &SpectralDecomposition) -> Self {
        let dos = rho(dec.spectrum());
        let g = dos.len();
        ReturnEvaluator {
            n: dec.n(),
            energies: dos.iter().map(|d| d.0).collect(),
            rho: dos.iter().map(|d| d.1).collect(),
            weights: diagonal_projector_weights(dec),
            cos: vec![0.0; g],
            sin: vec![0.0; g],
        }
    }

    pub fn eval(&mut self, t: f64) -> ReturnSample {
        let g = self.energies.len();
        let mut pbar = 0.0;
        let (mut re, mut im) = (0.0, 0.0);
        for i in 0..g {
            let e = self.energies[i];
            let (s, c) = (e * t).sin_cos();
            self.cos[i] = c;
            self.sin[i] = s;
            pbar += self.rho[i] * (-e * t).exp();
            re += self.rho[i] * c;
            im -= self.rho[i] * s;
        }
        let mut pibar = 0.0;
        for j in 0..self.n {
            let w = &self.weights[j * g..(j + 1) * g];
            let (mut ar, mut ai) = (0.0, 0.0);
            for ((wi, c), s) in w.iter().zip(&self.cos).zip(&self.sin) {
                ar += wi * c;
                ai -= wi * s;
            }
            pibar += ar * ar + ai * ai;
        }
        ReturnSample {
            pbar,
            alpha_sq: re * re + im * im,
            pibar: pibar / self.n as f64,
        }
    }
}

/// `P_RW = 1/n` and `P_QW = Σ_E ρ(E)²`. `P_QW` is formed from the integer
/// sum of squared multiplicities, so it is exact up to one rounding.
pub fn long_time_averages(s: &Spectrum) -> LongTimeAverages {
    let n = s.n() as f64;
    LongTimeAverages {
        p_rw: 1.0 / n,
        p_qw: s.degeneracy_square_sum() as f64 / (n * n),
    }
}

/// Trapezoidal time average of a series over its grid span. Approximates
/// the `T → ∞` averages when the grid is linear and long compared with the
/// inverse of the smallest level spacing.
pub fn numeric_time_average(series: &TimeSeries) -> f64 {
    let t = series.times();
    let v = &series.values;
    let span = t[t.len() - 1] - t[0];
    let area: f64 = t
        .windows(2)
        .zip(v.windows(2))
        .map(|(tw, vw)| 0.5 * (tw[1] - tw[0]) * (vw[0] + vw[1]))
        .sum();
    area / span
}

/// Single-dominant-level approximation
///
/// ```text
/// |ᾱ(t)|² ≈ ρ(E_m) { ρ(E_m) + Σ_{E ≠ E_m} ρ(E) cos((E_m - E) t) }
/// ```
///
/// where `E_m` is the most degenerate eigenvalue. Accurate only when
/// `ρ(E_m)` is O(1) and every other level is O(1/n); the error is of order
/// `1/n`. Fails if several levels share the largest multiplicity.
pub fn degenerate_approximation(s: &Spectrum, grid: &TimeGrid) -> Result<TimeSeries> {
    let groups = s.groups();
    let max_mult = groups.iter().map(|g| g.multiplicity).max().unwrap_or(0);
    let tied = groups.iter().filter(|g| g.multiplicity == max_mult).count();
    if tied != 1 {
        return Err(Error::AmbiguousDegeneracy {
            count: tied,
            multiplicity: max_mult,
        });
    }
    let dos = rho(s);
    let &(e_m, rho_m) = dos
        .iter()
        .zip(groups)
        .find(|(_, g)| g.multiplicity == max_mult)
        .map(|(d, _)| d)
        .expect("dominant level exists");
    let others: Vec<(f64, f64)> = dos.iter().copied().filter(|&(e, _)| e != e_m).collect();
    Ok(TimeSeries::from_fn("alpha_sq_approx", grid, |t| {
        rho_m
            * (rho_m
                + others
                    .iter()
                    .map(|&(e, r)| r * ((e_m - e) * t).cos())
                    .sum::<f64>())
    }))
}

/// Closed forms for the star and complete graphs built from their known
/// spectra: star `{0, 1^(n-2), n}`, complete `{0, n^(n-1)}`.
///
/// The fast star mode decays as `exp(-n t)` because the largest star
/// eigenvalue is `n`; a form with exponent `n - 2` does not match that
/// spectrum.
pub mod closed_form {
    pub fn star_pbar(n: usize, t: f64) -> f64 {
        let nf = n as f64;
        (1.0 + (nf - 2.0) * (-t).exp() + (-nf * t).exp()) / nf
    }

    pub fn star_alpha_sq(n: usize, t: f64) -> f64 {
        let nf = n as f64;
        let re = 1.0 + (nf - 2.0) * t.cos() + (nf * t).cos();
        let im = -(nf - 2.0) * t.sin() - (nf * t).sin();
        (re * re + im * im) / (nf * nf)
    }

    pub fn complete_pbar(n: usize, t: f64) -> f64 {
        let nf = n as f64;
        (1.0 + (nf - 1.0) * (-nf * t).exp()) / nf
    }

    pub fn complete_alpha_sq(n: usize, t: f64) -> f64 {
        let nf = n as f64;
        let re = 1.0 + (nf - 1.0) * (nf * t).cos();
        let im = -(nf - 1.0) * (nf * t).sin();
        (re * re + im * im) / (nf * nf)
    }

    /// `(n² - 4n + 6) / n²`
    pub fn star_p_qw(n: usize) -> f64 {
        let nf = n as f64;
        (nf * nf - 4.0 * nf + 6.0) / (nf * nf)
    }

    /// `(n² - 2n + 2) / n²`
    pub fn complete_p_qw(n: usize) -> f64 {
        let nf = n as f64;
        (nf * nf - 2.0 * nf + 2.0) / (nf * nf)
    }
}
