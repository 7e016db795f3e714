//! Eigendecomposition of connectivity matrices, degeneracy grouping, density
//! of states and exact spectral fingerprints.

mod charpoly;
mod jacobi;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ConnectivityMatrix;

/// Numerical tolerances used by the eigensolver checks and by degeneracy
/// grouping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Max-norm of `A v - E v` per eigenpair.
    pub resid: f64,
    /// Max deviation of `Vᵀ V` from the identity.
    pub orth: f64,
    /// Slack for "non-negative" and "is zero" eigenvalue checks.
    pub eig: f64,
    /// Allowed gap between the eigenvalue sum and the trace.
    pub trace: f64,
    /// Consecutive eigenvalues closer than this are one degenerate level.
    pub group: f64,
}

pub const TOL_EIG: f64 = 1e-9;
pub const TOL_GROUP: f64 = 1e-8;

impl Tolerances {
    pub fn for_matrix(n: usize, max_abs: i64) -> Self {
        let nf = n as f64;
        Tolerances {
            resid: 1e-10 * nf * (max_abs.max(1) as f64),
            orth: 1e-10 * nf,
            eig: TOL_EIG,
            trace: 1e-9 * nf,
            group: TOL_GROUP,
        }
    }
}

/// One distinct eigenvalue together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenGroup {
    pub value: f64,
    pub multiplicity: usize,
}

/// Ascending eigenvalues with their degeneracy grouping.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    groups: Vec<EigenGroup>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn groups(&self) -> &[EigenGroup] {
        &self.groups
    }

    /// Number of eigenvalues within `tol` of zero.
    pub fn zero_modes(&self, tol: f64) -> usize {
        self.values.iter().filter(|v| v.abs() <= tol).count()
    }

    /// `Σ_E D(E)²`, the integer numerator of the long-time quantum return
    /// probability `Σ ρ(E)²`.
    pub fn degeneracy_square_sum(&self) -> u64 {
        self.groups
            .iter()
            .map(|g| (g.multiplicity * g.multiplicity) as u64)
            .sum()
    }
}

/// Groups an eigenvalue list into degenerate levels. Consecutive sorted
/// values whose gap is at most `tol` are chained into one group whose value
/// is the mean of its members.
pub fn group_degeneracies(values: &[f64], tol: f64) -> Spectrum {
    let mut values = values.to_vec();
    values.sort_by(f64::total_cmp);
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            let members = &values[start..i];
            groups.push(EigenGroup {
                value: members.iter().sum::<f64>() / members.len() as f64,
                multiplicity: members.len(),
            });
            start = i;
        }
    }
    Spectrum { values, groups }
}

/// `ρ(E) = D(E)/n` over the distinct eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityOfStates {
    pub n: usize,
    pub points: Vec<DosPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DosPoint {
    pub energy: f64,
    pub rho: f64,
    pub multiplicity: usize,
}

impl DensityOfStates {
    /// Sum of multiplicities; equals `n`, so `Σ ρ = 1` holds exactly.
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }
}

pub fn density_of_states(s: &Spectrum) -> DensityOfStates {
    let n = s.n();
    DensityOfStates {
        n,
        points: s
            .groups()
            .iter()
            .map(|g| DosPoint {
                energy: g.value,
                rho: g.multiplicity as f64 / n as f64,
                multiplicity: g.multiplicity,
            })
            .collect(),
    }
}

/// Eigenvalues and orthonormal eigenvectors, paired by index.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    spectrum: Spectrum,
    /// `vectors[k * n + i]` is component `i` of eigenvector `k`.
    vectors: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.spectrum.n()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.values()
    }

    /// Eigenvector paired with the `k`-th ascending eigenvalue.
    pub fn vector(&self, k: usize) -> &[f64] {
        let n = self.n();
        &self.vectors[k * n..(k + 1) * n]
    }

    /// `V diag(E) Vᵀ`, row-major.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n * n];
        for (k, &e) in self.eigenvalues().iter().enumerate() {
            let v = self.vector(k);
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] += e * v[i] * v[j];
                }
            }
        }
        out
    }
}

/// Full eigendecomposition by cyclic Jacobi rotations. The result is
/// checked against the residual and orthonormality tolerances; a violation
/// is reported as a convergence failure carrying the worst residual.
pub fn eigendecompose(a: &ConnectivityMatrix) -> Result<SpectralDecomposition> {
    let n = a.n();
    let tol = Tolerances::for_matrix(n, a.max_abs());
    let mut work = a.to_f64();
    let out = jacobi::jacobi(&mut work, n, true);
    let rot = out.vectors.expect("vectors requested");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| out.values[x].total_cmp(&out.values[y]));
    let values: Vec<f64> = order.iter().map(|&k| out.values[k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[dst * n + i] = rot[i * n + src];
        }
    }

    let mut worst_resid: f64 = 0.0;
    for (k, &e) in values.iter().enumerate() {
        let v = &vectors[k * n..(k + 1) * n];
        for i in 0..n {
            let av: f64 = (0..n).map(|j| a.get(i, j) as f64 * v[j]).sum();
            worst_resid = worst_resid.max((av - e * v[i]).abs());
        }
    }
    let mut worst_orth: f64 = 0.0;
    for k in 0..n {
        for l in k..n {
            let dot: f64 = (0..n)
                .map(|i| vectors[k * n + i] * vectors[l * n + i])
                .sum();
            let expect = if k == l { 1.0 } else { 0.0 };
            worst_orth = worst_orth.max((dot - expect).abs());
        }
    }
    if !out.converged || worst_resid > tol.resid || worst_orth > tol.orth {
        return Err(Error::SolverConvergence {
            sweeps: out.sweeps,
            residual: worst_resid.max(out.off_norm),
        });
    }

    Ok(SpectralDecomposition {
        spectrum: group_degeneracies(&values, tol.group),
        vectors,
    })
}

/// Ascending eigenvalues only. Skips eigenvector accumulation, so the
/// residual check is replaced by a trace check.
pub fn eigenvalues(a: &ConnectivityMatrix) -> Result<Vec<f64>> {
    let n = a.n();
    let tol = Tolerances::for_matrix(n, a.max_abs());
    let mut work = a.to_f64();
    let out = jacobi::jacobi(&mut work, n, false);
    let mut values = out.values;
    values.sort_by(f64::total_cmp);
    let sum: f64 = values.iter().sum();
    let trace_err = (sum - a.trace() as f64).abs();
    if !out.converged || trace_err > tol.trace {
        return Err(Error::SolverConvergence {
            sweeps: out.sweeps,
            residual: trace_err.max(out.off_norm),
        });
    }
    Ok(values)
}

/// Grouped spectrum of a connectivity matrix.
pub fn spectrum(a: &ConnectivityMatrix) -> Result<Spectrum> {
    Ok(group_degeneracies(&eigenvalues(a)?, TOL_GROUP))
}

/// Exact integer coefficients of `det(xI - A)`, highest degree first. Two
/// symmetric matrices share a fingerprint exactly when their eigenvalue
/// multisets coincide.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectralFingerprint {
    coeffs: Vec<i128>,
}

impl SpectralFingerprint {
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl Serialize for SpectralFingerprint {
    // i128 does not survive JSON number round trips; emit decimal strings.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

pub fn fingerprint(a: &ConnectivityMatrix) -> Result<SpectralFingerprint> {
    Ok(SpectralFingerprint {
        coeffs: charpoly::char_poly(a.entries(), a.n())?,
    })
}
