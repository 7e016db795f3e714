//! CSV and JSON emitters. Column headers are part of the public interface.

use std::io::Write;

use crate::census::CensusReport;
use crate::dynamics::TimeSeries;
use crate::ensemble::{EigenvalueStaircase, EnsembleSummary};
use crate::error::Result;
use crate::spectral::{DensityOfStates, SpectralDecomposition, Spectrum};

pub const SPECTRUM_HEADER: [&str; 2] = ["eigenvalue", "multiplicity"];
pub const DOS_HEADER: [&str; 2] = ["eigenvalue", "rho"];
pub const SERIES_HEADER: [&str; 2] = ["t", "value"];
pub const ENSEMBLE_SERIES_HEADER: [&str; 2] = ["t", "mean_value"];
pub const WALK_HEADER: [&str; 4] = ["t", "pbar", "alpha_sq", "pibar"];
pub const SWEEP_HEADER: [&str; 3] = ["b", "mean_p_qw", "stderr"];
pub const STAIRCASE_HEADER: [&str; 2] = ["E", "d"];
pub const CENSUS_HEADER: [&str; 3] = ["b", "N_B", "total_subsets"];

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

pub fn write_spectrum_csv<W: Write>(w: W, s: &Spectrum) -> Result<()> {
    let mut out = writer(w);
    out.write_record(SPECTRUM_HEADER)?;
    for g in s.groups() {
        out.serialize((g.value, g.multiplicity))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_dos_csv<W: Write>(w: W, dos: &DensityOfStates) -> Result<()> {
    let mut out = writer(w);
    out.write_record(DOS_HEADER)?;
    for p in &dos.points {
        out.serialize((p.energy, p.rho))?;
    }
    out.flush()?;
    Ok(())
}

/// One row per node, one column per eigenvector (ascending eigenvalue).
pub fn write_eigenvectors_csv<W: Write>(w: W, dec: &SpectralDecomposition) -> Result<()> {
    let n = dec.n();
    let mut out = writer(w);
    let mut header = vec!["node".to_string()];
    header.extend((1..=n).map(|k| format!("v{k}")));
    out.write_record(&header)?;
    let mut eig = vec!["eigenvalue".to_string()];
    eig.extend(dec.eigenvalues().iter().map(|e| e.to_string()));
    out.write_record(&eig)?;
    for i in 0..n {
        let mut row = vec![(i + 1).to_string()];
        row.extend((0..n).map(|k| dec.vector(k)[i].to_string()));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_series_csv<W: Write>(w: W, series: &TimeSeries) -> Result<()> {
    write_pairs(w, SERIES_HEADER, series.iter())
}

pub fn write_ensemble_series_csv<W: Write>(w: W, series: &TimeSeries) -> Result<()> {
    write_pairs(w, ENSEMBLE_SERIES_HEADER, series.iter())
}

fn write_pairs<W: Write>(
    w: W,
    header: [&str; 2],
    rows: impl Iterator<Item = (f64, f64)>,
) -> Result<()> {
    let mut out = writer(w);
    out.write_record(header)?;
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

/// `t,pbar,alpha_sq,pibar`; all three series must share one grid.
pub fn write_walk_csv<W: Write>(
    w: W,
    pbar: &TimeSeries,
    alpha_sq: &TimeSeries,
    pibar: &TimeSeries,
) -> Result<()> {
    let mut out = writer(w);
    out.write_record(WALK_HEADER)?;
    for (i, &t) in pbar.times().iter().enumerate() {
        out.serialize((t, pbar.values[i], alpha_sq.values[i], pibar.values[i]))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(w: W, sweep: &[(usize, EnsembleSummary)]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(SWEEP_HEADER)?;
    for (b, s) in sweep {
        out.serialize((b, s.mean_p_qw, s.stderr_p_qw))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_staircase_csv<W: Write>(w: W, d: &EigenvalueStaircase) -> Result<()> {
    write_pairs(
        w,
        STAIRCASE_HEADER,
        d.energies.iter().copied().zip(d.counts.iter().copied()),
    )
}

pub fn write_census_csv<W: Write>(w: W, report: &CensusReport) -> Result<()> {
    let mut out = writer(w);
    out.write_record(CENSUS_HEADER)?;
    for c in &report.clans {
        out.serialize((c.b, c.n_b, c.total_subsets))?;
    }
    out.flush()?;
    Ok(())
}

/// Most and least probable configurations of every clan, with fingerprint
/// coefficients as decimal strings.
pub fn write_extremes_json<W: Write>(w: W, report: &CensusReport) -> Result<()> {
    serde_json::to_writer_pretty(w, report)?;
    Ok(())
}
