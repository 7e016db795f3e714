//! Continuous-time quantum and classical walks on star graphs, complete
//! graphs and the star graphs with extra leaf bonds that interpolate between
//! them.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: graph family and integer connectivity matrices
//! - [`spectral`]: Jacobi eigendecomposition, degeneracy grouping, density of
//!   states and exact characteristic-polynomial fingerprints
//! - [`dynamics`]: return probabilities and their long-time averages
//! - [`ensemble`]: seeded Monte Carlo over random bond placements
//! - [`census`]: exhaustive counting of distinct eigenvalue sets per bond count
//! - [`io`]: CSV and JSON emitters

pub mod census;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod graph;
pub mod io;
pub mod par;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{
    b_max, build_complete, build_star, leaf_pairs, star_plus_bonds, BondBudget, ConnectivityMatrix,
    Graph,
};
pub use par::Execution;
pub use spectral::{
    density_of_states, eigendecompose, fingerprint, group_degeneracies, DensityOfStates,
    SpectralDecomposition, SpectralFingerprint, Spectrum,
};
