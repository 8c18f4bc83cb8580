//! Anisotropic Dicke–Stark model with an A-square term.
//!
//! * [`model`]: parameters, truncated basis and sparse Hamiltonian assembly.
//! * [`spectra`]: Lanczos / dense eigensolvers, ground-state observables and
//!   photon-cutoff control.
//! * [`meanfield_zero`]: zero-temperature mean-field energy, order parameters
//!   and critical coupling.
//! * [`meanfield_thermal`]: finite-temperature free energy, critical coupling,
//!   critical temperature and free-energy landscapes.
//! * [`scaling`]: power-law fits, critical-point size scaling and data collapse.
//! * [`sweep`]: configuration files, parameter sweeps and CSV/JSON output.

pub mod meanfield_thermal;
pub mod meanfield_zero;
pub mod model;
pub mod scaling;
pub mod spectra;
pub mod sweep;
