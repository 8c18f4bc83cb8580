//! Lowest eigenpairs of the Hamiltonian, ground-state observables and photon
//! cutoff control.
//!
//! Every solve works on one parity block at a time. A [`Sector::Full`]
//! Hamiltonian is split into its even and odd blocks, each block is solved
//! separately and the pairs are merged, so every returned eigenvector has a
//! definite parity.

mod band;
mod cutoff;
mod lanczos;
mod observables;
mod tridiagonal;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{BasisSpec, ModelError, Sector, SparseHamiltonian};

pub use cutoff::{converge_cutoff, converge_cutoff_with, CutoffOptions, CutoffStep};
pub use observables::{observables, Observables};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("Lanczos did not converge within {max_iters} matrix-vector products")]
    NoConvergence { max_iters: usize },
    #[error("Krylov basis collapsed at dimension {krylov_dim}")]
    DegenerateBreakdown { krylov_dim: usize },
    #[error("need eigenpairs from both parity sectors, got {0}")]
    InsufficientStates(String),
    #[error("photon cutoff exceeded {cap} without convergence ({} steps)", trail.len())]
    CutoffRunaway { cap: usize, trail: Vec<CutoffStep> },
}

/// Which eigensolver to use for a parity block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Dense up to `dense_threshold`, shift-and-invert Lanczos above.
    Auto,
    Dense,
    /// Lanczos directly on `H`.
    Krylov,
    /// Lanczos on `(H − σ)⁻¹` with `σ` just below the ground energy.
    ShiftInvert,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Residual tolerance `‖Hv − Ev‖`.
    pub tol: f64,
    pub method: Method,
    pub dense_threshold: usize,
    /// Krylov basis size before an explicit restart.
    pub max_krylov: usize,
    /// Total matrix-vector product budget per block.
    pub max_matvecs: usize,
    /// Seed of the random Lanczos start vector.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            method: Method::Auto,
            dense_threshold: 300,
            max_krylov: 1000,
            max_matvecs: 20_000,
            seed: 0x5eed_d1c4e,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub energy: f64,
    /// Unit vector in the basis of `sector` (see [`SpectrumResult::basis_of`]).
    pub vector: Vec<f64>,
    pub sector: Sector,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Sorted by ascending energy.
    pub pairs: Vec<Eigenpair>,
    pub n_atoms: usize,
    pub n_max_used: usize,
}

impl SpectrumResult {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.energy).collect()
    }

    pub fn sector_labels(&self) -> Vec<Sector> {
        self.pairs.iter().map(|p| p.sector).collect()
    }

    pub fn basis_of(&self, pair: &Eigenpair) -> BasisSpec {
        BasisSpec::new(self.n_atoms, self.n_max_used, pair.sector)
    }

    pub fn all_converged(&self) -> bool {
        self.pairs.iter().all(|p| p.converged)
    }

    pub fn max_residual(&self) -> f64 {
        self.pairs.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    /// Lowest excitation energy `E₁ − E₀` of the merged spectrum.
    pub fn gap(&self) -> Option<f64> {
        (self.pairs.len() >= 2).then(|| self.pairs[1].energy - self.pairs[0].energy)
    }
}

/// Lowest `k` eigenpairs of `h` with the default solver settings and residual
/// tolerance `tol`. For a full-basis `h`, `k` pairs are computed in each
/// parity block, so the result holds up to `2k` pairs.
pub fn lowest_eigenpairs(
    h: &SparseHamiltonian,
    k: usize,
    tol: f64,
) -> Result<SpectrumResult, SpectraError> {
    lowest_eigenpairs_with(h, k, &SolverOptions::with_tol(tol))
}

pub fn lowest_eigenpairs_with(
    h: &SparseHamiltonian,
    k: usize,
    opts: &SolverOptions,
) -> Result<SpectrumResult, SpectraError> {
    solve_blocks(h, k, opts, None)
}

/// Shared driver. `starts` optionally carries a warm-start vector per block.
pub(crate) fn solve_blocks(
    h: &SparseHamiltonian,
    k: usize,
    opts: &SolverOptions,
    starts: Option<&[(Sector, Vec<f64>)]>,
) -> Result<SpectrumResult, SpectraError> {
    if k == 0 {
        return Err(SpectraError::InvalidRequest("k must be >= 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(SpectraError::InvalidRequest("tol must be > 0".into()));
    }
    let blocks = match h.basis.sector {
        Sector::Full => vec![h.restrict(Sector::Even)?, h.restrict(Sector::Odd)?],
        _ => {
            if k > h.dim {
                return Err(SpectraError::InvalidRequest(format!(
                    "k = {k} exceeds dimension {}",
                    h.dim
                )));
            }
            vec![h.clone()]
        }
    };
    let mut pairs = Vec::new();
    for block in &blocks {
        let kb = k.min(block.dim);
        if kb == 0 {
            continue;
        }
        let sector = block.basis.sector;
        let start = starts
            .and_then(|s| s.iter().find(|(sec, _)| *sec == sector))
            .map(|(_, v)| v.as_slice());
        let method = match opts.method {
            Method::Auto if block.dim <= opts.dense_threshold => Method::Dense,
            Method::Auto => Method::ShiftInvert,
            m => m,
        };
        let found = match method {
            Method::Dense => dense_lowest(block, kb),
            Method::Krylov => lanczos::lanczos_lowest(block, kb, opts, start)?,
            _ => lanczos::shift_invert_lowest(block, kb, opts, start)?,
        };
        pairs.extend(found.into_iter().map(|r| Eigenpair {
            energy: r.value,
            converged: r.residual <= opts.tol,
            residual: r.residual,
            vector: r.vector,
            sector,
        }));
    }
    pairs.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(SpectrumResult {
        pairs,
        n_atoms: h.basis.n_atoms,
        n_max_used: h.basis.n_max,
    })
}

/// Dense symmetric eigensolver on one block.
fn dense_lowest(h: &SparseHamiltonian, k: usize) -> Vec<lanczos::RitzPair> {
    let n = h.dim;
    let m = DMatrix::from_row_slice(n, n, &h.to_dense());
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut hv = vec![0.0; n];
    order
        .into_iter()
        .take(k)
        .map(|i| {
            let v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            h.matvec_into(&v, &mut hv);
            let value = eig.eigenvalues[i];
            let residual = hv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - value * b).powi(2))
                .sum::<f64>()
                .sqrt();
            lanczos::RitzPair {
                value,
                vector: v,
                residual,
            }
        })
        .collect()
}
