//! Photon-cutoff convergence ladder.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::observables::tail_probability;
use super::{solve_blocks, SolverOptions, SpectraError, SpectrumResult};
use crate::model::{build_hamiltonian_capped, BasisSpec, ModelParams, Sector, DEFAULT_MAX_DIM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffOptions {
    /// First cutoff that may be accepted. One smaller probe rung,
    /// `⌈n_start / growth⌉`, is solved first to provide the energy reference.
    pub n_start: usize,
    /// Geometric growth factor of the ladder.
    pub growth: f64,
    /// Largest cutoff tried before giving up.
    pub n_max_cap: usize,
    pub max_dim: usize,
    pub solver: SolverOptions,
}

impl Default for CutoffOptions {
    fn default() -> Self {
        Self {
            n_start: 16,
            growth: 1.5,
            n_max_cap: 600,
            max_dim: DEFAULT_MAX_DIM,
            solver: SolverOptions::default(),
        }
    }
}

/// One rung of the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffStep {
    pub n_max: usize,
    pub e0: f64,
    pub tail: f64,
}

/// Raises the photon cutoff until the ground state has less than `tail_tol`
/// probability in the top 10% of photon levels and its energy moved by less
/// than `energy_tol` since the previous rung. `k` eigenpairs are kept per
/// parity sector.
pub fn converge_cutoff(
    params: &ModelParams,
    k: usize,
    tail_tol: f64,
    energy_tol: f64,
) -> Result<SpectrumResult, SpectraError> {
    converge_cutoff_with(params, k, tail_tol, energy_tol, &CutoffOptions::default())
}

pub fn converge_cutoff_with(
    params: &ModelParams,
    k: usize,
    tail_tol: f64,
    energy_tol: f64,
    opts: &CutoffOptions,
) -> Result<SpectrumResult, SpectraError> {
    if !(tail_tol > 0.0 && energy_tol > 0.0) {
        return Err(SpectraError::InvalidRequest(
            "tail_tol and energy_tol must be > 0".into(),
        ));
    }
    if !(opts.growth > 1.0) || opts.n_start < 2 {
        return Err(SpectraError::InvalidRequest(
            "need growth > 1 and n_start >= 2".into(),
        ));
    }
    let grow = |n: usize| ((n as f64 * opts.growth).ceil() as usize).max(n + 1);
    let mut n_max =
        ((opts.n_start as f64 / opts.growth).ceil() as usize).clamp(1, opts.n_start - 1);
    let mut trail: Vec<CutoffStep> = Vec::new();
    let mut starts: Option<Vec<(Sector, Vec<f64>)>> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.solver.seed);

    loop {
        let basis = BasisSpec::new(params.n_atoms, n_max, Sector::Full);
        let h = build_hamiltonian_capped(params, &basis, opts.max_dim)?;
        let spec = solve_blocks(&h, k, &opts.solver, starts.as_deref())?;
        let ground = &spec.pairs[0];
        let step = CutoffStep {
            n_max,
            e0: ground.energy,
            tail: tail_probability(&spec, ground),
        };
        let accepted = n_max >= opts.n_start
            && step.tail < tail_tol
            && trail
                .last()
                .is_some_and(|prev| (step.e0 - prev.e0).abs() < energy_tol);
        trail.push(step);
        if accepted {
            return Ok(spec);
        }

        let next = if n_max < opts.n_start {
            opts.n_start
        } else {
            grow(n_max)
        };
        if next > opts.n_max_cap {
            return Err(SpectraError::CutoffRunaway {
                cap: opts.n_max_cap,
                trail,
            });
        }
        // Basis order is photon-major, so a vector on the smaller cutoff is a
        // prefix of the same vector on the larger one.
        let next_basis = BasisSpec::new(params.n_atoms, next, Sector::Full);
        let mut warm = Vec::new();
        for sector in [Sector::Even, Sector::Odd] {
            let dim = next_basis.with_sector(sector).dim();
            let mut v: Vec<f64> = (0..dim)
                .map(|_| 1e-6 * rng.random_range(-1.0..1.0))
                .collect();
            for p in spec.pairs.iter().filter(|p| p.sector == sector) {
                for (vi, ci) in v.iter_mut().zip(&p.vector) {
                    *vi += ci;
                }
            }
            warm.push((sector, v));
        }
        starts = Some(warm);
        n_max = next;
    }
}
