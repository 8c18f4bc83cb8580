use serde::{Deserialize, Serialize};

use super::{Eigenpair, SpectraError, SpectrumResult};
use crate::model::{ModelParams, Sector};

/// Ground-state expectation values and the lowest excitation energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub e0: f64,
    /// `E₁ − E₀` over the merged even/odd spectrum.
    pub epsilon: f64,
    /// `⟨a†a⟩`.
    pub nph_total: f64,
    /// `⟨a†a⟩ / N`.
    pub nph_density: f64,
    /// `√(⟨x²⟩ − ⟨x⟩²)` with `x = a + a†`; equals 1 in the vacuum.
    pub delta_x: f64,
    /// `⟨x⟩`, zero in any parity eigenstate.
    pub x_mean: f64,
    /// `⟨J_z⟩ / N`.
    pub jz_density: f64,
}

/// Observables of the global ground state of `spec`.
pub fn observables(
    spec: &SpectrumResult,
    params: &ModelParams,
) -> Result<Observables, SpectraError> {
    let has = |s: Sector| spec.pairs.iter().any(|p| p.sector == s);
    if spec.pairs.len() < 2 || !has(Sector::Even) || !has(Sector::Odd) {
        return Err(SpectraError::InsufficientStates(format!(
            "{} pair(s) in sectors {:?}",
            spec.pairs.len(),
            spec.sector_labels()
        )));
    }
    if params.n_atoms != spec.n_atoms {
        return Err(SpectraError::InvalidRequest(format!(
            "spectrum has N = {} but parameters have N = {}",
            spec.n_atoms, params.n_atoms
        )));
    }
    let ground = &spec.pairs[0];
    let m = moments(spec, ground);
    let nf = spec.n_atoms as f64;
    Ok(Observables {
        e0: ground.energy,
        epsilon: spec.pairs[1].energy - ground.energy,
        nph_total: m.n,
        nph_density: m.n / nf,
        delta_x: (m.x2 - m.x * m.x).max(0.0).sqrt(),
        x_mean: m.x,
        jz_density: m.jz / nf,
    })
}

pub(crate) struct Moments {
    pub n: f64,
    pub x: f64,
    pub x2: f64,
    pub jz: f64,
}

pub(crate) fn moments(spec: &SpectrumResult, pair: &Eigenpair) -> Moments {
    let basis = spec.basis_of(pair);
    let c = &pair.vector;
    let half = spec.n_atoms as f64 / 2.0;
    let (mut n_avg, mut x, mut x2, mut jz) = (0.0, 0.0, 0.0, 0.0);
    for (i, (n, k)) in basis.states().into_iter().enumerate() {
        let p = c[i] * c[i];
        let nn = n as f64;
        n_avg += p * nn;
        jz += p * (k as f64 - half);
        x2 += p * (2.0 * nn + 1.0);
        if let Some(j) = basis.index_of(n + 1, k) {
            x += 2.0 * c[i] * c[j] * (nn + 1.0).sqrt();
        }
        if let Some(j) = basis.index_of(n + 2, k) {
            x2 += 2.0 * c[i] * c[j] * ((nn + 1.0) * (nn + 2.0)).sqrt();
        }
    }
    Moments {
        n: n_avg,
        x,
        x2,
        jz,
    }
}

/// Probability of the state in the top 10% of photon levels.
pub(crate) fn tail_probability(spec: &SpectrumResult, pair: &Eigenpair) -> f64 {
    let basis = spec.basis_of(pair);
    let levels = basis.n_max + 1;
    let top = levels.div_ceil(10);
    let first = levels - top;
    basis
        .states()
        .into_iter()
        .zip(&pair.vector)
        .filter(|((n, _), _)| *n >= first)
        .map(|(_, c)| c * c)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hamiltonian, BasisSpec};
    use crate::spectra::lowest_eigenpairs;

    #[test]
    fn vacuum_values() {
        for kappa in [0.0, 1.5] {
            let p = ModelParams::new(1.0, 0.5, 0.0, 2.5, 0.3, kappa, 6);
            let h = build_hamiltonian(&p, &BasisSpec::new(6, 8, Sector::Full)).unwrap();
            let s = lowest_eigenpairs(&h, 2, 1e-10).unwrap();
            let o = observables(&s, &p).unwrap();
            assert_eq!(o.nph_total, 0.0);
            assert!((o.jz_density + 0.5).abs() < 1e-14);
            assert!((o.delta_x - 1.0).abs() < 1e-14);
            assert!((o.e0 + 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_state_has_zero_mean_field() {
        let p = ModelParams::new(1.0, 0.5, 0.4, 2.5, 0.5, 1.2, 6);
        let h = build_hamiltonian(&p, &BasisSpec::new(6, 30, Sector::Full)).unwrap();
        let s = lowest_eigenpairs(&h, 2, 1e-10).unwrap();
        let o = observables(&s, &p).unwrap();
        assert!(o.x_mean.abs() < 1e-10);
        assert!(o.nph_total > 0.0 && o.delta_x > 1.0 && o.epsilon >= 0.0);
    }

    #[test]
    fn needs_both_sectors() {
        let p = ModelParams::new(1.0, 0.5, 0.4, 2.5, 0.5, 1.2, 4);
        let h = build_hamiltonian(&p, &BasisSpec::new(4, 10, Sector::Even)).unwrap();
        let s = lowest_eigenpairs(&h, 3, 1e-10).unwrap();
        assert!(matches!(
            observables(&s, &p),
            Err(SpectraError::InsufficientStates(_))
        ));
    }
}
