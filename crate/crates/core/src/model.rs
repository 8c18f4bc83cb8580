//! Model parameters, the truncated spin ⊗ Fock basis and sparse assembly of
//!
//! ```text
//! H = ω a†a + Δ J_z + (g/√N)(a†J₋ + aJ₊) + (gτ/√N)(a†J₊ + aJ₋)
//!     + (U/N) a†a J_z + D (a† + a)²,      D = κ g² / Δ
//! ```
//!
//! States are labelled `(n, k)` with photon number `n ∈ [0, n_max]` and spin
//! ladder index `k = m + N/2 ∈ [0, N]` inside the maximal collective-spin
//! multiplet `j = N/2`. With this labelling
//!
//! ```text
//! J₊ |k⟩ = √((k + 1)(N − k)) |k + 1⟩
//! J₋ |k⟩ = √(k (N − k + 1))  |k − 1⟩
//! J_z|k⟩ = (k − N/2)         |k⟩
//! ```
//!
//! which is `√(j(j+1) − m(m±1))` rewritten in `k`. Every matrix element is
//! real and the Hamiltonian conserves the parity `(−1)^(n+k)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest matrix dimension [`build_hamiltonian`] accepts.
pub const DEFAULT_MAX_DIM: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("basis dimension {dim} exceeds the cap of {cap}")]
    DimensionOverflow { dim: usize, cap: usize },
    #[error("sector mismatch: {0}")]
    SectorMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Physical parameters of the anisotropic Dicke–Stark model. Energies are in
/// the same units as `omega` (usually `omega = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Cavity frequency ω.
    pub omega: f64,
    /// Atomic transition frequency Δ.
    pub delta: f64,
    /// Rotating-wave coupling g.
    pub g: f64,
    /// Ratio τ of counter-rotating to rotating coupling.
    pub tau: f64,
    /// Stark coupling U.
    pub u: f64,
    /// A-square coefficient κ, with D = κ g² / Δ.
    pub kappa: f64,
    /// Number of atoms N.
    pub n_atoms: usize,
}

/// Non-fatal conditions worth reporting alongside results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParamWarning {
    /// `U ≥ 2ω`: the photon ladder is unbounded below and ED cannot converge.
    ContinuumRegime,
    /// `U ≤ −2ω`: outside the single-atom Rabi–Stark bounded window.
    BeyondRabiStarkContinuum,
    /// `κ < 1`: the TRK sum rule is not respected.
    BelowTrkBound,
}

impl ModelParams {
    pub fn new(
        omega: f64,
        delta: f64,
        g: f64,
        tau: f64,
        u: f64,
        kappa: f64,
        n_atoms: usize,
    ) -> Self {
        Self {
            omega,
            delta,
            g,
            tau,
            u,
            kappa,
            n_atoms,
        }
    }

    /// Returns a copy with a different coupling `g`.
    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn with_n_atoms(mut self, n_atoms: usize) -> Self {
        self.n_atoms = n_atoms;
        self
    }

    /// A-square prefactor `D = κ g² / Δ`.
    pub fn a_square(&self) -> f64 {
        self.kappa * self.g * self.g / self.delta
    }

    /// Effective coupling `g′ = g (1 + τ)`.
    pub fn g_prime(&self) -> f64 {
        self.g * (1.0 + self.tau)
    }

    /// Checks the hard invariants and returns the soft warnings.
    pub fn validate(&self) -> Result<Vec<ParamWarning>, ModelError> {
        let finite = [self.omega, self.delta, self.g, self.tau, self.u, self.kappa]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(ModelError::InvalidParams(
                "parameters must be finite".into(),
            ));
        }
        if self.omega <= 0.0 {
            return Err(ModelError::InvalidParams(format!(
                "omega must be > 0, got {}",
                self.omega
            )));
        }
        if self.delta <= 0.0 {
            return Err(ModelError::InvalidParams(format!(
                "delta must be > 0, got {}",
                self.delta
            )));
        }
        if self.kappa < 0.0 {
            return Err(ModelError::InvalidParams(format!(
                "kappa must be >= 0, got {}",
                self.kappa
            )));
        }
        if self.n_atoms == 0 {
            return Err(ModelError::InvalidParams("n_atoms must be >= 1".into()));
        }
        Ok(self.warnings())
    }

    pub fn warnings(&self) -> Vec<ParamWarning> {
        let mut out = Vec::new();
        if self.u >= 2.0 * self.omega {
            out.push(ParamWarning::ContinuumRegime);
        }
        if self.u <= -2.0 * self.omega {
            out.push(ParamWarning::BeyondRabiStarkContinuum);
        }
        if self.kappa < 1.0 {
            out.push(ParamWarning::BelowTrkBound);
        }
        out
    }
}

/// Z₂ parity `(−1)^(n+k)` of the basis state `(n, k)`.
pub fn parity_of(n: usize, k: usize) -> i8 {
    if (n + k) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Parity selector for the truncated basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    Even,
    Odd,
    Full,
}

impl Sector {
    /// Whether a state of parity `p` belongs to this sector.
    pub fn contains(self, p: i8) -> bool {
        match self {
            Sector::Even => p == 1,
            Sector::Odd => p == -1,
            Sector::Full => true,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sector::Even => "even",
            Sector::Odd => "odd",
            Sector::Full => "full",
        };
        f.write_str(s)
    }
}

/// Truncated basis `{(n, k)}`, ordered photon-number major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisSpec {
    pub n_atoms: usize,
    pub n_max: usize,
    pub sector: Sector,
}

impl BasisSpec {
    pub fn new(n_atoms: usize, n_max: usize, sector: Sector) -> Self {
        Self {
            n_atoms,
            n_max,
            sector,
        }
    }

    /// Dimension `(n_max + 1)(N + 1)` of the unrestricted basis.
    pub fn full_dim(&self) -> usize {
        (self.n_max + 1) * (self.n_atoms + 1)
    }

    /// Smallest admissible `k` for photon number `n` and how many `k` values
    /// (stride 2 inside a sector) there are.
    fn k_run(&self, n: usize) -> (usize, usize) {
        let nk = self.n_atoms;
        match self.sector {
            Sector::Full => (0, nk + 1),
            Sector::Even | Sector::Odd => {
                let k0 = if self.sector == Sector::Even {
                    n % 2
                } else {
                    (n + 1) % 2
                };
                let count = if k0 > nk { 0 } else { (nk - k0) / 2 + 1 };
                (k0, count)
            }
        }
    }

    fn offset(&self, n: usize) -> usize {
        match self.sector {
            Sector::Full => n * (self.n_atoms + 1),
            _ => {
                let c0 = self.k_run(0).1;
                let c1 = self.k_run(1).1;
                (n / 2) * (c0 + c1) + (n % 2) * c0
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.offset(self.n_max + 1)
    }

    /// Position of `(n, k)` in this basis, or `None` if it is truncated away
    /// or lies in the other parity sector.
    pub fn index_of(&self, n: usize, k: usize) -> Option<usize> {
        if n > self.n_max || k > self.n_atoms || !self.sector.contains(parity_of(n, k)) {
            return None;
        }
        let (k0, _) = self.k_run(n);
        let stride = if self.sector == Sector::Full { 1 } else { 2 };
        Some(self.offset(n) + (k - k0) / stride)
    }

    /// All `(n, k)` labels in basis order.
    pub fn states(&self) -> Vec<(usize, usize)> {
        let stride = if self.sector == Sector::Full { 1 } else { 2 };
        let mut out = Vec::with_capacity(self.dim());
        for n in 0..=self.n_max {
            let (k0, count) = self.k_run(n);
            out.extend((0..count).map(|i| (n, k0 + i * stride)));
        }
        out
    }

    pub fn with_sector(self, sector: Sector) -> Self {
        Self { sector, ..self }
    }
}

/// Real symmetric sparse matrix stored as its upper triangle (diagonal
/// included), entries sorted by `(row, col)`.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
    pub basis: BasisSpec,
}

impl SparseHamiltonian {
    /// `y = H x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, ModelError> {
        if x.len() != self.dim {
            return Err(ModelError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.dim];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// Unchecked kernel behind [`matvec`](Self::matvec); `y` is overwritten.
    pub(crate) fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for &(i, j, a) in &self.entries {
            y[i] += a * x[j];
            if i != j {
                y[j] += a * x[i];
            }
        }
    }

    /// Diagonal of the matrix.
    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for &(i, j, a) in &self.entries {
            if i == j {
                d[i] += a;
            }
        }
        d
    }

    /// Dense row-major copy. Only meant for small matrices.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut m = vec![0.0; n * n];
        for &(i, j, a) in &self.entries {
            m[i * n + j] += a;
            if i != j {
                m[j * n + i] += a;
            }
        }
        m
    }

    /// Upper bound on the spectral radius (maximum absolute row sum).
    pub fn norm_bound(&self) -> f64 {
        let mut rows = vec![0.0; self.dim];
        for &(i, j, a) in &self.entries {
            rows[i] += a.abs();
            if i != j {
                rows[j] += a.abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Splits a full-basis matrix into one parity block.
    pub fn restrict(&self, sector: Sector) -> Result<SparseHamiltonian, ModelError> {
        if self.basis.sector == sector {
            return Ok(self.clone());
        }
        if self.basis.sector != Sector::Full || sector == Sector::Full {
            return Err(ModelError::SectorMismatch(format!(
                "cannot restrict a {} block to {}",
                self.basis.sector, sector
            )));
        }
        let target = self.basis.with_sector(sector);
        let states = self.basis.states();
        let map: Vec<Option<usize>> = states.iter().map(|&(n, k)| target.index_of(n, k)).collect();
        let mut entries = Vec::new();
        for &(i, j, a) in &self.entries {
            match (map[i], map[j]) {
                (Some(p), Some(q)) => entries.push((p, q, a)),
                (None, None) => {}
                _ => {
                    return Err(ModelError::SectorMismatch(format!(
                        "entry ({i}, {j}) couples opposite parities"
                    )))
                }
            }
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Ok(SparseHamiltonian {
            dim: target.dim(),
            entries,
            basis: target,
        })
    }
}

/// Assembles the Hamiltonian on `basis`, which may be a single parity block.
pub fn build_hamiltonian(
    params: &ModelParams,
    basis: &BasisSpec,
) -> Result<SparseHamiltonian, ModelError> {
    build_hamiltonian_capped(params, basis, DEFAULT_MAX_DIM)
}

pub fn build_hamiltonian_capped(
    params: &ModelParams,
    basis: &BasisSpec,
    max_dim: usize,
) -> Result<SparseHamiltonian, ModelError> {
    params.validate()?;
    if basis.n_atoms != params.n_atoms {
        return Err(ModelError::SectorMismatch(format!(
            "basis has N = {} but parameters have N = {}",
            basis.n_atoms, params.n_atoms
        )));
    }
    if basis.n_max < 1 {
        return Err(ModelError::InvalidParams("n_max must be >= 1".into()));
    }
    let full = basis
        .n_max
        .checked_add(1)
        .and_then(|a| a.checked_mul(basis.n_atoms + 1))
        .unwrap_or(usize::MAX);
    if full > max_dim {
        return Err(ModelError::DimensionOverflow {
            dim: full,
            cap: max_dim,
        });
    }

    let nat = params.n_atoms;
    let nf = nat as f64;
    let sqrt_n = nf.sqrt();
    let rw = params.g / sqrt_n;
    let crw = params.g * params.tau / sqrt_n;
    let stark = params.u / nf;
    let d = params.a_square();

    let states = basis.states();
    let mut entries = Vec::with_capacity(states.len() * 4);
    for (row, &(n, k)) in states.iter().enumerate() {
        let nn = n as f64;
        let m = k as f64 - nf / 2.0;
        let diag = params.omega * nn + params.delta * m + stark * nn * m + d * (2.0 * nn + 1.0);
        entries.push((row, row, diag));

        let photon_up = (nn + 1.0).sqrt();
        // a†J₋ : (n, k) -> (n + 1, k − 1)
        if k >= 1 {
            if let Some(col) = basis.index_of(n + 1, k - 1) {
                let w = rw * photon_up * ((k * (nat - k + 1)) as f64).sqrt();
                if w != 0.0 {
                    entries.push((row, col, w));
                }
            }
        }
        // a†J₊ : (n, k) -> (n + 1, k + 1)
        if let Some(col) = basis.index_of(n + 1, k + 1) {
            let w = crw * photon_up * (((k + 1) * (nat - k)) as f64).sqrt();
            if w != 0.0 {
                entries.push((row, col, w));
            }
        }
        // D a†² : (n, k) -> (n + 2, k)
        if let Some(col) = basis.index_of(n + 2, k) {
            let w = d * ((nn + 1.0) * (nn + 2.0)).sqrt();
            if w != 0.0 {
                entries.push((row, col, w));
            }
        }
    }
    entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    Ok(SparseHamiltonian {
        dim: states.len(),
        entries,
        basis: *basis,
    })
}
