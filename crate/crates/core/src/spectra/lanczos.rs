//! Symmetric Lanczos with full reorthogonalization for the lowest eigenpairs
//! of one parity block, either directly on `H` or on the shift-inverted
//! operator `(H − σ)⁻¹`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::band::BandCholesky;
use super::tridiagonal::{lowest_vectors, ql_implicit};
use super::{SolverOptions, SpectraError};
use crate::model::SparseHamiltonian;

/// Converged (or best-effort) Ritz pair.
#[derive(Debug, Clone)]
pub(crate) struct RitzPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(v: &mut [f64]) {
    let nv = norm(v);
    v.iter_mut().for_each(|x| *x /= nv);
}

/// Orthonormal Krylov basis stored contiguously, one vector per `dim` slice.
struct Basis {
    dim: usize,
    data: Vec<f64>,
}

impl Basis {
    fn new(dim: usize, capacity: usize) -> Self {
        Self {
            dim,
            data: Vec::with_capacity(dim * capacity),
        }
    }

    fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    fn get(&self, j: usize) -> &[f64] {
        &self.data[j * self.dim..(j + 1) * self.dim]
    }

    fn push(&mut self, v: &[f64]) {
        self.data.extend_from_slice(v);
    }

    /// Removes the components of `w` along every stored vector. Classical
    /// Gram–Schmidt, repeated once when the norm drops by more than 1/√2.
    fn orthogonalize(&self, w: &mut [f64]) {
        for _ in 0..2 {
            let before = norm(w);
            let coeffs: Vec<f64> = (0..self.len()).map(|j| dot(self.get(j), w)).collect();
            for (j, c) in coeffs.iter().enumerate() {
                axpy(-c, self.get(j), w);
            }
            if norm(w) > std::f64::consts::FRAC_1_SQRT_2 * before {
                break;
            }
        }
    }

    /// `Σ_j coeffs[j] v_j`.
    fn combine(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (j, c) in coeffs.iter().enumerate() {
            axpy(*c, self.get(j), &mut out);
        }
        out
    }
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    normalize(&mut v);
    v
}

/// Which end of the operator spectrum is wanted.
#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Lowest,
    Highest,
}

/// Result of one Lanczos cycle.
struct Cycle {
    /// Ritz vectors ordered from the wanted end inwards.
    vectors: Vec<Vec<f64>>,
    converged: bool,
    matvecs: usize,
}

/// One Lanczos cycle of at most `max_steps` steps on `apply`. `accept`
/// decides convergence from a Ritz value and its residual estimate.
fn cycle(
    dim: usize,
    apply: &mut dyn FnMut(&[f64], &mut [f64]),
    start: &[f64],
    k: usize,
    end: End,
    max_steps: usize,
    breakdown: f64,
    accept: &dyn Fn(f64, f64) -> bool,
    rng: &mut ChaCha8Rng,
) -> Result<Cycle, SpectraError> {
    let max_steps = max_steps.max(k).min(dim);
    let mut basis = Basis::new(dim, max_steps);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    basis.push(start);
    let mut next_check = (k + 1).max(6);
    let pick = |m: usize, i: usize| match end {
        End::Lowest => i,
        End::Highest => m - 1 - i,
    };

    loop {
        let m = basis.len();
        apply(basis.get(m - 1), &mut w);
        let alpha = dot(basis.get(m - 1), &w);
        alphas.push(alpha);
        basis.orthogonalize(&mut w);
        let mut beta = norm(&w);

        let exhausted = m == dim;
        let mut invariant = beta < breakdown;
        if invariant && !exhausted && m < k {
            // Krylov space closed before k states were found: continue with a
            // fresh direction orthogonal to everything so far.
            let mut fresh = random_unit(rng, dim);
            basis.orthogonalize(&mut fresh);
            let nf = norm(&fresh);
            if nf < 1e-8 {
                return Err(SpectraError::DegenerateBreakdown { krylov_dim: m });
            }
            fresh.iter_mut().for_each(|x| *x /= nf);
            w.copy_from_slice(&fresh);
            beta = 0.0;
            invariant = false;
        } else if !invariant {
            w.iter_mut().for_each(|x| *x /= beta);
        }

        let last_step = m >= max_steps;
        if m >= k && (m >= next_check || invariant || exhausted || last_step) {
            next_check = m + (m / 8).max(4);
            let (vals, last) = ql_implicit(&alphas, &betas, &[m - 1]);
            let converged = invariant
                || exhausted
                || (0..k).all(|i| {
                    let j = pick(m, i);
                    accept(vals[j], (beta * last[0][j]).abs())
                });
            if converged || last_step {
                let (_, vectors) = match end {
                    End::Lowest => lowest_vectors(&alphas, &betas, k),
                    End::Highest => {
                        // highest of T are the lowest of −T
                        let neg: Vec<f64> = alphas.iter().map(|a| -a).collect();
                        let negb: Vec<f64> = betas.iter().map(|b| -b).collect();
                        lowest_vectors(&neg, &negb, k)
                    }
                };
                let vectors = vectors.iter().map(|z| basis.combine(z)).collect();
                return Ok(Cycle {
                    vectors,
                    converged,
                    matvecs: m,
                });
            }
        }
        betas.push(beta);
        basis.push(&w);
    }
}

/// Start vector: the supplied one when usable, else seeded random.
fn initial(dim: usize, start: Option<&[f64]>, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match start {
        Some(s) if s.len() == dim && norm(s) > 0.0 => {
            let mut v = s.to_vec();
            normalize(&mut v);
            v
        }
        _ => random_unit(rng, dim),
    }
}

fn rng_for(opts: &SolverOptions, dim: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ (dim as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Restarted Lanczos on `H` itself. When the basis reaches
/// `opts.max_krylov` without convergence the recurrence restarts from the sum
/// of the current `k` lowest Ritz vectors.
pub(crate) fn lanczos_lowest(
    h: &SparseHamiltonian,
    k: usize,
    opts: &SolverOptions,
    start: Option<&[f64]>,
) -> Result<Vec<RitzPair>, SpectraError> {
    let dim = h.dim;
    if k == 0 || k > dim {
        return Err(SpectraError::InvalidRequest(format!(
            "k = {k} not in [1, {dim}]"
        )));
    }
    let mut rng = rng_for(opts, dim);
    let breakdown = 1e-13 * h.norm_bound().max(1.0);
    let mut v = initial(dim, start, &mut rng);
    let mut apply = |x: &[f64], y: &mut [f64]| h.matvec_into(x, y);
    let tol = opts.tol;
    let mut used = 0;
    loop {
        let c = cycle(
            dim,
            &mut apply,
            &v,
            k,
            End::Lowest,
            opts.max_krylov,
            breakdown,
            &|_, r| r <= tol,
            &mut rng,
        )?;
        used += c.matvecs;
        if c.converged {
            return Ok(finish(h, c.vectors));
        }
        if used >= opts.max_matvecs {
            return Err(SpectraError::NoConvergence {
                max_iters: opts.max_matvecs,
            });
        }
        v = vec![0.0; dim];
        for r in &c.vectors {
            axpy(1.0, r, &mut v);
        }
        normalize(&mut v);
    }
}

/// Shift-and-invert Lanczos: a short Lanczos run on `H` locates the bottom
/// of the spectrum, `σ` is placed below it (checked by the Cholesky factor
/// existing), and Lanczos on `(H − σ)⁻¹` resolves the `k` largest
/// `1/(E − σ)`.
pub(crate) fn shift_invert_lowest(
    h: &SparseHamiltonian,
    k: usize,
    opts: &SolverOptions,
    start: Option<&[f64]>,
) -> Result<Vec<RitzPair>, SpectraError> {
    let dim = h.dim;
    if k == 0 || k > dim {
        return Err(SpectraError::InvalidRequest(format!(
            "k = {k} not in [1, {dim}]"
        )));
    }
    let mut rng = rng_for(opts, dim);
    let scale = h.norm_bound().max(1.0);
    let breakdown = 1e-13 * scale;
    let tol = opts.tol;
    let v0 = initial(dim, start, &mut rng);

    // Probe: a few plain steps give an upper bound θ on the ground energy and
    // a residual that sets the distance of σ below it.
    let probe_steps = (4 * k + 24).min(dim);
    let mut apply_h = |x: &[f64], y: &mut [f64]| h.matvec_into(x, y);
    let probe = cycle(
        dim,
        &mut apply_h,
        &v0,
        k,
        End::Lowest,
        probe_steps,
        breakdown,
        &|_, r| r <= tol,
        &mut rng,
    )?;
    let mut used = probe.matvecs;
    let probe_pairs = finish(h, probe.vectors);
    if probe.converged && probe_pairs.iter().all(|p| p.residual <= tol) {
        return Ok(probe_pairs);
    }
    let theta = probe_pairs[0].value;
    let mut offset = probe_pairs[0].residual.max(1e-6 * scale);
    let mut factor = None;
    for _ in 0..60 {
        if let Some(f) = BandCholesky::factor(h, theta - offset) {
            factor = Some((f, theta - offset));
            break;
        }
        offset *= 4.0;
    }
    let Some((chol, sigma)) = factor else {
        return Err(SpectraError::NoConvergence { max_iters: used });
    };

    let mut apply_inv = |x: &[f64], y: &mut [f64]| {
        y.copy_from_slice(x);
        chol.solve(y);
    };
    // ‖Hv − λv‖ ≤ ‖H − σ‖ ‖r‖ / μ for a Ritz pair (μ, v) of (H − σ)⁻¹.
    let h_shift = scale + sigma.abs();
    let accept = |mu: f64, r: f64| mu > 0.0 && r * h_shift / mu <= 0.1 * tol;
    let breakdown_inv = 1e-13 / offset.max(1e-300);
    let mut v = vec![0.0; dim];
    for p in &probe_pairs {
        axpy(1.0, &p.vector, &mut v);
    }
    axpy(1.0, &v0, &mut v);
    normalize(&mut v);
    loop {
        let c = cycle(
            dim,
            &mut apply_inv,
            &v,
            k,
            End::Highest,
            opts.max_krylov,
            breakdown_inv,
            &accept,
            &mut rng,
        )?;
        used += c.matvecs;
        let pairs = finish(h, c.vectors);
        if c.converged && pairs.iter().all(|p| p.residual <= tol) {
            let mut pairs = pairs;
            pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
            return Ok(pairs);
        }
        if used >= opts.max_matvecs {
            return Err(SpectraError::NoConvergence {
                max_iters: opts.max_matvecs,
            });
        }
        v = vec![0.0; dim];
        for p in &pairs {
            axpy(1.0, &p.vector, &mut v);
        }
        normalize(&mut v);
    }
}

/// Normalizes the Ritz vectors and replaces the Ritz values by Rayleigh
/// quotients with explicit residuals.
fn finish(h: &SparseHamiltonian, ritz: Vec<Vec<f64>>) -> Vec<RitzPair> {
    let mut hv = vec![0.0; h.dim];
    ritz.into_iter()
        .map(|mut v| {
            normalize(&mut v);
            h.matvec_into(&v, &mut hv);
            let value = dot(&v, &hv);
            axpy(-value, &v, &mut hv);
            RitzPair {
                value,
                residual: norm(&hv),
                vector: v,
            }
        })
        .collect()
}
