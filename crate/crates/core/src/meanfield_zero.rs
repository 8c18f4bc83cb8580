//! Zero-temperature mean-field theory.
//!
//! With `a → a + √N α` and Holstein–Primakoff atoms displaced by `√N ς`, the
//! energy per atom is
//!
//! ```text
//! e(α, ς) = (ω − U/2)α² + Uα²ς² + Δ(ς² − 1/2) − 2g(1+τ)ας√(1−ς²) + 4κ(g²/Δ)α²
//! ```
//!
//! The sign of the coupling term is the one for which the minimum has α and ς
//! of the same sign, so both are reported non-negative.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelError, ModelParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeanFieldError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unphysical varsigma: ς² = {0} > 1")]
    UnphysicalVarsigma(f64),
    #[error("closed form gives ς² = {closed_form} but the minimizer finds α = {}, ς = {}", .minimizer.alpha, .minimizer.varsigma)]
    ClosedFormBranch {
        closed_form: f64,
        minimizer: Minimum,
    },
    #[error("energy functional is unbounded below: {0}")]
    UnboundedBelow(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Normal,
    Superradiant,
}

/// Signs of the two factors in the critical-coupling formula and the
/// interaction regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    /// `Δω − ΔU/2 > 0`.
    pub numerator_positive: bool,
    /// `(τ+1)² − 4κ > 0`.
    pub denominator_positive: bool,
    /// `U < 2ω`; above it the Stark term is no longer bounded by the field.
    pub u_below_two_omega: bool,
    /// `U ≤ −2ω`; reported for information only.
    pub beyond_rabi_stark_continuum: bool,
}

impl Validity {
    pub fn of(p: &ModelParams) -> Self {
        let (num, den) = gc0_parts(p);
        Self {
            numerator_positive: num > 0.0,
            denominator_positive: den > 0.0,
            u_below_two_omega: p.u < 2.0 * p.omega,
            beyond_rabi_stark_continuum: p.u <= -2.0 * p.omega,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSolutionZero {
    pub alpha: f64,
    pub varsigma: f64,
    pub energy_per_atom: f64,
    pub phase: Phase,
    pub validity: Validity,
}

/// Result of a critical-coupling formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Criticality {
    Critical(f64),
    NoTransition(NoTransition),
}

/// The formula `g_c = √(numerator / denominator)` failed its validity
/// conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoTransition {
    pub numerator: f64,
    pub denominator: f64,
}

impl NoTransition {
    /// Both conditions fail; the formula still gives a real number but the
    /// state above it is not a superradiant minimum.
    pub fn is_unstable(&self) -> bool {
        self.numerator < 0.0 && self.denominator < 0.0
    }

    /// `√(numerator / denominator)` whenever that is real.
    pub fn formula_value(&self) -> Option<f64> {
        let r = self.numerator / self.denominator;
        (r.is_finite() && r >= 0.0).then(|| r.sqrt())
    }

    pub fn reason(&self) -> String {
        let mut why = Vec::new();
        if !(self.numerator > 0.0) {
            why.push(format!("numerator {} <= 0", self.numerator));
        }
        if !(self.denominator > 0.0) {
            why.push(format!("denominator {} <= 0", self.denominator));
        }
        if self.is_unstable() {
            why.push("unstable".into());
        }
        why.join(", ")
    }
}

impl Criticality {
    pub fn value(&self) -> Option<f64> {
        match self {
            Criticality::Critical(g) => Some(*g),
            Criticality::NoTransition(_) => None,
        }
    }
}

fn gc0_parts(p: &ModelParams) -> (f64, f64) {
    let num = p.delta * p.omega - p.delta * p.u / 2.0;
    let den = (p.tau + 1.0).powi(2) - 4.0 * p.kappa;
    (num, den)
}

/// `e(α, ς)` per atom.
pub fn energy_per_atom(alpha: f64, varsigma: f64, p: &ModelParams) -> Result<f64, MeanFieldError> {
    let s = varsigma * varsigma;
    if s > 1.0 {
        return Err(MeanFieldError::UnphysicalVarsigma(s));
    }
    Ok(energy_unchecked(alpha, varsigma, p))
}

// The gauge α → −α absorbs the sign of g′.
fn energy_unchecked(alpha: f64, varsigma: f64, p: &ModelParams) -> f64 {
    let s = varsigma * varsigma;
    let a2 = alpha * alpha;
    (p.omega - p.u / 2.0) * a2 + p.u * a2 * s + p.delta * (s - 0.5)
        - 2.0 * p.g_prime().abs() * alpha * varsigma * (1.0 - s).max(0.0).sqrt()
        + 4.0 * p.a_square() * a2
}

/// `g_c0 = √(Δω − ΔU/2) / √((τ+1)² − 4κ)`, valid when both radicands are
/// positive.
pub fn critical_coupling_zero(p: &ModelParams) -> Result<Criticality, MeanFieldError> {
    p.validate()?;
    let (num, den) = gc0_parts(p);
    if num > 0.0 && den > 0.0 {
        Ok(Criticality::Critical(num.sqrt() / den.sqrt()))
    } else {
        Ok(Criticality::NoTransition(NoTransition {
            numerator: num,
            denominator: den,
        }))
    }
}

/// Minimizes the energy with the closed-form order parameters.
///
/// Eliminating α leaves `e(s) = Δ(s − 1/2) − g′²s(1−s)/(A + Us)` with `s = ς²`
/// and `A = ω − U/2 + 4κg²/Δ`, whose stationary point is
/// `s = (B − A)/U`, `B = √(g′²A(A+U)/(g′² + ΔU))`. It is evaluated in the
/// cancellation-free form `A(g′² − AΔ) / ((g′² + ΔU)(A + B))`, which also
/// covers `U = 0`.
pub fn order_parameters(p: &ModelParams) -> Result<MeanFieldSolutionZero, MeanFieldError> {
    p.validate()?;
    let validity = Validity::of(p);
    let a = p.omega - p.u / 2.0 + 4.0 * p.a_square();
    if !(a > 0.0 && a + p.u > 0.0) {
        return Err(MeanFieldError::UnboundedBelow(format!(
            "photon stiffness ω − U/2 + 4D = {a}, ω + U/2 + 4D = {}",
            a + p.u
        )));
    }
    let normal = MeanFieldSolutionZero {
        alpha: 0.0,
        varsigma: 0.0,
        energy_per_atom: -p.delta / 2.0,
        phase: Phase::Normal,
        validity,
    };
    let gp2 = p.g_prime().powi(2);
    if gp2 <= a * p.delta {
        return Ok(normal);
    }
    let c = gp2 + p.delta * p.u;
    let b = (gp2 * a * (a + p.u) / c).sqrt();
    let s = a * (gp2 - a * p.delta) / (c * (a + b));
    if !(s > 0.0 && s < 1.0) {
        let m = minimize_energy(p)?;
        if m.alpha > 1e-6 {
            return Err(MeanFieldError::ClosedFormBranch {
                closed_form: s,
                minimizer: m,
            });
        }
        return Ok(normal);
    }
    let varsigma = s.sqrt();
    let alpha = p.g_prime().abs() * varsigma * (1.0 - s).sqrt() / (a + p.u * s);
    Ok(MeanFieldSolutionZero {
        alpha,
        varsigma,
        energy_per_atom: energy_unchecked(alpha, varsigma, p),
        phase: Phase::Superradiant,
        validity,
    })
}

/// A minimum found by [`minimize_energy`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub alpha: f64,
    pub varsigma: f64,
    pub energy: f64,
}

/// Brute-force minimization of [`energy_per_atom`] over `α ≥ 0`,
/// `0 ≤ ς ≤ 1`: a 101×101 grid followed by Nelder–Mead refinement. The α box
/// starts at `[0, 3]` and is doubled while the grid minimum sits on its far
/// edge. While the minimum sits at `α = 0` the box shrinks tenfold, up to
/// `10⁻⁸`, so that a large photon stiffness cannot hide a small condensate.
pub fn minimize_energy(p: &ModelParams) -> Result<Minimum, MeanFieldError> {
    p.validate()?;
    let g = p.g.abs();
    let p = &ModelParams { g, ..*p };
    let f = |x: [f64; 2]| energy_unchecked(x[0].max(0.0), x[1].clamp(0.0, 1.0), p);
    let mut alpha_max = 3.0;
    let mut shrinks = 0;
    for _ in 0..24 {
        let steps = 100;
        let mut best = ([0.0, 0.0], f([0.0, 0.0]));
        for i in 0..=steps {
            for j in 0..=steps {
                let x = [alpha_max * i as f64 / steps as f64, j as f64 / steps as f64];
                let e = f(x);
                if e < best.1 {
                    best = (x, e);
                }
            }
        }
        if best.0[0] >= alpha_max && shrinks == 0 {
            alpha_max *= 2.0;
            continue;
        }
        if best.0[0] == 0.0 && shrinks < 8 {
            alpha_max /= 10.0;
            shrinks += 1;
            continue;
        }
        let h = [alpha_max / steps as f64, 1.0 / steps as f64];
        let x = nelder_mead(f, best.0, h, 1e-10);
        let (alpha, varsigma) = (x[0].max(0.0), x[1].clamp(0.0, 1.0));
        return Ok(Minimum {
            alpha,
            varsigma,
            energy: f([alpha, varsigma]),
        });
    }
    Err(MeanFieldError::UnboundedBelow(format!(
        "grid minimum still on the edge at α = {alpha_max}"
    )))
}

/// Nelder–Mead in two variables, stopped when the simplex is smaller than
/// `xtol` in every coordinate.
fn nelder_mead(f: impl Fn([f64; 2]) -> f64, x0: [f64; 2], step: [f64; 2], xtol: f64) -> [f64; 2] {
    let mut s = [x0, [x0[0] + step[0], x0[1]], [x0[0], x0[1] + step[1]]];
    let mut fs = s.map(&f);
    for _ in 0..10_000 {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| fs[i].total_cmp(&fs[j]));
        s = idx.map(|i| s[i]);
        fs = idx.map(|i| fs[i]);
        let size = (0..2).map(|d| (s[1][d] - s[0][d]).abs().max((s[2][d] - s[0][d]).abs()));
        if size.fold(0.0, f64::max) < xtol {
            break;
        }
        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let along = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let xr = along(-1.0);
        let fr = f(xr);
        if fr < fs[0] {
            let xe = along(-2.0);
            let fe = f(xe);
            (s[2], fs[2]) = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < fs[1] {
            (s[2], fs[2]) = (xr, fr);
        } else {
            let xc = if fr < fs[2] { along(-0.5) } else { along(0.5) };
            let fc = f(xc);
            if fc < fs[2].min(fr) {
                (s[2], fs[2]) = (xc, fc);
            } else {
                for i in 1..3 {
                    s[i] = [(s[i][0] + s[0][0]) / 2.0, (s[i][1] + s[0][1]) / 2.0];
                    fs[i] = f(s[i]);
                }
            }
        }
    }
    s[0]
}
