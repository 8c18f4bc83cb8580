//! Finite-temperature mean-field theory in the intensive amplitude
//! `ᾱ = α/√N`.
//!
//! Each atom sees the 2×2 Hamiltonian obtained by replacing the field with a
//! c-number; its eigenvalues are `±E` with
//! `E = √(|gᾱ + gτᾱ*|² + (Δ/2 + U|ᾱ|²/2)²)`, and the free energy per atom is
//! `f(ᾱ) = (ω + 4κg²/Δ)|ᾱ|² − T ln(2 cosh(E/T))`.

use nalgebra::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::meanfield_zero::{self, Criticality, MeanFieldError, NoTransition};
use crate::model::{ModelError, ModelParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermalError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    MeanField(#[from] MeanFieldError),
    #[error("temperature must be finite and >= 0, got {0}")]
    InvalidTemperature(f64),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("no stationary point bracketed in (0, {alpha_max}] although g = {g} > g_c = {g_c}")]
    RootNotBracketed { g: f64, g_c: f64, alpha_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalPoint {
    pub params: ModelParams,
    /// `k_B T` in units of ω. Zero means the ground state.
    pub temperature: f64,
}

impl ThermalPoint {
    pub fn new(params: ModelParams, temperature: f64) -> Result<Self, ThermalError> {
        params.validate()?;
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(ThermalError::InvalidTemperature(temperature));
        }
        Ok(Self {
            params,
            temperature,
        })
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    /// `tanh(βΔ/2)`, 1 at zero temperature.
    fn t(&self) -> f64 {
        if self.temperature == 0.0 {
            1.0
        } else {
            (self.params.delta / (2.0 * self.temperature)).tanh()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThermalPhase {
    Normal,
    Superradiant,
    /// The critical-coupling formula fails both of its conditions, or the
    /// free energy is unbounded below along the real axis.
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalSolution {
    pub alpha_intensive: f64,
    pub free_energy_per_atom: f64,
    pub phase: ThermalPhase,
    pub g_c: Option<f64>,
    pub t_c: Option<f64>,
}

/// `ln(2 cosh z)` without overflow.
fn ln_2cosh(z: f64) -> f64 {
    let a = z.abs();
    a + (-2.0 * a).exp().ln_1p()
}

fn level(p: &ModelParams, alpha: Complex<f64>) -> f64 {
    let c = alpha * p.g + alpha.conj() * (p.g * p.tau);
    let n = alpha.norm_sqr();
    (c.norm_sqr() + (p.delta / 2.0 + p.u * n / 2.0).powi(2)).sqrt()
}

/// Free energy per atom at complex `ᾱ`. At zero temperature this is the
/// lower single-atom level plus the field energy.
pub fn free_energy(point: &ThermalPoint, alpha: Complex<f64>) -> f64 {
    let p = &point.params;
    let e = level(p, alpha);
    let field = (p.omega + 4.0 * p.a_square()) * alpha.norm_sqr();
    if point.temperature == 0.0 {
        field - e
    } else {
        field - point.temperature * ln_2cosh(e / point.temperature)
    }
}

fn free_energy_real(point: &ThermalPoint, x: f64) -> f64 {
    free_energy(point, Complex::new(x, 0.0))
}

/// `K − H(x)` where `f′(x) = x (K − H(x))` on the real axis.
fn stationarity(point: &ThermalPoint, x: f64) -> f64 {
    let p = &point.params;
    let e = level(p, Complex::new(x, 0.0));
    let th = if point.temperature == 0.0 {
        1.0
    } else {
        (e / point.temperature).tanh()
    };
    let k = 2.0 * (p.omega + 4.0 * p.a_square());
    let h = (2.0 * p.g_prime().powi(2) + p.u * (p.delta + p.u * x * x)) * th / (2.0 * e);
    k - h
}

/// `g_c = √([Δω − (ΔU/2) t] / [(τ+1)² t − 4κ])` with `t = tanh(βΔ/2)`,
/// valid for a non-negative numerator and a positive denominator.
pub fn critical_coupling_thermal(point: &ThermalPoint) -> Criticality {
    let p = &point.params;
    let t = point.t();
    let num = p.delta * p.omega - p.delta * p.u / 2.0 * t;
    let den = (p.tau + 1.0).powi(2) * t - 4.0 * p.kappa;
    if num >= 0.0 && den > 0.0 {
        Criticality::Critical((num / den).sqrt())
    } else {
        Criticality::NoTransition(NoTransition {
            numerator: num,
            denominator: den,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CriticalTemperature {
    Finite(f64),
    /// The artanh argument `z` is outside `(0, 1)`.
    NoFiniteTc {
        argument: f64,
    },
}

impl CriticalTemperature {
    pub fn value(&self) -> Option<f64> {
        match self {
            CriticalTemperature::Finite(t) => Some(*t),
            CriticalTemperature::NoFiniteTc { .. } => None,
        }
    }
}

/// `T_c = Δ / (2 artanh z)`, `z = (2Δω + 8g²κ) / (2g²(τ+1)² + ΔU)`.
/// `z = 1` is the quantum critical point and gives `T_c = 0`.
pub fn critical_temperature(p: &ModelParams) -> Result<CriticalTemperature, ThermalError> {
    p.validate()?;
    let g2 = p.g * p.g;
    let z = (2.0 * p.delta * p.omega + 8.0 * g2 * p.kappa)
        / (2.0 * g2 * (p.tau + 1.0).powi(2) + p.delta * p.u);
    if (z - 1.0).abs() <= 8.0 * f64::EPSILON {
        return Ok(CriticalTemperature::Finite(0.0));
    }
    if !(z > 0.0 && z < 1.0) {
        return Ok(CriticalTemperature::NoFiniteTc { argument: z });
    }
    let artanh = 0.5 * ((1.0 + z) / (1.0 - z)).ln();
    Ok(CriticalTemperature::Finite(p.delta / (2.0 * artanh)))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Default upper end of the root scan.
pub const ALPHA_MAX: f64 = 10.0;

/// Real order parameter from the stationarity condition.
///
/// The half-line `(0, ᾱ_max]` is scanned on a quadratic grid for sign changes
/// of `f′`; each minimum is refined by bisection and the lowest one is kept
/// when it lies below `f(0)`.
pub fn order_parameter_thermal(point: &ThermalPoint) -> Result<ThermalSolution, ThermalError> {
    let p = &point.params;
    p.validate()?;
    let t_c = critical_temperature(p)?.value();
    let crit = critical_coupling_thermal(point);
    if point.temperature == 0.0 {
        let z = meanfield_zero::order_parameters(p)?;
        return Ok(ThermalSolution {
            alpha_intensive: z.alpha,
            free_energy_per_atom: z.energy_per_atom,
            phase: match z.phase {
                meanfield_zero::Phase::Normal => ThermalPhase::Normal,
                meanfield_zero::Phase::Superradiant => ThermalPhase::Superradiant,
            },
            g_c: crit.value(),
            t_c,
        });
    }
    let f0 = free_energy_real(point, 0.0);
    let unbounded = 2.0 * (p.omega + 4.0 * p.a_square()) < p.u.abs();
    let unstable = matches!(crit, Criticality::NoTransition(nt) if nt.is_unstable());
    if unstable || unbounded {
        return Ok(ThermalSolution {
            alpha_intensive: 0.0,
            free_energy_per_atom: f0,
            phase: ThermalPhase::Unstable,
            g_c: None,
            t_c,
        });
    }

    let steps = 4000;
    let mut alpha_max = ALPHA_MAX;
    let mut best: Option<(f64, f64)> = None;
    let r = |x: f64| stationarity(point, x);
    for _ in 0..4 {
        let mut prev = (0.0, r(0.0));
        for i in 1..=steps {
            let x = alpha_max * (i as f64 / steps as f64).powi(2);
            let rx = r(x);
            // f′ goes from negative to positive: a minimum
            if prev.1 < 0.0 && rx >= 0.0 {
                let root = bisect(r, prev.0, x);
                let f = free_energy_real(point, root);
                if best.is_none_or(|(_, fb)| f < fb) {
                    best = Some((root, f));
                }
            }
            prev = (x, rx);
        }
        if best.is_some() || r(alpha_max) > 0.0 {
            break;
        }
        alpha_max *= 10.0;
    }

    let g_c = crit.value();
    match best {
        Some((x, f)) if f < f0 => {
            let h = 1e-4 * x.max(1e-3);
            let curv = free_energy_real(point, x + h) - 2.0 * f + free_energy_real(point, x - h);
            if curv > 0.0 {
                return Ok(ThermalSolution {
                    alpha_intensive: x,
                    free_energy_per_atom: f,
                    phase: ThermalPhase::Superradiant,
                    g_c,
                    t_c,
                });
            }
        }
        None => {
            if let Some(gc) = g_c {
                if p.g.abs() > gc && r(0.0) < 0.0 {
                    return Err(ThermalError::RootNotBracketed {
                        g: p.g,
                        g_c: gc,
                        alpha_max,
                    });
                }
            }
        }
        _ => {}
    }
    Ok(ThermalSolution {
        alpha_intensive: 0.0,
        free_energy_per_atom: f0,
        phase: ThermalPhase::Normal,
        g_c,
        t_c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    /// `f(x + iy) − f(0)`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landscape {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major in y: `values[iy * xs.len() + ix]`, relative to `f(0)`.
    pub values: Vec<f64>,
    /// Interior points strictly below all 8 neighbours.
    pub minima: Vec<GridPoint>,
    /// Interior points strictly above all 8 neighbours.
    pub maxima: Vec<GridPoint>,
}

impl Landscape {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.xs.len() + ix]
    }
}

/// Free energy over `x + iy` on an evenly spaced grid including both ends of
/// each range. Odd resolutions over symmetric ranges put nodes on the axes.
pub fn landscape_grid(
    point: &ThermalPoint,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<Landscape, ThermalError> {
    let (nx, ny) = resolution;
    if nx < 32 || ny < 32 {
        return Err(ThermalError::InvalidRequest(format!(
            "resolution {nx}x{ny}, need >= 32 per axis"
        )));
    }
    let ok = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
    if !ok(x_range) || !ok(y_range) {
        return Err(ThermalError::InvalidRequest(
            "ranges must be finite with lo < hi".into(),
        ));
    }
    let axis = |r: (f64, f64), n: usize| -> Vec<f64> {
        (0..n)
            .map(|i| r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64)
            .collect()
    };
    let xs = axis(x_range, nx);
    let ys = axis(y_range, ny);
    let f00 = free_energy(point, Complex::new(0.0, 0.0));
    let values: Vec<f64> = ys
        .par_iter()
        .flat_map_iter(|&y| {
            xs.iter()
                .map(move |&x| free_energy(point, Complex::new(x, y)) - f00)
        })
        .collect();

    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    for iy in 1..ny - 1 {
        for ix in 1..nx - 1 {
            let v = values[iy * nx + ix];
            let neighbours = (iy - 1..=iy + 1)
                .flat_map(|j| (ix - 1..=ix + 1).map(move |i| (i, j)))
                .filter(|&(i, j)| (i, j) != (ix, iy))
                .map(|(i, j)| values[j * nx + i]);
            let (mut lower, mut higher) = (true, true);
            for w in neighbours {
                lower &= v < w;
                higher &= v > w;
            }
            let gp = GridPoint {
                x: xs[ix],
                y: ys[iy],
                value: v,
            };
            if lower {
                minima.push(gp);
            } else if higher {
                maxima.push(gp);
            }
        }
    }
    Ok(Landscape {
        xs,
        ys,
        values,
        minima,
        maxima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anisotropic(g: f64) -> ThermalPoint {
        ThermalPoint::new(ModelParams::new(1.0, 0.5, g, 2.5, 0.5, 1.0, 1), 0.5).unwrap()
    }

    fn isotropic(g: f64) -> ThermalPoint {
        ThermalPoint::new(ModelParams::new(1.0, 0.5, g, 1.0, 5.5, 1.0, 1), 0.5).unwrap()
    }

    #[test]
    fn zero_amplitude() {
        let pt = anisotropic(0.3);
        let f = free_energy(&pt, Complex::new(0.0, 0.0));
        assert!((f + 0.5 * (2.0 * 0.5f64.cosh()).ln()).abs() < 1e-15);
    }

    #[test]
    fn real_axis_matches_real_form() {
        let pt = anisotropic(0.6);
        let p = pt.params;
        for x in [-1.3, -0.2, 0.0, 0.4, 2.0] {
            let e =
                (4.0 * x * x * p.g_prime().powi(2) + (p.delta + p.u * x * x).powi(2)).sqrt() / 2.0;
            let f = (p.omega + 4.0 * p.a_square()) * x * x - (2.0 * (e / 0.5).cosh()).ln() * 0.5;
            assert!((free_energy_real(&pt, x) - f).abs() < 1e-12);
            assert_eq!(free_energy_real(&pt, x), free_energy_real(&pt, -x));
        }
    }

    #[test]
    fn reference_couplings() {
        let gc = critical_coupling_thermal(&anisotropic(0.0))
            .value()
            .unwrap();
        assert!((gc - 0.5160).abs() < 1e-4, "{gc}");
        match critical_coupling_thermal(&isotropic(0.0)) {
            Criticality::NoTransition(nt) => {
                assert!(nt.is_unstable());
                assert!((nt.formula_value().unwrap() - 0.2509).abs() < 1e-4);
            }
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn infinite_temperature_has_no_transition() {
        let pt = ThermalPoint::new(ModelParams::new(1.0, 0.5, 0.3, 2.5, 0.5, 1.2, 1), 1e9).unwrap();
        assert!(critical_coupling_thermal(&pt).value().is_none());
    }

    #[test]
    fn tc_at_quantum_critical_point() {
        let p = ModelParams::new(1.0, 0.5, 0.0, 1.5, 0.5, 1.2, 1);
        let gc0 = meanfield_zero::critical_coupling_zero(&p)
            .unwrap()
            .value()
            .unwrap();
        assert!((gc0 - 0.50854).abs() < 1e-5);
        assert_eq!(
            critical_temperature(&p.with_g(gc0)).unwrap(),
            CriticalTemperature::Finite(0.0)
        );
        assert!(critical_temperature(&p.with_g(0.4))
            .unwrap()
            .value()
            .is_none());
    }

    #[test]
    fn tc_is_root_of_gc() {
        let p = ModelParams::new(1.0, 0.5, 0.7, 1.5, 0.5, 1.2, 1);
        let tc = critical_temperature(&p).unwrap().value().unwrap();
        let gap = |t: f64| {
            let pt = ThermalPoint::new(p, t).unwrap();
            critical_coupling_thermal(&pt)
                .value()
                .map_or(f64::INFINITY, |g| g - 0.7)
        };
        let root = bisect(gap, 1e-3, 5.0);
        assert!((root - tc).abs() < 1e-10 * tc.max(1.0), "{root} {tc}");
        let at = critical_coupling_thermal(&ThermalPoint::new(p, tc).unwrap())
            .value()
            .unwrap();
        assert!((at - 0.7).abs() < 1e-8 * 0.7);
    }

    #[test]
    fn order_parameter_phases() {
        let below = order_parameter_thermal(&anisotropic(0.4)).unwrap();
        assert_eq!(
            (below.phase, below.alpha_intensive),
            (ThermalPhase::Normal, 0.0)
        );
        let above = order_parameter_thermal(&anisotropic(0.62)).unwrap();
        assert_eq!(above.phase, ThermalPhase::Superradiant);
        assert!(above.alpha_intensive > 0.0);
        let pt = anisotropic(0.62);
        let x = above.alpha_intensive;
        let h = 1e-6;
        let d = (free_energy_real(&pt, x + h) - free_energy_real(&pt, x - h)) / (2.0 * h);
        assert!(d.abs() < 1e-8, "{d}");
        assert_eq!(
            order_parameter_thermal(&isotropic(0.3)).unwrap().phase,
            ThermalPhase::Unstable
        );
    }

    #[test]
    fn zero_temperature_matches_ground_state() {
        for u in [0.0, 0.5] {
            let p = ModelParams::new(1.0, 0.5, 0.4, 2.5, u, 1.2, 1);
            let z = meanfield_zero::order_parameters(&p).unwrap();
            let cold = ThermalPoint::new(p, 1e-4).unwrap();
            let s = order_parameter_thermal(&cold).unwrap();
            assert!(
                (s.alpha_intensive - z.alpha).abs() < 1e-8,
                "{} {}",
                s.alpha_intensive,
                z.alpha
            );
            assert!(stationarity(&cold, s.alpha_intensive).abs() < 1e-10);
            assert!(
                (free_energy_real(&ThermalPoint::new(p, 0.0).unwrap(), z.alpha)
                    - z.energy_per_atom)
                    .abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn landscape_topology() {
        let gc = critical_coupling_thermal(&anisotropic(0.0))
            .value()
            .unwrap();
        let l =
            landscape_grid(&anisotropic(1.2 * gc), (-1.5, 1.5), (-1.5, 1.5), (121, 121)).unwrap();
        assert_eq!(l.minima.len(), 2, "{:?}", l.minima);
        assert!(l.minima.iter().all(|m| m.y == 0.0 && m.value < 0.0));
        assert_eq!(l.minima[0].x, -l.minima[1].x);
        let l =
            landscape_grid(&anisotropic(0.8 * gc), (-1.5, 1.5), (-1.5, 1.5), (121, 121)).unwrap();
        assert_eq!(l.minima.len(), 1);
        assert_eq!((l.minima[0].x, l.minima[0].y), (0.0, 0.0));
        assert!(landscape_grid(&anisotropic(0.5), (-1.0, 1.0), (-1.0, 1.0), (16, 64)).is_err());
    }
}
