//! Finite-size scaling: power-law fits, size scaling at the critical point and
//! data-collapse scores for
//!
//! ```text
//! Q = |1 − g/g_c|^β F(|1 − g/g_c| N^{1/ν}),   Q(g_c) ∝ N^{−β/ν}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalingError {
    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("observable must be > 0, got {value} at control {control}")]
    NonPositiveObservable { control: f64, value: f64 },
    #[error("no overlapping points in the collapse window")]
    WindowEmpty,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableTag {
    Epsilon,
    NphDensity,
    DeltaX,
    AlphaMf,
}

impl ObservableTag {
    /// Exponents `(β, γ)` of the scaling table.
    pub fn table_exponents(self) -> (f64, f64) {
        match self {
            ObservableTag::Epsilon => (0.5, -1.0 / 3.0),
            ObservableTag::NphDensity => (1.0, -2.0 / 3.0),
            ObservableTag::DeltaX => (-0.25, 1.0 / 6.0),
            ObservableTag::AlphaMf => (0.5, f64::NAN),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ObservableTag::Epsilon => "epsilon",
            ObservableTag::NphDensity => "nph_density",
            ObservableTag::DeltaX => "delta_x",
            ObservableTag::AlphaMf => "alpha_mf",
        }
    }
}

impl std::str::FromStr for ObservableTag {
    type Err = ScalingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "epsilon" => Ok(ObservableTag::Epsilon),
            "nph_density" => Ok(ObservableTag::NphDensity),
            "delta_x" => Ok(ObservableTag::DeltaX),
            "alpha_mf" => Ok(ObservableTag::AlphaMf),
            _ => Err(ScalingError::InvalidInput(format!(
                "unknown observable '{s}'"
            ))),
        }
    }
}

/// Universal correlation-length exponent.
pub const NU: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingCurve {
    /// Control parameter (g or T), strictly increasing.
    pub control: Vec<f64>,
    pub values: Vec<f64>,
    pub size: usize,
    pub observable: ObservableTag,
}

impl ScalingCurve {
    pub fn new(
        control: Vec<f64>,
        values: Vec<f64>,
        size: usize,
        observable: ObservableTag,
    ) -> Result<Self, ScalingError> {
        if control.len() != values.len() {
            return Err(ScalingError::InvalidInput(format!(
                "{} control values but {} observable values",
                control.len(),
                values.len()
            )));
        }
        if control.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(ScalingError::InvalidInput(
                "control must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            control,
            values,
            size,
            observable,
        })
    }
}

/// Which side of the critical value a window covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// control < critical
    Below,
    /// control > critical
    Above,
    Both,
}

/// Range of the reduced variable `r = |1 − control/critical|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
    pub side: Side,
}

impl Window {
    pub fn new(lo: f64, hi: f64, side: Side) -> Self {
        Self { lo, hi, side }
    }

    fn contains(&self, control: f64, critical: f64) -> bool {
        let r = (1.0 - control / critical).abs();
        let side = match self.side {
            Side::Below => control < critical,
            Side::Above => control > critical,
            Side::Both => true,
        };
        side && r >= self.lo && r <= self.hi
    }
}

impl Default for Window {
    fn default() -> Self {
        Self {
            lo: 1e-2,
            hi: 1e-1,
            side: Side::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub exponent: f64,
    pub stderr: f64,
    /// Range of the fitted abscissa: reduced variable, or sizes.
    pub window: (f64, f64),
    pub r_squared: f64,
    pub n_points: usize,
}

/// Least-squares slope, its standard error and R².
fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - xm).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - xm) * (yi - ym)).sum();
    let syy: f64 = y.iter().map(|yi| (yi - ym).powi(2)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - ym - slope * (xi - xm)).powi(2))
        .sum();
    let stderr = if x.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    let r2 = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    (slope, stderr, r2)
}

// ln(Q/Q₀) rather than ln Q, so a constant factor on Q cancels before the fit.
fn log_ratios(values: &[f64]) -> Vec<f64> {
    values.iter().map(|v| (v / values[0]).ln()).collect()
}

/// Exponent of `Q ∝ |control − critical|^e` over the points inside `window`.
pub fn fit_powerlaw(
    curve: &ScalingCurve,
    critical: f64,
    window: Window,
) -> Result<ExponentFit, ScalingError> {
    if !(critical.is_finite() && critical != 0.0) {
        return Err(ScalingError::InvalidInput(format!(
            "critical value {critical}"
        )));
    }
    let (mut xs, mut qs) = (Vec::new(), Vec::new());
    for (&c, &q) in curve.control.iter().zip(&curve.values) {
        if !window.contains(c, critical) {
            continue;
        }
        let d = (c - critical).abs();
        if d == 0.0 {
            return Err(ScalingError::InvalidInput(format!(
                "control {c} equals the critical value"
            )));
        }
        if !(q > 0.0) {
            return Err(ScalingError::NonPositiveObservable {
                control: c,
                value: q,
            });
        }
        xs.push(d.ln());
        qs.push(q);
    }
    if xs.len() < 5 {
        return Err(ScalingError::InsufficientPoints {
            needed: 5,
            got: xs.len(),
        });
    }
    let (exponent, stderr, r_squared) = line_fit(&xs, &log_ratios(&qs));
    Ok(ExponentFit {
        exponent,
        stderr,
        window: (window.lo, window.hi),
        r_squared,
        n_points: xs.len(),
    })
}

/// Exponent `γ` of `Q(g_c) ∝ N^γ`.
pub fn fit_criticality_n_scaling(
    values_at_gc: &[(usize, f64)],
) -> Result<ExponentFit, ScalingError> {
    if values_at_gc.len() < 3 {
        return Err(ScalingError::InsufficientPoints {
            needed: 3,
            got: values_at_gc.len(),
        });
    }
    let mut pts = values_at_gc.to_vec();
    pts.sort_by_key(|p| p.0);
    for &(n, q) in &pts {
        if n == 0 {
            return Err(ScalingError::InvalidInput("size must be >= 1".into()));
        }
        if !(q > 0.0) {
            return Err(ScalingError::NonPositiveObservable {
                control: n as f64,
                value: q,
            });
        }
    }
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(ScalingError::InvalidInput("duplicate size".into()));
    }
    let xs: Vec<f64> = pts.iter().map(|p| (p.0 as f64).ln()).collect();
    let qs: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (exponent, stderr, r_squared) = line_fit(&xs, &log_ratios(&qs));
    Ok(ExponentFit {
        exponent,
        stderr,
        window: (pts[0].0 as f64, pts[pts.len() - 1].0 as f64),
        r_squared,
        n_points: pts.len(),
    })
}

/// Collapse score for a set of curves of distinct size.
///
/// Each point becomes `x = sign(r)|r| N^{1/ν}`, `y = Q |r|^{−β}` with
/// `r = 1 − control/g_c`; the two signs of `x` are the two sides of the
/// transition and are never interpolated across. The score is the mean
/// squared difference in `ln y` between every point of one curve and the
/// piecewise-linear interpolant through the pooled points of all other
/// curves, over the points inside `window` that fall within the others' range.
pub fn collapse_quality(
    curves: &[ScalingCurve],
    g_c: f64,
    beta_q: f64,
    nu: f64,
    window: Window,
) -> Result<f64, ScalingError> {
    if curves.len() < 2 {
        return Err(ScalingError::InsufficientPoints {
            needed: 2,
            got: curves.len(),
        });
    }
    if !(g_c.is_finite() && g_c != 0.0 && nu.is_finite() && nu != 0.0 && beta_q.is_finite()) {
        return Err(ScalingError::InvalidInput(
            "g_c, nu and beta must be finite, g_c and nu nonzero".into(),
        ));
    }
    let mut by_size: BTreeMap<usize, &ScalingCurve> = BTreeMap::new();
    for c in curves {
        if by_size.insert(c.size, c).is_some() {
            return Err(ScalingError::InvalidInput(format!(
                "duplicate size {}",
                c.size
            )));
        }
    }
    let rescaled: Vec<Vec<(f64, f64)>> = by_size
        .values()
        .map(|c| {
            let scale = (c.size as f64).powf(1.0 / nu);
            c.control
                .iter()
                .zip(&c.values)
                .filter(|&(&g, &q)| window.contains(g, g_c) && g != g_c && q > 0.0)
                .map(|(&g, &q)| {
                    let r = 1.0 - g / g_c;
                    (r.signum() * r.abs() * scale, q.ln() - beta_q * r.abs().ln())
                })
                .collect()
        })
        .collect();

    let (mut sum, mut count) = (0.0, 0usize);
    for (i, own) in rescaled.iter().enumerate() {
        for positive in [false, true] {
            let mut pool: Vec<(f64, f64)> = rescaled
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, c)| c.iter().copied())
                .filter(|p| (p.0 > 0.0) == positive)
                .collect();
            if pool.len() < 2 {
                continue;
            }
            pool.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            for &(x, y) in own.iter().filter(|p| (p.0 > 0.0) == positive) {
                if let Some(yi) = interpolate(&pool, x) {
                    sum += (y - yi).powi(2);
                    count += 1;
                }
            }
        }
    }
    if count == 0 {
        return Err(ScalingError::WindowEmpty);
    }
    Ok(sum / count as f64)
}

fn interpolate(pts: &[(f64, f64)], x: f64) -> Option<f64> {
    if x < pts[0].0 || x > pts[pts.len() - 1].0 {
        return None;
    }
    let j = pts.partition_point(|p| p.0 < x);
    if j < pts.len() && pts[j].0 == x {
        return Some(pts[j].1);
    }
    let (a, b) = (pts[j - 1], pts[j]);
    Some(a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0))
}
