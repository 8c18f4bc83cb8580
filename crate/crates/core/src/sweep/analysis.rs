//! Scaling fits on a table produced by a sweep.

use std::collections::BTreeMap;

use serde::Serialize;

use super::config::Config;
use super::table::{Cell, Table};
use super::SweepError;
use crate::scaling::{
    collapse_quality, fit_criticality_n_scaling, fit_powerlaw, ObservableTag, ScalingCurve, Side,
    Window,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRequest {
    pub observable: ObservableTag,
    pub control_column: String,
    pub size_column: String,
    pub critical: f64,
    pub window: Window,
    pub beta: f64,
    pub nu: f64,
}

impl ScalingRequest {
    pub fn from_config(c: &Config) -> Result<Self, SweepError> {
        let observable: ObservableTag = c
            .get("observable")?
            .parse()
            .map_err(|e: crate::scaling::ScalingError| SweepError::Config(e.to_string()))?;
        let critical = c
            .opt_f64("critical")?
            .ok_or_else(|| SweepError::Config("critical is required".into()))?;
        let side = match c.get("side")? {
            "below" => Side::Below,
            "above" => Side::Above,
            "both" => Side::Both,
            s => return Err(SweepError::Config(format!("side = '{s}'"))),
        };
        let beta = c.opt_f64("beta")?.unwrap_or(observable.table_exponents().0);
        Ok(Self {
            observable,
            control_column: c.get("control_column")?.to_string(),
            size_column: c.get("size_column")?.to_string(),
            critical,
            window: Window::new(c.f64("window_lo")?, c.f64("window_hi")?, side),
            beta,
            nu: c.f64("nu")?,
        })
    }
}

/// One line of a scaling report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRecord {
    pub kind: String,
    pub size: Option<usize>,
    pub exponent: Option<f64>,
    pub stderr: Option<f64>,
    pub window: Option<(f64, f64)>,
    pub r_squared: Option<f64>,
    pub score: Option<f64>,
    pub beta: Option<f64>,
    pub nu: Option<f64>,
    pub error: Option<String>,
}

impl FitRecord {
    fn new(kind: &str) -> Self {
        Self {
            kind: kind.into(),
            size: None,
            exponent: None,
            stderr: None,
            window: None,
            r_squared: None,
            score: None,
            beta: None,
            nu: None,
            error: None,
        }
    }
}

/// Splits a table into one curve per size, skipping error rows.
pub fn curves_from_table(t: &Table, req: &ScalingRequest) -> Result<Vec<ScalingCurve>, SweepError> {
    let col = |name: &str| {
        t.column(name)
            .ok_or_else(|| SweepError::Config(format!("input has no '{name}' column")))
    };
    let (ci, si, qi) = (
        col(&req.control_column)?,
        col(&req.size_column)?,
        col(req.observable.name())?,
    );
    let err = t.column("error");
    let mut by_size: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    for row in &t.rows {
        if err.is_some_and(|e| !matches!(row[e], Cell::Empty)) {
            continue;
        }
        let (Some(c), Some(n), Some(q)) = (row[ci].as_f64(), row[si].as_f64(), row[qi].as_f64())
        else {
            continue;
        };
        by_size.entry(n as usize).or_default().push((c, q));
    }
    by_size
        .into_iter()
        .map(|(n, mut pts)| {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (c, q) = pts.into_iter().unzip();
            ScalingCurve::new(c, q, n, req.observable)
                .map_err(|e| SweepError::Parse(format!("N = {n}: {e}")))
        })
        .collect()
}

/// Value of a curve at `x`, interpolated linearly between bracketing points.
pub fn value_at(curve: &ScalingCurve, x: f64) -> Option<f64> {
    let c = &curve.control;
    let j = c.partition_point(|&v| v < x);
    if j < c.len() && c[j] == x {
        return Some(curve.values[j]);
    }
    if j == 0 || j == c.len() {
        return None;
    }
    let t = (x - c[j - 1]) / (c[j] - c[j - 1]);
    Some(curve.values[j - 1] + t * (curve.values[j] - curve.values[j - 1]))
}

/// Power-law fit per size, size scaling at the critical value, and collapse
/// scores at the requested exponents and with β or 1/ν moved by ±30%.
pub fn scaling_report(t: &Table, req: &ScalingRequest) -> Result<Vec<FitRecord>, SweepError> {
    let curves = curves_from_table(t, req)?;
    let mut out = Vec::new();
    for c in &curves {
        let mut r = FitRecord::new("powerlaw");
        r.size = Some(c.size);
        match fit_powerlaw(c, req.critical, req.window) {
            Ok(f) => {
                r.exponent = Some(f.exponent);
                r.stderr = Some(f.stderr);
                r.window = Some(f.window);
                r.r_squared = Some(f.r_squared);
            }
            Err(e) => r.error = Some(e.to_string()),
        }
        out.push(r);
    }

    let at_critical: Vec<(usize, f64)> = curves
        .iter()
        .filter_map(|c| value_at(c, req.critical).map(|q| (c.size, q)))
        .collect();
    let mut r = FitRecord::new("size_scaling");
    match fit_criticality_n_scaling(&at_critical) {
        Ok(f) => {
            r.exponent = Some(f.exponent);
            r.stderr = Some(f.stderr);
            r.window = Some(f.window);
            r.r_squared = Some(f.r_squared);
        }
        Err(e) => r.error = Some(e.to_string()),
    }
    out.push(r);

    let collapse_window = Window::new(0.0, req.window.hi, req.window.side);
    let trials = [
        ("collapse", req.beta, req.nu),
        ("collapse_beta_up", req.beta * 1.3, req.nu),
        ("collapse_beta_down", req.beta * 0.7, req.nu),
        ("collapse_inv_nu_up", req.beta, req.nu / 1.3),
        ("collapse_inv_nu_down", req.beta, req.nu / 0.7),
    ];
    for (kind, beta, nu) in trials {
        let mut r = FitRecord::new(kind);
        r.beta = Some(beta);
        r.nu = Some(nu);
        r.window = Some((collapse_window.lo, collapse_window.hi));
        match collapse_quality(&curves, req.critical, beta, nu, collapse_window) {
            Ok(s) => r.score = Some(s),
            Err(e) => r.error = Some(e.to_string()),
        }
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rows of `Q = |r|^β F(r N^{1/ν})` with ln F linear on each side.
    fn planted(beta: f64, nu: f64) -> Table {
        let mut t = Table::new(vec![
            "N".into(),
            "g".into(),
            "epsilon".into(),
            "error".into(),
        ]);
        let gc = 0.25;
        for n in [32usize, 64, 128, 256] {
            for i in 0..81 {
                let g = gc * (0.8 + 0.005 * i as f64);
                let r: f64 = 1.0 - g / gc;
                let x = r * (n as f64).powf(1.0 / nu);
                let f = if x >= 0.0 {
                    (0.3 * x).exp()
                } else {
                    (0.1 - 0.2 * x).exp()
                };
                let q = if r == 0.0 {
                    (n as f64).powf(-beta / nu)
                } else {
                    r.abs().powf(beta) * f
                };
                t.rows.push(vec![
                    Cell::Int(n as i64),
                    Cell::Num(g),
                    Cell::Num(q),
                    Cell::Empty,
                ]);
            }
        }
        t
    }

    #[test]
    fn recovers_planted_collapse() {
        let t = planted(0.5, 1.5);
        let req = ScalingRequest {
            observable: ObservableTag::Epsilon,
            control_column: "g".into(),
            size_column: "N".into(),
            critical: 0.25,
            window: Window::new(0.01, 0.2, Side::Both),
            beta: 0.5,
            nu: 1.5,
        };
        let rep = scaling_report(&t, &req).unwrap();
        let score = |k: &str| rep.iter().find(|r| r.kind == k).unwrap().score.unwrap();
        assert!(score("collapse") < 1e-10);
        for k in [
            "collapse_beta_up",
            "collapse_beta_down",
            "collapse_inv_nu_up",
            "collapse_inv_nu_down",
        ] {
            assert!(score(k) > 1e3 * score("collapse"), "{k}");
        }
        let size = rep.iter().find(|r| r.kind == "size_scaling").unwrap();
        assert!((size.exponent.unwrap() + 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn skips_error_rows() {
        let mut t = planted(0.5, 1.5);
        t.rows[3][3] = Cell::Text("boom".into());
        t.rows[3][2] = Cell::Empty;
        let req = ScalingRequest {
            observable: ObservableTag::Epsilon,
            control_column: "g".into(),
            size_column: "N".into(),
            critical: 0.25,
            window: Window::default(),
            beta: 0.5,
            nu: 1.5,
        };
        let curves = curves_from_table(&t, &req).unwrap();
        assert_eq!(curves[0].control.len(), 80);
    }
}
