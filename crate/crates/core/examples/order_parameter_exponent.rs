//! Mean-field order-parameter exponent from log-log fits, once against the
//! coupling at fixed temperature and once against the temperature at fixed
//! coupling.

use dicke_stark::meanfield_thermal::{
    critical_coupling_thermal, critical_temperature, order_parameter_thermal, CriticalTemperature,
    ThermalPoint,
};
use dicke_stark::model::ModelParams;
use dicke_stark::scaling::{fit_powerlaw, ObservableTag, ScalingCurve, Side, Window};

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn alpha(p: ModelParams, t: f64) -> f64 {
    order_parameter_thermal(&ThermalPoint::new(p, t).unwrap())
        .unwrap()
        .alpha_intensive
}

fn main() {
    let rs = logspace(1e-3, 0.1, 12);
    let window = |side| Window::new(0.999e-3, 0.1001, side);
    for (u, tau) in [(0.5, 2.5), (1.5, 3.0)] {
        let p = ModelParams::new(1.0, 0.5, 0.3, tau, u, 1.2, 1);
        for t in [0.0, 0.2] {
            let gc = critical_coupling_thermal(&ThermalPoint::new(p, t).unwrap())
                .value()
                .unwrap();
            let gs: Vec<f64> = rs.iter().map(|r| gc * (1.0 + r)).collect();
            let a = gs.iter().map(|&g| alpha(p.with_g(g), t)).collect();
            let curve = ScalingCurve::new(gs, a, 1, ObservableTag::AlphaMf).unwrap();
            let fit = fit_powerlaw(&curve, gc, window(Side::Above)).unwrap();
            println!(
                "U {u} tau {tau} T {t}: alpha ~ (g - g_c)^{:.4}",
                fit.exponent
            );
        }
        let q = p.with_g(0.45);
        let CriticalTemperature::Finite(tc) = critical_temperature(&q).unwrap() else {
            continue;
        };
        let ts: Vec<f64> = rs.iter().rev().map(|r| tc * (1.0 - r)).collect();
        let a = ts.iter().map(|&t| alpha(q, t)).collect();
        let curve = ScalingCurve::new(ts, a, 1, ObservableTag::AlphaMf).unwrap();
        let fit = fit_powerlaw(&curve, tc, window(Side::Below)).unwrap();
        println!(
            "U {u} tau {tau} g 0.45: alpha ~ (T_c - T)^{:.4}",
            fit.exponent
        );
    }
}
