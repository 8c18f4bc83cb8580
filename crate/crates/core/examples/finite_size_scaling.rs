//! Finite-size scaling of the gap, photon density and x fluctuations at the
//! mean-field critical point, and the data-collapse score of each.

use dicke_stark::scaling::{fit_criticality_n_scaling, ObservableTag, Side, Window, NU};
use dicke_stark::sweep::analysis::{scaling_report, ScalingRequest};
use dicke_stark::sweep::config::{ED_KEYS, MODEL_KEYS, SWEEP_KEYS};
use dicke_stark::sweep::{run_sweep, Config, SweepSpec};

fn main() {
    let mut c = Config::new(&[MODEL_KEYS, ED_KEYS, SWEEP_KEYS]);
    c.apply_overrides([
        "g_unit=gc0",
        "axis1=N",
        "axis1_values=32,64,128",
        "axis2=g",
        "axis2_from=0.9",
        "axis2_to=1.1",
        "axis2_points=21",
        "observables=epsilon,nph_density,delta_x",
    ])
    .unwrap();
    let res = run_sweep(&SweepSpec::from_config(&c).unwrap()).unwrap();

    for tag in [
        ObservableTag::Epsilon,
        ObservableTag::NphDensity,
        ObservableTag::DeltaX,
    ] {
        let (beta, gamma) = tag.table_exponents();
        let col = res.table.column(tag.name()).unwrap();
        let g = res.table.column("g").unwrap();
        let at_gc: Vec<(usize, f64)> = res
            .table
            .rows
            .iter()
            .filter(|r| (r[g].as_f64().unwrap() - 1.0).abs() < 1e-9)
            .map(|r| (r[0].as_f64().unwrap() as usize, r[col].as_f64().unwrap()))
            .collect();
        let fit = fit_criticality_n_scaling(&at_gc).unwrap();
        let req = ScalingRequest {
            observable: tag,
            control_column: "g".into(),
            size_column: "N".into(),
            critical: 1.0,
            window: Window::new(0.01, 0.1, Side::Both),
            beta,
            nu: NU,
        };
        let rep = scaling_report(&res.table, &req).unwrap();
        println!(
            "{}: N-exponent {:+.4} (table {gamma:+.4})",
            tag.name(),
            fit.exponent
        );
        for r in rep.iter().filter(|r| r.kind.starts_with("collapse")) {
            println!("  {:<22} {:.3e}", r.kind, r.score.unwrap_or(f64::NAN));
        }
    }
}
