//! Free-energy landscape over the complex amplitude: a double well above the
//! thermal critical coupling, a single well below it, and the isotropic case
//! with a strong Stark shift where no symmetry-broken well forms.
//!
//! Pass a path to also write the upper-panel grid as CSV.

use dicke_stark::meanfield_thermal::{
    critical_coupling_thermal, landscape_grid, order_parameter_thermal, ThermalPoint,
};
use dicke_stark::model::ModelParams;
use dicke_stark::sweep::{Cell, Table};

fn main() {
    let t = 0.5;
    let upper = ModelParams::new(1.0, 0.5, 0.3, 2.5, 0.5, 1.0, 1);
    let lower = ModelParams::new(1.0, 0.5, 0.3, 1.0, 5.5, 1.0, 1);
    let gc = critical_coupling_thermal(&ThermalPoint::new(upper, t).unwrap())
        .value()
        .unwrap();

    for (label, p) in [
        ("1.2 g_c", upper.with_g(1.2 * gc)),
        ("0.8 g_c", upper.with_g(0.8 * gc)),
        ("isotropic", lower),
    ] {
        let pt = ThermalPoint::new(p, t).unwrap();
        let l = landscape_grid(&pt, (-1.5, 1.5), (-1.5, 1.5), (121, 121)).unwrap();
        let phase = order_parameter_thermal(&pt).map(|s| s.phase);
        println!("{label}: {phase:?}");
        for m in &l.minima {
            println!(
                "  minimum at ({:+.3}, {:+.3}), f - f(0) = {:+.6}",
                m.x, m.y, m.value
            );
        }
        if let (Some(path), "1.2 g_c") = (std::env::args().nth(1), label) {
            let mut table = Table::new(vec!["x".into(), "y".into(), "f".into()]);
            for (iy, &y) in l.ys.iter().enumerate() {
                for (ix, &x) in l.xs.iter().enumerate() {
                    table
                        .rows
                        .push(vec![Cell::Num(x), Cell::Num(y), Cell::Num(l.at(ix, iy))]);
                }
            }
            std::fs::write(path, table.to_csv()).unwrap();
        }
    }
}
