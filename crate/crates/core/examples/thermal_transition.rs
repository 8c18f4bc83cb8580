//! Critical coupling against temperature, the critical temperature at fixed
//! coupling and the thermal order parameter across it.

use dicke_stark::meanfield_thermal::{
    critical_coupling_thermal, critical_temperature, order_parameter_thermal, CriticalTemperature,
    ThermalPoint,
};
use dicke_stark::model::ModelParams;

fn main() {
    let p = ModelParams::new(1.0, 0.5, 0.3, 2.5, 0.5, 1.0, 1);
    println!("{:>6} {:>10}", "T", "g_c(T)");
    for t in [0.0, 0.1, 0.2, 0.3, 0.5, 0.8] {
        let gc = critical_coupling_thermal(&ThermalPoint::new(p, t).unwrap());
        let gc = gc.value().map_or("none".to_string(), |g| format!("{g:.6}"));
        println!("{t:>6.2} {gc:>10}");
    }

    let p = p.with_g(0.6);
    let CriticalTemperature::Finite(tc) = critical_temperature(&p).unwrap() else {
        panic!("no finite critical temperature at g = 0.6");
    };
    println!("\ng = 0.6: T_c = {tc:.6}");
    for i in 0..=8 {
        let t = tc * (0.2 + 0.125 * i as f64);
        let s = order_parameter_thermal(&ThermalPoint::new(p, t).unwrap()).unwrap();
        println!(
            "  T/T_c {:>5.3}  alpha {:.6}  f {:+.6}  {:?}",
            t / tc,
            s.alpha_intensive,
            s.free_energy_per_atom,
            s.phase
        );
    }
}
