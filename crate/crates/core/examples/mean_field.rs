//! Zero-temperature critical coupling and order parameters, with the
//! closed form checked against a brute-force minimization.

use dicke_stark::meanfield_zero::{
    critical_coupling_zero, minimize_energy, order_parameters, Criticality,
};
use dicke_stark::model::ModelParams;

fn main() {
    for (tau, u, kappa) in [
        (2.5, 0.5, 1.2),
        (3.0, 1.5, 1.2),
        (1.0, 0.0, 1.0),
        (1.0, 0.0, 0.0),
    ] {
        let p = ModelParams::new(1.0, 0.5, 0.0, tau, u, kappa, 1);
        match critical_coupling_zero(&p).unwrap() {
            Criticality::Critical(g) => println!("tau {tau} U {u} kappa {kappa}: gc0 = {g:.6}"),
            Criticality::NoTransition(nt) => {
                println!("tau {tau} U {u} kappa {kappa}: {}", nt.reason())
            }
        }
    }

    let p = ModelParams::new(1.0, 0.5, 0.0, 2.5, 0.5, 1.2, 1);
    let gc = critical_coupling_zero(&p).unwrap().value().unwrap();
    println!(
        "\n{:>6} {:>10} {:>10} {:>13} {:>10}",
        "g/gc0", "alpha", "varsigma", "e/N", "brute e/N"
    );
    for i in 0..=10 {
        let r = 0.8 + 0.08 * i as f64;
        let q = p.with_g(r * gc);
        let s = order_parameters(&q).unwrap();
        let m = minimize_energy(&q).unwrap();
        println!(
            "{r:>6.2} {:>10.6} {:>10.6} {:>13.9} {:>10.6}",
            s.alpha, s.varsigma, s.energy_per_atom, m.energy
        );
    }
}
