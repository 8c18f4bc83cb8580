//! How far the photon cutoff has to go, and what happens when the Stark
//! coupling exceeds 2ω and no cutoff is ever enough.

use dicke_stark::meanfield_zero::critical_coupling_zero;
use dicke_stark::model::ModelParams;
use dicke_stark::spectra::{converge_cutoff, converge_cutoff_with, CutoffOptions, SpectraError};

fn main() {
    let base = ModelParams::new(1.0, 0.5, 0.0, 2.5, 0.5, 1.2, 100);
    let gc = critical_coupling_zero(&base).unwrap().value().unwrap();
    println!("{:>8} {:>8} {:>16}", "g/gc0", "n_max", "E0");
    for r in [0.5, 0.9, 1.0, 1.1, 1.5, 2.0] {
        let p = base.with_g(r * gc);
        let s = converge_cutoff(&p, 1, 1e-8, 1e-8).unwrap();
        println!("{r:>8.2} {:>8} {:>16.10}", s.n_max_used, s.pairs[0].energy);
    }

    let runaway = ModelParams::new(1.0, 0.5, 0.2, 2.5, 2.5, 1.2, 10);
    let opts = CutoffOptions {
        n_max_cap: 300,
        ..CutoffOptions::default()
    };
    match converge_cutoff_with(&runaway, 1, 1e-8, 1e-8, &opts) {
        Err(SpectraError::CutoffRunaway { cap, trail }) => {
            println!("\nU = 2.5: no convergence below n_max = {cap}");
            for s in trail {
                println!(
                    "  n_max {:>4}  E0 {:>12.4}  tail weight {:.2e}",
                    s.n_max, s.e0, s.tail
                );
            }
        }
        other => println!("unexpected: {:?}", other.map(|s| s.n_max_used)),
    }
}
