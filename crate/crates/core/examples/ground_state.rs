//! Converged ground state and gap at Δ = 0.5, τ = 2.5, U = 0.5, κ = 1.2.
//!
//!     cargo run --release --example ground_state -- 0.25 128

use dicke_stark::model::ModelParams;
use dicke_stark::spectra::{converge_cutoff, observables};

fn main() {
    let mut args = std::env::args().skip(1);
    let g: f64 = args.next().map_or(0.25, |s| s.parse().expect("g"));
    let n: usize = args.next().map_or(64, |s| s.parse().expect("N"));

    let p = ModelParams::new(1.0, 0.5, g, 2.5, 0.5, 1.2, n);
    let spec = converge_cutoff(&p, 2, 1e-8, 1e-8).expect("converged spectrum");
    let o = observables(&spec, &p).unwrap();

    println!("N = {n}, g = {g}, photon cutoff {}", spec.n_max_used);
    for pair in &spec.pairs {
        println!(
            "  {:>5}  E = {:+.10}  residual {:.1e}",
            pair.sector, pair.energy, pair.residual
        );
    }
    println!("gap        {:.8}", o.epsilon);
    println!("<n>/N      {:.8}", o.nph_density);
    println!("dx         {:.8}", o.delta_x);
    println!("<Jz>/N     {:.8}", o.jz_density);
}
