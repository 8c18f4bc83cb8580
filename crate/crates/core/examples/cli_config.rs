//! A sweep driven by a key = value file, as the `dicke sweep` command reads
//! it, written as CSV and JSON.

use dicke_stark::sweep::config::{ED_KEYS, MODEL_KEYS, SWEEP_KEYS};
use dicke_stark::sweep::{run_sweep, Config, SweepSpec};

const FILE: &str = "
# photon density and mean-field amplitude across the transition
n_atoms = 64
g_unit = gc0
axis1 = g
axis1_from = 0.5
axis1_to = 1.5
axis1_points = 5
observables = nph_density, epsilon, alpha_mf, phase_mf
";

fn main() {
    let mut c = Config::new(&[MODEL_KEYS, ED_KEYS, SWEEP_KEYS])
        .parse(FILE)
        .unwrap();
    c.apply_overrides(["workers=2"]).unwrap();
    let res = run_sweep(&SweepSpec::from_config(&c).unwrap()).unwrap();
    print!("{}", res.to_csv());
    print!("{}", res.to_json());
}
