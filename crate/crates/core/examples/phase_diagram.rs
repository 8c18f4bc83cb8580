//! Exact-diagonalization phase boundary in the (U, g) plane, read off where
//! the photon density crosses a threshold, next to the mean-field line.

use dicke_stark::sweep::config::{ED_KEYS, MODEL_KEYS, SWEEP_KEYS};
use dicke_stark::sweep::{phase_boundary, run_sweep, Config, SweepSpec};

fn main() {
    let c = Config::new(&[MODEL_KEYS, ED_KEYS, SWEEP_KEYS])
        .parse(
            "delta = 2\ntau = 2.5\nkappa = 1.2\nn_atoms = 100\ng_unit = gc0
axis1 = U\naxis1_from = 0\naxis1_to = 1.8\naxis1_points = 4
axis2 = g\naxis2_from = 0.8\naxis2_to = 1.4\naxis2_points = 13
observables = nph_density",
        )
        .unwrap();
    let spec = SweepSpec::from_config(&c).unwrap();
    let res = run_sweep(&spec).unwrap();
    let boundary = phase_boundary(&spec, &res, 0.01).unwrap();
    print!("{}", boundary.to_csv());
}
