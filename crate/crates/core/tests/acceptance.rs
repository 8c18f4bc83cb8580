//! End-to-end acceptance checks. Each test prints one `criterion N: PASS|FAIL`
//! line with the measured numbers; run with `--nocapture` to see them all.

use dicke_stark::meanfield_thermal::{
    critical_coupling_thermal, critical_temperature, landscape_grid, order_parameter_thermal,
    CriticalTemperature, ThermalPhase, ThermalPoint,
};
use dicke_stark::meanfield_zero::{
    critical_coupling_zero, minimize_energy, order_parameters, Criticality, Phase,
};
use dicke_stark::model::{build_hamiltonian, parity_of, BasisSpec, ModelParams, Sector};
use dicke_stark::scaling::{
    fit_criticality_n_scaling, fit_powerlaw, ObservableTag, ScalingCurve, Side, Window, NU,
};
use dicke_stark::spectra::{
    converge_cutoff, converge_cutoff_with, lowest_eigenpairs_with, observables, CutoffOptions,
    Method, Observables, SolverOptions, SpectraError,
};
use dicke_stark::sweep::analysis::{scaling_report, ScalingRequest};
use dicke_stark::sweep::config::{ED_KEYS, MODEL_KEYS, SWEEP_KEYS};
use dicke_stark::sweep::{phase_boundary, run_sweep, Config, SweepSpec};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn report(n: usize, checks: &[(String, bool)]) {
    let pass = checks.iter().all(|c| c.1);
    println!("criterion {n}: {}", if pass { "PASS" } else { "FAIL" });
    for (what, ok) in checks {
        println!("    [{}] {what}", if *ok { "ok" } else { "fail" });
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.1)
        .map(|c| c.0.as_str())
        .collect();
    assert!(pass, "criterion {n} failed: {failed:?}");
}

fn reference(g: f64, n: usize) -> ModelParams {
    ModelParams::new(1.0, 0.5, g, 2.5, 0.5, 1.2, n)
}

fn gc0(p: &ModelParams) -> f64 {
    critical_coupling_zero(p).unwrap().value().unwrap()
}

fn ed(p: &ModelParams) -> Observables {
    let s = converge_cutoff(p, 1, 1e-8, 1e-8).unwrap();
    observables(&s, p).unwrap()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (a.ln() + (b / a).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Parameters with a finite zero-temperature critical coupling.
fn random_critical(rng: &mut ChaCha8Rng) -> ModelParams {
    loop {
        let p = ModelParams::new(
            1.0,
            rng.random_range(0.1..2.0),
            rng.random_range(0.05..1.0),
            rng.random_range(0.0..3.5),
            rng.random_range(-1.0..1.9),
            rng.random_range(0.0..2.0),
            1,
        );
        if matches!(critical_coupling_zero(&p), Ok(Criticality::Critical(_))) {
            return p;
        }
    }
}

#[test]
fn criterion_01_thermal_reference_couplings() {
    let upper = ModelParams::new(1.0, 0.5, 0.3, 2.5, 0.5, 1.0, 1);
    let lower = ModelParams::new(1.0, 0.5, 0.3, 1.0, 5.5, 1.0, 1);
    let gc = critical_coupling_thermal(&ThermalPoint::new(upper, 0.5).unwrap());
    let gc = gc.value().unwrap_or(f64::NAN);
    let (value, unstable) = match critical_coupling_thermal(&ThermalPoint::new(lower, 0.5).unwrap())
    {
        Criticality::NoTransition(nt) => (nt.formula_value().unwrap_or(f64::NAN), nt.is_unstable()),
        Criticality::Critical(g) => (g, false),
    };
    report(
        1,
        &[
            (
                format!("g_c(T=0.5, tau=2.5, U=0.5) = {gc:.6}, expected 0.5160 +- 1e-4"),
                (gc - 0.5160).abs() <= 1e-4,
            ),
            (
                format!("formula value at tau=1, U=5.5 = {value:.6}, expected 0.2509 +- 1e-4"),
                (value - 0.2509).abs() <= 1e-4,
            ),
            (
                format!("tau=1, U=5.5 labelled unstable: {unstable}"),
                unstable,
            ),
        ],
    );
}

#[test]
fn criterion_02_zero_temperature_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = random_critical(&mut rng);
        let t = critical_coupling_thermal(&ThermalPoint::new(p, 1e-6).unwrap())
            .value()
            .unwrap();
        worst = worst.max((t / gc0(&p) - 1.0).abs());
    }
    report(
        2,
        &[(
            format!("max relative deviation over 100 samples = {worst:.3e}, limit 1e-6"),
            worst <= 1e-6,
        )],
    );
}

#[test]
fn criterion_03_no_go_and_dicke_limit() {
    let mut checks = Vec::new();
    for kappa in [1.0, 1.2, 2.0, 5.0] {
        for delta in [0.2, 0.5, 2.0] {
            let p = ModelParams::new(1.0, delta, 0.4, 1.0, 0.0, kappa, 1);
            let zero = matches!(
                critical_coupling_zero(&p).unwrap(),
                Criticality::NoTransition(_)
            );
            let thermal = [1e-3, 0.1, 0.5, 1.0, 10.0, 1e3].iter().all(|&t| {
                matches!(
                    critical_coupling_thermal(&ThermalPoint::new(p, t).unwrap()),
                    Criticality::NoTransition(_)
                )
            });
            checks.push((format!("tau=1 U=0 kappa={kappa} delta={delta}: no transition at T=0 ({zero}) and T>0 ({thermal})"), zero && thermal));
        }
    }
    let mut worst: f64 = 0.0;
    for delta in [0.1, 0.5, 1.0, 2.0, 7.3] {
        let p = ModelParams::new(1.0, delta, 0.4, 1.0, 0.0, 0.0, 1);
        worst = worst.max((gc0(&p) - delta.sqrt() / 2.0).abs());
    }
    checks.push((
        format!("standard Dicke g_c0 vs sqrt(delta)/2: max error {worst:.2e}, limit 1e-12"),
        worst <= 1e-12,
    ));
    report(3, &checks);
}

#[test]
fn criterion_04_closed_form_matches_minimizer() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut de, mut dop): (f64, f64) = (0.0, 0.0);
    let mut superradiant = 0;
    for _ in 0..50 {
        let base = random_critical(&mut rng);
        let p = base.with_g(gc0(&base) * rng.random_range(0.5..2.0));
        let cf = order_parameters(&p).unwrap();
        let m = minimize_energy(&p).unwrap();
        if cf.phase == Phase::Superradiant {
            superradiant += 1;
        }
        de = de.max((cf.energy_per_atom - m.energy).abs());
        dop = dop
            .max((cf.alpha - m.alpha).abs())
            .max((cf.varsigma - m.varsigma).abs());
    }
    report(
        4,
        &[
            (
                format!("energy per atom: max |closed form - minimizer| = {de:.2e}, limit 1e-6"),
                de <= 1e-6,
            ),
            (
                format!("order parameters: max deviation = {dop:.2e}, limit 1e-4"),
                dop <= 1e-4,
            ),
            (
                format!("{superradiant} of 50 samples superradiant"),
                superradiant > 10 && superradiant < 45,
            ),
        ],
    );
}

#[test]
fn criterion_05_ed_phase_boundary() {
    let mut c = Config::new(&[MODEL_KEYS, ED_KEYS, SWEEP_KEYS]);
    c.apply_overrides([
        "delta=2",
        "tau=2.5",
        "kappa=1.2",
        "n_atoms=200",
        "g_unit=gc0",
        "axis1=U",
        "axis1_from=0",
        "axis1_to=1.8",
        "axis1_points=11",
        "axis2=g",
        "axis2_from=0.8",
        "axis2_to=1.3",
        "axis2_points=26",
        "observables=nph_density",
        "boundary_threshold=0.01",
    ])
    .unwrap();
    let spec = SweepSpec::from_config(&c).unwrap();
    let res = run_sweep(&spec).unwrap();
    let b = phase_boundary(&spec, &res, 0.01).unwrap();
    let (ui, gi, ri) = (
        b.column("U").unwrap(),
        b.column("g_boundary").unwrap(),
        b.column("ratio").unwrap(),
    );
    let mut checks = vec![(
        format!("{} error rows", res.error_rows),
        res.error_rows == 0,
    )];
    checks.push((
        format!("{} boundary rows, expected 11", b.rows.len()),
        b.rows.len() == 11,
    ));
    for row in &b.rows {
        let u = row[ui].as_f64().unwrap();
        let expected = (2.0 - u).sqrt() / 7.45f64.sqrt();
        let g = row[gi].as_f64().unwrap_or(f64::NAN);
        let ratio = g / expected;
        checks.push((
            format!("U={u:.2}: boundary {g:.5}, sqrt(2-U)/sqrt(7.45) = {expected:.5}, ratio {ratio:.4} (tool {:.4})", row[ri].as_f64().unwrap_or(f64::NAN)),
            (ratio - 1.0).abs() <= 0.05,
        ));
    }
    report(5, &checks);
}

#[test]
fn criterion_06_table_exponents() {
    let g_c = gc0(&reference(0.1, 1));
    let sizes = [32usize, 64, 128, 256];
    let at_gc: Vec<Observables> = sizes.par_iter().map(|&n| ed(&reference(g_c, n))).collect();
    let pick = |f: fn(&Observables) -> f64| -> Vec<(usize, f64)> {
        sizes.iter().zip(&at_gc).map(|(&n, o)| (n, f(o))).collect()
    };
    let mut checks = Vec::new();
    let gammas: [(&str, fn(&Observables) -> f64, f64, f64); 3] = [
        ("epsilon", |o| o.epsilon, -1.0 / 3.0, 0.05),
        ("nph_density", |o| o.nph_density, -2.0 / 3.0, 0.07),
        ("delta_x", |o| o.delta_x, 1.0 / 6.0, 0.05),
    ];
    for (name, f, target, tol) in gammas {
        let fit = fit_criticality_n_scaling(&pick(f)).unwrap();
        checks.push((
            format!(
                "gamma[{name}] at g_c0 over N=32..256 = {:.5}, expected {target:.4} +- {tol}",
                fit.exponent
            ),
            (fit.exponent - target).abs() <= tol,
        ));
    }

    // Off-critical exponents need |1 - g/g_c| N^{2/3} >> 1 inside the window.
    let n = 4096;
    let lo = 4.0 * (n as f64).powf(-1.0 / NU);
    let rs = logspace(lo, 0.1, 6);
    let below: Vec<f64> = rs.iter().rev().map(|r| g_c * (1.0 - r)).collect();
    let above: Vec<f64> = rs.iter().map(|r| g_c * (1.0 + r)).collect();
    let run =
        |gs: &[f64]| -> Vec<Observables> { gs.par_iter().map(|&g| ed(&reference(g, n))).collect() };
    let (ob, oa) = (run(&below), run(&above));
    let window = |side| Window::new(lo * 0.999, 0.1 * 1.001, side);
    type Fit<'a> = (
        ObservableTag,
        &'a [f64],
        &'a [Observables],
        fn(&Observables) -> f64,
        Side,
        f64,
        f64,
    );
    let fits: [Fit; 3] = [
        (
            ObservableTag::Epsilon,
            &below,
            &ob,
            |o| o.epsilon,
            Side::Below,
            0.5,
            0.1,
        ),
        (
            ObservableTag::NphDensity,
            &above,
            &oa,
            |o| o.nph_density,
            Side::Above,
            1.0,
            0.15,
        ),
        (
            ObservableTag::DeltaX,
            &below,
            &ob,
            |o| o.delta_x,
            Side::Below,
            -0.25,
            0.08,
        ),
    ];
    for (tag, gs, obs, f, side, target, tol) in fits {
        let name = tag.name();
        let curve = ScalingCurve::new(gs.to_vec(), obs.iter().map(f).collect(), n, tag).unwrap();
        let fit = fit_powerlaw(&curve, g_c, window(side)).unwrap();
        checks.push((
            format!(
                "beta[{name}] at N={n}, |r| in [{lo:.4}, 0.1] = {:.4}, expected {target} +- {tol}",
                fit.exponent
            ),
            (fit.exponent - target).abs() <= tol,
        ));
    }
    report(6, &checks);
}

#[test]
fn criterion_07_collapse() {
    let mut c = Config::new(&[MODEL_KEYS, ED_KEYS, SWEEP_KEYS]);
    c.apply_overrides([
        "delta=0.5",
        "tau=2.5",
        "u=0.5",
        "kappa=1.2",
        "g_unit=gc0",
        "axis1=N",
        "axis1_values=32,64,128,256",
        "axis2=g",
        "axis2_from=0.9",
        "axis2_to=1.1",
        "axis2_points=41",
        "observables=epsilon,nph_density,delta_x",
    ])
    .unwrap();
    let res = run_sweep(&SweepSpec::from_config(&c).unwrap()).unwrap();
    let mut checks = vec![(
        format!("{} error rows", res.error_rows),
        res.error_rows == 0,
    )];
    for obs in [
        ObservableTag::Epsilon,
        ObservableTag::NphDensity,
        ObservableTag::DeltaX,
    ] {
        let req = ScalingRequest {
            observable: obs,
            control_column: "g".into(),
            size_column: "N".into(),
            critical: 1.0,
            window: Window::new(0.01, 0.1, Side::Both),
            beta: obs.table_exponents().0,
            nu: NU,
        };
        let rep = scaling_report(&res.table, &req).unwrap();
        let score = |k: &str| {
            rep.iter()
                .find(|r| r.kind == k)
                .and_then(|r| r.score)
                .unwrap_or(f64::NAN)
        };
        let base = score("collapse");
        for k in [
            "collapse_beta_up",
            "collapse_beta_down",
            "collapse_inv_nu_up",
            "collapse_inv_nu_down",
        ] {
            let ratio = score(k) / base;
            checks.push((
                format!(
                    "{}: {k} / collapse = {:.3e} / {base:.3e} = {ratio:.2}, need >= 5",
                    obs.name(),
                    score(k)
                ),
                ratio >= 5.0,
            ));
        }
    }
    report(7, &checks);
}

#[test]
fn criterion_08_landscape_topology() {
    let upper = ModelParams::new(1.0, 0.5, 0.3, 2.5, 0.5, 1.0, 1);
    let lower = ModelParams::new(1.0, 0.5, 0.3, 1.0, 5.5, 1.0, 1);
    let t = 0.5;
    let g_c = critical_coupling_thermal(&ThermalPoint::new(upper, t).unwrap())
        .value()
        .unwrap();
    let grid = |p: ModelParams| {
        landscape_grid(
            &ThermalPoint::new(p, t).unwrap(),
            (-1.5, 1.5),
            (-1.5, 1.5),
            (121, 121),
        )
        .unwrap()
    };
    let above = grid(upper.with_g(1.2 * g_c));
    let below = grid(upper.with_g(0.8 * g_c));
    let on_real_axis =
        |m: &[dicke_stark::meanfield_thermal::GridPoint]| m.iter().all(|p| p.y.abs() < 1e-12);
    let mut checks = vec![
        (
            format!(
                "upper panel, g = 1.2 g_c: {} minima {:?}",
                above.minima.len(),
                above.minima.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>()
            ),
            above.minima.len() == 2
                && on_real_axis(&above.minima)
                && above.minima.iter().all(|p| p.x.abs() > 0.0),
        ),
        (
            format!(
                "upper panel, g = 0.8 g_c: {} minima {:?}",
                below.minima.len(),
                below.minima.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>()
            ),
            below.minima.len() == 1
                && below.minima[0].x.abs() < 1e-12
                && below.minima[0].y.abs() < 1e-12,
        ),
    ];
    for g in [0.1, 0.3, 0.6, 1.0] {
        let l = grid(lower.with_g(g));
        let iy = l.ys.iter().position(|y| y.abs() < 1e-12).unwrap();
        let ix0 = l.xs.iter().position(|x| x.abs() < 1e-12).unwrap();
        let f0 = l.at(ix0, iy);
        let broken: Vec<f64> = (1..l.xs.len() - 1)
            .filter(|&ix| {
                ix != ix0
                    && l.at(ix, iy) < l.at(ix - 1, iy)
                    && l.at(ix, iy) < l.at(ix + 1, iy)
                    && l.at(ix, iy) < f0
            })
            .map(|ix| l.xs[ix])
            .collect();
        let phase = order_parameter_thermal(&ThermalPoint::new(lower.with_g(g), t).unwrap())
            .map(|s| s.phase);
        checks.push((
            format!(
                "lower panel, g = {g}: real-axis minima below f(0) at {broken:?}, phase {phase:?}"
            ),
            broken.is_empty() && phase.is_ok_and(|p| p != ThermalPhase::Superradiant),
        ));
    }
    report(8, &checks);
}

#[test]
fn criterion_09_mean_field_beta() {
    let mut checks = Vec::new();
    let window = |side| Window::new(1e-3 * 0.999, 0.1 * 1.001, side);
    let rs = logspace(1e-3, 0.1, 12);
    for (u, tau) in [(0.5, 2.5), (1.5, 3.0)] {
        let base = ModelParams::new(1.0, 0.5, 0.3, tau, u, 1.2, 1000);
        for t in [0.0, 0.2] {
            let g_c = critical_coupling_thermal(&ThermalPoint::new(base, t).unwrap())
                .value()
                .unwrap();
            let gs: Vec<f64> = rs.iter().map(|r| g_c * (1.0 + r)).collect();
            let a: Vec<f64> = gs
                .iter()
                .map(|&g| {
                    order_parameter_thermal(&ThermalPoint::new(base.with_g(g), t).unwrap())
                        .unwrap()
                        .alpha_intensive
                })
                .collect();
            let curve = ScalingCurve::new(gs, a, 1000, ObservableTag::AlphaMf).unwrap();
            let b = fit_powerlaw(&curve, g_c, window(Side::Above))
                .unwrap()
                .exponent;
            checks.push((
                format!("U={u} tau={tau} T={t}: alpha ~ (g - g_c)^{b:.4}"),
                (b - 0.5).abs() <= 0.05,
            ));
        }
        let p = base.with_g(2.0 * gc0(&base));
        let CriticalTemperature::Finite(tc) = critical_temperature(&p).unwrap() else {
            checks.push((
                format!("U={u} tau={tau}: no finite T_c at g = {}", p.g),
                false,
            ));
            continue;
        };
        let ts: Vec<f64> = rs.iter().rev().map(|r| tc * (1.0 - r)).collect();
        let a: Vec<f64> = ts
            .iter()
            .map(|&t| {
                order_parameter_thermal(&ThermalPoint::new(p, t).unwrap())
                    .unwrap()
                    .alpha_intensive
            })
            .collect();
        let curve = ScalingCurve::new(ts, a, 1000, ObservableTag::AlphaMf).unwrap();
        let b = fit_powerlaw(&curve, tc, window(Side::Below))
            .unwrap()
            .exponent;
        checks.push((
            format!(
                "U={u} tau={tau} g={:.4}: alpha ~ (T_c - T)^{b:.4}, T_c = {tc:.5}",
                p.g
            ),
            (b - 0.5).abs() <= 0.05,
        ));
    }
    report(9, &checks);
}

#[test]
fn criterion_10_krylov_matches_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut worst_purity: f64 = 0.0;
    let mut count = 0;
    while count < 30 {
        let n_atoms = rng.random_range(1..=40);
        let n_max = rng.random_range(4..=60);
        let basis = BasisSpec::new(n_atoms, n_max, Sector::Full);
        if basis.dim() > 2000 || basis.dim() < 16 {
            continue;
        }
        count += 1;
        let p = ModelParams::new(
            1.0,
            rng.random_range(0.2..2.0),
            rng.random_range(0.0..0.6),
            rng.random_range(0.0..3.0),
            rng.random_range(-0.8..1.5),
            rng.random_range(0.0..1.5),
            n_atoms,
        );
        let h = build_hamiltonian(&p, &basis).unwrap();
        let dim = basis.dim();
        let dense = DMatrix::from_row_slice(dim, dim, &h.to_dense());
        let mut exact: Vec<f64> = dense
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        exact.sort_by(f64::total_cmp);
        let opts = SolverOptions {
            tol: 1e-10,
            method: Method::Krylov,
            ..SolverOptions::default()
        };
        let kry = lowest_eigenpairs_with(&h, 4, &opts).unwrap();
        for (e, x) in kry.eigenvalues().iter().take(4).zip(&exact) {
            worst = worst.max((e - x).abs());
        }
        for pair in &kry.pairs {
            let states = kry.basis_of(pair).states();
            let sign = if pair.sector == Sector::Even {
                1.0
            } else {
                -1.0
            };
            // weight on states of the labelled parity, in the full basis
            let pure: f64 = states
                .iter()
                .zip(&pair.vector)
                .map(|(&(n, k), c)| {
                    if f64::from(parity_of(n, k)) == sign {
                        c * c
                    } else {
                        0.0
                    }
                })
                .sum();
            worst_purity = worst_purity.max(1.0 - pure);
        }
    }
    report(
        10,
        &[
            (format!("30 Hamiltonians, dim <= 2000: max |Krylov - dense| over lowest 4 = {worst:.2e}, limit 1e-10"), worst <= 1e-10),
            (format!("max parity impurity = {worst_purity:.2e}, limit 1e-10"), worst_purity <= 1e-10),
        ],
    );
}

#[test]
fn criterion_11_continuum_guard() {
    let p = ModelParams::new(1.0, 0.5, 0.2, 2.5, 2.5, 1.2, 20);
    let opts = CutoffOptions {
        n_max_cap: 600,
        ..CutoffOptions::default()
    };
    let (ok, what) = match converge_cutoff_with(&p, 1, 1e-8, 1e-8, &opts) {
        Err(SpectraError::CutoffRunaway { cap, trail }) => {
            let falling = trail.windows(2).all(|w| w[1].e0 < w[0].e0);
            (
                cap == 600 && trail.len() >= 5 && falling,
                format!(
                    "CutoffRunaway at cap {cap}, {} rungs, e0 from {:.3} to {:.3}, strictly falling: {falling}",
                    trail.len(),
                    trail[0].e0,
                    trail.last().unwrap().e0
                ),
            )
        }
        other => (
            false,
            format!(
                "expected CutoffRunaway, got {:?}",
                other.map(|s| s.n_max_used)
            ),
        ),
    };
    report(11, &[(what, ok)]);
}
