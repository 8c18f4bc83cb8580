use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};

use dicke_stark::meanfield_thermal::{self as thermal, ThermalPoint};
use dicke_stark::meanfield_zero::{self as zero, Criticality};
use dicke_stark::spectra::{converge_cutoff_with, observables, SpectraError};
use dicke_stark::sweep::analysis::{scaling_report, ScalingRequest};
use dicke_stark::sweep::config::{
    ED_KEYS, LANDSCAPE_KEYS, MODEL_KEYS, SCALING_KEYS, SPECTRUM_KEYS, SWEEP_KEYS,
};
use dicke_stark::sweep::{
    help_text, model_from_config, observables_help, phase_boundary, resolve_g, run_sweep,
    write_output, Cell, Config, EdSettings, KeySpec, Provenance, SweepError, SweepSpec, Table,
};

enum Failure {
    Sweep(SweepError),
    /// The computation itself failed.
    Partial(String),
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        Failure::Sweep(e)
    }
}

type Run = Result<(), Failure>;

const COMMANDS: &[(&str, &str, &[&[KeySpec]])] = &[
    (
        "spectrum",
        "Lowest eigenpairs and ground-state observables",
        &[MODEL_KEYS, ED_KEYS, SPECTRUM_KEYS],
    ),
    (
        "sweep",
        "Grid of observables over one or two parameter axes",
        &[MODEL_KEYS, ED_KEYS, SWEEP_KEYS],
    ),
    (
        "meanfield",
        "Zero-temperature mean field and critical couplings",
        &[MODEL_KEYS],
    ),
    ("thermal", "Finite-temperature mean field", &[MODEL_KEYS]),
    (
        "landscape",
        "Free-energy landscape over the complex amplitude",
        &[MODEL_KEYS, LANDSCAPE_KEYS],
    ),
    (
        "scaling",
        "Power-law fits and data collapse on a sweep CSV",
        &[SCALING_KEYS],
    ),
];

fn cli() -> Command {
    let mut cmd = Command::new("dicke")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Anisotropic Dicke-Stark model with an A-square term")
        .subcommand_required(true)
        .after_help("Exit codes: 0 success, 1 config error, 2 partial failure, 3 I/O failure.");
    for (name, about, schema) in COMMANDS {
        let mut after = help_text(schema);
        if *name == "sweep" {
            after.push('\n');
            after.push_str(&observables_help());
        }
        cmd = cmd.subcommand(
            Command::new(*name)
                .about(*about)
                .arg(
                    Arg::new("config")
                        .value_name("CONFIG")
                        .value_parser(clap::value_parser!(PathBuf)),
                )
                .arg(
                    Arg::new("set")
                        .short('s')
                        .long("set")
                        .value_name("KEY=VALUE")
                        .action(ArgAction::Append)
                        .help("override one config key; repeatable"),
                )
                .after_help(after),
        );
    }
    cmd
}

fn load(m: &ArgMatches, schema: &[&[KeySpec]]) -> Result<Config, SweepError> {
    let mut c = Config::new(schema);
    if let Some(path) = m.get_one::<PathBuf>("config") {
        let text = std::fs::read_to_string(path).map_err(|e| SweepError::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
        c = c.parse(&text)?;
    }
    c.apply_overrides(
        m.get_many::<String>("set")
            .into_iter()
            .flatten()
            .map(String::as_str),
    )?;
    Ok(c)
}

fn opt_path(c: &Config, key: &str) -> Result<Option<PathBuf>, SweepError> {
    let v = c.get(key)?;
    Ok((!v.is_empty()).then(|| PathBuf::from(v)))
}

fn spectrum(c: &Config) -> Run {
    let (p, unit, t) = model_from_config(c)?;
    let p = resolve_g(&p, unit, t).map_err(Failure::Partial)?;
    let ed = EdSettings::from_config(c)?;
    let spec = match converge_cutoff_with(&p, ed.k, ed.tail_tol, ed.energy_tol, &ed.cutoff) {
        Ok(s) => s,
        Err(SpectraError::CutoffRunaway { cap, trail }) => {
            for s in &trail {
                eprintln!("n_max = {} e0 = {} tail = {:e}", s.n_max, s.e0, s.tail);
            }
            return Err(Failure::Partial(format!(
                "photon cutoff ran away past {cap}; the spectrum is not bounded below at these parameters"
            )));
        }
        Err(e) => return Err(Failure::Partial(e.to_string())),
    };
    let o = observables(&spec, &p).map_err(|e| Failure::Partial(e.to_string()))?;
    println!("g = {}", p.g);
    println!("n_max_used = {}", spec.n_max_used);
    println!("max_residual = {:e}", spec.max_residual());
    println!("e0 = {}", o.e0);
    println!("epsilon = {}", o.epsilon);
    println!("nph_total = {}", o.nph_total);
    println!("nph_density = {}", o.nph_density);
    println!("delta_x = {}", o.delta_x);
    println!("jz_density = {}", o.jz_density);
    if let Some(path) = opt_path(c, "output")? {
        let mut table = Table::new(vec![
            "index".into(),
            "sector".into(),
            "energy".into(),
            "residual".into(),
            "converged".into(),
        ]);
        for (i, pair) in spec.pairs.iter().enumerate() {
            table.rows.push(vec![
                Cell::Int(i as i64),
                Cell::Text(pair.sector.to_string()),
                Cell::Num(pair.energy),
                Cell::Num(pair.residual),
                Cell::Bool(pair.converged),
            ]);
        }
        write_output(&path, &table.to_csv())?;
    }
    if !spec.all_converged() {
        return Err(Failure::Partial(
            "some eigenpairs missed the residual tolerance".into(),
        ));
    }
    Ok(())
}

fn sweep(c: &Config) -> Run {
    let spec = SweepSpec::from_config(c)?;
    let out = PathBuf::from(c.get("output")?);
    let boundary = opt_path(c, "boundary_output")?;
    let threshold = c.f64("boundary_threshold")?;
    let res = run_sweep(&spec)?;
    let body = match c.get("format")? {
        "csv" => res.to_csv(),
        "json" => res.to_json(),
        f => {
            return Err(SweepError::Config(format!("format = '{f}', expected csv or json")).into())
        }
    };
    write_output(&out, &body)?;
    if let Some(path) = boundary {
        let table = phase_boundary(&spec, &res, threshold)?;
        write_output(&path, &table.to_csv())?;
    }
    if res.error_rows > 0 {
        return Err(Failure::Partial(format!(
            "{} of {} points failed",
            res.error_rows,
            res.table.rows.len()
        )));
    }
    Ok(())
}

fn criticality_line(name: &str, c: &Criticality) {
    match c {
        Criticality::Critical(g) => println!("{name} = {g}"),
        Criticality::NoTransition(nt) => {
            println!("{name} = none");
            println!("{name}_reason = {}", nt.reason());
            println!("{name}_unstable = {}", nt.is_unstable());
        }
    }
}

fn meanfield(c: &Config) -> Run {
    let (p, unit, t) = model_from_config(c)?;
    let p = resolve_g(&p, unit, t).map_err(Failure::Partial)?;
    let gc0 = zero::critical_coupling_zero(&p).map_err(|e| Failure::Partial(e.to_string()))?;
    println!("g = {}", p.g);
    criticality_line("gc0", &gc0);
    let v = zero::Validity::of(&p);
    println!("numerator_positive = {}", v.numerator_positive);
    println!("denominator_positive = {}", v.denominator_positive);
    println!("u_below_two_omega = {}", v.u_below_two_omega);
    println!(
        "beyond_rabi_stark_continuum = {}",
        v.beyond_rabi_stark_continuum
    );
    if t > 0.0 {
        let pt = ThermalPoint::new(p, t).map_err(|e| Failure::Partial(e.to_string()))?;
        criticality_line("gc_t", &thermal::critical_coupling_thermal(&pt));
    }
    let s = zero::order_parameters(&p).map_err(|e| Failure::Partial(e.to_string()))?;
    println!("alpha = {}", s.alpha);
    println!("varsigma = {}", s.varsigma);
    println!("energy_per_atom = {}", s.energy_per_atom);
    println!("phase = {:?}", s.phase);
    Ok(())
}

fn thermal_cmd(c: &Config) -> Run {
    let (p, unit, t) = model_from_config(c)?;
    let p = resolve_g(&p, unit, t).map_err(Failure::Partial)?;
    let pt = ThermalPoint::new(p, t).map_err(|e| Failure::Partial(e.to_string()))?;
    println!("g = {}", p.g);
    println!("temperature = {t}");
    criticality_line("gc_t", &thermal::critical_coupling_thermal(&pt));
    match thermal::critical_temperature(&p).map_err(|e| Failure::Partial(e.to_string()))? {
        thermal::CriticalTemperature::Finite(tc) => println!("tc = {tc}"),
        thermal::CriticalTemperature::NoFiniteTc { argument } => {
            println!("tc = none\ntc_argument = {argument}")
        }
    }
    let s = thermal::order_parameter_thermal(&pt).map_err(|e| Failure::Partial(e.to_string()))?;
    println!("alpha = {}", s.alpha_intensive);
    println!("free_energy_per_atom = {}", s.free_energy_per_atom);
    println!("phase = {:?}", s.phase);
    Ok(())
}

fn landscape(c: &Config) -> Run {
    let (p, unit, t) = model_from_config(c)?;
    let p = resolve_g(&p, unit, t).map_err(Failure::Partial)?;
    let pt = ThermalPoint::new(p, t).map_err(|e| Failure::Partial(e.to_string()))?;
    let res = (c.usize("nx")?, c.usize("ny")?);
    let xr = (c.f64("x_min")?, c.f64("x_max")?);
    let yr = (c.f64("y_min")?, c.f64("y_max")?);
    let output = opt_path(c, "output")?;
    let l = thermal::landscape_grid(&pt, xr, yr, res).map_err(|e| match e {
        thermal::ThermalError::InvalidRequest(m) => Failure::Sweep(SweepError::Config(m)),
        e => Failure::Partial(e.to_string()),
    })?;
    println!("g = {}", p.g);
    criticality_line("gc_t", &thermal::critical_coupling_thermal(&pt));
    match thermal::order_parameter_thermal(&pt) {
        Ok(s) => println!("phase = {:?}", s.phase),
        Err(e) => println!("phase = unknown ({e})"),
    }
    for m in &l.minima {
        println!("minimum = {} {} {}", m.x, m.y, m.value);
    }
    for m in &l.maxima {
        println!("maximum = {} {} {}", m.x, m.y, m.value);
    }
    if let Some(path) = output {
        let mut table = Table::new(vec!["x".into(), "y".into(), "f".into()]);
        for (iy, &y) in l.ys.iter().enumerate() {
            for (ix, &x) in l.xs.iter().enumerate() {
                table
                    .rows
                    .push(vec![Cell::Num(x), Cell::Num(y), Cell::Num(l.at(ix, iy))]);
            }
        }
        write_output(&path, &table.to_csv())?;
    }
    Ok(())
}

fn scaling(c: &Config) -> Run {
    let input =
        opt_path(c, "input")?.ok_or_else(|| SweepError::Config("input is required".into()))?;
    let req = ScalingRequest::from_config(c)?;
    let out = PathBuf::from(c.get("output")?);
    let text = std::fs::read_to_string(&input).map_err(|e| SweepError::Io {
        path: input.clone(),
        message: e.to_string(),
    })?;
    let table = Table::from_csv(&text)?;
    let records = scaling_report(&table, &req)?;
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    let doc = serde_json::json!({
        "provenance": Provenance::new(c.hash()),
        "records": records,
    });
    let mut body = serde_json::to_string_pretty(&doc).expect("json values");
    body.push('\n');
    write_output(&out, &body)?;
    if failed > 0 {
        return Err(Failure::Partial(format!(
            "{failed} of {} fits failed",
            records.len()
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let m = cli().get_matches();
    let (name, sub) = m.subcommand().expect("subcommand required");
    let schema = COMMANDS
        .iter()
        .find(|(n, ..)| *n == name)
        .expect("known subcommand")
        .2;
    let run = load(sub, schema)
        .map_err(Failure::from)
        .and_then(|c| match name {
            "spectrum" => spectrum(&c),
            "sweep" => sweep(&c),
            "meanfield" => meanfield(&c),
            "thermal" => thermal_cmd(&c),
            "landscape" => landscape(&c),
            _ => scaling(&c),
        });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Sweep(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Partial(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
