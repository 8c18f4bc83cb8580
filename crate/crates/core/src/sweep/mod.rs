//! Parameter sweeps over one or two axes, evaluated in parallel, written as
//! CSV or JSON.
//!
//! Every grid point is computed independently from the immutable spec with
//! fixed solver seeds, so the output does not depend on the number of
//! workers. A point that fails becomes a row with an `error` message.

pub mod analysis;
pub mod config;
pub mod table;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::meanfield_thermal::{self, ThermalPhase, ThermalPoint};
use crate::meanfield_zero::{self, Phase};
use crate::model::ModelParams;
use crate::spectra::{converge_cutoff_with, observables, CutoffOptions, Method, SolverOptions};
pub use config::{help_text, Config, KeySpec};
pub use table::{format_sig12, write_output, Cell, Provenance, Table};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{}: {message}", .path.display())]
    Io { path: PathBuf, message: String },
}

impl SweepError {
    /// Process exit code: 1 for configuration problems, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Config(_) | SweepError::Parse(_) => 1,
            SweepError::Io { .. } => 3,
        }
    }
}

/// Unit in which the configured `g` is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GUnit {
    Omega,
    /// Multiples of the zero-temperature critical coupling.
    Gc0,
    /// Multiples of the thermal critical coupling at the point's temperature.
    Gc,
}

impl GUnit {
    pub fn parse(s: &str) -> Result<Self, SweepError> {
        match s {
            "omega" => Ok(GUnit::Omega),
            "gc0" => Ok(GUnit::Gc0),
            "gc" => Ok(GUnit::Gc),
            _ => Err(SweepError::Config(format!(
                "g_unit = '{s}', expected omega, gc0 or gc"
            ))),
        }
    }
}

/// Converts `params.g` from `unit` to units of ω.
pub fn resolve_g(
    params: &ModelParams,
    unit: GUnit,
    temperature: f64,
) -> Result<ModelParams, String> {
    let scale = match unit {
        GUnit::Omega => return Ok(*params),
        GUnit::Gc0 => meanfield_zero::critical_coupling_zero(params)
            .map_err(|e| e.to_string())?
            .value(),
        GUnit::Gc => {
            let pt = ThermalPoint::new(*params, temperature).map_err(|e| e.to_string())?;
            meanfield_thermal::critical_coupling_thermal(&pt).value()
        }
    };
    let scale = scale.ok_or_else(|| {
        "g_unit refers to a critical coupling that does not exist here".to_string()
    })?;
    Ok(params.with_g(params.g * scale))
}

/// Model parameters, `g_unit` and temperature from a config.
pub fn model_from_config(c: &Config) -> Result<(ModelParams, GUnit, f64), SweepError> {
    let p = ModelParams::new(
        c.f64("omega")?,
        c.f64("delta")?,
        c.f64("g")?,
        c.f64("tau")?,
        c.f64("u")?,
        c.f64("kappa")?,
        c.usize("n_atoms")?,
    );
    p.validate()
        .map_err(|e| SweepError::Config(e.to_string()))?;
    let t = c.f64("temperature")?;
    if t < 0.0 {
        return Err(SweepError::Config(format!(
            "temperature = {t} must be >= 0"
        )));
    }
    Ok((p, GUnit::parse(c.get("g_unit")?)?, t))
}

/// Exact-diagonalization settings.
#[derive(Debug, Clone, PartialEq)]
pub struct EdSettings {
    pub k: usize,
    pub tail_tol: f64,
    pub energy_tol: f64,
    pub cutoff: CutoffOptions,
}

impl EdSettings {
    pub fn from_config(c: &Config) -> Result<Self, SweepError> {
        let method = match c.get("method")? {
            "auto" => Method::Auto,
            "dense" => Method::Dense,
            "krylov" => Method::Krylov,
            "shift_invert" => Method::ShiftInvert,
            m => return Err(SweepError::Config(format!("method = '{m}'"))),
        };
        let solver = SolverOptions {
            tol: c.f64("solver_tol")?,
            method,
            dense_threshold: c.usize("dense_threshold")?,
            seed: c.u64("seed")?,
            ..SolverOptions::default()
        };
        let k = c.usize("k")?;
        if k == 0 {
            return Err(SweepError::Config("k must be >= 1".into()));
        }
        Ok(Self {
            k,
            tail_tol: c.f64("tail_tol")?,
            energy_tol: c.f64("energy_tol")?,
            cutoff: CutoffOptions {
                n_start: c.usize("n_start")?,
                growth: c.f64("growth")?,
                n_max_cap: c.usize("n_max_cap")?,
                solver,
                ..CutoffOptions::default()
            },
        })
    }
}

impl Default for EdSettings {
    fn default() -> Self {
        Self {
            k: 1,
            tail_tol: 1e-8,
            energy_tol: 1e-8,
            cutoff: CutoffOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    G,
    U,
    Tau,
    Kappa,
    Delta,
    T,
    N,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Self, SweepError> {
        Ok(match s {
            "g" => Axis::G,
            "U" | "u" => Axis::U,
            "tau" => Axis::Tau,
            "kappa" => Axis::Kappa,
            "delta" => Axis::Delta,
            "T" | "temperature" => Axis::T,
            "N" | "n_atoms" => Axis::N,
            _ => {
                return Err(SweepError::Config(format!(
                    "axis '{s}', expected g, U, tau, kappa, delta, T or N"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::G => "g",
            Axis::U => "U",
            Axis::Tau => "tau",
            Axis::Kappa => "kappa",
            Axis::Delta => "delta",
            Axis::T => "T",
            Axis::N => "N",
        }
    }

    fn apply(self, p: &mut ModelParams, t: &mut f64, v: f64) {
        match self {
            Axis::G => p.g = v,
            Axis::U => p.u = v,
            Axis::Tau => p.tau = v,
            Axis::Kappa => p.kappa = v,
            Axis::Delta => p.delta = v,
            Axis::T => *t = v,
            Axis::N => p.n_atoms = v as usize,
        }
    }

    fn cell(self, v: f64) -> Cell {
        match self {
            Axis::N => Cell::Int(v as i64),
            _ => Cell::Num(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
}

impl AxisSpec {
    /// `points` evenly spaced values from `from` to `to` inclusive.
    pub fn linear(axis: Axis, from: f64, to: f64, points: usize) -> Result<Self, SweepError> {
        if points == 0 || !(from.is_finite() && to.is_finite()) {
            return Err(SweepError::Config(format!(
                "{}: need finite range and >= 1 point",
                axis.name()
            )));
        }
        if points == 1 && from != to {
            return Err(SweepError::Config(format!(
                "{}: one point needs from = to",
                axis.name()
            )));
        }
        let values = (0..points)
            .map(|i| {
                if points == 1 {
                    from
                } else {
                    from + (to - from) * i as f64 / (points - 1) as f64
                }
            })
            .collect();
        Self::list(axis, values)
    }

    pub fn list(axis: Axis, values: Vec<f64>) -> Result<Self, SweepError> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(SweepError::Config(format!(
                "{}: values must be finite and non-empty",
                axis.name()
            )));
        }
        if axis == Axis::N && values.iter().any(|&v| v < 1.0 || v.fract() != 0.0) {
            return Err(SweepError::Config(
                "N values must be positive integers".into(),
            ));
        }
        if axis == Axis::T && values.iter().any(|&v| v < 0.0) {
            return Err(SweepError::Config("T values must be >= 0".into()));
        }
        Ok(Self { axis, values })
    }

    fn from_config(c: &Config, prefix: &str) -> Result<Option<Self>, SweepError> {
        let name = c.get(prefix)?;
        if name == "none" {
            return Ok(None);
        }
        let axis = Axis::parse(name)?;
        let explicit = c.get(&format!("{prefix}_values"))?;
        if !explicit.is_empty() {
            let values = explicit
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| SweepError::Config(format!("{prefix}_values = '{explicit}'")))?;
            return Self::list(axis, values).map(Some);
        }
        Self::linear(
            axis,
            c.f64(&format!("{prefix}_from"))?,
            c.f64(&format!("{prefix}_to"))?,
            c.usize(&format!("{prefix}_points"))?,
        )
        .map(Some)
    }
}

/// Columns a sweep can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    E0,
    Epsilon,
    NphTotal,
    NphDensity,
    DeltaX,
    JzDensity,
    Gc0,
    AlphaMf,
    VarsigmaMf,
    EnergyMf,
    PhaseMf,
    GcT,
    Tc,
    AlphaT,
    FreeEnergyT,
    PhaseT,
}

impl Observable {
    pub const ALL: [Observable; 16] = [
        Observable::E0,
        Observable::Epsilon,
        Observable::NphTotal,
        Observable::NphDensity,
        Observable::DeltaX,
        Observable::JzDensity,
        Observable::Gc0,
        Observable::AlphaMf,
        Observable::VarsigmaMf,
        Observable::EnergyMf,
        Observable::PhaseMf,
        Observable::GcT,
        Observable::Tc,
        Observable::AlphaT,
        Observable::FreeEnergyT,
        Observable::PhaseT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::E0 => "e0",
            Observable::Epsilon => "epsilon",
            Observable::NphTotal => "nph_total",
            Observable::NphDensity => "nph_density",
            Observable::DeltaX => "delta_x",
            Observable::JzDensity => "jz_density",
            Observable::Gc0 => "gc0",
            Observable::AlphaMf => "alpha_mf",
            Observable::VarsigmaMf => "varsigma_mf",
            Observable::EnergyMf => "energy_mf",
            Observable::PhaseMf => "phase_mf",
            Observable::GcT => "gc_t",
            Observable::Tc => "tc",
            Observable::AlphaT => "alpha_t",
            Observable::FreeEnergyT => "free_energy_t",
            Observable::PhaseT => "phase_t",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Observable::E0 => "ED ground energy [ω]",
            Observable::Epsilon => "ED lowest excitation energy [ω]",
            Observable::NphTotal => "ED photon number <a†a>",
            Observable::NphDensity => "ED photon number per atom <a†a>/N",
            Observable::DeltaX => "ED quadrature spread of x = a + a†",
            Observable::JzDensity => "ED <Jz>/N",
            Observable::Gc0 => "zero-temperature critical coupling [ω]",
            Observable::AlphaMf => "zero-temperature photonic order parameter",
            Observable::VarsigmaMf => "zero-temperature atomic order parameter",
            Observable::EnergyMf => "zero-temperature mean-field energy per atom [ω]",
            Observable::PhaseMf => "zero-temperature phase label",
            Observable::GcT => "thermal critical coupling at T [ω]",
            Observable::Tc => "critical temperature at g [ω]",
            Observable::AlphaT => "thermal order parameter (intensive)",
            Observable::FreeEnergyT => "mean-field free energy per atom [ω]",
            Observable::PhaseT => "thermal phase label",
        }
    }

    pub fn parse(s: &str) -> Result<Self, SweepError> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| SweepError::Config(format!("unknown observable '{s}'")))
    }

    fn needs_ed(self) -> bool {
        matches!(
            self,
            Observable::E0
                | Observable::Epsilon
                | Observable::NphTotal
                | Observable::NphDensity
                | Observable::DeltaX
                | Observable::JzDensity
        )
    }
}

/// Help text describing every observable column.
pub fn observables_help() -> String {
    let mut s = String::from("Observables:\n");
    for o in Observable::ALL {
        s += &format!("  {:<20} {}\n", o.name(), o.description());
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub g_unit: GUnit,
    pub temperature: f64,
    pub axis1: AxisSpec,
    pub axis2: Option<AxisSpec>,
    pub observables: Vec<Observable>,
    pub ed: EdSettings,
    /// Worker threads, 0 for the rayon default.
    pub workers: usize,
    pub config_hash: String,
}

impl SweepSpec {
    pub fn from_config(c: &Config) -> Result<Self, SweepError> {
        let (base, g_unit, temperature) = model_from_config(c)?;
        let axis1 = AxisSpec::from_config(c, "axis1")?
            .ok_or_else(|| SweepError::Config("axis1 is required".into()))?;
        let axis2 = AxisSpec::from_config(c, "axis2")?;
        if axis2.as_ref().is_some_and(|a| a.axis == axis1.axis) {
            return Err(SweepError::Config("axis1 and axis2 must differ".into()));
        }
        let list = c.get("observables")?;
        let observables = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Observable::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            base,
            g_unit,
            temperature,
            axis1,
            axis2,
            observables,
            ed: EdSettings::from_config(c)?,
            workers: c.usize("workers")?,
            config_hash: c.hash(),
        })
    }

    fn axes(&self) -> Vec<&AxisSpec> {
        std::iter::once(&self.axis1)
            .chain(self.axis2.as_ref())
            .collect()
    }

    /// Grid points in row order: axis1 outer, axis2 inner.
    pub fn grid(&self) -> Vec<(f64, Option<f64>)> {
        match &self.axis2 {
            None => self.axis1.values.iter().map(|&a| (a, None)).collect(),
            Some(ax2) => self
                .axis1
                .values
                .iter()
                .flat_map(|&a| ax2.values.iter().map(move |&b| (a, Some(b))))
                .collect(),
        }
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self
            .axes()
            .iter()
            .map(|a| a.axis.name().to_string())
            .collect();
        if self.g_unit != GUnit::Omega {
            cols.push("g_eff".into());
        }
        cols.extend(self.observables.iter().map(|o| o.name().to_string()));
        cols.extend(["n_max_used", "max_residual", "converged", "error"].map(String::from));
        cols
    }

    /// Parameters and temperature at a grid point, before `g_unit` is applied.
    pub fn point(&self, a: f64, b: Option<f64>) -> (ModelParams, f64) {
        let mut p = self.base;
        let mut t = self.temperature;
        self.axis1.axis.apply(&mut p, &mut t, a);
        if let (Some(ax), Some(b)) = (&self.axis2, b) {
            ax.axis.apply(&mut p, &mut t, b);
        }
        (p, t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub table: Table,
    pub provenance: Provenance,
    pub error_rows: usize,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        self.table.to_csv()
    }

    pub fn to_json(&self) -> String {
        self.table.to_json(&self.provenance)
    }
}

struct Evaluated {
    g_eff: f64,
    cells: Vec<Cell>,
    n_max_used: Option<usize>,
    max_residual: Option<f64>,
    converged: Option<bool>,
}

fn phase_text(p: Phase) -> Cell {
    Cell::Text(match p {
        Phase::Normal => "normal".into(),
        Phase::Superradiant => "superradiant".into(),
    })
}

fn thermal_phase_text(p: ThermalPhase) -> Cell {
    Cell::Text(match p {
        ThermalPhase::Normal => "normal".into(),
        ThermalPhase::Superradiant => "superradiant".into(),
        ThermalPhase::Unstable => "unstable".into(),
    })
}

fn evaluate(spec: &SweepSpec, p: ModelParams, t: f64) -> Result<Evaluated, String> {
    p.validate().map_err(|e| e.to_string())?;
    let p = resolve_g(&p, spec.g_unit, t)?;
    let obs = &spec.observables;
    let mut out = Evaluated {
        g_eff: p.g,
        cells: Vec::new(),
        n_max_used: None,
        max_residual: None,
        converged: None,
    };

    let ed = if obs.iter().any(|o| o.needs_ed()) {
        let s = converge_cutoff_with(
            &p,
            spec.ed.k,
            spec.ed.tail_tol,
            spec.ed.energy_tol,
            &spec.ed.cutoff,
        )
        .map_err(|e| e.to_string())?;
        out.n_max_used = Some(s.n_max_used);
        out.max_residual = Some(s.max_residual());
        out.converged = Some(s.all_converged());
        Some(observables(&s, &p).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let needs = |list: &[Observable]| obs.iter().any(|o| list.contains(o));
    let mf = if needs(&[
        Observable::AlphaMf,
        Observable::VarsigmaMf,
        Observable::EnergyMf,
        Observable::PhaseMf,
    ]) {
        Some(meanfield_zero::order_parameters(&p).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let point = ThermalPoint::new(p, t).map_err(|e| e.to_string())?;
    let th = if needs(&[
        Observable::AlphaT,
        Observable::FreeEnergyT,
        Observable::PhaseT,
    ]) {
        Some(meanfield_thermal::order_parameter_thermal(&point).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let opt = |x: Option<f64>| x.map_or(Cell::Empty, Cell::Num);
    for o in obs {
        let cell = match o {
            Observable::E0 => Cell::Num(ed.expect("ed").e0),
            Observable::Epsilon => Cell::Num(ed.expect("ed").epsilon),
            Observable::NphTotal => Cell::Num(ed.expect("ed").nph_total),
            Observable::NphDensity => Cell::Num(ed.expect("ed").nph_density),
            Observable::DeltaX => Cell::Num(ed.expect("ed").delta_x),
            Observable::JzDensity => Cell::Num(ed.expect("ed").jz_density),
            Observable::Gc0 => opt(meanfield_zero::critical_coupling_zero(&p)
                .map_err(|e| e.to_string())?
                .value()),
            Observable::AlphaMf => Cell::Num(mf.expect("mf").alpha),
            Observable::VarsigmaMf => Cell::Num(mf.expect("mf").varsigma),
            Observable::EnergyMf => Cell::Num(mf.expect("mf").energy_per_atom),
            Observable::PhaseMf => phase_text(mf.expect("mf").phase),
            Observable::GcT => opt(meanfield_thermal::critical_coupling_thermal(&point).value()),
            Observable::Tc => opt(meanfield_thermal::critical_temperature(&p)
                .map_err(|e| e.to_string())?
                .value()),
            Observable::AlphaT => Cell::Num(th.expect("thermal").alpha_intensive),
            Observable::FreeEnergyT => Cell::Num(th.expect("thermal").free_energy_per_atom),
            Observable::PhaseT => thermal_phase_text(th.expect("thermal").phase),
        };
        out.cells.push(cell);
    }
    Ok(out)
}

/// Evaluates every grid point of `spec`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    let grid = spec.grid();
    let eval = |&(a, b): &(f64, Option<f64>)| {
        let (p, t) = spec.point(a, b);
        catch_unwind(AssertUnwindSafe(|| evaluate(spec, p, t)))
            .unwrap_or_else(|_| Err("internal panic while evaluating this point".into()))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| SweepError::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<Evaluated, String>> =
        pool.install(|| grid.par_iter().map(eval).collect());

    let mut table = Table::new(spec.columns());
    let mut error_rows = 0;
    for (&(a, b), res) in grid.iter().zip(results) {
        let mut row = vec![spec.axis1.axis.cell(a)];
        if let (Some(ax), Some(b)) = (&spec.axis2, b) {
            row.push(ax.axis.cell(b));
        }
        match res {
            Ok(e) => {
                if spec.g_unit != GUnit::Omega {
                    row.push(Cell::Num(e.g_eff));
                }
                row.extend(e.cells);
                row.push(e.n_max_used.map_or(Cell::Empty, |n| Cell::Int(n as i64)));
                row.push(e.max_residual.map_or(Cell::Empty, Cell::Num));
                row.push(e.converged.map_or(Cell::Empty, Cell::Bool));
                row.push(Cell::Empty);
            }
            Err(msg) => {
                error_rows += 1;
                let blanks = table.columns.len() - row.len() - 1;
                row.extend(std::iter::repeat_n(Cell::Empty, blanks));
                row.push(Cell::Text(msg));
            }
        }
        table.rows.push(row);
    }
    Ok(SweepResult {
        table,
        provenance: Provenance::new(spec.config_hash.clone()),
        error_rows,
    })
}

/// Where `nph_density` first reaches `threshold` along the g axis, for every
/// value of the other axis, by linear interpolation between grid points.
/// Columns: the other axis (if any), `g_boundary`, `gc0`, `ratio`.
pub fn phase_boundary(
    spec: &SweepSpec,
    result: &SweepResult,
    threshold: f64,
) -> Result<Table, SweepError> {
    let t = &result.table;
    let col = |name: &str| {
        t.column(name)
            .ok_or_else(|| SweepError::Config(format!("sweep has no '{name}' column")))
    };
    let nph = col("nph_density")?;
    let g_col = if spec.g_unit == GUnit::Omega {
        col("g")?
    } else {
        col("g_eff")?
    };
    // column index and kind of the non-g axis
    let other = match (&spec.axis1.axis, &spec.axis2) {
        (Axis::G, other) => other.as_ref().map(|o| (1usize, o.axis)),
        (a, Some(o)) if o.axis == Axis::G => Some((0, *a)),
        _ => return Err(SweepError::Config("boundary needs a g axis".into())),
    };

    let mut groups: Vec<(Option<f64>, Vec<&Vec<Cell>>)> = Vec::new();
    for row in &t.rows {
        let key = other.map(|(i, _)| row[i].as_f64().expect("axis cell"));
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, rows)) => rows.push(row),
            None => groups.push((key, vec![row])),
        }
    }

    let mut cols: Vec<String> = other.iter().map(|(_, a)| a.name().to_string()).collect();
    cols.extend(["g_boundary", "gc0", "ratio"].map(String::from));
    let mut out = Table::new(cols);
    for (key, mut rows) in groups {
        rows.retain(|r| r[nph].as_f64().is_some() && r[g_col].as_f64().is_some());
        rows.sort_by(|a, b| {
            a[g_col]
                .as_f64()
                .unwrap()
                .total_cmp(&b[g_col].as_f64().unwrap())
        });
        let crossing = rows.windows(2).find_map(|w| {
            let (g0, n0) = (w[0][g_col].as_f64()?, w[0][nph].as_f64()?);
            let (g1, n1) = (w[1][g_col].as_f64()?, w[1][nph].as_f64()?);
            (n0 < threshold && n1 >= threshold)
                .then(|| g0 + (threshold - n0) * (g1 - g0) / (n1 - n0))
        });
        let mut p = spec.base;
        let mut temp = spec.temperature;
        if let (Some((_, axis)), Some(v)) = (other, key) {
            axis.apply(&mut p, &mut temp, v);
        }
        let gc0 = meanfield_zero::critical_coupling_zero(&p)
            .ok()
            .and_then(|c| c.value());
        let mut row: Vec<Cell> = key.into_iter().map(Cell::Num).collect();
        row.push(crossing.map_or(Cell::Empty, Cell::Num));
        row.push(gc0.map_or(Cell::Empty, Cell::Num));
        row.push(match (crossing, gc0) {
            (Some(g), Some(c)) => Cell::Num(g / c),
            _ => Cell::Empty,
        });
        out.rows.push(row);
    }
    Ok(out)
}
