//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Every key must appear
//! in the schema of the command reading the file; a key may be given once.

use std::collections::BTreeMap;
use std::fmt::Write;

use sha2::{Digest, Sha256};

use super::SweepError;

/// One documented configuration key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeySpec {
    pub name: &'static str,
    pub unit: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

const fn key(
    name: &'static str,
    unit: &'static str,
    default: &'static str,
    help: &'static str,
) -> KeySpec {
    KeySpec {
        name,
        unit,
        default,
        help,
    }
}

pub const MODEL_KEYS: &[KeySpec] = &[
    key(
        "omega",
        "energy",
        "1",
        "cavity frequency ω; sets the energy unit",
    ),
    key("delta", "ω", "0.5", "atomic splitting Δ"),
    key("g", "ω or g_unit", "0.1", "rotating coupling g"),
    key(
        "g_unit",
        "-",
        "omega",
        "unit of g: omega, gc0 (zero-T critical coupling) or gc (thermal at `temperature`)",
    ),
    key("tau", "1", "2.5", "counter-rotating to rotating ratio τ"),
    key("u", "ω", "0.5", "Stark coupling U"),
    key("kappa", "1", "1.2", "A-square strength κ (D = κg²/Δ)"),
    key("n_atoms", "atoms", "200", "number of atoms N"),
    key(
        "temperature",
        "ω",
        "0",
        "temperature k_B T; 0 is the ground state",
    ),
];

pub const ED_KEYS: &[KeySpec] = &[
    key("k", "states", "1", "eigenpairs kept per parity sector"),
    key(
        "tail_tol",
        "1",
        "1e-8",
        "maximum ground-state weight in the top 10% of photon levels",
    ),
    key(
        "energy_tol",
        "ω",
        "1e-8",
        "maximum ground-energy change between cutoff rungs",
    ),
    key("n_start", "photons", "16", "first accepted photon cutoff"),
    key("growth", "1", "1.5", "cutoff growth factor per rung"),
    key(
        "n_max_cap",
        "photons",
        "600",
        "largest photon cutoff before giving up",
    ),
    key(
        "solver_tol",
        "ω",
        "1e-9",
        "eigenpair residual tolerance ‖Hv − Ev‖",
    ),
    key(
        "method",
        "-",
        "auto",
        "eigensolver: auto, dense, krylov or shift_invert",
    ),
    key(
        "dense_threshold",
        "states",
        "300",
        "largest block solved densely by `auto`",
    ),
    key("seed", "-", "25482304590", "start-vector seed"),
];

pub const SWEEP_KEYS: &[KeySpec] = &[
    key(
        "axis1",
        "-",
        "g",
        "first axis: g, U, tau, kappa, delta, T or N",
    ),
    key("axis1_from", "axis unit", "0.1", "first axis start"),
    key("axis1_to", "axis unit", "0.5", "first axis end"),
    key(
        "axis1_points",
        "points",
        "5",
        "first axis point count (>= 2, or 1 for a single value)",
    ),
    key(
        "axis1_values",
        "axis unit",
        "",
        "explicit comma-separated values; overrides from/to/points",
    ),
    key("axis2", "-", "none", "second axis, or none"),
    key("axis2_from", "axis unit", "0", "second axis start"),
    key("axis2_to", "axis unit", "1", "second axis end"),
    key("axis2_points", "points", "2", "second axis point count"),
    key(
        "axis2_values",
        "axis unit",
        "",
        "explicit comma-separated values; overrides from/to/points",
    ),
    key(
        "observables",
        "-",
        "nph_density",
        "comma-separated columns, see below",
    ),
    key("output", "path", "-", "output file, - for stdout"),
    key("format", "-", "csv", "csv or json"),
    key(
        "workers",
        "threads",
        "0",
        "parallel workers, 0 for all cores",
    ),
    key(
        "boundary_threshold",
        "1",
        "0.01",
        "nph_density level marking the phase boundary",
    ),
    key(
        "boundary_output",
        "path",
        "",
        "where to write the boundary along the g axis; empty to skip",
    ),
];

pub const SPECTRUM_KEYS: &[KeySpec] = &[key(
    "output",
    "path",
    "",
    "eigenpair CSV file, - for stdout; empty to skip",
)];

pub const LANDSCAPE_KEYS: &[KeySpec] = &[
    key(
        "x_min",
        "1",
        "-1.5",
        "real part range start of the intensive amplitude",
    ),
    key("x_max", "1", "1.5", "real part range end"),
    key("y_min", "1", "-1.5", "imaginary part range start"),
    key("y_max", "1", "1.5", "imaginary part range end"),
    key(
        "nx",
        "points",
        "121",
        "grid points along x (>= 32; odd puts a node on the axis)",
    ),
    key("ny", "points", "121", "grid points along y (>= 32)"),
    key("output", "path", "", "grid CSV file; empty to skip"),
];

pub const SCALING_KEYS: &[KeySpec] = &[
    key(
        "input",
        "path",
        "",
        "CSV with size, control and observable columns",
    ),
    key(
        "observable",
        "-",
        "epsilon",
        "epsilon, nph_density, delta_x or alpha_mf",
    ),
    key(
        "control_column",
        "-",
        "g",
        "column holding the control parameter",
    ),
    key("size_column", "-", "N", "column holding the system size"),
    key(
        "critical",
        "control unit",
        "",
        "critical value of the control parameter",
    ),
    key(
        "window_lo",
        "1",
        "0.01",
        "smallest |1 - control/critical| used in power-law fits",
    ),
    key(
        "window_hi",
        "1",
        "0.1",
        "largest |1 - control/critical| used in fits and collapse",
    ),
    key("side", "-", "both", "below, above or both"),
    key(
        "beta",
        "1",
        "",
        "scaling exponent β; empty for the table value",
    ),
    key("nu", "1", "1.5", "correlation-length exponent ν"),
    key("output", "path", "-", "JSON report file, - for stdout"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    schema: Vec<KeySpec>,
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn new(schema: &[&[KeySpec]]) -> Self {
        Self {
            schema: schema.iter().flat_map(|s| s.iter().copied()).collect(),
            values: BTreeMap::new(),
        }
    }

    pub fn schema(&self) -> &[KeySpec] {
        &self.schema
    }

    fn spec(&self, key: &str) -> Option<&KeySpec> {
        self.schema.iter().find(|k| k.name == key)
    }

    /// Reads a configuration file body.
    pub fn parse(mut self, text: &str) -> Result<Self, SweepError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(SweepError::Config(format!(
                    "line {}: expected key = value, got '{line}'",
                    i + 1
                )));
            };
            let k = k.trim();
            if self.values.contains_key(k) {
                return Err(SweepError::Config(format!(
                    "line {}: key '{k}' given twice",
                    i + 1
                )));
            }
            self.set(k, v.trim())
                .map_err(|e| SweepError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(self)
    }

    /// Sets one key, overriding the file.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SweepError> {
        if self.spec(key).is_none() {
            return Err(SweepError::Config(format!("unknown key '{key}'")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Applies `key=value` overrides.
    pub fn apply_overrides<'a>(
        &mut self,
        items: impl IntoIterator<Item = &'a str>,
    ) -> Result<(), SweepError> {
        for item in items {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| SweepError::Config(format!("override '{item}' is not key=value")))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Result<&str, SweepError> {
        match self.values.get(key) {
            Some(v) => Ok(v),
            None => self.spec(key).map(|s| s.default).ok_or_else(|| {
                SweepError::Config(format!("key '{key}' is not part of this command"))
            }),
        }
    }

    pub fn f64(&self, key: &str) -> Result<f64, SweepError> {
        let v = self.get(key)?;
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| SweepError::Config(format!("{key} = '{v}' is not a finite number")))
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, SweepError> {
        if self.get(key)?.is_empty() {
            Ok(None)
        } else {
            self.f64(key).map(Some)
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize, SweepError> {
        let v = self.get(key)?;
        v.parse()
            .map_err(|_| SweepError::Config(format!("{key} = '{v}' is not a non-negative integer")))
    }

    pub fn u64(&self, key: &str) -> Result<u64, SweepError> {
        let v = self.get(key)?;
        v.parse()
            .map_err(|_| SweepError::Config(format!("{key} = '{v}' is not a non-negative integer")))
    }

    /// Every key with its effective value, sorted, one `key = value` per line.
    pub fn canonical(&self) -> String {
        let mut keys: Vec<&KeySpec> = self.schema.iter().collect();
        keys.sort_by_key(|k| k.name);
        let mut out = String::new();
        for k in keys {
            let v = self.values.get(k.name).map_or(k.default, String::as_str);
            writeln!(out, "{} = {v}", k.name).expect("string write");
        }
        out
    }

    /// SHA-256 of [`Config::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

/// One line per key: name, unit, default and description.
pub fn help_text(schema: &[&[KeySpec]]) -> String {
    let mut out = String::from("Config keys (key = value; energies in units of ω):\n");
    for k in schema.iter().flat_map(|s| s.iter()) {
        let default = if k.default.is_empty() {
            "(none)"
        } else {
            k.default
        };
        writeln!(
            out,
            "  {:<20} [{}] default {default}: {}",
            k.name, k.unit, k.help
        )
        .expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let text = "# model\n g = 0.3\ntau=1.5\n\nn_atoms = 32\n";
        let mut c = Config::new(&[MODEL_KEYS]).parse(text).unwrap();
        assert_eq!(c.f64("g").unwrap(), 0.3);
        assert_eq!(c.f64("kappa").unwrap(), 1.2);
        c.apply_overrides(["g=0.4"]).unwrap();
        assert_eq!(c.f64("g").unwrap(), 0.4);
        assert_eq!(c.usize("n_atoms").unwrap(), 32);
    }

    #[test]
    fn rejects_unknown_and_duplicate() {
        assert!(Config::new(&[MODEL_KEYS]).parse("gg = 0.3").is_err());
        assert!(Config::new(&[MODEL_KEYS])
            .parse("g = 0.3\ng = 0.4")
            .is_err());
        assert!(Config::new(&[MODEL_KEYS]).parse("g 0.3").is_err());
        let mut c = Config::new(&[MODEL_KEYS]);
        assert!(c.apply_overrides(["tua=1"]).is_err());
        assert!(c.set("g", "abc").is_ok() && c.f64("g").is_err());
    }

    #[test]
    fn hash_tracks_effective_values() {
        let a = Config::new(&[MODEL_KEYS]).parse("g = 0.1").unwrap();
        let b = Config::new(&[MODEL_KEYS]);
        let c = Config::new(&[MODEL_KEYS]).parse("g = 0.2").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn help_lists_every_key() {
        let h = help_text(&[MODEL_KEYS, ED_KEYS, SWEEP_KEYS]);
        for k in MODEL_KEYS.iter().chain(ED_KEYS).chain(SWEEP_KEYS) {
            assert!(h.contains(k.name) && h.contains(k.unit));
        }
    }
}
