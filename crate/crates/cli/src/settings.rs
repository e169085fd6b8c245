//! Flags shared by the subcommands, merged with an optional `key=value`
//! config file. Flags given on the command line win over the file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use intertwine::QuadratureSpec;

use crate::Usage;

/// Parameter flags. Every value stays a string until the chosen check or
/// kernel decides how to read it.
#[derive(Debug, Default, Args)]
pub struct ParamFlags {
    /// Read further flags from a file of `key=value` lines.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Sign of the fractional order, 1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    /// Horizontal coordinates (or the Euclidean point), comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Vertical coordinates, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// Vertical frequency, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Check tolerance (defaults to the check's own).
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub quad_rel_tol: Option<String>,
    #[arg(long)]
    pub quad_abs_tol: Option<String>,
}

/// Names of the parameter flags, as they appear on the command line.
pub const PARAM_KEYS: &[&str] =
    &["m", "k", "n", "s", "sign", "z", "sigma", "y", "t", "tau", "B", "mu", "rho", "lambda"];

/// Everything the user asked for, after merging flags over the config file.
#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Merges `flags` (plus command-specific `extra` pairs) over the config
    /// file named by `--config`, if any.
    pub fn gather(flags: &ParamFlags, extra: &[(&str, Option<String>)]) -> Result<Self, Usage> {
        let given = [
            ("m", &flags.m),
            ("k", &flags.k),
            ("n", &flags.n),
            ("s", &flags.s),
            ("sign", &flags.sign),
            ("z", &flags.z),
            ("sigma", &flags.sigma),
            ("y", &flags.y),
            ("t", &flags.t),
            ("tau", &flags.tau),
            ("B", &flags.b),
            ("mu", &flags.mu),
            ("rho", &flags.rho),
            ("lambda", &flags.lambda),
            ("tol", &flags.tol),
            ("quad-rel-tol", &flags.quad_rel_tol),
            ("quad-abs-tol", &flags.quad_abs_tol),
        ];
        let mut values = BTreeMap::new();
        for (key, v) in given {
            if let Some(v) = v {
                values.insert(key.to_string(), v.clone());
            }
        }
        for (key, v) in extra {
            if let Some(v) = v {
                values.insert(key.to_string(), v.clone());
            }
        }
        if let Some(path) = &flags.config {
            let text =
                std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
            for (key, v) in parse_config(&text)? {
                values.entry(key).or_insert(v);
            }
        }
        Ok(Settings { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, Usage> {
        self.get(key)
            .map(|v| v.trim().parse::<f64>().map_err(|e| Usage(format!("bad value for {key}: `{v}`: {e}"))))
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<bool, Usage> {
        match self.get(key) {
            None => Ok(false),
            Some("true" | "1" | "yes" | "") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(Usage(format!("bad value for {key}: `{v}`"))),
        }
    }

    /// Parameter values that were supplied, by parameter name.
    pub fn params(&self) -> impl Iterator<Item = (&'static str, &str)> + '_ {
        PARAM_KEYS.iter().filter_map(|k| self.get(k).map(|v| (*k, v)))
    }

    /// The quadrature spec: `base` with any tolerance overrides applied.
    pub fn spec(&self, base: QuadratureSpec) -> Result<QuadratureSpec, Usage> {
        let mut spec = base;
        if let Some(r) = self.f64("quad-rel-tol")? {
            spec = spec.with_rel_tol(r);
        }
        if let Some(a) = self.f64("quad-abs-tol")? {
            spec = spec.with_abs_tol(a);
        }
        spec.validate().map_err(|e| Usage(e.to_string()))?;
        Ok(spec)
    }
}

/// `key=value` lines; blank lines and `#` comments are skipped and a leading
/// `--` on the key is tolerated. Underscores in keys read as dashes.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, Usage> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Usage(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}
