//! `intertwine`: evaluate kernels, run identity checks and sweep them over
//! parameter grids.
//!
//! Exit status is 0 when every check passes, 1 when any fails and 2 for usage
//! or I/O errors.

mod settings;
mod sweep;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use intertwine::htype::{GroupPoint, HTypeStructure};
use intertwine::kernels::{self, FracOrder};
use intertwine::verify::{self, CheckDescriptor, CheckResult, Params, UsageError};
use intertwine::{Error, QuadratureSpec};

use settings::{ParamFlags, Settings};

/// A usage or I/O problem; reported on stderr with exit status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl From<UsageError> for Usage {
    fn from(e: UsageError) -> Self {
        Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "intertwine",
    version,
    about = "Kernels, fractional operators and identity checks on Euclidean space and H-type groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one named check and print its result row.
    Verify {
        #[arg(long)]
        check: Option<String>,
        /// Print a JSON object instead of a CSV row.
        #[arg(long)]
        json: bool,
        /// Print the CSV header line before the row.
        #[arg(long)]
        header: bool,
        #[command(flatten)]
        flags: ParamFlags,
    },
    /// Run a check over the Cartesian product of parameter sweeps.
    Table {
        #[arg(long)]
        check: Option<String>,
        /// `key=start:stop:step`, stop included; repeat for a product.
        #[arg(long = "sweep", value_name = "KEY=START:STOP:STEP")]
        sweeps: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        flags: ParamFlags,
    },
    /// Evaluate a kernel or constant at one point.
    Eval {
        #[arg(long)]
        kernel: Option<String>,
        #[command(flatten)]
        flags: ParamFlags,
    },
    /// List the checks with their parameters and default tolerances.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Verify { check, json, header, flags } => cmd_verify(check, json, header, &flags),
        Command::Table { check, sweeps, out, flags } => cmd_table(check, &sweeps, out, &flags),
        Command::Eval { kernel, flags } => cmd_eval(kernel, &flags),
        Command::List => {
            cmd_list();
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn valid_ids() -> String {
    verify::list_checks().iter().map(|d| d.id.to_lowercase()).collect::<Vec<_>>().join(", ")
}

fn lookup(check: Option<&str>) -> Result<&'static CheckDescriptor, Usage> {
    let id = check.ok_or_else(|| Usage(format!("--check is required; valid checks: {}", valid_ids())))?;
    verify::descriptor(id).ok_or_else(|| Usage(format!("unknown check `{id}`; valid checks: {}", valid_ids())))
}

/// Parameters of `desc` present in the settings. Flags the check does not
/// take are ignored, so one config file can serve several checks.
fn check_params(desc: &CheckDescriptor, settings: &Settings) -> Result<Params, Usage> {
    let mut params = Params::new();
    for (key, value) in settings.params() {
        if desc.param_names().any(|n| n == key) {
            params.insert(key.to_string(), verify::parse_param(key, value)?);
        }
    }
    Ok(params)
}

fn report_note(r: &CheckResult) {
    if let Some(note) = &r.note {
        eprintln!("{}: {note}", r.check_id);
    }
}

fn cmd_verify(check: Option<String>, json: bool, header: bool, flags: &ParamFlags) -> Result<bool, Usage> {
    let settings = Settings::gather(flags, &[("check", check), ("json", json.then(|| "true".to_string()))])?;
    let desc = lookup(settings.get("check"))?;
    let params = check_params(desc, &settings)?;
    let tol = settings.f64("tol")?;
    let spec = settings.spec(verify::spec_for_tol(tol.unwrap_or(desc.tol)))?;
    let result = verify::run_check(desc.id, &params, tol, &spec)?;
    report_note(&result);
    if settings.flag("json")? {
        println!("{}", result.to_json());
    } else {
        if header || settings.flag("header")? {
            println!("{}", desc.csv_header());
        }
        println!("{}", result.csv_row());
    }
    Ok(result.pass)
}

fn cmd_table(
    check: Option<String>,
    sweeps: &[String],
    out: Option<PathBuf>,
    flags: &ParamFlags,
) -> Result<bool, Usage> {
    let settings = Settings::gather(flags, &[("check", check)])?;
    let desc = lookup(settings.get("check"))?;
    let out =
        out.or_else(|| settings.get("out").map(PathBuf::from)).ok_or_else(|| Usage("--out is required".into()))?;
    let mut sweeps: Vec<_> = sweeps.iter().map(|s| sweep::parse_sweep(s)).collect::<Result<_, _>>()?;
    if let Some(s) = settings.get("sweep") {
        sweeps.push(sweep::parse_sweep(s)?);
    }
    if sweeps.is_empty() {
        return Err(Usage("at least one --sweep is required".into()));
    }
    for s in &sweeps {
        if !desc.param_names().any(|n| n == s.key) {
            return Err(Usage(format!("check {} has no parameter `{}` to sweep", desc.id, s.key)));
        }
        if verify::VECTOR_PARAMS.contains(&s.key.as_str()) {
            return Err(Usage(format!("vector parameter `{}` cannot be swept", s.key)));
        }
    }
    let base = check_params(desc, &settings)?;
    let tol = settings.f64("tol")?;
    let spec = settings.spec(verify::spec_for_tol(tol.unwrap_or(desc.tol)))?;

    // validate every combination up front so usage errors never cost a run
    let combos = sweep::product(&sweeps)
        .into_iter()
        .map(|combo| {
            let mut p = base.clone();
            for (k, v) in combo {
                p.insert(k.clone(), verify::parse_param(&k, &v)?);
            }
            Ok(p)
        })
        .collect::<Result<Vec<Params>, Usage>>()?;
    for p in &combos {
        for name in desc.required {
            if !p.contains_key(*name) {
                return Err(UsageError::MissingParam { check: desc.id, name }.into());
            }
        }
    }

    let file = File::create(&out).map_err(|e| Usage(format!("cannot write {}: {e}", out.display())))?;
    let results =
        combos.par_iter().map(|p| verify::run_check(desc.id, p, tol, &spec)).collect::<Result<Vec<_>, _>>()?;

    let io = |e: std::io::Error| Usage(format!("cannot write {}: {e}", out.display()));
    let mut w = BufWriter::new(file);
    writeln!(w, "{}", desc.csv_header()).map_err(io)?;
    for r in &results {
        report_note(r);
        writeln!(w, "{}", r.csv_row()).map_err(io)?;
    }
    w.flush().map_err(io)?;
    let failed = results.iter().filter(|r| !r.pass).count();
    eprintln!("{} rows written to {}, {failed} failed", results.len(), out.display());
    Ok(failed == 0)
}

fn cmd_list() {
    for d in verify::list_checks() {
        let optional: Vec<String> = d.optional.iter().map(|(n, v)| format!("[{n}={v}]")).collect();
        println!(
            "{:<18} tol {:<6e} {} {}  {}",
            d.id.to_lowercase(),
            d.tol,
            d.required.join(" "),
            optional.join(" "),
            d.summary
        );
    }
}

const KERNELS: &[&str] =
    &["euclid_ext", "euclid_fundsol", "ghc", "ext_q", "thin_k", "fundsol", "const_c", "gamma_ratio"];

/// Reads evaluator arguments out of the settings.
struct EvalArgs<'a>(&'a Settings);

impl EvalArgs<'_> {
    fn scalar(&self, key: &str) -> Result<f64, Usage> {
        self.0.f64(key)?.ok_or_else(|| Usage(format!("--{key} is required")))
    }

    fn count(&self, key: &str) -> Result<usize, Usage> {
        let v = self.scalar(key)?;
        if !(v >= 0.0 && v.fract() == 0.0) {
            return Err(Usage(format!("--{key} must be a non-negative integer")));
        }
        Ok(v as usize)
    }

    fn vector(&self, key: &str) -> Result<Vec<f64>, Usage> {
        let text = self.0.get(key).ok_or_else(|| Usage(format!("--{key} is required")))?;
        text.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| Usage(format!("bad value for {key}: `{v}`: {e}"))))
            .collect()
    }

    fn order(&self) -> Result<FracOrder, Usage> {
        let s = self.scalar("s")?;
        let sign = self.0.f64("sign")?.unwrap_or(1.0);
        let o = if sign == 1.0 {
            FracOrder::plus(s)
        } else if sign == -1.0 {
            FracOrder::minus(s)
        } else {
            return Err(Usage(format!("--sign must be 1 or -1, got {sign}")));
        };
        o.map_err(|e| Usage(e.to_string()))
    }

    fn group(&self) -> Result<(HTypeStructure, GroupPoint), Usage> {
        let structure =
            HTypeStructure::standard_for(self.count("m")?, self.count("k")?).map_err(|e| Usage(e.to_string()))?;
        Ok((structure, GroupPoint::new(self.vector("z")?, self.vector("sigma")?)))
    }

    fn euclid(&self) -> Result<(usize, Vec<f64>), Usage> {
        let x = self.vector("z")?;
        let n = match self.0.f64("n")? {
            Some(_) => self.count("n")?,
            None => x.len(),
        };
        Ok((n, x))
    }
}

fn cmd_eval(kernel: Option<String>, flags: &ParamFlags) -> Result<bool, Usage> {
    let settings = Settings::gather(flags, &[("kernel", kernel)])?;
    let name =
        settings.get("kernel").ok_or_else(|| Usage(format!("--kernel is required; one of {}", KERNELS.join(", "))))?;
    let a = EvalArgs(&settings);
    let spec = settings.spec(QuadratureSpec::default())?;
    let value = match name {
        "euclid_ext" => {
            let (n, x) = a.euclid()?;
            kernels::euclid_ext_kernel(n, a.order()?, &x, a.scalar("y")?, a.scalar("t")?)
        }
        "euclid_fundsol" => {
            let (n, x) = a.euclid()?;
            kernels::euclid_fundsol(n, a.order()?, &x, a.scalar("y")?)
        }
        "ghc" => {
            let (st, g) = a.group()?;
            kernels::ghc_heat_kernel(&st, &g, a.scalar("t")?, &spec)
        }
        "ext_q" => {
            let (st, g) = a.group()?;
            kernels::ext_kernel_q(&st, a.order()?, &g, a.scalar("t")?, a.scalar("y")?, &spec)
        }
        "thin_k" => {
            let (st, g) = a.group()?;
            kernels::thin_kernel_k(&st, a.order()?, &g, a.scalar("t")?, &spec)
        }
        "fundsol" => {
            let (st, g) = a.group()?;
            kernels::fundsol_closed(&st, a.order()?, &g, a.scalar("y")?)
        }
        "const_c" => Ok(kernels::const_c(a.count("m")?, a.count("k")?, a.order()?)),
        "gamma_ratio" => {
            let s = a.order()?.s();
            Ok(kernels::gamma_ratio(a.count("m")?, a.count("k")?, s))
        }
        other => return Err(Usage(format!("unknown kernel `{other}`; one of {}", KERNELS.join(", ")))),
    };
    match value {
        Ok(v) => {
            println!("{}", significant(v, 15));
            Ok(true)
        }
        Err(e @ (Error::InvalidArgument(_) | Error::UnsupportedDimension(_) | Error::Pole(_))) => {
            Err(Usage(e.to_string()))
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(false)
        }
    }
}

/// `v` with `digits` significant digits, fixed-point when that stays short.
fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.prec$e}", prec = digits - 1)
    }
}
