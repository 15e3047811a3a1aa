//! Command-line front end: benchmark runs with CSV output and refinement studies.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::cases::{build_initial, parse_key_values, spec_from_entries, CaseId, CaseSpec, ConfigEntry};
use crate::error::{Error, Result};
use crate::output::{diagnostics_row, state_csv, DIAGNOSTICS_HEADER};
use crate::scheme::{run_with, Boundary, Regularization, RunResult, SchemeConfig};
use crate::study::error_study;

#[derive(Debug, Parser)]
#[command(name = "sgmix", version, about = "Binary stiffened-gas mixture shock-tube solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one case and write final.csv, diagnostics.csv and optional snapshots.
    Run(RunArgs),
    /// Compare coarse runs against a fine reference run.
    ErrorStudy(StudyArgs),
    /// Print the effective case configuration in key = value form.
    ShowCase(CaseArgs),
}

/// Case selection and overrides shared by all subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct CaseArgs {
    /// Benchmark case A..G.
    #[arg(long)]
    pub case: Option<String>,
    /// key = value configuration file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of cells.
    #[arg(long)]
    pub n: Option<usize>,
    /// Regularization: qgd or qhd.
    #[arg(long)]
    pub reg: Option<Regularization>,
    /// Time-scale coefficient a in tau = a h / c_s.
    #[arg(long)]
    pub a: Option<f64>,
    /// Courant number beta.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Schmidt coefficient a_S scaling the artificial viscosity.
    #[arg(long)]
    pub schmidt: Option<f64>,
    /// Inverse-Prandtl knob as reported with the benchmarks.
    #[arg(long)]
    pub prandtl_inv: Option<f64>,
    /// Final time in seconds.
    #[arg(long)]
    pub t_fin: Option<f64>,
    /// Boundary treatment: copy or periodic.
    #[arg(long)]
    pub boundary: Option<Boundary>,
    /// Add the viscous term to the QHD stress.
    #[arg(long)]
    pub qhd_viscosity: bool,
    /// Include |u| in the denominator of tau.
    #[arg(long)]
    pub i_tau: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Output directory (default: out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a snapshot every this many steps (0: none).
    #[arg(long)]
    pub stride: Option<usize>,
    /// Write a diagnostics row every this many steps; the last step is always written.
    #[arg(long, default_value_t = 1)]
    pub diag_stride: usize,
}

#[derive(Debug, Clone, Args)]
pub struct StudyArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Coarse cell counts.
    #[arg(long, value_delimiter = ',', default_values_t = vec![250usize, 500, 1000])]
    pub ns: Vec<usize>,
    /// Reference cell count.
    #[arg(long, default_value_t = 8000)]
    pub n_ref: usize,
    /// Output directory (default: out).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved run parameters.
#[derive(Debug, Clone)]
pub struct Setup {
    pub spec: CaseSpec,
    pub cfg: SchemeConfig,
    pub out: Option<PathBuf>,
    pub stride: Option<usize>,
}

impl Setup {
    pub fn n(&self) -> usize {
        self.spec.defaults.n_coarse
    }

    /// Configuration text that reproduces this setup.
    pub fn config_string(&self) -> String {
        let mut s = self.spec.to_config_string();
        s.push_str(&format!("boundary = {}\n", self.cfg.boundary));
        s.push_str(&format!("qhd_viscosity = {}\n", self.cfg.qhd_viscosity));
        s.push_str(&format!("i_tau = {}\n", self.cfg.i_tau));
        s
    }
}

fn entry(key: &str, value: String) -> ConfigEntry {
    ConfigEntry {
        line: 0,
        key: key.into(),
        value,
    }
}

fn flag(e: &ConfigEntry) -> Result<bool> {
    match e.value.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::Parse {
            line: e.line,
            msg: format!("'{}' is not a boolean for key '{}'", e.value, e.key),
        }),
    }
}

/// Merges the config file, `--case` and flag overrides. Without either a
/// case or a config file the run uses `default_case`.
pub fn resolve(args: &CaseArgs, default_case: CaseId) -> Result<Setup> {
    let mut entries = match &args.config {
        Some(path) => {
            parse_key_values(&fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?)?
        }
        None => Vec::new(),
    };
    let case = match &args.case {
        Some(c) => Some(c.parse::<CaseId>()?),
        None if entries.iter().any(|e| e.key == "case") => None,
        None => Some(default_case),
    };
    if let Some(c) = case {
        entries.retain(|e| e.key != "case");
        entries.insert(0, entry("case", c.to_string()));
    }
    let (mut spec, rest) = spec_from_entries(&entries)?;
    let mut cfg_extra = (Boundary::Copy, false, false);
    let (mut out, mut stride) = (None, None);
    for e in &rest {
        match e.key.as_str() {
            "boundary" => cfg_extra.0 = e.value.parse()?,
            "qhd_viscosity" => cfg_extra.1 = flag(e)?,
            "i_tau" => cfg_extra.2 = flag(e)?,
            "out" => out = Some(PathBuf::from(&e.value)),
            "stride" => {
                stride = Some(e.value.parse().map_err(|_| Error::Parse {
                    line: e.line,
                    msg: format!("'{}' is not a step count for key 'stride'", e.value),
                })?)
            }
            _ => {
                return Err(Error::Parse {
                    line: e.line,
                    msg: format!("unknown key '{}'", e.key),
                })
            }
        }
    }
    let overrides = [
        ("n", args.n.map(|v| v.to_string())),
        ("reg", args.reg.map(|v| v.to_string())),
        ("a", args.a.map(|v| format!("{v:?}"))),
        ("beta", args.beta.map(|v| format!("{v:?}"))),
        ("schmidt", args.schmidt.map(|v| format!("{v:?}"))),
        ("prandtl_inv", args.prandtl_inv.map(|v| format!("{v:?}"))),
        ("t_fin", args.t_fin.map(|v| format!("{v:?}"))),
    ];
    for (k, v) in overrides {
        if let Some(v) = v {
            spec.apply(&entry(k, v))?;
        }
    }
    spec.validate()?;
    let mut cfg = spec.scheme_config();
    cfg.boundary = args.boundary.unwrap_or(cfg_extra.0);
    cfg.qhd_viscosity = args.qhd_viscosity || cfg_extra.1;
    cfg.i_tau = args.i_tau || cfg_extra.2;
    cfg.validate()?;
    if !(spec.t_fin >= 0.0) || !spec.t_fin.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "t_fin must be non-negative, got {}",
            spec.t_fin
        )));
    }
    Ok(Setup { spec, cfg, out, stride })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Error raised before or after the solver, as opposed to by it.
#[derive(Debug)]
pub enum CliError {
    Setup(Error),
    Solver(Error),
}

/// Runs one case, writing outputs under `dir`.
///
/// Files: `case.cfg`, `diagnostics.csv`, `final.csv`, `snapshot_<step>.csv`
/// every `stride` steps, and `failure.txt` if the solver aborts.
pub fn run_case(
    setup: &Setup,
    dir: &Path,
    stride: usize,
    diag_stride: usize,
) -> std::result::Result<RunResult, CliError> {
    let io = |e: std::io::Error| CliError::Setup(Error::Io(format!("{}: {e}", dir.display())));
    fs::create_dir_all(dir).map_err(io)?;
    write_file(&dir.join("case.cfg"), &setup.config_string()).map_err(CliError::Setup)?;
    let _ = fs::remove_file(dir.join("failure.txt"));
    let mesh = setup.spec.mesh(setup.n()).map_err(CliError::Setup)?;
    let init = build_initial(&setup.spec, &mesh).map_err(CliError::Setup)?;
    let diag_stride = diag_stride.max(1);
    let record = if stride > 0 {
        gcd(stride, diag_stride)
    } else {
        diag_stride
    };
    let mut diag = BufWriter::new(File::create(dir.join("diagnostics.csv")).map_err(io)?);
    writeln!(diag, "{DIAGNOSTICS_HEADER}").map_err(io)?;
    if stride > 0 {
        write_file(&dir.join(format!("snapshot_{:07}.csv", 0)), &state_csv(&init)).map_err(CliError::Setup)?;
    }
    let t_fin = setup.spec.t_fin;
    let result = run_with(&init, &setup.cfg, t_fin, record, |state, d| {
        if d.step % diag_stride == 0 || d.t == t_fin {
            diag.write_all(diagnostics_row(d).as_bytes())?;
        }
        if stride > 0 && d.step % stride == 0 {
            write_file(&dir.join(format!("snapshot_{:07}.csv", d.step)), &state_csv(state))?;
        }
        Ok(())
    });
    diag.flush().map_err(io)?;
    match result {
        Ok(r) => {
            write_file(&dir.join("final.csv"), &state_csv(&r.final_state)).map_err(CliError::Setup)?;
            Ok(r)
        }
        Err(e) => {
            let _ = write_file(&dir.join("failure.txt"), &format!("{e}\n"));
            Err(CliError::Solver(e))
        }
    }
}

fn cmd_run(args: &RunArgs) -> std::result::Result<(), CliError> {
    let setup = resolve(&args.case, CaseId::A).map_err(CliError::Setup)?;
    let dir = args.out.clone().or(setup.out.clone()).unwrap_or_else(|| "out".into());
    let stride = args.stride.or(setup.stride).unwrap_or(0);
    let r = run_case(&setup, &dir, stride, args.diag_stride)?;
    let x = r.extremes;
    println!(
        "case {} ({}), N = {}, {}: {} steps to t = {:e}",
        setup.spec.id,
        setup.spec.id.title(),
        setup.n(),
        setup.cfg.reg,
        r.steps,
        r.final_state.t
    );
    println!(
        "min rho1 = {:e}, min rho2 = {:e}, min theta = {:e}, min p + p_star = {:e}",
        x.rho1_min, x.rho2_min, x.theta_min, x.shifted_p_min
    );
    if !x.admissible() {
        println!("warning: a partial density or shifted pressure left the admissible range");
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn cmd_study(args: &StudyArgs) -> std::result::Result<(), CliError> {
    let setup = resolve(&args.case, CaseId::B).map_err(CliError::Setup)?;
    for &n in &args.ns {
        if n == 0 || !args.n_ref.is_multiple_of(n) {
            return Err(CliError::Setup(Error::NonNestedMesh { n, n_ref: args.n_ref }));
        }
    }
    let rep = error_study(&setup.spec, &setup.cfg, &args.ns, args.n_ref).map_err(CliError::Solver)?;
    let dir = args.out.clone().or(setup.out.clone()).unwrap_or_else(|| "out".into());
    fs::create_dir_all(&dir).map_err(|e| CliError::Setup(e.into()))?;
    write_file(&dir.join("error_study.csv"), &rep.to_csv()).map_err(CliError::Setup)?;
    write_file(&dir.join("error_study.txt"), &rep.to_table()).map_err(CliError::Setup)?;
    print!("{}", rep.to_table());
    Ok(())
}

/// Exit codes: 0 success, 1 solver failure, 2 bad input.
pub fn execute(cli: &Cli) -> ExitCode {
    let res = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::ErrorStudy(a) => cmd_study(a),
        Command::ShowCase(a) => resolve(a, CaseId::A)
            .map(|s| print!("{}", s.config_string()))
            .map_err(CliError::Setup),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Solver(e)) => {
            eprintln!("solver failed: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Setup(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub fn main() -> ExitCode {
    execute(&Cli::parse())
}
