use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kinetic1d::harness::report::snapshots_csv;
use kinetic1d::harness::{
    builtin_toml, convergence_study, knudsen_sweep, run_case, CaseConfig, Emit, Format, BUILTIN_CASES,
};
use kinetic1d::stability::{cfl_table, critical_cfl, SchemeDescriptor, TimeScheme};
use kinetic1d::{Error, SpaceOperator};

/// Kinetic relaxation solver for 1D convection-diffusion problems.
#[derive(Parser)]
#[command(name = "kinetic1d", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one case and print the final profile.
    Run {
        #[command(flatten)]
        case: CaseArgs,
        /// Also write the snapshot profiles (long-form CSV) here.
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// Run a case on a sequence of doubling meshes and tabulate L2 and r.
    Converge {
        #[command(flatten)]
        case: CaseArgs,
        /// Mesh sizes, each twice the previous.
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<usize>,
    },
    /// Vary the kinetic speed on a fixed mesh and tabulate L2 against ε.
    Knudsen {
        #[command(flatten)]
        case: CaseArgs,
        /// Values of `a` (or of the ratio, for adaptive cases).
        #[arg(long, value_delimiter = ',', required = true)]
        speeds: Vec<f64>,
    },
    /// Critical CFL numbers from the linear stability analysis.
    Stability {
        /// Print the full table (orders 2 and 4, all stencils, M = 1..6).
        #[arg(long)]
        table1: bool,
        /// Single scheme: time order.
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Single scheme: number of corrections.
        #[arg(long)]
        iterations: Option<usize>,
        /// Single scheme: stencil (dx1, dx2, dx4).
        #[arg(long)]
        space: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// List the built-in cases, or print one as a config file.
    Cases { name: Option<String> },
}

#[derive(Args)]
struct OutputArgs {
    /// csv or text.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CaseArgs {
    /// Config file, or the name of a built-in case.
    config: String,
    /// Override any key, e.g. `--set scheme.order=2` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    cfl: Option<f64>,
    /// Constant kinetic speed (replaces `wave.ratio`).
    #[arg(long)]
    a: Option<f64>,
    /// Adaptive speed ratio (replaces `wave.a`).
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

impl CaseArgs {
    fn overrides(&self) -> Vec<String> {
        let mut o = self.sets.clone();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                o.push(format!("{k}={v}"));
            }
        };
        push("scheme.order", self.order.map(|v| v.to_string()));
        push("scheme.iterations", self.iterations.map(|v| v.to_string()));
        push("scheme.space", self.space.as_ref().map(|v| format!("\"{v}\"")));
        push("scheme.cfl", self.cfl.map(toml_float));
        push("wave.a", self.a.map(toml_float));
        push("wave.ratio", self.ratio.map(toml_float));
        push("grid.n", self.n.map(|v| v.to_string()));
        push("run.t_end", self.t_end.map(toml_float));
        push("run.ell", self.ell.map(toml_float));
        o
    }

    fn load(&self) -> Result<CaseConfig, Error> {
        let mut overrides = self.overrides();
        // a and ratio are exclusive: setting one drops the other
        if self.a.is_some() {
            overrides.insert(0, "wave.ratio=".into());
        }
        if self.ratio.is_some() {
            overrides.insert(0, "wave.a=".into());
        }
        let path = Path::new(&self.config);
        if path.exists() {
            return CaseConfig::load(path, &overrides);
        }
        match builtin_toml(&self.config) {
            Some(text) => CaseConfig::from_toml_with_overrides(text, &overrides),
            None => Err(Error::Config(format!(
                "`{}` is neither a file nor a built-in case ({})",
                self.config,
                BUILTIN_CASES.join(", ")
            ))),
        }
    }
}

fn toml_float(x: f64) -> String {
    // TOML needs a decimal point or exponent for floats
    let s = format!("{x:?}");
    if s.contains(['.', 'e', 'E', 'i', 'N']) {
        s
    } else {
        format!("{s}.0")
    }
}

impl OutputArgs {
    fn write(&self, text: &str) -> Result<(), Error> {
        match &self.output {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn format(&self) -> Result<Format, Error> {
        self.format.parse()
    }
}

fn parse_space(s: &str) -> Result<SpaceOperator, Error> {
    SpaceOperator::ALL
        .into_iter()
        .find(|op| op.name() == s)
        .ok_or_else(|| Error::Config(format!("unknown stencil `{s}` (dx1, dx2, dx4)")))
}

fn execute(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Run { case, snapshots } => {
            let format = case.out.format()?;
            let cfg = case.load()?;
            let res = run_case(&cfg)?;
            case.out.write(&res.emit(format))?;
            if let Some(p) = snapshots {
                std::fs::write(&p, snapshots_csv(&res)).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            }
            let mut summary = format!("{}: t = {} after {} steps", cfg.name, res.final_time(), res.trajectory.steps);
            if res.trajectory.steady {
                summary.push_str(" (steady)");
            }
            if let Some(l2) = res.l2 {
                summary.push_str(&format!(", L2 = {l2:.6e}"));
            }
            if let Some(eps) = res.epsilon {
                summary.push_str(&format!(", epsilon = {eps:.4e}"));
            }
            if let Some(d) = &res.trajectory.mass_drift {
                summary.push_str(&format!(", mass drift = {:.2e}", d.iter().copied().fold(0.0, f64::max)));
            }
            eprintln!("{summary}");
        }
        Command::Converge { case, meshes } => {
            let format = case.out.format()?;
            let rep = convergence_study(&case.load()?, &meshes)?;
            case.out.write(&rep.emit(format))?;
        }
        Command::Knudsen { case, speeds } => {
            let format = case.out.format()?;
            let rep = knudsen_sweep(&case.load()?, &speeds)?;
            case.out.write(&rep.emit(format))?;
        }
        Command::Stability { table1, order, iterations, space, out } => {
            let format = out.format()?;
            if table1 {
                out.write(&cfl_table()?.emit(format))?;
            } else {
                let space = match space {
                    Some(s) => parse_space(&s)?,
                    None => SpaceOperator::for_order(order).map_err(|e| Error::Config(e.to_string()))?,
                };
                let time = match order {
                    1 => TimeScheme::ExplicitEuler,
                    q => TimeScheme::DeC { order: q, iterations: iterations.unwrap_or(q) },
                };
                let lambda = critical_cfl(SchemeDescriptor { time, space })?;
                out.write(&format!("{lambda:.4}\n"))?;
            }
        }
        Command::Cases { name: None } => {
            for name in BUILTIN_CASES {
                println!("{name}");
            }
        }
        Command::Cases { name: Some(name) } => match builtin_toml(&name) {
            Some(text) => print!("{text}"),
            None => return Err(Error::Config(format!("no built-in case `{name}`"))),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
