//! Command-line front end.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analytic::{extract_minor_loop, loop_closed_form, loop_from_path, loop_summary};
use crate::config::CliConfig;
use crate::error::{Error, Result};
use crate::export::{fmt_f64, publish_files, write_csv_file, write_json_file};
use crate::integrator::{simulate_lugre, steady_state_periods, SteadyState};
use crate::lab::{gamma_sweep, run_examples, ExampleScenario, SweepReference};
use crate::signal::NormalizedInput;

/// Exit status for invalid input, configs or arguments.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status for integrator failures.
pub const EXIT_NUMERICAL: i32 = 3;
/// Exit status for I/O failures.
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "lugre-loops",
    version,
    about = "LuGre/Dahl friction: simulation, slow-input hysteresis loops and minor loops"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    /// Slow-input limit from the initial state, at equal time
    Star,
    /// Periodic limit, at equal phase
    Circle,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// TOML run configuration
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Output file format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the model and write the sampled trajectory
    Simulate {
        #[command(flatten)]
        config: ConfigArg,
        /// Time-scale factor (overrides [run] gamma)
        #[arg(long)]
        gamma: Option<f64>,
        /// Number of input periods (overrides [run] periods)
        #[arg(long)]
        periods: Option<usize>,
        /// Sup-norm change between periods that counts as steady
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Closed-form hysteresis loop, minor loop and summary
    Loop {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Distance of steady simulated output to a limit, over several gammas
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        /// Comma-separated gammas
        #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
        gamma: Vec<f64>,
        /// Limit to compare against
        #[arg(long, value_enum, default_value = "star")]
        reference: Reference,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Reproduce the example scenarios as data files
    Examples {
        /// Scenario id (Example1, Example2, Example3, Example4, Example4b) or "all"
        #[arg(long, default_value = "all")]
        which: String,
        /// Output directory
        #[arg(long, value_name = "DIR", default_value = "results")]
        out: PathBuf,
    },
    /// Print the normalized-input breakpoints of a bimodal input
    Normalize {
        /// TOML run configuration
        #[arg(long, value_name = "FILE", conflicts_with = "extrema", required_unless_present = "extrema")]
        config: Option<PathBuf>,
        /// umin1,umin2,umax1,umax2
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        extrema: Option<Vec<f64>>,
        /// Output format
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

/// Maps an error to the process exit status.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn gamma_tag(g: f64) -> String {
    format!("{g}")
}

#[derive(Serialize)]
struct SimulateSummary {
    gamma: f64,
    periods: usize,
    samples: usize,
    periods_to_steady: Option<usize>,
    max_abs_y: f64,
}

fn simulate(cfg: &CliConfig, gamma: Option<f64>, periods: Option<usize>, tol: f64, out: &OutArgs, stdout: &mut dyn Write) -> Result<()> {
    let gamma = gamma.or(cfg.run.gamma).unwrap_or(1.0);
    let periods = periods.or(cfg.run.periods).unwrap_or(10);
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument("gamma must be positive".into()));
    }
    if periods == 0 {
        return Err(Error::InvalidArgument("periods must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let u = cfg.input.signal()?;
    let traj = simulate_lugre(&cfg.model.lugre(), &u, gamma, periods, &cfg.integrator)?;
    let steady = if periods >= 2 {
        steady_state_periods(&traj, u.period(), tol)?
    } else {
        SteadyState::NotConverged
    };
    let summary = SimulateSummary {
        gamma,
        periods,
        samples: traj.samples.len(),
        periods_to_steady: steady.period(),
        max_abs_y: traj.max_abs_output(),
    };
    let files = publish_files(&out.out, |dir| match out.format {
        Format::Csv => write_with(&dir.join(format!("traj_gamma{}.csv", gamma_tag(gamma))), |w| traj.write_csv(w)),
        Format::Json => write_json_file(&dir.join(format!("traj_gamma{}.json", gamma_tag(gamma))), &traj),
    })?;
    let steady_text = summary
        .periods_to_steady
        .map_or_else(|| "not reached".to_string(), |k| k.to_string());
    writeln!(stdout, "gamma: {gamma}")?;
    writeln!(stdout, "periods: {periods}")?;
    writeln!(stdout, "samples: {}", summary.samples)?;
    writeln!(stdout, "periods to steady state (tol {tol:e}): {steady_text}")?;
    writeln!(stdout, "max |y|: {}", fmt_f64(summary.max_abs_y))?;
    for f in files {
        writeln!(stdout, "wrote {}", f.display())?;
    }
    Ok(())
}

fn loop_cmd(cfg: &CliConfig, out: &OutArgs, stdout: &mut dyn Write) -> Result<()> {
    let p = cfg.model.lugre();
    let curve = match cfg.input.normalized() {
        Some(n) => loop_closed_form(&p, &n),
        None => loop_from_path(&p, &cfg.input.signal()?.normalized_path()),
    };
    let minor = curve.rho5.map(|_| extract_minor_loop(&curve)).transpose()?;
    let summary = loop_summary(&curve)?;
    let files = publish_files(&out.out, |dir| {
        match out.format {
            Format::Csv => {
                write_with(&dir.join("loop.csv"), |w| curve.write_csv(w))?;
                if let Some(m) = &minor {
                    write_with(&dir.join("minor_loop.csv"), |w| m.write_csv(w))?;
                }
            }
            Format::Json => {
                write_json_file(&dir.join("loop.json"), &curve.samples)?;
                if let Some(m) = &minor {
                    write_json_file(&dir.join("minor_loop.json"), &m.samples())?;
                }
            }
        }
        write_json_file(&dir.join("summary.json"), &summary)
    })?;
    writeln!(stdout, "{}", serde_json::to_string_pretty(&summary)?)?;
    for f in files {
        writeln!(stdout, "wrote {}", f.display())?;
    }
    Ok(())
}

fn sweep(cfg: &CliConfig, gammas: &[f64], reference: Reference, out: &OutArgs, stdout: &mut dyn Write) -> Result<()> {
    let reference = match reference {
        Reference::Star => SweepReference::Star,
        Reference::Circle => SweepReference::Circle,
    };
    let u = cfg.input.signal()?;
    let report = gamma_sweep(&cfg.model.lugre(), &u, gammas, &cfg.integrator, reference)?;
    let files = publish_files(&out.out, |dir| match out.format {
        Format::Json => write_json_file(&dir.join("sweep.json"), &report),
        Format::Csv => write_csv_file(
            &dir.join("sweep.csv"),
            &["gamma", "distance", "periods_to_steady"],
            report.gammas.iter().zip(&report.distances).zip(&report.periods_to_steady).map(|((g, d), k)| {
                vec![*g, *d, k.map_or(f64::NAN, |k| k as f64)]
            }),
        ),
    })?;
    writeln!(stdout, "gamma,distance,periods_to_steady")?;
    for ((g, d), k) in report.gammas.iter().zip(&report.distances).zip(&report.periods_to_steady) {
        let k = k.map_or_else(|| "none".to_string(), |k| k.to_string());
        writeln!(stdout, "{g},{},{k}", fmt_f64(*d))?;
    }
    for f in files {
        writeln!(stdout, "wrote {}", f.display())?;
    }
    Ok(())
}

fn examples(which: &str, out: &Path, stdout: &mut dyn Write) -> Result<()> {
    let scenarios: Vec<ExampleScenario> = if which.eq_ignore_ascii_case("all") {
        ExampleScenario::ALL.to_vec()
    } else {
        vec![which.parse()?]
    };
    for (s, files) in run_examples(&scenarios, out)? {
        writeln!(stdout, "{s}:")?;
        for f in files {
            writeln!(stdout, "  {}", f.display())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Breakpoints<'a> {
    rho: &'a [f64; 5],
    psi: &'a [f64; 5],
    rho5: f64,
    minor_loop_touches_major: bool,
}

fn normalize(n: &NormalizedInput, format: Format, stdout: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            let b = Breakpoints {
                rho: &n.rho,
                psi: &n.values,
                rho5: n.rho5,
                minor_loop_touches_major: n.minor_loop_touches_major(),
            };
            writeln!(stdout, "{}", serde_json::to_string_pretty(&b)?)?;
        }
        Format::Csv => {
            writeln!(stdout, "index,rho,psi")?;
            for i in 0..5 {
                writeln!(stdout, "{i},{},{}", n.rho[i], n.values[i])?;
            }
            writeln!(stdout, "5,{},{}", n.rho5, n.values[1])?;
        }
    }
    Ok(())
}

/// Runs a parsed command, writing the human-readable report to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Simulate {
            config,
            gamma,
            periods,
            tol,
            out,
        } => {
            if let Some(g) = gamma {
                if !(g.is_finite() && g > 0.0) {
                    return Err(Error::InvalidArgument("gamma must be positive".into()));
                }
            }
            simulate(&CliConfig::from_file(&config.config)?, gamma, periods, tol, &out, stdout)
        }
        Command::Loop { config, out } => loop_cmd(&CliConfig::from_file(&config.config)?, &out, stdout),
        Command::Sweep {
            config,
            gamma,
            reference,
            out,
        } => sweep(&CliConfig::from_file(&config.config)?, &gamma, reference, &out, stdout),
        Command::Examples { which, out } => examples(&which, &out, stdout),
        Command::Normalize {
            config,
            extrema,
            format,
        } => {
            let n = match (config, extrema) {
                (_, Some(e)) => match e[..] {
                    [a, b, c, d] => NormalizedInput::from_extrema(a, b, c, d)?,
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "--extrema needs four values umin1,umin2,umax1,umax2, got {}",
                            e.len()
                        )))
                    }
                },
                (Some(path), None) => CliConfig::from_file(&path)?
                    .input
                    .normalized()
                    .ok_or_else(|| Error::Config("[input] is not a bimodal input".into()))?,
                (None, None) => unreachable!("clap requires one of --config/--extrema"),
            };
            normalize(&n, format, stdout)
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit
/// status. Errors go to standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
