//! Command-line interface.
//!
//! Exit codes: 0 success, 2 argument or input error, 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::classifier::{classify_any, w_roots, ClassifyOptions};
use crate::error::Error;
use crate::io::{export_csv, export_json, export_svg, format_g};
use crate::model::{FlowConfig, ParticleState, DEFAULT_G, DEFAULT_H0};
use crate::trace::{trace, Engine, TraceOptions};
use crate::vorticity::first_integral;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Largest allowed portrait grid.
pub const MAX_GRID: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "wavetraj",
    version,
    about = "Particle paths under linear shallow-water waves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify one initial condition and print a JSON summary.
    #[command(allow_negative_numbers = true)]
    Classify {
        #[command(flatten)]
        flow: FlowArgs,
        #[command(flatten)]
        start: StartArgs,
    },
    /// Compute a path and write it as CSV, JSON or SVG.
    #[command(allow_negative_numbers = true)]
    Trace {
        #[command(flatten)]
        flow: FlowArgs,
        #[command(flatten)]
        start: StartArgs,
        #[arg(long, default_value_t = 5.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        /// Local error tolerance of the oracle engine.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Classify a (c0, shear) grid and write DIR/portrait.csv.
    #[command(allow_negative_numbers = true)]
    Portrait {
        /// `A:B:N`, N evenly spaced values from A to B.
        #[arg(long, allow_hyphen_values = true)]
        c0_range: String,
        #[arg(long, allow_hyphen_values = true)]
        shear_range: String,
        #[command(flatten)]
        start: StartArgs,
        #[arg(long)]
        out: PathBuf,
        /// Skip the ODE oracle for cells outside the analytic cases.
        #[arg(long)]
        no_fallback: bool,
    },
    /// Run the built-in invariant checks.
    Selftest {
        /// Print every check, not only failures.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Debug, Args)]
struct FlowArgs {
    /// Underlying current strength.
    #[arg(long, default_value_t = 0.0)]
    c0: f64,
    /// Dimensionless shear Ω.
    #[arg(long, conflicts_with_all = ["omega0", "g", "h0"])]
    shear: Option<f64>,
    /// Physical vorticity ω0.
    #[arg(long)]
    omega0: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    h0: Option<f64>,
}

#[derive(Debug, Args)]
struct StartArgs {
    #[arg(long, default_value_t = 0.5)]
    x0: f64,
    #[arg(long, default_value_t = 0.5)]
    z0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Auto,
    Oracle,
}

impl FlowArgs {
    fn config(&self) -> Result<FlowConfig<f64>, Error> {
        match (self.shear, self.omega0) {
            (Some(shear), None) => FlowConfig::from_shear(self.c0, shear),
            (None, Some(omega0)) => FlowConfig::from_physical(
                self.c0,
                omega0,
                self.g.unwrap_or(DEFAULT_G),
                self.h0.unwrap_or(DEFAULT_H0),
            ),
            (None, None) => Err(Error::InvalidArgument(
                "give the vorticity as --shear or as --omega0 [--g --h0]".into(),
            )),
            (Some(_), Some(_)) => Err(Error::InvalidArgument(
                "--shear and --omega0 are mutually exclusive".into(),
            )),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_USAGE
    } else {
        EXIT_NUMERIC
    }
}

/// Parses `A:B:N` into N values.
pub fn parse_range(s: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::InvalidArgument(format!("range {s:?} is not A:B:N"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect())
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Classify { flow, start } => cmd_classify(&flow, &start, stdout),
        Command::Trace {
            flow,
            start,
            t_max,
            dt,
            format,
            out,
            engine,
            tol,
        } => {
            let opts = TraceOptions {
                t_max,
                dt,
                engine: match engine {
                    EngineArg::Auto => Engine::Auto,
                    EngineArg::Oracle => Engine::Oracle,
                },
                tol,
                ..TraceOptions::default()
            };
            cmd_trace(&flow, &start, &opts, format, out, stdout)
        }
        Command::Portrait {
            c0_range,
            shear_range,
            start,
            out,
            no_fallback,
        } => cmd_portrait(&c0_range, &shear_range, &start, &out, no_fallback, stderr),
        Command::Selftest { verbose } => {
            let report = crate::selftest::run_all();
            for check in &report {
                if verbose || !check.passed {
                    let _ = writeln!(
                        stdout,
                        "{} {}: {}",
                        if check.passed { "PASS" } else { "FAIL" },
                        check.name,
                        check.detail
                    );
                }
            }
            let failed = report.iter().filter(|c| !c.passed).count();
            let _ = writeln!(stdout, "{} checks, {} failed", report.len(), failed);
            return if failed == 0 { EXIT_OK } else { EXIT_NUMERIC };
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("I/O error: {e}"))
}

fn start_state(start: &StartArgs) -> Result<ParticleState<f64>, Error> {
    ParticleState::new(start.x0, start.z0)
}

fn cmd_classify(flow: &FlowArgs, start: &StartArgs, stdout: &mut dyn Write) -> Result<(), Error> {
    let config = flow.config()?;
    let init = start_state(start)?;
    let (class, analysis) = classify_any(&config, &init, &ClassifyOptions::default())?;
    let value = match &analysis {
        Some(a) => json!({
            "class": class.kind,
            "theorem_label": class.theorem_label,
            "sub_case": class.sub_case,
            "C": a.c,
            "Delta": a.delta,
            "W1": a.w1,
            "W2": a.w2,
            "branch": a.branch,
            "condition_met": a.condition_met,
            "period": a.period,
            "drift": a.drift,
            "flags": class.flags,
            "empirical": class.empirical,
            "shear": config.shear,
            "c0": config.c0,
            "x0": init.x0,
            "z0": init.z0,
        }),
        None => {
            let fi = first_integral(&config, &init)?;
            let (delta, w) = w_roots(fi.c, fi.c0);
            let period = crate::irrotational::irrotational_period(config.c0);
            json!({
                "class": class.kind,
                "theorem_label": class.theorem_label,
                "sub_case": class.sub_case,
                "C": fi.c,
                "Delta": delta,
                "W1": w.map(|r| r.0),
                "W2": w.map(|r| r.1),
                "branch": fi.branch,
                "condition_met": fi.condition_met,
                "period": period.map(|p| p.0),
                "drift": period.map(|p| p.1),
                "flags": class.flags,
                "empirical": class.empirical,
                "shear": config.shear,
                "c0": config.c0,
                "x0": init.x0,
                "z0": init.z0,
            })
        }
    };
    writeln!(stdout, "{value}").map_err(io_error)
}

fn cmd_trace(
    flow: &FlowArgs,
    start: &StartArgs,
    opts: &TraceOptions,
    format: Format,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), Error> {
    let config = flow.config()?;
    let init = start_state(start)?;
    let traj = trace(&config, &init, opts)?;
    let bytes = match format {
        Format::Csv => export_csv(&traj)?,
        Format::Json => export_json(&traj)?,
        Format::Svg => export_svg(&traj)?,
    };
    match out {
        Some(path) => std::fs::write(&path, bytes).map_err(io_error),
        None => stdout.write_all(&bytes).map_err(io_error),
    }
}

fn cmd_portrait(
    c0_range: &str,
    shear_range: &str,
    start: &StartArgs,
    out: &PathBuf,
    no_fallback: bool,
    stderr: &mut dyn Write,
) -> Result<(), Error> {
    let c0s = parse_range(c0_range)?;
    let shears = parse_range(shear_range)?;
    let cells = c0s.len() * shears.len();
    if cells > MAX_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid of {cells} points exceeds {MAX_GRID}"
        )));
    }
    let init = start_state(start)?;
    let opts = ClassifyOptions {
        empirical_fallback: !no_fallback,
        ..ClassifyOptions::default()
    };
    let grid: Vec<(usize, usize)> = (0..c0s.len())
        .flat_map(|i| (0..shears.len()).map(move |j| (i, j)))
        .collect();
    let labels: Vec<Result<String, Error>> = grid
        .par_iter()
        .map(|&(i, j)| {
            let config = FlowConfig::from_shear(c0s[i], shears[j])?;
            Ok(classify_any(&config, &init, &opts)?
                .0
                .kind
                .name()
                .to_string())
        })
        .collect();
    let mut text = String::from("c0\\shear");
    for s in &shears {
        text.push(',');
        text.push_str(&format_g(*s, 12));
    }
    text.push('\n');
    let mut failures = 0usize;
    for (i, c0) in c0s.iter().enumerate() {
        text.push_str(&format_g(*c0, 12));
        for j in 0..shears.len() {
            text.push(',');
            match &labels[i * shears.len() + j] {
                Ok(name) => text.push_str(name),
                Err(e) if e.is_input_error() => return Err(e.clone()),
                Err(e) => {
                    failures += 1;
                    let _ = writeln!(stderr, "c0 = {c0}, shear = {}: {e}", shears[j]);
                    text.push_str("Error");
                }
            }
        }
        text.push('\n');
    }
    std::fs::create_dir_all(out).map_err(io_error)?;
    std::fs::write(out.join("portrait.csv"), text).map_err(io_error)?;
    let _ = writeln!(
        stderr,
        "{cells} cells written to {}",
        out.join("portrait.csv").display()
    );
    if failures > 0 {
        return Err(Error::BatchFailures(failures));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["wavetraj"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("-1:1:1").unwrap(), vec![-1.0]);
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
    }

    #[test]
    fn classify_prints_json() {
        let (code, out, _) = call(&[
            "classify", "--c0", "0", "--shear", "10", "--x0", "0.5", "--z0", "0.5",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["class"], "UndulatingRight");
    }

    #[test]
    fn negative_values_parse() {
        let (code, out, err) = call(&["classify", "--c0", "2", "--shear", "-1"]);
        assert_eq!(code, 0, "{err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["theorem_label"], "LoopBackwardDrift");
    }

    #[test]
    fn degenerate_phase_exit_code() {
        let (code, _, err) = call(&[
            "classify", "--c0", "0", "--x0", "1", "--z0", "0.5", "--shear", "1",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("DegeneratePhase"));
    }

    #[test]
    fn mixed_vorticity_is_usage_error() {
        let (code, _, _) = call(&["classify", "--shear", "1", "--omega0", "1"]);
        assert_eq!(code, 2);
        let (code, _, _) = call(&["classify", "--shear", "1", "--g", "3"]);
        assert_eq!(code, 2);
        let (code, _, _) = call(&["classify", "--c0", "1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn physical_vorticity() {
        let (code, out, _) = call(&["classify", "--omega0", "3.132", "--g", "9.81", "--h0", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["shear"].as_f64().unwrap() - 3.132 / 9.81_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trace_first_row() {
        let (code, out, _) = call(&[
            "trace", "--c0", "0", "--shear", "0", "--x0", "0.5", "--z0", "0.5", "--t-max", "1",
            "--dt", "0.001", "--format", "csv",
        ]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("t,x,z,u,v"));
        assert!(lines.next().unwrap().starts_with("0,0.5,0.5,"));
        assert_eq!(out.lines().count(), 1002);
    }
}
