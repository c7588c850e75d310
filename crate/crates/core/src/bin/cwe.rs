use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};

use cwe_core::error::{Error, ValidationError};
use cwe_core::io::{self, AngleOutput};
use cwe_core::pipeline::synthetic::{adaptive_path, face_path};
use cwe_core::pipeline::{self, validation, SimulationConfig};
use cwe_core::sweep::{default_spacing, SweepMode};

#[derive(Parser)]
#[command(name = "cwe", version, about = "Cutter-workpiece engagement for 2.5-axis flat end milling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Angles {
    Raw,
    FeedRelative,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchJob {
    Adaptive,
    Face,
}

#[derive(clap::Args)]
struct Common {
    /// Slice thickness in mm.
    #[arg(long, default_value_t = 1.0)]
    dz: f64,
    /// Maximum chord deviation when polygonizing arcs, mm.
    #[arg(long, default_value_t = 1e-3)]
    chord_tol: f64,
    /// Run per-slice work on one thread.
    #[arg(long)]
    serial: bool,
    /// Write 0 in every time field so outputs are byte-comparable.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a toolpath and write cwe.csv, slices.csv and perf.csv.
    Simulate {
        #[arg(long)]
        tool: PathBuf,
        #[arg(long)]
        stock: PathBuf,
        #[arg(long)]
        toolpath: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Swept footprint: exact capsule or union of sampled tool disks.
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Spacing of sampled tool positions in mm (default: a quarter radius).
        #[arg(long)]
        spacing: Option<f64>,
        /// Write an SVG top view every N segments.
        #[arg(long, default_value_t = 0)]
        svg_every: usize,
        /// Write an IPW snapshot every N segments.
        #[arg(long, default_value_t = 0)]
        snapshot_every: usize,
        #[arg(long, value_enum, default_value_t = Angles::Raw)]
        angles: Angles,
    },
    /// Compare the engine against the analytical oracle; prints a CSV table.
    Validate {
        #[arg(long, default_value_t = validation::VALIDATION_CHORD_TOL)]
        chord_tol: f64,
    },
    /// Run a synthetic job and write perf.csv.
    Bench {
        #[arg(long, default_value_t = 10_000)]
        segments: usize,
        #[arg(long, value_enum, default_value_t = BenchJob::Adaptive)]
        job: BenchJob,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// Median per-segment time above which `bench` flags a regression.
const TARGET_MEDIAN_MS: f64 = 300.0;

fn config(common: &Common, out: &std::path::Path) -> SimulationConfig {
    SimulationConfig {
        dz: common.dz,
        chord_tol: common.chord_tol,
        output_dir: Some(out.to_path_buf()),
        parallel: !common.serial,
        timing: !common.no_timing,
        ..Default::default()
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Simulate {
            tool,
            stock,
            toolpath,
            out,
            common,
            mode,
            spacing,
            svg_every,
            snapshot_every,
            angles,
        } => {
            let tool = io::load_tool(&tool)?;
            let stock = io::load_stock(&stock)?;
            let toolpath = io::load_toolpath(&toolpath)?;
            let mode = match (mode, spacing) {
                (Mode::Exact, None) => SweepMode::Exact,
                (Mode::Exact, Some(_)) => {
                    return Err(ValidationError::new("--spacing", "only valid with --mode sampled").into())
                }
                (Mode::Sampled, s) => SweepMode::SampledUnion {
                    spacing: s.unwrap_or_else(|| default_spacing(&tool)),
                },
            };
            let angle_output = match angles {
                Angles::Raw => AngleOutput::Raw,
                Angles::FeedRelative => AngleOutput::FeedRelative,
                Angles::Both => AngleOutput::Both,
            };
            let cfg = SimulationConfig {
                mode,
                svg_every,
                snapshot_every,
                angle_output,
                ..config(&common, &out)
            };
            let result = pipeline::run_simulation(&cfg, &tool, &stock, &toolpath)?;
            pipeline::write_outputs(&out, &result, angle_output)?;
            let p = &result.perf;
            println!(
                "{}: {}/{} segments processed, removed {} mm3, outputs in {}",
                p.operation,
                p.n_cls_processed,
                p.n_cls_scheduled,
                io::fmt_g6(result.initial_volume - result.final_stack.volume()),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { chord_tol } => {
            if !(chord_tol > 0.0 && chord_tol.is_finite()) {
                return Err(ValidationError::new("--chord-tol", format!("must be positive, got {chord_tol}")).into());
            }
            let results = validation::run_all(chord_tol).map_err(|e| {
                Error::from(cwe_core::error::GeometryError::Degenerate(e.to_string()))
            })?;
            let stdout = std::io::stdout();
            validation::write_results_csv(stdout.lock(), &results)
                .map_err(|e| Error::Io { path: "<stdout>".into(), source: e })?;
            let failed = results.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                eprintln!("{failed} of {} cases exceed their threshold", results.len());
                Ok(ExitCode::from(1))
            } else {
                eprintln!("all {} cases within threshold", results.len());
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Bench {
            segments,
            job,
            out,
            common,
        } => {
            let job = match job {
                BenchJob::Adaptive => adaptive_path(segments),
                BenchJob::Face => face_path(),
            };
            let cfg = config(&common, &out);
            let result = pipeline::run_simulation(&cfg, &job.tool, &job.stock, &job.toolpath)?;
            pipeline::write_perf(&out, &result.perf)?;
            let p = &result.perf;
            let verdict = if p.median_time_per_processed_cl_ms <= TARGET_MEDIAN_MS {
                "within target"
            } else {
                "PERFORMANCE REGRESSION: above target"
            };
            println!(
                "{}: {}/{} processed, total {} s, median {} ms/segment ({verdict} of {TARGET_MEDIAN_MS} ms)",
                p.operation,
                p.n_cls_processed,
                p.n_cls_scheduled,
                io::fmt_g6(p.total_time_s),
                io::fmt_g6(p.median_time_per_processed_cl_ms),
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
