use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use apec::config::RunConfig;
use apec::pipeline::{self, Plan};
use apec::{Error, Result};

/// Model sets, Delone metrics and amorphic complexity estimates.
#[derive(Parser)]
#[command(name = "apec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Config file (`key = value` lines), applied on top of the preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Starting preset: fibonacci, remark_a, remark_b, remark_b_g3, remark_b_g4, remark_b_g6.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Overrides `run.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "apec-out")]
    out: PathBuf,
    /// Worker threads; affects wall time only.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Write one model set and a manifest.
    Generate,
    /// Separated/spanning scan and complexity fits.
    Ac,
    /// Box-counting and Minkowski fits of the window boundary.
    Dim,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let text = match &cli.config {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let mut cfg = match (&cli.preset, &text) {
        (Some(name), Some(text)) => {
            let mut cfg = RunConfig::preset(name)?;
            cfg.apply_text(text)?;
            cfg
        }
        (Some(name), None) => RunConfig::preset(name)?,
        (None, Some(text)) => RunConfig::parse(text)?,
        (None, None) => RunConfig::preset("fibonacci")?,
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let plan = Plan::new(load(cli)?)?;
    let started = Instant::now();
    let outputs = match cli.command {
        Command::Generate => {
            let report = pipeline::run_generate(&plan)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("{} points, density {:.6}", report.points, report.density);
            pipeline::generate_outputs(&plan, &report)?
        }
        Command::Ac => {
            let report = pipeline::run_ac(&plan)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!(
                "ac_lower {:.4}  ac_upper {:.4}  r2 {:.4}  theorem_bound {:.4}  pass {}",
                report.ac_lower, report.ac_upper, report.r2, report.theorem_bound, report.pass
            );
            if let Some((_, cmp)) = &report.compare {
                eprintln!(
                    "folner_compare: max frequency deviation {:.4}, slope deviation {:.4}",
                    cmp.max_frequency_deviation, cmp.slope_deviation
                );
            }
            let outputs = pipeline::ac_outputs(&plan, &report)?;
            if !report.spanning_verified {
                pipeline::write_outputs(&cli.out, &outputs)?;
                return Err(Error::Undefined("greedy family failed the spanning check".into()));
            }
            outputs
        }
        Command::Dim => {
            let report = pipeline::run_dim(&plan)?;
            eprintln!(
                "box {:.4} (r2 {:.4})  minkowski {:.4} (r2 {:.4})",
                report.box_dimension, report.box_fit.r_squared, report.minkowski_dimension, report.minkowski_fit.r_squared
            );
            pipeline::dim_outputs(&plan, &report)?
        }
    };
    for path in pipeline::write_outputs(&cli.out, &outputs)? {
        eprintln!("wrote {}", path.display());
    }
    eprintln!("elapsed {:.1}s", started.elapsed().as_secs_f64());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({
                "error": e.code(),
                "guard": e.guard(),
                "message": e.to_string(),
                "exit_code": e.exit_code(),
            });
            eprintln!("{body}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
