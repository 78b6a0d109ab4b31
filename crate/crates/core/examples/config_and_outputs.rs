//! Load a preset, override keys, validate, and write the files the `apec`
//! binary would write.
//!
//! cargo run --release --example config_and_outputs -- [OUT_DIR]

use apec::config::{RunConfig, PRESETS};
use apec::pipeline::{dim_outputs, generate_outputs, run_dim, run_generate, write_outputs, Plan};

fn main() -> apec::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("apec-example-out"));
    println!("presets: {}", PRESETS.join(", "));

    let mut cfg = RunConfig::preset("remark_b_g3")?;
    cfg.apply_text("run.seed = 42\ngenerate.radius = 500\n")?;
    println!("--- config ---\n{}", cfg.to_text());

    let plan = Plan::new(cfg)?;
    let gen = run_generate(&plan)?;
    let dim = run_dim(&plan)?;
    println!("{} points; boundary box dimension {:.4}", gen.points, dim.box_dimension);
    let mut files = generate_outputs(&plan, &gen)?;
    files.extend(dim_outputs(&plan, &dim)?.into_iter().filter(|(name, _)| name != "manifest.json"));
    for p in write_outputs(std::path::Path::new(&out), &files)? {
        println!("wrote {}", p.display());
    }

    // guard violations come back as typed errors with exit codes
    let mut bad = RunConfig::preset("remark_b")?;
    bad.dim.eps_min = Some(1e-9);
    if let Err(e) = Plan::new(bad) {
        println!("refused: {} guard={:?} exit={}", e.code(), e.guard(), e.exit_code());
    }
    Ok(())
}
