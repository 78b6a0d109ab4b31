//! A small separated/spanning scan and the complexity fit, driven through
//! the pipeline with a reduced Fibonacci configuration.
//!
//! cargo run --release --example amorphic_complexity

use apec::config::RunConfig;
use apec::pipeline::{run_ac, Plan};

fn main() -> apec::Result<()> {
    let cfg = RunConfig::parse(
        "preset = fibonacci
         run.id = small
         folner.compare = none
         folner.lengths = 50, 100, 200, 400
         ac.deltas = 0.4, 0.2
         ac.nu_min = 0.01
         ac.nu_max = 0.5
         ac.nu_per_decade = 4
         family.h_count = 120",
    )?;
    let plan = Plan::new(cfg)?;
    let report = run_ac(&plan)?;
    for d in &report.scan.deltas {
        println!("δ = {}: slope_lower {:.3}, slope_upper {:.3}, r² {:.4}", d.delta, d.fit.slope_lower, d.fit.slope_upper, d.fit.r_squared);
        for r in &d.rows {
            println!("  ν = {:.4}: sep {:>4}, span {:>8}", r.nu, r.sep, r.span);
        }
    }
    println!(
        "ac_lower {:.3}, ac_upper {:.3}, theorem bound {:.3}, pass {}, spanning verified {}",
        report.ac_lower, report.ac_upper, report.theorem_bound, report.pass, report.spanning_verified
    );
    Ok(())
}
