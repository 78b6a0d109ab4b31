//! The grid-resolved hull metric on Delone sets.
//!
//! cargo run --release --example delone_metric

use apec::cps::{fibonacci_cps, model_set, ModelSetParams, PHI};
use apec::delone::{default_metric_grid, delone_distance, separated_at, DeloneSet};
use apec::window::IntervalUnion;

fn lattice(offset: f64, radius: f64) -> apec::Result<DeloneSet> {
    let n = radius as i64;
    DeloneSet::new((-n..=n).map(|k| k as f64 + offset).filter(|x| x.abs() <= radius).collect(), radius)
}

fn main() -> apec::Result<()> {
    let grid = default_metric_grid();
    let z = lattice(0.0, 5000.0)?;
    for off in [0.5, 0.25, 0.1, 0.01, 0.0] {
        println!("d(ℤ, ℤ + {off}) = {:.5}", delone_distance(&z, &lattice(off, 5000.0)?, &grid)?);
    }

    let cps = fibonacci_cps();
    let w = IntervalUnion::interval(-1.0, PHI - 1.0)?;
    let base = model_set(&cps, &ModelSetParams::new(0.0, 0.0414, w.clone(), 5000.0)?)?;
    for dh in [0.3, 0.03, 0.003, 0.0003] {
        let other = model_set(&cps, &ModelSetParams::new(0.0, 0.0414 + dh, w.clone(), 5000.0)?)?;
        let d = delone_distance(&base, &other, &grid)?;
        println!("Fibonacci, Δh = {dh}: d = {d:.5}, separated at δ = 0.3 around t = 0: {}", separated_at(&base, &other, 0.0, 0.3));
    }
    Ok(())
}
