//! Enumerate lattice points in a box, check against a brute-force loop, and
//! run the irrationality diagnostic on an irrational and a rational basis.
//!
//! cargo run --release --example lattice_enumeration

use apec::cps::{
    candidate_count, enumerate_lattice, enumerate_lattice_brute, fibonacci_cps, irrationality_diagnostic,
    CutProjectScheme, LatticeBox,
};

fn main() -> apec::Result<()> {
    let cps = fibonacci_cps();
    let bx = LatticeBox::new(-50.0, 80.0, -1.5, 2.0)?;
    let fast = enumerate_lattice(&cps, &bx)?;
    let slow = enumerate_lattice_brute(&cps, &bx);
    println!(
        "{} points from {} candidates; brute force agrees: {}",
        fast.len(),
        candidate_count(&cps, &bx),
        fast == slow
    );
    for p in fast.iter().take(5) {
        println!("  (m, n) = ({}, {})  g = {:+.6}  h = {:+.6}", p.m, p.n, p.g, p.h);
    }

    let report = irrationality_diagnostic(&cps, 1e3, 0.05)?;
    println!("fibonacci: injective {}, dense {}, largest hole {:.4}", report.injective, report.dense, report.largest_hole);

    let rational = CutProjectScheme::new((1.0, 1.0), (2.0, 1.0))?;
    let report = irrationality_diagnostic(&rational, 1e3, 0.05)?;
    println!("rational basis: passed {}, first violation: {:?}", report.passed(), report.violations.first());

    match CutProjectScheme::new((1.0, 2.0), (2.0, 4.0)) {
        Err(e) => println!("singular basis refused: {} ({})", e.code(), e),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
