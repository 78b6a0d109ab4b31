//! Build the Fibonacci chain from its cut-and-project scheme and look at
//! tiles, density and local patches.
//!
//! cargo run --release --example fibonacci_chain

use apec::cps::{fibonacci_cps, model_set, model_set_interior, ModelSetParams, PHI};
use apec::delone::{covering_radius, min_gap, patch_census};
use apec::window::IntervalUnion;

fn main() -> apec::Result<()> {
    let cps = fibonacci_cps();
    let window = IntervalUnion::interval(-1.0, PHI - 1.0)?;
    println!("covolume {:.6} (√5 = {:.6})", cps.covolume(), 5f64.sqrt());

    // a generic fibre: every gap is 1 or φ
    let generic = model_set(&cps, &ModelSetParams::new(0.0, 0.1234567, window.clone(), 2000.0)?)?;
    println!(
        "generic h: {} points, min gap {:.6}, covering radius {:.6}, density {:.6} (φ/√5 = {:.6})",
        generic.len(),
        min_gap(&generic)?,
        covering_radius(&generic)?,
        generic.density(1900.0),
        PHI / 5f64.sqrt()
    );

    // h = 0 puts two lattice points on the window boundary
    let params = ModelSetParams::new(0.0, 0.0, window, 2000.0)?;
    let closed = model_set(&cps, &params)?;
    let open = model_set_interior(&cps, &params)?;
    println!(
        "h = 0: closed window {} points (min gap {:.6}), open window {} points (min gap {:.6})",
        closed.len(),
        min_gap(&closed)?,
        open.len(),
        min_gap(&open)?
    );

    for rho in [1.0, 2.0, 4.0, 8.0] {
        let census = patch_census(&generic, rho)?;
        println!("ρ = {rho}: {} distinct patches", census.len());
    }
    Ok(())
}
