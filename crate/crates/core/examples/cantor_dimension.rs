//! Box-counting and Minkowski fits of Cantor boundaries, plus the shift
//! exponent of m(W Δ (W + ε)).
//!
//! cargo run --release --example cantor_dimension

use apec::grid::GeometricGrid;
use apec::window::{
    box_dimension_fit, cantor_approximation, remark_a_window, remark_b_window, sausage_exponent, shift_exponent,
};

fn main() -> apec::Result<()> {
    for gamma in [3.0f64, 4.0, 6.0] {
        let boundary = cantor_approximation(gamma, 12)?.boundary_points();
        let grid = GeometricGrid::new(gamma.powi(-10), gamma.powi(-3), 16)?;
        let bx = box_dimension_fit(&boundary, &grid)?;
        let mk = sausage_exponent(&boundary, &grid)?;
        println!(
            "γ = {gamma}: box {:.4} (r² {:.4}), Minkowski {:.4}, log2/logγ = {:.4}",
            bx.slope,
            bx.r_squared,
            1.0 - mk.slope,
            2f64.ln() / gamma.ln()
        );
    }

    let grid = GeometricGrid::new(4f64.powi(-10), 4f64.powi(-3), 16)?;
    let f = shift_exponent(&remark_b_window(4.0, 12)?, &grid)?;
    println!("shift exponent, odd-level window: {:.4}", f.slope);

    let grid = GeometricGrid::new(2f64.powi(-12), 2f64.powi(-4), 16)?;
    let f = shift_exponent(&remark_a_window(14)?, &grid)?;
    println!("shift exponent, sparse-gap window: {:.4}", f.slope);
    Ok(())
}
