//! Interval-union windows: set operations, Cantor constructions and JSON.
//!
//! cargo run --release --example window_algebra

use apec::window::{
    cantor_approximation, component_census, remark_a_window, remark_b_window, IntervalUnion,
};

fn main() -> apec::Result<()> {
    let a = IntervalUnion::from_pairs(&[(0.0, 1.0), (2.0, 3.0)])?;
    let b = IntervalUnion::from_pairs(&[(0.5, 2.5)])?;
    println!("a ∪ b = {}", a.union(&b).to_json());
    println!("a ∩ b = {}", a.intersection(&b).to_json());
    println!("m(a \\ b) = {}", a.difference_measure(&b));
    println!("m(a Δ (a + 0.25)) = {}", a.symmetric_difference_measure(0.25));
    println!("contains 1.0: {}, interior: {}", a.contains(1.0), a.contains_interior(1.0));

    for gamma in [3.0, 4.0, 6.0] {
        let c = cantor_approximation(gamma, 8)?;
        println!("C_{gamma} depth 8: {} parts, measure {:.3e}", c.len(), c.measure());
    }
    let rb = remark_b_window(4.0, 12)?;
    println!("odd-level window γ=4 depth 12: {} parts, measure {:.6}", rb.len(), rb.measure());
    let ra = remark_a_window(10)?;
    println!(
        "sparse-gap window depth 10: {} parts, census at 2^-5: {}",
        ra.len(),
        component_census(&ra, 5)
    );

    let json = remark_b_window(3.0, 2)?.to_json();
    println!("json {json}");
    assert_eq!(IntervalUnion::from_json(&json)?, remark_b_window(3.0, 2)?);
    Ok(())
}
