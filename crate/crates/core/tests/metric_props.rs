mod common;

use apec::delone::{coarse_metric_grid, delone_distance, feasible_at, DeloneSet};
use proptest::prelude::*;

#[test]
fn randomized_metric_suite() {
    let r = common::metric_suite(60, 11);
    assert!(r.violations.is_empty(), "{:?}", r.violations);
}

fn lattice(offset: f64, step: f64, radius: f64) -> DeloneSet {
    let n = (radius / step) as i64 + 1;
    DeloneSet::from_unsorted(
        (-n..=n).map(|k| k as f64 * step + offset).filter(|x| x.abs() <= radius).collect(),
        radius,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn feasibility_is_monotone(off in 0.0f64..1.0, t in -20.0f64..20.0, e1 in 0.03f64..0.7, e2 in 0.03f64..0.7) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let a = lattice(0.0, 1.0, 80.0);
        let b = lattice(off, 1.0, 80.0);
        if feasible_at(&a, &b, t, lo) {
            prop_assert!(feasible_at(&a, &b, t, hi));
        }
    }

    #[test]
    fn lattice_offsets(off in 0.0f64..0.5) {
        // ℤ and ℤ + off: the best shift is off itself
        let grid = coarse_metric_grid();
        let a = lattice(0.0, 1.0, 60.0);
        let b = lattice(off, 1.0, 60.0);
        let d = delone_distance(&a, &b, &grid).unwrap();
        let expect = grid.values().iter().copied().find(|v| *v > off).unwrap_or(grid.max());
        prop_assert!(d <= expect.min(std::f64::consts::FRAC_1_SQRT_2));
        prop_assert!(d >= grid.values().iter().copied().rev().find(|v| *v <= off).unwrap_or(grid.min()) - 1e-15 || off < grid.min());
    }
}
