//! Helpers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use apec::cps::{fibonacci_cps, model_set, CutProjectScheme, LatticeBox, ModelSetParams, PHI};
use apec::delone::{default_metric_grid, delone_distance, DeloneSet, METRIC_CAP};
use apec::grid::GeometricGrid;
use apec::window::IntervalUnion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fib_window() -> IntervalUnion {
    IntervalUnion::interval(-1.0, PHI - 1.0).unwrap()
}

pub fn fib_set(h: f64, radius: f64) -> DeloneSet {
    model_set(&fibonacci_cps(), &ModelSetParams::new(0.0, h, fib_window(), radius).unwrap()).unwrap()
}

/// Index of the grid value `x` (which the metric always returns).
fn index(grid: &GeometricGrid, x: f64) -> usize {
    grid.values()
        .iter()
        .position(|v| *v == x)
        .unwrap_or_else(|| panic!("{x} is not a grid value"))
}

/// Index of the smallest grid value `>= x` (`len` if none).
fn ceil_index(grid: &GeometricGrid, x: f64) -> usize {
    grid.values().partition_point(|v| *v < x)
}

pub struct SuiteReport {
    pub trials: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

/// Randomised metric properties on Fibonacci model sets: symmetry within one
/// grid step, `d(Γ, Γ)` at the floor, the `1/√2` cap, shift continuity and
/// the shifted-separation inequality `d(Γ, Γ' + g) >= d(Γ, Γ')/2` for
/// `|g| < d(Γ, Γ')/2`, each up to one grid step.
pub fn metric_suite(trials: usize, seed: u64) -> SuiteReport {
    let grid = default_metric_grid();
    let floor = grid.min();
    let radius = 1.0 / floor + 2.0 + METRIC_CAP;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut checks = 0;
    let mut fail = |msg: String| violations.push(msg);
    for trial in 0..trials {
        let h = rng.gen_range(0.0..2.0);
        let dh = 10f64.powf(rng.gen_range(-5.0..0.0));
        let a = fib_set(h, radius);
        let b = fib_set(h + dh, radius);

        let dab = delone_distance(&a, &b, &grid).unwrap();
        let dba = delone_distance(&b, &a, &grid).unwrap();
        checks += 1;
        if index(&grid, dab).abs_diff(index(&grid, dba)) > 1 {
            fail(format!("trial {trial}: symmetry d(a,b)={dab} d(b,a)={dba}"));
        }
        checks += 1;
        if delone_distance(&a, &a, &grid).unwrap() > floor {
            fail(format!("trial {trial}: d(a,a) above the grid floor"));
        }
        checks += 1;
        if dab > METRIC_CAP || dba > METRIC_CAP {
            fail(format!("trial {trial}: cap exceeded"));
        }

        // shift continuity: d(a, a - g) <= |g| + one grid step
        let g = rng.gen_range(-0.7..0.7) * 10f64.powf(rng.gen_range(-3.0..0.0));
        let shifted = a.shifted(g).unwrap();
        let d = delone_distance(&a, &shifted, &grid).unwrap();
        checks += 1;
        let allowed = (ceil_index(&grid, g.abs()) + 1).min(grid.len() - 1);
        if index(&grid, d) > allowed {
            fail(format!("trial {trial}: continuity d(a, a-{g}) = {d}"));
        }

        // shifted separation: with δ = d(a, b) and |g| < δ/2, d(a, b + g) >= δ/2 - one step
        if dab > floor && dab < METRIC_CAP {
            let g = rng.gen_range(-0.5..0.5) * dab;
            let moved = b.shifted(-g).unwrap();
            let d = delone_distance(&a, &moved, &grid).unwrap();
            checks += 1;
            if d < dab / 2.0 {
                let need = ceil_index(&grid, dab / 2.0).saturating_sub(1);
                if index(&grid, d) < need {
                    fail(format!("trial {trial}: shifted separation δ={dab}, g={g}, got {d}"));
                }
            }
        }
    }
    SuiteReport {
        trials,
        checks,
        violations,
    }
}

/// Brute-force lattice points of `bx` as sorted `(m, n)`. The integer range
/// comes from the Frobenius norm of the inverse basis rather than the box
/// corners, then every pair in the square is tested.
pub fn oracle(cps: &CutProjectScheme, bx: &LatticeBox) -> Vec<(i64, i64)> {
    let [(a, b), (c, d)] = cps.basis();
    let det = a * d - b * c;
    // entries of B^-1 = [[d, -c], [-b, a]] / det; Frobenius norm bounds the operator norm
    let inv_norm = (a * a + b * b + c * c + d * d).sqrt() / det.abs();
    let g = bx.g_lo.abs().max(bx.g_hi.abs());
    let h = bx.h_lo.abs().max(bx.h_hi.abs());
    let n = (inv_norm * (g * g + h * h).sqrt()).ceil() as i64 + 1;
    let mut out = Vec::new();
    for m in -n..=n {
        for k in -n..=n {
            let p = cps.point(m, k);
            if p.g >= bx.g_lo && p.g <= bx.g_hi && p.h >= bx.h_lo && p.h <= bx.h_hi {
                out.push((m, k));
            }
        }
    }
    out.sort_unstable();
    out
}
