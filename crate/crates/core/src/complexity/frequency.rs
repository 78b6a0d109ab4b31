//! Separation frequencies `ν_F(δ, Γ, Γ')` and the Besicovitch pseudometric.
//!
//! Both sets are sampled along the orbit `t ↦ (Γ - t, Γ' - t)`. At a sample
//! time the zero shift already aligns the two sets unless some point of the
//! symmetric difference `Γ Δ Γ'` lies within `1/ε` of `t`, so only samples
//! near that (usually sparse) difference need the full metric test.

use serde::{Deserialize, Serialize};

use super::folner::{summarize, tail_max, FolnerSpec, OrbitSampler, BATCHES};
use crate::delone::{
    check_metric_radius, coarse_metric_grid, default_metric_grid, distance_at, feasible_at, DeloneSet,
    PATCH_TOL,
};
use crate::error::{Error, Result};
use crate::grid::GeometricGrid;
use crate::stats::batch_means_std_error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFrequency {
    pub delta: f64,
    pub estimate: f64,
    /// `(T_n, value)`
    pub per_n: Vec<(f64, f64)>,
    pub bound: Option<f64>,
    pub std_error: f64,
}

impl PairFrequency {
    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }
}

/// Points present in exactly one of the two sets (matching within [`PATCH_TOL`]).
pub fn symmetric_difference(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if (a[i] - b[j]).abs() <= PATCH_TOL {
            i += 1;
            j += 1;
        } else if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn slice_between(s: &[f64], lo: f64, hi: f64) -> &[f64] {
    let i = s.partition_point(|p| *p < lo);
    let j = s.partition_point(|p| *p <= hi);
    &s[i..j.max(i)]
}

/// Radius two sets need so that every sample of `folner` can be tested at `δ`.
pub fn required_radius(folner: &FolnerSpec, sampler: &OrbitSampler, delta: f64) -> f64 {
    folner.t_max() + sampler.spacing.max(1.0) + 1.0 / delta + delta
}

fn check_inputs(a: &DeloneSet, b: &DeloneSet, delta: f64, folner: &FolnerSpec, sampler: &OrbitSampler) -> Result<()> {
    let floor = default_metric_grid().min();
    if !(delta >= floor * (1.0 - 1e-12)) || delta > crate::delone::METRIC_CAP {
        return Err(Error::invalid(format!(
            "delta {delta} outside the metric grid range [{floor}, 1/√2]"
        )));
    }
    let need = required_radius(folner, sampler, delta);
    let have = a.radius().min(b.radius());
    if have < need {
        return Err(Error::InsufficientData(format!(
            "frequency at δ={delta} over T={} needs radius {need}, sets have {have}",
            folner.t_max()
        )));
    }
    Ok(())
}

const CHUNK: i64 = 128;

/// Separated sample cells inside one inclusive cell range.
///
/// Stops once `limit` separated cells have been found.
fn separated_cells(
    a: &DeloneSet,
    b: &DeloneSet,
    diff: &[f64],
    delta: f64,
    folner: &FolnerSpec,
    sampler: &OrbitSampler,
    stream: u64,
    cells: (i64, i64),
    limit: usize,
    out: &mut Vec<i64>,
) -> usize {
    let (lo, hi) = cells;
    if hi < lo || limit == 0 {
        return 0;
    }
    let step = match folner.kind {
        super::folner::FolnerKind::IntegerSymmetric => 1.0,
        _ => sampler.spacing,
    };
    let reach = 1.0 / delta + delta + 1e-6;
    let t_lo = lo as f64 * step - step;
    let t_hi = (hi + 1) as f64 * step + step;
    let near = slice_between(diff, t_lo - reach, t_hi + reach);
    let mut found = 0;
    let mut k_next = lo;
    let mut idx = 0;
    while idx < near.len() && k_next <= hi {
        // merge the neighbourhoods of consecutive difference points
        let start = near[idx] - reach;
        let mut end = near[idx] + reach;
        idx += 1;
        while idx < near.len() && near[idx] - reach <= end {
            end = near[idx] + reach;
            idx += 1;
        }
        let k0 = ((start / step).floor() as i64 - 1).max(k_next);
        let k1 = ((end / step).ceil() as i64 + 1).min(hi);
        if k1 < k0 {
            continue;
        }
        // positions in chunks, so an early exit does not pay for the whole run
        let mut c0 = k0;
        while c0 <= k1 {
            let c1 = k1.min(c0 + CHUNK - 1);
            let ts = sampler.positions(folner, (c0, c1), stream);
            for (k, t) in (c0..=c1).zip(ts) {
                if !feasible_at(a, b, t, delta) {
                    out.push(k);
                    found += 1;
                    if found >= limit {
                        return found;
                    }
                }
            }
            c0 = c1 + 1;
        }
        k_next = k1 + 1;
    }
    found
}

/// Smallest count `c` with `c / size >= nu`.
fn threshold(nu: f64, size: usize) -> usize {
    let mut c = (nu * size as f64).ceil().max(0.0) as usize;
    while c > 0 && (c - 1) as f64 / size as f64 >= nu {
        c -= 1;
    }
    while (c as f64 / size as f64) < nu {
        c += 1;
    }
    c
}

/// Separation frequency with an explicit random-stream key.
pub fn delta_frequency_keyed(
    a: &DeloneSet,
    b: &DeloneSet,
    delta: f64,
    folner: &FolnerSpec,
    sampler: &OrbitSampler,
    stream: u64,
) -> Result<PairFrequency> {
    check_inputs(a, b, delta, folner, sampler)?;
    let diff = symmetric_difference(a.points(), b.points());
    let mut cells = Vec::new();
    let mut per_n = Vec::with_capacity(folner.lengths.len());
    let mut count = 0usize;
    for n in 0..folner.lengths.len() {
        for ring in folner.ring(n, sampler.spacing) {
            count += separated_cells(a, b, &diff, delta, folner, sampler, stream, ring, usize::MAX, &mut cells);
        }
        per_n.push((folner.lengths[n], count as f64 / folner.size(n, sampler.spacing) as f64));
    }
    let (arg, estimate) = tail_max(folner, &per_n);
    cells.sort_unstable();
    let std_error = indicator_std_error(folner, sampler, arg, &cells);
    Ok(PairFrequency {
        delta,
        estimate,
        per_n,
        bound: None,
        std_error,
    })
}

/// `ν_F(δ, a, b)` on the sample grid (stream 0).
pub fn delta_frequency(
    a: &DeloneSet,
    b: &DeloneSet,
    delta: f64,
    folner: &FolnerSpec,
    sampler: &OrbitSampler,
) -> Result<PairFrequency> {
    delta_frequency_keyed(a, b, delta, folner, sampler, 0)
}

/// Batch-means error of a 0/1 path on `F_n` given its sorted support.
fn indicator_std_error(folner: &FolnerSpec, sampler: &OrbitSampler, n: usize, ones: &[i64]) -> f64 {
    let (lo, hi) = folner.cells(n, sampler.spacing);
    let size = (hi - lo + 1) as usize;
    let batch = size / BATCHES;
    if batch == 0 {
        return 0.0;
    }
    let mut sums = vec![0.0; BATCHES];
    for &k in ones {
        if k < lo || k > hi {
            continue;
        }
        let i = ((k - lo) as usize / batch).min(BATCHES - 1);
        if ((k - lo) as usize) < batch * BATCHES {
            sums[i] += 1.0;
        }
    }
    let means: Vec<f64> = sums.iter().map(|s| s / batch as f64).collect();
    batch_means_std_error(&means, BATCHES)
}

/// Decide `ν_F(δ, a, b) >= nu` without computing the full frequency.
///
/// The tail intervals are visited from the smallest up and counting stops as
/// soon as one of them reaches the threshold. Returns the same answer as
/// comparing [`delta_frequency_keyed`]'s estimate with `nu`.
pub fn frequency_at_least(
    a: &DeloneSet,
    b: &DeloneSet,
    delta: f64,
    nu: f64,
    folner: &FolnerSpec,
    sampler: &OrbitSampler,
    stream: u64,
) -> Result<bool> {
    check_inputs(a, b, delta, folner, sampler)?;
    if nu <= 0.0 {
        return Ok(true);
    }
    let start = folner.tail_start();
    let (clo, chi) = folner.cells(start, sampler.spacing);
    let step = match folner.kind {
        super::folner::FolnerKind::IntegerSymmetric => 1.0,
        _ => sampler.spacing,
    };
    // Most decisions end inside the first tail interval, so the difference
    // set is built for that range first.
    let near = (clo.abs().max(chi.abs()) + 2) as f64 * step + 1.0 / delta + delta + 1.0;
    let diff = symmetric_difference(
        slice_between(a.points(), -near, near),
        slice_between(b.points(), -near, near),
    );
    let mut scratch = Vec::new();
    let size = folner.size(start, sampler.spacing);
    let mut count = separated_cells(
        a, b, &diff, delta, folner, sampler, stream, (clo, chi), threshold(nu, size), &mut scratch,
    );
    if count as f64 / size as f64 >= nu {
        return Ok(true);
    }
    let diff = symmetric_difference(a.points(), b.points());
    for n in start + 1..folner.lengths.len() {
        let size = folner.size(n, sampler.spacing);
        for ring in folner.ring(n, sampler.spacing) {
            let need = threshold(nu, size).saturating_sub(count);
            count += separated_cells(a, b, &diff, delta, folner, sampler, stream, ring, need, &mut scratch);
        }
        if count as f64 / size as f64 >= nu {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Følner average of the grid-resolved distance `d(Γ - t, Γ' - t)`,
/// aggregated by tail max. Distances use `grid` (default: `1/32 ..= 1/√2`).
pub fn besicovitch_pseudometric(
    a: &DeloneSet,
    b: &DeloneSet,
    folner: &FolnerSpec,
    sampler: &OrbitSampler,
    grid: Option<&GeometricGrid>,
) -> Result<f64> {
    Ok(besicovitch_report(a, b, folner, sampler, grid, 0)?.estimate)
}

/// Full report behind [`besicovitch_pseudometric`].
pub fn besicovitch_report(
    a: &DeloneSet,
    b: &DeloneSet,
    folner: &FolnerSpec,
    sampler: &OrbitSampler,
    grid: Option<&GeometricGrid>,
    stream: u64,
) -> Result<super::folner::DensityReport> {
    let coarse = coarse_metric_grid();
    let grid = grid.unwrap_or(&coarse);
    crate::delone::check_grid(grid)?;
    let lim = folner.t_max() + sampler.spacing.max(1.0);
    check_metric_radius(a, b, lim, grid.min(), grid.max())?;
    let diff = symmetric_difference(a.points(), b.points());
    let reach = 1.0 / grid.min() + grid.max() + 1e-6;
    let last = folner.lengths.len() - 1;
    let cells = folner.cells(last, sampler.spacing);
    let ts = sampler.positions(folner, cells, stream);
    let floor = grid.min();
    let values: Vec<f64> = ts
        .iter()
        .map(|&t| {
            if slice_between(&diff, t - reach, t + reach).is_empty() {
                floor
            } else {
                distance_at(a, b, t, grid)
            }
        })
        .collect();
    Ok(summarize(folner, sampler, cells.0, &values))
}

#[cfg(test)]
mod tests {
    use super::super::folner::FolnerKind;
    use super::*;
    use crate::cps::{fibonacci_cps, model_set, pair_frequency_bound, ModelSetParams, PHI};
    use crate::window::IntervalUnion;

    fn fib(h: f64, radius: f64) -> DeloneSet {
        let w = IntervalUnion::interval(-1.0, PHI - 1.0).unwrap();
        model_set(&fibonacci_cps(), &ModelSetParams::new(0.0, h, w, radius).unwrap()).unwrap()
    }

    fn small_folner() -> FolnerSpec {
        FolnerSpec::new(FolnerKind::Symmetric, vec![50.0, 100.0, 200.0, 400.0]).unwrap()
    }

    #[test]
    fn identical_sets_never_separate() {
        let a = fib(0.1, 500.0);
        let f = delta_frequency(&a, &a, 0.3, &small_folner(), &OrbitSampler::standard(1)).unwrap();
        assert_eq!(f.estimate, 0.0);
    }

    #[test]
    fn radius_is_checked() {
        let a = fib(0.1, 300.0);
        let e = delta_frequency(&a, &a, 0.3, &small_folner(), &OrbitSampler::standard(1)).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        let a = fib(0.1, 500.0);
        assert!(delta_frequency(&a, &a, 1e-5, &small_folner(), &OrbitSampler::standard(1)).is_err());
    }

    #[test]
    fn fast_path_matches_direct_evaluation() {
        let (a, b) = (fib(0.1, 500.0), fib(0.13, 500.0));
        let folner = small_folner();
        let sampler = OrbitSampler::standard(9);
        let f = delta_frequency_keyed(&a, &b, 0.3, &folner, &sampler, 5).unwrap();
        let direct = super::super::folner::averages(
            |t| if feasible_at(&a, &b, t, 0.3) { 0.0 } else { 1.0 },
            &folner,
            &sampler,
            5,
        );
        for (x, y) in f.per_n.iter().zip(&direct.per_n) {
            assert!((x.1 - y.1).abs() < 1e-12, "{x:?} vs {y:?}");
        }
        assert!(f.estimate > 0.0);
    }

    #[test]
    fn decision_agrees_with_estimate() {
        let folner = small_folner();
        let sampler = OrbitSampler::standard(2);
        let a = fib(0.1, 500.0);
        for h in [0.1005, 0.11, 0.2, 0.5] {
            let b = fib(h, 500.0);
            let f = delta_frequency_keyed(&a, &b, 0.3, &folner, &sampler, 11).unwrap();
            for nu in [1e-4, 1e-3, 0.01, 0.05, 0.1, f.estimate, f.estimate + 1e-9] {
                let d = frequency_at_least(&a, &b, 0.3, nu, &folner, &sampler, 11).unwrap();
                assert_eq!(d, f.estimate >= nu, "h={h} nu={nu} est={}", f.estimate);
            }
        }
    }

    #[test]
    fn bounded_by_the_window_estimate() {
        let cps = fibonacci_cps();
        let w = IntervalUnion::interval(-1.0, PHI - 1.0).unwrap();
        let folner = small_folner();
        let sampler = OrbitSampler::standard(3);
        let a = fib(0.1, 500.0);
        for h in [0.12, 0.2, 0.35] {
            let b = fib(h, 500.0);
            let f = delta_frequency(&a, &b, 0.3, &folner, &sampler).unwrap();
            let bound = pair_frequency_bound(&cps, &w, 0.3, 0.1, h).unwrap();
            assert!(f.estimate <= bound + 3.0 * f.std_error, "{} > {}", f.estimate, bound);
        }
    }

    #[test]
    fn besicovitch_dominates_frequency() {
        let folner = small_folner();
        let sampler = OrbitSampler::standard(4);
        let (a, b) = (fib(0.1, 500.0), fib(0.2, 500.0));
        let d = besicovitch_report(&a, &b, &folner, &sampler, None, 0).unwrap();
        for delta in [0.1, 0.2, 0.4] {
            let f = delta_frequency_keyed(&a, &b, delta, &folner, &sampler, 0).unwrap();
            for (x, y) in d.per_n.iter().zip(&f.per_n) {
                assert!(x.1 >= delta * y.1 - 1e-12);
            }
        }
        let same = besicovitch_pseudometric(&a, &a, &folner, &sampler, None).unwrap();
        assert!(same <= coarse_metric_grid().min());
    }
}
