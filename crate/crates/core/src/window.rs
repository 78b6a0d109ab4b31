//! Interval-union algebra on the internal line.
//!
//! Windows are finite unions of closed intervals. Everything a model set
//! needs from its window lives here: membership, Lebesgue measure, shifted
//! symmetric differences, boundary points and their ε-neighbourhoods, the
//! middle-segment Cantor constructions, and the scaling-exponent fits used to
//! read off box dimensions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GeometricGrid;
use crate::io::fmt17;
use crate::stats::linear_fit;

/// Endpoint merge tolerance: two parts closer than this are one part.
pub const MERGE_TOL: f64 = 1.0 / (1u64 << 40) as f64;

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(format!("non-finite endpoint in [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::invalid(format!("interval with lo > hi: [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

/// Finite union of closed intervals, stored sorted and gap-separated.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl TryFrom<Vec<[f64; 2]>> for IntervalUnion {
    type Error = Error;
    fn try_from(raw: Vec<[f64; 2]>) -> Result<Self> {
        let parts = raw
            .into_iter()
            .map(|[lo, hi]| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        IntervalUnion::normalize(&parts)
    }
}

impl From<IntervalUnion> for Vec<[f64; 2]> {
    fn from(w: IntervalUnion) -> Self {
        w.parts.iter().map(|p| [p.lo, p.hi]).collect()
    }
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    /// Sort and merge; parts whose gap is at most [`MERGE_TOL`] are fused.
    pub fn normalize(raw: &[Interval]) -> Result<Self> {
        for iv in raw {
            Interval::new(iv.lo, iv.hi)?;
        }
        let mut sorted = raw.to_vec();
        sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        Ok(IntervalUnion {
            parts: merge_sorted(sorted),
        })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let raw = pairs
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Self::normalize(&raw)
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::from_pairs(&[(lo, hi)])
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Lebesgue measure. The interior has the same measure.
    pub fn measure(&self) -> f64 {
        self.parts.iter().map(Interval::len).sum()
    }

    pub fn hull(&self) -> Option<Interval> {
        Some(Interval {
            lo: self.parts.first()?.lo,
            hi: self.parts.last()?.hi,
        })
    }

    /// True when every part has length above the merge tolerance, i.e. the
    /// set is the closure of its interior.
    pub fn is_proper(&self) -> bool {
        self.parts.iter().all(|p| p.len() > MERGE_TOL)
    }

    pub fn translate(&self, t: f64) -> Self {
        IntervalUnion {
            parts: self
                .parts
                .iter()
                .map(|p| Interval {
                    lo: p.lo + t,
                    hi: p.hi + t,
                })
                .collect(),
        }
    }

    fn part_index_at_or_after(&self, x: f64) -> usize {
        self.parts.partition_point(|p| p.hi < x)
    }

    /// Closed membership; endpoints count, with [`MERGE_TOL`] slack.
    pub fn contains(&self, x: f64) -> bool {
        let i = self.parts.partition_point(|p| p.hi + MERGE_TOL < x);
        self.parts
            .get(i)
            .is_some_and(|p| p.lo - MERGE_TOL <= x)
    }

    /// Interior membership: strictly inside a part by more than [`MERGE_TOL`].
    pub fn contains_interior(&self, x: f64) -> bool {
        let i = self.part_index_at_or_after(x);
        self.parts
            .get(i)
            .is_some_and(|p| p.lo + MERGE_TOL < x && x < p.hi - MERGE_TOL)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = Vec::with_capacity(self.parts.len() + other.parts.len());
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() || j < other.parts.len() {
            let take_self = j >= other.parts.len()
                || (i < self.parts.len() && self.parts[i].lo <= other.parts[j].lo);
            if take_self {
                all.push(self.parts[i]);
                i += 1;
            } else {
                all.push(other.parts[j]);
                j += 1;
            }
        }
        IntervalUnion {
            parts: merge_sorted(all),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let a = self.parts[i];
            let b = other.parts[j];
            let lo = a.lo.max(b.lo);
            let hi = a.hi.min(b.hi);
            if hi >= lo {
                out.push(Interval { lo, hi });
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion {
            parts: merge_sorted(out),
        }
    }

    /// Measure of `self \ other` by a single sweep.
    pub fn difference_measure(&self, other: &Self) -> f64 {
        let mut total = 0.0;
        let mut j = 0;
        for a in &self.parts {
            while j < other.parts.len() && other.parts[j].hi <= a.lo {
                j += 1;
            }
            let mut covered = 0.0;
            let mut k = j;
            while k < other.parts.len() && other.parts[k].lo < a.hi {
                let lo = other.parts[k].lo.max(a.lo);
                let hi = other.parts[k].hi.min(a.hi);
                if hi > lo {
                    covered += hi - lo;
                }
                k += 1;
            }
            total += (a.len() - covered).max(0.0);
        }
        total
    }

    /// `m(W Δ (W + t))`, exact up to floating rounding.
    pub fn symmetric_difference_measure(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let shifted = self.translate(t);
        self.difference_measure(&shifted) + shifted.difference_measure(self)
    }

    /// Sorted endpoints of all parts.
    pub fn boundary_points(&self) -> Vec<f64> {
        self.parts.iter().flat_map(|p| [p.lo, p.hi]).collect()
    }

    /// Smallest part length or inter-part gap; `None` when empty.
    pub fn finest_feature(&self) -> Option<f64> {
        let parts = self.parts.iter().map(Interval::len);
        let gaps = self.parts.windows(2).map(|w| w[1].lo - w[0].hi);
        parts.chain(gaps).reduce(f64::min)
    }

    /// True when `other` is contained in `self` (up to tolerance).
    pub fn contains_union(&self, other: &Self) -> bool {
        other.difference_measure(self) <= MERGE_TOL * (other.len().max(1) as f64)
            && other
                .parts
                .iter()
                .all(|p| self.contains(p.lo) && self.contains(p.hi))
    }

    /// JSON array of `[lo, hi]` pairs with 17 significant digits.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self
            .parts
            .iter()
            .map(|p| format!("[{},{}]", fmt17(p.lo), fmt17(p.hi)))
            .collect();
        format!("[{}]", body.join(","))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn merge_sorted(sorted: Vec<Interval>) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi + MERGE_TOL => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Cantor constructions

/// Which gaps of the middle-segment Cantor construction are kept inside the
/// window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapRule {
    /// All gaps removed: the plain level-`depth` approximation.
    None,
    /// Gaps created at odd subdivision steps are filled.
    OddLevels,
    /// Sparse greedy filling with a dyadic component census.
    SparseDyadic,
}

/// Middle-segment Cantor set `C_γ` truncated at `depth` subdivisions.
///
/// Subdivision step `s` (starting at 1) splits every level-`s-1` interval of
/// length `γ^-(s-1)` into two children of length `γ^-s`, opening a gap of
/// length `(1 - 2/γ)·γ^-(s-1)` between them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorSpec {
    pub gamma: f64,
    pub depth: u32,
    pub gap_rule: GapRule,
}

/// Deepest truncation accepted by the constructions.
pub const MAX_CANTOR_DEPTH: u32 = 20;

impl CantorSpec {
    pub fn new(gamma: f64, depth: u32, gap_rule: GapRule) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 2.0 {
            return Err(Error::invalid(format!("Cantor ratio must exceed 2, got {gamma}")));
        }
        if depth > MAX_CANTOR_DEPTH {
            return Err(Error::Resolution {
                guard: "cantor_depth",
                detail: format!("depth {depth} > {MAX_CANTOR_DEPTH}"),
            });
        }
        let spec = CantorSpec {
            gamma,
            depth,
            gap_rule,
        };
        let finest = spec.finest_length();
        let finest_gap = if depth == 0 {
            f64::INFINITY
        } else {
            (1.0 - 2.0 / gamma) * gamma.powi(-(depth as i32 - 1))
        };
        if finest <= MERGE_TOL || finest_gap <= MERGE_TOL {
            return Err(Error::Resolution {
                guard: "cantor_depth",
                detail: format!(
                    "γ={gamma}, depth={depth}: finest feature {:e} below merge tolerance",
                    finest.min(finest_gap)
                ),
            });
        }
        Ok(spec)
    }

    /// Length `γ^-depth` of the level-`depth` intervals.
    pub fn finest_length(&self) -> f64 {
        self.gamma.powi(-(self.depth as i32))
    }

    /// Smallest scale an ε-dependent estimator may use on this truncation:
    /// `γ^-(depth-2)`.
    pub fn resolution_floor(&self) -> f64 {
        self.gamma.powi(-(self.depth as i32 - 2))
    }

    /// Refuse grids that reach below [`Self::resolution_floor`].
    pub fn check_resolution(&self, grid: &GeometricGrid) -> Result<()> {
        let floor = self.resolution_floor();
        if grid.min() < floor * (1.0 - 1e-9) {
            return Err(Error::Resolution {
                guard: "window_resolution",
                detail: format!(
                    "grid floor {:e} below truncation resolution γ^-(depth-2) = {:e}",
                    grid.min(),
                    floor
                ),
            });
        }
        Ok(())
    }

    /// Build the window selected by `gap_rule`.
    pub fn window(&self) -> Result<IntervalUnion> {
        match self.gap_rule {
            GapRule::None => cantor_approximation(self.gamma, self.depth),
            GapRule::OddLevels => remark_b_window(self.gamma, self.depth),
            GapRule::SparseDyadic => Ok(SparseGapWindow::build(self.depth)?.window),
        }
    }
}

/// Walk the subdivision tree down to `depth`, reporting leaf intervals and
/// every gap together with the step that created it.
fn cantor_walk(gamma: f64, depth: u32, mut leaf: impl FnMut(f64, f64), mut gap: impl FnMut(u32, f64, f64)) {
    // Iterative pre-order walk; left children first so leaves arrive sorted.
    let mut stack = vec![(0.0f64, 1.0f64, 1u32)];
    while let Some((a, b, step)) = stack.pop() {
        if step > depth {
            leaf(a, b);
            continue;
        }
        let child = (b - a) / gamma;
        gap(step, a + child, b - child);
        stack.push((b - child, b, step + 1));
        stack.push((a, a + child, step + 1));
    }
}

/// The `2^depth` level-`depth` intervals of `C_γ` inside `[0, 1]`.
pub fn cantor_approximation(gamma: f64, depth: u32) -> Result<IntervalUnion> {
    CantorSpec::new(gamma, depth, GapRule::None)?;
    let mut parts = Vec::with_capacity(1usize << depth);
    cantor_walk(gamma, depth, |a, b| parts.push(Interval { lo: a, hi: b }), |_, _, _| {});
    Ok(IntervalUnion {
        parts: merge_sorted(parts),
    })
}

/// Level-`depth` Cantor intervals together with every gap opened at an odd
/// subdivision step.
///
/// Step 1 opens the central gap of length `1 - 2/γ`; with this indexing the
/// filled gaps have lengths `(1-2/γ)·γ^-(s-1)` for odd `s`.
pub fn remark_b_window(gamma: f64, depth: u32) -> Result<IntervalUnion> {
    if depth == 0 {
        return Err(Error::invalid("odd-level window needs depth >= 1"));
    }
    CantorSpec::new(gamma, depth, GapRule::OddLevels)?;
    let mut parts = Vec::with_capacity(1usize << depth);
    let mut filled = Vec::with_capacity(1usize << depth);
    cantor_walk(
        gamma,
        depth,
        |a, b| parts.push(Interval { lo: a, hi: b }),
        |step, a, b| {
            if step % 2 == 1 {
                filled.push(Interval { lo: a, hi: b });
            }
        },
    );
    parts.extend(filled);
    IntervalUnion::normalize(&parts)
}

/// Identifier of a Cantor gap: subdivision step and left-to-right index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapId {
    pub step: u32,
    pub index: u64,
}

/// A window whose boundary is a Cantor-set approximation while only a
/// logarithmic number of its components are large.
///
/// Base set: `C_4` truncated at `cantor_depth`. Gaps are visited from the
/// coarsest step to the finest, left to right, and filled whenever the
/// component census still holds afterwards: for every `n` in
/// `1..=census_depth` the window has fewer than `n` components of length
/// `>= 2^-n`. `census_depth` reaches down to the smallest dyadic scale above
/// the dust length `4^-cantor_depth`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseGapWindow {
    pub window: IntervalUnion,
    pub gamma: f64,
    pub cantor_depth: u32,
    pub census_depth: u32,
    /// Filled gaps in the order they were accepted.
    pub filled: Vec<GapId>,
    /// Gaps left open because filling them would break the census.
    pub refused: usize,
}

impl SparseGapWindow {
    pub const GAMMA: f64 = 4.0;

    pub fn build(depth: u32) -> Result<Self> {
        if depth == 0 {
            return Err(Error::invalid("sparse-gap window needs depth >= 1"));
        }
        let gamma = Self::GAMMA;
        CantorSpec::new(gamma, depth, GapRule::SparseDyadic)?;
        let leaves_n = 1usize << depth;
        let mut leaves = Vec::with_capacity(leaves_n);
        let mut gaps: Vec<(u32, f64, f64)> = Vec::with_capacity(leaves_n);
        cantor_walk(gamma, depth, |a, b| leaves.push((a, b)), |s, a, b| gaps.push((s, a, b)));
        // cantor_walk reports gaps in pre-order; re-sort coarse to fine, left to right.
        gaps.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));

        // Dyadic scales strictly above the dust length 4^-depth.
        let census_depth = 2 * depth - 1;
        let thresholds: Vec<f64> = (1..=census_depth).map(|n| 0.5f64.powi(n as i32)).collect();
        let mut counts = vec![0usize; thresholds.len()];
        let bump = |counts: &mut Vec<usize>, len: f64, up: bool| {
            for (c, thr) in counts.iter_mut().zip(&thresholds) {
                if len >= *thr {
                    if up {
                        *c += 1;
                    } else {
                        *c -= 1;
                    }
                }
            }
        };
        for &(a, b) in &leaves {
            bump(&mut counts, b - a, true);
        }

        // Runs of leaves joined by filled gaps: run_end[start] / run_start[end].
        let mut run_end: Vec<usize> = (0..leaves_n).collect();
        let mut run_start: Vec<usize> = (0..leaves_n).collect();
        let run_len = |s: usize, e: usize| leaves[e].1 - leaves[s].0;

        let mut filled = Vec::new();
        let mut refused = 0usize;
        let mut per_step_index = vec![0u64; depth as usize + 1];
        for &(step, _, _) in &gaps {
            let index = per_step_index[step as usize];
            per_step_index[step as usize] += 1;
            // the gap splits node (step-1, index); its right child starts here
            let span = 1usize << (depth - step + 1);
            let right_first = index as usize * span + span / 2;
            let left_last = right_first - 1;
            let s1 = run_start[left_last];
            let e2 = run_end[right_first];
            let l1 = run_len(s1, left_last);
            let l2 = run_len(right_first, e2);
            let merged = run_len(s1, e2);
            let ok = thresholds.iter().enumerate().all(|(k, thr)| {
                let n = k + 1;
                let c = counts[k] - usize::from(l1 >= *thr) - usize::from(l2 >= *thr)
                    + usize::from(merged >= *thr);
                c < n
            });
            if !ok {
                refused += 1;
                continue;
            }
            bump(&mut counts, l1, false);
            bump(&mut counts, l2, false);
            bump(&mut counts, merged, true);
            run_end[s1] = e2;
            run_start[e2] = s1;
            filled.push(GapId { step, index });
        }

        let mut parts = Vec::new();
        let mut s = 0;
        while s < leaves_n {
            let e = run_end[s];
            parts.push(Interval {
                lo: leaves[s].0,
                hi: leaves[e].1,
            });
            s = e + 1;
        }
        Ok(SparseGapWindow {
            window: IntervalUnion {
                parts: merge_sorted(parts),
            },
            gamma,
            cantor_depth: depth,
            census_depth,
            filled,
            refused,
        })
    }

    /// Number of components of length `>= 2^-n`.
    pub fn census(&self, n: u32) -> usize {
        component_census(&self.window, n)
    }
}

/// Number of parts of `w` with length `>= 2^-n`.
pub fn component_census(w: &IntervalUnion, n: u32) -> usize {
    let thr = 0.5f64.powi(n as i32);
    w.parts().iter().filter(|p| p.len() >= thr).count()
}

/// Sparse-gap window of the given depth (see [`SparseGapWindow`]).
pub fn remark_a_window(depth: u32) -> Result<IntervalUnion> {
    Ok(SparseGapWindow::build(depth)?.window)
}

// ---------------------------------------------------------------------------
// Neighbourhoods and dimension fits

/// Lebesgue measure of `⋃ [p - ε, p + ε]` over sorted `points`.
pub fn sausage_measure(points: &[f64], eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("sausage radius must be positive, got {eps}")));
    }
    if points.is_empty() {
        return Err(Error::invalid("sausage of an empty point set"));
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("sausage points must be sorted"));
    }
    let mut total = 0.0;
    let mut lo = points[0] - eps;
    let mut hi = points[0] + eps;
    for &p in &points[1..] {
        if p - eps <= hi {
            hi = p + eps;
        } else {
            total += hi - lo;
            lo = p - eps;
            hi = p + eps;
        }
    }
    Ok(total + (hi - lo))
}

/// `ε ↦ sausage_measure(points, ε)` for a fixed point set, evaluated in
/// `O(log n)` from the sorted gaps: the measure is `2ε + Σ min(gap, 2ε)`.
#[derive(Clone, Debug)]
pub struct SausageProfile {
    gaps: Vec<f64>,
    prefix: Vec<f64>,
}

impl SausageProfile {
    pub fn new(points: &[f64]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("sausage of an empty point set"));
        }
        if points.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("sausage points must be sorted"));
        }
        let mut gaps: Vec<f64> = points.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.sort_by(f64::total_cmp);
        let mut prefix = Vec::with_capacity(gaps.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for g in &gaps {
            acc += g;
            prefix.push(acc);
        }
        Ok(SausageProfile { gaps, prefix })
    }

    pub fn measure(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::invalid(format!("sausage radius must be positive, got {eps}")));
        }
        let w = 2.0 * eps;
        let k = self.gaps.partition_point(|&g| g <= w);
        Ok(self.prefix[k] + (self.gaps.len() - k) as f64 * w + w)
    }
}

/// Size of a maximal ε-separated subset of sorted points (greedy sweep,
/// exact on the line).
pub fn separated_count(points: &[f64], eps: f64) -> usize {
    let mut iter = points.iter();
    let Some(&first) = iter.next() else { return 0 };
    let mut last = first;
    let mut count = 1;
    for &p in iter {
        if p - last >= eps {
            count += 1;
            last = p;
        }
    }
    count
}

/// Scaling-exponent fit on a log–log chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(ln ε, ln quantity)` pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
    /// Set when the quantity did not vary over the grid; slope is then 0.
    pub degenerate: bool,
    pub warnings: Vec<String>,
}

impl DimensionFit {
    fn from_points(points: Vec<(f64, f64)>, negate_x: bool, warnings: Vec<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Undefined("no usable points for the fit".into()));
        }
        let all_equal = points.iter().all(|p| p.1 == points[0].1);
        if all_equal || points.len() < 2 {
            return Ok(DimensionFit {
                slope: 0.0,
                intercept: points[0].1,
                r_squared: 1.0,
                points,
                degenerate: true,
                warnings,
            });
        }
        let xy: Vec<(f64, f64)> = points
            .iter()
            .map(|&(x, y)| (if negate_x { -x } else { x }, y))
            .collect();
        let fit = linear_fit(&xy).ok_or_else(|| Error::Undefined("collinear grid".into()))?;
        Ok(DimensionFit {
            slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            points,
            degenerate: false,
            warnings,
        })
    }
}

fn check_fit_grid(grid: &GeometricGrid, min_decades: f64) -> Result<()> {
    if grid.len() < 4 || grid.decades() < min_decades - 1e-9 {
        return Err(Error::invalid(format!(
            "fit grid needs >= 4 values over >= {min_decades} decades (got {} over {:.2})",
            grid.len(),
            grid.decades()
        )));
    }
    Ok(())
}

/// Box dimension of a point set: slope of `ln N_ε` against `-ln ε`, where
/// `N_ε` is the size of a maximal ε-separated subset.
pub fn box_dimension_fit(points: &[f64], grid: &GeometricGrid) -> Result<DimensionFit> {
    check_fit_grid(grid, 2.0)?;
    if points.is_empty() {
        return Err(Error::invalid("box dimension of an empty set"));
    }
    let mut pts = points.to_vec();
    pts.sort_by(f64::total_cmp);
    let data = grid
        .values()
        .iter()
        .map(|&eps| (eps.ln(), (separated_count(&pts, eps) as f64).ln()))
        .collect();
    DimensionFit::from_points(data, true, Vec::new())
}

/// Exponent of `m(W Δ (W + ε))` in ε: slope of the log–log chart.
///
/// Grid values where the measure vanishes are dropped with a warning.
pub fn shift_exponent(window: &IntervalUnion, grid: &GeometricGrid) -> Result<DimensionFit> {
    let mut warnings = Vec::new();
    let mut data = Vec::with_capacity(grid.len());
    for &eps in grid.values() {
        let m = window.symmetric_difference_measure(eps);
        if m > 0.0 {
            data.push((eps.ln(), m.ln()));
        } else {
            warnings.push(format!("m(W Δ (W+{eps:e})) = 0; excluded"));
        }
    }
    DimensionFit::from_points(data, false, warnings)
}

/// Exponent of the ε-neighbourhood measure of a point set; one minus it is
/// the box dimension by Minkowski's characterisation.
pub fn sausage_exponent(points: &[f64], grid: &GeometricGrid) -> Result<DimensionFit> {
    check_fit_grid(grid, 1.0)?;
    let mut pts = points.to_vec();
    pts.sort_by(f64::total_cmp);
    let data = grid
        .values()
        .iter()
        .map(|&eps| Ok((eps.ln(), sausage_measure(&pts, eps)?.ln())))
        .collect::<Result<Vec<_>>>()?;
    DimensionFit::from_points(data, false, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(pairs: &[(f64, f64)]) -> IntervalUnion {
        IntervalUnion::from_pairs(pairs).unwrap()
    }

    fn pairs(w: &IntervalUnion) -> Vec<(f64, f64)> {
        w.parts().iter().map(|p| (p.lo, p.hi)).collect()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(pairs(&u(&[(0.0, 1.0), (0.5, 2.0)])), vec![(0.0, 2.0)]);
        assert!(u(&[]).is_empty());
        assert_eq!(pairs(&u(&[(3.0, 4.0), (0.0, 1.0)])), vec![(0.0, 1.0), (3.0, 4.0)]);
        // touching within tolerance merges
        assert_eq!(u(&[(0.0, 1.0), (1.0 + MERGE_TOL / 2.0, 2.0)]).len(), 1);
    }

    #[test]
    fn normalize_rejects_non_finite() {
        assert!(IntervalUnion::from_pairs(&[(0.0, f64::NAN)]).is_err());
        assert!(IntervalUnion::from_pairs(&[(f64::NEG_INFINITY, 0.0)]).is_err());
        assert!(IntervalUnion::from_pairs(&[(1.0, 0.0)]).is_err());
    }

    #[test]
    fn measure_examples() {
        assert_eq!(u(&[(0.0, 1.0)]).measure(), 1.0);
        assert_eq!(u(&[(0.0, 1.0), (2.0, 3.0)]).measure(), 2.0);
        let c = cantor_approximation(4.0, 2).unwrap();
        assert!(close(c.measure(), 0.25));
    }

    #[test]
    fn symmetric_difference_examples() {
        let w = u(&[(0.0, 1.0)]);
        assert!(close(w.symmetric_difference_measure(0.25), 0.5));
        assert_eq!(w.symmetric_difference_measure(0.0), 0.0);
        let c = cantor_approximation(3.0, 4).unwrap();
        assert_eq!(c.symmetric_difference_measure(0.0), 0.0);
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(u(&[(0.0, 1.0)]).boundary_points(), vec![0.0, 1.0]);
        assert_eq!(
            u(&[(0.0, 1.0), (2.0, 3.0)]).boundary_points(),
            vec![0.0, 1.0, 2.0, 3.0]
        );
        let b = cantor_approximation(3.0, 1).unwrap().boundary_points();
        let want = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
        assert!(b.iter().zip(want).all(|(x, y)| close(*x, y)));
    }

    #[test]
    fn sausage_examples() {
        assert!(close(sausage_measure(&[0.0, 1.0], 0.1).unwrap(), 0.4));
        assert!(close(sausage_measure(&[0.0, 1.0], 0.6).unwrap(), 2.2));
        assert!(sausage_measure(&[0.0], 0.0).is_err());
        assert!(sausage_measure(&[0.0], -1.0).is_err());
        assert!(sausage_measure(&[1.0, 0.0], 0.1).is_err());
    }

    #[test]
    fn cantor_examples() {
        let c = cantor_approximation(3.0, 1).unwrap();
        let want = [(0.0, 1.0 / 3.0), (2.0 / 3.0, 1.0)];
        assert!(pairs(&c).iter().zip(want).all(|(a, b)| close(a.0, b.0) && close(a.1, b.1)));
        assert_eq!(pairs(&cantor_approximation(4.0, 1).unwrap()), vec![(0.0, 0.25), (0.75, 1.0)]);
        assert_eq!(
            pairs(&cantor_approximation(4.0, 2).unwrap()),
            vec![
                (0.0, 1.0 / 16.0),
                (3.0 / 16.0, 0.25),
                (0.75, 13.0 / 16.0),
                (15.0 / 16.0, 1.0)
            ]
        );
    }

    #[test]
    fn cantor_resolution_error() {
        assert!(matches!(
            cantor_approximation(10.0, 14),
            Err(Error::Resolution { .. })
        ));
        assert!(cantor_approximation(2.0, 3).is_err());
    }

    #[test]
    fn odd_level_window_examples() {
        let w = remark_b_window(4.0, 2).unwrap();
        assert_eq!(
            pairs(&w),
            vec![(0.0, 1.0 / 16.0), (3.0 / 16.0, 13.0 / 16.0), (15.0 / 16.0, 1.0)]
        );
        assert!(close(w.measure(), 0.75));
        assert_eq!(pairs(&remark_b_window(4.0, 1).unwrap()), vec![(0.0, 1.0)]);
        let mut prev = f64::INFINITY;
        for k in 1..=10 {
            let m = remark_b_window(4.0, k).unwrap().measure();
            assert!(m <= prev + 1e-12, "k={k}");
            prev = m;
        }
    }

    #[test]
    fn odd_level_window_contains_cantor_and_is_proper() {
        for &(g, k) in &[(3.0, 6), (4.0, 8), (6.0, 5)] {
            let w = remark_b_window(g, k).unwrap();
            let c = cantor_approximation(g, k).unwrap();
            assert!(w.contains_union(&c));
            assert!(w.is_proper());
        }
    }

    #[test]
    fn sparse_gap_window_depth_one() {
        let w = remark_a_window(1).unwrap();
        assert!(w.parts().iter().all(|p| p.len() < 0.5));
        assert!(!w.is_empty());
    }

    #[test]
    fn sparse_gap_window_census() {
        for depth in 1..=10 {
            let sw = SparseGapWindow::build(depth).unwrap();
            assert!(sw.window.is_proper());
            for n in 1..=sw.census_depth {
                assert!(sw.census(n) < n as usize, "depth {depth}, n {n}: {}", sw.census(n));
            }
            // boundary lies on the Cantor set approximation
            let c = cantor_approximation(4.0, depth).unwrap();
            assert!(sw.window.contains_union(&c));
        }
    }

    #[test]
    fn box_fit_single_point_is_degenerate() {
        let grid = GeometricGrid::new(1e-3, 1e-1, 9).unwrap();
        let f = box_dimension_fit(&[0.0], &grid).unwrap();
        assert_eq!(f.slope, 0.0);
        assert!(f.degenerate);
    }

    #[test]
    fn box_fit_rejects_short_grid() {
        let grid = GeometricGrid::new(1e-2, 1e-1, 9).unwrap();
        assert!(box_dimension_fit(&[0.0, 1.0], &grid).is_err());
    }

    #[test]
    fn shift_exponent_of_interval_is_one() {
        let w = u(&[(0.0, 1.0)]);
        let grid = GeometricGrid::new(1e-4, 1e-1, 12).unwrap();
        let f = shift_exponent(&w, &grid).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-9);
    }

    #[test]
    fn shift_exponent_drops_zero_measures() {
        let grid = GeometricGrid::new(1e-3, 1e-1, 5).unwrap();
        let f = shift_exponent(&IntervalUnion::empty(), &grid);
        assert!(f.is_err());
    }

    #[test]
    fn resolution_guard() {
        let spec = CantorSpec::new(4.0, 12, GapRule::OddLevels).unwrap();
        let ok = GeometricGrid::new(4f64.powi(-10), 4f64.powi(-3), 8).unwrap();
        assert!(spec.check_resolution(&ok).is_ok());
        let bad = GeometricGrid::new(4f64.powi(-11), 4f64.powi(-3), 8).unwrap();
        assert!(spec.check_resolution(&bad).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let w = remark_b_window(3.0, 3).unwrap();
        let back = IntervalUnion::from_json(&w.to_json()).unwrap();
        assert_eq!(w, back);
        assert_eq!(u(&[(0.0, 0.25)]).to_json(), "[[0,0.25]]");
    }

    #[test]
    fn sausage_profile_matches_sweep() {
        let pts = remark_b_window(4.0, 6).unwrap().boundary_points();
        let prof = SausageProfile::new(&pts).unwrap();
        for eps in [1e-6, 1e-4, 3e-3, 0.02, 0.3, 2.0] {
            let a = sausage_measure(&pts, eps).unwrap();
            assert!((prof.measure(eps).unwrap() - a).abs() < 1e-12, "{eps}");
        }
    }
}
