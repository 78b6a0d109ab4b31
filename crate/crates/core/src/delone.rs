//! Finite truncations of Delone sets on the line and the hull metric.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GeometricGrid;

/// Point-matching tolerance for patches and the metric.
pub const PATCH_TOL: f64 = 1.0 / (1u64 << 30) as f64;

/// Largest value the hull metric takes.
pub const METRIC_CAP: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Where a point set came from, when it is a model set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub g_shift: f64,
    pub h_shift: f64,
    /// `true` when the set was cut with the window interior.
    pub interior: bool,
    pub window_measure: f64,
    pub covolume: f64,
}

/// Sorted points known to be complete inside `[-radius, radius]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeloneSet {
    points: Vec<f64>,
    radius: f64,
    pub meta: Option<Provenance>,
}

impl DeloneSet {
    /// Points must be strictly increasing and lie in `[-radius, radius]`.
    pub fn new(points: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid(format!("radius must be positive, got {radius}")));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("non-finite point"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("points must be strictly increasing"));
        }
        if points.iter().any(|p| p.abs() > radius) {
            return Err(Error::invalid("point outside the declared radius"));
        }
        Ok(DeloneSet {
            points,
            radius,
            meta: None,
        })
    }

    /// Sort, deduplicate and clip to `[-radius, radius]`.
    pub fn from_unsorted(mut points: Vec<f64>, radius: f64) -> Result<Self> {
        points.retain(|p| p.abs() <= radius);
        points.sort_by(f64::total_cmp);
        points.dedup();
        Self::new(points, radius)
    }

    pub fn with_meta(mut self, meta: Provenance) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in the open interval `(lo, hi)`.
    pub fn between(&self, lo: f64, hi: f64) -> &[f64] {
        let i = self.points.partition_point(|p| *p <= lo);
        let j = self.points.partition_point(|p| *p < hi);
        &self.points[i..j.max(i)]
    }

    /// Points within [`PATCH_TOL`] of the open interval `(lo, hi)`.
    fn between_loose(&self, lo: f64, hi: f64) -> &[f64] {
        self.between(lo - PATCH_TOL, hi + PATCH_TOL)
    }

    /// `Γ - t`, keeping only the part that is still fully known.
    pub fn shifted(&self, t: f64) -> Result<Self> {
        let r = self.radius - t.abs();
        if r <= 0.0 {
            return Err(Error::InsufficientData(format!(
                "shift {t} exhausts radius {}",
                self.radius
            )));
        }
        let pts = self
            .points
            .iter()
            .map(|p| p - t)
            .filter(|p| p.abs() <= r)
            .collect();
        Ok(DeloneSet {
            points: pts,
            radius: r,
            meta: self.meta.clone(),
        })
    }

    /// Points with `|p| < n` count divided by `2n`.
    pub fn density(&self, n: f64) -> f64 {
        self.between(-n, n).len() as f64 / (2.0 * n)
    }
}

/// Smallest distance between consecutive points.
pub fn min_gap(s: &DeloneSet) -> Result<f64> {
    gaps(s)?.reduce(f64::min).ok_or_else(|| unreachable_gap())
}

/// Half the largest consecutive gap: every open ball of that radius whose
/// centre stays inside the data window meets the set.
pub fn covering_radius(s: &DeloneSet) -> Result<f64> {
    Ok(gaps(s)?.reduce(f64::max).ok_or_else(|| unreachable_gap())? / 2.0)
}

fn gaps(s: &DeloneSet) -> Result<impl Iterator<Item = f64> + '_> {
    if s.len() < 2 {
        return Err(Error::Undefined(format!(
            "gap statistics need two points, set has {}",
            s.len()
        )));
    }
    Ok(s.points.windows(2).map(|w| w[1] - w[0]))
}

fn unreachable_gap() -> Error {
    Error::Undefined("no gaps".into())
}

/// The points of `Γ - g` inside the open ball `B(0, ρ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Patch {
    pub rho: f64,
    pub offsets: Vec<f64>,
}

impl Patch {
    fn same(&self, other: &Patch) -> bool {
        self.offsets.len() == other.offsets.len()
            && self
                .offsets
                .iter()
                .zip(&other.offsets)
                .all(|(a, b)| (a - b).abs() <= PATCH_TOL)
    }
}

/// Distinct `ρ`-patches around points with `|g| <= T - ρ`, with multiplicities.
///
/// Patches are compared offset by offset with [`PATCH_TOL`]; the list comes
/// back in lexicographic order of offsets.
pub fn patch_census(s: &DeloneSet, rho: f64) -> Result<Vec<(Patch, usize)>> {
    if !(rho > 0.0) {
        return Err(Error::invalid("patch radius must be positive"));
    }
    if rho >= s.radius / 2.0 {
        return Err(Error::InsufficientData(format!(
            "patch radius {rho} needs a set radius above {}",
            2.0 * rho
        )));
    }
    let reach = s.radius - rho;
    let mut patches: Vec<Patch> = s
        .points
        .iter()
        .filter(|g| g.abs() <= reach)
        .map(|&g| Patch {
            rho,
            offsets: s.between(g - rho, g + rho).iter().map(|p| p - g).collect(),
        })
        .collect();
    patches.sort_by(|a, b| {
        a.offsets
            .len()
            .cmp(&b.offsets.len())
            .then_with(|| {
                a.offsets
                    .iter()
                    .zip(&b.offsets)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    let mut out: Vec<(Patch, usize)> = Vec::new();
    for p in patches {
        match out.last_mut() {
            Some((q, c)) if q.same(&p) => *c += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Default metric grid: 48 geometric steps from `2^-12` to `1/√2`.
pub fn default_metric_grid() -> GeometricGrid {
    GeometricGrid::new(1.0 / 4096.0, METRIC_CAP, 48).expect("static grid")
}

/// Coarser grid used inside time averages: `1/32 ..= 1/√2`, 24 steps.
pub fn coarse_metric_grid() -> GeometricGrid {
    GeometricGrid::new(1.0 / 32.0, METRIC_CAP, 24).expect("static grid")
}

/// Both sets must be known on `[t - R - ε, t + R + ε]` for `R = 1/ε_min`.
pub fn check_metric_radius(a: &DeloneSet, b: &DeloneSet, t: f64, eps_min: f64, eps_max: f64) -> Result<()> {
    let need = t.abs() + 1.0 / eps_min + eps_max;
    let have = a.radius.min(b.radius);
    if have < need {
        return Err(Error::InsufficientData(format!(
            "metric look-ahead needs radius {need}, sets have {have}"
        )));
    }
    Ok(())
}

/// Do `a - g` and `b` agree on the open interval `(lo, hi)`?
///
/// Points within [`PATCH_TOL`] of the ends are allowed to be unmatched, so
/// rounding in `g` cannot flip the answer at the boundary.
fn agree_on(a: &DeloneSet, b: &DeloneSet, g: f64, lo: f64, hi: f64) -> bool {
    let xs = a.between_loose(lo + g, hi + g);
    let ys = b.between_loose(lo, hi);
    let inner = |p: f64| p > lo + PATCH_TOL && p < hi - PATCH_TOL;
    let (mut i, mut j) = (0, 0);
    while i < xs.len() || j < ys.len() {
        let x = xs.get(i).map(|x| x - g);
        let y = ys.get(j).copied();
        match (x, y) {
            (Some(x), Some(y)) if (x - y).abs() <= PATCH_TOL => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                if inner(x) {
                    return false;
                }
                i += 1;
            }
            (Some(_), Some(y)) => {
                if inner(y) {
                    return false;
                }
                j += 1;
            }
            (Some(x), None) => {
                if inner(x) {
                    return false;
                }
                i += 1;
            }
            (None, Some(y)) => {
                if inner(y) {
                    return false;
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    true
}

/// Does a shift `|g| < ε` make `a - t` and `b - t` agree on `B(0, 1/ε)`?
///
/// The test is symmetrised: `g` is accepted when `a - g` and `b` agree on
/// `B(t, R) ∪ B(t - g, R)`, which is the defining condition for the pair and
/// for the swapped pair at once. The caller guarantees enough radius.
pub fn feasible_at(a: &DeloneSet, b: &DeloneSet, t: f64, eps: f64) -> bool {
    let r = 1.0 / eps;
    let check = |g: f64| {
        let lo = t - r - g.max(0.0);
        let hi = t + r - g.min(0.0);
        agree_on(a, b, g, lo, hi)
    };
    if check(0.0) {
        return true;
    }
    // Any admissible shift has to carry some point of one set onto a point of
    // the other near the reference point.
    let nearest = |s: &DeloneSet| {
        let near = s.between(t - r, t + r);
        let k = near.partition_point(|p| *p < t);
        near[k.saturating_sub(1)..(k + 1).min(near.len())]
            .iter()
            .copied()
            .min_by(|x, y| (x - t).abs().total_cmp(&(y - t).abs()))
    };
    if let Some(y) = nearest(b) {
        a.between(y - eps, y + eps)
            .iter()
            .map(|x| x - y)
            .any(|g| g != 0.0 && g.abs() < eps && check(g))
    } else if let Some(x) = nearest(a) {
        b.between(x - eps, x + eps)
            .iter()
            .map(|y| x - y)
            .any(|g| g != 0.0 && g.abs() < eps && check(g))
    } else {
        true
    }
}

/// Smallest grid value at which `a - t`, `b - t` are feasible, capped at `1/√2`.
///
/// Feasibility is monotone in ε, so the grid is bisected.
pub fn distance_at(a: &DeloneSet, b: &DeloneSet, t: f64, grid: &GeometricGrid) -> f64 {
    let v = grid.values();
    if !feasible_at(a, b, t, v[v.len() - 1]) {
        return METRIC_CAP;
    }
    let (mut lo, mut hi) = (0usize, v.len() - 1);
    if feasible_at(a, b, t, v[0]) {
        return v[0];
    }
    // invariant: v[lo] infeasible, v[hi] feasible
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if feasible_at(a, b, t, v[mid]) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    v[hi].min(METRIC_CAP)
}

/// Grid-resolved hull metric between two truncated sets, centred at 0.
pub fn delone_distance(a: &DeloneSet, b: &DeloneSet, grid: &GeometricGrid) -> Result<f64> {
    check_grid(grid)?;
    check_metric_radius(a, b, 0.0, grid.min(), grid.max())?;
    Ok(distance_at(a, b, 0.0, grid))
}

pub(crate) fn check_grid(grid: &GeometricGrid) -> Result<()> {
    if grid.max() > METRIC_CAP * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "metric grid must stay within (0, 1/√2], max is {}",
            grid.max()
        )));
    }
    Ok(())
}

/// `d(Γ - t, Γ' - t) >= δ` at grid resolution: no shift below δ aligns the
/// two sets on `B(t, 1/δ)`.
pub fn separated_at(a: &DeloneSet, b: &DeloneSet, t: f64, delta: f64) -> bool {
    !feasible_at(a, b, t, delta)
}
