//! Separated families (lower bounds for `Sep`) and the covering-number
//! estimate for `Span`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folner::{FolnerSpec, OrbitSampler};
use super::frequency::{delta_frequency_keyed, frequency_at_least};
use crate::cps::{model_set, pair_frequency_bound, CutProjectScheme, ModelSetParams};
use crate::delone::DeloneSet;
use crate::error::{Error, Result};
use crate::window::{IntervalUnion, SausageProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreqMode {
    /// Every pair decided by sampling.
    Mc,
    /// Pairs whose analytic bound is already below `ν` are rejected
    /// without sampling; the rest are sampled.
    AnalyticScreen,
}

impl FreqMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mc" => Ok(FreqMode::Mc),
            "analytic_screen" => Ok(FreqMode::AnalyticScreen),
            other => Err(Error::invalid(format!("unknown frequency mode `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FreqMode::Mc => "mc",
            FreqMode::AnalyticScreen => "analytic_screen",
        }
    }
}

/// Parameters in lexicographic `(g, h)` order.
pub fn family_grid(window: &IntervalUnion, g_values: &[f64], h_values: &[f64], radius: f64) -> Result<Vec<ModelSetParams>> {
    let mut out = Vec::with_capacity(g_values.len() * h_values.len());
    for &g in g_values {
        for &h in h_values {
            out.push(ModelSetParams::new(g, h, window.clone(), radius)?);
        }
    }
    Ok(out)
}

/// `count` values `offset + i·span/count`.
pub fn uniform_shifts(offset: f64, span: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| offset + span * i as f64 / count as f64).collect()
}

/// A family of model sets generated once and compared many times.
pub struct Family {
    cps: CutProjectScheme,
    params: Vec<ModelSetParams>,
    sets: Vec<DeloneSet>,
}

/// Random-stream key of an unordered pair.
pub fn pair_stream(i: usize, j: usize) -> u64 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    ((lo as u64) << 32) | hi as u64
}

/// Why a candidate was turned away.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rejection {
    /// The analytic bound against `witness` is below `ν`.
    Screened { witness: usize },
    /// The sampled frequency against `witness` is below `ν`.
    Sampled { witness: usize },
}

impl Rejection {
    pub fn witness(&self) -> usize {
        match *self {
            Rejection::Screened { witness } | Rejection::Sampled { witness } => witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyOutcome {
    pub delta: f64,
    pub nu: f64,
    pub kept: Vec<usize>,
    /// `(candidate, reason)` for every rejected index, in scan order.
    pub rejected: Vec<(usize, Rejection)>,
    pub sampled_pairs: usize,
    pub screened_pairs: usize,
}

impl Family {
    pub fn generate(cps: &CutProjectScheme, params: Vec<ModelSetParams>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::invalid("empty family"));
        }
        let sets = params
            .par_iter()
            .map(|p| model_set(cps, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Family {
            cps: cps.clone(),
            params,
            sets,
        })
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[ModelSetParams] {
        &self.params
    }

    pub fn set(&self, i: usize) -> &DeloneSet {
        &self.sets[i]
    }

    pub fn cps(&self) -> &CutProjectScheme {
        &self.cps
    }

    /// Analytic bound, available when the two members share `g` and window.
    pub fn bound(&self, i: usize, j: usize, delta: f64) -> Option<f64> {
        let (p, q) = (&self.params[i], &self.params[j]);
        if p.g_shift != q.g_shift || p.window != q.window {
            return None;
        }
        pair_frequency_bound(&self.cps, &p.window, delta, p.h_shift, q.h_shift).ok()
    }

    /// Full sampled frequency of a pair.
    pub fn frequency(&self, i: usize, j: usize, delta: f64, folner: &FolnerSpec, sampler: &OrbitSampler) -> Result<super::PairFrequency> {
        let f = delta_frequency_keyed(&self.sets[i], &self.sets[j], delta, folner, sampler, pair_stream(i, j))?;
        Ok(match self.bound(i, j, delta) {
            Some(b) => f.with_bound(b),
            None => f,
        })
    }

    /// Greedy `(δ, ν)`-separated subfamily in index order.
    ///
    /// A candidate is kept when its frequency against every kept member is at
    /// least `ν`. Kept members are tried most recent first, which finds the
    /// rejecting member early when the family is ordered by shift.
    pub fn greedy(
        &self,
        delta: f64,
        nu: f64,
        folner: &FolnerSpec,
        sampler: &OrbitSampler,
        mode: FreqMode,
    ) -> Result<GreedyOutcome> {
        self.greedy_with(delta, nu, folner, sampler, mode, &mut Memo::default())
    }

    fn greedy_with(
        &self,
        delta: f64,
        nu: f64,
        folner: &FolnerSpec,
        sampler: &OrbitSampler,
        mode: FreqMode,
        memo: &mut Memo,
    ) -> Result<GreedyOutcome> {
        if !(nu > 0.0) || nu > 1.0 {
            return Err(Error::invalid(format!("nu must lie in (0, 1], got {nu}")));
        }
        let mut kept: Vec<usize> = Vec::new();
        let mut rejected = Vec::new();
        let (mut sampled, mut screened) = (0, 0);
        'candidates: for c in 0..self.len() {
            for &k in kept.iter().rev() {
                if mode == FreqMode::AnalyticScreen {
                    let (p, q) = (&self.params[k], &self.params[c]);
                    if p.g_shift == q.g_shift && p.window == q.window {
                        let key = (p.g_shift.to_bits(), (q.h_shift - p.h_shift).abs().to_bits());
                        let b = *memo
                            .bounds
                            .entry(key)
                            .or_insert_with(|| self.bound(k, c, delta).unwrap_or(1.0));
                        if b < nu {
                            screened += 1;
                            rejected.push((c, Rejection::Screened { witness: k }));
                            continue 'candidates;
                        }
                    }
                }
                sampled += 1;
                let stream = pair_stream(k, c);
                let known = memo.decisions.entry(stream).or_insert((0.0, f64::INFINITY));
                let ok = if nu <= known.0 {
                    true
                } else if nu >= known.1 {
                    false
                } else {
                    let ok = frequency_at_least(&self.sets[k], &self.sets[c], delta, nu, folner, sampler, stream)?;
                    if ok {
                        known.0 = nu;
                    } else {
                        known.1 = nu;
                    }
                    ok
                };
                if !ok {
                    rejected.push((c, Rejection::Sampled { witness: k }));
                    continue 'candidates;
                }
            }
            kept.push(c);
        }
        Ok(GreedyOutcome {
            delta,
            nu,
            kept,
            rejected,
            sampled_pairs: sampled,
            screened_pairs: screened,
        })
    }

    /// Greedy runs and their spanning checks for several `ν` at one `δ`.
    ///
    /// Rows are processed from the largest `ν` down. A pair separated at `ν`
    /// is separated at every smaller `ν` and a pair below `ν` stays below at
    /// every larger one, so decisions carry over between rows; full
    /// frequencies for the spanning checks are shared too. Each outcome is
    /// identical to a separate [`Family::greedy`] call.
    pub fn scan(
        &self,
        delta: f64,
        nus: &[f64],
        folner: &FolnerSpec,
        sampler: &OrbitSampler,
        mode: FreqMode,
    ) -> Result<Vec<(GreedyOutcome, SpanningCheck)>> {
        let mut order: Vec<usize> = (0..nus.len()).collect();
        order.sort_by(|&i, &j| nus[j].total_cmp(&nus[i]));
        let mut memo = Memo::default();
        let mut estimates = HashMap::new();
        let mut out: Vec<Option<(GreedyOutcome, SpanningCheck)>> = vec![None; nus.len()];
        for i in order {
            let g = self.greedy_with(delta, nus[i], folner, sampler, mode, &mut memo)?;
            let check = self.verify_spanning_with(&g, folner, sampler, &mut estimates)?;
            out[i] = Some((g, check));
        }
        Ok(out.into_iter().map(Option::unwrap).collect())
    }

    /// Re-derive every rejection from scratch: the kept set is then
    /// `(δ, ν)`-spanning for the family on this sample grid.
    pub fn verify_spanning(&self, outcome: &GreedyOutcome, folner: &FolnerSpec, sampler: &OrbitSampler) -> Result<SpanningCheck> {
        self.verify_spanning_with(outcome, folner, sampler, &mut HashMap::new())
    }

    fn verify_spanning_with(
        &self,
        outcome: &GreedyOutcome,
        folner: &FolnerSpec,
        sampler: &OrbitSampler,
        estimates: &mut HashMap<u64, f64>,
    ) -> Result<SpanningCheck> {
        let mut missing: Vec<(usize, usize)> = outcome
            .rejected
            .iter()
            .filter_map(|&(c, why)| match why {
                Rejection::Sampled { witness } if !estimates.contains_key(&pair_stream(witness, c)) => Some((witness, c)),
                _ => None,
            })
            .collect();
        missing.sort_unstable();
        missing.dedup();
        let fresh = missing
            .par_iter()
            .map(|&(w, c)| Ok((pair_stream(w, c), self.frequency(w, c, outcome.delta, folner, sampler)?.estimate)))
            .collect::<Result<Vec<_>>>()?;
        estimates.extend(fresh);

        let kept: std::collections::HashSet<usize> = outcome.kept.iter().copied().collect();
        let failures: Vec<usize> = outcome
            .rejected
            .iter()
            .filter(|&&(c, why)| {
                let below = kept.contains(&why.witness())
                    && match why {
                        Rejection::Screened { witness } => self
                            .bound(witness, c, outcome.delta)
                            .is_some_and(|b| b < outcome.nu),
                        Rejection::Sampled { witness } => estimates[&pair_stream(witness, c)] < outcome.nu,
                    };
                !below
            })
            .map(|&(c, _)| c)
            .collect();
        let covered = outcome.kept.len() + outcome.rejected.len() == self.len();
        Ok(SpanningCheck {
            checked: outcome.rejected.len(),
            failures,
            covered,
        })
    }
}

/// Decisions shared between greedy runs at one `δ`.
#[derive(Default)]
struct Memo {
    /// Analytic bound keyed by `(g bits, |Δh| bits)`.
    bounds: HashMap<(u64, u64), f64>,
    /// Per pair: largest `ν` known to pass, smallest `ν` known to fail.
    decisions: HashMap<u64, (f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanningCheck {
    pub checked: usize,
    pub failures: Vec<usize>,
    /// Every family member is kept or rejected.
    pub covered: bool,
}

impl SpanningCheck {
    pub fn passed(&self) -> bool {
        self.covered && self.failures.is_empty()
    }
}

/// Greedy separated subfamily of freshly generated model sets.
pub fn greedy_separated(
    cps: &CutProjectScheme,
    family: &[ModelSetParams],
    delta: f64,
    nu: f64,
    folner: &FolnerSpec,
    sampler: &OrbitSampler,
    mode: FreqMode,
) -> Result<Vec<usize>> {
    let fam = Family::generate(cps, family.to_vec())?;
    Ok(fam.greedy(delta, nu, folner, sampler, mode)?.kept)
}

/// Covering-number bound `N_{δ/2}(A)·N_ε(B)` for `Span(δ, ν)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanEstimate {
    pub count: u64,
    /// `ε(ν)`; `None` when one ball already covers `B`.
    pub eps: Option<f64>,
    pub n_external: u64,
    pub n_internal: u64,
}

/// Lengths of the external and internal projections used by the span bound.
///
/// `A` is the projection of the fundamental parallelogram to `G`; `B` is the
/// hull of its projection to `H` together with the window.
pub fn fundamental_extents(cps: &CutProjectScheme, window: &IntervalUnion) -> (f64, f64) {
    let [(a, b), (c, d)] = cps.basis();
    let span = |xs: [f64; 4]| {
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (glo, ghi) = span([0.0, a, c, a + c]);
    let (mut hlo, mut hhi) = span([0.0, b, d, b + d]);
    if let Some(hull) = window.hull() {
        hlo = hlo.min(hull.lo);
        hhi = hhi.max(hull.hi);
    }
    (ghi - glo, hhi - hlo)
}

fn cover(len: f64, radius: f64) -> u64 {
    ((len / (2.0 * radius)).ceil() as u64).max(1)
}

/// Radius `ε(ν)` at which the `ε`-neighbourhood of `∂W` reaches measure
/// `ν·δ/4`; `None` if it needs more than `limit`.
pub fn sausage_radius(boundary: &[f64], target: f64, limit: f64) -> Result<Option<f64>> {
    profile_radius(&SausageProfile::new(boundary)?, target, limit)
}

fn profile_radius(profile: &SausageProfile, target: f64, limit: f64) -> Result<Option<f64>> {
    if profile.measure(limit)? < target {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0f64, limit);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if profile.measure(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Span bound for one window, reusable across `(δ, ν)`.
#[derive(Clone, Debug)]
pub struct SpanModel {
    len_a: f64,
    len_b: f64,
    profile: SausageProfile,
}

impl SpanModel {
    pub fn new(cps: &CutProjectScheme, window: &IntervalUnion) -> Result<Self> {
        if window.is_empty() || !window.is_proper() {
            return Err(Error::invalid("span estimate needs a proper, non-empty window"));
        }
        let (len_a, len_b) = fundamental_extents(cps, window);
        Ok(SpanModel {
            len_a,
            len_b,
            profile: SausageProfile::new(&window.boundary_points())?,
        })
    }

    pub fn estimate(&self, delta: f64, nu: f64) -> Result<SpanEstimate> {
        if !(delta > 0.0) || !(nu > 0.0) {
            return Err(Error::invalid("span estimate needs positive delta and nu"));
        }
        let n_external = cover(self.len_a, delta / 2.0);
        let target = nu / (4.0 / delta);
        Ok(match profile_radius(&self.profile, target, self.len_b)? {
            None => SpanEstimate {
                count: n_external,
                eps: None,
                n_external,
                n_internal: 1,
            },
            Some(eps) => {
                let n_internal = cover(self.len_b, eps);
                SpanEstimate {
                    count: n_external * n_internal,
                    eps: Some(eps),
                    n_external,
                    n_internal,
                }
            }
        })
    }
}

pub fn span_estimate(cps: &CutProjectScheme, window: &IntervalUnion, delta: f64, nu: f64) -> Result<SpanEstimate> {
    SpanModel::new(cps, window)?.estimate(delta, nu)
}

#[cfg(test)]
mod tests {
    use super::super::folner::FolnerKind;
    use super::*;
    use crate::cps::{fibonacci_cps, PHI};

    fn folner() -> FolnerSpec {
        FolnerSpec::new(FolnerKind::Symmetric, vec![50.0, 100.0, 200.0, 400.0]).unwrap()
    }

    #[test]
    fn identical_members_collapse() {
        let w = IntervalUnion::interval(-1.0, PHI - 1.0).unwrap();
        let fam = family_grid(&w, &[0.0], &[0.1; 5], 420.0).unwrap();
        let kept = greedy_separated(&fibonacci_cps(), &fam, 0.3, 0.01, &folner(), &OrbitSampler::standard(1), FreqMode::Mc).unwrap();
        assert_eq!(kept, vec![0]);
    }

    #[test]
    fn distant_members_are_all_kept() {
        let w = IntervalUnion::interval(-1.0, PHI - 1.0).unwrap();
        let fam = family_grid(&w, &[0.0], &[0.1, 0.6], 420.0).unwrap();
        let kept = greedy_separated(&fibonacci_cps(), &fam, 0.3, 0.01, &folner(), &OrbitSampler::standard(1), FreqMode::Mc).unwrap();
        assert_eq!(kept, vec![0, 1]);
    }

    #[test]
    fn greedy_is_spanning_and_monotone() {
        let cps = fibonacci_cps();
        let w = IntervalUnion::interval(-1.0, PHI - 1.0).unwrap();
        let params = family_grid(&w, &[0.0], &uniform_shifts(0.0414, 1.0, 40), 420.0).unwrap();
        let fam = Family::generate(&cps, params).unwrap();
        let f = folner();
        let s = OrbitSampler::standard(5);
        let mut prev = usize::MAX;
        for nu in [0.005, 0.02, 0.08] {
            for mode in [FreqMode::Mc, FreqMode::AnalyticScreen] {
                let out = fam.greedy(0.3, nu, &f, &s, mode).unwrap();
                assert!(fam.verify_spanning(&out, &f, &s).unwrap().passed());
                if mode == FreqMode::Mc {
                    assert!(out.kept.len() <= prev);
                    prev = out.kept.len();
                }
            }
        }
    }

    #[test]
    fn span_of_an_interval_window() {
        let cps = fibonacci_cps();
        let w = IntervalUnion::interval(0.0, 1.0).unwrap();
        let delta = 0.25;
        for nu in [1e-3, 1e-2] {
            let s = span_estimate(&cps, &w, delta, nu).unwrap();
            let eps = s.eps.unwrap();
            assert!((eps - nu * delta / 16.0).abs() < 1e-12);
        }
        let (_, len_b) = fundamental_extents(&cps, &w);
        let big = span_estimate(&cps, &w, delta, 4.0 * len_b * (4.0 / delta)).unwrap();
        assert_eq!(big.count, big.n_external);
    }
}
