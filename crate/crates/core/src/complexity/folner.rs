//! Følner intervals and the deterministic sample grid laid over them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::batch_means_std_error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FolnerKind {
    /// `[-T, T]`
    Symmetric,
    /// `[0, T]`
    OneSidedRight,
    /// `[-T, 0]`
    OneSidedLeft,
    /// `{-⌊T⌋, ..., ⌊T⌋}`, sampled at the integers.
    IntegerSymmetric,
}

impl FolnerKind {
    pub fn name(self) -> &'static str {
        match self {
            FolnerKind::Symmetric => "symmetric",
            FolnerKind::OneSidedRight => "one_sided_right",
            FolnerKind::OneSidedLeft => "one_sided_left",
            FolnerKind::IntegerSymmetric => "integer_symmetric",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "symmetric" => FolnerKind::Symmetric,
            "one_sided_right" => FolnerKind::OneSidedRight,
            "one_sided_left" => FolnerKind::OneSidedLeft,
            "integer_symmetric" => FolnerKind::IntegerSymmetric,
            other => return Err(Error::invalid(format!("unknown Følner kind `{other}`"))),
        })
    }
}

/// Nested family of intervals `F_1 ⊂ ... ⊂ F_N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FolnerSpec {
    pub kind: FolnerKind,
    pub lengths: Vec<f64>,
}

impl FolnerSpec {
    pub fn new(kind: FolnerKind, lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() < 3 {
            return Err(Error::invalid("a Følner family needs at least three lengths"));
        }
        if lengths.iter().any(|t| !(*t > 0.0) || !t.is_finite())
            || lengths.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::invalid("Følner lengths must be positive and ascending"));
        }
        Ok(FolnerSpec { kind, lengths })
    }

    /// `T_n = 50·2^n`, `n = 0..=6`.
    pub fn standard(kind: FolnerKind) -> Self {
        FolnerSpec {
            kind,
            lengths: (0..7).map(|n| 50.0 * f64::powi(2.0, n)).collect(),
        }
    }

    pub fn t_max(&self) -> f64 {
        *self.lengths.last().unwrap()
    }

    /// First index of the tail over which the lim sup is surrogated.
    pub fn tail_start(&self) -> usize {
        let n = self.lengths.len();
        n - n.div_ceil(2)
    }

    fn step(&self, spacing: f64) -> f64 {
        match self.kind {
            FolnerKind::IntegerSymmetric => 1.0,
            _ => spacing,
        }
    }

    /// Inclusive cell-index range making up `F_n`.
    pub fn cells(&self, n: usize, spacing: f64) -> (i64, i64) {
        let t = self.lengths[n];
        let step = self.step(spacing);
        let k = (t / step + 1e-9).floor() as i64;
        match self.kind {
            FolnerKind::Symmetric => (-k, k - 1),
            FolnerKind::OneSidedRight => (0, k - 1),
            FolnerKind::OneSidedLeft => (-k, -1),
            FolnerKind::IntegerSymmetric => (-k, k),
        }
    }

    pub fn size(&self, n: usize, spacing: f64) -> usize {
        let (lo, hi) = self.cells(n, spacing);
        (hi - lo + 1).max(0) as usize
    }

    /// `F_n \ F_{n-1}` as at most two inclusive cell ranges (all of `F_0` for `n = 0`).
    pub fn ring(&self, n: usize, spacing: f64) -> Vec<(i64, i64)> {
        let (lo, hi) = self.cells(n, spacing);
        if n == 0 {
            return if lo <= hi { vec![(lo, hi)] } else { vec![] };
        }
        let (plo, phi) = self.cells(n - 1, spacing);
        let mut out = Vec::new();
        if lo < plo {
            out.push((lo, plo - 1));
        }
        if phi < hi {
            out.push((phi + 1, hi));
        }
        out
    }

    /// Smallest `n` whose `F_n` contains cell `k`.
    pub fn level_of(&self, k: i64, spacing: f64) -> Option<usize> {
        (0..self.lengths.len()).find(|&n| {
            let (lo, hi) = self.cells(n, spacing);
            lo <= k && k <= hi
        })
    }
}

/// Sample grid: one point per cell of width `spacing`, at the cell midpoint
/// or, with jitter, uniformly inside the cell. The jitter of cell `k` is a
/// pure function of `(seed, stream, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSampler {
    pub spacing: f64,
    pub seed: u64,
    pub jitter: bool,
}

/// Cells per random-stream block.
const BLOCK: i64 = 1 << 16;

impl OrbitSampler {
    pub fn new(spacing: f64, seed: u64, jitter: bool) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::invalid(format!("sampler spacing must be positive, got {spacing}")));
        }
        Ok(OrbitSampler {
            spacing,
            seed,
            jitter,
        })
    }

    /// Spacing 0.1, jittered.
    pub fn standard(seed: u64) -> Self {
        OrbitSampler {
            spacing: 0.1,
            seed,
            jitter: true,
        }
    }

    /// Sample positions for the inclusive cell range, in cell order.
    pub fn positions(&self, folner: &FolnerSpec, cells: (i64, i64), stream: u64) -> Vec<f64> {
        let (lo, hi) = cells;
        if hi < lo {
            return Vec::new();
        }
        if folner.kind == FolnerKind::IntegerSymmetric {
            return (lo..=hi).map(|k| k as f64).collect();
        }
        let s = self.spacing;
        if !self.jitter {
            return (lo..=hi).map(|k| (k as f64 + 0.5) * s).collect();
        }
        let mut out = Vec::with_capacity((hi - lo + 1) as usize);
        let mut k = lo;
        while k <= hi {
            let block = k.div_euclid(BLOCK);
            let offset = k.rem_euclid(BLOCK);
            let end = hi.min(block * BLOCK + BLOCK - 1);
            let mut rng = self.block_rng(stream, block);
            rng.set_word_pos(2 * offset as u128);
            for j in k..=end {
                let u: f64 = rng.gen();
                out.push((j as f64 + u) * s);
            }
            k = end + 1;
        }
        out
    }

    fn block_rng(&self, stream: u64, block: i64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&block.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream);
        rng
    }
}

/// Per-`n` averages and their tail-max aggregate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    /// `(T_n, value)`
    pub per_n: Vec<(f64, f64)>,
    pub estimate: f64,
    /// Batch-means standard error of the value that attains the estimate.
    pub std_error: f64,
}

pub(crate) fn tail_max(folner: &FolnerSpec, per_n: &[(f64, f64)]) -> (usize, f64) {
    let start = folner.tail_start();
    let mut best = (start, per_n[start].1);
    for (i, v) in per_n.iter().enumerate().skip(start + 1) {
        if v.1 > best.1 {
            best = (i, v.1);
        }
    }
    best
}

/// Batches used for standard errors.
pub const BATCHES: usize = 20;

/// Upper asymptotic density of `{t : indicator(t)}` along the family.
pub fn asymptotic_density(
    indicator: impl Fn(f64) -> bool,
    folner: &FolnerSpec,
    sampler: &OrbitSampler,
) -> DensityReport {
    averages(|t| if indicator(t) { 1.0 } else { 0.0 }, folner, sampler, 0)
}

/// Følner averages of a real observable sampled on the grid.
pub(crate) fn averages(
    f: impl Fn(f64) -> f64,
    folner: &FolnerSpec,
    sampler: &OrbitSampler,
    stream: u64,
) -> DensityReport {
    let last = folner.lengths.len() - 1;
    let cells = folner.cells(last, sampler.spacing);
    let ts = sampler.positions(folner, cells, stream);
    let values: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    summarize(folner, sampler, cells.0, &values)
}

/// Aggregate per-cell values given on the full `F_N` cell range.
pub(crate) fn summarize(folner: &FolnerSpec, sampler: &OrbitSampler, first: i64, values: &[f64]) -> DensityReport {
    let slice = |n: usize| {
        let (lo, hi) = folner.cells(n, sampler.spacing);
        &values[(lo - first) as usize..=(hi - first) as usize]
    };
    let per_n: Vec<(f64, f64)> = (0..folner.lengths.len())
        .map(|n| {
            let v = slice(n);
            (folner.lengths[n], v.iter().sum::<f64>() / v.len().max(1) as f64)
        })
        .collect();
    let (arg, estimate) = tail_max(folner, &per_n);
    DensityReport {
        per_n,
        estimate,
        std_error: batch_means_std_error(slice(arg), BATCHES),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_lengths() {
        let f = FolnerSpec::standard(FolnerKind::Symmetric);
        assert_eq!(f.lengths, vec![50.0, 100.0, 200.0, 400.0, 800.0, 1600.0, 3200.0]);
        assert_eq!(f.tail_start(), 3);
        assert!(FolnerSpec::new(FolnerKind::Symmetric, vec![1.0, 2.0]).is_err());
        assert!(FolnerSpec::new(FolnerKind::Symmetric, vec![1.0, 3.0, 2.0]).is_err());
    }

    #[test]
    fn rings_partition_the_largest_interval() {
        for kind in [
            FolnerKind::Symmetric,
            FolnerKind::OneSidedLeft,
            FolnerKind::OneSidedRight,
            FolnerKind::IntegerSymmetric,
        ] {
            let f = FolnerSpec::standard(kind);
            let total: i64 = (0..7)
                .flat_map(|n| f.ring(n, 0.1))
                .map(|(lo, hi)| hi - lo + 1)
                .sum();
            assert_eq!(total as usize, f.size(6, 0.1), "{kind:?}");
        }
    }

    #[test]
    fn jitter_is_reproducible_and_local() {
        let f = FolnerSpec::standard(FolnerKind::Symmetric);
        let s = OrbitSampler::standard(7);
        let all = s.positions(&f, (-100, 100), 3);
        let part = s.positions(&f, (10, 20), 3);
        assert_eq!(&all[110..=120], &part[..]);
        for (k, t) in (-100..=100).zip(&all) {
            assert!(*t >= k as f64 * 0.1 && *t < (k + 1) as f64 * 0.1);
        }
        assert_ne!(all, s.positions(&f, (-100, 100), 4));
    }

    #[test]
    fn density_examples() {
        let s = OrbitSampler::standard(1);
        let sym = FolnerSpec::standard(FolnerKind::Symmetric);
        assert_eq!(asymptotic_density(|_| true, &sym, &s).estimate, 1.0);
        let half = asymptotic_density(|t| t.rem_euclid(2.0) < 1.0, &sym, &s);
        assert!((half.estimate - 0.5).abs() < 0.01);
        let left = FolnerSpec::standard(FolnerKind::OneSidedLeft);
        let right = FolnerSpec::standard(FolnerKind::OneSidedRight);
        assert_eq!(asymptotic_density(|t| t >= 0.0, &left, &s).estimate, 0.0);
        assert_eq!(asymptotic_density(|t| t >= 0.0, &right, &s).estimate, 1.0);
    }
}
