//! Small numerical helpers shared by the estimators.

/// Ordinary least-squares line through `(x, y)` pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares fit of `y = slope * x + intercept`.
///
/// Returns `None` for fewer than two points or when all `x` coincide.
/// A fit through perfectly constant `y` reports `r_squared = 1`.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<LineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy <= 0.0 {
        1.0
    } else {
        let ss_res: f64 = points
            .iter()
            .map(|&(x, y)| {
                let e = y - (slope * x + intercept);
                e * e
            })
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Some(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Batch-means standard error of the mean of a 0/1 (or real) sample path.
///
/// Consecutive samples of an orbit are strongly correlated, so the naive
/// binomial error is far too small. Samples are cut into `batches`
/// contiguous blocks and the spread of the block means is used instead.
pub fn batch_means_std_error(samples: &[f64], batches: usize) -> f64 {
    let batches = batches.max(2).min(samples.len().max(1));
    if samples.len() < 2 || batches < 2 {
        return 0.0;
    }
    let size = samples.len() / batches;
    if size == 0 {
        return 0.0;
    }
    let means: Vec<f64> = samples
        .chunks_exact(size)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    let k = means.len() as f64;
    let m = means.iter().sum::<f64>() / k;
    let var = means.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (k - 1.0);
    (var / k).sqrt()
}
