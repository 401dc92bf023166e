//! Concordance and conditional-performance statistics over paired samples.

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("paired sample lengths differ: {x} vs {y}")]
    LengthMismatch { x: usize, y: usize },
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("need at least {needed} rows, got {got}")]
    InsufficientLength { needed: usize, got: usize },
    #[error("all {0} values are tied")]
    AllTied(&'static str),
    #[error("percentile {0} must lie strictly between 0 and 100")]
    BadPercentile(f64),
    #[error("no samples exceed the conditioning percentile")]
    EmptyCondition,
}

/// Paired metric/fidelity observations.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PairedSample {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, StatsError> {
        if x.len() != y.len() {
            return Err(StatsError::LengthMismatch { x: x.len(), y: y.len() });
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite);
        }
        Ok(Self { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }
}

// ---------------------------------------------------------------------------
// Kendall tau-b
// ---------------------------------------------------------------------------

fn tie_pairs(sorted: &[f64]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Count strict inversions (pairs out of order) via merge sort.
fn count_inversions(values: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = values.len();
    if n <= 1 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = values.split_at_mut(mid);
    let mut inv = count_inversions(left, buf) + count_inversions(right, buf);
    // merge, counting right-before-left strict descents
    let (mut i, mut j, mut k) = (0usize, 0usize, 0usize);
    while i < left.len() && j < right.len() {
        if right[j] < left[i] {
            inv += (left.len() - i) as u64;
            buf[k] = right[j];
            j += 1;
        } else {
            buf[k] = left[i];
            i += 1;
        }
        k += 1;
    }
    while i < left.len() {
        buf[k] = left[i];
        i += 1;
        k += 1;
    }
    while j < right.len() {
        buf[k] = right[j];
        j += 1;
        k += 1;
    }
    values.copy_from_slice(&buf[..n]);
    inv
}

/// Tie-adjusted Kendall rank concordance,
/// `(concordant - discordant) / sqrt((n0 - n1)(n0 - n2))`.
///
/// Runs in O(n log n); the O(n^2) sign-expectation definition is kept as a
/// test oracle.
pub fn kendall_tau_b(s: &PairedSample) -> Result<f64, StatsError> {
    let n = s.len();
    if n < 2 {
        return Err(StatsError::InsufficientLength { needed: 2, got: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        s.x[a]
            .partial_cmp(&s.x[b])
            .unwrap()
            .then(s.y[a].partial_cmp(&s.y[b]).unwrap())
    });
    let xs: Vec<f64> = order.iter().map(|&i| s.x[i]).collect();
    let mut ys: Vec<f64> = order.iter().map(|&i| s.y[i]).collect();

    let n0 = n as u64 * (n as u64 - 1) / 2;
    let n1 = tie_pairs(&xs);
    let mut ys_sorted = ys.clone();
    ys_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n2 = tie_pairs(&ys_sorted);
    if n1 == n0 {
        return Err(StatsError::AllTied("x"));
    }
    if n2 == n0 {
        return Err(StatsError::AllTied("y"));
    }
    // joint ties within (x, y) runs
    let mut n3 = 0u64;
    let mut run = 1u64;
    for w in order.windows(2) {
        if s.x[w[0]] == s.x[w[1]] && s.y[w[0]] == s.y[w[1]] {
            run += 1;
        } else {
            n3 += run * (run - 1) / 2;
            run = 1;
        }
    }
    n3 += run * (run - 1) / 2;

    let mut buf = vec![0.0; n];
    let swaps = count_inversions(&mut ys, &mut buf);

    let num = n0 as i128 - n1 as i128 - n2 as i128 + n3 as i128 - 2 * swaps as i128;
    let denom = (((n0 - n1) as f64) * ((n0 - n2) as f64)).sqrt();
    Ok(num as f64 / denom)
}

// ---------------------------------------------------------------------------
// Conditional percentile probability
// ---------------------------------------------------------------------------

/// Nearest-rank percentile of an unsorted sample.
fn percentile_nearest_rank(values: &[f64], k: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rank = ((k / 100.0) * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank - 1]
}

/// `P(Y > Y_k | X > X_k)` with `X_k`, `Y_k` the nearest-rank k-th percentiles
/// of the marginals and strict exceedance throughout.
pub fn conditional_percentile_prob(s: &PairedSample, k: f64) -> Result<f64, StatsError> {
    if !(0.0 < k && k < 100.0) {
        return Err(StatsError::BadPercentile(k));
    }
    if s.is_empty() {
        return Err(StatsError::InsufficientLength { needed: 1, got: 0 });
    }
    let xk = percentile_nearest_rank(s.x(), k);
    let yk = percentile_nearest_rank(s.y(), k);
    let mut above_x = 0usize;
    let mut above_both = 0usize;
    for (&x, &y) in s.x().iter().zip(s.y().iter()) {
        if x > xk {
            above_x += 1;
            if y > yk {
                above_both += 1;
            }
        }
    }
    if above_x == 0 {
        return Err(StatsError::EmptyCondition);
    }
    Ok(above_both as f64 / above_x as f64)
}

// ---------------------------------------------------------------------------
// Bootstrap
// ---------------------------------------------------------------------------

/// Standard deviation of a statistic over with-replacement row resamples.
/// Pairing is preserved: rows, not columns, are resampled. Resamples on which
/// the statistic is undefined are skipped.
pub fn bootstrap_std<R: Rng>(
    statistic: impl Fn(&PairedSample) -> Option<f64>,
    s: &PairedSample,
    resamples: usize,
    rng: &mut R,
) -> f64 {
    assert!(resamples >= 100, "too few bootstrap resamples");
    let n = s.len();
    let mut values = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let i = rng.gen_range(0..n);
            x.push(s.x[i]);
            y.push(s.y[i]);
        }
        let resampled = PairedSample { x, y };
        if let Some(v) = statistic(&resampled) {
            values.push(v);
        }
    }
    if values.len() < 2 {
        return 0.0;
    }
    let mean: f64 = values.iter().sum::<f64>() / values.len() as f64;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() as f64 - 1.0)).sqrt()
}

/// Percentile bootstrap confidence interval for the mean of a set of values.
pub fn bootstrap_mean_ci<R: Rng>(
    values: &[f64],
    resamples: usize,
    confidence: f64,
    rng: &mut R,
) -> (f64, f64) {
    assert!(!values.is_empty());
    let n = values.len();
    let mut means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let m: f64 = (0..n).map(|_| values[rng.gen_range(0..n)]).sum::<f64>() / n as f64;
        means.push(m);
    }
    means.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo_q = (1.0 - confidence) / 2.0;
    let hi_q = 1.0 - lo_q;
    let pick = |q: f64| {
        let idx = ((q * resamples as f64).floor() as usize).min(resamples - 1);
        means[idx]
    };
    (pick(lo_q), pick(hi_q))
}
