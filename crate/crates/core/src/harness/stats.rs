use crate::error::{Error, Result};

/// Max / median / mean / sample standard deviation of a set of results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub max: f64,
    pub median: f64,
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub std: f64,
    /// False when there was only one value.
    pub std_defined: bool,
}

pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::Domain("cannot summarize an empty sample".into()));
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
    let mean = values.iter().sum::<f64>() / n as f64;
    let std =
        if n > 1 { (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt() } else { 0.0 };
    Ok(Summary { count: n, max: sorted[n - 1], median, mean, std, std_defined: n > 1 })
}

/// Largest combined sample size handled by full enumeration.
pub const EXACT_LIMIT: usize = 12;

/// Midranks of the pooled sample, first `a` then `b`.
fn pooled_ranks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = mid;
        }
        i = j + 1;
    }
    ranks
}

/// Exact one-tailed rank-sum p-value for "a tends to exceed b": the share of
/// all relabelings whose rank sum for `a` is at least the observed one.
pub fn wilcoxon_exact(a: &[f64], b: &[f64]) -> f64 {
    let ranks = pooled_ranks(a, b);
    let observed: f64 = ranks[..a.len()].iter().sum();
    let n = ranks.len();
    let k = a.len();
    let (mut hits, mut total) = (0u64, 0u64);
    // Walk all k-subsets of the pooled ranks.
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        total += 1;
        let s: f64 = idx.iter().map(|&i| ranks[i]).sum();
        if s >= observed - 1e-9 {
            hits += 1;
        }
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else { break };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    hits as f64 / total as f64
}

/// Normal approximation with tie correction, plus a continuity correction
/// when no values are tied.
pub fn wilcoxon_normal(a: &[f64], b: &[f64]) -> f64 {
    let ranks = pooled_ranks(a, b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na + nb;
    let observed: f64 = ranks[..a.len()].iter().sum();
    let mean = na * (n + 1.0) / 2.0;
    let mut sorted = ranks.clone();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&r| r == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return 0.5;
    }
    // Untied rank sums live on the integers; midranks do not.
    let continuity = if tie_term == 0.0 { 0.5 } else { 0.0 };
    upper_normal_tail((observed - mean - continuity) / var.sqrt())
}

/// One-tailed Wilcoxon rank-sum p-value for "a is stochastically greater
/// than b": exact up to [`EXACT_LIMIT`] pooled values, normal beyond.
pub fn wilcoxon_one_tailed(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("rank-sum test needs two non-empty samples".into()));
    }
    Ok(if a.len() + b.len() <= EXACT_LIMIT { wilcoxon_exact(a, b) } else { wilcoxon_normal(a, b) })
}

/// P(Z > z) for a standard normal.
fn upper_normal_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}
