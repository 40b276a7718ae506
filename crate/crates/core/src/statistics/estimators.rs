use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::process::runner::{run_trajectory, BgrwConfig};
use crate::statistics::summary::{FirstPassage, TrajectorySummary};
use crate::VertexId;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedEstimate {
    /// `d_n / n`.
    pub endpoint: f64,
    /// `(d_n - d_h) / (n - h)` with `h = floor(n / 2)`.
    pub windowed: f64,
}

/// Speed away from the root. Needs the distance series.
pub fn speed_estimate(summary: &TrajectorySummary) -> Result<SpeedEstimate> {
    let n = summary.steps;
    if n == 0 {
        return Err(invalid("horizon", "speed needs at least one step"));
    }
    if summary.distance.len() as u64 != n + 1 {
        return Err(invalid("summary", "distance series was not recorded"));
    }
    let h = n / 2;
    let dn = summary.distance[n as usize] as f64;
    let dh = summary.distance[h as usize] as f64;
    Ok(SpeedEstimate {
        endpoint: dn / n as f64,
        windowed: (dn - dh) / (n - h) as f64,
    })
}

/// `P(v(y) >= k)` across runs for `k = 0, 1, ...`, ending with the first 0.
pub fn visit_tail(summaries: &[TrajectorySummary], y: VertexId) -> Result<Vec<f64>> {
    if summaries.is_empty() {
        return Err(invalid("summaries", "need at least one run"));
    }
    let visits: Vec<u64> = summaries
        .iter()
        .map(|s| s.visits_to(y).ok_or(Error::UnknownVertex(y)))
        .collect::<Result<_>>()?;
    let max = visits.iter().copied().max().unwrap_or(0);
    let n = visits.len() as f64;
    Ok((0..=max + 1)
        .map(|k| visits.iter().filter(|&&v| v >= k).count() as f64 / n)
        .collect())
}

/// Mean over runs of `#{t : deg_t(X_t) >= k}`. Needs the degree series.
pub fn degree_tail(summaries: &[TrajectorySummary], k: u32) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k", "must be >= 1"));
    }
    if summaries.is_empty() {
        return Err(invalid("summaries", "need at least one run"));
    }
    let mut total = 0u64;
    for s in summaries {
        if s.degree.len() as u64 != s.steps + 1 {
            return Err(invalid("summary", "degree series was not recorded"));
        }
        total += s.degree.iter().filter(|&&d| d >= k).count() as u64;
    }
    Ok(total as f64 / summaries.len() as f64)
}

/// First `m` with distance `>= threshold`, from the recorded milestone or
/// the distance series.
pub fn distance_milestone(summary: &TrajectorySummary, threshold: u32) -> Result<FirstPassage> {
    if threshold == 0 {
        return Err(invalid("threshold", "must be >= 1"));
    }
    if let Some(hit) = summary.milestone(threshold) {
        return Ok(hit);
    }
    if summary.distance.len() as u64 != summary.steps + 1 {
        return Err(invalid("summary", "no milestone record and no distance series"));
    }
    Ok(summary
        .distance
        .iter()
        .position(|&d| d >= threshold)
        .map_or(FirstPassage::Censored, |m| FirstPassage::Hit(m as u64)))
}

/// `tau_l` of the trajectory described by `config`.
pub fn tau_ell(config: &BgrwConfig, l: u32) -> Result<FirstPassage> {
    if l == 0 {
        return Err(invalid("l", "must be >= 1"));
    }
    let mut c = config.clone();
    c.options.record_series = false;
    c.options.tau_lengths = vec![l];
    c.options.milestones.clear();
    c.options.stop_when_resolved = true;
    Ok(run_trajectory(&c, &mut [])?.tau(l).expect("requested"))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = intercept + slope * x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(invalid("points", "need at least two (x, y) pairs"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(invalid("points", "values must be finite"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(invalid("points", "x values are all equal"));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

/// Constants of a tail `sum_t P(deg_t >= k) <= C (n + D) exp(-alpha k)`
/// fitted from per-run mean counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailConstants {
    pub alpha: f64,
    pub c: f64,
    pub fit: LinearFit,
}

pub fn fit_degree_constants(ks: &[u32], mean_counts: &[f64], n: u64, d: f64) -> Result<TailConstants> {
    let xs: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    let ys: Vec<f64> = mean_counts.iter().map(|c| c.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(TailConstants {
        alpha: -fit.slope,
        c: fit.intercept.exp() / (n as f64 + d),
        fit,
    })
}

/// `(l 2^(l-1) / p^l) * ceil((2 ln(n + D) + ln C) / alpha) + 1`, the ceiling
/// on `E[tau_l ^ n]`.
pub fn quantitative_ceiling(l: u32, p: f64, n: u64, d: f64, alpha: f64, c: f64) -> Result<f64> {
    if alpha <= 0.0 || c <= 0.0 {
        return Err(invalid("alpha", "fitted constants must be positive"));
    }
    let lead = l as f64 * 2f64.powi(l as i32 - 1) / p.powi(l as i32);
    let inner = ((2.0 * (n as f64 + d).ln() + c.ln()) / alpha).ceil().max(0.0);
    Ok(lead * inner + 1.0)
}
