//! Least-squares fit of log|error| = eta t + q log(1 + |t|) + c.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A sample counts only if its error exceeds this multiple of its quadrature error.
pub const NOISE_FACTOR: f64 = 10.0;
pub const MIN_SAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySample {
    pub t: f64,
    pub error: f64,
    pub quad_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub q: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub rms_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub used: usize,
    /// q fixed at 0.
    pub pure: FitResult,
    /// q fitted.
    pub with_log: FitResult,
}

/// Solves the normal equations of the columns `cols` against y by Gaussian elimination.
fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut a: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| dot(&cols[i], &cols[j])).collect();
            row.push(dot(&cols[i], y));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        a.swap(c, p);
        if a[c][c].abs() < 1e-300 {
            return None;
        }
        for r in 0..k {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in c..=k {
                    a[r][j] -= f * a[c][j];
                }
            }
        }
    }
    Some((0..k).map(|i| a[i][k] / a[i][i]).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn fit(ts: &[f64], ys: &[f64], free_q: bool) -> Result<FitResult> {
    let ones = vec![1.0; ts.len()];
    let logs: Vec<f64> = ts.iter().map(|t| (1.0 + t.abs()).ln()).collect();
    let mut cols = vec![ts.to_vec(), ones];
    if free_q {
        cols.push(logs.clone());
    }
    let beta = least_squares(&cols, ys)
        .ok_or_else(|| Error::FitRejected("singular design matrix".into()))?;
    let q = if free_q { beta[2] } else { 0.0 };
    let rss: f64 = ts
        .iter()
        .zip(ys)
        .zip(&logs)
        .map(|((t, y), l)| (y - beta[0] * t - beta[1] - q * l).powi(2))
        .sum();
    Ok(FitResult {
        slope: beta[0],
        q,
        intercept: beta[1],
        rms_residual: (rss / ts.len() as f64).sqrt(),
    })
}

pub fn fit_decay(samples: &[DecaySample]) -> Result<DecayFit> {
    let good: Vec<&DecaySample> = samples
        .iter()
        .filter(|s| {
            s.t.is_finite()
                && s.error.is_finite()
                && s.error > 0.0
                && s.error > NOISE_FACTOR * s.quad_err
        })
        .collect();
    if good.len() < MIN_SAMPLES {
        return Err(Error::FitRejected(format!(
            "{} of {} samples lie above {NOISE_FACTOR}x their quadrature error; need {MIN_SAMPLES}",
            good.len(),
            samples.len()
        )));
    }
    let ts: Vec<f64> = good.iter().map(|s| s.t).collect();
    let ys: Vec<f64> = good.iter().map(|s| s.error.ln()).collect();
    Ok(DecayFit {
        used: good.len(),
        pure: fit(&ts, &ys, false)?,
        with_log: fit(&ts, &ys, true)?,
    })
}
