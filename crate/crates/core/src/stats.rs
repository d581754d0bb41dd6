//! Ordinary least squares on small point sets.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard error of the slope; `None` with fewer than three points.
    pub slope_stderr: Option<f64>,
    pub points: usize,
}

impl LinearFit {
    /// `|slope| <= 2 * stderr`. A two-point fit has no error estimate and is
    /// only indistinguishable from 0 when its slope is 0.
    pub fn slope_indistinguishable_from_zero(&self) -> bool {
        match self.slope_stderr {
            Some(se) => self.slope.abs() <= 2.0 * se + 1e-12,
            None => self.slope.abs() <= 1e-12,
        }
    }

    /// Positive with the 2-sigma band clear of 0.
    pub fn slope_significantly_positive(&self) -> bool {
        match self.slope_stderr {
            Some(se) => self.slope > 2.0 * se + 1e-12,
            None => self.slope > 1e-12,
        }
    }
}

/// Fits `y = slope * x + intercept`. `None` with fewer than two points or
/// when all `x` coincide.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    let slope_stderr = (n > 2).then(|| (sse / (nf - 2.0) / sxx).sqrt());
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
        slope_stderr,
        points: n,
    })
}
