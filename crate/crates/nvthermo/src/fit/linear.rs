use crate::error::{NvError, Result};

/// One temperature point of a coupling measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TempRecord {
    pub temperature_k: f64,
    pub value_hz: f64,
    pub sigma_hz: f64,
}

/// (temperature, value, uncertainty) records for coefficient regression.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TempSeries {
    pub records: Vec<TempRecord>,
}

impl TempSeries {
    pub fn validate(&self) -> Result<()> {
        let mut temps: Vec<f64> = self.records.iter().map(|r| r.temperature_k).collect();
        temps.sort_by(f64::total_cmp);
        temps.dedup();
        if temps.len() < 2 {
            return Err(NvError::Rank(
                "need at least 2 distinct temperatures for a slope fit".into(),
            ));
        }
        if self.records.iter().any(|r| !(r.sigma_hz > 0.0)) {
            return Err(NvError::Validation(
                "weighted fits require positive sigmas".into(),
            ));
        }
        Ok(())
    }
}

/// Weighted straight-line fit y = slope * T + intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope_hz_per_k: f64,
    pub intercept_hz: f64,
    pub sigma_slope: f64,
    pub sigma_intercept: f64,
    /// sqrt of the weighted residual sum of squares (chi-square).
    pub residual_norm: f64,
}

/// Closed-form inverse-variance weighted linear regression; parameter sigmas
/// from the standard weighted-regression covariance.
pub fn fit_line_weighted(series: &TempSeries) -> Result<LineFit> {
    series.validate()?;
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for r in &series.records {
        let w = 1.0 / (r.sigma_hz * r.sigma_hz);
        sw += w;
        sx += w * r.temperature_k;
        sy += w * r.value_hz;
        sxx += w * r.temperature_k * r.temperature_k;
        sxy += w * r.temperature_k * r.value_hz;
    }
    let delta = sw * sxx - sx * sx;
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(NvError::Rank("all temperatures identical; slope not determined".into()));
    }
    let slope = (sw * sxy - sx * sy) / delta;
    let intercept = (sxx * sy - sx * sxy) / delta;
    let chi2: f64 = series
        .records
        .iter()
        .map(|r| {
            let w = 1.0 / (r.sigma_hz * r.sigma_hz);
            w * (r.value_hz - slope * r.temperature_k - intercept).powi(2)
        })
        .sum();
    Ok(LineFit {
        slope_hz_per_k: slope,
        intercept_hz: intercept,
        sigma_slope: (sw / delta).sqrt(),
        sigma_intercept: (sxx / delta).sqrt(),
        residual_norm: chi2.sqrt(),
    })
}

/// Inverse-variance weighted mean and its standard error.
pub fn weighted_mean(values: &[f64], sigmas: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(NvError::Validation("weighted mean of an empty list".into()));
    }
    if values.len() != sigmas.len() {
        return Err(NvError::Validation("values and sigmas lengths differ".into()));
    }
    if sigmas.iter().any(|&s| !(s > 0.0)) {
        return Err(NvError::Validation("sigmas must be positive".into()));
    }
    let sw: f64 = sigmas.iter().map(|s| 1.0 / (s * s)).sum();
    let swy: f64 = values
        .iter()
        .zip(sigmas)
        .map(|(&v, &s)| v / (s * s))
        .sum();
    Ok((swy / sw, (1.0 / sw).sqrt()))
}

/// Unweighted mean with the standard error of the mean.
pub fn plain_mean(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(NvError::Validation("mean of an empty list".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Ok((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Rank-2 mode polynomial delta(X) = b X + c (omega/hbar) X^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePolyFit {
    /// Linear coefficient, Hz per coordinate unit.
    pub b: f64,
    /// Per-phonon quadratic contribution, Hz.
    pub c_hz: f64,
    pub sigma_b: f64,
    pub sigma_c: f64,
    pub residual_norm: f64,
}

/// Least-squares fit of the mode polynomial. `omega_over_hbar` is the
/// quadratic regressor scale omega_i / hbar in units consistent with the
/// sampled coordinates X_i, so that c comes out in Hz.
pub fn fit_mode_polynomial(samples: &[(f64, f64)], omega_over_hbar: f64) -> Result<ModePolyFit> {
    let mut xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(NvError::Rank(format!(
            "{} distinct abscissae cannot determine a rank-2 polynomial (need >= 3)",
            xs.len()
        )));
    }
    if !(omega_over_hbar > 0.0) || !omega_over_hbar.is_finite() {
        return Err(NvError::Validation("omega/hbar scale must be positive".into()));
    }

    // 2-column least squares with column scaling for conditioning
    let n = samples.len();
    let col1: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let col2: Vec<f64> = samples
        .iter()
        .map(|s| omega_over_hbar * s.0 * s.0)
        .collect();
    let s1 = col1.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    let s2 = col2.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);

    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for k in 0..n {
        let (u, v, y) = (col1[k] / s1, col2[k] / s2, samples[k].1);
        a11 += u * u;
        a12 += u * v;
        a22 += v * v;
        b1 += u * y;
        b2 += v * y;
    }
    let det = a11 * a22 - a12 * a12;
    if !(det.abs() > 1e-12 * a11 * a22) {
        return Err(NvError::Rank("degenerate design for mode polynomial".into()));
    }
    let u_coef = (a22 * b1 - a12 * b2) / det;
    let v_coef = (a11 * b2 - a12 * b1) / det;
    let b = u_coef / s1;
    let c_hz = v_coef / s2;

    let rss: f64 = (0..n)
        .map(|k| (samples[k].1 - b * col1[k] - c_hz * col2[k]).powi(2))
        .sum();
    let dof = n.saturating_sub(2);
    let s2_hat = if dof > 0 { rss / dof as f64 } else { 0.0 };
    // covariance of scaled coefficients: s2_hat * inv(A)
    let inv11 = a22 / det;
    let inv22 = a11 / det;
    Ok(ModePolyFit {
        b,
        c_hz,
        sigma_b: (s2_hat * inv11).sqrt() / s1,
        sigma_c: (s2_hat * inv22).sqrt() / s2,
        residual_norm: rss.sqrt(),
    })
}

/// Through-origin least squares y = slope * x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionalFit {
    pub slope: f64,
    pub sigma: f64,
    pub residual_norm: f64,
    /// residual norm over the norm of y; quantifies proportionality quality.
    pub relative_residual: f64,
}

pub fn fit_proportional(xs: &[f64], ys: &[f64]) -> Result<ProportionalFit> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(NvError::Validation("need equal-length non-empty x/y".into()));
    }
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if !(sxx > 0.0) {
        return Err(NvError::Rank("all abscissae are zero; slope not determined".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(&x, &y)| x * y).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - slope * x).powi(2))
        .sum();
    let dof = xs.len().saturating_sub(1);
    let sigma = if dof > 0 {
        (rss / dof as f64 / sxx).sqrt()
    } else {
        0.0
    };
    let y_norm: f64 = ys.iter().map(|y| y * y).sum::<f64>().sqrt();
    Ok(ProportionalFit {
        slope,
        sigma,
        residual_norm: rss.sqrt(),
        relative_residual: if y_norm > 0.0 { rss.sqrt() / y_norm } else { 0.0 },
    })
}
