//! Critical-scaling extractors: recurrence period, relaxation time and
//! power-law exponent of a time series.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rustfft::{num_complex::Complex, FftPlanner};

use super::TimeSeries;
use crate::error::{Error, Result};

/// Harmonics in the truncated Fourier model used to refine the period.
pub const FOURIER_HARMONICS: usize = 3;

const MIN_OSCILLATION_SAMPLES: usize = 64;
/// Spectral peak must exceed this multiple of the median bin magnitude.
const PEAK_OVER_MEDIAN: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// `T`, `τ` or the exponent, depending on the extractor.
    pub parameter: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub residual_rms: f64,
}

/// Documented default for the relaxation fit: the second half of the series,
/// where the slower decay channel dominates.
pub fn default_relaxation_window(series: &TimeSeries) -> (f64, f64) {
    let (t0, t1) = series.span().unwrap_or((0.0, 0.0));
    (0.5 * (t0 + t1), t1)
}

/// Documented default for the exceptional-point power-law fit.
pub fn default_power_law_window() -> (f64, f64) {
    (20.0, 200.0)
}

/// Period of the dominant oscillation.
///
/// The coarse estimate is the largest non-DC bin of the discrete Fourier
/// transform; it is refined by least squares of a truncated Fourier series
/// with [`FOURIER_HARMONICS`] harmonics over the full series, with the
/// linear coefficients projected out for each trial frequency.
pub fn fit_recurrence_time(series: &TimeSeries) -> Result<FitResult> {
    let n = series.len();
    if n < MIN_OSCILLATION_SAMPLES {
        return Err(Error::InvalidSeries(format!(
            "need at least {MIN_OSCILLATION_SAMPLES} samples, got {n}"
        )));
    }
    let times = series.times();
    let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
    if times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
        return Err(Error::InvalidSeries("recurrence fit needs a uniform grid".into()));
    }

    let mean = series.values().iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = series.values().iter().map(|v| Complex::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mags: Vec<f64> = buf[1..=n / 2].iter().map(|z| z.norm()).collect();
    let (peak_idx, peak) = mags
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (i, &m)| if m > best.1 { (i, m) } else { best });
    let bin = peak_idx + 1;
    let mut sorted = mags.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];

    if peak <= f64::EPSILON * n as f64 {
        return Err(Error::NoOscillation("series is constant".into()));
    }
    if bin < 2 {
        return Err(Error::NoOscillation("dominant component spans less than two periods".into()));
    }
    if bin >= n / 2 {
        return Err(Error::NoOscillation("spectral peak at the Nyquist bin".into()));
    }
    if peak < PEAK_OVER_MEDIAN * median {
        return Err(Error::NoOscillation(format!(
            "spectral peak {peak:.3e} not above noise floor {median:.3e}"
        )));
    }

    let span = n as f64 * dt;
    let bin_width = 2.0 * PI / span;
    let omega0 = bin as f64 * bin_width;
    let rss = |omega: f64| fourier_fit(times, series.values(), omega).map(|(r, _)| r).unwrap_or(f64::INFINITY);
    let omega = golden_section(rss, omega0 - bin_width, omega0 + bin_width, 1e-13 * omega0);
    let best = rss(omega);

    // profile curvature d²RSS/dω² gives var(ω) ≈ 2σ²/RSS''
    let h = 1e-4 * bin_width;
    let curvature = (rss(omega + h) - 2.0 * best + rss(omega - h)) / (h * h);
    let dof = n.saturating_sub(2 * FOURIER_HARMONICS + 2).max(1) as f64;
    let sigma2 = best / dof;
    let omega_err = if curvature > 0.0 { (2.0 * sigma2 / curvature).sqrt() } else { f64::INFINITY };

    let period = 2.0 * PI / omega;
    Ok(FitResult {
        parameter: period,
        stderr: period * omega_err / omega,
        window: (times[0], times[n - 1]),
        residual_rms: (best / n as f64).sqrt(),
    })
}

/// Residual sum of squares and coefficients of the best truncated Fourier
/// series with fundamental `omega`.
fn fourier_fit(times: &[f64], values: &[f64], omega: f64) -> Option<(f64, DVector<f64>)> {
    let cols = 2 * FOURIER_HARMONICS + 1;
    let design = DMatrix::from_fn(times.len(), cols, |i, j| {
        if j == 0 {
            1.0
        } else {
            let k = j.div_ceil(2) as f64;
            let phase = k * omega * times[i];
            if j % 2 == 1 {
                phase.cos()
            } else {
                phase.sin()
            }
        }
    });
    let rhs = DVector::from_column_slice(values);
    let coef = design.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
    let r = &design * &coef - &rhs;
    Some((r.norm_squared(), coef))
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        x1
    } else {
        x2
    }
}

fn window_samples(series: &TimeSeries, window: (f64, f64)) -> Result<(Vec<f64>, Vec<f64>)> {
    let (lo, hi) = window;
    let (t0, t1) = series
        .span()
        .ok_or_else(|| Error::InvalidWindow("empty series".into()))?;
    let slack = 1e-9 * (t1 - t0).abs().max(1.0);
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidWindow(format!("window ({lo}, {hi}) is empty")));
    }
    if lo < t0 - slack || hi > t1 + slack {
        return Err(Error::InvalidWindow(format!(
            "window ({lo}, {hi}) outside series range ({t0}, {t1})"
        )));
    }
    let (ts, vs): (Vec<f64>, Vec<f64>) = series
        .iter()
        .filter(|(t, _)| *t >= lo - slack && *t <= hi + slack)
        .unzip();
    if ts.len() < 3 {
        return Err(Error::InvalidWindow(format!("only {} samples in window", ts.len())));
    }
    if let Some(v) = vs.iter().find(|v| **v <= 0.0) {
        return Err(Error::InvalidWindow(format!("nonpositive value {v} in window")));
    }
    Ok((ts, vs))
}

struct LineFit {
    slope: f64,
    slope_stderr: f64,
    residual_rms: f64,
}

fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let dof = (n - 2.0).max(1.0);
    LineFit {
        slope,
        slope_stderr: (rss / dof / sxx).sqrt(),
        residual_rms: (rss / n).sqrt(),
    }
}

/// `τ` from a straight-line fit of `ln D` against `t` on `window`.
pub fn fit_relaxation_time(series: &TimeSeries, window: (f64, f64)) -> Result<FitResult> {
    let (ts, vs) = window_samples(series, window)?;
    let logs: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
    let line = fit_line(&ts, &logs);
    if !(line.slope < 0.0) {
        return Err(Error::InvalidWindow(format!("series does not decay in window (slope {})", line.slope)));
    }
    let tau = -1.0 / line.slope;
    Ok(FitResult {
        parameter: tau,
        stderr: line.slope_stderr / (line.slope * line.slope),
        window,
        residual_rms: line.residual_rms,
    })
}

/// Exponent from a straight-line fit of `ln D` against `ln t` on `window`.
pub fn fit_power_law_exponent(series: &TimeSeries, window: (f64, f64)) -> Result<FitResult> {
    if !(window.0 > 0.0) {
        return Err(Error::InvalidWindow(format!("power-law window must start at t > 0, got {}", window.0)));
    }
    let (ts, vs) = window_samples(series, window)?;
    let lt: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let lv: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
    let line = fit_line(&lt, &lv);
    Ok(FitResult {
        parameter: line.slope,
        stderr: line.slope_stderr,
        window,
        residual_rms: line.residual_rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{log_grid, uniform_grid};

    fn series(times: Vec<f64>, f: impl Fn(f64) -> f64) -> TimeSeries {
        let v = times.iter().map(|&t| f(t)).collect();
        TimeSeries::new(times, v, "test").unwrap()
    }

    #[test]
    fn recovers_period_of_synthetic_signal() {
        let s = series(uniform_grid(0.0, 15.0, 512), |t| {
            0.7 + 0.2 * (2.0 * PI * t / 3.1).cos() + 0.05 * (4.0 * PI * t / 3.1).sin()
        });
        let fit = fit_recurrence_time(&s).unwrap();
        assert!((fit.parameter - 3.1).abs() < 1e-8, "{fit:?}");
        assert!(fit.residual_rms < 1e-10);
    }

    #[test]
    fn rejects_decay_and_short_series() {
        let s = series(uniform_grid(0.0, 8.0, 512), |t| (-t).exp());
        assert!(matches!(fit_recurrence_time(&s), Err(Error::NoOscillation(_))));
        let s = series(uniform_grid(0.0, 8.0, 512), |_| 1.0);
        assert!(matches!(fit_recurrence_time(&s), Err(Error::NoOscillation(_))));
        let s = series(uniform_grid(0.0, 8.0, 32), |t| t.cos());
        assert!(matches!(fit_recurrence_time(&s), Err(Error::InvalidSeries(_))));
        let s = series(log_grid(0.1, 8.0, 128), |t| t.cos());
        assert!(matches!(fit_recurrence_time(&s), Err(Error::InvalidSeries(_))));
    }

    #[test]
    fn exponential_and_power_law() {
        let s = series(uniform_grid(0.0, 10.0, 200), |t| 0.8 * (-t / 1.7).exp());
        let fit = fit_relaxation_time(&s, (2.0, 8.0)).unwrap();
        assert!((fit.parameter - 1.7).abs() < 1e-10);
        assert!(fit.stderr < 1e-8);

        let s = series(log_grid(0.1, 200.0, 300), |t| 3.0 * t.powf(-1.5));
        let fit = fit_power_law_exponent(&s, (20.0, 200.0)).unwrap();
        assert!((fit.parameter + 1.5).abs() < 1e-10);
    }

    #[test]
    fn window_errors() {
        let s = series(uniform_grid(0.0, 10.0, 100), |t| 1.0 - 0.2 * t);
        assert!(matches!(fit_relaxation_time(&s, (6.0, 10.0)), Err(Error::InvalidWindow(_))));
        assert!(matches!(fit_relaxation_time(&s, (-1.0, 3.0)), Err(Error::InvalidWindow(_))));
        assert!(matches!(fit_relaxation_time(&s, (3.0, 3.0)), Err(Error::InvalidWindow(_))));
        assert!(matches!(fit_power_law_exponent(&s, (0.0, 3.0)), Err(Error::InvalidWindow(_))));
        let grow = series(uniform_grid(0.0, 10.0, 100), |t| (0.1 * t).exp());
        assert!(matches!(fit_relaxation_time(&grow, (1.0, 9.0)), Err(Error::InvalidWindow(_))));
    }
}
