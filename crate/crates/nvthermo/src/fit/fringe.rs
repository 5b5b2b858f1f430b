use std::f64::consts::PI;

use super::engine::{nlls_fit, FitModel, FitReport, NllsOptions};
use crate::error::{NvError, Result};
use crate::ramsey::{fringe_model, FringeParams, RamseyTrace};

/// Stretch exponent window; outside it the envelope degenerates into the
/// baseline and the fit loses identifiability.
pub const STRETCH_BOUNDS: (f64, f64) = (0.5, 3.0);

pub const FRINGE_PARAM_NAMES: [&str; 7] =
    ["amplitude", "detuning_hz", "phase_rad", "offset", "t2_star_s", "stretch", "baseline"];

/// The Ramsey fringe model {a sin(2 pi df t + phi0) + b} exp[-(t/T2*)^p] + c
/// with analytic derivatives.
pub struct FringeModel;

impl FitModel for FringeModel {
    fn eval(&self, t: f64, p: &[f64]) -> f64 {
        fringe_model(
            t,
            &FringeParams {
                amplitude: p[0],
                detuning_hz: p[1],
                phase_rad: p[2],
                offset: p[3],
                t2_star_s: p[4],
                stretch: p[5],
                baseline: p[6],
            },
        )
    }

    fn jacobian_row(&self, t: f64, p: &[f64], out: &mut [f64]) {
        let (a, df, phi0, b, t2, pw, _c) = (p[0], p[1], p[2], p[3], p[4], p[5], p[6]);
        let theta = 2.0 * PI * df * t + phi0;
        let (sin_t, cos_t) = theta.sin_cos();
        let u = (t / t2).powf(pw);
        let env = (-u).exp();
        let core = a * sin_t + b;

        out[0] = sin_t * env;
        out[1] = a * cos_t * 2.0 * PI * t * env;
        out[2] = a * cos_t * env;
        out[3] = env;
        out[4] = core * env * pw * u / t2;
        out[5] = if u > 0.0 {
            -core * env * u * (t / t2).ln()
        } else {
            0.0
        };
        out[6] = 1.0;
    }
}

/// Dominant peak of the discrete periodogram of (signal - mean), Hz.
///
/// Scans from half a cycle over the span up to the Nyquist frequency of the
/// median sample spacing.
pub fn periodogram_peak(times_s: &[f64], signal: &[f64]) -> f64 {
    let n = times_s.len();
    let span = times_s[n - 1] - times_s[0];
    let mut dts: Vec<f64> = times_s.windows(2).map(|w| w[1] - w[0]).collect();
    dts.sort_by(f64::total_cmp);
    let dt = dts[dts.len() / 2];
    let mean = signal.iter().sum::<f64>() / n as f64;

    let f_min = 0.5 / span;
    let f_max = 0.5 / dt;
    let f_step = 0.25 / span;
    let mut best = (f_min, 0.0f64);
    let mut f = f_min;
    while f <= f_max {
        let (mut re, mut im) = (0.0, 0.0);
        for (&t, &s) in times_s.iter().zip(signal) {
            let phase = 2.0 * PI * f * t;
            re += (s - mean) * phase.cos();
            im -= (s - mean) * phase.sin();
        }
        let power = re * re + im * im;
        if power > best.1 {
            best = (f, power);
        }
        f += f_step;
    }
    best.0
}

/// Automatic starting point: detuning from the periodogram peak, baseline
/// from the trace mean, amplitude from half the peak-to-peak excursion.
pub fn initial_fringe_guess(trace: &RamseyTrace) -> FringeParams {
    let n = trace.times_s.len();
    let span = trace.times_s[n - 1] - trace.times_s[0];
    let mean = trace.signal.iter().sum::<f64>() / n as f64;
    let max = trace.signal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = trace.signal.iter().copied().fold(f64::INFINITY, f64::min);
    FringeParams {
        amplitude: 0.5 * (max - min),
        detuning_hz: periodogram_peak(&trace.times_s, &trace.signal),
        phase_rad: 0.0,
        offset: 0.0,
        t2_star_s: 0.5 * span,
        stretch: 1.0,
        baseline: mean,
    }
}

/// Fit all seven fringe parameters to a trace.
///
/// The trace must span at least three oscillation periods of the guessed
/// detuning. Sigma weighting uses the trace's noise level when nonzero.
pub fn fit_fringe(trace: &RamseyTrace, initial_guess: Option<FringeParams>) -> Result<FitReport> {
    trace.validate()?;
    let guess = match initial_guess {
        Some(g) => g,
        None => initial_fringe_guess(trace),
    };
    guess.validate()?;

    let span = trace.times_s[trace.times_s.len() - 1] - trace.times_s[0];
    if span * guess.detuning_hz.abs() < 3.0 {
        return Err(NvError::Validation(format!(
            "trace spans {:.2} periods of the guessed detuning; need >= 3",
            span * guess.detuning_hz.abs()
        )));
    }

    let p0 = [
        guess.amplitude,
        guess.detuning_hz,
        guess.phase_rad,
        guess.offset,
        guess.t2_star_s,
        guess.stretch,
        guess.baseline,
    ];
    let big = f64::INFINITY;
    let options = NllsOptions {
        bounds: Some(vec![
            (0.0, big),
            (-big, big),
            (-big, big),
            (-big, big),
            (1e-12, big),
            (STRETCH_BOUNDS.0, STRETCH_BOUNDS.1),
            (-big, big),
        ]),
        ..Default::default()
    };
    nlls_fit(
        &FringeModel,
        &trace.times_s,
        &trace.signal,
        None,
        &p0,
        &FRINGE_PARAM_NAMES,
        &options,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth(params: &FringeParams, n: usize, dt: f64) -> RamseyTrace {
        let times: Vec<f64> = (0..n).map(|k| dt * (k + 1) as f64).collect();
        let signal = times.iter().map(|&t| fringe_model(t, params)).collect();
        RamseyTrace {
            times_s: times,
            signal,
            noise_sigma: 0.0,
        }
    }

    fn demo_like_params() -> FringeParams {
        FringeParams {
            amplitude: 0.3,
            detuning_hz: 1203.5,
            phase_rad: 0.3,
            offset: 0.05,
            t2_star_s: 2.5e-3,
            stretch: 1.4,
            baseline: 0.5,
        }
    }

    #[test]
    fn noiseless_roundtrip_from_truth() {
        let truth = demo_like_params();
        let trace = synth(&truth, 400, 1e-5);
        let report = fit_fringe(&trace, Some(truth)).unwrap();
        assert!(report.converged);
        let truth_vec = [0.3, 1203.5, 0.3, 0.05, 2.5e-3, 1.4, 0.5];
        for (got, want) in report.params.iter().zip(truth_vec) {
            assert!(
                (got - want).abs() <= 1e-6 * want.abs().max(1e-6),
                "{got} vs {want}"
            );
        }
    }

    #[test]
    fn noiseless_roundtrip_from_auto_guess() {
        let truth = demo_like_params();
        let trace = synth(&truth, 400, 1e-5);
        let report = fit_fringe(&trace, None).unwrap();
        assert!(report.converged);
        let df = report.param("detuning_hz").unwrap();
        assert!((df - 1203.5).abs() < 0.01, "detuning {df}");
    }

    #[test]
    fn constant_trace_is_rank_error() {
        let flat = FringeParams {
            amplitude: 0.0,
            detuning_hz: 1203.5,
            phase_rad: 0.0,
            offset: 0.0,
            t2_star_s: 2.5e-3,
            stretch: 1.0,
            baseline: 0.5,
        };
        let trace = synth(&flat, 400, 1e-5);
        let err = fit_fringe(&trace, Some(flat));
        assert!(matches!(err, Err(NvError::Rank(_))));
    }

    #[test]
    fn short_trace_rejected() {
        let truth = demo_like_params();
        let trace = synth(&truth, 40, 1e-5); // 0.4 ms ~ half a period
        assert!(matches!(
            fit_fringe(&trace, Some(truth)),
            Err(NvError::Validation(_))
        ));
    }

    #[test]
    fn periodogram_finds_tone() {
        let truth = demo_like_params();
        let trace = synth(&truth, 600, 1e-5);
        let peak = periodogram_peak(&trace.times_s, &trace.signal);
        // within one frequency bin (0.25 / span)
        let span = 600.0 * 1e-5;
        assert!((peak - 1203.5).abs() <= 1.0 / span);
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        struct Fd;
        impl FitModel for Fd {
            fn eval(&self, x: f64, p: &[f64]) -> f64 {
                FringeModel.eval(x, p)
            }
        }
        let p = [0.3, 1203.5, 0.3, 0.05, 2.5e-3, 1.4, 0.5];
        let mut exact = [0.0; 7];
        let mut approx = [0.0; 7];
        for k in 1..50 {
            let t = 1e-4 * k as f64;
            FringeModel.jacobian_row(t, &p, &mut exact);
            Fd.jacobian_row(t, &p, &mut approx);
            for j in 0..7 {
                // the FD oracle itself carries ~1e-5 relative error from its
                // fixed step, so the gate only needs to catch wrong formulas
                let scale = exact[j].abs().max(1e-3);
                assert!(
                    (exact[j] - approx[j]).abs() <= 1e-4 * scale,
                    "param {j} at t={t}: {} vs {}",
                    exact[j],
                    approx[j]
                );
            }
        }
    }
}
