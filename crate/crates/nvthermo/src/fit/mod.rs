//! Parameter estimation: a damped Gauss-Newton (Levenberg-Marquardt) engine
//! for nonlinear models, the seven-parameter fringe fit, weighted linear
//! regression for temperature coefficients, weighted averaging across NV
//! centers, and the mode-polynomial / proportional fits of the thermal model.

mod engine;
mod fringe;
mod linear;

pub use engine::{nlls_fit, FitModel, FitReport, NllsOptions};
pub use fringe::{fit_fringe, initial_fringe_guess, periodogram_peak, FringeModel};
pub use linear::{
    fit_line_weighted, fit_mode_polynomial, fit_proportional, plain_mean, weighted_mean,
    LineFit, ModePolyFit, ProportionalFit, TempRecord, TempSeries,
};
