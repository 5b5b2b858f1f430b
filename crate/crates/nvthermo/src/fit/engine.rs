use nalgebra::{DMatrix, DVector};

use crate::error::{NvError, Result};

/// Parametric scalar model y = f(x; p).
pub trait FitModel {
    fn eval(&self, x: f64, params: &[f64]) -> f64;

    /// d f / d p_j at (x, params). Default: central finite differences.
    fn jacobian_row(&self, x: f64, params: &[f64], out: &mut [f64]) {
        let mut p = params.to_vec();
        for j in 0..p.len() {
            let h = 1e-6 * p[j].abs().max(1e-9);
            let orig = p[j];
            p[j] = orig + h;
            let fp = self.eval(x, &p);
            p[j] = orig - h;
            let fm = self.eval(x, &p);
            p[j] = orig;
            out[j] = (fp - fm) / (2.0 * h);
        }
    }
}

#[derive(Debug, Clone)]
pub struct NllsOptions {
    /// Relative step / gradient tolerance. Default 1e-10.
    pub tolerance: f64,
    /// Iteration cap; reaching it yields a non-converged report, not an
    /// error. Default 200.
    pub max_iterations: usize,
    /// Optional per-parameter box bounds.
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for NllsOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 200,
            bounds: None,
        }
    }
}

/// Fit outcome: named parameters, one-standard-deviation uncertainties from
/// the linearized covariance scaled by reduced chi-square, and convergence
/// diagnostics.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub names: Vec<String>,
    pub params: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub residual_norm: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl FitReport {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|k| self.params[k])
    }

    pub fn sigma(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|k| self.sigmas[k])
    }
}

/// Levenberg-Marquardt damped Gauss-Newton descent on weighted residuals
/// r_i = sqrt(w_i) (y_i - f(x_i; p)).
///
/// Accepted steps strictly decrease the residual norm. Uncertainties come
/// from (J^T J)^-1 scaled by reduced chi-square.
pub fn nlls_fit<M: FitModel>(
    model: &M,
    xs: &[f64],
    ys: &[f64],
    weights: Option<&[f64]>,
    initial_guess: &[f64],
    names: &[&str],
    options: &NllsOptions,
) -> Result<FitReport> {
    let n = xs.len();
    let m = initial_guess.len();
    if n != ys.len() {
        return Err(NvError::Validation("x and y lengths differ".into()));
    }
    if n < m {
        return Err(NvError::Rank(format!(
            "{n} data points cannot determine {m} parameters"
        )));
    }
    if names.len() != m {
        return Err(NvError::Validation("parameter name count mismatch".into()));
    }
    if let Some(w) = weights {
        if w.len() != n || w.iter().any(|&wi| !(wi > 0.0) || !wi.is_finite()) {
            return Err(NvError::Validation("weights must be positive and finite".into()));
        }
    }
    if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
        return Err(NvError::Validation("data must be finite".into()));
    }

    let sqrt_w: Vec<f64> = match weights {
        Some(w) => w.iter().map(|&wi| wi.sqrt()).collect(),
        None => vec![1.0; n],
    };
    let clamp = |p: &mut [f64]| {
        if let Some(bounds) = &options.bounds {
            for (pj, &(lo, hi)) in p.iter_mut().zip(bounds) {
                *pj = pj.clamp(lo, hi);
            }
        }
    };

    let residuals = |p: &[f64]| -> DVector<f64> {
        DVector::from_iterator(
            n,
            xs.iter()
                .zip(ys)
                .zip(&sqrt_w)
                .map(|((&x, &y), &sw)| sw * (y - model.eval(x, p))),
        )
    };
    let jacobian = |p: &[f64]| -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(n, m);
        let mut row = vec![0.0; m];
        for (i, &x) in xs.iter().enumerate() {
            model.jacobian_row(x, p, &mut row);
            for j in 0..m {
                jac[(i, j)] = -sqrt_w[i] * row[j];
            }
        }
        jac
    };

    let mut params = initial_guess.to_vec();
    clamp(&mut params);
    let mut r = residuals(&params);
    if r.iter().any(|v| !v.is_finite()) {
        return Err(NvError::Validation("initial guess not evaluable".into()));
    }
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < options.max_iterations {
        iterations += 1;
        let jac = jacobian(&params);
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;

        if (0..m).any(|j| jtj[(j, j)] == 0.0) {
            let dead: Vec<&str> = (0..m).filter(|&j| jtj[(j, j)] == 0.0).map(|j| names[j]).collect();
            return Err(NvError::Rank(format!(
                "singular normal equations: no sensitivity to {dead:?}"
            )));
        }

        let mut accepted = false;
        while lambda < 1e14 {
            let mut damped = jtj.clone();
            for j in 0..m {
                damped[(j, j)] += lambda * jtj[(j, j)];
            }
            let Some(chol) = damped.clone().cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let step = chol.solve(&(-&grad));
            let mut trial = params.clone();
            for j in 0..m {
                trial[j] += step[j];
            }
            clamp(&mut trial);
            let r_trial = residuals(&trial);
            let cost_trial = r_trial.norm_squared();
            if cost_trial.is_finite() && cost_trial <= cost {
                let max_rel_step = (0..m)
                    .map(|j| (trial[j] - params[j]).abs() / params[j].abs().max(1.0))
                    .fold(0.0, f64::max);
                let grad_inf = grad.amax();
                let grad_scale = cost.sqrt().max(1e-300) * jac.amax().max(1e-300);
                let small_grad = grad_inf <= options.tolerance * grad_scale.max(1.0);
                let small_step = max_rel_step <= options.tolerance;
                // ftol: relative cost reduction has stalled
                let small_cost = (cost - cost_trial) <= options.tolerance * cost;
                params = trial;
                r = r_trial;
                cost = cost_trial;
                lambda = (lambda / 10.0).max(1e-12);
                accepted = true;
                if small_cost || (small_step && (small_grad || cost == 0.0 || max_rel_step == 0.0)) {
                    converged = true;
                }
                if cost < 1e-280 {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // stuck in a flat or ill-conditioned region; converged if the
            // gradient already vanished, otherwise report non-convergence
            converged = grad.amax() <= options.tolerance * cost.sqrt().max(1.0);
            break;
        }
        if converged {
            break;
        }
    }

    // covariance at the solution
    let jac = jacobian(&params);
    let jtj = jac.transpose() * &jac;
    let dof = n.saturating_sub(m);
    let chi2_red = if dof > 0 { cost / dof as f64 } else { 1.0 };
    let sigmas = match jtj.clone().cholesky() {
        Some(chol) => {
            let cov = chol.inverse();
            (0..m).map(|j| (cov[(j, j)] * chi2_red).max(0.0).sqrt()).collect()
        }
        None => {
            return Err(NvError::Rank(
                "singular normal equations at solution; parameters not identifiable".into(),
            ))
        }
    };

    Ok(FitReport {
        names: names.iter().map(|s| s.to_string()).collect(),
        params,
        sigmas,
        residual_norm: cost.sqrt(),
        converged,
        iterations,
    })
}
