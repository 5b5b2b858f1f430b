//! Command-line interface. Every subcommand prints a deterministic report to
//! stdout; `--out` writes CSV data and `--plot` writes an SVG figure.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nalgebra::Matrix3;

use crate::error::{NvError, Result};
use crate::extraction::{self, TensorSeries};
use crate::fit::{fit_fringe, fit_line_weighted, plain_mean, weighted_mean, TempRecord, TempSeries};
use crate::io::config::RunConfig;
use crate::io::svg::LinePlot;
use crate::io::tables;
use crate::ramsey::{self, fringe_model, FringeParams, Manifold};
use crate::spin::{build_hamiltonian, eigendecompose, label_eigenstates, SpinSystem, DEFAULT_LABEL_THRESHOLD};
use crate::thermo::{merge_degenerate_modes, ThermoModel};

#[derive(Debug, Parser)]
#[command(name = "nvthermo", version, about = "NV-center hyperfine thermometry toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diagonalize the spin Hamiltonian and list labeled levels and allowed
    /// electron transitions.
    Transitions(TransitionsArgs),
    /// Extract the hyperfine coupling from the two-manifold frequency
    /// average, with a remainder-stability sweep.
    Extract(ExtractArgs),
    /// Synthesize a Ramsey fringe trace for a nuclear transition.
    SimulateRamsey(SimulateRamseyArgs),
    /// Fit the stretched-exponential fringe model to a trace.
    FitFringe(FitFringeArgs),
    /// Regress coupling measurements against temperature, per NV center,
    /// and combine the slopes.
    Tempco(TempcoArgs),
    /// Evaluate the phonon + thermal-expansion model of A(T).
    Thermo(ThermoArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Run configuration (TOML).
    #[arg(long, env = "NVTHERMO_CONFIG")]
    pub config: PathBuf,
    /// Override the axial bias field Bz, Gauss.
    #[arg(long, allow_negative_numbers = true)]
    pub field_gauss: Option<f64>,
}

impl ConfigArgs {
    fn load(&self) -> Result<(RunConfig, SpinSystem)> {
        let cfg = RunConfig::load(&self.config)?;
        let mut sys = cfg.build_system()?;
        if let Some(bz) = self.field_gauss {
            sys.field_gauss.z = bz;
        }
        Ok((cfg, sys))
    }
}

#[derive(Debug, Args)]
pub struct TransitionsArgs {
    #[command(flatten)]
    pub common: ConfigArgs,
    /// Write the pulsed-ODMR spectrum figure here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub common: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct SimulateRamseyArgs {
    #[command(flatten)]
    pub common: ConfigArgs,
    /// Override the noise seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the trace CSV here (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the trace figure here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitFringeArgs {
    /// Trace CSV with header t_s,signal.
    #[arg(long)]
    pub input: PathBuf,
    /// RF drive frequency, Hz; when given, the absolute transition frequency
    /// rf + detuning is also reported.
    #[arg(long)]
    pub rf_hz: Option<f64>,
    /// Write the data + model figure here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TempcoArgs {
    /// Measurement CSV with header nvId,nucleus,T_K,omegaPlus_Hz,omegaMinus_Hz,sigma_Hz.
    #[arg(long)]
    pub input: PathBuf,
    /// Restrict to one nucleus name.
    #[arg(long)]
    pub nucleus: Option<String>,
    /// Combine per-NV slopes with a plain average instead of the
    /// inverse-variance weighted mean.
    #[arg(long)]
    pub plain_average: bool,
    /// Write the per-NV mean-vs-temperature figure here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThermoArgs {
    /// Phonon mode table CSV with header index,energy_meV,b_Hz,c_Hz.
    #[arg(long)]
    pub modes: PathBuf,
    /// Lattice expansion CSV with header T_K,rel_expansion.
    #[arg(long)]
    pub expansion: PathBuf,
    /// Static-lattice coupling A_stc(0), Hz.
    #[arg(long, allow_negative_numbers = true)]
    pub a_stc0_hz: f64,
    /// Static coefficient c_stc, Hz per unit relative expansion.
    #[arg(long, allow_negative_numbers = true)]
    pub c_stc_hz: f64,
    /// Evaluation temperature, K.
    #[arg(long, default_value_t = 300.0)]
    pub temp_k: f64,
    /// Merge near-degenerate modes within this energy window, meV.
    #[arg(long)]
    pub merge_window_mev: Option<f64>,
    /// Optional run configuration supplying physical constants.
    #[arg(long, env = "NVTHERMO_CONFIG")]
    pub config: Option<PathBuf>,
    /// Write the A(T) - A(0) curve CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the A(T) - A(0) figure here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Transitions(args) => cmd_transitions(args),
        Command::Extract(args) => cmd_extract(args),
        Command::SimulateRamsey(args) => cmd_simulate_ramsey(args),
        Command::FitFringe(args) => cmd_fit_fringe(args),
        Command::Tempco(args) => cmd_tempco(args),
        Command::Thermo(args) => cmd_thermo(args),
    }
}

fn default_nucleus(system: &SpinSystem, requested: &Option<String>) -> Result<String> {
    match requested {
        Some(n) => Ok(n.clone()),
        None => system
            .carbons
            .first()
            .map(|c| c.name.clone())
            .ok_or_else(|| NvError::Validation("system has no carbon sites".into())),
    }
}

fn cmd_transitions(args: TransitionsArgs) -> Result<()> {
    let (cfg, sys) = args.common.load()?;
    let h = build_hamiltonian(&sys)?;
    let decomp = eigendecompose(&h)?;
    let labeled = label_eigenstates(&decomp, &sys, DEFAULT_LABEL_THRESHOLD)?;
    let labels = labeled.labels.as_ref().expect("labeled");

    println!("dim = {}", sys.dim());
    println!("Bz = {:.6} G", sys.field_gauss.z);
    println!("{:>4}  {:>22}  {:>9}  label", "#", "energy_Hz", "overlap");
    for (k, label) in labels.iter().enumerate() {
        println!(
            "{k:>4}  {:>22.6}  {:>9.6}  {label}",
            labeled.eigenvalues[k], label.overlap
        );
    }

    let centers = ramsey::odmr_transition_frequencies(&sys)?;
    println!("allowed electron transitions (Hz):");
    for c in &centers {
        println!("  {c:.6}");
    }

    if let Some(path) = args.plot {
        let odmr = &cfg.simulation.odmr;
        let center = odmr.center_hz.unwrap_or(cfg.system.d_hz);
        let n = odmr.points.max(2);
        let grid: Vec<f64> = (0..n)
            .map(|k| center - 0.5 * odmr.span_hz + odmr.span_hz * k as f64 / (n - 1) as f64)
            .collect();
        let spec = ramsey::simulate_odmr(&sys, &grid, odmr.linewidth_hz, odmr.contrast_depth)?;
        let mut plot = LinePlot::new("pulsed ODMR", "microwave frequency (Hz)", "contrast");
        plot.add_series("spectrum", grid.into_iter().zip(spec).collect());
        plot.write(&path)?;
        println!("wrote plot: {}", path.display());
    }
    Ok(())
}

fn cmd_extract(args: ExtractArgs) -> Result<()> {
    let (cfg, sys) = args.common.load()?;
    let ex = &cfg.simulation.extract;
    let nucleus = default_nucleus(&sys, &ex.nucleus)?;
    let ci = sys.carbon_index(&nucleus)?;

    let (freqs, result) = extraction::extract(&sys, &nucleus)?;
    println!("nucleus = {nucleus}");
    println!("Bz = {:.6} G", sys.field_gauss.z);
    println!("omega_plus  = {:.6} Hz", freqs.omega_plus_hz);
    println!("omega_minus = {:.6} Hz", freqs.omega_minus_hz);
    println!("mean        = {:.6} Hz", result.mean_hz);
    println!("norm        = {:.6} Hz", result.coupling_norm_hz);
    println!("remainder   = {:.6} Hz", result.remainder_hz);

    // remainder stability under the configured linear A_zz drift
    let base = sys.carbons[ci].tensor_hz;
    let tensors: Vec<Matrix3<f64>> = ex
        .temps_k
        .iter()
        .map(|&t| {
            let mut m = base;
            m[(2, 2)] += ex.azz_slope_hz_per_k * (t - ex.reference_temp_k);
            m
        })
        .collect();
    let series = TensorSeries {
        field_gauss: sys.field_gauss,
        tensors,
    };
    let remainders = extraction::remainder_stability(&sys, &nucleus, &series)?;
    println!("remainder drift over temperature sweep:");
    println!("{:>8}  {:>14}", "T_K", "remainder_Hz");
    for (t, r) in ex.temps_k.iter().zip(&remainders) {
        println!("{t:>8.2}  {r:>14.6}");
    }
    println!(
        "remainder spread = {:.6} Hz",
        extraction::remainder_spread(&remainders)
    );
    Ok(())
}

fn cmd_simulate_ramsey(args: SimulateRamseyArgs) -> Result<()> {
    let (cfg, sys) = args.common.load()?;
    let rc = &cfg.simulation.ramsey;
    let nucleus = default_nucleus(&sys, &rc.nucleus)?;
    let manifold = match rc.manifold {
        1 => Manifold::Plus,
        -1 => Manifold::Minus,
        m => return Err(NvError::Validation(format!("manifold must be +1 or -1, got {m}"))),
    };
    let freqs = extraction::manifold_frequencies(&sys, &nucleus)?;
    let transition = match manifold {
        Manifold::Plus => freqs.omega_plus_hz,
        Manifold::Minus => freqs.omega_minus_hz,
    };
    let rf = transition - rc.detuning_hz;
    let seed = args.seed.unwrap_or(cfg.simulation.seed);

    let dt = rc.duration_s / rc.samples as f64;
    let times: Vec<f64> = (0..rc.samples).map(|k| dt * (k + 1) as f64).collect();
    let trace = ramsey::simulate_ramsey(
        &sys,
        &nucleus,
        manifold,
        rf,
        &times,
        (rc.t2_star_s, rc.stretch),
        (rc.amplitude, rc.offset, rc.baseline),
        rc.polarization_efficiency,
        rc.noise_sigma,
        seed,
    )?;

    println!("nucleus = {nucleus}");
    println!("transition = {transition:.6} Hz");
    println!("rf = {rf:.6} Hz");
    println!("detuning = {:.6} Hz", rc.detuning_hz);
    println!("seed = {seed}");
    println!("samples = {}", trace.times_s.len());

    let csv = tables::write_trace(&trace);
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            println!("wrote trace: {}", path.display());
        }
        None => print!("{csv}"),
    }
    if let Some(path) = args.plot {
        let mut plot = LinePlot::new("Ramsey fringe", "free precession time (s)", "contrast");
        plot.add_series(
            "signal",
            trace.times_s.iter().copied().zip(trace.signal.iter().copied()).collect(),
        );
        plot.write(&path)?;
        println!("wrote plot: {}", path.display());
    }
    Ok(())
}

fn cmd_fit_fringe(args: FitFringeArgs) -> Result<()> {
    let trace = tables::parse_trace(&args.input)?;
    let report = fit_fringe(&trace, None)?;
    println!("converged = {}", report.converged);
    println!("iterations = {}", report.iterations);
    println!("residual_norm = {:.6e}", report.residual_norm);
    println!("{:>14}  {:>18}  {:>14}", "parameter", "value", "sigma");
    for ((name, value), sigma) in report.names.iter().zip(&report.params).zip(&report.sigmas) {
        println!("{name:>14}  {value:>18.8e}  {sigma:>14.6e}");
    }
    let detuning = report.param("detuning_hz").expect("named parameter");
    if let Some(rf) = args.rf_hz {
        println!(
            "absolute transition = {:.6} Hz",
            extraction::rf_to_absolute(rf, detuning)
        );
    }
    if let Some(path) = args.plot {
        let fitted = FringeParams {
            amplitude: report.param("amplitude").unwrap(),
            detuning_hz: detuning,
            phase_rad: report.param("phase_rad").unwrap(),
            offset: report.param("offset").unwrap(),
            t2_star_s: report.param("t2_star_s").unwrap(),
            stretch: report.param("stretch").unwrap(),
            baseline: report.param("baseline").unwrap(),
        };
        let mut plot = LinePlot::new("fringe fit", "free precession time (s)", "contrast");
        plot.add_series(
            "data",
            trace.times_s.iter().copied().zip(trace.signal.iter().copied()).collect(),
        );
        plot.add_series(
            "model",
            trace
                .times_s
                .iter()
                .map(|&t| (t, fringe_model(t, &fitted)))
                .collect(),
        );
        plot.write(&path)?;
        println!("wrote plot: {}", path.display());
    }
    Ok(())
}

fn cmd_tempco(args: TempcoArgs) -> Result<()> {
    let records = tables::parse_measurements(&args.input)?;
    let records: Vec<_> = match &args.nucleus {
        Some(n) => records.into_iter().filter(|r| &r.nucleus == n).collect(),
        None => records,
    };
    if records.is_empty() {
        return Err(NvError::Validation("no measurement records after filtering".into()));
    }

    // BTreeMap keeps NV ordering (and output bytes) deterministic
    let mut by_nv: BTreeMap<String, TempSeries> = BTreeMap::new();
    for r in &records {
        // sigma_Hz is per frequency; the two-frequency mean carries sigma/sqrt(2)
        by_nv.entry(r.nv_id.clone()).or_default().records.push(TempRecord {
            temperature_k: r.temperature_k,
            value_hz: r.mean_hz(),
            sigma_hz: r.sigma_hz / std::f64::consts::SQRT_2,
        });
    }

    let mut slopes = Vec::new();
    let mut sigmas = Vec::new();
    println!(
        "{:>8}  {:>6}  {:>14}  {:>12}  {:>14}",
        "nvId", "points", "slope_Hz_per_K", "sigma_Hz_per_K", "intercept_Hz"
    );
    for (nv, series) in &by_nv {
        let fit = fit_line_weighted(series)?;
        println!(
            "{nv:>8}  {:>6}  {:>14.6}  {:>12.6}  {:>14.4}",
            series.records.len(),
            fit.slope_hz_per_k,
            fit.sigma_slope,
            fit.intercept_hz
        );
        slopes.push(fit.slope_hz_per_k);
        sigmas.push(fit.sigma_slope);
    }

    let (combined, combined_sigma) = if args.plain_average {
        plain_mean(&slopes)?
    } else {
        weighted_mean(&slopes, &sigmas)?
    };
    println!(
        "combined slope ({}) = {combined:.6} +/- {combined_sigma:.6} Hz/K",
        if args.plain_average { "plain average" } else { "weighted" }
    );

    if let Some(path) = args.plot {
        let mut plot = LinePlot::new(
            "coupling mean vs temperature",
            "temperature (K)",
            "two-frequency mean (Hz)",
        );
        for (nv, series) in &by_nv {
            let mut pts: Vec<(f64, f64)> = series
                .records
                .iter()
                .map(|r| (r.temperature_k, r.value_hz))
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            plot.add_series(nv.clone(), pts);
        }
        plot.write(&path)?;
        println!("wrote plot: {}", path.display());
    }
    Ok(())
}

fn cmd_thermo(args: ThermoArgs) -> Result<()> {
    let constants = match &args.config {
        Some(path) => RunConfig::load(path)?.constants,
        None => Default::default(),
    };
    let mut modes = tables::parse_phonon_table(&args.modes)?;
    if let Some(window) = args.merge_window_mev {
        let before = modes.modes.len();
        modes = merge_degenerate_modes(&modes, window);
        println!("merged modes: {before} -> {}", modes.modes.len());
    }
    let expansion = tables::parse_expansion_table(&args.expansion)?;
    let model = ThermoModel {
        a_stc0_hz: args.a_stc0_hz,
        c_stc_hz: args.c_stc_hz,
        modes,
        expansion,
        constants,
    };
    model.validate()?;

    let t = args.temp_k;
    let deriv = model.da_dt(t)?;
    println!("modes = {}", model.modes.modes.len());
    println!("sum_c = {:.6} Hz", model.modes.sum_c_hz());
    println!("A(0) = {:.6} Hz", model.a_zero());
    println!("A({t}) = {:.6} Hz", model.a_of_t(t)?);
    println!("delta_dyn({t}) = {:.6} Hz", model.delta_a_dyn(t)?);
    println!("delta_stc({t}) = {:.6} Hz", model.delta_a_stc(t)?);
    println!("dA/dT({t}) = {:.6} Hz/K", deriv.total_hz_per_k);
    println!("  static contribution  = {:.6} Hz/K", deriv.stc_hz_per_k);
    println!("  dynamic contribution = {:.6} Hz/K", deriv.dyn_hz_per_k);

    if args.out.is_some() || args.plot.is_some() {
        let t_max = model.expansion.t_max();
        let n = 201usize;
        let a0 = model.a_zero();
        let mut curve = Vec::with_capacity(n);
        for k in 0..n {
            let tk = t_max * k as f64 / (n - 1) as f64;
            curve.push((tk, model.a_of_t(tk)? - a0));
        }
        if let Some(path) = &args.out {
            let mut csv = String::from("T_K,deltaA_Hz\n");
            for (tk, da) in &curve {
                csv.push_str(&format!("{tk:.4},{da:.10e}\n"));
            }
            std::fs::write(path, csv)?;
            println!("wrote curve: {}", path.display());
        }
        if let Some(path) = &args.plot {
            let mut plot = LinePlot::new("A(T) - A(0)", "temperature (K)", "coupling shift (Hz)");
            plot.add_series("model", curve);
            plot.write(path)?;
            println!("wrote plot: {}", path.display());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses_all_subcommands() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["nvthermo", "transitions", "--config", "x.toml"]).unwrap();
        assert!(matches!(cli.command, Command::Transitions(_)));
        let cli = Cli::try_parse_from([
            "nvthermo",
            "tempco",
            "--input",
            "m.csv",
            "--plain-average",
        ])
        .unwrap();
        match cli.command {
            Command::Tempco(a) => assert!(a.plain_average),
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn manifold_must_be_unit() {
        let cli = Cli::try_parse_from([
            "nvthermo",
            "simulate-ramsey",
            "--config",
            "/definitely/missing.toml",
        ])
        .unwrap();
        // config loading fails before any physics runs
        assert!(run(cli).is_err());
    }
}
