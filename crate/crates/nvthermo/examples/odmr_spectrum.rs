//! Pulsed-ODMR spectrum of the demo system: Lorentzian dips at every allowed
//! electron transition, written out as an SVG figure.

use nvthermo::io::svg::LinePlot;
use nvthermo::ramsey::{odmr_transition_frequencies, simulate_odmr};

fn main() -> nvthermo::Result<()> {
    let cfg = nvthermo::io::RunConfig::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/demo_config.toml"
    ))?;
    let sys = cfg.build_system()?;
    let odmr = &cfg.simulation.odmr;

    let centers = odmr_transition_frequencies(&sys)?;
    println!("allowed electron transitions:");
    for c in &centers {
        println!("  {c:.1} Hz");
    }

    let center = odmr.center_hz.unwrap_or(cfg.system.d_hz);
    let n = odmr.points;
    let grid: Vec<f64> = (0..n)
        .map(|k| center - 0.5 * odmr.span_hz + odmr.span_hz * k as f64 / (n - 1) as f64)
        .collect();
    let spectrum = simulate_odmr(&sys, &grid, odmr.linewidth_hz, odmr.contrast_depth)?;

    let deepest = spectrum
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    println!("deepest dip near {:.1} Hz (contrast {:.4})", grid[deepest.0], deepest.1);

    let mut plot = LinePlot::new("pulsed ODMR", "microwave frequency (Hz)", "contrast");
    plot.add_series("spectrum", grid.into_iter().zip(spectrum).collect());
    plot.write("odmr_spectrum.svg")?;
    println!("wrote odmr_spectrum.svg");
    Ok(())
}
