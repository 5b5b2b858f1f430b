//! Temperature-coefficient regression on the bundled measurement series:
//! weighted line fit of the two-frequency mean per NV center, then an
//! inverse-variance combination of the slopes.

use std::collections::BTreeMap;

use nvthermo::fit::{fit_line_weighted, weighted_mean, TempRecord, TempSeries};
use nvthermo::io::parse_measurements;

fn main() -> nvthermo::Result<()> {
    let records = parse_measurements(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/measurements_demo.csv"
    ))?;

    let mut by_nv: BTreeMap<String, TempSeries> = BTreeMap::new();
    for r in &records {
        by_nv.entry(r.nv_id.clone()).or_default().records.push(TempRecord {
            temperature_k: r.temperature_k,
            value_hz: r.mean_hz(),
            sigma_hz: r.sigma_hz / std::f64::consts::SQRT_2,
        });
    }

    let mut slopes = Vec::new();
    let mut sigmas = Vec::new();
    for (nv, series) in &by_nv {
        let fit = fit_line_weighted(series)?;
        println!(
            "{nv}: dA/dT = {:.3} +/- {:.3} Hz/K over {} points",
            fit.slope_hz_per_k,
            fit.sigma_slope,
            series.records.len()
        );
        slopes.push(fit.slope_hz_per_k);
        sigmas.push(fit.sigma_slope);
    }

    let (combined, sigma) = weighted_mean(&slopes, &sigmas)?;
    println!("combined: {combined:.3} +/- {sigma:.3} Hz/K");
    Ok(())
}
