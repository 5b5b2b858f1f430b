//! Evaluate the phonon + thermal-expansion model on the bundled demo tables:
//! A(T) curve, the 300 K derivative split, and the effect of merging
//! near-degenerate modes.

use nvthermo::io::{parse_expansion_table, parse_phonon_table};
use nvthermo::thermo::{merge_degenerate_modes, ThermoModel};

fn main() -> nvthermo::Result<()> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let modes = parse_phonon_table(format!("{data}/modes_c13_2_demo.csv"))?;
    let expansion = parse_expansion_table(format!("{data}/expansion_demo.csv"))?;

    let model = ThermoModel {
        a_stc0_hz: 13.626e6,
        c_stc_hz: 5.5371200741e7,
        modes,
        expansion,
        constants: Default::default(),
    };
    model.validate()?;

    println!("A(0) = {:.3} Hz (zero-point shift {:.3} Hz)", model.a_zero(), 0.5 * model.modes.sum_c_hz());
    for t in [50.0, 100.0, 200.0, 300.0, 400.0] {
        println!("A({t:>5.1}) - A(0) = {:>10.3} Hz", model.a_of_t(t)? - model.a_zero());
    }

    let d = model.da_dt(300.0)?;
    println!(
        "dA/dT(300) = {:.3} Hz/K  (static {:.3}, dynamic {:.3})",
        d.total_hz_per_k, d.stc_hz_per_k, d.dyn_hz_per_k
    );

    let merged = merge_degenerate_modes(&model.modes, 1.0);
    let merged_model = ThermoModel {
        modes: merged,
        ..model.clone()
    };
    println!(
        "after 1 meV merging: {} -> {} modes, dyn(300) {:.3} -> {:.3} Hz",
        model.modes.modes.len(),
        merged_model.modes.modes.len(),
        model.delta_a_dyn(300.0)?,
        merged_model.delta_a_dyn(300.0)?
    );
    Ok(())
}
