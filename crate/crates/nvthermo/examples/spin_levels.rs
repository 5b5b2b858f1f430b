//! Diagonalize the demo spin system and print the labeled level diagram,
//! then sweep the axial field to show the Zeeman fan of the mS = +-1 levels.

use nalgebra::Vector3;
use nvthermo::spin::{build_hamiltonian, eigendecompose, label_eigenstates, DEFAULT_LABEL_THRESHOLD};

fn main() -> nvthermo::Result<()> {
    let cfg = nvthermo::io::RunConfig::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/demo_config.toml"
    ))?;
    let sys = cfg.build_system()?;

    let h = build_hamiltonian(&sys)?;
    let decomp = eigendecompose(&h)?;
    let labeled = label_eigenstates(&decomp, &sys, DEFAULT_LABEL_THRESHOLD)?;
    let labels = labeled.labels.as_ref().unwrap();

    println!("levels at Bz = {} G (dim {}):", sys.field_gauss.z, sys.dim());
    for (k, label) in labels.iter().enumerate() {
        println!(
            "  {k:>2}  {:>20.3} Hz  overlap {:.6}  {label}",
            labeled.eigenvalues[k], label.overlap
        );
    }

    println!("\nmS = +-1 extremal levels vs Bz:");
    for bz in [0.0, 10.0, 20.0, 50.0, 100.0] {
        let mut s = sys.clone();
        s.field_gauss = Vector3::new(0.0, 0.0, bz);
        let d = eigendecompose(&build_hamiltonian(&s)?)?;
        let lo = d.eigenvalues[s.dim() - 1];
        println!("  Bz = {bz:>6.1} G: top level {lo:.3} Hz");
    }
    Ok(())
}
