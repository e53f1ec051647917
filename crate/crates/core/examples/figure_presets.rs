//! Write the datasets behind the four figures (frequency shift, decay rate,
//! negativity with and without inter-field coupling).
//!
//! ```text
//! cargo run --release --example figure_presets -- [output-dir]
//! ```

use std::path::PathBuf;

use cv_channel::scenario::{preset, run_scenario, PRESET_NAMES};

fn main() -> cv_channel::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("output"));
    for name in PRESET_NAMES {
        let p = preset(name, &out)?;
        println!("{name}: {}", p.description);
        for (label, sc) in &p.runs {
            let rec = run_scenario(sc)?;
            let d = &rec.diagnostics;
            println!(
                "  {label:<12} E_N(end)={:.5} late delta_omega={} -> {}",
                d.final_e_n,
                d.asymptotic_delta_omega.map_or("-".into(), |x| format!("{x:.5}")),
                sc.out.display()
            );
        }
    }
    Ok(())
}
