//! Sweep the bath exponent and summarise the runs in index.csv.
//!
//! ```text
//! cargo run --release --example parameter_sweep -- [output-dir]
//! ```

use std::path::PathBuf;

use cv_channel::scenario::{sweep, Scenario};

fn main() -> cv_channel::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("output/sweep_n"));
    let base = Scenario {
        t_max: 20.0,
        stride: 50,
        out: out.clone(),
        ..Scenario::figure_defaults()
    };
    let records = sweep(&base, "n", &[0.5, 0.75, 1.0, 2.0, 3.0])?;
    for rec in &records {
        let d = &rec.diagnostics;
        println!(
            "n={:<5} final E_N={:.5} late delta_omega/(eta omega_c)={:.4} halving change {:.1e}",
            rec.scenario.n,
            d.final_e_n,
            d.asymptotic_delta_omega.unwrap_or(f64::NAN) / (base.eta * base.omega_c),
            d.dt_convergence.estimated_halving_change
        );
    }
    println!("{}", std::fs::read_to_string(out.join("index.csv")).unwrap_or_default());
    Ok(())
}
