//! Run one scenario and print a gnuplot script for its CSV output.
//!
//! ```text
//! cargo run --release --example plot_recipe -- output/plot > plot.gp
//! gnuplot plot.gp
//! ```

use std::path::PathBuf;

use cv_channel::scenario::{run_scenario, Scenario};

fn main() -> cv_channel::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("output/plot"));
    let sc = Scenario {
        out: out.clone(),
        ..Scenario::figure_defaults()
    };
    let rec = run_scenario(&sc)?;
    let a = &rec.artifacts;
    println!(
        r#"set datafile separator ","
set key autotitle columnhead
set terminal pngcairo size 1200,400
set output "{dir}/channel.png"
set multiplot layout 1,3
set xlabel "t"
plot "{coef}" using 1:2 with lines title "delta omega"
plot "{coef}" using 1:3 with lines title "gamma"
plot "{neg}" using 1:2 with lines title "E_N"
unset multiplot"#,
        dir = out.display(),
        coef = a.coefficients.display(),
        neg = a.negativity.display(),
    );
    Ok(())
}
