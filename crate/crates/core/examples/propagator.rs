//! Propagator functions u(t), v(t) from the centre-of-mass amplitude, checked
//! against a direct solve of the coupled pair.
//!
//! ```text
//! cargo run --release --example propagator
//! ```

use cv_channel::propagator::{halving_check, solve_center_amplitude, assemble_trajectory, solve_uv_direct, ModelConfig};
use cv_channel::spectral::SpectralDensity;

fn main() -> cv_channel::Result<()> {
    let sd = SpectralDensity::ohmic(0.005, 30.0)?;
    let cfg = ModelConfig::new(0.5, 50.0, 1e-3)?;

    let sol = solve_center_amplitude(&sd, &cfg)?;
    let report = halving_check(&sd, &cfg, &sol.s)?;
    let traj = assemble_trajectory(sol.s, sol.sdot, &cfg)?;

    println!("{:>6} {:>24} {:>24} {:>10}", "t", "u", "v", "|s|^2");
    for t in [0.0, 0.1, 1.0, 5.0, 10.0, 25.0, 50.0] {
        let k = (t / cfg.dt()).round() as usize;
        let (u, v) = (traj.u()[k], traj.v()[k]);
        println!(
            "{t:>6.1} {:>+11.6}{:>+11.6}i {:>+11.6}{:>+11.6}i {:>10.3e}",
            u.re, u.im, v.re, v.im,
            traj.s()[k].norm_sqr()
        );
    }

    let (u, v) = solve_uv_direct(&sd, &cfg)?;
    let diff = u
        .iter()
        .zip(traj.u())
        .chain(v.iter().zip(traj.v()))
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("\ncoupled u,v solve vs centre/relative split: max diff {diff:.2e}");
    println!(
        "dt halving: |s_dt - s_2dt| = {:.2e}, estimated change on halving {:.2e} (converged: {})",
        report.coarse_fine_difference, report.estimated_halving_change, report.converged
    );
    Ok(())
}
