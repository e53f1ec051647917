//! Time-dependent frequency shift and decay rate for the three baths.
//!
//! ```text
//! cargo run --release --example master_coefficients
//! ```

use cv_channel::coefficients::{frequency_shifts, late_time_shift, master_coefficients};
use cv_channel::propagator::{solve_trajectory, ModelConfig};
use cv_channel::spectral::SpectralDensity;

fn main() -> cv_channel::Result<()> {
    let (eta, wc) = (0.005, 30.0);
    let cfg = ModelConfig::new(0.5, 50.0, 1e-3)?;
    for (name, n) in [("sub-ohmic", 0.5), ("ohmic", 1.0), ("super-ohmic", 3.0)] {
        let sd = SpectralDensity::new(n, eta, wc)?;
        let traj = solve_trajectory(&sd, &cfg)?;
        let coeffs = master_coefficients(&traj)?;
        let shifts = frequency_shifts(&coeffs, cfg.omega0(), cfg.kappa());

        let peak = coeffs
            .iter()
            .take_while(|c| c.t <= 1.0)
            .max_by(|a, b| a.gamma.total_cmp(&b.gamma))
            .expect("non-empty");
        let at10 = &coeffs[(10.0 / cfg.dt()).round() as usize];
        println!("{name}:");
        for t in [0.01, 0.03, 0.1, 1.0, 10.0] {
            let k = (t / cfg.dt()).round() as usize;
            println!(
                "  t={t:<5} delta_omega={:.5}  gamma={:.4e}",
                shifts[k].delta_omega, coeffs[k].gamma
            );
        }
        println!("  peak gamma for t <= 1: {:.4e} at t = {:.3}; gamma(10) = {:.4e}", peak.gamma, peak.t, at10.gamma);
        if let Some(late) = late_time_shift(&shifts, traj.s()) {
            println!(
                "  late-time delta_omega / (eta omega_c) = {:.4}   (eta omega_c Gamma(n) gives {:.4})",
                late / (eta * wc),
                sd.weak_coupling_shift() / (eta * wc)
            );
        }
    }
    Ok(())
}
