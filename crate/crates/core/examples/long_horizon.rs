//! Follow the super-Ohmic channel for ~10^5 time units with the
//! exponential-sum memory, streaming instead of storing the trajectory.
//!
//! ```text
//! cargo run --release --example long_horizon
//! ```

use cv_channel::entanglement::log_negativity;
use cv_channel::gaussian::{covariance_from_moments, initial_normal_moments, propagate_moments, SqueezeParameter};
use cv_channel::propagator::{CenterStepper, MemoryScheme, ModelConfig};
use cv_channel::spectral::SpectralDensity;

fn main() -> cv_channel::Result<()> {
    let sd = SpectralDensity::super_ohmic(0.005, 30.0)?;
    let cfg = ModelConfig::new(0.5, 4e5, 1e-2)?.with_memory(MemoryScheme::ExponentialSum);
    let m0 = initial_normal_moments(SqueezeParameter::new(3.0)?);
    let mut stepper = CenterStepper::new(&sd, &cfg)?;

    let mut next_report = 1.0;
    loop {
        let smp = stepper.advance()?;
        let pop = smp.s.norm_sqr();
        if smp.t >= next_report || pop < 1e-4 {
            let m = propagate_moments(&m0, smp.s, cfg.relative_amplitude(smp.t));
            let e_n = log_negativity(&covariance_from_moments(&m)?)?;
            let gamma = -0.5 * (smp.sdot / smp.s).re;
            println!("t={:>10.1} |s|^2={pop:.4e} gamma={gamma:.4e} E_N={e_n:.5}", smp.t);
            next_report *= 4.0;
        }
        if pop < 1e-4 {
            println!("relaxed (|s|^2 < 1e-4); r/ln2 = {:.5}", 3.0 / std::f64::consts::LN_2);
            break;
        }
    }
    Ok(())
}
