//! Logarithmic negativity of the channel state as it relaxes towards the
//! decoherence-free relative-mode state.
//!
//! ```text
//! cargo run --release --example entanglement
//! ```

use cv_channel::entanglement::{log_negativity, partial_transpose, symplectic_spectrum, symplectic_spectrum_oracle};
use cv_channel::gaussian::{covariance_from_moments, initial_normal_moments, propagate_moments, SqueezeParameter};
use cv_channel::propagator::{solve_trajectory, ModelConfig};
use cv_channel::spectral::SpectralDensity;

fn main() -> cv_channel::Result<()> {
    let r = SqueezeParameter::new(3.0)?;
    let m0 = initial_normal_moments(r);
    let v0 = covariance_from_moments(&m0)?;
    println!("initial covariance:\n{}", v0.matrix());
    let spec = symplectic_spectrum(&partial_transpose(&v0))?;
    let oracle = symplectic_spectrum_oracle(&partial_transpose(&v0))?;
    println!(
        "transposed spectrum {:.6e} / {:.6e} (eigensolver: {:.6e} / {:.6e})",
        spec.nu_min, spec.nu_max, oracle.nu_min, oracle.nu_max
    );
    println!(
        "E_N(0) = {:.6}, 2r/ln2 = {:.6}\n",
        log_negativity(&v0)?,
        2.0 * r.value() / std::f64::consts::LN_2
    );

    let sd = SpectralDensity::sub_ohmic(0.005, 30.0)?;
    let cfg = ModelConfig::new(0.5, 40.0, 1e-3)?;
    let traj = solve_trajectory(&sd, &cfg)?;
    println!("{:>6} {:>10} {:>10} {:>12}", "t", "|s|^2", "E_N", "nu_min");
    for k in (0..traj.len()).step_by(2000) {
        let m = propagate_moments(&m0, traj.s()[k], traj.c()[k]);
        let v = covariance_from_moments(&m)?;
        println!(
            "{:>6.1} {:>10.3e} {:>10.6} {:>12.9}",
            traj.times()[k],
            traj.s()[k].norm_sqr(),
            log_negativity(&v)?,
            symplectic_spectrum(&v)?.nu_min
        );
    }
    println!("asymptote r/ln2 = {:.6}", r.value() / std::f64::consts::LN_2);
    Ok(())
}
