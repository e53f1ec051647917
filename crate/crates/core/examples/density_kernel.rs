//! Coefficients b0..b6 of the reduced density operator in the coherent-state
//! representation, from the initial state to the long-time limit.
//!
//! ```text
//! cargo run --release --example density_kernel
//! ```

use cv_channel::gaussian::{appendix_b_coefficients, SqueezeParameter};
use cv_channel::propagator::{solve_trajectory, ModelConfig};
use cv_channel::spectral::SpectralDensity;

fn main() -> cv_channel::Result<()> {
    let r = SqueezeParameter::new(1.0)?;
    let sd = SpectralDensity::sub_ohmic(0.005, 30.0)?;
    let cfg = ModelConfig::new(0.5, 40.0, 1e-3)?;
    let traj = solve_trajectory(&sd, &cfg)?;

    for t in [0.0, 1.0, 10.0, 40.0] {
        let k = (t / cfg.dt()).round() as usize;
        let b = appendix_b_coefficients(traj.u()[k], traj.v()[k], r)?;
        println!(
            "t={t:<5} b0={:.6} b1={:.5} b3={:.5} b4={:.2e} b6={:.5}",
            b.b0, b.b1, b.b3, b.b4.norm(), b.b6
        );
    }

    let (c, t) = (1f64.cosh(), 1f64.tanh());
    let phase = traj.c()[traj.len() - 1];
    println!(
        "\nlong-time forms: b0 -> 1/cosh r = {:.6}, b1 -> tanh r e^(-2i(w0-k)t)/4 = {:.5}",
        1.0 / c,
        t * phase * phase / 4.0
    );
    Ok(())
}
