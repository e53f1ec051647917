//! Spectral densities of the three bath families and their memory kernels.
//!
//! ```text
//! cargo run --release --example bath_kernel
//! ```

use cv_channel::spectral::{KernelTable, SpectralDensity};

fn main() -> cv_channel::Result<()> {
    let baths = [
        ("sub-ohmic", SpectralDensity::sub_ohmic(0.005, 30.0)?),
        ("ohmic", SpectralDensity::ohmic(0.005, 30.0)?),
        ("super-ohmic", SpectralDensity::super_ohmic(0.005, 30.0)?),
    ];

    println!("{:>12} {:>10} {:>12}", "bath", "omega", "J(omega)");
    for (name, sd) in &baths {
        for w in [0.5, 1.5, 30.0, 120.0] {
            println!("{name:>12} {w:>10.1} {:>12.6e}", sd.density(w)?);
        }
    }

    println!("\nkernel mu(tau): closed form vs adaptive quadrature");
    for (name, sd) in &baths {
        for tau in [0.0, 1.0 / 30.0, 0.5, 5.0] {
            let closed = sd.kernel_closed(tau);
            let quad = sd.kernel_quadrature(tau, 1e-10)?;
            println!(
                "{name:>12} tau={tau:<8.4} closed={:>+.6e}{:+.6e}i  |diff|/mu(0)={:.1e}",
                closed.re,
                closed.im,
                (closed - quad).norm() / sd.kernel_at_zero()
            );
        }
    }

    let table = KernelTable::build(&baths[1].1, 1.0 / 30.0, 3)?;
    println!("\nohmic table at dt = 1/30:");
    for (k, m) in table.values().iter().enumerate() {
        println!("  mu({k} dt) = {:+.6}{:+.6}i", m.re, m.im);
    }
    for (name, sd) in &baths {
        println!("{name:>12} weak-coupling shift eta*omega_c*Gamma(n) = {:.4}", sd.weak_coupling_shift());
    }
    Ok(())
}
