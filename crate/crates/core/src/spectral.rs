//! Bath spectral densities `J(ω) = η ω (ω/ω_c)^{n-1} e^{-ω/ω_c}` and the
//! dissipation-noise kernel `μ(τ) = ∫ J(ω) e^{-iωτ} dω` they induce.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{adaptive_gk15, gauss_legendre};

/// Largest kernel table the solvers will allocate.
pub const MAX_TABLE_LEN: usize = 20_000_000;

/// Spectral density family with exponent `n`, dimensionless coupling `η` and
/// cutoff `ω_c` (in units of the field frequency).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    exponent: f64,
    coupling: f64,
    cutoff: f64,
}

impl SpectralDensity {
    pub fn new(exponent: f64, coupling: f64, cutoff: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(invalid("n", format!("exponent must be > 0, got {exponent}")));
        }
        if !(coupling.is_finite() && coupling >= 0.0) {
            return Err(invalid("eta", format!("coupling must be >= 0, got {coupling}")));
        }
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(invalid("omega_c", format!("cutoff must be > 0, got {cutoff}")));
        }
        Ok(Self {
            exponent,
            coupling,
            cutoff,
        })
    }

    pub fn ohmic(coupling: f64, cutoff: f64) -> Result<Self> {
        Self::new(1.0, coupling, cutoff)
    }

    pub fn sub_ohmic(coupling: f64, cutoff: f64) -> Result<Self> {
        Self::new(0.5, coupling, cutoff)
    }

    pub fn super_ohmic(coupling: f64, cutoff: f64) -> Result<Self> {
        Self::new(3.0, coupling, cutoff)
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn is_decoupled(&self) -> bool {
        self.coupling == 0.0
    }

    /// `J(ω)` for `ω ≥ 0`.
    pub fn density(&self, omega: f64) -> Result<f64> {
        if omega.is_nan() || omega < 0.0 {
            return Err(Error::Domain(format!(
                "spectral density is defined for ω >= 0, got {omega}"
            )));
        }
        if omega == 0.0 {
            return Ok(0.0);
        }
        let x = omega / self.cutoff;
        Ok(self.coupling * omega * x.powf(self.exponent - 1.0) * (-x).exp())
    }

    /// `μ(0) = η ω_c² Γ(n+1)`.
    pub fn kernel_at_zero(&self) -> f64 {
        self.coupling * self.cutoff * self.cutoff * gamma(self.exponent + 1.0)
    }

    /// Closed form `μ(τ) = η ω_c² Γ(n+1) (1 + i ω_c τ)^{-(n+1)}`, principal branch.
    /// Valid for either sign of `τ`; `μ(-τ) = conj μ(τ)`.
    pub fn kernel_closed(&self, tau: f64) -> Complex64 {
        let base = Complex64::new(1.0, self.cutoff * tau);
        self.kernel_at_zero() * (-(self.exponent + 1.0) * base.ln()).exp()
    }

    /// Quadrature evaluation of `∫_0^∞ J(ω) e^{-iωτ} dω`, independent of the
    /// closed form. Uses `ω = ω_c x` and adaptive Gauss-Kronrod with an
    /// absolute floor of 1e-12 and relative tolerance `tol`.
    pub fn kernel_quadrature(&self, tau: f64, tol: f64) -> Result<Complex64> {
        if !(tol > 0.0) {
            return Err(invalid("tol", format!("tolerance must be > 0, got {tol}")));
        }
        if self.is_decoupled() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let n = self.exponent;
        let phase = self.cutoff * tau;
        let scale = self.coupling * self.cutoff * self.cutoff;
        // Tail beyond x_max is below 1e-20 relative for every n we admit.
        let x_max = 60.0 + 4.0 * n;
        // Resolve one oscillation per initial segment.
        let width = if phase.abs() > 0.0 {
            (std::f64::consts::PI / phase.abs()).min(2.0)
        } else {
            2.0
        };
        let pieces = ((x_max / width).ceil() as usize).max(1);
        let mut breaks: Vec<f64> = (0..=pieces)
            .map(|i| x_max * i as f64 / pieces as f64)
            .collect();
        // The x^n endpoint behaviour for n < 1 wants a fine start.
        if n < 1.0 {
            let first = breaks[1];
            breaks.splice(1..1, [1e-6, 1e-4, 1e-2].into_iter().filter(|b| *b < first));
        }
        let integrand = |x: f64| {
            if x <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let mag = scale * (n * x.ln() - x).exp();
            Complex64::from_polar(mag, -phase * x)
        };
        let (value, _err) = adaptive_gk15(integrand, &breaks, 1e-12, tol, 200_000)?;
        Ok(value)
    }

    /// Weak-coupling asymptotic frequency shift `∫ J(ω)/ω dω = η ω_c Γ(n)`,
    /// exact only for `ω_c` far above the system frequencies.
    pub fn weak_coupling_shift(&self) -> f64 {
        self.coupling * self.cutoff * gamma(self.exponent)
    }
}

/// Kernel samples on a uniform lag grid plus the product-trapezoid interval
/// weights the direct Volterra solver consumes.
///
/// For lag interval `m` (`σ ∈ [m dt, (m+1) dt]`):
/// `near[m] = ∫ μ(σ) ((m+1)dt - σ)/dt dσ` and `far[m] = ∫ μ(σ) (σ - m dt)/dt dσ`,
/// i.e. the exact integral of the kernel against the linear interpolant of
/// the history.
#[derive(Debug, Clone)]
pub struct KernelTable {
    dt: f64,
    values: Vec<Complex64>,
    near: Vec<Complex64>,
    far: Vec<Complex64>,
}

impl KernelTable {
    pub fn build(sd: &SpectralDensity, dt: f64, len: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid("dt", format!("time step must be > 0, got {dt}")));
        }
        if len == 0 {
            return Err(invalid("N", "kernel table needs at least one entry"));
        }
        if len > MAX_TABLE_LEN {
            return Err(Error::Resource {
                requested: len,
                limit: MAX_TABLE_LEN,
            });
        }
        let values = (0..len).map(|k| sd.kernel_closed(k as f64 * dt)).collect();
        let (nodes, weights) = gauss_legendre(8);
        let wc = sd.cutoff();
        let mut near = Vec::with_capacity(len);
        let mut far = Vec::with_capacity(len);
        for m in 0..len {
            // Sub-intervals no wider than a quarter of the local kernel scale.
            let local = 0.25 * (1.0 + wc * m as f64 * dt);
            let pieces = ((wc * dt / local).ceil() as usize).max(1);
            let mut p = Complex64::new(0.0, 0.0);
            let mut q = Complex64::new(0.0, 0.0);
            for j in 0..pieces {
                let x0 = j as f64 / pieces as f64;
                let half = 0.5 / pieces as f64;
                for (xi, wi) in nodes.iter().zip(&weights) {
                    let x = x0 + half * (1.0 + xi);
                    let mu = sd.kernel_closed((m as f64 + x) * dt);
                    p += mu * (wi * half * (1.0 - x));
                    q += mu * (wi * half * x);
                }
            }
            near.push(p * dt);
            far.push(q * dt);
        }
        Ok(Self {
            dt,
            values,
            near,
            far,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn near_weights(&self) -> &[Complex64] {
        &self.near
    }

    pub fn far_weights(&self) -> &[Complex64] {
        &self.far
    }
}
