//! Sum-of-exponentials representation of the kernel.
//!
//! Writing `(1 + iω_c τ)^{-(n+1)} = Γ(n+1)^{-1} ∫_0^∞ x^n e^{-x(1 + iω_c τ)} dx`
//! and rotating the contour to `x = ρ e^{-iπ/4}` turns every term into a
//! decaying complex exponential in `τ`. A trapezoidal rule in `log ρ` then
//! gives `μ(τ) ≈ Σ_j w_j e^{-λ_j τ}` with `Re λ_j > 0`, uniformly accurate in
//! relative terms up to the requested horizon.

use num_complex::Complex64;

use crate::spectral::SpectralDensity;

const ROTATION: f64 = std::f64::consts::FRAC_PI_4;
const LOG_STEP: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct ExponentialSum {
    weights: Vec<Complex64>,
    rates: Vec<Complex64>,
}

impl ExponentialSum {
    /// Fit the kernel of `sd` for lags in `[0, horizon]`.
    pub fn fit(sd: &SpectralDensity, horizon: f64) -> Self {
        let n = sd.exponent();
        let wc = sd.cutoff();
        let (sin, cos) = ROTATION.sin_cos();
        let rotation = Complex64::from_polar(1.0, -ROTATION);
        let prefactor = Complex64::from_polar(
            sd.coupling() * wc * wc,
            -ROTATION * (n + 1.0),
        );

        // Upper end: the ρ^{n+1} e^{-ρ cos φ} envelope has dropped by e^{-40}.
        let mut y_max = ((n + 1.0) / cos).ln().max(0.0);
        while (n + 1.0) * y_max - cos * y_max.exp() > -40.0 {
            y_max += LOG_STEP;
        }
        // Lower end: at the horizon the integrand peaks near ρ = 1/(ω_c τ).
        let y_peak = -(1.0 + wc * horizon.max(0.0)).ln();
        let y_min = y_peak - 40.0 / (n + 1.0);
        let count = ((y_max - y_min) / LOG_STEP).ceil() as usize + 1;

        let mut weights = Vec::with_capacity(count);
        let mut rates = Vec::with_capacity(count);
        for j in 0..count {
            let y = y_min + j as f64 * LOG_STEP;
            let rho = y.exp();
            let w = prefactor * LOG_STEP * ((n + 1.0) * y).exp() * (-rotation * rho).exp();
            weights.push(w);
            rates.push(Complex64::new(sin, cos) * (rho * wc));
        }
        Self { weights, rates }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn rates(&self) -> &[Complex64] {
        &self.rates
    }

    pub fn eval(&self, tau: f64) -> Complex64 {
        self.weights
            .iter()
            .zip(&self.rates)
            .map(|(w, l)| w * (-l * tau).exp())
            .sum()
    }
}

/// `∫_0^1 e^{-z y} y dy` and `∫_0^1 e^{-z y} (1 - y) dy`: weights of the
/// older and newer endpoint when a linear segment is convolved with
/// `e^{-λ σ}` over one step (`z = λ dt`).
pub(crate) fn linear_segment_weights(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 0.25 {
        // Σ (-z)^k / k! · 1/(k+2) and Σ (-z)^k / k! · 1/((k+1)(k+2)).
        let mut term = Complex64::new(1.0, 0.0);
        let mut older = Complex64::new(0.0, 0.0);
        let mut newer = Complex64::new(0.0, 0.0);
        for k in 0..24 {
            let kf = k as f64;
            older += term / (kf + 2.0);
            newer += term / ((kf + 1.0) * (kf + 2.0));
            term *= -z / (kf + 1.0);
        }
        (older, newer)
    } else {
        let e = (-z).exp();
        let z2 = z * z;
        let one = Complex64::new(1.0, 0.0);
        ((one - (one + z) * e) / z2, (z - one + e) / z2)
    }
}
