//! Time-dependent master-equation coefficients.
//!
//! With `u = (c+s)/2`, `v = (c-s)/2` the coefficients follow from
//! `-Γ - iΩ = ½(ṡ/s + ċ/c)` and `-Γ' - iΩ' = ½(ṡ/s - ċ/c)`, where
//! `ċ/c = -i(ω₀ - κ)` exactly.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::propagator::PropagatorTrajectory;

/// Below this `|s|` the ratio `ṡ/s` is meaningless.
pub const SATURATION_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MasterCoefficients {
    pub t: f64,
    pub omega: f64,
    pub omega_prime: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    /// Set when `|s| < SATURATION_THRESHOLD`; the values are carried over.
    pub saturated: bool,
}

/// Frequency shifts `δΩ = ω₀ - Ω` and `δΩ' = κ - Ω'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyShift {
    pub t: f64,
    pub delta_omega: f64,
    pub delta_omega_prime: f64,
}

pub fn master_coefficients(traj: &PropagatorTrajectory) -> Result<Vec<MasterCoefficients>> {
    let sdot = traj.sdot().ok_or_else(|| {
        Error::Usage("trajectory carries no sdot; solve the centre amplitude first".into())
    })?;
    let half_rel = 0.5 * traj.config().relative_frequency();
    let center = traj.config().center_frequency();
    let mut out = Vec::with_capacity(traj.len());
    let mut last: Option<MasterCoefficients> = None;
    for ((&t, s), sd) in traj.times().iter().zip(traj.s()).zip(sdot) {
        let sample = match last {
            Some(prev) if s.norm() < SATURATION_THRESHOLD => MasterCoefficients {
                t,
                saturated: true,
                ..prev
            },
            _ => {
                // Only the memory part of ṡ/s; the free rotation cancels
                // exactly, so a decoupled bath gives Γ = 0 without rounding.
                let ratio = (sd + Complex64::new(0.0, center) * s) / s;
                let gamma = -0.5 * ratio.re;
                let common = 0.5 * (center - ratio.im);
                MasterCoefficients {
                    t,
                    omega: common + half_rel,
                    omega_prime: common - half_rel,
                    gamma,
                    gamma_prime: gamma,
                    saturated: false,
                }
            }
        };
        last = Some(sample);
        out.push(sample);
    }
    Ok(out)
}

/// Both shifts are the same quantity; they are averaged so that they agree
/// bit for bit instead of up to rounding.
pub fn frequency_shifts(coeffs: &[MasterCoefficients], omega0: f64, kappa: f64) -> Vec<FrequencyShift> {
    coeffs
        .iter()
        .map(|c| {
            let shift = 0.5 * ((omega0 - c.omega) + (kappa - c.omega_prime));
            FrequencyShift {
                t: c.t,
                delta_omega: shift,
                delta_omega_prime: shift,
            }
        })
        .collect()
}

/// `|s|²` below which the centre-of-mass mode counts as relaxed.
pub const RELAXED_POPULATION: f64 = 1e-4;

/// Late-time frequency shift: the mean of `δΩ` over the second half of the
/// interval that ends at `t_max` or at the first `|s|² < RELAXED_POPULATION`,
/// whichever comes first.
///
/// Once `s` has decayed much further the slow algebraic tail of the bath
/// dominates `ṡ/s` and the shift loses its meaning as a pole frequency.
pub fn late_time_shift(shifts: &[FrequencyShift], s: &[Complex64]) -> Option<f64> {
    let end = s
        .iter()
        .position(|z| z.norm_sqr() < RELAXED_POPULATION)
        .unwrap_or(s.len())
        .min(shifts.len());
    if end < 2 {
        return None;
    }
    let window = &shifts[end / 2..end];
    Some(window.iter().map(|d| d.delta_omega).sum::<f64>() / window.len() as f64)
}

/// First grid time at which the coefficients saturate, if any.
pub fn saturation_time(coeffs: &[MasterCoefficients]) -> Option<f64> {
    coeffs.iter().find(|c| c.saturated).map(|c| c.t)
}
