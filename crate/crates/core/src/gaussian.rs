//! Second-moment dynamics of the two-mode squeezed channel state.
//!
//! The state stays Gaussian with zero mean, so the normal-mode moments
//! `N = ⟨b†b⟩`, `M = ⟨b²⟩` of the centre-of-mass mode `Ã = (a₁+a₂)/√2` and the
//! relative mode `ã = (a₁-a₂)/√2` describe it completely.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficients::MasterCoefficients;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SqueezeParameter(f64);

impl SqueezeParameter {
    pub fn new(r: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(invalid("r", format!("squeezing must be >= 0, got {r}")));
        }
        Ok(Self(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for SqueezeParameter {
    type Error = Error;

    fn try_from(r: f64) -> Result<Self> {
        Self::new(r)
    }
}

impl From<SqueezeParameter> for f64 {
    fn from(r: SqueezeParameter) -> f64 {
        r.0
    }
}

/// `N = ⟨b†b⟩` and `M = ⟨b²⟩` of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeMoments {
    pub n: f64,
    pub m: Complex64,
}

impl ModeMoments {
    pub const VACUUM: Self = Self {
        n: 0.0,
        m: Complex64::new(0.0, 0.0),
    };

    /// Quadrature block `[[½+N+Re M, Im M], [Im M, ½+N-Re M]]`.
    pub fn covariance_block(&self) -> Matrix2<f64> {
        let d = 0.5 + self.n;
        Matrix2::new(d + self.m.re, self.m.im, self.m.im, d - self.m.re)
    }

    fn check(&self, which: &str) -> Result<()> {
        let slack = 1e-9 * (1.0 + self.n).powi(2);
        if !(self.n.is_finite() && self.m.re.is_finite() && self.m.im.is_finite()) {
            return Err(Error::Domain(format!("{which} moments are not finite")));
        }
        if self.n < -slack || self.m.norm_sqr() > self.n * (self.n + 1.0) + slack {
            return Err(Error::Domain(format!(
                "{which} moments violate |M|^2 <= N(N+1): N = {}, |M| = {}",
                self.n,
                self.m.norm()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalModeMoments {
    pub center: ModeMoments,
    pub relative: ModeMoments,
}

pub fn initial_normal_moments(r: SqueezeParameter) -> NormalModeMoments {
    let r = r.value();
    let n = r.sinh().powi(2);
    let m = 0.5 * (2.0 * r).sinh();
    NormalModeMoments {
        center: ModeMoments {
            n,
            m: Complex64::new(-m, 0.0),
        },
        relative: ModeMoments {
            n,
            m: Complex64::new(m, 0.0),
        },
    }
}

/// Closed-form moments at the time where the amplitudes are `s` and `c`.
pub fn propagate_moments(m0: &NormalModeMoments, s: Complex64, c: Complex64) -> NormalModeMoments {
    NormalModeMoments {
        center: ModeMoments {
            n: s.norm_sqr() * m0.center.n,
            m: s * s * m0.center.m,
        },
        relative: ModeMoments {
            n: m0.relative.n,
            m: c * c * m0.relative.m,
        },
    }
}

/// Real symmetric 4×4 covariance over `(x₁, p₁, x₂, p₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    pub fn new(v: Matrix4<f64>) -> Result<Self> {
        let scale = v.amax().max(1.0);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("covariance has non-finite entries".into()));
        }
        if (v - v.transpose()).amax() > 1e-12 * scale {
            return Err(Error::Domain("covariance is not symmetric".into()));
        }
        Ok(Self(0.5 * (v + v.transpose())))
    }

    pub fn vacuum() -> Self {
        Self(Matrix4::identity() * 0.5)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Matrix4<f64> {
        self.0
    }

    /// Single-mode blocks `A`, `B` and the correlation block `C`.
    pub fn blocks(&self) -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
        let v = &self.0;
        (
            v.fixed_view::<2, 2>(0, 0).into_owned(),
            v.fixed_view::<2, 2>(2, 2).into_owned(),
            v.fixed_view::<2, 2>(0, 2).into_owned(),
        )
    }
}

/// The symplectic form `U = diag(J, J)`, `J = [[0, 1], [-1, 0]]`.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut u = Matrix4::zeros();
    u[(0, 1)] = 1.0;
    u[(1, 0)] = -1.0;
    u[(2, 3)] = 1.0;
    u[(3, 2)] = -1.0;
    u
}

pub fn covariance_from_moments(m: &NormalModeMoments) -> Result<CovarianceMatrix> {
    m.center.check("centre-of-mass")?;
    m.relative.check("relative")?;
    // x₁ = (X_A + X_a)/√2, x₂ = (X_A - X_a)/√2 and likewise for p.
    let a = m.center.covariance_block();
    let b = m.relative.covariance_block();
    let diag = 0.5 * (a + b);
    let off = 0.5 * (a - b);
    let mut v = Matrix4::zeros();
    v.fixed_view_mut::<2, 2>(0, 0).copy_from(&diag);
    v.fixed_view_mut::<2, 2>(2, 2).copy_from(&diag);
    v.fixed_view_mut::<2, 2>(0, 2).copy_from(&off);
    v.fixed_view_mut::<2, 2>(2, 0).copy_from(&off);
    Ok(CovarianceMatrix(v))
}

/// Integrate the moment equations of the master equation directly,
///
/// ```text
/// dN_A/dt = -4Γ N_A
/// dM_A/dt = -2(i(Ω+Ω') + 2Γ) M_A
/// dM_a/dt = -2i(Ω-Ω') M_a
/// ```
///
/// with classical RK4 on the coefficient grid (mid-step coefficients by cubic
/// interpolation). Stops before the first saturated sample.
pub fn moment_ode_oracle(m0: &NormalModeMoments, coeffs: &[MasterCoefficients]) -> Vec<NormalModeMoments> {
    let end = coeffs.iter().position(|c| c.saturated).unwrap_or(coeffs.len());
    let coeffs = &coeffs[..end];
    let mut out = Vec::with_capacity(end);
    if coeffs.is_empty() {
        return out;
    }
    // y = (N_A, M_A, M_a); N_a is constant.
    let rates = |c: &MasterCoefficients| (c.gamma, c.omega + c.omega_prime, c.omega - c.omega_prime);
    let deriv = |(g, sum, diff): (f64, f64, f64), y: (f64, Complex64, Complex64)| {
        (
            -4.0 * g * y.0,
            -2.0 * Complex64::new(2.0 * g, sum) * y.1,
            Complex64::new(0.0, -2.0 * diff) * y.2,
        )
    };
    let mut y = (m0.center.n, m0.center.m, m0.relative.m);
    let push = |out: &mut Vec<NormalModeMoments>, y: (f64, Complex64, Complex64)| {
        out.push(NormalModeMoments {
            center: ModeMoments { n: y.0, m: y.1 },
            relative: ModeMoments {
                n: m0.relative.n,
                m: y.2,
            },
        })
    };
    push(&mut out, y);
    let n = coeffs.len();
    for k in 0..n - 1 {
        let h = coeffs[k + 1].t - coeffs[k].t;
        let r0 = rates(&coeffs[k]);
        let r1 = rates(&coeffs[k + 1]);
        let rm = if n >= 4 {
            // Four-point midpoint interpolation, shifted inward at the ends.
            let j = k.clamp(1, n - 3);
            let p = [j - 1, j, j + 1, j + 2].map(|i| rates(&coeffs[i]));
            let w = if j == k {
                [-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0]
            } else if k == 0 {
                // Midpoint of the first interval: x = -1/2 on nodes -1..2 shifted.
                [5.0 / 16.0, 15.0 / 16.0, -5.0 / 16.0, 1.0 / 16.0]
            } else {
                // Midpoint of the last interval.
                [1.0 / 16.0, -5.0 / 16.0, 15.0 / 16.0, 5.0 / 16.0]
            };
            let mix = |f: fn(&(f64, f64, f64)) -> f64| p.iter().zip(w).map(|(x, w)| w * f(x)).sum::<f64>();
            (mix(|x| x.0), mix(|x| x.1), mix(|x| x.2))
        } else {
            (0.5 * (r0.0 + r1.0), 0.5 * (r0.1 + r1.1), 0.5 * (r0.2 + r1.2))
        };
        let add = |y: (f64, Complex64, Complex64), k: (f64, Complex64, Complex64), f: f64| {
            (y.0 + f * k.0, y.1 + f * k.1, y.2 + f * k.2)
        };
        let k1 = deriv(r0, y);
        let k2 = deriv(rm, add(y, k1, 0.5 * h));
        let k3 = deriv(rm, add(y, k2, 0.5 * h));
        let k4 = deriv(r1, add(y, k3, h));
        y = (
            y.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            y.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            y.2 + h / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2),
        );
        push(&mut out, y);
    }
    out
}

/// Coefficients `b₀…b₆` of the reduced density operator in the
/// coherent-state representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BCoefficients {
    pub b0: f64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub b3: Complex64,
    pub b4: Complex64,
    pub b5: Complex64,
    pub b6: Complex64,
}

/// Denominators below this are treated as vanishing.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Closed-form `b` coefficients for propagator values `u`, `v`.
///
/// The printed `b₁` contains a factor `(um + wn)`; it is read as `(um + vn)`,
/// the combination that appears everywhere else.
pub fn appendix_b_coefficients(u: Complex64, v: Complex64, r: SqueezeParameter) -> Result<BCoefficients> {
    let rv = r.value();
    let t = rv.tanh();
    let (ub, vb) = (u.conj(), v.conj());
    let m = (ub * u + vb * v).re - 1.0;
    let n = (ub * v + vb * u).re;
    let t2 = t * t;
    let denom = 1.0 - 2.0 * t2 * (m * m + n * n) + t2 * t2 * (m * m - n * n).powi(2);
    if !(denom.is_finite() && denom > DENOMINATOR_FLOOR) {
        return Err(Error::Domain(format!(
            "b-coefficient denominator {denom:e} is not positive for u = {u}, v = {v}, r = {rv}"
        )));
    }
    let c = 1.0 - t2 * (m * m + n * n);
    let e = t * m * n;
    let t3 = t2 * t;
    let t4 = t2 * t2;
    let p = u * n + v * m;
    let q = u * m + v * n;

    let b0 = 1.0 / (rv.cosh().powi(2) * denom.sqrt());
    let b1 = (e * t4 * (p * p + q * q) + c * t3 * p * q) / denom + t * u * v;
    let b2 = (e * t2 * (ub * ub + vb * vb) + c * t * ub * vb) / denom;
    let b3 = (-4.0 * e * t4 * p * q - c * t3 * (p * p + q * q)) / denom - t * (u * u + v * v);
    let b4 = (-2.0 * e * t3 * (ub * p + vb * q) - c * t2 * (ub * q + vb * p)) / denom;
    let b5 = (2.0 * e * t3 * (ub * q + vb * p) + c * t2 * (ub * p + vb * q)) / denom;
    let b6 = (-4.0 * e * t2 * ub * vb - c * t * (ub * ub + vb * vb)) / denom;
    Ok(BCoefficients {
        b0,
        b1,
        b2,
        b3,
        b4,
        b5,
        b6,
    })
}
