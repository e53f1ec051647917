//! Exact non-Markovian dynamics of a two-mode squeezed state whose two modes
//! share one zero-temperature bosonic bath.
//!
//! The pipeline runs bath kernel → propagator functions → master-equation
//! coefficients → Gaussian moments → logarithmic negativity:
//!
//! ```
//! use cv_channel::prelude::*;
//!
//! let bath = SpectralDensity::ohmic(0.005, 30.0)?;
//! let cfg = ModelConfig::new(0.5, 1.0, 1e-3)?;
//! let traj = solve_trajectory(&bath, &cfg)?;
//! let m0 = initial_normal_moments(SqueezeParameter::new(3.0)?);
//! let k = traj.len() - 1;
//! let v = covariance_from_moments(&propagate_moments(&m0, traj.s()[k], traj.c()[k]))?;
//! assert!(log_negativity(&v)? > 4.3);
//! # Ok::<(), cv_channel::Error>(())
//! ```
//!
//! Units: `ħ = 1`, frequencies in units of the field frequency `ω₀ = 1`,
//! quadratures `x = (a + a†)/√2`, `p = (a - a†)/(i√2)` (vacuum variance ½).

pub mod coefficients;
pub mod entanglement;
pub mod error;
pub mod gaussian;
pub mod propagator;
pub mod quadrature;
pub mod scenario;
pub mod spectral;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::coefficients::{frequency_shifts, master_coefficients, MasterCoefficients};
    pub use crate::entanglement::{log_negativity, partial_transpose, symplectic_spectrum};
    pub use crate::error::{Error, Result};
    pub use crate::gaussian::{
        covariance_from_moments, initial_normal_moments, propagate_moments, CovarianceMatrix,
        NormalModeMoments, SqueezeParameter,
    };
    pub use crate::propagator::{
        assemble_trajectory, solve_center_amplitude, solve_trajectory, MemoryScheme, ModelConfig,
        PropagatorTrajectory,
    };
    pub use crate::scenario::{run_scenario, sweep, RunRecord, Scenario};
    pub use crate::spectral::{KernelTable, SpectralDensity};
}
