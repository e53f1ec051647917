//! Propagator functions `u(t)`, `v(t)` of the two cavity fields.
//!
//! With identical fields coupled homogeneously to one bath, the amplitude
//! equations split into a free relative mode `c = u + v` and a damped
//! centre-of-mass mode `s = u - v`:
//!
//! ```text
//! ṡ = -i(ω₀ + κ) s - 2 ∫_0^t μ(t - τ) s(τ) dτ,   s(0) = 1
//! ċ = -i(ω₀ - κ) c,                              c(0) = 1
//! ```
//!
//! The `s` equation is stepped with the trapezoidal rule in integrating-factor
//! form (the free rotation is exact) and a product-trapezoid memory integral.

mod history;
mod soe;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::{KernelTable, SpectralDensity, MAX_TABLE_LEN};
use history::{DirectHistory, ExponentialHistory, MemoryHistory, NoMemory};

pub use soe::ExponentialSum;

/// Field frequency; every other frequency is measured in this unit.
pub const OMEGA0: f64 = 1.0;

/// Longest grid a streaming [`CenterStepper`] will accept.
pub const MAX_GRID_STEPS: usize = 1_000_000_000;

/// Largest `|s|` accepted before a step is declared divergent.
const DIVERGENCE_BOUND: f64 = 1e6;

/// How the memory integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryScheme {
    /// Full history against the tabulated kernel, O(N²) overall.
    #[default]
    Direct,
    /// Kernel expanded in decaying exponentials, O(N) overall.
    ExponentialSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    kappa: f64,
    t_max: f64,
    dt: f64,
    #[serde(default)]
    memory: MemoryScheme,
}

impl ModelConfig {
    pub fn new(kappa: f64, t_max: f64, dt: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(invalid("kappa", format!("coupling must be finite, got {kappa}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid("dt", format!("time step must be > 0, got {dt}")));
        }
        if !(t_max.is_finite() && t_max >= dt) {
            return Err(invalid(
                "t_max",
                format!("horizon must be >= dt ({dt}), got {t_max}"),
            ));
        }
        let steps = (t_max / dt).round();
        if steps > MAX_GRID_STEPS as f64 {
            return Err(Error::Resource {
                requested: steps.min(usize::MAX as f64) as usize,
                limit: MAX_GRID_STEPS,
            });
        }
        Ok(Self {
            kappa,
            t_max,
            dt,
            memory: MemoryScheme::Direct,
        })
    }

    pub fn with_memory(mut self, memory: MemoryScheme) -> Self {
        self.memory = memory;
        self
    }

    pub fn omega0(&self) -> f64 {
        OMEGA0
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn memory(&self) -> MemoryScheme {
        self.memory
    }

    /// Number of steps `N`; the grid has `N + 1` points.
    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    /// Centre-of-mass frequency `ω₀ + κ`.
    pub fn center_frequency(&self) -> f64 {
        OMEGA0 + self.kappa
    }

    /// Relative-mode frequency `ω₀ - κ`.
    pub fn relative_frequency(&self) -> f64 {
        OMEGA0 - self.kappa
    }

    /// `c(t) = e^{-i(ω₀ - κ)t}`.
    pub fn relative_amplitude(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.relative_frequency() * t)
    }
}

/// One accepted point of the centre-of-mass solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterSample {
    pub step: usize,
    pub t: f64,
    pub s: Complex64,
    /// Right-hand side of the `s` equation at the accepted `s`.
    pub sdot: Complex64,
}

/// Streaming solver for the centre-of-mass amplitude.
///
/// Holds only what the memory scheme needs, so with
/// [`MemoryScheme::ExponentialSum`] it can run far past what a stored
/// trajectory would fit in memory.
pub struct CenterStepper {
    history: Box<dyn MemoryHistory>,
    rotation: Complex64,
    frequency: f64,
    dt: f64,
    max_steps: usize,
    current: CenterSample,
    memory_now: Complex64,
}

impl CenterStepper {
    /// Stepper able to cover `cfg.t_max()`.
    pub fn new(sd: &SpectralDensity, cfg: &ModelConfig) -> Result<Self> {
        let table = if sd.is_decoupled() || cfg.memory() == MemoryScheme::ExponentialSum {
            None
        } else {
            Some(KernelTable::build(sd, cfg.dt(), cfg.steps().max(1))?)
        };
        Self::build(sd, cfg, table.as_ref())
    }

    /// Direct-scheme stepper over a caller-supplied kernel table.
    pub fn with_table(sd: &SpectralDensity, cfg: &ModelConfig, table: &KernelTable) -> Result<Self> {
        if (table.dt() - cfg.dt()).abs() > 1e-15 * cfg.dt() {
            return Err(Error::Usage(format!(
                "kernel table step {} differs from grid step {}",
                table.dt(),
                cfg.dt()
            )));
        }
        if table.len() < cfg.steps() {
            return Err(Error::Usage(format!(
                "kernel table has {} entries, grid needs {}",
                table.len(),
                cfg.steps()
            )));
        }
        Self::build(sd, &cfg.with_memory(MemoryScheme::Direct), Some(table))
    }

    fn build(sd: &SpectralDensity, cfg: &ModelConfig, table: Option<&KernelTable>) -> Result<Self> {
        let steps = cfg.steps();
        let mut history: Box<dyn MemoryHistory> = if sd.is_decoupled() {
            Box::new(NoMemory)
        } else {
            match cfg.memory() {
                MemoryScheme::Direct => {
                    let table = table.expect("direct scheme needs a kernel table");
                    let h = DirectHistory::new(table);
                    debug_assert!(h.capacity() >= steps);
                    Box::new(h)
                }
                MemoryScheme::ExponentialSum => {
                    let sum = ExponentialSum::fit(sd, cfg.t_max());
                    Box::new(ExponentialHistory::new(&sum, cfg.dt()))
                }
            }
        };
        let s0 = Complex64::new(1.0, 0.0);
        history.push(s0);
        let frequency = cfg.center_frequency();
        Ok(Self {
            history,
            rotation: Complex64::from_polar(1.0, -frequency * cfg.dt()),
            frequency,
            dt: cfg.dt(),
            max_steps: steps,
            current: CenterSample {
                step: 0,
                t: 0.0,
                s: s0,
                sdot: Complex64::new(0.0, -frequency) * s0,
            },
            memory_now: Complex64::new(0.0, 0.0),
        })
    }

    pub fn current(&self) -> CenterSample {
        self.current
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    /// Advance one step and return the new sample.
    pub fn advance(&mut self) -> Result<CenterSample> {
        let k = self.current.step;
        if k >= self.max_steps {
            return Err(Error::Usage(format!(
                "stepper was built for {} steps",
                self.max_steps
            )));
        }
        let dt = self.dt;
        let e = self.rotation;
        let s = self.current.s;
        let mem = self.memory_now;
        let pending = self.history.pending();
        let own = self.history.self_weight();

        // The trapezoidal corrector is linear in the new value, so its fixed
        // point is solved for directly instead of iterated from a predictor.
        let next = (e * s - dt * (e * mem + pending)) / (1.0 + dt * own);
        let mem_next = own * next + pending;

        let t = (k + 1) as f64 * dt;
        if !(next.re.is_finite() && next.im.is_finite()) || next.norm() > DIVERGENCE_BOUND {
            return Err(Error::Divergence { step: k + 1, time: t });
        }
        self.history.push(next);
        self.memory_now = mem_next;
        self.current = CenterSample {
            step: k + 1,
            t,
            s: next,
            sdot: Complex64::new(0.0, -self.frequency) * next - 2.0 * mem_next,
        };
        Ok(self.current)
    }
}

/// `s` and `ṡ` on the uniform grid `t_k = k dt`, `k = 0..=N`.
#[derive(Debug, Clone)]
pub struct CenterSolution {
    pub s: Vec<Complex64>,
    pub sdot: Vec<Complex64>,
}

pub fn solve_center_amplitude(sd: &SpectralDensity, cfg: &ModelConfig) -> Result<CenterSolution> {
    check_stored_len(cfg)?;
    let stepper = CenterStepper::new(sd, cfg)?;
    run_stepper(stepper)
}

pub fn solve_center_amplitude_with_table(
    sd: &SpectralDensity,
    cfg: &ModelConfig,
    table: &KernelTable,
) -> Result<CenterSolution> {
    run_stepper(CenterStepper::with_table(sd, cfg, table)?)
}

fn check_stored_len(cfg: &ModelConfig) -> Result<()> {
    if cfg.steps() > MAX_TABLE_LEN {
        return Err(Error::Resource {
            requested: cfg.steps(),
            limit: MAX_TABLE_LEN,
        });
    }
    Ok(())
}

/// Combine solutions on `dt` and `2dt` into `(4 s_dt - s_2dt) / 3` on the
/// coarse grid, cancelling the leading `dt²` error of both `s` and `ṡ`.
pub fn richardson_extrapolate(fine: &CenterSolution, coarse: &CenterSolution) -> Result<CenterSolution> {
    if coarse.s.is_empty() || fine.s.len() != 2 * coarse.s.len() - 1 {
        return Err(Error::Usage(format!(
            "fine grid has {} points, expected {} for a coarse grid of {}",
            fine.s.len(),
            2 * coarse.s.len().max(1) - 1,
            coarse.s.len()
        )));
    }
    let combine = |f: &[Complex64], c: &[Complex64]| -> Vec<Complex64> {
        c.iter()
            .enumerate()
            .map(|(j, x)| (4.0 * f[2 * j] - x) / 3.0)
            .collect()
    };
    Ok(CenterSolution {
        s: combine(&fine.s, &coarse.s),
        sdot: combine(&fine.sdot, &coarse.sdot),
    })
}

fn run_stepper(mut stepper: CenterStepper) -> Result<CenterSolution> {
    let n = stepper.max_steps();
    let mut s = Vec::with_capacity(n + 1);
    let mut sdot = Vec::with_capacity(n + 1);
    let first = stepper.current();
    s.push(first.s);
    sdot.push(first.sdot);
    for _ in 0..n {
        let sample = stepper.advance()?;
        s.push(sample.s);
        sdot.push(sample.sdot);
    }
    Ok(CenterSolution { s, sdot })
}

/// Grid trajectory of the propagator functions.
#[derive(Debug, Clone)]
pub struct PropagatorTrajectory {
    config: ModelConfig,
    times: Vec<f64>,
    s: Vec<Complex64>,
    sdot: Option<Vec<Complex64>>,
    c: Vec<Complex64>,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
}

impl PropagatorTrajectory {
    /// Trajectory from separately computed `u`, `v` (no `ṡ` available).
    pub fn from_uv(u: Vec<Complex64>, v: Vec<Complex64>, cfg: &ModelConfig) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Usage(format!(
                "u has {} samples but v has {}",
                u.len(),
                v.len()
            )));
        }
        let times = (0..u.len()).map(|k| k as f64 * cfg.dt()).collect();
        let s = u.iter().zip(&v).map(|(u, v)| u - v).collect();
        let c = u.iter().zip(&v).map(|(u, v)| u + v).collect();
        Ok(Self {
            config: *cfg,
            times,
            s,
            sdot: None,
            c,
            u,
            v,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn s(&self) -> &[Complex64] {
        &self.s
    }

    pub fn sdot(&self) -> Option<&[Complex64]> {
        self.sdot.as_deref()
    }

    pub fn c(&self) -> &[Complex64] {
        &self.c
    }

    pub fn u(&self) -> &[Complex64] {
        &self.u
    }

    pub fn v(&self) -> &[Complex64] {
        &self.v
    }
}

/// Fill in the exact relative amplitude and form `u = (c+s)/2`, `v = (c-s)/2`.
pub fn assemble_trajectory(
    s: Vec<Complex64>,
    sdot: Vec<Complex64>,
    cfg: &ModelConfig,
) -> Result<PropagatorTrajectory> {
    if s.len() != sdot.len() {
        return Err(Error::Usage(format!(
            "s has {} samples but sdot has {}",
            s.len(),
            sdot.len()
        )));
    }
    let times: Vec<f64> = (0..s.len()).map(|k| k as f64 * cfg.dt()).collect();
    let c: Vec<Complex64> = times.iter().map(|&t| cfg.relative_amplitude(t)).collect();
    let u = c.iter().zip(&s).map(|(c, s)| 0.5 * (c + s)).collect();
    let v = c.iter().zip(&s).map(|(c, s)| 0.5 * (c - s)).collect();
    Ok(PropagatorTrajectory {
        config: *cfg,
        times,
        s,
        sdot: Some(sdot),
        c,
        u,
        v,
    })
}

/// Solve and assemble in one go.
pub fn solve_trajectory(sd: &SpectralDensity, cfg: &ModelConfig) -> Result<PropagatorTrajectory> {
    let sol = solve_center_amplitude(sd, cfg)?;
    assemble_trajectory(sol.s, sol.sdot, cfg)
}

/// Integrate the coupled `u`, `v` equations without using the
/// centre/relative split (cross-check for the decoupled solver).
///
/// With `α₁ = u`, `α₂ = -v` the amplitude equations read
/// `u̇ = -iω₀u + iκv - J`, `v̇ = iκu - iω₀v + J`, `J = ∫ μ(t-τ)(u - v)(τ) dτ`.
pub fn solve_uv_direct(
    sd: &SpectralDensity,
    cfg: &ModelConfig,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_stored_len(cfg)?;
    let n = cfg.steps();
    let mut history: Box<dyn MemoryHistory> = if sd.is_decoupled() {
        Box::new(NoMemory)
    } else {
        match cfg.memory() {
            MemoryScheme::Direct => {
                Box::new(DirectHistory::new(&KernelTable::build(sd, cfg.dt(), n.max(1))?))
            }
            MemoryScheme::ExponentialSum => Box::new(ExponentialHistory::new(
                &ExponentialSum::fit(sd, cfg.t_max()),
                cfg.dt(),
            )),
        }
    };
    let dt = cfg.dt();
    let phase = Complex64::from_polar(1.0, -OMEGA0 * dt);
    let (sin, cos) = (cfg.kappa() * dt).sin_cos();
    let diag = phase * cos;
    let off = phase * Complex64::new(0.0, sin);
    let rotate = |u: Complex64, v: Complex64| (diag * u + off * v, off * u + diag * v);

    let mut u = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    let (mut uk, mut vk) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    u.push(uk);
    v.push(vk);
    history.push(uk - vk);
    let mut mem = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let pending = history.pending();
        let own = history.self_weight();
        let (ru, rv) = rotate(uk, vk);
        let (fu, fv) = rotate(-mem, mem);
        let au = ru + 0.5 * dt * fu;
        let av = rv + 0.5 * dt * fv;
        // u - v carries the whole memory term; solve for it, then split.
        let d = (au - av - dt * pending) / (1.0 + dt * own);
        let mem_next = own * d + pending;
        let nu = au - 0.5 * dt * mem_next;
        let nv = av + 0.5 * dt * mem_next;
        if !(nu.re.is_finite() && nu.im.is_finite() && nv.re.is_finite() && nv.im.is_finite())
            || nu.norm().max(nv.norm()) > DIVERGENCE_BOUND
        {
            return Err(Error::Divergence {
                step: k + 1,
                time: (k + 1) as f64 * dt,
            });
        }
        mem = mem_next;
        history.push(nu - nv);
        uk = nu;
        vk = nv;
        u.push(uk);
        v.push(vk);
    }
    Ok((u, v))
}

/// Result of re-solving on a grid twice as coarse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub fine_dt: f64,
    pub coarse_dt: f64,
    /// `max_k |s_dt(t_k) - s_2dt(t_k)|` over the shared grid points.
    pub coarse_fine_difference: f64,
    /// Second-order extrapolation of the change a further halving would make.
    pub estimated_halving_change: f64,
    pub tolerance: f64,
    pub converged: bool,
}

/// Sup-norm change in `s` permitted when the step is halved.
pub const HALVING_TOLERANCE: f64 = 1e-5;

/// Compare `s` on the configured grid with a solve at twice the step.
pub fn halving_check(
    sd: &SpectralDensity,
    cfg: &ModelConfig,
    fine: &[Complex64],
) -> Result<ConvergenceReport> {
    let coarse_steps = cfg.steps() / 2;
    let coarse_dt = 2.0 * cfg.dt();
    let coarse_cfg = ModelConfig::new(cfg.kappa(), coarse_steps.max(1) as f64 * coarse_dt, coarse_dt)?
        .with_memory(cfg.memory());
    let coarse = solve_center_amplitude(sd, &coarse_cfg)?;
    let diff = coarse
        .s
        .iter()
        .enumerate()
        .filter_map(|(j, cs)| fine.get(2 * j).map(|fs| (fs - cs).norm()))
        .fold(0.0, f64::max);
    let estimate = diff / 4.0;
    Ok(ConvergenceReport {
        fine_dt: cfg.dt(),
        coarse_dt,
        coarse_fine_difference: diff,
        estimated_halving_change: estimate,
        tolerance: HALVING_TOLERANCE,
        converged: estimate < HALVING_TOLERANCE,
    })
}
