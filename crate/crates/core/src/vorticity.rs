//! Constant-vorticity paths.
//!
//! In the moving frame `X = 2π(x − t)`, `Z = z` the system is autonomous:
//!
//! ```text
//! X' = 2π cos X + 2πΩZ + 2π(c0 − 1),   Z' = 2πZ sin X,
//! X'' = 4π² sin X (1 − c0 − cos X).
//! ```
//!
//! With `y = cot(X/2)` the phase equation has the first integral
//! `(y')² = 𝒞(y²+1)² − 4π²c0(y²+1) + 4π²`, equivalently
//! `E(X, X') = X'²/4 + 2π²c0·s − π²s² = 𝒞` with `s = 1 − cos X`.
//! Orbits are integrated in `X`, which has no poles.

use serde::{Deserialize, Serialize};

use crate::elliptic::{legendre_reduce_general, legendre_reduce_zero_current};
use crate::error::{Error, Result};
use crate::model::{stepped_times, Branch, FlowConfig, ParticleState, Sample, Trajectory};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::{lit, Real};

/// Position in the frame moving with the wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovingFrameState<T> {
    /// `X = 2π(x − t)`, unwrapped.
    pub x_phase: T,
    pub z: T,
}

impl<T: Real> MovingFrameState<T> {
    pub fn from_lab(x: T, z: T, t: T) -> Self {
        Self {
            x_phase: T::two_pi() * (x - t),
            z,
        }
    }

    /// `(X', Z')` of the moving-frame system.
    pub fn rate(&self, config: &FlowConfig<T>) -> (T, T) {
        let tp = T::two_pi();
        let (s, c) = self.x_phase.sin_cos();
        (
            tp * (c + config.shear * self.z + config.c0 - T::one()),
            tp * self.z * s,
        )
    }
}

/// `y = cot(X/2)` and `y'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShearState<T> {
    pub y: T,
    pub y_prime: T,
}

impl<T: Real> ShearState<T> {
    /// From `(X, X')` using `y' = −(y²+1)X'/2`. Infinite at `X ≡ 0 (mod 2π)`.
    pub fn from_phase(x_phase: T, x_rate: T) -> Self {
        let y = T::one() / (x_phase * lit(0.5)).tan();
        Self {
            y,
            y_prime: -(y * y + T::one()) * x_rate * lit(0.5),
        }
    }
}

/// First integral of the phase equation at given initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstIntegral<T> {
    /// `𝒞` (`A²` when `c0 = 0`).
    pub c: T,
    pub c0: T,
    /// Sign of `y'` along the orbit; `None` when it cannot be decided.
    pub branch: Option<Branch>,
    /// `𝒞 > π²c0²`: `y'` never vanishes.
    pub condition_met: bool,
    /// `y'(0) = 0`; the branch came from `y''(0)` or is undecided.
    pub degenerate: bool,
}

impl<T: Real> FirstIntegral<T> {
    pub fn a_squared(&self) -> Option<T> {
        (self.c0 == T::zero()).then_some(self.c)
    }

    /// `π²c0²`, the threshold of `condition_met`.
    pub fn bound(&self) -> T {
        let pi = T::PI();
        pi * pi * self.c0 * self.c0
    }

    /// `(y')² − 𝒞(y²+1)² + 4π²c0(y²+1) − 4π²`.
    pub fn residual(&self, state: &ShearState<T>) -> T {
        state.y_prime * state.y_prime - crate::elliptic::quartic(self.c, self.c0, state.y)
    }

    /// `E(X, X') − 𝒞`; equals the residual divided by `(y²+1)²` and stays
    /// finite across the poles of `y`.
    pub fn phase_residual(&self, x_phase: T, x_rate: T) -> T {
        phase_energy(x_phase, x_rate, self.c0) - self.c
    }
}

/// `E(X, X') = X'²/4 + 2π²c0(1 − cos X) − π²(1 − cos X)²`.
pub fn phase_energy<T: Real>(x_phase: T, x_rate: T, c0: T) -> T {
    let pi2 = T::PI() * T::PI();
    let s = T::one() - x_phase.cos();
    x_rate * x_rate * lit(0.25) + lit::<T>(2.0) * pi2 * c0 * s - pi2 * s * s
}

/// `y(0) = cot(πx0)`, `y'(0) = π[2 − (Ωz0 + c0)(y(0)² + 1)]`.
pub fn initial_shear_state<T: Real>(
    config: &FlowConfig<T>,
    init: &ParticleState<T>,
) -> Result<ShearState<T>> {
    let y = init.cot_phase()?;
    let y_prime =
        T::PI() * (lit::<T>(2.0) - (config.shear * init.z0 + config.c0) * (y * y + T::one()));
    Ok(ShearState { y, y_prime })
}

/// `𝒞 = [y'(0)² + 4π²c0(y0²+1) − 4π²]/(y0²+1)²` with branch and condition.
pub fn first_integral<T: Real>(
    config: &FlowConfig<T>,
    init: &ParticleState<T>,
) -> Result<FirstIntegral<T>> {
    let st = initial_shear_state(config, init)?;
    let c0 = config.c0;
    let four_pi2 = lit::<T>(4.0) * T::PI() * T::PI();
    let w = st.y * st.y + T::one();
    let c = (st.y_prime * st.y_prime + four_pi2 * c0 * w - four_pi2) / (w * w);
    let pi = T::PI();
    let condition_met = c > pi * pi * c0 * c0;
    let scale = T::PI() * (lit::<T>(2.0) + ((config.shear * init.z0 + c0) * w).abs());
    let degenerate = st.y_prime.abs() <= lit::<T>(1e-12) * scale;
    let branch = if degenerate {
        // y'' = −(y²+1)X''/2 when y' = 0.
        let x_phase = T::two_pi() * init.x0;
        Branch::from_sign(-w * phase_ode_rhs(x_phase, c0))
    } else {
        Branch::from_sign(st.y_prime)
    };
    Ok(FirstIntegral {
        c,
        c0,
        branch,
        condition_met,
        degenerate,
    })
}

/// `X'' = 4π² sin X (1 − c0 − cos X)`.
pub fn phase_ode_rhs<T: Real>(x_phase: T, c0: T) -> T {
    let four_pi2 = lit::<T>(4.0) * T::PI() * T::PI();
    let (s, c) = x_phase.sin_cos();
    four_pi2 * s * (T::one() - c0 - c)
}

/// Maximum allowed `|E − 𝒞|` along an integrated orbit.
pub const RESIDUAL_LIMIT: f64 = 1e-6;
/// Maximum relative gap between the two height reconstructions.
pub const HEIGHT_AGREEMENT: f64 = 1e-6;
/// Number of step halvings tried before giving up.
pub const MAX_REFINEMENTS: u32 = 3;
/// Default step.
pub const DEFAULT_DT: f64 = 1e-4;

/// An integrated orbit with its diagnostics.
#[derive(Debug, Clone)]
pub struct OrbitRun<T> {
    pub trajectory: Trajectory<T>,
    /// Unwrapped `X` at each sample.
    pub phase: Vec<T>,
    /// `X'` at each sample.
    pub phase_rate: Vec<T>,
    /// `𝒞` from the moving-frame energy at `t = 0`.
    pub energy: T,
    /// `max |E − 𝒞|` over the run.
    pub max_residual: T,
    /// Largest relative gap between algebraic and quadrature heights
    /// (zero when `Ω` is too small for the algebraic route).
    pub height_mismatch: T,
    /// Internal step actually used.
    pub dt_used: T,
}

#[derive(Clone, Copy)]
struct PhaseState<T> {
    x: T,
    p: T,
    log_z: T,
}

fn phase_deriv<T: Real>(s: &PhaseState<T>, c0: T) -> PhaseState<T> {
    PhaseState {
        x: s.p,
        p: phase_ode_rhs(s.x, c0),
        log_z: T::two_pi() * s.x.sin(),
    }
}

fn rk4_step<T: Real>(s: &PhaseState<T>, h: T, c0: T) -> PhaseState<T> {
    let half = h * lit(0.5);
    let shift = |a: &PhaseState<T>, k: &PhaseState<T>, f: T| PhaseState {
        x: a.x + f * k.x,
        p: a.p + f * k.p,
        log_z: a.log_z + f * k.log_z,
    };
    let k1 = phase_deriv(s, c0);
    let k2 = phase_deriv(&shift(s, &k1, half), c0);
    let k3 = phase_deriv(&shift(s, &k2, half), c0);
    let k4 = phase_deriv(&shift(s, &k3, h), c0);
    let sixth = h / lit(6.0);
    PhaseState {
        x: s.x + sixth * (k1.x + lit::<T>(2.0) * (k2.x + k3.x) + k4.x),
        p: s.p + sixth * (k1.p + lit::<T>(2.0) * (k2.p + k3.p) + k4.p),
        log_z: s.log_z + sixth * (k1.log_z + lit::<T>(2.0) * (k2.log_z + k3.log_z) + k4.log_z),
    }
}

fn run_fixed<T: Real>(
    config: &FlowConfig<T>,
    init: &ParticleState<T>,
    times: &[T],
    substeps: usize,
) -> OrbitRun<T> {
    let start = MovingFrameState::from_lab(init.x0, init.z0, T::zero());
    let (p0, _) = start.rate(config);
    let c0 = config.c0;
    let energy = phase_energy(start.x_phase, p0, c0);
    let use_algebraic = config.shear.abs() > lit(1e-12);
    let tp = T::two_pi();
    let mut state = PhaseState {
        x: start.x_phase,
        p: p0,
        log_z: T::zero(),
    };
    let mut samples = Vec::with_capacity(times.len());
    let mut phase = Vec::with_capacity(times.len());
    let mut phase_rate = Vec::with_capacity(times.len());
    let mut max_residual = T::zero();
    let mut height_mismatch = T::zero();
    let mut t_prev = T::zero();
    let sub = T::from_usize(substeps).expect("substeps");
    for &t in times {
        if t > t_prev {
            let h = (t - t_prev) / sub;
            for _ in 0..substeps {
                state = rk4_step(&state, h, c0);
            }
            t_prev = t;
        }
        let z_quad = init.z0 * state.log_z.exp();
        let z = if use_algebraic {
            let z_alg = (state.p / tp - state.x.cos() - c0 + T::one()) / config.shear;
            height_mismatch = height_mismatch.max(((z_alg - z_quad) / z_quad).abs());
            z_alg
        } else {
            z_quad
        };
        let residual = (phase_energy(state.x, state.p, c0) - energy).abs();
        max_residual = max_residual.max(residual);
        samples.push(Sample::at(t, t + state.x / tp, z, config));
        phase.push(state.x);
        phase_rate.push(state.p);
    }
    let dt_used = times
        .get(1)
        .map(|&t1| (t1 - times[0]) / sub)
        .unwrap_or(T::zero());
    OrbitRun {
        trajectory: Trajectory::new(*config, *init, samples),
        phase,
        phase_rate,
        energy,
        max_residual,
        height_mismatch,
        dt_used,
    }
}

/// Integrates the orbit with fixed-step RK4 in `(X, X', ln Z)` and samples it
/// every `dt` on `[0, t_max]`.
///
/// The step is halved (up to [`MAX_REFINEMENTS`] times) while the energy
/// drift exceeds [`RESIDUAL_LIMIT`] or the two height reconstructions differ
/// by more than [`HEIGHT_AGREEMENT`].
pub fn integrate_orbit_detailed<T: Real>(
    config: &FlowConfig<T>,
    init: &ParticleState<T>,
    t_max: T,
    dt: T,
) -> Result<OrbitRun<T>> {
    let times = stepped_times(t_max, dt)?;
    let mut substeps = 1usize;
    let mut last = None;
    for _ in 0..=MAX_REFINEMENTS {
        let run = run_fixed(config, init, &times, substeps);
        let ok = run.max_residual <= lit(RESIDUAL_LIMIT)
            && run.height_mismatch <= lit(HEIGHT_AGREEMENT)
            && run
                .trajectory
                .samples
                .iter()
                .all(|s| s.z.is_finite() && s.x.is_finite());
        if ok {
            return Ok(run);
        }
        last = Some(run);
        substeps *= 2;
    }
    let run = last.expect("at least one attempt");
    Err(Error::StepTooLarge {
        residual: run.max_residual.max(run.height_mismatch).as_f64(),
        limit: RESIDUAL_LIMIT,
        dt: run.dt_used.as_f64(),
    })
}

/// [`integrate_orbit_detailed`] without the diagnostics.
pub fn integrate_orbit<T: Real>(
    config: &FlowConfig<T>,
    init: &ParticleState<T>,
    t_max: T,
    dt: T,
) -> Result<Trajectory<T>> {
    Ok(integrate_orbit_detailed(config, init, t_max, dt)?.trajectory)
}

/// The period computed by both routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodEstimate<T> {
    /// Quadrature value, used downstream.
    pub period: T,
    /// Complete elliptic integral value.
    pub elliptic: T,
}

/// Relative agreement required between the two period routes.
pub const PERIOD_AGREEMENT: f64 = 1e-8;

/// `∫_{−∞}^{∞} dy/√Q(y)` with `y = tan θ`:
/// `2∫₀^{π/2} dθ / √(𝒞 − 4π²c0 cos²θ + 4π² cos⁴θ)`.
pub fn orbit_period_quadrature<T: Real>(c: T, c0: T) -> Result<T> {
    let pi = T::PI();
    if !(c > pi * pi * c0 * c0) {
        return Err(Error::ConditionViolated {
            c: c.as_f64(),
            bound: (pi * pi * c0 * c0).as_f64(),
        });
    }
    let four_pi2 = lit::<T>(4.0) * pi * pi;
    let opts = QuadOptions {
        rel_tol: lit(1e-13),
        abs_tol: lit(1e-15),
        max_depth: 50,
    };
    // Completed square: no cancellation when 𝒞 sits just above π²c0².
    let gap = c - pi * pi * c0 * c0;
    let centre = c0 * lit(0.5);
    let half = integrate(
        |theta: T| {
            let d = theta.cos().powi(2) - centre;
            T::one() / (gap + four_pi2 * d * d).sqrt()
        },
        T::zero(),
        T::FRAC_PI_2(),
        opts,
    )?;
    Ok(half * lit(2.0))
}

/// The same period as `4·prefactor·K(k)` of the Legendre normal form.
pub fn orbit_period_elliptic<T: Real>(c: T, c0: T) -> Result<T> {
    let red = if c0 == T::zero() {
        legendre_reduce_zero_current(c)?
    } else {
        legendre_reduce_general(c, c0)?
    };
    red.full_traversal()
}

/// Time for `y` to traverse ℝ once (`X` to move by 2π), cross-checked between
/// quadrature and the elliptic route.
pub fn orbit_period<T: Real>(fi: &FirstIntegral<T>) -> Result<PeriodEstimate<T>> {
    if !fi.condition_met {
        return Err(Error::ConditionViolated {
            c: fi.c.as_f64(),
            bound: fi.bound().as_f64(),
        });
    }
    let period = orbit_period_quadrature(fi.c, fi.c0)?;
    let elliptic = orbit_period_elliptic(fi.c, fi.c0)?;
    let rel = ((period - elliptic) / period).abs();
    if rel > lit(PERIOD_AGREEMENT) {
        return Err(Error::MethodsDisagree {
            what: "orbit period".into(),
            a: period.as_f64(),
            b: elliptic.as_f64(),
        });
    }
    Ok(PeriodEstimate { period, elliptic })
}

/// Predicted drift per period, `T − branchSign`.
pub fn drift_identity<T: Real>(period: T, branch: Branch) -> T {
    period - branch.signum::<T>()
}

/// `x(t0 + T) − x(t0)` with `t0` the first sample time.
pub fn drift_per_period<T: Real>(trajectory: &Trajectory<T>, period: T) -> Result<T> {
    let (t0, t1) = trajectory.t_span().ok_or(Error::EmptyTrajectory)?;
    if t0 + period > t1 {
        return Err(Error::SpanTooShort(format!(
            "span {} shorter than period {period}",
            t1 - t0
        )));
    }
    let (xa, _) = trajectory.position_at(t0).expect("in span");
    let (xb, _) = trajectory.position_at(t0 + period).expect("in span");
    Ok(xb - xa)
}

/// Whether the drift is small enough to call the orbit closed.
pub fn is_closed_orbit_candidate<T: Real>(drift: T) -> bool {
    drift.abs() < lit(1e-9)
}
