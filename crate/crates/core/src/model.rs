//! Shared domain types and the linearized field solution.
//!
//! All quantities are dimensionless: lengths scaled by the undisturbed depth
//! (vertical) and the wavelength (horizontal), time by the wave period. The
//! free surface is the right-travelling wave `eta = cos(2*pi*(x - t))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Default gravitational acceleration used when only the shear is given.
pub const DEFAULT_G: f64 = 9.81;
/// Default undisturbed depth used when only the shear is given.
pub const DEFAULT_H0: f64 = 1.0;

/// Wave profile `f(s) = cos(2*pi*s)`.
#[inline]
pub fn wave<T: Real>(s: T) -> T {
    (T::two_pi() * s).cos()
}

/// Derivative `f'(s) = -2*pi*sin(2*pi*s)`.
#[inline]
pub fn wave_slope<T: Real>(s: T) -> T {
    -T::two_pi() * (T::two_pi() * s).sin()
}

/// Flow parameters. The dimensionless shear `Ω = ω0·√(g·h0)/g` is computed once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig<T> {
    pub c0: T,
    pub omega0: T,
    pub g: T,
    pub h0: T,
    pub shear: T,
}

impl<T: Real> FlowConfig<T> {
    /// Builds a configuration from physical vorticity, gravity and depth.
    pub fn from_physical(c0: T, omega0: T, g: T, h0: T) -> Result<Self> {
        if !(g > T::zero()) || !(h0 > T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "g and h0 must be positive (g = {g}, h0 = {h0})"
            )));
        }
        if !c0.is_finite() || !omega0.is_finite() || !g.is_finite() || !h0.is_finite() {
            return Err(Error::InvalidConfig("non-finite parameter".into()));
        }
        let shear = omega0 * (g * h0).sqrt() / g;
        Ok(Self {
            c0,
            omega0,
            g,
            h0,
            shear,
        })
    }

    /// Builds a configuration from the dimensionless shear directly, using the
    /// default gravity and depth to back out `omega0`.
    pub fn from_shear(c0: T, shear: T) -> Result<Self> {
        let g = lit::<T>(DEFAULT_G);
        let h0 = lit::<T>(DEFAULT_H0);
        if !c0.is_finite() || !shear.is_finite() {
            return Err(Error::InvalidConfig("non-finite parameter".into()));
        }
        Ok(Self {
            c0,
            omega0: shear * g / (g * h0).sqrt(),
            g,
            h0,
            shear,
        })
    }

    pub fn irrotational(c0: T) -> Self {
        Self::from_shear(c0, T::zero()).expect("finite c0")
    }

    #[inline]
    pub fn is_irrotational(&self) -> bool {
        self.shear == T::zero()
    }
}

/// Initial particle position `(x0, z0)` with `0 < z0 <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleState<T> {
    pub x0: T,
    pub z0: T,
}

impl<T: Real> ParticleState<T> {
    pub fn new(x0: T, z0: T) -> Result<Self> {
        if !x0.is_finite() || !z0.is_finite() {
            return Err(Error::InvalidState("non-finite initial data".into()));
        }
        if !(z0 > T::zero()) || z0 > T::one() {
            return Err(Error::InvalidState(format!("z0 = {z0} must lie in (0, 1]")));
        }
        Ok(Self { x0, z0 })
    }

    /// `cot(pi*x0)`, the initial value of the phase variable `y`.
    pub fn cot_phase(&self) -> Result<T> {
        crate::scalar::cot_pi(self.x0, lit(1e-12)).ok_or(Error::DegeneratePhase {
            x0: self.x0.as_f64(),
        })
    }
}

/// The linear solution evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample<T> {
    pub eta: T,
    pub p: T,
    pub u: T,
    pub v: T,
}

/// Free-surface elevation `cos(2*pi*(x - t))`.
pub fn surface_profile<T: Real>(x: T, t: T) -> T {
    wave(x - t)
}

/// Surface elevation, pressure and velocity of the linear solution.
///
/// `u = f(x-t) + Ω z + c0`, `v = -z f'(x-t)`, `eta = p = f(x-t)`. Pressure does
/// not depend on `z`. Heights above the undisturbed surface are accepted.
pub fn velocity_field<T: Real>(x: T, z: T, t: T, config: &FlowConfig<T>) -> FieldSample<T> {
    let phase = x - t;
    let eta = wave(phase);
    FieldSample {
        eta,
        p: eta,
        u: eta + config.shear * z + config.c0,
        v: -z * wave_slope(phase),
    }
}

/// One time sample of a particle path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample<T> {
    pub t: T,
    pub x: T,
    pub z: T,
    pub u: T,
    pub v: T,
}

impl<T: Real> Sample<T> {
    /// Sample at `(t, x, z)` with the velocity taken from the field solution.
    pub fn at(t: T, x: T, z: T, config: &FlowConfig<T>) -> Self {
        let f = velocity_field(x, z, t, config);
        Self {
            t,
            x,
            z,
            u: f.u,
            v: f.v,
        }
    }
}

/// Shape classes of particle paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    UndulatingRight,
    UndulatingLeft,
    LoopForwardDrift,
    LoopBackwardDrift,
    Peculiar,
    NonPhysicalUnboundedZ,
    NumericalFallback,
}

impl ClassKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassKind::UndulatingRight => "UndulatingRight",
            ClassKind::UndulatingLeft => "UndulatingLeft",
            ClassKind::LoopForwardDrift => "LoopForwardDrift",
            ClassKind::LoopBackwardDrift => "LoopBackwardDrift",
            ClassKind::Peculiar => "Peculiar",
            ClassKind::NonPhysicalUnboundedZ => "NonPhysicalUnboundedZ",
            ClassKind::NumericalFallback => "NumericalFallback",
        }
    }

    /// Sign the net drift per period must have for this class, if any.
    pub fn drift_sign(self) -> Option<i8> {
        match self {
            ClassKind::UndulatingRight | ClassKind::LoopForwardDrift => Some(1),
            ClassKind::UndulatingLeft | ClassKind::LoopBackwardDrift => Some(-1),
            _ => None,
        }
    }

    pub fn is_loop(self) -> bool {
        matches!(
            self,
            ClassKind::LoopForwardDrift | ClassKind::LoopBackwardDrift
        )
    }

    /// Loop class with the direction given by the sign of the drift.
    pub fn loop_with_drift(sign: i8) -> Self {
        if sign >= 0 {
            ClassKind::LoopForwardDrift
        } else {
            ClassKind::LoopBackwardDrift
        }
    }
}

impl std::fmt::Display for ClassKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ClassKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "UndulatingRight" => ClassKind::UndulatingRight,
            "UndulatingLeft" => ClassKind::UndulatingLeft,
            "LoopForwardDrift" => ClassKind::LoopForwardDrift,
            "LoopBackwardDrift" => ClassKind::LoopBackwardDrift,
            "Peculiar" => ClassKind::Peculiar,
            "NonPhysicalUnboundedZ" => ClassKind::NonPhysicalUnboundedZ,
            "NumericalFallback" => ClassKind::NumericalFallback,
            other => return Err(Error::InvalidArgument(format!("unknown class {other}"))),
        })
    }
}

/// Constant sign of `y'` along an orbit.
///
/// `Plus` (`y' > 0`) is the "−" alternative of `x'`; `Minus` is the "+" one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn from_sign<T: Real>(v: T) -> Option<Self> {
        if v > T::zero() {
            Some(Branch::Plus)
        } else if v < T::zero() {
            Some(Branch::Minus)
        } else {
            None
        }
    }

    pub fn signum<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }

    /// Name of the `x'` alternative selected by this branch.
    pub fn alternative(self) -> &'static str {
        match self {
            Branch::Plus => "-",
            Branch::Minus => "+",
        }
    }
}

/// Diagnostic flags attached to a classification.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFlags {
    /// Parameters sit on a threshold of the decision table.
    pub boundary: bool,
    /// A closed form degenerated and a numerical route was used instead.
    pub degenerate: bool,
    /// Net drift per period vanishes (closed orbit).
    pub closed_orbit_candidate: bool,
}

/// Result of a classification: the assigned class plus the case-tree label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryClass {
    /// Class of the path. Loop directions follow the sign of the drift per period.
    pub kind: ClassKind,
    /// Label the case analysis of the theorems attaches to this sub-case.
    pub theorem_label: ClassKind,
    pub branch: Option<Branch>,
    /// Sub-case of the decision tree, e.g. `"II b, W1-1<0<W2-1 (fig 7d)"`.
    pub sub_case: String,
    pub flags: ClassFlags,
    /// Empirical class from the ODE oracle, when a fallback was needed.
    pub empirical: Option<ClassKind>,
}

impl TrajectoryClass {
    pub fn simple(kind: ClassKind, sub_case: impl Into<String>) -> Self {
        Self {
            kind,
            theorem_label: kind,
            branch: None,
            sub_case: sub_case.into(),
            flags: ClassFlags::default(),
            empirical: None,
        }
    }
}

/// A time-sampled particle path with its metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub samples: Vec<Sample<T>>,
    pub config: FlowConfig<T>,
    pub init: ParticleState<T>,
    pub class: Option<TrajectoryClass>,
    pub period: Option<T>,
    pub drift: Option<T>,
    /// Set when the path leaves the undisturbed fluid layer (`z > 1`).
    pub exceeds_depth: bool,
}

impl<T: Real> Trajectory<T> {
    pub fn new(config: FlowConfig<T>, init: ParticleState<T>, samples: Vec<Sample<T>>) -> Self {
        let exceeds_depth = samples.iter().any(|s| s.z > T::one());
        Self {
            samples,
            config,
            init,
            class: None,
            period: None,
            drift: None,
            exceeds_depth,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t_span(&self) -> Option<(T, T)> {
        Some((self.samples.first()?.t, self.samples.last()?.t))
    }

    /// Position at time `t`, by cubic Hermite interpolation using the sampled
    /// velocities as slopes.
    pub fn position_at(&self, t: T) -> Option<(T, T)> {
        let (t0, t1) = self.t_span()?;
        if t < t0 || t > t1 {
            return None;
        }
        let i = self.samples.partition_point(|s| s.t <= t);
        let (a, b) = if i == 0 {
            (0, 1.min(self.samples.len() - 1))
        } else if i >= self.samples.len() {
            (self.samples.len().saturating_sub(2), self.samples.len() - 1)
        } else {
            (i - 1, i)
        };
        let (sa, sb) = (&self.samples[a], &self.samples[b]);
        if a == b {
            return Some((sa.x, sa.z));
        }
        let x = crate::scalar::hermite(sa.t, sa.x, sa.u, sb.t, sb.x, sb.u, t);
        let z = crate::scalar::hermite(sa.t, sa.z, sa.v, sb.t, sb.z, sb.v, t);
        Some((x, z))
    }

    /// Checks the structural invariants: increasing time, positive height.
    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        for w in self.samples.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidState(format!(
                    "time not strictly increasing at t = {}",
                    w[1].t
                )));
            }
        }
        if let Some(s) = self.samples.iter().find(|s| !(s.z > T::zero())) {
            return Err(Error::InvalidState(format!("z = {} at t = {}", s.z, s.t)));
        }
        Ok(())
    }
}

/// Uniform sample times `t0, ..., t1` (inclusive), `n >= 2`.
pub fn uniform_times<T: Real>(t0: T, t1: T, n: usize) -> Result<Vec<T>> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    if !(t1 > t0) {
        return Err(Error::InvalidArgument(format!(
            "empty time range [{t0}, {t1}]"
        )));
    }
    let h = (t1 - t0) / T::from_usize(n - 1).expect("sample count");
    Ok((0..n)
        .map(|i| {
            if i + 1 == n {
                t1
            } else {
                t0 + h * T::from_usize(i).expect("index")
            }
        })
        .collect())
}

/// Sample times `0, dt, 2dt, ...` up to `t_max` (the last one clamped to `t_max`).
pub fn stepped_times<T: Real>(t_max: T, dt: T) -> Result<Vec<T>> {
    if !(dt > T::zero()) || !(t_max > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "t_max = {t_max} and dt = {dt} must be positive"
        )));
    }
    let steps = (t_max / dt - lit(1e-9))
        .ceil()
        .to_usize()
        .unwrap_or(0)
        .max(1);
    Ok((0..=steps)
        .map(|i| {
            let t = dt * T::from_usize(i).expect("index");
            if t > t_max {
                t_max
            } else {
                t
            }
        })
        .collect())
}
