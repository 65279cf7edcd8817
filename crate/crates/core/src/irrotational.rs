//! Exact particle paths for the irrotational flow (`Ω = 0`).
//!
//! In terms of `y = cot(X/2)`, `X = 2π(x − t)`, the phase obeys the Riccati
//! equation `y' = π[(2 − c0) − c0·y²]`, solved by
//!
//! * `c0 = 0`: `y = 2πt + a`;
//! * `c0(c0 − 2) > 0`: `y = 𝔠0·tan α(t)`, `α(t) = −(c0𝔠0/2)(2πt + a)`;
//! * `0 < c0 < 2`: `y = 𝔎0·tanh β(t)` or `y = 𝔎0·coth β(t)`,
//!   `β(t) = (c0𝔎0/2)(2πt + a)`, depending on `|y(0)|` versus `𝔎0`.
//!
//! Then `x = t + arccot(y)/π` (unwrapped across the poles of `y`) and
//! `z = z0·exp(∫₀ᵗ 4πy/(1+y²) ds)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    uniform_times, ClassFlags, ClassKind, FlowConfig, ParticleState, Sample, Trajectory,
    TrajectoryClass,
};
use crate::quadrature::{integrate_split, QuadOptions};
use crate::scalar::{arccot, lifted_atan_tan, lit, Real};

/// Sub-case of the irrotational analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrrotationalCase {
    ZeroCurrent,
    /// `c0(c0 − 2) > 0`.
    OutsideBand,
    /// `0 < c0 <= 2`.
    InsideBand,
}

/// Which closed form applies inside the band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InsideBranch {
    /// `|cot(X/2)| < 𝔎0`.
    Tanh,
    /// `|cot(X/2)| > 𝔎0`.
    Coth,
}

/// Constants of the closed-form solution for one initial condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrrotationalCaseParams<T> {
    pub case: IrrotationalCase,
    /// `y(0) = cot(π x0)`.
    pub y0: T,
    /// Phase constant `a` of `2πt + a`, fixed by `y(0)`.
    pub a: T,
    /// `𝔠0 = √((c0 − 2)/c0)` outside the band.
    pub c_frak: Option<T>,
    /// `𝔎0 = √((2 − c0)/c0)` inside the band.
    pub k_frak: Option<T>,
    pub inside_branch: Option<InsideBranch>,
    pub c0: T,
}

impl<T: Real> IrrotationalCaseParams<T> {
    pub fn alpha(&self, t: T) -> Option<T> {
        let c = self.c_frak?;
        Some(-(self.c0 * c * lit(0.5)) * (T::two_pi() * t + self.a))
    }

    pub fn beta(&self, t: T) -> Option<T> {
        let k = self.k_frak?;
        Some(self.c0 * k * lit(0.5) * (T::two_pi() * t + self.a))
    }

    /// Continuous lift of `X(t)/2`, its time derivative, and `y(t)`.
    fn half_phase(&self, t: T) -> (T, T, T) {
        let pi = T::PI();
        match self.case {
            IrrotationalCase::ZeroCurrent => {
                let y = T::two_pi() * t + self.a;
                (arccot(y), -pi * lit(2.0) / (T::one() + y * y), y)
            }
            IrrotationalCase::OutsideBand => {
                let c = self.c_frak.expect("outside band constant");
                let alpha = self.alpha(t).expect("outside band");
                let (s, co) = alpha.sin_cos();
                let lift = lifted_atan_tan(c, alpha);
                let dalpha = -pi * self.c0 * c;
                let rate = c / (co * co + c * c * s * s) * dalpha;
                (pi * lit(0.5) - lift, -rate, c * alpha.tan())
            }
            IrrotationalCase::InsideBand => {
                let k = self.k_frak.expect("inside band constant");
                let beta = self.beta(t).expect("inside band");
                let th = beta.tanh();
                let sech2 = T::one() - th * th;
                let dbeta = pi * self.c0 * k;
                match self.inside_branch.expect("branch chosen") {
                    InsideBranch::Tanh => {
                        let y = k * th;
                        (arccot(y), -k * sech2 * dbeta / (T::one() + y * y), y)
                    }
                    InsideBranch::Coth => {
                        let lifted = th.atan2(k);
                        let rate = k * sech2 * dbeta / (k * k + th * th);
                        (lifted, rate, k / th)
                    }
                }
            }
        }
    }

    /// `d ln z / dt = 4πy/(1+y²)`, written without the poles of `y`.
    pub fn log_height_rate(&self, t: T) -> T {
        let four_pi = lit::<T>(4.0) * T::PI();
        match self.case {
            IrrotationalCase::ZeroCurrent => {
                let y = T::two_pi() * t + self.a;
                four_pi * y / (T::one() + y * y)
            }
            IrrotationalCase::OutsideBand => {
                let c = self.c_frak.expect("outside band constant");
                let (s, co) = self.alpha(t).expect("outside band").sin_cos();
                four_pi * c * s * co / (co * co + c * c * s * s)
            }
            IrrotationalCase::InsideBand => {
                let k = self.k_frak.expect("inside band constant");
                let th = self.beta(t).expect("inside band").tanh();
                match self.inside_branch.expect("branch chosen") {
                    InsideBranch::Tanh => four_pi * k * th / (T::one() + k * k * th * th),
                    InsideBranch::Coth => four_pi * k * th / (th * th + k * k),
                }
            }
        }
    }

    /// Times in `(lo, hi)` where `y` has a pole (tan/coth singularities).
    fn poles_between(&self, lo: T, hi: T) -> Vec<T> {
        match self.case {
            IrrotationalCase::OutsideBand => {
                let c = self.c_frak.expect("outside band constant");
                let speed = -T::PI() * self.c0 * c;
                let (a_lo, a_hi) = {
                    let p = self.alpha(lo).expect("outside band");
                    let q = self.alpha(hi).expect("outside band");
                    if p < q {
                        (p, q)
                    } else {
                        (q, p)
                    }
                };
                let alpha0 = self.alpha(T::zero()).expect("outside band");
                let first = ((a_lo - T::FRAC_PI_2()) / T::PI()).ceil();
                let last = ((a_hi - T::FRAC_PI_2()) / T::PI()).floor();
                let mut out = Vec::new();
                let mut j = first;
                while j <= last && out.len() < 100_000 {
                    let alpha = T::FRAC_PI_2() + j * T::PI();
                    out.push((alpha - alpha0) / speed);
                    j = j + T::one();
                }
                out
            }
            IrrotationalCase::InsideBand if self.inside_branch == Some(InsideBranch::Coth) => {
                let t_pole = -self.a / T::two_pi();
                if t_pole > lo && t_pole < hi {
                    vec![t_pole]
                } else {
                    Vec::new()
                }
            }
            _ => Vec::new(),
        }
    }
}

/// Derives the case constants for `(config, init)`.
pub fn case_params<T: Real>(
    config: &FlowConfig<T>,
    init: &ParticleState<T>,
) -> Result<IrrotationalCaseParams<T>> {
    if !config.is_irrotational() {
        return Err(Error::WrongCase(format!(
            "irrotational closed forms need shear = 0 (got {})",
            config.shear
        )));
    }
    let c0 = config.c0;
    let y0 = init.cot_phase()?;
    let two = lit::<T>(2.0);
    if c0 == T::zero() {
        return Ok(IrrotationalCaseParams {
            case: IrrotationalCase::ZeroCurrent,
            y0,
            a: y0,
            c_frak: None,
            k_frak: None,
            inside_branch: None,
            c0,
        });
    }
    if c0 * (c0 - two) > T::zero() {
        let c = ((c0 - two) / c0).sqrt();
        let alpha0 = (y0 / c).atan();
        return Ok(IrrotationalCaseParams {
            case: IrrotationalCase::OutsideBand,
            y0,
            a: -two * alpha0 / (c0 * c),
            c_frak: Some(c),
            k_frak: None,
            inside_branch: None,
            c0,
        });
    }
    let k = ((two - c0) / c0).sqrt();
    if k == T::zero() {
        return Err(Error::WrongCase(
            "c0 = 2: the tanh/coth closed form degenerates".into(),
        ));
    }
    let gap = y0.abs() - k;
    if gap.abs() <= lit(1e-12) {
        return Err(Error::BranchBoundary {
            cot: y0.as_f64(),
            k0: k.as_f64(),
        });
    }
    let (branch, beta0) = if gap < T::zero() {
        (InsideBranch::Tanh, (y0 / k).atanh())
    } else {
        (InsideBranch::Coth, (k / y0).atanh())
    };
    Ok(IrrotationalCaseParams {
        case: IrrotationalCase::InsideBand,
        y0,
        a: two * beta0 / (c0 * k),
        c_frak: None,
        k_frak: Some(k),
        inside_branch: Some(branch),
        c0,
    })
}

/// Closed-form path evaluator.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm<T> {
    pub params: IrrotationalCaseParams<T>,
    pub init: ParticleState<T>,
    half_phase0: T,
}

impl<T: Real> ClosedForm<T> {
    pub fn new(config: &FlowConfig<T>, init: &ParticleState<T>) -> Result<Self> {
        let params = case_params(config, init)?;
        let half_phase0 = params.half_phase(T::zero()).0;
        Ok(Self {
            params,
            init: *init,
            half_phase0,
        })
    }

    /// `x(t) = t + arccot(y(t))/π`, anchored so that `x(0) = x0`.
    pub fn x(&self, t: T) -> T {
        let (h, _, _) = self.params.half_phase(t);
        self.init.x0 + t + (h - self.half_phase0) / T::PI()
    }

    /// Closed-form `dx/dt`.
    pub fn x_rate(&self, t: T) -> T {
        T::one() + self.params.half_phase(t).1 / T::PI()
    }

    /// `y(t) = cot(X/2)`.
    pub fn y(&self, t: T) -> T {
        self.params.half_phase(t).2
    }

    /// `d ln z / dt`.
    pub fn log_height_rate(&self, t: T) -> T {
        self.params.log_height_rate(t)
    }

    /// `ln(z(t1)/z(t0))` by quadrature (exact for zero current).
    pub fn log_height_increment(&self, t0: T, t1: T, opts: QuadOptions<T>) -> Result<T> {
        if self.params.case == IrrotationalCase::ZeroCurrent {
            let y0 = T::two_pi() * t0 + self.params.a;
            let y1 = T::two_pi() * t1 + self.params.a;
            return Ok(((T::one() + y1 * y1) / (T::one() + y0 * y0)).ln());
        }
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let breaks = self.params.poles_between(lo, hi);
        integrate_split(|s| self.log_height_rate(s), t0, t1, &breaks, opts)
    }

    /// `z(t)`; zero current uses `z0[1+(2πt+a)²]/(1+a²)` directly.
    pub fn z(&self, t: T) -> Result<T> {
        if self.params.case == IrrotationalCase::ZeroCurrent {
            let a = self.params.a;
            let y = T::two_pi() * t + a;
            return Ok(self.init.z0 * (T::one() + y * y) / (T::one() + a * a));
        }
        Ok(self.init.z0 * self.log_height_increment(T::zero(), t, quad_opts())?.exp())
    }

    /// Samples the path at the given increasing times.
    pub fn sample(&self, config: &FlowConfig<T>, times: &[T]) -> Result<Vec<Sample<T>>> {
        let mut out = Vec::with_capacity(times.len());
        let opts = quad_opts();
        let mut prev_t = T::zero();
        let mut log_z = T::zero();
        for &t in times {
            let z = if self.params.case == IrrotationalCase::ZeroCurrent {
                self.z(t)?
            } else {
                log_z = log_z + self.log_height_increment(prev_t, t, opts)?;
                prev_t = t;
                self.init.z0 * log_z.exp()
            };
            out.push(Sample::at(t, self.x(t), z, config));
        }
        Ok(out)
    }
}

fn quad_opts<T: Real>() -> QuadOptions<T> {
    QuadOptions {
        rel_tol: lit(1e-12),
        abs_tol: lit(1e-14),
        max_depth: 48,
    }
}

fn build<T: Real>(
    config: FlowConfig<T>,
    init: ParticleState<T>,
    t_range: (T, T),
    n_samples: usize,
) -> Result<(ClosedForm<T>, Trajectory<T>)> {
    let times = uniform_times(t_range.0, t_range.1, n_samples)?;
    let form = ClosedForm::new(&config, &init)?;
    let samples = form.sample(&config, &times)?;
    let mut traj = Trajectory::new(config, init, samples);
    traj.class = Some(classify_irrotational(config.c0));
    if let Some((period, drift)) = irrotational_period(config.c0) {
        traj.period = Some(period);
        traj.drift = Some(drift);
    }
    Ok((form, traj))
}

/// Path for zero current; `z` grows quadratically without bound.
pub fn trajectory_zero_current<T: Real>(
    init: ParticleState<T>,
    t_range: (T, T),
    n_samples: usize,
) -> Result<Trajectory<T>> {
    Ok(build(
        FlowConfig::irrotational(T::zero()),
        init,
        t_range,
        n_samples,
    )?
    .1)
}

/// Path for `c0(c0 − 2) > 0`.
pub fn trajectory_outside_band<T: Real>(
    config: FlowConfig<T>,
    init: ParticleState<T>,
    t_range: (T, T),
    n_samples: usize,
) -> Result<Trajectory<T>> {
    let two = lit::<T>(2.0);
    if !config.is_irrotational() || !(config.c0 * (config.c0 - two) > T::zero()) {
        return Err(Error::WrongCase(format!(
            "outside-band form needs shear = 0 and c0(c0-2) > 0 (c0 = {})",
            config.c0
        )));
    }
    Ok(build(config, init, t_range, n_samples)?.1)
}

/// Path for `0 < c0 <= 2`. At `c0 = 2` the tanh/coth form degenerates and the
/// path comes from the ODE oracle with the `degenerate` flag set.
pub fn trajectory_inside_band<T: Real>(
    config: FlowConfig<T>,
    init: ParticleState<T>,
    t_range: (T, T),
    n_samples: usize,
) -> Result<Trajectory<T>> {
    let two = lit::<T>(2.0);
    if !config.is_irrotational() || !(config.c0 > T::zero() && config.c0 <= two) {
        return Err(Error::WrongCase(format!(
            "inside-band form needs shear = 0 and 0 < c0 <= 2 (c0 = {})",
            config.c0
        )));
    }
    if config.c0 == two {
        init.cot_phase()?;
        let times = uniform_times(t_range.0, t_range.1, n_samples)?;
        let mut traj = crate::oracle::integrate_raw_at(&config, &init, &times, lit(1e-11))?;
        let mut class = classify_irrotational(config.c0);
        class.flags.degenerate = true;
        traj.class = Some(class);
        return Ok(traj);
    }
    Ok(build(config, init, t_range, n_samples)?.1)
}

/// Closed-form path for any irrotational configuration.
pub fn trajectory_irrotational<T: Real>(
    config: FlowConfig<T>,
    init: ParticleState<T>,
    t_range: (T, T),
    n_samples: usize,
) -> Result<Trajectory<T>> {
    let c0 = config.c0;
    if c0 == T::zero() {
        if !config.is_irrotational() {
            return Err(Error::WrongCase("shear must vanish".into()));
        }
        trajectory_zero_current(init, t_range, n_samples)
    } else if c0 > T::zero() && c0 <= lit(2.0) {
        trajectory_inside_band(config, init, t_range, n_samples)
    } else {
        trajectory_outside_band(config, init, t_range, n_samples)
    }
}

/// Time for the phase to advance by 2π and the drift per period,
/// for `c0(c0 − 2) > 0` (`T = 1/√((c0−1)² − 1)`, drift `T ± 1`).
pub fn irrotational_period<T: Real>(c0: T) -> Option<(T, T)> {
    let two = lit::<T>(2.0);
    if !(c0 * (c0 - two) > T::zero()) {
        return None;
    }
    let d = c0 - T::one();
    let period = T::one() / (d * d - T::one()).sqrt();
    let drift = if c0 > two {
        period + T::one()
    } else {
        period - T::one()
    };
    Some((period, drift))
}

/// Class of the irrotational path as a function of the current strength.
///
/// `theorem_label` follows the stated thresholds (`c0 > 2`, `c0 < −1`,
/// `−1 <= c0 < 0`, `0 <= c0 <= 2`); `kind` additionally resolves the loop
/// direction from the drift `T − 1`, which changes sign at `c0 = 1 − √2`.
/// The thresholds `c0 = −1` and `c0 = 2` carry the boundary flag.
pub fn classify_irrotational<T: Real>(c0: T) -> TrajectoryClass {
    let two = lit::<T>(2.0);
    let minus_one = -T::one();
    let mut flags = ClassFlags::default();
    let (label, sub_case) = if c0 > two {
        (ClassKind::UndulatingRight, "c0>2")
    } else if c0 < minus_one {
        (ClassKind::UndulatingLeft, "c0<-1")
    } else if c0 < T::zero() {
        flags.boundary = c0 == minus_one;
        (
            ClassKind::LoopForwardDrift,
            if flags.boundary { "c0=-1" } else { "-1<c0<0" },
        )
    } else {
        flags.boundary = c0 == two;
        (
            ClassKind::NonPhysicalUnboundedZ,
            if c0 == T::zero() {
                "c0=0"
            } else if flags.boundary {
                "c0=2"
            } else {
                "0<c0<2"
            },
        )
    };
    let mut kind = label;
    if label == ClassKind::LoopForwardDrift && !flags.boundary {
        if let Some((_, drift)) = irrotational_period(c0) {
            if drift.abs() <= lit(1e-12) {
                flags.closed_orbit_candidate = true;
            } else {
                kind = ClassKind::loop_with_drift(if drift > T::zero() { 1 } else { -1 });
            }
        }
    }
    TrajectoryClass {
        kind,
        theorem_label: label,
        branch: None,
        sub_case: sub_case.to_string(),
        flags,
        empirical: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn st(x0: f64, z0: f64) -> ParticleState<f64> {
        ParticleState::new(x0, z0).unwrap()
    }

    #[test]
    fn zero_current_examples() {
        let tr = trajectory_zero_current(st(0.5, 0.5), (0.0, 1.0), 11).unwrap();
        let first = tr.samples[0];
        assert!((first.x - 0.5).abs() < 1e-15 && (first.z - 0.5).abs() < 1e-15);
        let last = tr.samples[10];
        assert!((last.x - (1.0 + arccot(2.0 * PI) / PI)).abs() < 1e-14);
        assert!((last.z - 0.5 * (1.0 + 4.0 * PI * PI)).abs() < 1e-12);
        assert_eq!(tr.class.unwrap().kind, ClassKind::NonPhysicalUnboundedZ);
    }

    #[test]
    fn zero_current_symmetry() {
        let form = ClosedForm::new(&FlowConfig::irrotational(0.0), &st(0.3, 0.4)).unwrap();
        let a = form.params.a;
        for t in [0.1, 0.7, 2.0] {
            let mirror = (-(2.0 * PI * t + a) - a) / (2.0 * PI);
            assert!((form.z(t).unwrap() - form.z(mirror).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn integer_x0_is_degenerate() {
        let r = trajectory_zero_current(st(1.0, 0.5), (0.0, 1.0), 3);
        assert!(matches!(r, Err(Error::DegeneratePhase { .. })));
    }

    #[test]
    fn inside_band_branch_selection() {
        let k = 1.0_f64; // c0 = 1
        let x0 = (1.0 / (2.0 * k)).atan() / PI; // cot(pi x0) = 2k
        let form = ClosedForm::new(&FlowConfig::irrotational(1.0), &st(x0, 0.5)).unwrap();
        assert_eq!(form.params.inside_branch, Some(InsideBranch::Coth));
        let form = ClosedForm::new(&FlowConfig::irrotational(1.0), &st(0.5, 0.5)).unwrap();
        assert_eq!(form.params.inside_branch, Some(InsideBranch::Tanh));
        let tr =
            trajectory_inside_band(FlowConfig::irrotational(1.0), st(0.5, 0.5), (0.0, 2.0), 201)
                .unwrap();
        assert!(tr.samples.windows(2).all(|w| w[1].z > w[0].z));
    }

    #[test]
    fn separatrix_is_rejected() {
        let x0 = 0.25; // cot = 1 = K0 at c0 = 1
        let r = trajectory_inside_band(FlowConfig::irrotational(1.0), st(x0, 0.5), (0.0, 1.0), 3);
        assert!(matches!(r, Err(Error::BranchBoundary { .. })));
    }

    #[test]
    fn c0_two_falls_back() {
        let tr =
            trajectory_inside_band(FlowConfig::irrotational(2.0), st(0.5, 0.5), (0.0, 1.0), 11)
                .unwrap();
        assert!(tr.class.unwrap().flags.degenerate);
        assert!((tr.samples[0].x - 0.5).abs() < 1e-15);
    }

    #[test]
    fn outside_band_continuity() {
        for c0 in [3.0, -2.0, -0.5] {
            let tr = trajectory_outside_band(
                FlowConfig::irrotational(c0),
                st(0.37, 0.5),
                (0.0, 4.0),
                4001,
            )
            .unwrap();
            for w in tr.samples.windows(2) {
                assert!((w[1].x - w[0].x).abs() < 0.02, "jump at t = {}", w[0].t);
            }
            assert!(tr.samples.iter().all(|s| s.z > 0.0));
        }
    }

    #[test]
    fn closed_form_satisfies_ode() {
        for (c0, x0) in [
            (0.0, 0.3),
            (3.0, 0.2),
            (-2.0, 0.6),
            (-0.5, 0.5),
            (1.0, 0.45),
            (1.0, 0.1),
            (0.4, 0.93),
        ] {
            let cfg = FlowConfig::irrotational(c0);
            let form = ClosedForm::new(&cfg, &st(x0, 0.5)).unwrap();
            for i in 0..200 {
                let t = i as f64 * 0.01;
                let x = form.x(t);
                let z = form.z(t).unwrap();
                let rhs = crate::model::velocity_field(x, z, t, &cfg);
                assert!((form.x_rate(t) - rhs.u).abs() < 1e-9, "c0 {c0} t {t}");
                assert!((z * form.log_height_rate(t) - rhs.v).abs() < 1e-9 * z.max(1.0));
            }
        }
    }

    #[test]
    fn theorem_one_labels() {
        let k = |c0: f64| classify_irrotational(c0);
        assert_eq!(k(2.5).kind, ClassKind::UndulatingRight);
        assert_eq!(k(3.0).kind, ClassKind::UndulatingRight);
        assert_eq!(k(-2.0).kind, ClassKind::UndulatingLeft);
        assert_eq!(k(0.0).kind, ClassKind::NonPhysicalUnboundedZ);
        assert_eq!(k(1.0).kind, ClassKind::NonPhysicalUnboundedZ);
        assert_eq!(k(-0.5).theorem_label, ClassKind::LoopForwardDrift);
        assert_eq!(k(-0.1).kind, ClassKind::LoopForwardDrift);
        // T = 1/sqrt(1.25) < 1: the loops drift backward.
        assert_eq!(k(-0.5).kind, ClassKind::LoopBackwardDrift);
        let b = k(-1.0);
        assert!(b.flags.boundary);
        assert_eq!(b.kind, ClassKind::LoopForwardDrift);
        assert!(k(2.0).flags.boundary);
        assert!(k(1.0 - 2.0_f64.sqrt()).flags.closed_orbit_candidate);
    }

    #[test]
    fn period_formula() {
        let (t, d) = irrotational_period(-0.5).unwrap();
        assert!((t - 1.0 / 1.25_f64.sqrt()).abs() < 1e-15);
        assert!((d - (t - 1.0)).abs() < 1e-15);
        let (t, d) = irrotational_period(3.0).unwrap();
        assert!((t - 1.0 / 3.0_f64.sqrt()).abs() < 1e-15);
        assert!((d - t - 1.0).abs() < 1e-15);
        assert!(irrotational_period(1.0).is_none());
    }
}
