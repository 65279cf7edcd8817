//! Independent ground truth: adaptive Dormand–Prince 5(4) integration of the
//! untransformed particle equations
//!
//! ```text
//! dx/dt = cos(2π(x − t)) + Ω z + c0
//! dz/dt = 2π z sin(2π(x − t))
//! ```
//!
//! and an empirical shape classifier working only on sampled paths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{velocity_field, ClassKind, FlowConfig, ParticleState, Sample, Trajectory};
use crate::scalar::{lit, sign_dead, Real};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 50_000_000;
/// The step controller aims this far below `tol` so that accumulated error over
/// a run of a few periods still sits within a small multiple of `tol`.
const LOCAL_SAFETY: f64 = 1e-3;

type State<T> = [T; 2];

fn axpy<T: Real>(y: &State<T>, h: T, terms: &[(f64, &State<T>)]) -> State<T> {
    let mut out = *y;
    for (c, k) in terms {
        let c = lit::<T>(*c);
        out[0] = out[0] + h * c * k[0];
        out[1] = out[1] + h * c * k[1];
    }
    out
}

/// Right-hand side of the raw particle system.
pub fn raw_rhs<T: Real>(config: &FlowConfig<T>, t: T, s: &State<T>) -> State<T> {
    let f = velocity_field(s[0], s[1], t, config);
    [f.u, f.v]
}

/// Integrates the raw system from `(t0, state0)` and reports the state at each
/// requested time (monotone in the direction of integration) using the
/// 4th-order continuous extension. Local error per step is kept below `tol`,
/// mixed absolute/relative in `x` and relative in `z`.
pub fn integrate_raw_between<T: Real>(
    config: &FlowConfig<T>,
    t0: T,
    state0: State<T>,
    outputs: &[T],
    tol: T,
) -> Result<Vec<State<T>>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "tol = {tol} must be positive"
        )));
    }
    let Some(&t_end) = outputs.last() else {
        return Ok(Vec::new());
    };
    let dir = if t_end >= t0 { T::one() } else { -T::one() };
    let f = |t: T, s: &State<T>| raw_rhs(config, t, s);
    let local = tol * lit(LOCAL_SAFETY);
    let err_norm = |y: &State<T>, yn: &State<T>, e: &State<T>| -> T {
        // x: mixed absolute/relative. z > 0 scales like exp(·), so relative only.
        let sx = local + local * y[0].abs().max(yn[0].abs());
        let sz = local * y[1].abs().min(yn[1].abs());
        let (rx, rz) = (e[0] / sx, e[1] / sz);
        ((rx * rx + rz * rz) * lit(0.5)).sqrt()
    };

    let mut out = Vec::with_capacity(outputs.len());
    let mut next_out = 0usize;
    while next_out < outputs.len() && outputs[next_out] == t0 {
        out.push(state0);
        next_out += 1;
    }

    let mut t = t0;
    let mut y = state0;
    let mut k1 = f(t, &y);
    let span = (t_end - t0).abs();
    let mut h = dir * (lit::<T>(1e-3)).min(span.max(lit(1e-12)));
    let h_min = lit::<T>(1e-14) * (T::one() + span);
    let mut steps = 0usize;

    while next_out < outputs.len() {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::ToleranceNotMet { t: t.as_f64() });
        }
        if (t + h - t_end) * dir > T::zero() {
            h = t_end - t;
        }
        let k2 = f(t + h * lit(C2), &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + h * lit(C3), &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(
            t + h * lit(C4),
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = f(
            t + h * lit(C5),
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = f(t + h, &y_new);
        let e = axpy(
            &[T::zero(), T::zero()],
            h,
            &[
                (E1, &k1),
                (E3, &k3),
                (E4, &k4),
                (E5, &k5),
                (E6, &k6),
                (E7, &k7),
            ],
        );
        let err = err_norm(&y, &y_new, &e);
        if !err.is_finite() {
            h = h * lit(0.2);
            if h.abs() < h_min {
                return Err(Error::ToleranceNotMet { t: t.as_f64() });
            }
            continue;
        }
        if err <= T::one() {
            let t_new = t + h;
            // Dense output on [t, t_new].
            let mut r = [[T::zero(); 2]; 5];
            for i in 0..2 {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                r[0][i] = y[i];
                r[1][i] = ydiff;
                r[2][i] = bspl;
                r[3][i] = ydiff - h * k7[i] - bspl;
                r[4][i] = h
                    * (lit::<T>(D1) * k1[i]
                        + lit::<T>(D3) * k3[i]
                        + lit::<T>(D4) * k4[i]
                        + lit::<T>(D5) * k5[i]
                        + lit::<T>(D6) * k6[i]
                        + lit::<T>(D7) * k7[i]);
            }
            while next_out < outputs.len() && (outputs[next_out] - t_new) * dir <= T::zero() {
                let theta = (outputs[next_out] - t) / h;
                let th1 = T::one() - theta;
                let mut s = [T::zero(); 2];
                for i in 0..2 {
                    s[i] = r[0][i]
                        + theta * (r[1][i] + th1 * (r[2][i] + theta * (r[3][i] + th1 * r[4][i])));
                }
                out.push(s);
                next_out += 1;
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            let fac = if err == T::zero() {
                lit(5.0)
            } else {
                (lit::<T>(0.9) * err.powf(lit(-0.2)))
                    .min(lit(5.0))
                    .max(lit(0.2))
            };
            h = h * fac;
        } else {
            let fac = (lit::<T>(0.9) * err.powf(lit(-0.2))).max(lit(0.2));
            h = h * fac;
            if h.abs() < h_min {
                return Err(Error::ToleranceNotMet { t: t.as_f64() });
            }
        }
    }
    Ok(out)
}

/// Raw-system trajectory sampled at the given times (starting at 0).
pub fn integrate_raw_at<T: Real>(
    config: &FlowConfig<T>,
    init: &ParticleState<T>,
    times: &[T],
    tol: T,
) -> Result<Trajectory<T>> {
    if times.first().is_none_or(|&t| t != T::zero()) {
        return Err(Error::InvalidArgument(
            "sample times must start at t = 0".into(),
        ));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("sample times must increase".into()));
    }
    let states = integrate_raw_between(config, T::zero(), [init.x0, init.z0], times, tol)?;
    let samples = times
        .iter()
        .zip(states)
        .map(|(&t, s)| Sample::at(t, s[0], s[1], config))
        .collect();
    Ok(Trajectory::new(*config, *init, samples))
}

/// Default spacing of oracle samples.
pub const DEFAULT_SAMPLE_DT: f64 = 1e-3;

/// Raw-system trajectory on `[0, t_max]` sampled every
/// [`DEFAULT_SAMPLE_DT`].
pub fn integrate_raw<T: Real>(
    config: &FlowConfig<T>,
    init: &ParticleState<T>,
    t_max: T,
    tol: T,
) -> Result<Trajectory<T>> {
    if !(t_max > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "t_max = {t_max} must be positive"
        )));
    }
    let times = crate::model::stepped_times(t_max, lit(DEFAULT_SAMPLE_DT))?;
    integrate_raw_at(config, init, &times, tol)
}

/// Shape features measured from a sampled path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalClassification {
    /// Sign of the net drift per period (or over the run when no period).
    pub drift_sign: i8,
    pub drift: f64,
    pub period: Option<f64>,
    /// The `(x, z)` polyline crosses itself within two periods.
    pub loop_detected: bool,
    /// `x'` never changes sign.
    pub monotone_x: bool,
    /// Sign changes of `x'` per period.
    pub reversals_per_period: usize,
    pub z_bounded: bool,
    pub kind: ClassKind,
}

/// Thresholds used by [`classify_empirical`].
#[derive(Debug, Clone, Copy)]
pub struct EmpiricalOptions {
    /// Dead zone for the sign of `x'`.
    pub velocity_dead_zone: f64,
    /// Minimal crossing angle (radians) for two segments to count as a loop.
    pub min_crossing_angle: f64,
    /// `z(t_max)/z0` above which growth counts as unbounded.
    pub growth_ratio: f64,
    /// Minimum number of complete periods the sample must contain.
    pub min_periods: usize,
}

impl Default for EmpiricalOptions {
    fn default() -> Self {
        Self {
            velocity_dead_zone: 1e-9,
            min_crossing_angle: 1e-6,
            growth_ratio: 1e3,
            min_periods: 3,
        }
    }
}

/// Times where `v = z'` changes sign from negative to positive (height minima),
/// located by linear interpolation between samples.
pub fn height_minima<T: Real>(samples: &[Sample<T>]) -> Vec<f64> {
    let mut out = Vec::new();
    for w in samples.windows(2) {
        let (a, b) = (w[0].v.as_f64(), w[1].v.as_f64());
        if a < 0.0 && b >= 0.0 {
            let ta = w[0].t.as_f64();
            let tb = w[1].t.as_f64();
            out.push(ta + (tb - ta) * (-a) / (b - a));
        }
    }
    out
}

fn z_unbounded<T: Real>(samples: &[Sample<T>], z0: f64, ratio: f64) -> bool {
    let last = samples.last().expect("non-empty").z.as_f64();
    if !(last / z0 > ratio) {
        return false;
    }
    let half = samples.len() / 2;
    samples[half..].windows(2).all(|w| w[1].z >= w[0].z)
}

/// Empirical class of a sampled path.
///
/// The mapping is: unbounded height → `NonPhysicalUnboundedZ`; monotone `x`
/// → undulating, direction from the drift; four or more `x'` reversals per
/// period → `Peculiar`; a self-intersection → loop, direction from the
/// drift; anything else → `Peculiar`.
pub fn classify_empirical<T: Real>(
    trajectory: &Trajectory<T>,
    opts: &EmpiricalOptions,
) -> Result<EmpiricalClassification> {
    let samples = &trajectory.samples;
    if samples.len() < 3 {
        return Err(Error::SpanTooShort(format!("{} samples", samples.len())));
    }
    let z0 = samples[0].z.as_f64();
    let first = samples[0];
    let last = *samples.last().expect("non-empty");
    let run_drift = (last.x - first.x).as_f64();
    let z_bounded = !z_unbounded(samples, z0, opts.growth_ratio);
    let dead: T = lit(opts.velocity_dead_zone);

    if !z_bounded {
        let reversals = count_reversals(samples, dead);
        return Ok(EmpiricalClassification {
            drift_sign: sign_of(run_drift),
            drift: run_drift,
            period: None,
            loop_detected: false,
            monotone_x: reversals == 0,
            reversals_per_period: reversals,
            z_bounded,
            kind: ClassKind::NonPhysicalUnboundedZ,
        });
    }

    let minima = height_minima(samples);
    if minima.is_empty() {
        return Err(Error::PeriodNotFound {
            z_bounded,
            drift: run_drift,
        });
    }
    if minima.len() < opts.min_periods {
        return Err(Error::SpanTooShort(format!(
            "{} height minima found, need {}",
            minima.len(),
            opts.min_periods
        )));
    }
    let n_periods = minima.len() - 1;
    let period = (minima[n_periods] - minima[0]) / n_periods as f64;
    let x_at = |t: f64| {
        trajectory
            .position_at(T::lit(t))
            .map(|(x, _)| x.as_f64())
            .expect("minimum inside span")
    };
    let drift = (x_at(minima[n_periods]) - x_at(minima[0])) / n_periods as f64;

    let window = window_samples(samples, minima[0], minima[2]);
    let reversals = count_reversals(window, dead);
    let reversals_per_period = reversals.div_ceil(2);
    let monotone_x = reversals == 0;
    let loop_detected = !monotone_x && polyline_self_intersects(window, opts.min_crossing_angle);

    let drift_sign = sign_of(drift);
    let kind = if monotone_x {
        if drift_sign >= 0 {
            ClassKind::UndulatingRight
        } else {
            ClassKind::UndulatingLeft
        }
    } else if reversals_per_period >= 4 {
        ClassKind::Peculiar
    } else if loop_detected {
        ClassKind::loop_with_drift(drift_sign)
    } else {
        ClassKind::Peculiar
    };
    Ok(EmpiricalClassification {
        drift_sign,
        drift,
        period: Some(period),
        loop_detected,
        monotone_x,
        reversals_per_period,
        z_bounded,
        kind,
    })
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn window_samples<T: Real>(samples: &[Sample<T>], t_lo: f64, t_hi: f64) -> &[Sample<T>] {
    let lo = samples.partition_point(|s| s.t.as_f64() < t_lo);
    let hi = samples.partition_point(|s| s.t.as_f64() <= t_hi);
    &samples[lo..hi]
}

fn count_reversals<T: Real>(samples: &[Sample<T>], dead: T) -> usize {
    let mut last = 0i8;
    let mut count = 0usize;
    for s in samples {
        let sg = sign_dead(s.u, dead);
        if sg == 0 {
            continue;
        }
        if last != 0 && sg != last {
            count += 1;
        }
        last = sg;
    }
    count
}

/// Whether the `(x, z)` polyline crosses itself (non-adjacent segments with
/// a crossing angle above `min_angle`).
pub fn polyline_self_intersects<T: Real>(samples: &[Sample<T>], min_angle: f64) -> bool {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (s.x.as_f64(), s.z.as_f64()))
        .collect();
    if pts.len() < 4 {
        return false;
    }
    let mut segs: Vec<(usize, f64, f64)> = (0..pts.len() - 1)
        .map(|i| {
            let (a, b) = (pts[i].0, pts[i + 1].0);
            (i, a.min(b), a.max(b))
        })
        .collect();
    segs.sort_by(|p, q| p.1.partial_cmp(&q.1).expect("finite x"));
    for (n, &(i, _, xmax)) in segs.iter().enumerate() {
        for &(j, xmin_j, _) in &segs[n + 1..] {
            if xmin_j > xmax {
                break;
            }
            if i.abs_diff(j) <= 1 {
                continue;
            }
            if segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1], min_angle) {
                return true;
            }
        }
    }
    false
}

fn segments_cross(
    p1: (f64, f64),
    p2: (f64, f64),
    q1: (f64, f64),
    q2: (f64, f64),
    min_angle: f64,
) -> bool {
    let d1 = (p2.0 - p1.0, p2.1 - p1.1);
    let d2 = (q2.0 - q1.0, q2.1 - q1.1);
    let cross = d1.0 * d2.1 - d1.1 * d2.0;
    let n1 = d1.0.hypot(d1.1);
    let n2 = d2.0.hypot(d2.1);
    if n1 == 0.0 || n2 == 0.0 {
        return false;
    }
    let sin_angle = (cross / (n1 * n2)).abs();
    if sin_angle <= min_angle.sin() {
        return false;
    }
    let w = (q1.0 - p1.0, q1.1 - p1.1);
    let s = (w.0 * d2.1 - w.1 * d2.0) / cross;
    let u = (w.0 * d1.1 - w.1 * d1.0) / cross;
    (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u)
}

/// Integrates with growing horizons (starting at `t_max`, doubling up to
/// `16·t_max`) until the empirical classifier sees enough periods.
pub fn classify_initial_data<T: Real>(
    config: &FlowConfig<T>,
    init: &ParticleState<T>,
    t_max: T,
    tol: T,
    opts: &EmpiricalOptions,
) -> Result<(EmpiricalClassification, Trajectory<T>)> {
    let mut horizon = t_max;
    let mut last_err = None;
    for _ in 0..5 {
        let traj = integrate_raw(config, init, horizon, tol)?;
        match classify_empirical(&traj, opts) {
            Ok(c) => return Ok((c, traj)),
            Err(e @ (Error::SpanTooShort(_) | Error::PeriodNotFound { .. })) => {
                last_err = Some(e);
                horizon = horizon + horizon;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irrotational::ClosedForm;

    fn st(x0: f64, z0: f64) -> ParticleState<f64> {
        ParticleState::new(x0, z0).unwrap()
    }

    #[test]
    fn matches_zero_current_closed_form() {
        let cfg = FlowConfig::irrotational(0.0);
        let init = st(0.5, 0.5);
        let traj = integrate_raw(&cfg, &init, 2.0, 1e-12).unwrap();
        let form = ClosedForm::new(&cfg, &init).unwrap();
        let sup = traj
            .samples
            .iter()
            .map(|s| {
                (s.x - form.x(s.t))
                    .abs()
                    .max((s.z - form.z(s.t).unwrap()).abs())
            })
            .fold(0.0, f64::max);
        assert!(sup < 1e-6, "sup = {sup}");
    }

    #[test]
    fn height_stays_positive() {
        for (c0, shear) in [(0.0, 10.0), (1.0, 0.0), (-0.5, -3.0)] {
            let cfg = FlowConfig::from_shear(c0, shear).unwrap();
            let traj = integrate_raw(&cfg, &st(0.3, 0.2), 3.0, 1e-10).unwrap();
            assert!(traj.samples.iter().all(|s| s.z > 0.0));
        }
    }

    #[test]
    fn time_reversal() {
        for tol in [1e-6_f64, 1e-8, 1e-10] {
            for (c0, shear) in [(0.4, -1.3), (0.0, 10.0), (2.0, -1.0), (-0.5, 0.0)] {
                let cfg = FlowConfig::from_shear(c0, shear).unwrap();
                let fwd = integrate_raw_between(&cfg, 0.0, [0.37, 0.6], &[5.0], tol).unwrap()[0];
                let back = integrate_raw_between(&cfg, 5.0, fwd, &[0.0], tol).unwrap()[0];
                assert!((back[0] - 0.37).abs() < 10.0 * tol, "{tol} {back:?}");
                assert!((back[1] - 0.6).abs() < 10.0 * tol, "{tol} {back:?}");
            }
        }
    }

    #[test]
    fn empirical_unbounded_zero_current() {
        let cfg = FlowConfig::irrotational(0.0);
        let traj = integrate_raw(&cfg, &st(0.5, 0.5), 10.0, 1e-10).unwrap();
        let c = classify_empirical(&traj, &EmpiricalOptions::default()).unwrap();
        assert!(!c.z_bounded);
        assert_eq!(c.kind, ClassKind::NonPhysicalUnboundedZ);
    }

    #[test]
    fn empirical_undulating_right() {
        let cfg = FlowConfig::from_shear(0.0, 10.0).unwrap();
        let (c, _) = classify_initial_data(
            &cfg,
            &st(0.5, 0.5),
            10.0,
            1e-10,
            &EmpiricalOptions::default(),
        )
        .unwrap();
        assert_eq!(c.kind, ClassKind::UndulatingRight);
        assert!(c.monotone_x);
    }

    #[test]
    fn empirical_figure_7d_parameters() {
        // Case "II b, W1-1<0<W2-1". The net drift per period is +0.1055, so the
        // measured class is a forward-drifting loop.
        let cfg = FlowConfig::from_shear(2.0, -1.0).unwrap();
        let (c, _) = classify_initial_data(
            &cfg,
            &st(0.5, 0.5),
            10.0,
            1e-10,
            &EmpiricalOptions::default(),
        )
        .unwrap();
        assert!(c.loop_detected);
        assert_eq!(c.reversals_per_period, 2);
        assert!((c.drift - 0.10551043555657147).abs() < 1e-5, "{}", c.drift);
        assert_eq!(c.kind, ClassKind::LoopForwardDrift);
    }

    #[test]
    fn empirical_peculiar() {
        let cfg = FlowConfig::from_shear(0.5, -0.54).unwrap();
        let (c, _) = classify_initial_data(
            &cfg,
            &st(0.5, 0.5),
            10.0,
            1e-10,
            &EmpiricalOptions::default(),
        )
        .unwrap();
        assert_eq!(c.reversals_per_period, 4);
        assert_eq!(c.kind, ClassKind::Peculiar);
    }

    #[test]
    fn crossing_segments() {
        assert!(segments_cross(
            (0.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (1.0, 0.0),
            1e-6
        ));
        assert!(!segments_cross(
            (0.0, 0.0),
            (1.0, 0.0),
            (0.0, 1.0),
            (1.0, 1.0),
            1e-6
        ));
        assert!(!segments_cross(
            (0.0, 0.0),
            (1.0, 1.0),
            (2.0, 0.0),
            (3.0, -1.0),
            1e-6
        ));
    }
}
