//! Analytic path classification for constant vorticity.
//!
//! Along an orbit with `𝒞 > π²c0²` the sign of `y'` is fixed and
//! `x' = 1 − y'/(π(y²+1))`. With `W = y² + 1` the zeros of `x'` solve
//! `(π² − 𝒞)W² + 4π²c0·W − 4π² = 0`, whose roots decide the shape.
//!
//! | branch | case                                   | label               |
//! |--------|----------------------------------------|---------------------|
//! | Minus  | any                                    | UndulatingRight 7a  |
//! | Plus   | c0 = 0, A² > π²                        | UndulatingLeft 7c   |
//! | Plus   | c0 = 0, A² < π²                        | LoopForwardDrift 7b |
//! | Plus   | I: 𝒞 > π²c0² + π²                      | UndulatingLeft 7c   |
//! | Plus   | II a, W1 < 1                           | UndulatingRight     |
//! | Plus   | II a, W1 > 1                           | LoopForwardDrift 7b |
//! | Plus   | II b, c0 < 0                           | UndulatingLeft      |
//! | Plus   | II b, c0 > 0, W1 < W2 < 1              | UndulatingLeft      |
//! | Plus   | II b, c0 > 0, W1 < 1 < W2              | LoopBackwardDrift 7d|
//! | Plus   | II b, c0 > 0, 1 < W1 < W2              | Peculiar 7e         |
//!
//! The label is kept as `theorem_label`. The reported `kind` of a loop follows
//! the sign of the drift per period, `T − 1` on the Plus branch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::irrotational::classify_irrotational;
use crate::model::{Branch, ClassFlags, ClassKind, FlowConfig, ParticleState, TrajectoryClass};
use crate::oracle::{classify_initial_data, EmpiricalOptions};
use crate::scalar::{lit, Real};
use crate::vorticity::{
    drift_identity, first_integral, is_closed_orbit_candidate, orbit_period, FirstIntegral,
};

/// Relative width of the band around a threshold treated as a tie.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// Case of the decision tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubCase {
    /// `𝒞 <= π²c0²`: `y'` vanishes somewhere; not covered analytically.
    ConditionViolated,
    /// Minus branch: `x' > 0` throughout.
    MinusBranch,
    ZeroCurrentAbovePi,
    ZeroCurrentBelowPi,
    /// `𝒞 > π²c0² + π²`.
    CaseI,
    /// `π² − 𝒞 > 0` below case I.
    CaseIIa,
    /// `π² − 𝒞 < 0` below case I.
    CaseIIb,
    /// A threshold holds with equality.
    Boundary,
}

impl SubCase {
    pub fn name(self) -> &'static str {
        match self {
            SubCase::ConditionViolated => "condition-violated",
            SubCase::MinusBranch => "+",
            SubCase::ZeroCurrentAbovePi => "c0=0, |A|>pi",
            SubCase::ZeroCurrentBelowPi => "c0=0, |A|<pi",
            SubCase::CaseI => "I",
            SubCase::CaseIIa => "II a",
            SubCase::CaseIIb => "II b",
            SubCase::Boundary => "boundary",
        }
    }
}

/// Quantities behind a classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierAnalysis {
    #[serde(rename = "C")]
    pub c: f64,
    pub c0: f64,
    pub branch: Option<Branch>,
    pub condition_met: bool,
    /// `Δ = 16π²(π²c0² + π² − 𝒞)`.
    #[serde(rename = "Delta")]
    pub delta: f64,
    /// Roots of the `W`-quadratic, `W1 < W2` when both are real.
    #[serde(rename = "W1")]
    pub w1: Option<f64>,
    #[serde(rename = "W2")]
    pub w2: Option<f64>,
    pub sub_case: SubCase,
    /// Full label, e.g. `"II b, W1-1<0<W2-1"`.
    pub label: String,
    /// `y` sweeps all of ℝ each period (true whenever the condition holds).
    pub intervals_visited: bool,
    pub period: Option<f64>,
    pub drift: Option<f64>,
}

impl ClassifierAnalysis {
    /// Positive roots `W > 1` of the `W`-quadratic, i.e. the values of `y²+1`
    /// where `x'` vanishes on the Plus branch.
    pub fn x_rate_zeros(&self) -> Vec<f64> {
        let mut out: Vec<f64> = [self.w1, self.w2]
            .into_iter()
            .flatten()
            .filter(|&w| w > 1.0)
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
        out.dedup();
        out
    }
}

/// Options for [`classify_with`].
#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Run the ODE oracle when no analytic answer exists.
    pub empirical_fallback: bool,
    /// Initial horizon of the oracle (extended automatically).
    pub horizon: f64,
    pub tol: f64,
    pub empirical: EmpiricalOptions,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            empirical_fallback: true,
            horizon: 10.0,
            tol: 1e-10,
            empirical: EmpiricalOptions::default(),
        }
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Roots of `(π² − 𝒞)W² + 4π²c0·W − 4π² = 0`, sorted, with the discriminant.
pub fn w_roots(c: f64, c0: f64) -> (f64, Option<(f64, f64)>) {
    let pi = std::f64::consts::PI;
    let pi2 = pi * pi;
    let inner = pi2 * c0 * c0 + pi2 - c;
    let delta = 16.0 * pi2 * inner;
    let a = pi2 - c;
    if inner < 0.0 || a == 0.0 {
        return (delta, None);
    }
    let r = 2.0 * pi * inner.sqrt();
    let p = (-2.0 * pi2 * c0 + r) / a;
    let q = (-2.0 * pi2 * c0 - r) / a;
    (delta, Some((p.min(q), p.max(q))))
}

fn sign_f(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Decision tree on `(𝒞, c0, branch)`; returns the label, sub-case, full
/// label text and whether a threshold is hit.
fn decide(fi: &FirstIntegral<f64>, w: Option<(f64, f64)>) -> Result<(ClassKind, SubCase, String)> {
    let pi2 = std::f64::consts::PI.powi(2);
    let (c, c0) = (fi.c, fi.c0);
    let branch = fi.branch.ok_or(Error::DegenerateBranch)?;
    if branch == Branch::Minus {
        return Ok((ClassKind::UndulatingRight, SubCase::MinusBranch, "+".into()));
    }
    let boundary = |what: &str| {
        Ok((
            ClassKind::NumericalFallback,
            SubCase::Boundary,
            what.to_string(),
        ))
    };
    if c0 == 0.0 {
        if near(c, pi2) {
            return boundary("c0=0, |A|=pi");
        }
        return Ok(if c > pi2 {
            (
                ClassKind::UndulatingLeft,
                SubCase::ZeroCurrentAbovePi,
                "c0=0, |A|>pi".into(),
            )
        } else {
            (
                ClassKind::LoopForwardDrift,
                SubCase::ZeroCurrentBelowPi,
                "c0=0, |A|<pi".into(),
            )
        });
    }
    if c0.abs() <= BOUNDARY_TOL {
        return boundary("c0~0");
    }
    let top = pi2 * c0 * c0 + pi2;
    if near(c, top) {
        return boundary("C=pi^2 c0^2+pi^2");
    }
    if c > top {
        return Ok((ClassKind::UndulatingLeft, SubCase::CaseI, "I".into()));
    }
    if near(c, pi2) {
        return boundary("pi^2-C=0");
    }
    let (w1, w2) = w.expect("real roots below case I");
    if pi2 - c > 0.0 {
        // One negative and one positive root.
        let wp = w2;
        if near(wp, 1.0) {
            return boundary("II a, W1=1");
        }
        return Ok(if wp < 1.0 {
            (
                ClassKind::UndulatingRight,
                SubCase::CaseIIa,
                "II a, W1-1<0".into(),
            )
        } else {
            (
                ClassKind::LoopForwardDrift,
                SubCase::CaseIIa,
                "II a, W1-1>0".into(),
            )
        });
    }
    if c0 < 0.0 {
        return Ok((
            ClassKind::UndulatingLeft,
            SubCase::CaseIIb,
            "II b, c0<0".into(),
        ));
    }
    if near(w1, 1.0) || near(w2, 1.0) {
        return boundary("II b, W=1");
    }
    Ok(match (sign_f(w1 - 1.0), sign_f(w2 - 1.0)) {
        (-1, -1) => (
            ClassKind::UndulatingLeft,
            SubCase::CaseIIb,
            "II b, W1-1<0, W2-1<0".into(),
        ),
        (-1, 1) => (
            ClassKind::LoopBackwardDrift,
            SubCase::CaseIIb,
            "II b, W1-1<0<W2-1".into(),
        ),
        _ => (
            ClassKind::Peculiar,
            SubCase::CaseIIb,
            "II b, W1-1>0, W2-1>0".into(),
        ),
    })
}

/// Classifies a constant-vorticity path (`Ω ≠ 0`) with default options.
pub fn classify(
    config: &FlowConfig<f64>,
    init: &ParticleState<f64>,
) -> Result<(TrajectoryClass, ClassifierAnalysis)> {
    classify_with(config, init, &ClassifyOptions::default())
}

/// Classifies a constant-vorticity path (`Ω ≠ 0`).
pub fn classify_with(
    config: &FlowConfig<f64>,
    init: &ParticleState<f64>,
    opts: &ClassifyOptions,
) -> Result<(TrajectoryClass, ClassifierAnalysis)> {
    if config.is_irrotational() {
        return Err(Error::WrongCase(
            "shear = 0: use the irrotational classification".into(),
        ));
    }
    let fi = first_integral(config, init)?;
    let (delta, w) = w_roots(fi.c, fi.c0);
    let mut analysis = ClassifierAnalysis {
        c: fi.c,
        c0: fi.c0,
        branch: fi.branch,
        condition_met: fi.condition_met,
        delta,
        w1: w.map(|r| r.0),
        w2: w.map(|r| r.1),
        sub_case: SubCase::ConditionViolated,
        label: SubCase::ConditionViolated.name().into(),
        intervals_visited: fi.condition_met,
        period: None,
        drift: None,
    };
    let mut class = TrajectoryClass {
        kind: ClassKind::NumericalFallback,
        theorem_label: ClassKind::NumericalFallback,
        branch: fi.branch,
        sub_case: analysis.label.clone(),
        flags: ClassFlags {
            degenerate: fi.degenerate,
            ..ClassFlags::default()
        },
        empirical: None,
    };

    if fi.condition_met {
        let (label, sub_case, text) = decide(&fi, w)?;
        let period = orbit_period(&fi)?.period;
        let branch = fi.branch.ok_or(Error::DegenerateBranch)?;
        let drift = drift_identity(period, branch);
        analysis.sub_case = sub_case;
        analysis.label = text.clone();
        analysis.period = Some(period);
        analysis.drift = Some(drift);
        class.sub_case = text;
        class.theorem_label = label;
        class.flags.closed_orbit_candidate = is_closed_orbit_candidate(drift);
        if sub_case == SubCase::Boundary {
            class.flags.boundary = true;
        } else if label.is_loop() && !class.flags.closed_orbit_candidate {
            class.kind = ClassKind::loop_with_drift(sign_f(drift));
        } else {
            class.kind = label;
        }
    }

    let needs_oracle = !fi.condition_met || class.flags.boundary;
    if needs_oracle && opts.empirical_fallback {
        match classify_initial_data(config, init, opts.horizon, opts.tol, &opts.empirical) {
            Ok((emp, _)) => {
                class.empirical = Some(emp.kind);
                if class.flags.boundary {
                    class.kind = emp.kind;
                }
            }
            Err(e) if e.is_input_error() => return Err(e),
            Err(_) => {}
        }
    }
    Ok((class, analysis))
}

/// Classification of any configuration: the irrotational table when `Ω = 0`,
/// the vorticity tree otherwise.
pub fn classify_any(
    config: &FlowConfig<f64>,
    init: &ParticleState<f64>,
    opts: &ClassifyOptions,
) -> Result<(TrajectoryClass, Option<ClassifierAnalysis>)> {
    if config.is_irrotational() {
        init.cot_phase()?;
        Ok((classify_irrotational(config.c0), None))
    } else {
        let (c, a) = classify_with(config, init, opts)?;
        Ok((c, Some(a)))
    }
}

/// One row of a sign table: an open `y`-interval and the signs of `x'`, `z'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignInterval {
    pub lo: f64,
    pub hi: f64,
    pub x_rate_sign: i8,
    pub z_rate_sign: i8,
}

/// The `y`-intervals between zeros of `x'` and `z'`, with their signs.
pub fn sign_table(analysis: &ClassifierAnalysis) -> Result<Vec<SignInterval>> {
    if !analysis.condition_met {
        return Err(Error::ConditionViolated {
            c: analysis.c,
            bound: (std::f64::consts::PI * analysis.c0).powi(2),
        });
    }
    let branch = analysis.branch.ok_or(Error::DegenerateBranch)?;
    let mut cuts = vec![0.0];
    if branch == Branch::Plus {
        for w in analysis.x_rate_zeros() {
            let y = (w - 1.0).sqrt();
            cuts.push(y);
            cuts.push(-y);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite cuts"));
    cuts.dedup();
    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend(cuts);
    edges.push(f64::INFINITY);
    Ok(edges
        .windows(2)
        .map(|e| {
            let y = interior_point(e[0], e[1]);
            SignInterval {
                lo: e[0],
                hi: e[1],
                x_rate_sign: x_rate_sign(analysis.c, analysis.c0, branch, y),
                z_rate_sign: if y > 0.0 { 1 } else { -1 },
            }
        })
        .collect())
}

fn interior_point(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (false, true) => hi - 1.0 - hi.abs(),
        (true, false) => lo + 1.0 + lo.abs(),
        (false, false) => 0.0,
    }
}

/// Sign of `x' = 1 − y'/(πW)` at height `y` on the given branch.
pub fn x_rate_sign(c: f64, c0: f64, branch: Branch, y: f64) -> i8 {
    if branch == Branch::Minus {
        return 1;
    }
    let pi2 = std::f64::consts::PI.powi(2);
    let w = y * y + 1.0;
    // x' < 0 exactly when Q(y) > π²W².
    let g = (c - pi2) * w * w - 4.0 * pi2 * c0 * w + 4.0 * pi2;
    if g > 0.0 {
        -1
    } else {
        1
    }
}

/// `x'` from the phase variables: `1 − y'/(π(y²+1))`.
pub fn x_rate_from_phase<T: Real>(y: T, y_prime: T) -> T {
    T::one() - y_prime / (T::PI() * (y * y + T::one()))
}

/// `y`-ordinates of the zeros of `x'` for zero current and `A² < π²`.
pub fn zero_current_loop_ordinates<T: Real>(a_squared: T) -> Option<T> {
    let pi = T::PI();
    let gap = pi * pi - a_squared;
    if !(gap > T::zero()) {
        return None;
    }
    let v = lit::<T>(2.0) * pi / gap.sqrt() - T::one();
    Some(v.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn run(shear: f64, c0: f64) -> (TrajectoryClass, ClassifierAnalysis) {
        let cfg = FlowConfig::from_shear(c0, shear).unwrap();
        classify(&cfg, &ParticleState::new(0.5, 0.5).unwrap()).unwrap()
    }

    #[test]
    fn labels_of_worked_examples() {
        assert_eq!(run(10.0, 0.0).0.theorem_label, ClassKind::UndulatingRight);
        assert_eq!(run(-1.0, 0.0).0.theorem_label, ClassKind::UndulatingLeft);
        assert_eq!(run(-0.4, 0.0).0.theorem_label, ClassKind::LoopForwardDrift);
        assert_eq!(run(-1.0, 2.0).0.theorem_label, ClassKind::LoopBackwardDrift);
        assert_eq!(run(-0.54, 0.5).0.theorem_label, ClassKind::Peculiar);
    }

    #[test]
    fn loop_direction_follows_drift() {
        let (c, a) = run(-0.4, 0.0);
        assert!(a.drift.unwrap() < 0.0);
        assert_eq!(c.kind, ClassKind::LoopBackwardDrift);
        let (c, a) = run(-1.0, 2.0);
        assert!(a.drift.unwrap() > 0.0);
        assert_eq!(c.kind, ClassKind::LoopForwardDrift);
    }

    #[test]
    fn roots_of_figure_7d_case() {
        let (_, a) = run(-1.0, 2.0);
        assert!((a.w1.unwrap() - (8.0 - 12.0_f64.sqrt()) / 6.5).abs() < 1e-12);
        assert!((a.w2.unwrap() - (8.0 + 12.0_f64.sqrt()) / 6.5).abs() < 1e-12);
        assert!((a.delta - 16.0 * PI.powi(4) * 0.75).abs() < 1e-9);
        for w in [a.w1.unwrap(), a.w2.unwrap()] {
            let q = (PI * PI - a.c) * w * w + 4.0 * PI * PI * a.c0 * w - 4.0 * PI * PI;
            assert!(q.abs() < 1e-9);
        }
    }

    #[test]
    fn peculiar_roots() {
        let (_, a) = run(-0.54, 0.5);
        assert!((a.c / (PI * PI) - 1.1329).abs() < 1e-12);
        assert!((a.w1.unwrap() - 2.375).abs() < 1e-3);
        assert!((a.w2.unwrap() - 12.674).abs() < 1e-3);
    }

    #[test]
    fn condition_violated_falls_back() {
        let (c, a) = run(1.0, 0.0);
        assert!(!a.condition_met);
        assert_eq!(c.kind, ClassKind::NumericalFallback);
        assert!(c.empirical.is_some());
    }

    #[test]
    fn shifted_x0_gives_same_class() {
        let cfg = FlowConfig::from_shear(0.3, -1.7).unwrap();
        let a = classify(&cfg, &ParticleState::new(0.3, 0.6).unwrap()).unwrap();
        let b = classify(&cfg, &ParticleState::new(1.3, 0.6).unwrap()).unwrap();
        assert_eq!(a.0.kind, b.0.kind);
        assert_eq!(a.1.label, b.1.label);
    }

    #[test]
    fn sign_tables() {
        let t = sign_table(&run(10.0, 0.0).1).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|r| r.x_rate_sign == 1));
        let t = sign_table(&run(-0.4, 0.0).1).unwrap();
        assert_eq!(t.len(), 4);
        let y = zero_current_loop_ordinates(0.84 * PI * PI).unwrap();
        assert!((t[1].lo + y).abs() < 1e-12 && (t[2].hi - y).abs() < 1e-12);
        assert_eq!(
            t.iter().map(|r| r.x_rate_sign).collect::<Vec<_>>(),
            vec![1, -1, -1, 1]
        );
        let t = sign_table(&run(-0.54, 0.5).1).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(
            t.iter().map(|r| r.x_rate_sign).collect::<Vec<_>>(),
            vec![-1, 1, -1, -1, 1, -1]
        );
        assert_eq!(
            t.iter().map(|r| r.z_rate_sign).collect::<Vec<_>>(),
            vec![-1, -1, -1, 1, 1, 1]
        );
    }

    #[test]
    fn irrotational_dispatch() {
        let (c, a) = classify_any(
            &FlowConfig::irrotational(3.0),
            &ParticleState::new(0.5, 0.5).unwrap(),
            &ClassifyOptions::default(),
        )
        .unwrap();
        assert_eq!(c.kind, ClassKind::UndulatingRight);
        assert!(a.is_none());
    }
}
