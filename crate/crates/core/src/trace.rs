//! One-call path computation: pick the engine, attach class, period and drift.

use crate::classifier::{classify_any, ClassifyOptions};
use crate::error::{Error, Result};
use crate::irrotational::trajectory_irrotational;
use crate::model::{stepped_times, FlowConfig, ParticleState, Trajectory};
use crate::oracle::integrate_raw_at;
use crate::vorticity::{integrate_orbit, DEFAULT_DT};

/// Which integrator produces the samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Closed forms for `Ω = 0`, fixed-step phase integration otherwise.
    #[default]
    Auto,
    /// Adaptive integration of the raw particle equations.
    Oracle,
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    pub t_max: f64,
    pub dt: f64,
    pub engine: Engine,
    /// Tolerance of the oracle engine.
    pub tol: f64,
    pub classify: ClassifyOptions,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            t_max: 5.0,
            dt: DEFAULT_DT,
            engine: Engine::Auto,
            tol: 1e-10,
            classify: ClassifyOptions::default(),
        }
    }
}

/// Samples the path on `[0, t_max]` every `dt` and attaches its class and,
/// when defined, its period and drift per period.
pub fn trace(
    config: &FlowConfig<f64>,
    init: &ParticleState<f64>,
    opts: &TraceOptions,
) -> Result<Trajectory<f64>> {
    if !(opts.t_max > 0.0) || !(opts.dt > 0.0) || !opts.t_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "t_max = {} and dt = {} must be positive",
            opts.t_max, opts.dt
        )));
    }
    let steps = (opts.t_max / opts.dt).round();
    if steps > 5e7 {
        return Err(Error::InvalidArgument(format!("{steps} samples requested")));
    }
    let (class, analysis) = classify_any(config, init, &opts.classify)?;
    let mut traj = match (opts.engine, config.is_irrotational()) {
        (Engine::Auto, true) => {
            let n = (steps as usize).max(1) + 1;
            trajectory_irrotational(*config, *init, (0.0, opts.t_max), n)?
        }
        (Engine::Auto, false) => integrate_orbit(config, init, opts.t_max, opts.dt)?,
        (Engine::Oracle, _) => {
            let times = stepped_times(opts.t_max, opts.dt)?;
            integrate_raw_at(config, init, &times, opts.tol)?
        }
    };
    let degenerate = traj.class.as_ref().is_some_and(|c| c.flags.degenerate);
    let mut class = class;
    class.flags.degenerate |= degenerate;
    traj.class = Some(class);
    if let Some(a) = analysis {
        traj.period = a.period;
        traj.drift = a.drift;
    } else if traj.period.is_none() {
        if let Some((p, d)) = crate::irrotational::irrotational_period(config.c0) {
            traj.period = Some(p);
            traj.drift = Some(d);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ClassKind;

    #[test]
    fn engines_agree() {
        let init = ParticleState::new(0.5, 0.5).unwrap();
        for cfg in [
            FlowConfig::from_shear(0.0, 10.0).unwrap(),
            FlowConfig::irrotational(-0.5),
        ] {
            let opts = TraceOptions {
                t_max: 1.0,
                dt: 1e-3,
                ..TraceOptions::default()
            };
            let a = trace(&cfg, &init, &opts).unwrap();
            let b = trace(
                &cfg,
                &init,
                &TraceOptions {
                    engine: Engine::Oracle,
                    ..opts
                },
            )
            .unwrap();
            assert_eq!(a.len(), b.len());
            for (p, q) in a.samples.iter().zip(&b.samples) {
                assert!((p.t - q.t).abs() < 1e-12);
                assert!((p.x - q.x).abs() < 1e-6 && (p.z - q.z).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn metadata_attached() {
        let cfg = FlowConfig::from_shear(0.0, 10.0).unwrap();
        let t = trace(
            &cfg,
            &ParticleState::new(0.5, 0.5).unwrap(),
            &TraceOptions::default(),
        )
        .unwrap();
        assert_eq!(t.class.as_ref().unwrap().kind, ClassKind::UndulatingRight);
        assert!(t.drift.unwrap() > 1.0);
        assert_eq!(t.len(), 50_001);
    }
}
