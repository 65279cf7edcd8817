//! Invariant checks run by `wavetraj selftest`.
//!
//! Each check is deterministic (seeded draws) and reports a one-line detail.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::{classify, sign_table, ClassifierAnalysis};
use crate::elliptic::{
    complete_k, elliptic_f, jacobi, legendre_reduce_general, legendre_reduce_zero_current, quartic,
};
use crate::error::Result;
use crate::io::{export_csv, export_json, export_svg, parse_csv, parse_json};
use crate::irrotational::{classify_irrotational, ClosedForm};
use crate::model::{velocity_field, ClassKind, FlowConfig, ParticleState, Trajectory};
use crate::oracle::{
    classify_initial_data, integrate_raw, integrate_raw_between, EmpiricalOptions,
};
use crate::quadrature::{integrate, QuadOptions};
use crate::vorticity::{
    drift_identity, drift_per_period, first_integral, integrate_orbit_detailed, orbit_period,
    orbit_period_elliptic, orbit_period_quadrature, ShearState,
};

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("elliptic.jacobi_identities", jacobi_identities),
    (
        "elliptic.f_monotone_quasi_periodic",
        f_monotone_quasi_periodic,
    ),
    ("elliptic.sn_inverts_f", sn_inverts_f),
    (
        "elliptic.reduction_matches_quadrature",
        reduction_matches_quadrature,
    ),
    ("elliptic.modulus_range", modulus_range),
    (
        "irrotational.closed_forms_solve_ode",
        closed_forms_solve_ode,
    ),
    ("irrotational.zero_current_law", zero_current_law),
    ("irrotational.class_table", irrotational_class_table),
    ("irrotational.matches_oracle", irrotational_matches_oracle),
    ("vorticity.energy_conservation", energy_conservation),
    (
        "vorticity.substitution_consistency",
        substitution_consistency,
    ),
    ("vorticity.period_routes_agree", period_routes_agree),
    ("vorticity.orbit_closure", orbit_closure),
    ("vorticity.zero_shear_reduction", zero_shear_reduction),
    ("vorticity.drift_identity", drift_identity_check),
    ("classifier.analytic_vs_empirical", analytic_vs_empirical),
    (
        "classifier.sign_table_matches_orbit",
        sign_table_matches_orbit,
    ),
    ("classifier.root_ordering", root_ordering),
    ("classifier.x0_periodicity", x0_periodicity),
    ("oracle.time_reversal", time_reversal),
    ("oracle.tolerance_halving", tolerance_halving),
    ("oracle.empirical_period", empirical_period),
    ("oracle.height_positive", height_positive),
    ("io.determinism", io_determinism),
    ("io.round_trips", io_round_trips),
    ("io.svg_structure", svg_structure),
];

/// Runs every check in order.
pub fn run_all() -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|&(name, check)| match check() {
            Ok((passed, detail)) => CheckResult {
                name,
                passed,
                detail,
            },
            Err(e) => CheckResult {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn verdict(worst: f64, limit: f64, what: &str) -> (bool, String) {
    (
        worst < limit,
        format!("max {what} {worst:.3e} (limit {limit:.0e})"),
    )
}

fn jacobi_identities() -> Result<(bool, String)> {
    let mut r = rng(1);
    let mut worst = 0.0_f64;
    for _ in 0..500 {
        let u: f64 = r.gen_range(-10.0..10.0);
        let m: f64 = r.gen_range(0.0..=1.0);
        let (sn, cn, dn) = jacobi(u, m)?;
        worst = worst
            .max((sn * sn + cn * cn - 1.0).abs())
            .max((dn * dn + m * sn * sn - 1.0).abs());
    }
    Ok(verdict(worst, 1e-12, "identity error"))
}

fn f_monotone_quasi_periodic() -> Result<(bool, String)> {
    let mut r = rng(2);
    let mut ok = true;
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let m: f64 = r.gen_range(0.0..0.999);
        let k = complete_k(m)?;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..200 {
            let phi = -7.0 + 14.0 * i as f64 / 199.0;
            let f = elliptic_f(phi, m)?;
            ok &= f > prev;
            prev = f;
            let shifted = elliptic_f(phi + std::f64::consts::PI, m)?;
            worst = worst.max((shifted - f - 2.0 * k).abs());
        }
    }
    let (pass, detail) = verdict(worst, 1e-12, "quasi-period error");
    Ok((pass && ok, format!("{detail}, monotone = {ok}")))
}

fn sn_inverts_f() -> Result<(bool, String)> {
    let mut r = rng(3);
    let mut worst = 0.0_f64;
    for _ in 0..500 {
        let phi: f64 = r.gen_range(-3.0..3.0);
        let m = r.gen_range(0.0..0.99);
        let (sn, _, _) = jacobi(elliptic_f(phi, m)?, m)?;
        worst = worst.max((sn - phi.sin()).abs());
    }
    Ok(verdict(worst, 1e-10, "round-trip error"))
}

/// Random `(𝒞, c0)` with `𝒞 > π²c0²`.
pub fn random_constant(r: &mut ChaCha8Rng) -> (f64, f64) {
    let pi2 = std::f64::consts::PI.powi(2);
    let c0: f64 = r.gen_range(-3.0..3.0);
    let c = pi2 * c0 * c0 + pi2 * r.gen_range(0.05..6.0);
    (c, c0)
}

fn reduction_matches_quadrature() -> Result<(bool, String)> {
    let mut r = rng(4);
    let opts = QuadOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-15,
        max_depth: 50,
    };
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let (c, c0) = random_constant(&mut r);
        let red = legendre_reduce_general(c, c0)?;
        let y_max: f64 = r.gen_range(-20.0..20.0);
        let direct = integrate(|y: f64| 1.0 / quartic(c, c0, y).sqrt(), 0.0, y_max, opts)?;
        let reduced = red.integral_to(y_max)?;
        worst = worst.max(((direct - reduced) / direct).abs());
    }
    Ok(verdict(worst, 1e-8, "relative gap"))
}

fn modulus_range() -> Result<(bool, String)> {
    let mut r = rng(5);
    let mut inside = true;
    for _ in 0..1000 {
        let (c, c0) = random_constant(&mut r);
        let m = legendre_reduce_general(c, c0)?.k_squared;
        inside &= m > 0.0 && m < 1.0;
    }
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let a2: f64 = r.gen_range(0.01..200.0);
        let z = legendre_reduce_zero_current(a2)?;
        let g = legendre_reduce_general(a2, 0.0)?;
        worst = worst
            .max((z.k_squared - g.k_squared).abs())
            .max((z.prefactor - g.prefactor).abs());
    }
    Ok((
        inside && worst < 1e-14,
        format!("k^2 inside (0,1): {inside}; zero-current gap {worst:.1e}"),
    ))
}

const IRROTATIONAL_CASES: [f64; 5] = [0.0, -2.0, -0.5, 3.0, 1.0];

fn closed_forms_solve_ode() -> Result<(bool, String)> {
    let mut worst = 0.0_f64;
    for c0 in IRROTATIONAL_CASES {
        let cfg = FlowConfig::irrotational(c0);
        let form = ClosedForm::new(&cfg, &ParticleState::new(0.37, 0.6)?)?;
        for i in 0..1000 {
            let t = 2.0 * i as f64 / 999.0;
            let z = form.z(t)?;
            let f = velocity_field(form.x(t), z, t, &cfg);
            worst = worst
                .max((form.x_rate(t) - f.u).abs())
                .max((z * form.log_height_rate(t) - f.v).abs() / z.max(1.0));
        }
    }
    Ok(verdict(worst, 1e-8, "ODE residual"))
}

fn zero_current_law() -> Result<(bool, String)> {
    let mut r = rng(6);
    let mut worst = 0.0_f64;
    let cfg = FlowConfig::irrotational(0.0);
    for _ in 0..10 {
        let init = ParticleState::new(r.gen_range(0.01..0.99), r.gen_range(0.05..1.0))?;
        let form = ClosedForm::new(&cfg, &init)?;
        let a = init.cot_phase()?;
        for i in 0..100 {
            let t = i as f64 * 0.02;
            let lhs = form.z(t)? * (1.0 + a * a) / init.z0;
            let rhs = 1.0 + (2.0 * std::f64::consts::PI * t + a).powi(2);
            worst = worst.max((lhs - rhs).abs() / rhs);
        }
    }
    Ok(verdict(worst, 1e-12, "relative deviation"))
}

fn irrotational_class_table() -> Result<(bool, String)> {
    let expect = [
        (3.0, ClassKind::UndulatingRight),
        (2.5, ClassKind::UndulatingRight),
        (-2.0, ClassKind::UndulatingLeft),
        (-0.5, ClassKind::LoopForwardDrift),
        (0.0, ClassKind::NonPhysicalUnboundedZ),
        (1.0, ClassKind::NonPhysicalUnboundedZ),
    ];
    let bad: Vec<f64> = expect
        .iter()
        .filter(|(c0, k)| classify_irrotational(*c0).theorem_label != *k)
        .map(|p| p.0)
        .collect();
    Ok((bad.is_empty(), format!("mismatches at c0 = {bad:?}")))
}

fn irrotational_matches_oracle() -> Result<(bool, String)> {
    let mut worst = 0.0_f64;
    let init = ParticleState::new(0.37, 0.6)?;
    for c0 in IRROTATIONAL_CASES {
        let cfg = FlowConfig::irrotational(c0);
        let form = ClosedForm::new(&cfg, &init)?;
        let oracle = integrate_raw(&cfg, &init, 2.0, 1e-11)?;
        for s in oracle.samples.iter().step_by(10) {
            worst = worst
                .max((s.x - form.x(s.t)).abs())
                .max((s.z - form.z(s.t)?).abs());
        }
    }
    Ok(verdict(worst, 1e-6, "sup-norm gap"))
}

/// A random constant-vorticity case with `𝒞 > π²c0²`.
pub fn random_vorticity_case(r: &mut ChaCha8Rng) -> Result<(FlowConfig<f64>, ParticleState<f64>)> {
    loop {
        let shear: f64 = r.gen_range(-4.0..4.0);
        if shear.abs() < 0.05 {
            continue;
        }
        let cfg = FlowConfig::from_shear(r.gen_range(-2.5..2.5), shear)?;
        let init = ParticleState::new(r.gen_range(0.02..0.98), r.gen_range(0.1..1.0))?;
        let fi = first_integral(&cfg, &init)?;
        let pi2 = std::f64::consts::PI.powi(2);
        if fi.condition_met && fi.c - fi.bound() > 0.05 * pi2 {
            return Ok((cfg, init));
        }
    }
}

fn energy_conservation() -> Result<(bool, String)> {
    let mut r = rng(7);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let (cfg, init) = random_vorticity_case(&mut r)?;
        let run = integrate_orbit_detailed(&cfg, &init, 5.0, 1e-4)?;
        worst = worst.max(run.max_residual);
    }
    Ok(verdict(worst, 1e-6, "|E - C|"))
}

fn substitution_consistency() -> Result<(bool, String)> {
    let mut r = rng(8);
    let mut worst = 0.0_f64;
    for _ in 0..5 {
        let (cfg, init) = random_vorticity_case(&mut r)?;
        let fi = first_integral(&cfg, &init)?;
        let sign = fi.branch.expect("condition met").signum::<f64>();
        let run = integrate_orbit_detailed(&cfg, &init, 2.0, 1e-4)?;
        for (i, s) in run.trajectory.samples.iter().enumerate() {
            let xp = run.phase[i];
            let st = ShearState::from_phase(xp, run.phase_rate[i]);
            if !(st.y.abs() < 1e6) {
                continue;
            }
            // y from the lab-frame position, y' from the first integral.
            let y_lab = 1.0 / (std::f64::consts::PI * (s.x - s.t)).tan();
            let y_prime = sign * quartic(fi.c, fi.c0, st.y).sqrt();
            let scale = 1.0 + st.y * st.y;
            worst = worst.max((y_lab - st.y).abs() / scale).max(
                (run.phase_rate[i] + 2.0 * y_prime / scale).abs() / (1.0 + run.phase_rate[i].abs()),
            );
        }
    }
    Ok(verdict(worst, 1e-9, "substitution gap"))
}

fn period_routes_agree() -> Result<(bool, String)> {
    let mut r = rng(9);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let (c, c0) = random_constant(&mut r);
        let a = orbit_period_quadrature(c, c0)?;
        let b = orbit_period_elliptic(c, c0)?;
        worst = worst.max(((a - b) / a).abs());
    }
    Ok(verdict(worst, 1e-8, "relative gap"))
}

fn orbit_closure() -> Result<(bool, String)> {
    let mut r = rng(10);
    let mut worst = 0.0_f64;
    for _ in 0..5 {
        let (cfg, init) = random_vorticity_case(&mut r)?;
        let fi = first_integral(&cfg, &init)?;
        let period = orbit_period(&fi)?.period;
        let t_max = 3.0 * period + 0.5;
        let run = integrate_orbit_detailed(&cfg, &init, t_max, 1e-4)?;
        let sign = fi.branch.expect("condition met").signum::<f64>();
        let traj = &run.trajectory;
        for k in 0..20 {
            let t = (t_max - period) * k as f64 / 19.0;
            let (xa, za) = traj.position_at(t).expect("in span");
            let (xb, zb) = traj.position_at(t + period).expect("in span");
            let phase_gap = 2.0 * std::f64::consts::PI * ((xb - t - period) - (xa - t));
            worst = worst
                .max((zb - za).abs())
                .max((phase_gap + sign * 2.0 * std::f64::consts::PI).abs());
        }
    }
    Ok(verdict(worst, 1e-6, "return gap"))
}

fn zero_shear_reduction() -> Result<(bool, String)> {
    let mut worst = 0.0_f64;
    let init = ParticleState::new(0.37, 0.6)?;
    for c0 in IRROTATIONAL_CASES {
        let cfg = FlowConfig::irrotational(c0);
        let form = ClosedForm::new(&cfg, &init)?;
        let run = integrate_orbit_detailed(&cfg, &init, 2.0, 1e-4)?;
        for s in run.trajectory.samples.iter().step_by(50) {
            worst = worst
                .max((s.x - form.x(s.t)).abs())
                .max((s.z - form.z(s.t)?).abs());
        }
    }
    Ok(verdict(worst, 1e-6, "sup-norm gap"))
}

fn drift_identity_check() -> Result<(bool, String)> {
    let mut r = rng(11);
    let mut worst = 0.0_f64;
    let mut signs_ok = true;
    for _ in 0..8 {
        let (cfg, init) = random_vorticity_case(&mut r)?;
        let (class, analysis) = classify(&cfg, &init)?;
        let period = analysis.period.expect("condition met");
        let run = integrate_orbit_detailed(&cfg, &init, period * 1.5, 1e-4)?;
        let measured = drift_per_period(&run.trajectory, period)?;
        let predicted = drift_identity(period, analysis.branch.expect("condition met"));
        worst = worst.max((measured - predicted).abs());
        if let Some(s) = class.kind.drift_sign() {
            signs_ok &= (measured > 0.0) == (s > 0);
        }
    }
    let (pass, detail) = verdict(worst, 1e-6, "identity gap");
    Ok((
        pass && signs_ok,
        format!("{detail}, drift signs match: {signs_ok}"),
    ))
}

fn analytic_vs_empirical() -> Result<(bool, String)> {
    let mut r = rng(12);
    let mut mismatches = Vec::new();
    let mut n = 0;
    while n < 20 {
        let (cfg, init) = random_vorticity_case(&mut r)?;
        let (class, a) = classify(&cfg, &init)?;
        if class.flags.boundary || !well_separated(&a) {
            continue;
        }
        n += 1;
        let (emp, _) =
            classify_initial_data(&cfg, &init, 10.0, 1e-10, &EmpiricalOptions::default())?;
        if emp.kind != class.kind {
            mismatches.push((cfg.c0, cfg.shear, class.kind, emp.kind));
        }
    }
    Ok((
        mismatches.is_empty(),
        format!("{n} draws, mismatches {mismatches:?}"),
    ))
}

/// Keeps draws away from the thresholds where sampled shapes are ambiguous.
pub fn well_separated(a: &ClassifierAnalysis) -> bool {
    let pi2 = std::f64::consts::PI.powi(2);
    let far = |v: f64, t: f64, m: f64| (v - t).abs() > m * t.abs().max(1.0);
    let roots_ok = [a.w1, a.w2]
        .into_iter()
        .flatten()
        .all(|w| far(w, 1.0, 0.05));
    let drift_ok = a.period.is_some_and(|p| far(p, 1.0, 0.02));
    a.condition_met
        && far(a.c, pi2, 0.02)
        && far(a.c, pi2 * a.c0 * a.c0 + pi2, 0.02)
        && a.c0.abs() > 0.05
        && roots_ok
        && drift_ok
}

fn sign_table_matches_orbit() -> Result<(bool, String)> {
    let mut bad = 0usize;
    let mut total = 0usize;
    let init = ParticleState::new(0.5, 0.5)?;
    for (c0, shear) in [
        (0.0, 10.0),
        (0.0, -0.4),
        (2.0, -1.0),
        (0.5, -0.54),
        (0.0, -1.0),
    ] {
        let cfg = FlowConfig::from_shear(c0, shear)?;
        let (_, analysis) = classify(&cfg, &init)?;
        let table = sign_table(&analysis)?;
        let run = integrate_orbit_detailed(&cfg, &init, 2.0, 2e-4)?;
        for (i, s) in run.trajectory.samples.iter().enumerate().take(10_000) {
            let y = ShearState::from_phase(run.phase[i], run.phase_rate[i]).y;
            let Some(row) = table.iter().find(|r| y > r.lo && y < r.hi) else {
                continue;
            };
            total += 1;
            let dead = 1e-8;
            let xs_ok = s.u.abs() < dead || (s.u > 0.0) == (row.x_rate_sign > 0);
            let zs_ok = s.v.abs() < dead || (s.v > 0.0) == (row.z_rate_sign > 0);
            if !(xs_ok && zs_ok) {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("{bad} of {total} samples disagree")))
}

fn root_ordering() -> Result<(bool, String)> {
    let mut r = rng(13);
    let mut ok = true;
    for _ in 0..1000 {
        let (c, c0) = random_constant(&mut r);
        if let (_, Some((w1, w2))) = crate::classifier::w_roots(c, c0) {
            ok &= w1 <= w2;
            let pi2 = std::f64::consts::PI.powi(2);
            for w in [w1, w2] {
                let q = (pi2 - c) * w * w + 4.0 * pi2 * c0 * w - 4.0 * pi2;
                ok &= q.abs() < 1e-9 * (1.0 + (pi2 - c).abs() * w * w);
            }
        }
    }
    Ok((ok, "W1 <= W2 and both solve the quadratic".into()))
}

fn x0_periodicity() -> Result<(bool, String)> {
    let mut r = rng(14);
    let mut ok = true;
    for _ in 0..50 {
        let (cfg, init) = random_vorticity_case(&mut r)?;
        let shifted = ParticleState::new(init.x0 + 1.0, init.z0)?;
        let (a, aa) = classify(&cfg, &init)?;
        let (b, ba) = classify(&cfg, &shifted)?;
        ok &= a.kind == b.kind && aa.label == ba.label;
    }
    Ok((ok, "class unchanged under x0 -> x0 + 1".into()))
}

fn time_reversal() -> Result<(bool, String)> {
    let mut r = rng(15);
    let mut worst = 0.0_f64;
    let tol = 1e-9;
    for _ in 0..10 {
        let (cfg, init) = random_vorticity_case(&mut r)?;
        let fwd = integrate_raw_between(&cfg, 0.0, [init.x0, init.z0], &[3.0], tol)?[0];
        let back = integrate_raw_between(&cfg, 3.0, fwd, &[0.0], tol)?[0];
        worst = worst
            .max((back[0] - init.x0).abs())
            .max((back[1] - init.z0).abs());
    }
    Ok(verdict(worst / tol, 10.0, "error / tol"))
}

fn tolerance_halving() -> Result<(bool, String)> {
    let mut r = rng(16);
    let mut worst = 0.0_f64;
    let tol = 1e-8;
    for _ in 0..10 {
        let (cfg, init) = random_vorticity_case(&mut r)?;
        let a = integrate_raw(&cfg, &init, 3.0, tol)?;
        let b = integrate_raw(&cfg, &init, 3.0, tol / 2.0)?;
        for (p, q) in a.samples.iter().zip(&b.samples) {
            worst = worst.max((p.x - q.x).abs()).max((p.z - q.z).abs());
        }
    }
    Ok(verdict(worst / (tol / 2.0), 10.0, "change / smaller tol"))
}

fn empirical_period() -> Result<(bool, String)> {
    let mut r = rng(17);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let (cfg, init) = random_vorticity_case(&mut r)?;
        let period = orbit_period(&first_integral(&cfg, &init)?)?.period;
        let (emp, _) =
            classify_initial_data(&cfg, &init, 10.0, 1e-10, &EmpiricalOptions::default())?;
        let measured = emp.period.expect("periodic orbit");
        worst = worst.max(((measured - period) / period).abs());
    }
    Ok(verdict(worst, 1e-4, "relative gap"))
}

fn height_positive() -> Result<(bool, String)> {
    let mut r = rng(18);
    let mut min_z = f64::INFINITY;
    for _ in 0..10 {
        let cfg = FlowConfig::from_shear(r.gen_range(-3.0..3.0), r.gen_range(-5.0..5.0))?;
        let init = ParticleState::new(r.gen_range(0.0..1.0), r.gen_range(0.05..1.0))?;
        let t = integrate_raw(&cfg, &init, 3.0, 1e-9)?;
        min_z = t.samples.iter().map(|s| s.z).fold(min_z, f64::min);
    }
    Ok((min_z > 0.0, format!("min z = {min_z:.3e}")))
}

fn sample_trajectory() -> Result<Trajectory<f64>> {
    let cfg = FlowConfig::from_shear(0.5, -0.54)?;
    let init = ParticleState::new(0.5, 0.5)?;
    crate::trace::trace(
        &cfg,
        &init,
        &crate::trace::TraceOptions {
            t_max: 2.0,
            dt: 1e-3,
            ..Default::default()
        },
    )
}

fn io_determinism() -> Result<(bool, String)> {
    let a = sample_trajectory()?;
    let b = sample_trajectory()?;
    let same = export_csv(&a)? == export_csv(&b)?
        && export_json(&a)? == export_json(&b)?
        && export_svg(&a)? == export_svg(&b)?;
    Ok((same, "two runs give identical bytes".into()))
}

fn io_round_trips() -> Result<(bool, String)> {
    let t = sample_trajectory()?;
    let rows = parse_csv(&export_csv(&t)?)?;
    let mut worst = 0.0_f64;
    for (row, s) in rows.iter().zip(&t.samples) {
        for (a, b) in row.iter().zip([s.t, s.x, s.z, s.u, s.v]) {
            worst = worst.max((a - b).abs() / b.abs().max(1e-300));
        }
    }
    let doc = parse_json(&export_json(&t)?)?;
    let exact = doc.samples.len() == t.len()
        && doc
            .samples
            .iter()
            .zip(&t.samples)
            .all(|(r, s)| r == &[s.t, s.x, s.z, s.u, s.v]);
    Ok((
        rows.len() == t.len() && worst <= 5e-12 && exact,
        format!("CSV relative error {worst:.1e}, JSON exact: {exact}"),
    ))
}

fn svg_structure() -> Result<(bool, String)> {
    let svg = String::from_utf8(export_svg(&sample_trajectory()?)?).expect("ASCII");
    let ok = svg.starts_with("<?xml")
        && svg.matches("<polyline").count() == 1
        && svg.matches("<text").count() == 1
        && svg.trim_end().ends_with("</svg>");
    Ok((ok, "one polyline, one text, closed root".into()))
}
