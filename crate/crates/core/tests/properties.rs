use std::f64::consts::PI;

use proptest::prelude::*;

use wavetraj::classifier::{classify, w_roots};
use wavetraj::elliptic::{elliptic_f, jacobi, legendre_reduce_general, quartic};
use wavetraj::io::{export_csv, export_json, parse_csv, parse_json};
use wavetraj::irrotational::ClosedForm;
use wavetraj::model::{velocity_field, Sample};
use wavetraj::selftest::well_separated;
use wavetraj::vorticity::{first_integral, integrate_orbit, phase_energy};
use wavetraj::{FlowConfig, ParticleState, Trajectory};

fn config() -> impl Strategy<Value = FlowConfig> {
    (-2.5..2.5_f64, prop_oneof![-4.0..-0.05_f64, 0.05..4.0_f64])
        .prop_map(|(c0, shear)| FlowConfig::from_shear(c0, shear).unwrap())
}

fn start() -> impl Strategy<Value = ParticleState> {
    (0.02..0.98_f64, 0.05..=1.0_f64).prop_map(|(x0, z0)| ParticleState::new(x0, z0).unwrap())
}

/// Composite Simpson on `[0, y]`.
fn simpson(f: impl Fn(f64) -> f64, y: f64, n: usize) -> f64 {
    let h = y / n as f64;
    let mut acc = f(0.0) + f(y);
    for i in 1..n {
        acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_identities(u in -10.0..10.0_f64, m in 0.0..=1.0_f64) {
        let (sn, cn, dn) = jacobi(u, m).unwrap();
        prop_assert!((sn * sn + cn * cn - 1.0).abs() < 1e-12);
        prop_assert!((dn * dn + m * sn * sn - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_integral_is_odd_and_increasing(
        phi in 0.0..6.0_f64,
        step in 1e-3..1.0_f64,
        m in 0.0..0.999_f64,
    ) {
        let a = elliptic_f(phi, m).unwrap();
        let b = elliptic_f(phi + step, m).unwrap();
        prop_assert!(b > a);
        prop_assert!((elliptic_f(-phi, m).unwrap() + a).abs() <= 1e-14 * a.abs().max(1.0));
    }

    #[test]
    fn reduction_matches_direct_integral(
        c0 in -3.0..3.0_f64,
        excess in 0.5..20.0_f64,
        y in -5.0..5.0_f64,
    ) {
        let c = PI * PI * (c0 * c0 + excess);
        let red = legendre_reduce_general(c, c0).unwrap();
        prop_assert!(red.k_squared > 0.0 && red.k_squared < 1.0);
        let direct = simpson(|s| 1.0 / quartic(c, c0, s).sqrt(), y, 4000);
        let reduced = red.integral_to(y).unwrap();
        prop_assert!((direct - reduced).abs() <= 1e-9 * direct.abs().max(1e-3));
    }

    #[test]
    fn w_roots_are_ordered_roots(c0 in -3.0..3.0_f64, c in 0.1..80.0_f64) {
        let pi2 = PI * PI;
        let (delta, roots) = w_roots(c, c0);
        prop_assert!((delta - 16.0 * pi2 * (pi2 * c0 * c0 + pi2 - c)).abs() <= 1e-9 * delta.abs().max(1.0));
        if let Some((w1, w2)) = roots {
            prop_assert!(w1 <= w2);
            for w in [w1, w2] {
                let p = (pi2 - c) * w * w + 4.0 * pi2 * c0 * w - 4.0 * pi2;
                prop_assert!(p.abs() <= 1e-8 * (1.0 + w * w) * (pi2 + c));
            }
        }
    }

    #[test]
    fn class_is_periodic_in_x0(cfg in config(), init in start()) {
        let (a, analysis) = classify(&cfg, &init).unwrap();
        prop_assume!(well_separated(&analysis));
        let shifted = ParticleState::new(init.x0 + 1.0, init.z0).unwrap();
        let (b, _) = classify(&cfg, &shifted).unwrap();
        prop_assert_eq!(a.kind, b.kind);
        prop_assert_eq!(a.theorem_label, b.theorem_label);
    }

    #[test]
    fn phase_energy_is_conserved(cfg in config(), init in start()) {
        let fi = first_integral(&cfg, &init).unwrap();
        prop_assume!(fi.condition_met);
        let traj = integrate_orbit(&cfg, &init, 1.0, 1e-4).unwrap();
        for s in traj.samples.iter().step_by(50) {
            let x_phase = 2.0 * PI * (s.x - s.t);
            let e = phase_energy(x_phase, 2.0 * PI * (s.u - 1.0), cfg.c0);
            prop_assert!((e - fi.c).abs() <= 1e-8 * fi.c.abs().max(1.0));
            prop_assert!(s.z > 0.0);
        }
    }

    #[test]
    fn closed_form_solves_field_equations(
        c0 in -3.0..3.0_f64,
        init in start(),
        t in 0.05..2.0_f64,
    ) {
        let cfg = FlowConfig::irrotational(c0);
        let form = ClosedForm::new(&cfg, &init).unwrap();
        let h = 2e-4;
        let dx = (-form.x(t + 2.0 * h) + 8.0 * form.x(t + h) - 8.0 * form.x(t - h)
            + form.x(t - 2.0 * h)) / (12.0 * h);
        let z = form.z(t).unwrap();
        prop_assert!(z > 0.0);
        let f = velocity_field(form.x(t), z, t, &cfg);
        prop_assert!((dx - f.u).abs() < 1e-7 * (1.0 + c0.abs()).powi(4));
    }

    #[test]
    fn exports_round_trip(
        rows in prop::collection::vec((-1e6..1e6_f64, 1e-6..1.0_f64), 1..40),
        c0 in -3.0..3.0_f64,
    ) {
        let cfg = FlowConfig::irrotational(c0);
        let init = ParticleState::new(0.3, 0.5).unwrap();
        let samples: Vec<Sample<f64>> = rows
            .iter()
            .enumerate()
            .map(|(i, &(x, z))| Sample::at(i as f64 * 0.1, x, z, &cfg))
            .collect();
        let traj = Trajectory::new(cfg, init, samples);
        let doc = parse_json(&export_json(&traj).unwrap()).unwrap();
        let csv = parse_csv(&export_csv(&traj).unwrap()).unwrap();
        prop_assert_eq!(doc.samples.len(), traj.len());
        for ((j, c), s) in doc.samples.iter().zip(&csv).zip(&traj.samples) {
            let exact = [s.t, s.x, s.z, s.u, s.v];
            prop_assert_eq!(*j, exact);
            for (a, b) in c.iter().zip(exact) {
                prop_assert!((a - b).abs() <= 5.0001e-12 * b.abs());
            }
        }
    }
}
