use std::f64::consts::TAU;

use pilotwave::dynamics::*;
use pilotwave::modes::tables::{self, DISK_CAVITY};
use pilotwave::modes::*;
use pilotwave::spinors::{Dimension, SpinorField, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dist(a: &Vec3, b: &Vec3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn speed(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn tight() -> IntegratorConfig {
    IntegratorConfig {
        rel_tol: 1e-11,
        abs_tol: 1e-13,
        ..IntegratorConfig::default()
    }
}

fn z_wave(m: f64, p: f64) -> PlaneWave {
    plane_wave_dirac(&PlaneWaveSpec::new([0.0, 0.0, p], m), Dimension::Three).unwrap()
}

#[test]
fn dirac_plane_wave_moves_in_straight_line() {
    let field = z_wave(5.0, 3.0);
    let traj = integrate(&field, [0.0; 3], 0.0, 100.0, &tight(), &Sampling::Every(1.0)).unwrap();
    assert_eq!(traj.quality, Quality::Good);
    let end = traj.samples.last().unwrap();
    assert_eq!(end.t, 100.0);
    let expected = [0.0, 0.0, 300.0 / 34f64.sqrt()];
    assert!(dist(&end.x, &expected) < 1e-9, "{:?}", end.x);
    for s in &traj.samples {
        assert!(s.x[0].abs() < 1e-12 && s.x[1].abs() < 1e-12);
        assert!((s.x[2] - 3.0 / 34f64.sqrt() * s.t).abs() < 1e-9);
    }
}

/// From the origin the v-field integrates to
/// `x = sin(ωt)/2m, y = (1 - cos ωt)/2m, z = pt/E` with `ω = 2m²/E`.
fn helix_oracle(m: f64, p: f64, t: f64) -> Vec3 {
    let e = (m * m + p * p).sqrt();
    let w = 2.0 * m * m / e;
    [(w * t).sin() / (2.0 * m), (1.0 - (w * t).cos()) / (2.0 * m), p * t / e]
}

#[test]
fn majorana_plane_wave_traces_helix() {
    let (m, p): (f64, f64) = (5.0, 3.0);
    let e = (m * m + p * p).sqrt();
    let field = majorana_from_dirac(z_wave(m, p), 2.0).unwrap();
    let traj = integrate(&field, [0.0; 3], 0.0, 20.0, &tight(), &Sampling::Every(0.01)).unwrap();
    assert_eq!(traj.quality, Quality::Good);
    let r0 = 1.0 / (2.0 * m);
    let mut angle = 0.0;
    let mut prev = -std::f64::consts::FRAC_PI_2;
    for s in &traj.samples {
        let o = helix_oracle(m, p, s.t);
        assert!(dist(&s.x, &o) < 1e-7, "t={}: {:?} vs {o:?}", s.t, s.x);
        let (dx, dy) = (s.x[0], s.x[1] - r0);
        assert!(((dx * dx + dy * dy).sqrt() - r0).abs() < 1e-6);
        assert!((s.x[2] - p / e * s.t).abs() < 1e-6 * s.t.max(1.0));
        assert!((speed(&s.v) - 1.0).abs() < 1e-8);
        let a = dy.atan2(dx);
        let mut d = a - prev;
        d -= TAU * (d / TAU).round();
        angle += d;
        prev = a;
    }
    let omega = angle / 20.0;
    let expected = 2.0 * m * m / e;
    assert!((omega - expected).abs() / expected < 1e-5, "{omega} vs {expected}");

    let fit = helix_fit(&traj.samples, Dimension::Three).unwrap();
    assert!((fit.radius - r0).abs() < 1e-3, "{fit:?}");
    assert!((fit.angular_frequency - expected).abs() / expected < 1e-2, "{fit:?}");
    assert!((fit.drift - p / e).abs() < 1e-2);
}

#[test]
fn max_step_resolves_helix() {
    let field = majorana_from_dirac(z_wave(5.0, 3.0), 2.0).unwrap();
    let cfg = IntegratorConfig {
        max_step: 100.0,
        ..IntegratorConfig::default()
    };
    let period = std::f64::consts::PI * 34f64.sqrt() / 25.0;
    assert!((effective_max_step(&field, &cfg) - 0.1 * period).abs() < 1e-12);
    assert_eq!(effective_max_step(&z_wave(5.0, 3.0), &cfg), 100.0);
}

#[test]
fn resting_wave_leaves_particle_in_place() {
    // A single cavity mode circulates, so the static case uses p = 0.
    for dim in [Dimension::Two, Dimension::Three] {
        let field = plane_wave_dirac(&PlaneWaveSpec::new([0.0; 3], 2.0), dim).unwrap();
        let x0 = [0.3, -1.2, if dim == Dimension::Three { 0.7 } else { 0.0 }];
        let traj = integrate(&field, x0, 0.0, 50.0, &tight(), &Sampling::Every(5.0)).unwrap();
        assert_eq!(traj.quality, Quality::Good);
        for s in &traj.samples {
            assert!(dist(&s.x, &x0) < 1e-14);
            assert!(speed(&s.v) < 1e-14);
        }
    }
}

#[test]
fn backward_integration_retraces() {
    let field = tables::disk_dirac().unwrap();
    let cfg = tight();
    let x0 = [1.0, 2.0, 0.0];
    let fwd = integrate(&field, x0, 0.0, 30.0, &cfg, &Sampling::Every(0.5)).unwrap();
    assert_eq!(fwd.quality, Quality::Good);
    let back = integrate(&field, fwd.x_end, 30.0, 0.0, &cfg, &Sampling::Every(0.5)).unwrap();
    assert_eq!(back.quality, Quality::Good);
    assert!(back.samples.windows(2).all(|w| w[1].t < w[0].t));
    assert!(fwd.samples.windows(2).all(|w| w[1].t > w[0].t));
    assert_eq!(back.samples.len(), fwd.samples.len());
    for (a, b) in fwd.samples.iter().zip(back.samples.iter().rev()) {
        assert!((a.t - b.t).abs() < 1e-12);
        assert!(dist(&a.x, &b.x) < 1e-6, "t={} {:?} {:?}", a.t, a.x, b.x);
    }
}

#[test]
fn samples_at_explicit_times() {
    let field = z_wave(1.0, 1.0);
    let ts = vec![0.0, 0.25, 1.0, 3.5];
    let traj = integrate(&field, [0.0; 3], 0.0, 3.5, &tight(), &Sampling::At(ts.clone())).unwrap();
    let got: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    assert_eq!(got, ts);
    let steps = integrate(&field, [0.0; 3], 0.0, 3.5, &tight(), &Sampling::Steps).unwrap();
    assert_eq!(steps.samples.len(), steps.steps + 1);
}

#[test]
fn single_mode_node_is_flagged() {
    let e = solve_eigenvalues_2d(&DISK_CAVITY, 1).unwrap()[0];
    let mode = eigenmode_2d(&DISK_CAVITY, 1, e, 0.0, 1.0).unwrap();
    assert!(mode.evaluate(0.0, &[0.0; 3]).norm_sqr() == 0.0);
    let cfg = IntegratorConfig::default();
    let traj = integrate(&mode, [0.0; 3], 0.0, 1.0, &cfg, &Sampling::Steps).unwrap();
    assert_eq!(traj.quality, Quality::NearNode);
    let bt = backtrack(&mode, [0.0; 3], 1.0, 0.0, &cfg).unwrap();
    assert_eq!(bt.quality, Quality::NearNode);
}

#[test]
fn backtrack_to_same_time_is_identity() {
    let field = tables::disk_majorana().unwrap();
    let x = [0.5, 3.0, 0.0];
    let bt = backtrack(&field, x, 4.0, 4.0, &IntegratorConfig::default()).unwrap();
    assert_eq!(bt.x, x);
    assert_eq!(bt.quality, Quality::Good);
}

fn random_disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Vec3 {
    loop {
        let x = rng.gen_range(-radius..radius);
        let y = rng.gen_range(-radius..radius);
        if x * x + y * y < radius * radius {
            return [x, y, 0.0];
        }
    }
}

#[test]
fn backtracking_round_trips_close() {
    let dirac = tables::disk_dirac().unwrap();
    let majorana = tables::disk_majorana().unwrap();
    let cfg = IntegratorConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let x = random_disk_point(&mut rng, 4.5);
        let field: &dyn SpinorField = if i % 2 == 0 { &dirac } else { &majorana };
        let bt = backtrack(field, x, 10.0, 0.0, &cfg).unwrap();
        assert_eq!(bt.quality, Quality::Good, "{x:?} closure {}", bt.closure);
        assert!(bt.closure < cfg.round_trip_tol);
    }
}

#[test]
fn loose_round_trip_tolerance_is_reported() {
    let field = tables::disk_dirac().unwrap();
    let cfg = IntegratorConfig {
        rel_tol: 1e-3,
        abs_tol: 1e-3,
        round_trip_tol: 1e-14,
        ..IntegratorConfig::default()
    };
    let bt = backtrack(&field, [1.0, 1.0, 0.0], 20.0, 0.0, &cfg).unwrap();
    assert_eq!(bt.quality, Quality::RoundTripMismatch);
    assert!(bt.closure > 1e-14);
}

#[test]
fn cavity_trajectories_stay_confined() {
    let dirac = tables::disk_dirac().unwrap();
    let majorana = tables::disk_majorana().unwrap();
    let cfg = IntegratorConfig::default();
    for x0 in [[0.0, 3.0, 0.0], [4.0, 4.0, 0.0], [-2.0, -1.0, 0.0]] {
        for field in [&dirac as &dyn SpinorField, &majorana] {
            let traj = integrate(field, x0, 0.0, 200.0, &cfg, &Sampling::Every(0.5)).unwrap();
            assert_eq!(traj.quality, Quality::Good);
            for s in &traj.samples {
                assert!(speed(&s.x) < DISK_CAVITY.radius + 5.0);
                let v = speed(&s.v);
                match field.kind() {
                    pilotwave::spinors::FieldKind::Majorana => assert!((v - 1.0).abs() < 1e-8),
                    pilotwave::spinors::FieldKind::Dirac => assert!(v <= 1.0 + 1e-8),
                }
            }
        }
    }
}

fn mean_pairwise(points: &[Vec3]) -> f64 {
    let mut sum = 0.0;
    let mut n = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            sum += dist(&points[i], &points[j]);
            n += 1;
        }
    }
    sum / n as f64
}

#[test]
fn majorana_trajectories_stay_together() {
    let seeds = [
        [0.0, 3.0, 0.0],
        [0.0, 3.05, 0.0],
        [0.0, 2.95, 0.0],
        [0.05, 3.0, 0.0],
        [-0.05, 3.0, 0.0],
    ];
    let cfg = IntegratorConfig::default();
    let finals = |field: &dyn SpinorField| -> Vec<Vec3> {
        seeds
            .iter()
            .map(|&x| {
                let end = flow(field, x, 0.0, 200.0, &cfg).unwrap();
                assert_eq!(end.quality, Quality::Good);
                end.x
            })
            .collect()
    };
    let d = mean_pairwise(&finals(&tables::disk_dirac().unwrap()));
    let m = mean_pairwise(&finals(&tables::disk_majorana().unwrap()));
    assert!(d > m, "Dirac spread {d}, Majorana spread {m}");
}

#[test]
fn halving_tolerance_converges() {
    let field = tables::disk_dirac().unwrap();
    let coarse = IntegratorConfig {
        rel_tol: 1e-8,
        abs_tol: 1e-12,
        ..IntegratorConfig::default()
    };
    let fine = IntegratorConfig {
        rel_tol: 5e-9,
        ..coarse
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let x = random_disk_point(&mut rng, 4.5);
        let a = flow(&field, x, 0.0, 5.0, &coarse).unwrap();
        let b = flow(&field, x, 0.0, 5.0, &fine).unwrap();
        worst = worst.max(dist(&a.x, &b.x));
    }
    assert!(worst < 10.0 * fine.rel_tol, "{worst}");
}

#[test]
fn table_majorana_loops_near_half_unit() {
    let field = tables::disk_majorana().unwrap();
    let traj = integrate(
        &field,
        [4.0, 4.0, 0.0],
        0.0,
        50.0,
        &IntegratorConfig::default(),
        &Sampling::Every(0.01),
    )
    .unwrap();
    assert_eq!(traj.quality, Quality::Good);
    let loops = detect_loops(&traj.samples, Dimension::Two);
    assert!(loops.len() > 3, "{}", loops.len());
    let mut d: Vec<f64> = loops.iter().map(|l| l.diameter).collect();
    d.sort_by(f64::total_cmp);
    let median = d[d.len() / 2];
    assert!((median - 0.5).abs() <= 0.25, "median loop diameter {median}");
}

#[test]
fn invalid_configs_rejected() {
    let field = z_wave(1.0, 1.0);
    let bad = IntegratorConfig {
        rel_tol: 0.0,
        ..IntegratorConfig::default()
    };
    assert!(integrate(&field, [0.0; 3], 0.0, 1.0, &bad, &Sampling::Steps).is_err());
    assert!(integrate(
        &field,
        [0.0; 3],
        0.0,
        1.0,
        &IntegratorConfig::default(),
        &Sampling::Every(-1.0)
    )
    .is_err());
    let nan = IntegratorConfig {
        max_step: f64::NAN,
        ..IntegratorConfig::default()
    };
    assert!(flow(&field, [0.0; 3], 0.0, 1.0, &nan).is_err());
}

#[test]
fn csv_layout() {
    let field = tables::disk_dirac().unwrap();
    let traj = integrate(
        &field,
        [1.0, 0.0, 0.0],
        0.0,
        1.0,
        &IntegratorConfig::default(),
        &Sampling::Every(0.5),
    )
    .unwrap();
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &traj).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x,y,vx,vy,quality");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f.len(), 6);
        assert_eq!(f[5], "good");
        for v in &f[..5] {
            v.parse::<f64>().unwrap();
        }
    }
    let field3 = z_wave(1.0, 1.0);
    let t3 = integrate(
        &field3,
        [0.0; 3],
        0.0,
        1.0,
        &IntegratorConfig::default(),
        &Sampling::Every(1.0),
    )
    .unwrap();
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &t3).unwrap();
    assert!(String::from_utf8(buf)
        .unwrap()
        .starts_with("t,x,y,z,vx,vy,vz,quality\n"));
}
