use std::f64::consts::PI;

use pilotwave::dynamics::{integrate, IntegratorConfig, Sampling};
use pilotwave::modes::tables::{self, DISK_CAVITY};
use pilotwave::relaxation::*;
use pilotwave::spinors::{SpinorField, Vec3};
use proptest::prelude::*;

fn radius(x: &Vec3) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn initial_densities_at_center_and_edge() {
    assert!(rho1(5.0, 5.0).abs() < 1e-18);
    assert!(rho2(5.0, 5.0).abs() < 1e-18);
    assert_eq!(rho1(5.1, 5.0), 0.0);
    assert_eq!(rho2(7.0, 5.0), 0.0);
    assert!((rho1(0.0, 5.0) - 0.042818458470649).abs() < 1e-14);
    assert!((rho2(0.0, 5.0) - 0.005278980085487).abs() < 1e-15);
}

#[test]
fn initial_densities_are_normalized() {
    for r in [1.0, 5.0, 7.3] {
        let a = simpson(|s| 2.0 * PI * s * rho1(s, r), 0.0, r, 2000);
        let b = simpson(|s| 4.0 * PI * s * s * rho2(s, r), 0.0, r, 2000);
        assert!((a - 1.0).abs() < 1e-10, "{a}");
        assert!((b - 1.0).abs() < 1e-10, "{b}");
    }
}

#[test]
fn initial_densities_sum_to_one_on_lattices() {
    let g = LatticeGrid::square(5.0, 400);
    let d = DensityGrid::from_fn(&g, 0.0, |x| rho1(radius(x), 5.0));
    assert!((d.integral() - 1.0).abs() < 1e-6);
    let g3 = LatticeGrid::new(vec![(-5.0, 5.0); 3], vec![100; 3]).unwrap();
    let d3 = DensityGrid::from_fn(&g3, 0.0, |x| rho2(radius(x), 5.0));
    assert!((d3.integral() - 1.0).abs() < 1e-6);
}

#[test]
fn lattice_coordinates_follow_closed_form() {
    let g = LatticeGrid::square(5.0, 400);
    for k in 1..=400usize {
        let expected = -5.0 + k as f64 * (10.0 / 400.0) - 10.0 / 800.0;
        assert_eq!(g.coordinate(0, k - 1).to_bits(), expected.to_bits());
        assert_eq!(g.coordinate(1, k - 1).to_bits(), expected.to_bits());
    }
    let g3 = LatticeGrid::new(vec![(-5.0, 5.0), (-5.0, 5.0), (-0.5, 0.5)], vec![300, 300, 30]).unwrap();
    for j in 1..=300usize {
        let e = -5.0 + j as f64 * (10.0 / 300.0) - 10.0 / 600.0;
        assert_eq!(g3.coordinate(0, j - 1).to_bits(), e.to_bits());
    }
    for l in 1..=30usize {
        let e = -0.5 + l as f64 * (1.0 / 30.0) - 1.0 / 60.0;
        assert_eq!(g3.coordinate(2, l - 1).to_bits(), e.to_bits());
    }
    assert_eq!(g3.len(), 2_700_000);
    let p = g3.point(g3.flatten(&[0, 299, 29]));
    assert_eq!(p, [g3.coordinate(0, 0), g3.coordinate(1, 299), g3.coordinate(2, 29)]);
    for f in [0, 17, 12345, g3.len() - 1] {
        assert_eq!(g3.flatten(&g3.unflatten(f)), f);
    }
}

#[test]
fn invalid_lattices_rejected() {
    assert!(LatticeGrid::new(vec![(0.0, 1.0)], vec![3]).is_err());
    assert!(LatticeGrid::new(vec![(0.0, 1.0); 2], vec![3]).is_err());
    assert!(LatticeGrid::new(vec![(1.0, 1.0), (0.0, 1.0)], vec![3, 3]).is_err());
    assert!(LatticeGrid::new(vec![(0.0, 1.0); 2], vec![3, 0]).is_err());
    let g = LatticeGrid::square(5.0, 10);
    let d = DensityGrid::from_fn(&g, 0.0, |_| 1.0);
    assert!(coarse_grain(&d, &CoarseGrainSpec::NonOverlapping { cells: vec![3, 2] }).is_err());
    assert!(coarse_grain(&d, &CoarseGrainSpec::NonOverlapping { cells: vec![2] }).is_err());
    assert!(coarse_grain(
        &d,
        &CoarseGrainSpec::Overlapping {
            cells: vec![2, 2],
            centers: vec![0, 3]
        }
    )
    .is_err());
}

#[test]
fn cells_hold_the_expected_point_counts() {
    let g = LatticeGrid::square(5.0, 400);
    assert_eq!(points_per_cell(&g, &[20, 20]).unwrap(), 400);
    let g3 = LatticeGrid::new(vec![(-5.0, 5.0), (-5.0, 5.0), (-0.5, 0.5)], vec![300, 300, 30]).unwrap();
    // Ten by ten columns spanning the slab: 30·30·30 points each.
    assert_eq!(points_per_cell(&g3, &[10, 10, 1]).unwrap(), 27_000);
}

#[test]
fn overlapping_windows_slide_across_tiles() {
    let g = LatticeGrid::square(5.0, 400);
    let d = DensityGrid::from_fn(&g, 0.0, |x| x[0]);
    let tiles = coarse_grain(&d, &CoarseGrainSpec::NonOverlapping { cells: vec![20, 20] }).unwrap();
    let smooth = coarse_grain(
        &d,
        &CoarseGrainSpec::Overlapping {
            cells: vec![20, 20],
            centers: vec![96, 96],
        },
    )
    .unwrap();
    assert_eq!(smooth.shape, vec![96, 96]);
    assert_eq!(smooth.len(), 96 * 96);
    assert!((smooth.cell_volume - tiles.cell_volume).abs() < 1e-15);
    assert!((tiles.cell_volume - 0.25).abs() < 1e-15);
    assert_eq!(smooth.centers[0], tiles.centers[0]);
    assert_eq!(smooth.centers[smooth.len() - 1], tiles.centers[tiles.len() - 1]);
    // Consecutive windows advance by four lattice points.
    let step = smooth.centers[96][0] - smooth.centers[0][0];
    assert!((step - 4.0 * 10.0 / 400.0).abs() < 1e-12);
    for (c, v) in smooth.centers.iter().zip(&smooth.values) {
        assert!((v.unwrap() - c[0]).abs() < 1e-12);
    }
}

#[test]
fn empty_cells_are_marked() {
    let g = LatticeGrid::square(1.0, 4);
    let mut d = DensityGrid::from_fn(&g, 0.0, |_| 2.0);
    for f in 0..g.len() {
        let idx = g.unflatten(f);
        if idx[0] < 2 && idx[1] < 2 {
            d.good[f] = false;
            d.values[f] = 0.0;
        }
    }
    d.good[g.flatten(&[3, 3])] = false;
    let c = coarse_grain(&d, &CoarseGrainSpec::NonOverlapping { cells: vec![2, 2] }).unwrap();
    assert_eq!(c.values[0], None);
    assert_eq!(c.good_fraction[0], 0.0);
    assert_eq!(c.values[3], Some(2.0));
    assert_eq!(c.good_fraction[3], 0.75);
    assert_eq!(c.values[1], Some(2.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coarse_graining_constant(c in 0.0f64..10.0, n in 1usize..5, cells in 1usize..4) {
        let g = LatticeGrid::square(2.0, n * cells);
        let d = DensityGrid::from_fn(&g, 0.0, |_| c);
        let cg = coarse_grain(&d, &CoarseGrainSpec::NonOverlapping { cells: vec![cells, cells] }).unwrap();
        for v in &cg.values {
            prop_assert!((v.unwrap() - c).abs() <= 1e-12 * c.max(1.0));
        }
    }

    #[test]
    fn coarse_graining_is_linear(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        seed in proptest::collection::vec(0.0f64..1.0, 36),
        mask in proptest::collection::vec(proptest::bool::weighted(0.8), 36),
    ) {
        let g = LatticeGrid::square(1.0, 6);
        let mut d1 = DensityGrid::from_fn(&g, 0.0, |x| 1.0 + x[0] * x[1]);
        let mut d2 = DensityGrid::from_fn(&g, 0.0, |x| 0.5 + x[0]);
        d1.good = mask.clone();
        d2.good = mask.clone();
        d2 = d2.with_values(seed.clone());
        d1 = d1.with_values(d1.values.clone());
        let sum = d1.with_values(d1.values.iter().zip(&d2.values).map(|(p, q)| a * p + b * q).collect());
        for spec in [
            CoarseGrainSpec::NonOverlapping { cells: vec![3, 2] },
            CoarseGrainSpec::Overlapping { cells: vec![3, 3], centers: vec![4, 5] },
        ] {
            let c1 = coarse_grain(&d1, &spec).unwrap();
            let c2 = coarse_grain(&d2, &spec).unwrap();
            let cs = coarse_grain(&sum, &spec).unwrap();
            for i in 0..cs.len() {
                match (c1.values[i], c2.values[i], cs.values[i]) {
                    (Some(p), Some(q), Some(s)) => prop_assert!((a * p + b * q - s).abs() < 1e-12),
                    (None, None, None) => {}
                    other => prop_assert!(false, "mask mismatch {other:?}"),
                }
            }
        }
    }
}

fn disk_rho(x: &Vec3) -> f64 {
    rho1(radius(x), DISK_CAVITY.radius)
}

#[test]
fn zero_duration_transport_returns_initial_density() {
    let field = tables::disk_dirac().unwrap();
    let g = LatticeGrid::square(5.0, 12);
    let d = evolve_density(&field, &disk_rho, &g, 3.0, 3.0, &IntegratorConfig::default()).unwrap();
    for (f, x) in g.points().enumerate() {
        assert!(d.good[f]);
        assert_eq!(d.values[f], disk_rho(&x));
    }
}

#[test]
fn equilibrium_is_preserved() {
    let dirac = tables::disk_dirac().unwrap();
    let majorana = tables::disk_majorana().unwrap();
    let g = LatticeGrid::square(5.0, 14);
    let cfg = IntegratorConfig::default();
    for field in [&dirac as &dyn SpinorField, &majorana] {
        let eq0 = |x: &Vec3| field.evaluate(0.0, x).norm_sqr();
        let d = evolve_density(field, &eq0, &g, 0.0, 10.0, &cfg).unwrap();
        assert!(d.good_fraction() >= 0.99, "{}", d.good_fraction());
        for (f, x) in g.points().enumerate() {
            if d.good[f] {
                let e = field.evaluate(10.0, &x).norm_sqr();
                assert!((d.values[f] - e).abs() <= 1e-3 * e, "{x:?}: {} vs {e}", d.values[f]);
            }
        }
    }
}

#[test]
fn density_ratio_is_carried_along_a_trajectory() {
    let field = tables::disk_majorana().unwrap();
    let cfg = IntegratorConfig {
        rel_tol: 1e-11,
        abs_tol: 1e-13,
        ..IntegratorConfig::default()
    };
    let x0 = [1.3, -2.1, 0.0];
    let traj = integrate(&field, x0, 0.0, 8.0, &cfg, &Sampling::Steps).unwrap();
    let xf = traj.x_end;
    let h = 1e-9;
    let cell = LatticeGrid::new(vec![(xf[0] - h, xf[0] + h), (xf[1] - h, xf[1] + h)], vec![1, 1]).unwrap();
    assert_eq!(cell.point(0)[..2], xf[..2]);
    let d = evolve_density(&field, &disk_rho, &cell, 0.0, 8.0, &cfg).unwrap();
    assert!(d.good[0]);
    let ratio_f = d.values[0] / field.evaluate(8.0, &xf).norm_sqr();
    let ratio_i = disk_rho(&x0) / field.evaluate(0.0, &x0).norm_sqr();
    assert!((ratio_f - ratio_i).abs() < 1e-6 * ratio_i, "{ratio_f} vs {ratio_i}");
}

#[test]
fn transported_density_is_nonnegative() {
    let field = tables::disk_majorana().unwrap();
    let g = LatticeGrid::square(5.0, 10);
    let d = evolve_density(&field, &disk_rho, &g, 0.0, 5.0, &IntegratorConfig::default()).unwrap();
    assert!(d.values.iter().all(|&v| v >= 0.0));
}

#[test]
fn initial_checkpoint_distance_is_initial_mismatch() {
    let field = tables::disk_dirac().unwrap();
    let g = LatticeGrid::square(5.0, 20);
    let spec = CoarseGrainSpec::NonOverlapping { cells: vec![4, 4] };
    let cfg = IntegratorConfig::default();
    let (report, dens) = relax_field(&field, &disk_rho, &g, &spec, 0.0, &[0.0, 2.0], &cfg).unwrap();
    assert_eq!(report.checkpoints.len(), 2);
    assert_eq!(dens.len(), 2);
    let rho = DensityGrid::from_fn(&g, 0.0, disk_rho);
    let eq = DensityGrid::from_fn(&g, 0.0, |x| field.evaluate(0.0, x).norm_sqr());
    let a = coarse_grain(&rho, &spec).unwrap();
    let b = coarse_grain(&eq, &spec).unwrap();
    let direct: f64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(p, q)| (p.unwrap() - q.unwrap()).abs())
        .sum::<f64>()
        * 6.25;
    assert!((report.checkpoints[0].l1 - direct).abs() < 1e-14);
    assert_eq!(report.checkpoints[0].good_fraction, 1.0);
    let js = serde_json::to_value(&report).unwrap();
    assert_eq!(js["kind"], "dirac");
    assert_eq!(js["coarse_grain"]["mode"], "non_overlapping");
    assert_eq!(js["checkpoints"][1]["t"], 2.0);
    assert!(relax_field(
        &field,
        &disk_rho,
        &g,
        &CoarseGrainSpec::Overlapping {
            cells: vec![4, 4],
            centers: vec![5, 5]
        },
        0.0,
        &[1.0],
        &cfg
    )
    .is_err());
}

#[test]
fn single_sample_cell_is_pointwise() {
    let field = tables::disk_majorana().unwrap();
    let center = [0.0, 3.0, 0.0];
    let series = subcompton_scan(
        &field,
        &disk_rho,
        &center,
        0.1,
        1,
        0.0,
        &[0.0],
        &IntegratorConfig::default(),
    )
    .unwrap();
    let e = field.evaluate(0.0, &center).norm_sqr();
    let r = disk_rho(&center);
    assert!((series[0].abs_diff - (r - e).abs()).abs() < 1e-15);
    assert!((series[0].rel_diff - (r - e).abs() / e).abs() < 1e-13);
    assert_eq!(series[0].good_fraction, 1.0);
}

#[test]
fn subcompton_initial_mismatch_is_cell_average() {
    let field = tables::disk_dirac().unwrap();
    let center = [0.0, 3.0, 0.0];
    let n = 5;
    let series = subcompton_scan(
        &field,
        &disk_rho,
        &center,
        0.1,
        n,
        0.0,
        &[0.0, 1.0],
        &IntegratorConfig::default(),
    )
    .unwrap();
    let (mut r, mut e) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let x = [-0.05 + (i as f64 + 0.5) * 0.02, 2.95 + (j as f64 + 0.5) * 0.02, 0.0];
            r += disk_rho(&x);
            e += field.evaluate(0.0, &x).norm_sqr();
        }
    }
    let (r, e) = (r / 25.0, e / 25.0);
    assert!((series[0].abs_diff - (r - e).abs()).abs() < 1e-12);
    assert!(series[1].good_fraction > 0.9);
    let cmp = resolution_comparison(&series, &series);
    assert_eq!(cmp.mean_percent, 0.0);
    assert_eq!(cmp.tail_percent.len(), 2);
}

#[test]
fn thread_count_does_not_change_results() {
    let field = tables::disk_majorana().unwrap();
    let g = LatticeGrid::square(5.0, 8);
    let cfg = IntegratorConfig::default();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| evolve_density(&field, &disk_rho, &g, 0.0, 4.0, &cfg).unwrap())
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(
        a.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        b.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    );
    assert_eq!(a.good, b.good);
}

#[test]
fn csv_writers_emit_documented_columns() {
    let g = LatticeGrid::square(1.0, 2);
    let mut d = DensityGrid::from_fn(&g, 0.5, |x| x[0] + 2.0);
    d.good[3] = false;
    let mut buf = Vec::new();
    write_density_csv(&mut buf, &d).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "i,j,x,y,value,good");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0,0,-5.0000000000000000e-1,-5.0000000000000000e-1,"));
    assert!(lines[1].ends_with(",1"));
    assert!(lines[4].ends_with(",0"));

    let c = coarse_grain(&d, &CoarseGrainSpec::NonOverlapping { cells: vec![1, 1] }).unwrap();
    let mut buf = Vec::new();
    write_coarse_csv(&mut buf, &c).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 6);
    assert_eq!(row[5].parse::<f64>().unwrap(), 0.75);

    let pts = [SubComptonPoint {
        t: 1.0,
        rho: 2.0,
        equilibrium: 1.0,
        abs_diff: 1.0,
        rel_diff: 1.0,
        good_fraction: 0.5,
    }];
    let mut buf = Vec::new();
    write_subcompton_csv(&mut buf, &pts).unwrap();
    assert!(String::from_utf8(buf)
        .unwrap()
        .starts_with("t,abs_diff,rel_diff,good_fraction\n1.0000000000000000e0,"));

    let g3 = LatticeGrid::new(vec![(0.0, 1.0); 3], vec![1; 3]).unwrap();
    let mut buf = Vec::new();
    write_density_csv(&mut buf, &DensityGrid::from_fn(&g3, 0.0, |_| 1.0)).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("i,j,k,x,y,z,value,good\n"));
}

#[test]
fn shared_origins_match_direct_transport() {
    let field = tables::disk_majorana().unwrap();
    let grid = LatticeGrid::square(4.0, 6);
    let cfg = IntegratorConfig::default();
    let origins = Origins::compute(&field, &grid, 0.0, 3.0, &cfg).unwrap();
    let flat = |_: &Vec3| 0.01;
    for rho in [&disk_rho as &(dyn Fn(&Vec3) -> f64 + Sync), &flat] {
        let a = origins.transport(rho);
        let b = evolve_density(&field, rho, &grid, 0.0, 3.0, &cfg).unwrap();
        assert_eq!(a, b);
    }
    let spec = CoarseGrainSpec::NonOverlapping { cells: vec![2, 2] };
    let (cp, _) = checkpoint(&field, &origins, &disk_rho, &spec).unwrap();
    let (report, _) = relax_field(&field, &disk_rho, &grid, &spec, 0.0, &[3.0], &cfg).unwrap();
    assert_eq!(cp, report.checkpoints[0]);
    assert_eq!(origins.good_fraction(), cp.good_fraction);
    let overlapping = CoarseGrainSpec::Overlapping {
        cells: vec![2, 2],
        centers: vec![3, 3],
    };
    assert!(checkpoint(&field, &origins, &disk_rho, &overlapping).is_err());
}
