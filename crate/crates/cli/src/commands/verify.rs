use pilotwave::dynamics::{backtrack, IntegratorConfig};
use pilotwave::modes::tables::{self, BALL_CAVITY, BALL_SET, DISK_CAVITY, DISK_SET};
use pilotwave::modes::{
    continuity_residual, dirac_residual, eigenmode_2d, eigenmode_3d, majorana_from_dirac, plane_wave_dirac,
    solve_eigenvalues_2d, solve_eigenvalues_3d, PlaneWaveSpec,
};
use pilotwave::relaxation::{evolve_density, LatticeGrid};
use pilotwave::specfun::{bessel_j, bessel_k, sph_bessel_j, sph_bessel_k};
use pilotwave::spinors::{velocity, Dimension, SpinorField, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::RunContext;
use crate::system::{build_system, resolve_energy};

/// Largest accepted jump of the spinor across the cavity wall, relative.
const BOUNDARY_TOL: f64 = 1e-6;
const LUMINAL_TOL: f64 = 1e-10;
const LUMINAL_POINTS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn special_functions() -> Check {
    let cases = [
        ("K_0(1)", bessel_k(0, 1.0).unwrap_or(f64::NAN), 0.42102443824070834),
        ("K_1(1)", bessel_k(1, 1.0).unwrap_or(f64::NAN), 0.6019072301972346),
        ("J_1(1)", bessel_j(1, 1.0), 0.44005058574493355),
        ("j_1(1)", sph_bessel_j(1, 1.0).unwrap_or(f64::NAN), 0.30116867893975674),
        ("k_1(1)", sph_bessel_k(1, 1.0).unwrap_or(f64::NAN), 0.7357588823428847),
    ];
    let worst = cases
        .iter()
        .map(|(n, a, b)| (*n, rel(*a, *b)))
        .fold(("", 0.0f64), |acc, c| if c.1.is_nan() || c.1 > acc.1 { c } else { acc });
    let zero = bessel_j(0, 2.404825557695773).abs();
    check(
        "special functions",
        worst.1 < 1e-12 && zero < 1e-12,
        format!(
            "worst relative error {:.2e} ({}), |J_0(j_01)| = {zero:.1e}",
            worst.1, worst.0
        ),
    )
}

fn eigenvalue_goldens() -> Check {
    let mut worst: f64 = 0.0;
    let mut note = String::new();
    for d in DISK_SET {
        let e = solve_eigenvalues_2d(&DISK_CAVITY, d.qn)
            .ok()
            .and_then(|r| r.first().copied());
        let err = e.map_or(f64::INFINITY, |e| rel(e, d.energy));
        if err > worst {
            worst = err;
            note = format!("qn={}", d.qn);
        }
    }
    for b in BALL_SET {
        let roots = solve_eigenvalues_3d(&BALL_CAVITY, b.kappa).unwrap_or_default();
        let err = tables::closest_root(&roots, b.energy).map_or(f64::INFINITY, |e| rel(e, b.energy));
        if err > worst {
            worst = err;
            note = format!("kappa={}", b.kappa);
        }
    }
    check(
        "eigenvalue goldens",
        worst <= 1e-8,
        format!("worst relative deviation {worst:.2e} ({note})"),
    )
}

fn random_point(rng: &mut ChaCha8Rng, dim: Dimension, half: f64) -> Vec3 {
    let mut x = [0.0; 3];
    for c in x.iter_mut().take(dim.spatial()) {
        *c = rng.gen_range(-half..half);
    }
    x
}

/// `max ||v| − 1|` (Majorana) or `max(|v| − 1)` (Dirac) over random points
/// above the node threshold.
fn speed_excess(field: &dyn SpinorField, majorana: bool, half: f64, seed: u64, cfg: &IntegratorConfig) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..LUMINAL_POINTS {
        let x = random_point(&mut rng, field.dimension(), half);
        let t = rng.gen_range(0.0..50.0);
        if let Ok(v) = velocity(field, t, &x, cfg.node_threshold) {
            let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            worst = worst.max(if majorana { (s - 1.0).abs() } else { s - 1.0 });
        }
    }
    worst
}

fn luminality(cfg: &IntegratorConfig) -> CliResult<Check> {
    let num = |e: pilotwave::modes::ModesError| CliError::Numerical(e.to_string());
    let wave = plane_wave_dirac(&PlaneWaveSpec::new([0.0, 0.0, 3.0], 5.0), Dimension::Three).map_err(num)?;
    let wave_m = majorana_from_dirac(wave, 2.0).map_err(num)?;
    let disk = tables::disk_dirac().map_err(num)?;
    let disk_m = tables::disk_majorana().map_err(num)?;
    let ball_m = tables::ball_majorana().map_err(num)?;
    let majorana = [
        speed_excess(&wave_m, true, 5.0, 1, cfg),
        speed_excess(&disk_m, true, 6.0, 2, cfg),
        speed_excess(&ball_m, true, 6.0, 3, cfg),
    ];
    let dirac = speed_excess(&disk, false, 6.0, 4, cfg);
    let worst = majorana.iter().copied().fold(0.0, f64::max);
    Ok(check(
        "luminality",
        worst < LUMINAL_TOL && dirac <= 1e-12,
        format!("Majorana max ||v|-1| = {worst:.2e}, Dirac max |v|-1 = {dirac:.2e}"),
    ))
}

fn field_equations() -> CliResult<Check> {
    let disk = tables::disk_dirac().map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut worst: f64 = 0.0;
    for &x in &[[1.0, 2.0, 0.0], [-3.1, 0.4, 0.0], [0.2, -4.4, 0.0], [5.8, 1.0, 0.0]] {
        worst = worst.max(dirac_residual(&disk, 1.3, &x, 1e-4));
        worst = worst.max(continuity_residual(&disk, 1.3, &x, 1e-4).abs());
    }
    Ok(check(
        "field equations",
        worst < 1e-6,
        format!("max Dirac/continuity residual {worst:.2e}"),
    ))
}

fn equivariance(cfg: &IntegratorConfig) -> CliResult<Check> {
    let field = tables::disk_dirac().map_err(|e| CliError::Numerical(e.to_string()))?;
    let grid = LatticeGrid::square(4.0, 6);
    let rho = |x: &Vec3| field.evaluate(0.0, x).norm_sqr();
    let d = evolve_density(&field, &rho, &grid, 0.0, 5.0, cfg).map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut worst: f64 = 0.0;
    for (f, x) in grid.points().enumerate() {
        if d.good[f] {
            worst = worst.max(rel(d.values[f], field.evaluate(5.0, &x).norm_sqr()));
        }
    }
    Ok(check(
        "equivariance",
        worst < 1e-3 && d.good_fraction() >= 0.99,
        format!(
            "max relative deviation {worst:.2e}, good fraction {:.3}",
            d.good_fraction()
        ),
    ))
}

/// Boundary continuity of every configured mode at its listed energy.
fn config_continuity(cfg: &ExperimentConfig) -> CliResult<Vec<Check>> {
    let sys = &cfg.system;
    let Some(cavity) = sys.cavity else {
        return Ok(Vec::new());
    };
    let mut checks = Vec::new();
    for m in &sys.modes {
        let e = match m.energy {
            Some(e) => e,
            None => resolve_energy(m, sys.dimension, &cavity)?,
        };
        let (name, mismatch) = match sys.dimension {
            Dimension::Two => {
                let qn = m.qn.unwrap_or(0);
                let mode = eigenmode_2d(&cavity, qn, e, m.phase, 1.0).map_err(|e| CliError::Config(e.to_string()))?;
                (format!("qn={qn}"), mode.boundary_mismatch())
            }
            Dimension::Three => {
                let k = m.kappa.unwrap_or(0);
                let mode = eigenmode_3d(
                    &cavity,
                    k,
                    m.j.expect("validated"),
                    m.j3.expect("validated"),
                    e,
                    m.phase,
                    1.0,
                )
                .map_err(|e| CliError::Config(e.to_string()))?;
                (format!("kappa={k}"), mode.boundary_mismatch())
            }
        };
        checks.push(check(
            &format!("boundary continuity {name}"),
            mismatch < BOUNDARY_TOL,
            format!("E = {e}: continuity residual at r = R is {mismatch:.3e} (limit {BOUNDARY_TOL:.0e})"),
        ));
    }
    Ok(checks)
}

fn config_round_trip(cfg: &ExperimentConfig) -> CliResult<Check> {
    let system = build_system(cfg, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let half = system.cavity.map_or(1.0, |c| 0.8 * c.radius / std::f64::consts::SQRT_2);
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    let fields = system.selected(cfg);
    for (_, f) in &fields {
        for _ in 0..5 {
            let x = random_point(&mut rng, system.dimension, half);
            let bt =
                backtrack(f.as_ref(), x, 5.0, 0.0, &cfg.integrator).map_err(|e| CliError::Config(e.to_string()))?;
            if bt.quality.is_good() {
                worst = worst.max(bt.closure);
            } else {
                bad += 1;
            }
        }
    }
    Ok(check(
        "configured round trips",
        bad == 0,
        format!("{bad} uncertified of {}, worst closure {worst:.2e}", 5 * fields.len()),
    ))
}

/// Run the built-in invariant suite, plus configuration-specific checks
/// when `cfg` is given. Failing checks are reported, not returned as
/// errors; see [`VerifyReport::into_result`].
pub fn cmd_verify(cfg: Option<&ExperimentConfig>, ctx: Option<&RunContext>) -> CliResult<VerifyReport> {
    let integrator = cfg.map(|c| c.integrator).unwrap_or_default();
    let mut checks = vec![
        special_functions(),
        eigenvalue_goldens(),
        luminality(&integrator)?,
        field_equations()?,
        equivariance(&integrator)?,
    ];
    if let Some(cfg) = cfg {
        let cont = config_continuity(cfg)?;
        let consistent = cont.iter().all(|c| c.passed);
        checks.extend(cont);
        if consistent {
            checks.push(config_round_trip(cfg)?);
        }
    }
    let report = VerifyReport { checks };
    if let Some(ctx) = ctx {
        ctx.write_json("verify.json", &report)?;
    }
    Ok(report)
}

impl VerifyReport {
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    }

    pub fn into_result(self) -> CliResult<Self> {
        if self.passed() {
            return Ok(self);
        }
        let msg: Vec<String> = self.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        Err(CliError::Verification(msg.join("; ")))
    }
}
