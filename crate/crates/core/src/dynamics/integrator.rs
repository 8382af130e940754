use super::dopri::*;
use super::{DynamicsError, IntegratorConfig, Quality, Sample, Sampling, Trajectory};
use crate::spinors::{velocity, FieldKind, SpinorField, Vec3};

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
/// Bounds on `h_old/h_new`.
const SHRINK_LIMIT: f64 = 5.0;
const GROW_LIMIT: f64 = 0.1;
const NODE_RETRIES: u32 = 3;
const MAX_STEPS: usize = 20_000_000;

/// Fraction of the helix period allowed per step for Majorana fields.
const HELIX_FRACTION: f64 = 0.1;

/// `cfg.max_step`, tightened for Majorana fields so each helix turn spans at
/// least ten steps.
pub fn effective_max_step<F: SpinorField + ?Sized>(field: &F, cfg: &IntegratorConfig) -> f64 {
    match (field.kind(), field.helix_period()) {
        (FieldKind::Majorana, Some(period)) => cfg.max_step.min(HELIX_FRACTION * period),
        _ => cfg.max_step,
    }
}

fn axpy(x: &Vec3, terms: &[(f64, &Vec3)]) -> Vec3 {
    let mut y = *x;
    for (c, k) in terms {
        for i in 0..3 {
            y[i] += c * k[i];
        }
    }
    y
}

/// One accepted step's interpolant.
pub(crate) struct Segment {
    t0: f64,
    h: f64,
    r: [Vec3; 5],
}

impl Segment {
    pub(crate) fn at(&self, t: f64) -> Vec3 {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut y = [0.0; 3];
        for i in 0..3 {
            let r = &self.r;
            y[i] = r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])));
        }
        y
    }
}

struct Outcome {
    quality: Quality,
    t: f64,
    x: Vec3,
    v: Option<Vec3>,
    steps: usize,
    rejected: usize,
}

struct Solver<'a, F: ?Sized> {
    field: &'a F,
    cfg: &'a IntegratorConfig,
    n: usize,
    max_step: f64,
}

impl<'a, F: SpinorField + ?Sized> Solver<'a, F> {
    fn new(field: &'a F, cfg: &'a IntegratorConfig) -> Result<Self, DynamicsError> {
        cfg.validate()?;
        Ok(Self {
            field,
            cfg,
            n: field.dimension().spatial(),
            max_step: effective_max_step(field, cfg),
        })
    }

    fn f(&self, t: f64, x: &Vec3) -> Option<Vec3> {
        velocity(self.field, t, x, self.cfg.node_threshold).ok()
    }

    fn scaled_norm(&self, v: &Vec3, y0: &Vec3, y1: &Vec3) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            let sc = self.cfg.abs_tol + self.cfg.rel_tol * y0[i].abs().max(y1[i].abs());
            s += (v[i] / sc).powi(2);
        }
        (s / self.n as f64).sqrt()
    }

    fn initial_step(&self, t: f64, x: &Vec3, k1: &Vec3, dir: f64) -> f64 {
        let d0 = self.scaled_norm(x, x, x);
        let d1 = self.scaled_norm(k1, x, x);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(self.max_step);
        let x1 = axpy(x, &[(dir * h0, k1)]);
        let h1 = match self.f(t + dir * h0, &x1) {
            Some(k2) => {
                let diff = [k2[0] - k1[0], k2[1] - k1[1], k2[2] - k1[2]];
                let d2 = self.scaled_norm(&diff, x, x) / h0;
                let d = d1.max(d2);
                if d <= 1e-15 {
                    (h0 * 1e-3).max(1e-6)
                } else {
                    (0.01 / d).powf(0.2)
                }
            }
            None => h0,
        };
        (100.0 * h0).min(h1).min(self.max_step)
    }

    /// Integrate from `(t0, x0)` to `t1`, calling `observe` with each
    /// accepted step's interpolant and end state.
    fn run<O: FnMut(&Segment, f64, &Vec3, &Vec3)>(&self, x0: Vec3, t0: f64, t1: f64, mut observe: O) -> Outcome {
        let mut out = Outcome {
            quality: Quality::Good,
            t: t0,
            x: x0,
            v: None,
            steps: 0,
            rejected: 0,
        };
        let Some(mut k1) = self.f(t0, &x0) else {
            out.quality = Quality::NearNode;
            return out;
        };
        out.v = Some(k1);
        if t0 == t1 {
            return out;
        }
        let dir = (t1 - t0).signum();
        let mut h = dir * self.initial_step(t0, &x0, &k1, dir);
        let mut facold: f64 = 1e-4;
        let mut last_rejected = false;
        let mut node_failures = 0;
        let (mut t, mut x) = (t0, x0);
        loop {
            if out.steps + out.rejected >= MAX_STEPS {
                out.quality = Quality::StepFailure;
                break;
            }
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                out.quality = Quality::StepFailure;
                break;
            }
            let last = (t + h - t1) * dir >= 0.0;
            if last {
                h = t1 - t;
            }
            let Some((y1, k7, err, seg)) = self.attempt(t, &x, &k1, h) else {
                node_failures += 1;
                if node_failures >= NODE_RETRIES {
                    out.quality = Quality::NearNode;
                    break;
                }
                h *= 0.5;
                last_rejected = true;
                out.rejected += 1;
                continue;
            };
            node_failures = 0;
            let fac11 = err.powf(EXPO1);
            if err <= 1.0 {
                let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(GROW_LIMIT, SHRINK_LIMIT);
                let mut h_new = h / fac;
                facold = err.max(1e-4);
                if last_rejected {
                    h_new = dir * h_new.abs().min(h.abs());
                }
                last_rejected = false;
                let t_new = if last { t1 } else { t + h };
                out.steps += 1;
                observe(&seg, t_new, &y1, &k7);
                t = t_new;
                x = y1;
                k1 = k7;
                if last {
                    break;
                }
                h = dir * h_new.abs().min(self.max_step);
            } else {
                h /= (fac11 / SAFE).min(SHRINK_LIMIT);
                last_rejected = true;
                out.rejected += 1;
            }
        }
        out.t = t;
        out.x = x;
        out.v = Some(k1);
        out
    }

    /// One trial step; `None` when a stage hits a node.
    fn attempt(&self, t: f64, x: &Vec3, k1: &Vec3, h: f64) -> Option<(Vec3, Vec3, f64, Segment)> {
        let k2 = self.f(t + C2 * h, &axpy(x, &[(h * A21, k1)]))?;
        let k3 = self.f(t + C3 * h, &axpy(x, &[(h * A31, k1), (h * A32, &k2)]))?;
        let k4 = self.f(t + C4 * h, &axpy(x, &[(h * A41, k1), (h * A42, &k2), (h * A43, &k3)]))?;
        let y5 = axpy(x, &[(h * A51, k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)]);
        let k5 = self.f(t + C5 * h, &y5)?;
        let y6 = axpy(
            x,
            &[
                (h * A61, k1),
                (h * A62, &k2),
                (h * A63, &k3),
                (h * A64, &k4),
                (h * A65, &k5),
            ],
        );
        let k6 = self.f(t + h, &y6)?;
        let y1 = axpy(
            x,
            &[
                (h * A71, k1),
                (h * A73, &k3),
                (h * A74, &k4),
                (h * A75, &k5),
                (h * A76, &k6),
            ],
        );
        let k7 = self.f(t + h, &y1)?;
        let mut e = [0.0; 3];
        for i in 0..3 {
            e[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = self.scaled_norm(&e, x, &y1);
        if !err.is_finite() {
            return None;
        }
        let mut r = [[0.0; 3]; 5];
        for i in 0..3 {
            let ydiff = y1[i] - x[i];
            let bspl = h * k1[i] - ydiff;
            r[0][i] = x[i];
            r[1][i] = ydiff;
            r[2][i] = bspl;
            r[3][i] = ydiff - h * k7[i] - bspl;
            r[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        Some((y1, k7, err, Segment { t0: t, h, r }))
    }
}

fn sample_times(t0: f64, t1: f64, sampling: &Sampling) -> Vec<f64> {
    match sampling {
        Sampling::Steps => Vec::new(),
        Sampling::At(ts) => ts.clone(),
        Sampling::Every(dt) => {
            let dir = (t1 - t0).signum();
            let span = (t1 - t0).abs();
            let n = (span / dt).floor() as usize;
            let mut ts: Vec<f64> = (0..=n).map(|k| t0 + dir * k as f64 * dt).collect();
            let tail = ts.last().copied().unwrap_or(t0);
            if (t1 - tail).abs() > 1e-9 * dt {
                ts.push(t1);
            } else if let Some(l) = ts.last_mut() {
                *l = t1;
            }
            ts
        }
    }
}

/// Integrate the guidance equation from `(t0, x0)` to `t1` (either
/// direction), recording samples per `sampling`.
pub fn integrate<F: SpinorField + ?Sized>(
    field: &F,
    x0: Vec3,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
    sampling: &Sampling,
) -> Result<Trajectory, DynamicsError> {
    if let Sampling::Every(dt) = sampling {
        if !(*dt > 0.0) || !dt.is_finite() {
            return Err(DynamicsError::InvalidConfig(format!(
                "sample interval {dt} must be positive"
            )));
        }
    }
    let solver = Solver::new(field, cfg)?;
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let times = sample_times(t0, t1, sampling);
    let mut samples = Vec::new();
    let mut next = 0;
    let vel_at = |t: f64, x: &Vec3| solver.f(t, x).unwrap_or([f64::NAN; 3]);
    // Samples at the start time need no step.
    while next < times.len() && times[next] == t0 {
        samples.push(Sample {
            t: t0,
            x: x0,
            v: vel_at(t0, &x0),
        });
        next += 1;
    }
    if matches!(sampling, Sampling::Steps) {
        samples.push(Sample {
            t: t0,
            x: x0,
            v: vel_at(t0, &x0),
        });
    }
    let steps_mode = matches!(sampling, Sampling::Steps);
    let out = solver.run(x0, t0, t1, |seg, t_new, y1, k7| {
        if steps_mode {
            samples.push(Sample {
                t: t_new,
                x: *y1,
                v: *k7,
            });
            return;
        }
        while next < times.len() && (times[next] - t_new) * dir <= 0.0 {
            let ts = times[next];
            let (x, v) = if ts == t_new {
                (*y1, *k7)
            } else {
                let x = seg.at(ts);
                (x, vel_at(ts, &x))
            };
            samples.push(Sample { t: ts, x, v });
            next += 1;
        }
    });
    Ok(Trajectory {
        dimension: field.dimension(),
        samples,
        quality: out.quality,
        steps: out.steps,
        rejected: out.rejected,
        t_end: out.t,
        x_end: out.x,
    })
}

/// End state of an unsampled integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowEnd {
    pub t: f64,
    pub x: Vec3,
    pub quality: Quality,
    pub steps: usize,
}

/// Integrate without recording samples.
pub fn flow<F: SpinorField + ?Sized>(
    field: &F,
    x0: Vec3,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<FlowEnd, DynamicsError> {
    let out = Solver::new(field, cfg)?.run(x0, t0, t1, |_, _, _, _| {});
    Ok(FlowEnd {
        t: out.t,
        x: out.x,
        quality: out.quality,
        steps: out.steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backtrack {
    /// Position at the earlier time.
    pub x: Vec3,
    pub quality: Quality,
    /// Distance between the final point and its re-integrated image; NaN
    /// when the round trip was not completed.
    pub closure: f64,
    pub steps: usize,
}

/// Carry `x_f` at `t_f` back to `t_i`, then forward again to certify the
/// result.
pub fn backtrack<F: SpinorField + ?Sized>(
    field: &F,
    x_f: Vec3,
    t_f: f64,
    t_i: f64,
    cfg: &IntegratorConfig,
) -> Result<Backtrack, DynamicsError> {
    let solver = Solver::new(field, cfg)?;
    if solver.f(t_f, &x_f).is_none() {
        return Ok(Backtrack {
            x: x_f,
            quality: Quality::NearNode,
            closure: f64::NAN,
            steps: 0,
        });
    }
    if t_i == t_f {
        return Ok(Backtrack {
            x: x_f,
            quality: Quality::Good,
            closure: 0.0,
            steps: 0,
        });
    }
    let back = solver.run(x_f, t_f, t_i, |_, _, _, _| {});
    if back.quality != Quality::Good {
        return Ok(Backtrack {
            x: back.x,
            quality: back.quality,
            closure: f64::NAN,
            steps: back.steps,
        });
    }
    let fwd = solver.run(back.x, t_i, t_f, |_, _, _, _| {});
    let steps = back.steps + fwd.steps;
    if fwd.quality != Quality::Good {
        return Ok(Backtrack {
            x: back.x,
            quality: fwd.quality,
            closure: f64::NAN,
            steps,
        });
    }
    let d = [fwd.x[0] - x_f[0], fwd.x[1] - x_f[1], fwd.x[2] - x_f[2]];
    let closure = crate::spinors::norm3(&d);
    let quality = if closure <= cfg.round_trip_tol {
        Quality::Good
    } else {
        Quality::RoundTripMismatch
    };
    Ok(Backtrack {
        x: back.x,
        quality,
        closure,
        steps,
    })
}
