use std::f64::consts::TAU;

use super::Sample;
use crate::spinors::{norm3, Dimension, Vec3};

/// One full turn of the velocity direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Loop {
    pub t_start: f64,
    pub t_end: f64,
    /// Largest distance between two projected positions inside the loop.
    pub diameter: f64,
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal pair spanning the plane transverse to the drift between two
/// samples; the xy plane in 2+1.
fn transverse_basis(a: &Sample, b: &Sample, dim: Dimension) -> (Vec3, Vec3) {
    let z = [0.0, 0.0, 1.0];
    let axis = match dim {
        Dimension::Two => z,
        Dimension::Three => {
            let d = [b.x[0] - a.x[0], b.x[1] - a.x[1], b.x[2] - a.x[2]];
            let n = norm3(&d);
            if n > 1e-9 * (b.t - a.t).abs().max(1e-300) {
                [d[0] / n, d[1] / n, d[2] / n]
            } else {
                z
            }
        }
    };
    let seed = if axis[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut e1 = cross(&axis, &seed);
    let n1 = norm3(&e1);
    e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
    let e2 = cross(&axis, &e1);
    (e1, e2)
}

/// Split a densely sampled trajectory into loops, closing one each time the
/// transverse velocity direction has turned through a full circle.
///
/// In 3+1 the drift axis is re-estimated from whole turns only.
pub fn detect_loops(samples: &[Sample], dim: Dimension) -> Vec<Loop> {
    if samples.len() < 3 {
        return Vec::new();
    }
    let (first, last) = (&samples[0], &samples[samples.len() - 1]);
    let loops = loops_in_basis(samples, transverse_basis(first, last, dim));
    if dim == Dimension::Two || loops.is_empty() {
        return loops;
    }
    let at = |t: f64| samples.iter().find(|s| s.t == t).unwrap_or(first);
    let (a, b) = (at(loops[0].t_start), at(loops[loops.len() - 1].t_end));
    loops_in_basis(samples, transverse_basis(a, b, dim))
}

fn loops_in_basis(samples: &[Sample], (e1, e2): (Vec3, Vec3)) -> Vec<Loop> {
    let proj = |v: &Vec3| (dot(v, &e1), dot(v, &e2));
    let mut loops = Vec::new();
    let mut start = 0;
    let mut turned = 0.0;
    let (a, b) = proj(&samples[0].v);
    let mut prev = b.atan2(a);
    for i in 1..samples.len() {
        let (a, b) = proj(&samples[i].v);
        if !(a.is_finite() && b.is_finite()) {
            continue;
        }
        let ang = b.atan2(a);
        let mut d = ang - prev;
        if d > std::f64::consts::PI {
            d -= TAU;
        } else if d < -std::f64::consts::PI {
            d += TAU;
        }
        turned += d;
        prev = ang;
        if turned.abs() >= TAU {
            let pts: Vec<(f64, f64)> = samples[start..=i].iter().map(|s| proj(&s.x)).collect();
            let mut diameter: f64 = 0.0;
            for (j, p) in pts.iter().enumerate() {
                for q in &pts[j + 1..] {
                    diameter = diameter.max(((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt());
                }
            }
            loops.push(Loop {
                t_start: samples[start].t,
                t_end: samples[i].t,
                diameter,
            });
            start = i;
            turned -= TAU * turned.signum();
        }
    }
    loops
}

/// Transverse radius, angular frequency and axial drift of a helical
/// trajectory.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HelixFit {
    pub radius: f64,
    pub period: f64,
    pub angular_frequency: f64,
    /// Mean speed along the helix axis.
    pub drift: f64,
    pub loops: usize,
}

/// Fit a helix from the detected loops; `None` without a complete loop.
pub fn helix_fit(samples: &[Sample], dim: Dimension) -> Option<HelixFit> {
    let loops = detect_loops(samples, dim);
    if loops.is_empty() {
        return None;
    }
    let n = loops.len() as f64;
    let span = loops[loops.len() - 1].t_end - loops[0].t_start;
    let period = span.abs() / n;
    let radius = loops.iter().map(|l| l.diameter).sum::<f64>() / (2.0 * n);
    let at = |t: f64| samples.iter().find(|s| s.t == t).unwrap_or(&samples[0]);
    let (a, b) = (at(loops[0].t_start), at(loops[loops.len() - 1].t_end));
    let drift = match dim {
        Dimension::Two => 0.0,
        Dimension::Three => {
            let d = [b.x[0] - a.x[0], b.x[1] - a.x[1], b.x[2] - a.x[2]];
            norm3(&d) / span.abs()
        }
    };
    Some(HelixFit {
        radius,
        period,
        angular_frequency: TAU / period,
        drift,
        loops: loops.len(),
    })
}
