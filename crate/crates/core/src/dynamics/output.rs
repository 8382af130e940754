use std::io::{self, Write};

use super::Trajectory;
use crate::io::fmt_float;
use crate::spinors::Dimension;

pub const TRAJECTORY_COLUMNS_2D: &[&str] = &["t", "x", "y", "vx", "vy", "quality"];
pub const TRAJECTORY_COLUMNS_3D: &[&str] = &["t", "x", "y", "z", "vx", "vy", "vz", "quality"];

/// One row per sample; every row carries the trajectory's final quality.
pub fn write_trajectory_csv<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    let (cols, n) = match traj.dimension {
        Dimension::Two => (TRAJECTORY_COLUMNS_2D, 2),
        Dimension::Three => (TRAJECTORY_COLUMNS_3D, 3),
    };
    writeln!(w, "{}", cols.join(","))?;
    let q = traj.quality.as_str();
    for s in &traj.samples {
        let mut row = vec![fmt_float(s.t)];
        row.extend(s.x[..n].iter().map(|&v| fmt_float(v)));
        row.extend(s.v[..n].iter().map(|&v| fmt_float(v)));
        writeln!(w, "{},{q}", row.join(","))?;
    }
    Ok(())
}
