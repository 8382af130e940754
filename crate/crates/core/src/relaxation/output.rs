use std::io::{self, Write};

use super::{CoarseGrained, DensityGrid, SubComptonPoint};
use crate::io::fmt_float;

const INDEX_NAMES: [&str; 3] = ["i", "j", "k"];
const COORD_NAMES: [&str; 3] = ["x", "y", "z"];

pub const SUBCOMPTON_COLUMNS: &[&str] = &["t", "abs_diff", "rel_diff", "good_fraction"];

fn header(axes: usize) -> String {
    let mut cols: Vec<&str> = INDEX_NAMES[..axes].to_vec();
    cols.extend(&COORD_NAMES[..axes]);
    cols.extend(["value", "good"]);
    cols.join(",")
}

/// `i,j[,k],x,y[,z],value,good` with `good` as 0 or 1.
pub fn write_density_csv<W: Write>(mut w: W, d: &DensityGrid) -> io::Result<()> {
    let axes = d.grid.axes();
    writeln!(w, "{}", header(axes))?;
    for f in 0..d.grid.len() {
        let idx = d.grid.unflatten(f);
        let x = d.grid.point(f);
        let mut row: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        row.extend(x[..axes].iter().map(|&v| fmt_float(v)));
        row.push(fmt_float(d.values[f]));
        row.push(u8::from(d.good[f]).to_string());
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Same columns per cell; `value` is `nan` for empty cells and `good` is
/// the cell's good fraction.
pub fn write_coarse_csv<W: Write>(mut w: W, c: &CoarseGrained) -> io::Result<()> {
    let axes = c.shape.len();
    writeln!(w, "{}", header(axes))?;
    for f in 0..c.len() {
        let idx = c.unflatten(f);
        let mut row: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        row.extend(c.centers[f][..axes].iter().map(|&v| fmt_float(v)));
        row.push(fmt_float(c.values[f].unwrap_or(f64::NAN)));
        row.push(fmt_float(c.good_fraction[f]));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_subcompton_csv<W: Write>(mut w: W, series: &[SubComptonPoint]) -> io::Result<()> {
    writeln!(w, "{}", SUBCOMPTON_COLUMNS.join(","))?;
    for p in series {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_float(p.t),
            fmt_float(p.abs_diff),
            fmt_float(p.rel_diff),
            fmt_float(p.good_fraction)
        )?;
    }
    Ok(())
}
