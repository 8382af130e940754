//! The reference disk and ball mode sets used by the relaxation
//! experiments.

use super::{
    eigenmode_2d, eigenmode_3d, normalize_majorana_ball, normalize_majorana_disk, solve_eigenvalues_2d,
    solve_eigenvalues_3d, BallField, CavityParams, DiskField, Majorana, ModesError,
};
use crate::specfun::HalfInteger;

/// Disk mode label: quantum number, tabulated energy, phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskEntry {
    pub qn: i32,
    pub energy: f64,
    pub phase: f64,
}

/// Ball mode label: `κ`, `2j`, `2j3`, tabulated energy, phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallEntry {
    pub kappa: i32,
    pub twice_j: i32,
    pub twice_j3: i32,
    pub energy: f64,
    pub phase: f64,
}

pub const DISK_CAVITY: CavityParams = CavityParams {
    radius: 5.0,
    m_in: 2.0,
    m_out: 2.5,
};

pub const BALL_CAVITY: CavityParams = CavityParams {
    radius: 5.0,
    m_in: 1.0,
    m_out: 1.5,
};

pub const DISK_SET: [DiskEntry; 6] = [
    DiskEntry {
        qn: 0,
        energy: 2.0431085410058,
        phase: 5.11905989575681,
    },
    DiskEntry {
        qn: 1,
        energy: 2.10705432759443,
        phase: 5.69125859039527,
    },
    DiskEntry {
        qn: 2,
        energy: 2.18732348257316,
        phase: 0.79788169834087,
    },
    DiskEntry {
        qn: -1,
        energy: 2.10790439723629,
        phase: 5.73890975922526,
    },
    DiskEntry {
        qn: -2,
        energy: 2.19010176106309,
        phase: 3.97323032474265,
    },
    DiskEntry {
        qn: -3,
        energy: 2.2864073103276,
        phase: 0.61286443954863,
    },
];

pub const BALL_SET: [BallEntry; 8] = [
    BallEntry {
        kappa: 1,
        twice_j: 1,
        twice_j3: 1,
        energy: 1.24382856361355,
        phase: 5.11905989575681,
    },
    BallEntry {
        kappa: 1,
        twice_j: 1,
        twice_j3: -1,
        energy: 1.24382856361355,
        phase: 5.69125859039527,
    },
    BallEntry {
        kappa: -1,
        twice_j: 1,
        twice_j3: 1,
        energy: 1.12290254936835,
        phase: 0.79788169834087,
    },
    BallEntry {
        kappa: -1,
        twice_j: 1,
        twice_j3: -1,
        energy: 1.42209141193299,
        phase: 5.73890975922526,
    },
    BallEntry {
        kappa: 2,
        twice_j: 3,
        twice_j3: -1,
        energy: 1.37899955258739,
        phase: 3.97323032474265,
    },
    BallEntry {
        kappa: 2,
        twice_j: 3,
        twice_j3: 3,
        energy: 1.37899955258739,
        phase: 0.61286443954863,
    },
    BallEntry {
        kappa: -2,
        twice_j: 3,
        twice_j3: -3,
        energy: 1.23582476498988,
        phase: 1.74985591686112,
    },
    BallEntry {
        kappa: -2,
        twice_j: 3,
        twice_j3: 1,
        energy: 1.23582476498988,
        phase: 3.43615792623681,
    },
];

/// The solved root of `roots` closest to `target`.
pub fn closest_root(roots: &[f64], target: f64) -> Option<f64> {
    roots
        .iter()
        .copied()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
}

fn missing(label: String, target: f64) -> ModesError {
    ModesError::InvalidQuantumNumbers(format!("no eigenvalue near {target} for {label}"))
}

/// Equal-weight Dirac superposition of [`DISK_SET`] built from freshly
/// solved energies.
pub fn disk_dirac() -> Result<DiskField, ModesError> {
    let w = (DISK_SET.len() as f64).sqrt().recip();
    let modes = DISK_SET
        .iter()
        .map(|d| {
            let roots = solve_eigenvalues_2d(&DISK_CAVITY, d.qn)?;
            let e = closest_root(&roots, d.energy).ok_or_else(|| missing(format!("qn={}", d.qn), d.energy))?;
            eigenmode_2d(&DISK_CAVITY, d.qn, e, d.phase, w)
        })
        .collect::<Result<Vec<_>, _>>()?;
    DiskField::new(modes)
}

pub fn disk_majorana() -> Result<Majorana<DiskField>, ModesError> {
    normalize_majorana_disk(disk_dirac()?, &DISK_CAVITY)
}

/// Equal-weight Dirac superposition of [`BALL_SET`].
pub fn ball_dirac() -> Result<BallField, ModesError> {
    let w = (BALL_SET.len() as f64).sqrt().recip();
    let modes = BALL_SET
        .iter()
        .map(|b| {
            let roots = solve_eigenvalues_3d(&BALL_CAVITY, b.kappa)?;
            let e = closest_root(&roots, b.energy).ok_or_else(|| missing(format!("kappa={}", b.kappa), b.energy))?;
            eigenmode_3d(
                &BALL_CAVITY,
                b.kappa,
                HalfInteger::from_twice(b.twice_j),
                HalfInteger::from_twice(b.twice_j3),
                e,
                b.phase,
                w,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    BallField::new(modes)
}

pub fn ball_majorana() -> Result<Majorana<BallField>, ModesError> {
    normalize_majorana_ball(ball_dirac()?, &BALL_CAVITY)
}
