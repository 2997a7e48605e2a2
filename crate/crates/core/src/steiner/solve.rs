//! Sweep over all topologies of a mode.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, IdealPoint};

use super::network::{Network, Status};
use super::relax::{relax, RelaxOptions};
use super::topology::{enumerate_topologies, Mode};

/// Networks closer than this in Hausdorff distance are the same solution.
pub const DEDUP_DISTANCE: f64 = 1e-4;

/// Smallest allowed angular gap between boundary points.
pub const MIN_GAP: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solutions {
    pub mode: Mode,
    pub boundary: Vec<IdealPoint>,
    /// Regular, embedded networks inside the hull, in topology order.
    pub networks: Vec<Network>,
    /// Topologies that did not relax to a regular network.
    pub failures: Vec<Network>,
    /// Regular networks dropped as geometric duplicates of an earlier one.
    pub duplicates: usize,
}

/// Sort and validate boundary angles.
pub fn boundary_points(angles: &[f64]) -> Result<Vec<IdealPoint>> {
    if angles.len() < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 boundary angles, got {}", angles.len())));
    }
    if let Some(a) = angles.iter().find(|a| !a.is_finite()) {
        return Err(Error::InvalidInput(format!("angle {a} is not finite")));
    }
    let mut sorted: Vec<f64> = angles.iter().map(|&a| normalize_angle(a)).collect();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    for i in 0..k {
        let gap = (sorted[(i + 1) % k] - sorted[i]).rem_euclid(std::f64::consts::TAU);
        if gap < MIN_GAP {
            return Err(Error::InvalidInput(format!(
                "boundary angles {} and {} coincide",
                sorted[i],
                sorted[(i + 1) % k]
            )));
        }
    }
    Ok(sorted.into_iter().map(IdealPoint::new).collect())
}

/// Relax every topology of `mode` and keep the distinct regular solutions.
pub fn solve_expander(angles: &[f64], mode: Mode, opts: &RelaxOptions) -> Result<Solutions> {
    let boundary = boundary_points(angles)?;
    let topologies = enumerate_topologies(boundary.len(), mode)?;
    let relaxed: Vec<Network> = topologies.par_iter().map(|t| relax(t, &boundary, opts)).collect();
    let mut networks: Vec<Network> = Vec::new();
    let mut failures = Vec::new();
    let mut duplicates = 0;
    for n in relaxed {
        if n.status != Status::Regular {
            failures.push(n);
        } else if networks.iter().any(|m| m.distance(&n) <= DEDUP_DISTANCE) {
            duplicates += 1;
        } else {
            networks.push(n);
        }
    }
    Ok(Solutions {
        mode,
        boundary,
        networks,
        failures,
        duplicates,
    })
}
