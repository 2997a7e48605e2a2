//! Documents, run configuration, CSV tables and SVG figures.

pub mod svg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowCheckReport;
use crate::geodesics::GeodesicArc;
use crate::geometry::{IdealPoint, PlanePoint};
use crate::steiner::network::{Diagnostics, VerifyTolerances};
use crate::steiner::{Mode, Network, RelaxOptions, Status, Topology};

pub const SCHEMA_VERSION: u32 = 1;

/// Inputs of a solve run. Contains no randomness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub rays: Vec<f64>,
    pub mode: Mode,
    pub relax: RelaxOptions,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        crate::steiner::boundary_points(&self.rays)?;
        let s = &self.relax.schedule;
        if s.iter().any(|r| !(r.is_finite() && *r > 0.0)) || s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(format!("radius schedule {s:?} must be positive and increasing")));
        }
        if !(self.relax.stage_tol > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Parse a comma-separated list of reals.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("{s:?} is not a number")))
        })
        .collect()
}

/// Summary quantities a document must reproduce when reloaded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub max_soliton_residual: f64,
    pub max_balance_defect: f64,
    pub max_tangent_dot: f64,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub embedded: bool,
    pub hull_check: bool,
}

impl Verification {
    pub fn of(network: &Network) -> Self {
        let d = &network.diagnostics;
        Self {
            max_soliton_residual: d.max_soliton_residual,
            max_balance_defect: d.balance_defects.iter().fold(0.0, |a: f64, &b| a.max(b)),
            max_tangent_dot: if network.vertices.is_empty() { -1.0 } else { d.max_tangent_dot },
            vertex_count: network.vertices.len(),
            edge_count: network.edge_arcs.len(),
            embedded: d.embedded,
            hull_check: d.inside_hull,
        }
    }

    fn agrees(&self, other: &Verification) -> bool {
        let close = |a: f64, b: f64| a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
        close(self.max_soliton_residual, other.max_soliton_residual)
            && close(self.max_balance_defect, other.max_balance_defect)
            && close(self.max_tangent_dot, other.max_tangent_dot)
            && self.vertex_count == other.vertex_count
            && self.edge_count == other.edge_count
            && self.embedded == other.embedded
            && self.hull_check == other.hull_check
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: usize,
    pub to: usize,
    pub arc: GeodesicArc,
}

/// Self-contained, human-readable record of one network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub schema_version: u32,
    pub boundary_angles: Vec<f64>,
    pub topology: Topology,
    pub vertices: Vec<PlanePoint>,
    pub edges: Vec<EdgeRecord>,
    pub status: Status,
    pub renormalized_length: f64,
    pub verification: Verification,
}

impl NetworkDocument {
    pub fn from_network(network: &Network) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            boundary_angles: network.boundary_angles(),
            topology: network.topology.clone(),
            vertices: network.vertices.clone(),
            edges: network
                .topology
                .edges
                .iter()
                .zip(&network.edge_arcs)
                .map(|(&(from, to), arc)| EdgeRecord { from, to, arc: arc.clone() })
                .collect(),
            status: network.status,
            renormalized_length: network.diagnostics.renormalized_length,
            verification: Verification::of(network),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parse and re-verify. The stored verification block must match the one
    /// recomputed from the geometry, and a regular status must be earned.
    pub fn from_json(text: &str) -> Result<(Self, Network)> {
        let doc: NetworkDocument = serde_json::from_str(text)?;
        let network = doc.to_network()?;
        Ok((doc, network))
    }

    pub fn to_network(&self) -> Result<Network> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!("unsupported schema version {}", self.schema_version)));
        }
        self.topology.validate()?;
        let k = self.topology.leaf_count;
        if self.boundary_angles.len() != k || self.vertices.len() != self.topology.interior_count {
            return Err(Error::Document("boundary or vertex count does not match the topology".into()));
        }
        if self.edges.len() != self.topology.edges.len()
            || self.edges.iter().zip(&self.topology.edges).any(|(e, t)| (e.from, e.to) != *t)
        {
            return Err(Error::Document("edge list does not match the topology".into()));
        }
        let boundary: Vec<IdealPoint> = self.boundary_angles.iter().map(|&a| IdealPoint::new(a)).collect();
        for e in &self.edges {
            check_end(&e.arc, e.from, k, &self.vertices, &boundary, true)?;
            check_end(&e.arc, e.to, k, &self.vertices, &boundary, false)?;
        }
        let mut network = Network {
            topology: self.topology.clone(),
            boundary,
            vertices: self.vertices.clone(),
            edge_arcs: self.edges.iter().map(|e| e.arc.clone()).collect(),
            status: Status::Candidate,
            diagnostics: Diagnostics::default(),
        };
        network.verify(&VerifyTolerances::default());
        let recomputed = Verification::of(&network);
        if !recomputed.agrees(&self.verification) {
            return Err(Error::Document(format!(
                "verification block does not match the geometry: stored {:?}, recomputed {:?}",
                self.verification, recomputed
            )));
        }
        if self.status == Status::Regular && network.status != Status::Regular {
            return Err(Error::Document(format!(
                "document claims a regular network but {}",
                network.diagnostics.message.clone().unwrap_or_default()
            )));
        }
        Ok(network)
    }
}

fn check_end(
    arc: &GeodesicArc,
    node: usize,
    k: usize,
    vertices: &[PlanePoint],
    boundary: &[IdealPoint],
    start: bool,
) -> Result<()> {
    let ok = if node < k {
        let angle = if start { arc.ideal_angles().0 } else { arc.ideal_angles().1 };
        angle.is_some_and(|a| crate::geometry::wrap_angle(a - boundary[node].angle).abs() <= 1e-9)
    } else {
        let p = if start { arc.start_point() } else { arc.end_point() };
        p.is_some_and(|p| p.distance(vertices[node - k]) <= 1e-9 * (1.0 + p.r()))
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Document(format!("an edge does not end at node {node}")))
    }
}

/// CSV with a header row: time, normalized deviation, then junction coordinates.
pub fn flow_csv(report: &FlowCheckReport) -> String {
    let nv = report.rows.first().map_or(0, |r| r.vertices.len());
    let mut out = String::from("t,deviation");
    for v in 0..nv {
        out.push_str(&format!(",v{v}_x,v{v}_y"));
    }
    out.push('\n');
    for row in &report.rows {
        out.push_str(&format!("{},{}", row.t, row.deviation));
        for p in &row.vertices {
            out.push_str(&format!(",{},{}", p.x, p.y));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{direct_flow_check, FlowCheckOptions};
    use crate::steiner::solve_expander;

    fn cross() -> Network {
        let a = std::f64::consts::FRAC_PI_2;
        solve_expander(&[0.0, a, 2.0 * a, 3.0 * a], Mode::Connected, &RelaxOptions::default())
            .unwrap()
            .networks
            .remove(0)
    }

    #[test]
    fn round_trip_is_exact() {
        let n = cross();
        let doc = NetworkDocument::from_network(&n);
        let text = doc.to_json().unwrap();
        let (back, network) = NetworkDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(network.vertices, n.vertices);
        assert_eq!(network.edge_arcs, n.edge_arcs);
        assert_eq!(network.status, Status::Regular);
    }

    #[test]
    fn tampered_verification_rejected() {
        let mut doc = NetworkDocument::from_network(&cross());
        doc.verification.max_balance_defect = 0.0;
        doc.verification.hull_check = false;
        assert!(matches!(NetworkDocument::from_json(&doc.to_json().unwrap()), Err(Error::Document(_))));
    }

    #[test]
    fn moved_vertex_rejected() {
        let mut doc = NetworkDocument::from_network(&cross());
        doc.vertices[0].x += 1e-3;
        assert!(matches!(doc.to_network(), Err(Error::Document(_))));
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list("0, 1.5,3").unwrap(), vec![0.0, 1.5, 3.0]);
        assert!(parse_list("0,x").is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig {
            rays: vec![0.0, 0.0],
            mode: Mode::Connected,
            relax: RelaxOptions::default(),
        };
        assert!(c.validate().is_err());
        c.rays = vec![0.0, 2.0, 4.0];
        assert!(c.validate().is_ok());
        c.relax.schedule = vec![6.0, 4.0];
        assert!(c.validate().is_err());
    }

    #[test]
    fn csv_has_header() {
        let opts = FlowCheckOptions {
            h: 0.1,
            checkpoints: 2,
            ..Default::default()
        };
        let report = direct_flow_check(&cross(), 0.6, &opts).unwrap();
        let csv = flow_csv(&report);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,deviation,v0_x,v0_y,v1_x,v1_y");
        assert_eq!(lines.count(), 3);
    }
}
