//! Geodesic networks on fixed topologies and their regularity checks.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geodesics::{connect, connect_unsampled, ApexProfile, BoundarySpec, Endpoint, GeodesicArc};
use crate::geometry::{wrap_angle, IdealPoint, PlanePoint, UnitTangent};
use crate::polyline::{hausdorff, SegmentIndex};

use super::topology::Topology;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Candidate,
    Regular,
    Failed,
}

/// Vertex positions at the end of one continuation stage. `radius` is `None`
/// for the stage with ideal leaves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub radius: Option<f64>,
    pub vertices: Vec<PlanePoint>,
    pub objective: f64,
    pub iterations: usize,
    pub defect: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub stages: Vec<Stage>,
    /// Objective values of the polyline warm start, one per accepted step.
    pub polyline_objective: Vec<f64>,
    pub balance_defects: Vec<f64>,
    /// Largest `v·w` over pairs of edges at a common interior vertex.
    pub max_tangent_dot: f64,
    pub max_soliton_residual: f64,
    pub renormalized_length: f64,
    pub embedded: bool,
    pub inside_hull: bool,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub topology: Topology,
    /// Boundary points sorted by angle; leaf `i` sits at `boundary[i]`.
    pub boundary: Vec<IdealPoint>,
    /// Interior vertex positions; vertex `v` is node `k + v`.
    pub vertices: Vec<PlanePoint>,
    /// One arc per topology edge `(u, v)`, running from `u` to `v`.
    pub edge_arcs: Vec<GeodesicArc>,
    pub status: Status,
    pub diagnostics: Diagnostics,
}

/// Tolerances a network must meet to be called regular.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyTolerances {
    pub balance: f64,
    pub soliton_residual: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self {
            balance: 1e-8,
            soliton_residual: 1e-6,
        }
    }
}

/// Endpoint of a node given leaf angles and interior positions.
pub fn node_endpoint(topology: &Topology, boundary: &[IdealPoint], vertices: &[PlanePoint], node: usize) -> Endpoint {
    if topology.is_leaf(node) {
        Endpoint::Ideal(boundary[node])
    } else {
        Endpoint::Finite(vertices[node - topology.leaf_count])
    }
}

/// Exact geodesic edges for the given vertex positions.
pub fn edge_arcs(
    topology: &Topology,
    boundary: &[IdealPoint],
    vertices: &[PlanePoint],
    sampled: bool,
) -> Result<Vec<GeodesicArc>> {
    topology
        .edges
        .iter()
        .map(|&(u, v)| {
            let spec = BoundarySpec::new(
                node_endpoint(topology, boundary, vertices, u),
                node_endpoint(topology, boundary, vertices, v),
            );
            if sampled {
                connect(&spec)
            } else {
                connect_unsampled(&spec)
            }
        })
        .collect()
}

/// Norm of the sum of unit tangents, and whether there are exactly three.
pub fn tangent_balance(tangents: &[UnitTangent]) -> (f64, bool) {
    let sum = tangents.iter().fold(PlanePoint::ORIGIN, |acc, t| acc + t.vector());
    (sum.r(), tangents.len() == 3)
}

/// Unit tangents of the edges leaving `node`, in edge order.
pub fn tangents_at(topology: &Topology, arcs: &[GeodesicArc], node: usize) -> Vec<UnitTangent> {
    topology
        .edges
        .iter()
        .zip(arcs)
        .filter_map(|(&(u, v), arc)| {
            if u == node {
                arc.start_tangent()
            } else if v == node {
                arc.end_tangent()
            } else {
                None
            }
        })
        .collect()
}

impl Network {
    pub fn leaf_count(&self) -> usize {
        self.topology.leaf_count
    }

    pub fn boundary_angles(&self) -> Vec<f64> {
        self.boundary.iter().map(|b| b.angle).collect()
    }

    /// Sampled edges as Cartesian polylines.
    pub fn polylines(&self) -> Vec<Vec<PlanePoint>> {
        self.edge_arcs.iter().map(|a| a.points()).collect()
    }

    pub fn vertex_tangents(&self, vertex: usize) -> Vec<UnitTangent> {
        tangents_at(&self.topology, &self.edge_arcs, self.topology.leaf_count + vertex)
    }

    /// Sum over edges of g-length less `∫_0^∞ e^{t²/2} dt`-type divergences at every ideal end.
    pub fn renormalized_length(&self) -> f64 {
        self.edge_arcs.iter().map(|a| a.renormalized_length(false, false)).sum()
    }

    /// Recompute the checks and set `status`.
    pub fn verify(&mut self, tol: &VerifyTolerances) {
        let tangents: Vec<Vec<UnitTangent>> = (0..self.vertices.len()).map(|v| self.vertex_tangents(v)).collect();
        let mut max_dot = f64::NEG_INFINITY;
        for t in &tangents {
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    max_dot = max_dot.max(t[i].vector().dot(t[j].vector()));
                }
            }
        }
        let defects: Vec<f64> = tangents.iter().map(|t| tangent_balance(t).0).collect();
        let trivalent = tangents.iter().all(|t| t.len() == 3);
        let embedded = is_embedded(self);
        let inside_hull = hull_check(self);
        let d = &mut self.diagnostics;
        d.balance_defects = defects;
        d.max_tangent_dot = max_dot;
        d.max_soliton_residual = self.edge_arcs.iter().map(|a| a.max_soliton_residual()).fold(0.0, f64::max);
        d.renormalized_length = self.edge_arcs.iter().map(|a| a.renormalized_length(false, false)).sum();
        d.embedded = embedded;
        d.inside_hull = inside_hull;

        let worst_defect = d.balance_defects.iter().fold(0.0f64, |a, &b| a.max(b));
        let failure = if !trivalent {
            Some("vertex is not trivalent".to_string())
        } else if worst_defect > tol.balance {
            Some(format!("balance defect {worst_defect:e}"))
        } else if !tangents.is_empty() && max_dot > -0.5 + tol.balance {
            Some(format!("junction angle defect, max tangent dot {max_dot}"))
        } else if d.max_soliton_residual > tol.soliton_residual {
            Some(format!("soliton residual {:e}", d.max_soliton_residual))
        } else if !embedded {
            Some("edges intersect".to_string())
        } else if !inside_hull {
            Some("network leaves the geodesic hull".to_string())
        } else {
            None
        };
        match failure {
            None => self.status = Status::Regular,
            Some(reason) => {
                self.status = Status::Failed;
                d.message.get_or_insert(reason);
            }
        }
    }

    /// Hausdorff distance between the sampled edges of two networks.
    pub fn distance(&self, other: &Network) -> f64 {
        hausdorff(&self.polylines(), &other.polylines(), 0.05)
    }

    /// Sampled edges rotated about the origin by `angle`.
    pub fn rotated_polylines(&self, angle: f64) -> Vec<Vec<PlanePoint>> {
        self.polylines()
            .into_iter()
            .map(|l| l.into_iter().map(|p| p.rotate(angle)).collect())
            .collect()
    }
}

/// `‖Σ Tᵢ‖` at every interior vertex.
pub fn network_balance_defect(network: &Network) -> Vec<f64> {
    (0..network.vertices.len())
        .map(|v| tangent_balance(&network.vertex_tangents(v)).0)
        .collect()
}

/// Whether edges meet only at shared vertices.
pub fn is_embedded(network: &Network) -> bool {
    let lines = network.polylines();
    let index = SegmentIndex::new(&lines, 0.05);
    let edges = &network.topology.edges;
    let last: Vec<usize> = lines.iter().map(|l| l.len().saturating_sub(2)).collect();
    // Segment index touching `node` on edge `e`, if any.
    let end_segment = |e: usize, node: usize| -> Option<usize> {
        if edges[e].0 == node {
            Some(0)
        } else if edges[e].1 == node {
            Some(last[e])
        } else {
            None
        }
    };
    let allow = |(e, s): (usize, usize), (f, t): (usize, usize)| {
        [edges[e].0, edges[e].1].iter().any(|&node| {
            !network.topology.is_leaf(node) && end_segment(e, node) == Some(s) && end_segment(f, node) == Some(t)
        })
    };
    index.crossings(allow).is_empty()
}

/// Whether every vertex and edge sample lies in the ideal polygon spanned by
/// the boundary points, bounded by the geodesics joining cyclically adjacent ones.
pub fn hull_check(network: &Network) -> bool {
    let k = network.boundary.len();
    if k < 3 {
        return true;
    }
    let mut angles = network.boundary_angles();
    angles.sort_by(f64::total_cmp);
    let points: Vec<PlanePoint> = network
        .vertices
        .iter()
        .copied()
        .chain(network.polylines().into_iter().flatten())
        .collect();
    const TOL: f64 = 1e-9;
    for i in 0..k {
        let a = angles[i];
        let b = angles[(i + 1) % k];
        let gap = (b - a).rem_euclid(2.0 * PI);
        if (gap - PI).abs() <= 1e-12 {
            let dir = PlanePoint::from_polar(1.0, a);
            if points.iter().any(|p| dir.cross(*p) > TOL) {
                return false;
            }
            continue;
        }
        let side = match connect_unsampled(&BoundarySpec::new(
            Endpoint::Ideal(IdealPoint::new(a)),
            Endpoint::Ideal(IdealPoint::new(b)),
        )) {
            Ok(GeodesicArc::GraphArc(g)) => g,
            _ => return false,
        };
        let profile = match ApexProfile::new(side.apex_r) {
            Ok(p) => p,
            Err(_) => return false,
        };
        let half = profile.half_width();
        // Beyond the hull geodesic: on the apex side of the curve, away from the origin.
        let beyond = |p: &PlanePoint, margin: f64| -> bool {
            let Some(theta) = p.theta() else { return false };
            let phi = wrap_angle(theta - side.apex_theta).abs();
            let r = p.r();
            phi < half && r > side.apex_r + margin && profile.eta(r) > phi + margin
        };
        let origin_side = |p: &PlanePoint| -> bool {
            let Some(theta) = p.theta() else { return true };
            let phi = wrap_angle(theta - side.apex_theta).abs();
            let r = p.r();
            phi > half + TOL || r < side.apex_r - TOL || profile.eta(r) < phi - TOL
        };
        let outside = if gap < PI {
            points.iter().any(|p| beyond(p, TOL))
        } else {
            points.iter().any(origin_side)
        };
        if outside {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::topology::{enumerate_topologies, Mode};

    fn triod(vertex: PlanePoint, angles: [f64; 3]) -> Network {
        let topology = enumerate_topologies(3, Mode::Connected).unwrap().remove(0);
        let boundary: Vec<IdealPoint> = angles.iter().map(|&a| IdealPoint::new(a)).collect();
        let vertices = vec![vertex];
        let edge_arcs = edge_arcs(&topology, &boundary, &vertices, true).unwrap();
        Network {
            topology,
            boundary,
            vertices,
            edge_arcs,
            status: Status::Candidate,
            diagnostics: Diagnostics::default(),
        }
    }

    const EQUAL: [f64; 3] = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];

    #[test]
    fn straight_triod_is_regular() {
        let mut n = triod(PlanePoint::ORIGIN, EQUAL);
        n.verify(&VerifyTolerances::default());
        assert_eq!(n.status, Status::Regular, "{:?}", n.diagnostics.message);
        assert!(network_balance_defect(&n).iter().all(|&d| d < 1e-15));
        assert!(hull_check(&n));
    }

    #[test]
    fn balance_of_tangent_sets() {
        let three: Vec<UnitTangent> = EQUAL.iter().map(|&a| UnitTangent::new(a)).collect();
        let (d, trivalent) = tangent_balance(&three);
        assert!(d < 1e-15 && trivalent);
        let two = [UnitTangent::new(0.3), UnitTangent::new(0.3 + PI)];
        let (d, trivalent) = tangent_balance(&two);
        assert!(d < 1e-15 && !trivalent);
    }

    #[test]
    fn displaced_vertex_is_unbalanced() {
        let mut n = triod(PlanePoint::new(0.2, 0.1), EQUAL);
        n.verify(&VerifyTolerances::default());
        assert_eq!(n.status, Status::Failed);
        assert!(network_balance_defect(&n)[0] > 1e-3);
    }

    #[test]
    fn vertex_outside_hull_detected() {
        // Boundary points spanning less than a half-plane; a vertex reflected
        // across the hull edge between the outer two points lies outside.
        let angles = [0.0, 0.5, 1.0];
        let inside = triod(PlanePoint::from_polar(1.5, 0.5), angles);
        assert!(hull_check(&inside));
        let outside = triod(PlanePoint::from_polar(0.3, 0.5 + PI), angles);
        assert!(!hull_check(&outside));
    }

    #[test]
    fn edges_along_wide_gap_asymptote_stay_inside() {
        let angles = [0.0416, 2.1496, 2.8559];
        let topology = enumerate_topologies(3, Mode::Connected).unwrap().remove(0);
        let boundary: Vec<IdealPoint> = angles.iter().map(|&a| IdealPoint::new(a)).collect();
        let n = crate::steiner::relax(&topology, &boundary, &Default::default());
        assert_eq!(n.status, Status::Regular, "{:?}", n.diagnostics.message);
        assert!(hull_check(&n));
    }

    #[test]
    fn straight_triod_embedded() {
        assert!(is_embedded(&triod(PlanePoint::ORIGIN, EQUAL)));
    }
}
