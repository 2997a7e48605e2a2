//! Self-similar evolution of a regular network and an independent
//! front-tracking check of it.
//!
//! An expander is the network at `t = 1/2` scaled by `λ(t) = √(2t)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::{shoot_from_apex, GeodesicArc, ShootOptions};
use crate::geometry::{normalize_angle, state_soliton_residual, PlanePoint};
use crate::polyline::SegmentIndex;
use crate::steiner::Network;

/// Scale factor `√(2t)`.
pub fn lambda(t: f64) -> f64 {
    (2.0 * t).sqrt()
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("time {t} must be positive")))
    }
}

/// The network at time `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowFrame {
    pub t: f64,
    pub lambda: f64,
    pub vertices: Vec<PlanePoint>,
    pub edges: Vec<Vec<PlanePoint>>,
}

pub fn evolve(base: &Network, t: f64) -> Result<FlowFrame> {
    check_time(t)?;
    let l = lambda(t);
    Ok(FlowFrame {
        t,
        lambda: l,
        vertices: base.vertices.iter().map(|&q| q * l).collect(),
        edges: base.edge_arcs.iter().map(|a| a.scaled_points(l)).collect(),
    })
}

/// `D_λ` applied to a frame: space scaled by `λ`, time by `λ²`.
pub fn dilate(frame: &FlowFrame, factor: f64) -> FlowFrame {
    FlowFrame {
        t: frame.t * factor * factor,
        lambda: frame.lambda * factor,
        vertices: frame.vertices.iter().map(|&q| q * factor).collect(),
        edges: frame
            .edges
            .iter()
            .map(|e| e.iter().map(|&p| p * factor).collect())
            .collect(),
    }
}

/// Largest `|κ − p·ν/(2t)|` over the graph-arc samples of the frame at time `t`,
/// with the same near-origin weighting as the unscaled residual.
pub fn frame_soliton_residual(base: &Network, t: f64) -> Result<f64> {
    check_time(t)?;
    let l = lambda(t);
    let mut worst: f64 = 0.0;
    for arc in &base.edge_arcs {
        if let GeodesicArc::GraphArc(g) = arc {
            for s in &g.samples {
                // κ at λp is κ/λ; the residual there is λ^{-1} times the base one.
                let base_res = state_soliton_residual(s)?;
                let kappa_scaled = (base_res + s.position().dot(s.tangent().left_normal())) / l;
                let p = s.position() * l;
                let res = kappa_scaled - p.dot(s.tangent().left_normal()) / (2.0 * t);
                worst = worst.max(res.abs() * (s.sigma() * l).min(1.0));
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldSheet {
    pub base: Network,
    pub times: Vec<f64>,
}

impl WorldSheet {
    pub fn new(base: Network, times: Vec<f64>) -> Result<Self> {
        for &t in &times {
            check_time(t)?;
        }
        Ok(Self { base, times })
    }

    pub fn frames(&self) -> Result<Vec<FlowFrame>> {
        self.times.iter().map(|&t| evolve(&self.base, t)).collect()
    }
}

/// The straight ray `t ↦ √(2t) q` traced by an interior vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub vertex: usize,
    pub base: PlanePoint,
}

impl Trajectory {
    pub fn at(&self, t: f64) -> PlanePoint {
        self.base * lambda(t)
    }

    pub fn is_stationary(&self) -> bool {
        self.base == PlanePoint::ORIGIN
    }
}

pub fn vertex_trajectories(base: &Network) -> Vec<Trajectory> {
    base.vertices
        .iter()
        .enumerate()
        .map(|(vertex, &base)| Trajectory { vertex, base })
        .collect()
}

/// Asymptotic angles of all unbounded edges in `[0, 2π)`, in boundary order.
/// Graph arcs are re-shot from their apex, so this does not reuse the
/// quadrature that placed them.
pub fn tangent_cone_at_infinity(network: &Network) -> Result<Vec<f64>> {
    let opts = ShootOptions::default();
    let mut out = Vec::new();
    for arc in &network.edge_arcs {
        match arc {
            GeodesicArc::OriginLine(_) => {
                let (a, b) = arc.ideal_angles();
                out.extend(a.into_iter().chain(b));
            }
            GeodesicArc::GraphArc(g) => {
                if !(arc.start_is_ideal() || arc.end_is_ideal()) {
                    continue;
                }
                let shot = shoot_from_apex(g.apex_theta, g.apex_r, &opts)?;
                let (lo, hi) = shot.arc.asymptotes;
                let pick = |eta: f64| if eta > 0.0 { hi } else { lo };
                if arc.start_is_ideal() {
                    out.push(pick(g.start_eta));
                }
                if arc.end_is_ideal() {
                    out.push(pick(g.end_eta));
                }
            }
        }
    }
    let mut out: Vec<f64> = out.into_iter().map(normalize_angle).collect();
    // An asymptote just below 2π belongs with the boundary point at 0.
    let key = |a: f64| if 2.0 * PI - a < 1e-9 { a - 2.0 * PI } else { a };
    out.sort_by(|a, b| key(*a).total_cmp(&key(*b)));
    Ok(out)
}

/// Curves of the world-sheet on the faces of the parabolic blowup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupLift {
    /// Face F in coordinates `(x, y)/√(2t)`, one trace per time.
    pub f_traces: Vec<(f64, Vec<Vec<PlanePoint>>)>,
    /// Largest distance of an F-trace sample from the same sample at `t = 1/2`.
    pub f_drift: f64,
    /// Directions of the half-lines on face T.
    pub t_trace: Vec<f64>,
    /// Points of the corner F ∩ T, as angles.
    pub corners: Vec<f64>,
}

pub fn blowup_lift(sheet: &WorldSheet) -> Result<BlowupLift> {
    let base: Vec<Vec<PlanePoint>> = sheet.base.polylines();
    let mut f_traces = Vec::new();
    let mut drift: f64 = 0.0;
    for frame in sheet.frames()? {
        let s = 1.0 / lambda(frame.t);
        let trace: Vec<Vec<PlanePoint>> = frame
            .edges
            .iter()
            .map(|e| e.iter().map(|&p| p * s).collect())
            .collect();
        for (e, b) in trace.iter().zip(&base) {
            for (p, q) in e.iter().zip(b) {
                drift = drift.max(p.distance(*q));
            }
        }
        f_traces.push((frame.t, trace));
    }
    let t_trace = tangent_cone_at_infinity(&sheet.base)?;
    let mut corners: Vec<f64> = sheet
        .base
        .edge_arcs
        .iter()
        .flat_map(|a| {
            let (x, y) = a.ideal_angles();
            x.into_iter().chain(y)
        })
        .map(normalize_angle)
        .collect();
    corners.sort_by(f64::total_cmp);
    Ok(BlowupLift {
        f_traces,
        f_drift: drift,
        t_trace,
        corners,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowCheckOptions {
    /// Target node spacing at `t = 1/2`.
    pub h: f64,
    /// Unbounded edges are cut at this radius at `t = 1/2`.
    pub truncation_radius: f64,
    /// Time step as a multiple of `h²`.
    pub dt_factor: f64,
    /// Number of comparison times after the start.
    pub checkpoints: usize,
}

impl Default for FlowCheckOptions {
    fn default() -> Self {
        Self {
            h: 0.02,
            truncation_radius: 12.0,
            dt_factor: 0.2,
            checkpoints: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowCheckRow {
    pub t: f64,
    /// Hausdorff distance to the self-similar frame, divided by `√(2t)`.
    pub deviation: f64,
    pub vertices: Vec<PlanePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowCheckReport {
    pub h: f64,
    pub dt: f64,
    pub steps: usize,
    pub rows: Vec<FlowCheckRow>,
    pub max_deviation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum NodeKind {
    Free,
    Junction,
    /// Moves as `λ(t) p`.
    Pinned(PlanePoint),
}

/// Polyline mesh; edges share junction nodes.
struct Mesh {
    nodes: Vec<PlanePoint>,
    kinds: Vec<NodeKind>,
    edges: Vec<Vec<usize>>,
    /// For each junction node, its three edges and whether it is the edge's first node.
    junctions: Vec<(usize, Vec<(usize, bool)>)>,
}

/// Resample a polyline at `n + 1` points equally spaced in arclength.
fn resample(line: &[PlanePoint], n: usize) -> Vec<PlanePoint> {
    let mut cum = vec![0.0];
    for w in line.windows(2) {
        cum.push(cum.last().unwrap() + w[0].distance(w[1]));
    }
    let total = *cum.last().unwrap();
    let mut out = Vec::with_capacity(n + 1);
    let mut j = 0;
    for i in 0..=n {
        let s = total * i as f64 / n as f64;
        while j + 2 < cum.len() && cum[j + 1] < s {
            j += 1;
        }
        let seg = cum[j + 1] - cum[j];
        let u = if seg > 0.0 { ((s - cum[j]) / seg).clamp(0.0, 1.0) } else { 0.0 };
        out.push(line[j] + (line[j + 1] - line[j]) * u);
    }
    out[0] = line[0];
    out[n] = *line.last().unwrap();
    out
}

/// Sampled edges cut at `radius`, with ideal ends closed off on their asymptotic ray.
fn truncated_edges(base: &Network, radius: f64) -> Vec<Vec<PlanePoint>> {
    base.edge_arcs
        .iter()
        .map(|arc| {
            let pts = arc.points();
            let (a, b) = arc.ideal_angles();
            let mut inner: Vec<PlanePoint> = pts.into_iter().filter(|p| p.r() < radius).collect();
            if let Some(a) = a {
                inner.insert(0, PlanePoint::from_polar(radius, a));
            }
            if let Some(b) = b {
                inner.push(PlanePoint::from_polar(radius, b));
            }
            inner
        })
        .collect()
}

impl Mesh {
    fn build(base: &Network, opts: &FlowCheckOptions) -> Result<Self> {
        let lines = truncated_edges(base, opts.truncation_radius);
        let k = base.topology.leaf_count;
        let mut nodes = Vec::new();
        let mut kinds = Vec::new();
        let mut node_of_vertex = vec![usize::MAX; base.vertices.len()];
        let mut edges = Vec::new();
        let mut junctions: Vec<(usize, Vec<(usize, bool)>)> = Vec::new();
        for (e, line) in lines.iter().enumerate() {
            if line.len() < 2 {
                return Err(Error::TooFewPoints(line.len()));
            }
            let length: f64 = line.windows(2).map(|w| w[0].distance(w[1])).sum();
            let n = ((length / opts.h).round() as usize).max(2);
            let pts = resample(line, n);
            let (u, v) = base.topology.edges[e];
            let mut ids = Vec::with_capacity(n + 1);
            for (i, p) in pts.iter().enumerate() {
                let end_node = if i == 0 {
                    Some(u)
                } else if i == n {
                    Some(v)
                } else {
                    None
                };
                match end_node {
                    Some(node) if node >= k => {
                        let vi = node - k;
                        if node_of_vertex[vi] == usize::MAX {
                            node_of_vertex[vi] = nodes.len();
                            nodes.push(base.vertices[vi]);
                            kinds.push(NodeKind::Junction);
                            junctions.push((nodes.len() - 1, Vec::new()));
                        }
                        let id = node_of_vertex[vi];
                        junctions.iter_mut().find(|j| j.0 == id).unwrap().1.push((e, i == 0));
                        ids.push(id);
                    }
                    Some(_) => {
                        ids.push(nodes.len());
                        nodes.push(*p);
                        kinds.push(NodeKind::Pinned(*p * (1.0 / lambda(0.5))));
                    }
                    None => {
                        ids.push(nodes.len());
                        nodes.push(*p);
                        kinds.push(NodeKind::Free);
                    }
                }
            }
            edges.push(ids);
        }
        Ok(Self {
            nodes,
            kinds,
            edges,
            junctions,
        })
    }

    fn min_segment(&self) -> f64 {
        self.edges
            .iter()
            .flat_map(|ids| ids.windows(2).map(|w| self.nodes[w[0]].distance(self.nodes[w[1]])))
            .fold(f64::INFINITY, f64::min)
    }

    /// One explicit step of curvature flow with tangential redistribution.
    fn step(&mut self, t: f64, dt: f64) {
        let old = self.nodes.clone();
        for ids in &self.edges {
            for w in ids.windows(3) {
                let (a, x, b) = (old[w[0]], old[w[1]], old[w[2]]);
                let (la, lb) = (x.distance(a), b.distance(x));
                let mean = 0.5 * (la + lb);
                let chord = b - a;
                let tangent = chord * (1.0 / chord.r());
                let normal = PlanePoint::new(-tangent.y, tangent.x);
                // Normal part: discrete curvature vector. Tangential part of the
                // Laplacian only redistributes nodes along the curve.
                let kappa = ((b - x) * (1.0 / lb) - (x - a) * (1.0 / la)) * (1.0 / mean);
                let lap = (a + b - x * 2.0) * (1.0 / (mean * mean));
                let v = normal * kappa.dot(normal) + tangent * lap.dot(tangent);
                self.nodes[w[1]] = x + v * dt;
            }
        }
        let l = lambda(t + dt);
        for (i, kind) in self.kinds.iter().enumerate() {
            if let NodeKind::Pinned(p) = kind {
                self.nodes[i] = *p * l;
            }
        }
        for j in 0..self.junctions.len() {
            self.balance_junction(j);
        }
    }

    /// Second-order one-sided tangents leaving the junction if it sat at `x`.
    fn junction_sum(&self, j: usize, x: PlanePoint) -> PlanePoint {
        let mut sum = PlanePoint::ORIGIN;
        for &(e, first) in &self.junctions[j].1 {
            let ids = &self.edges[e];
            let (p1, p2) = if first {
                (self.nodes[ids[1]], self.nodes[ids[2]])
            } else {
                let n = ids.len();
                (self.nodes[ids[n - 2]], self.nodes[ids[n - 3]])
            };
            let d = p1 * 4.0 - p2 - x * 3.0;
            sum = sum + d * (1.0 / d.r());
        }
        sum
    }

    /// One Newton step toward a zero tangent sum.
    fn balance_junction(&mut self, j: usize) {
        let id = self.junctions[j].0;
        let x = self.nodes[id];
        let g = self.junction_sum(j, x);
        let eps = 1e-7 * (1.0 + self.min_segment_near(j));
        let gx = (self.junction_sum(j, x + PlanePoint::new(eps, 0.0)) - g) * (1.0 / eps);
        let gy = (self.junction_sum(j, x + PlanePoint::new(0.0, eps)) - g) * (1.0 / eps);
        let det = gx.x * gy.y - gy.x * gx.y;
        if det.abs() < 1e-300 {
            return;
        }
        let dx = -(gy.y * g.x - gy.x * g.y) / det;
        let dy = -(-gx.y * g.x + gx.x * g.y) / det;
        self.nodes[id] = x + PlanePoint::new(dx, dy);
    }

    fn min_segment_near(&self, j: usize) -> f64 {
        let id = self.junctions[j].0;
        self.junctions[j]
            .1
            .iter()
            .map(|&(e, first)| {
                let ids = &self.edges[e];
                let next = if first { ids[1] } else { ids[ids.len() - 2] };
                self.nodes[id].distance(self.nodes[next])
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn polylines(&self) -> Vec<Vec<PlanePoint>> {
        self.edges
            .iter()
            .map(|ids| ids.iter().map(|&i| self.nodes[i]).collect())
            .collect()
    }
}

fn deviation(mesh: &Mesh, reference: &[Vec<PlanePoint>], t: f64) -> f64 {
    let l = lambda(t);
    let scaled: Vec<Vec<PlanePoint>> = reference
        .iter()
        .map(|e| e.iter().map(|&p| p * l).collect())
        .collect();
    let flowed = mesh.polylines();
    let cell = 0.05 * l;
    let a = SegmentIndex::new(&scaled, cell);
    let b = SegmentIndex::new(&flowed, cell);
    let d1 = flowed.iter().flatten().map(|&p| a.distance(p)).fold(0.0, f64::max);
    let d2 = scaled.iter().flatten().map(|&p| b.distance(p)).fold(0.0, f64::max);
    d1.max(d2) / l
}

/// Flow the truncated base network from `t = 1/2` to `t_end` by front tracking
/// and compare with the self-similar frames.
pub fn direct_flow_check(base: &Network, t_end: f64, opts: &FlowCheckOptions) -> Result<FlowCheckReport> {
    if !(t_end > 0.5) {
        return Err(Error::InvalidInput(format!("end time {t_end} must exceed 1/2")));
    }
    let mut mesh = Mesh::build(base, opts)?;
    let reference = truncated_edges(base, opts.truncation_radius);
    let dt_max = opts.dt_factor * opts.h * opts.h;
    let checkpoints: Vec<f64> = (0..=opts.checkpoints)
        .map(|i| 0.5 + (t_end - 0.5) * i as f64 / opts.checkpoints as f64)
        .collect();
    let junction_positions = |m: &Mesh| m.junctions.iter().map(|j| m.nodes[j.0]).collect::<Vec<_>>();
    let mut rows = vec![FlowCheckRow {
        t: 0.5,
        deviation: deviation(&mesh, &reference, 0.5),
        vertices: junction_positions(&mesh),
    }];
    let mut t = 0.5;
    let mut steps = 0;
    for &target in &checkpoints[1..] {
        let n = ((target - t) / dt_max).ceil() as usize;
        let dt = (target - t) / n as f64;
        for _ in 0..n {
            let l = mesh.min_segment();
            if l * l < 2.0 * dt {
                return Err(Error::CflViolation { dt, limit: 0.5 * l * l, t });
            }
            mesh.step(t, dt);
            t += dt;
            steps += 1;
        }
        t = target;
        rows.push(FlowCheckRow {
            t,
            deviation: deviation(&mesh, &reference, t),
            vertices: junction_positions(&mesh),
        });
    }
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(FlowCheckReport {
        h: opts.h,
        dt: dt_max,
        steps,
        rows,
        max_deviation,
    })
}

/// Flow a circle of radius `r0` with the same scheme and return the largest
/// error of its mean radius against `√(r0² − 2t)`, over `t ∈ [0, t_end]`.
pub fn circle_flow_error(r0: f64, t_end: f64, h: f64) -> Result<f64> {
    if !(t_end > 0.0 && 2.0 * t_end < r0 * r0) {
        return Err(Error::InvalidInput("the circle must survive to the end time".into()));
    }
    let n = ((2.0 * PI * r0 / h).round() as usize).max(8);
    let mut nodes: Vec<PlanePoint> = (0..n)
        .map(|i| PlanePoint::from_polar(r0, 2.0 * PI * i as f64 / n as f64))
        .collect();
    let mut t = 0.0;
    let mut worst: f64 = 0.0;
    while t < t_end {
        let l = (0..n).map(|i| nodes[i].distance(nodes[(i + 1) % n])).fold(f64::INFINITY, f64::min);
        let dt = (0.2 * l * l).min(t_end - t);
        let old = nodes.clone();
        for i in 0..n {
            let (a, x, b) = (old[(i + n - 1) % n], old[i], old[(i + 1) % n]);
            let (la, lb) = (x.distance(a), b.distance(x));
            let kappa = ((b - x) * (1.0 / lb) - (x - a) * (1.0 / la)) * (2.0 / (la + lb));
            nodes[i] = x + kappa * dt;
        }
        t += dt;
        let mean = nodes.iter().map(|p| p.r()).sum::<f64>() / n as f64;
        worst = worst.max((mean - (r0 * r0 - 2.0 * t).sqrt()).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::{solve_expander, Mode, RelaxOptions};

    fn triod() -> Network {
        solve_expander(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0], Mode::Connected, &RelaxOptions::default())
            .unwrap()
            .networks
            .remove(0)
    }

    #[test]
    fn evolve_scales() {
        let base = triod();
        let f = evolve(&base, 0.5).unwrap();
        assert_eq!(f.edges, base.polylines());
        let f2 = evolve(&base, 2.0).unwrap();
        for (a, b) in f2.edges.iter().flatten().zip(base.polylines().iter().flatten()) {
            assert!(a.distance(*b * 2.0) <= 1e-15 * (1.0 + b.r()));
        }
        assert!(evolve(&base, 0.0).is_err());
    }

    #[test]
    fn dilations_compose() {
        let base = triod();
        let f = evolve(&base, 0.7).unwrap();
        let two = dilate(&dilate(&f, 1.3), 0.6);
        let one = dilate(&f, 1.3 * 0.6);
        assert!((two.t - one.t).abs() < 1e-15);
        for (a, b) in two.edges.iter().flatten().zip(one.edges.iter().flatten()) {
            assert!(a.distance(*b) <= 1e-12);
        }
    }

    #[test]
    fn trajectories_are_rays() {
        let tr = Trajectory {
            vertex: 0,
            base: PlanePoint::new(1.0, 0.0),
        };
        assert!((tr.at(2.0).x - 2.0).abs() < 1e-15);
        let p = [tr.at(0.5), tr.at(1.0), tr.at(2.0)];
        assert!(p[1].cross(p[2]).abs() < 1e-12 && p[0].cross(p[1]).abs() < 1e-12);
        assert!(vertex_trajectories(&triod())[0].base.r() < 1e-6);
    }

    #[test]
    fn triod_cone_is_its_rays() {
        let cone = tangent_cone_at_infinity(&triod()).unwrap();
        assert_eq!(cone.len(), 3);
        for e in [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0] {
            assert!(cone.iter().any(|c| crate::geometry::wrap_angle(c - e).abs() < 1e-9), "{cone:?}");
        }
    }

    #[test]
    fn circle_follows_exact_radius() {
        let coarse = circle_flow_error(1.0, 0.3, 0.05).unwrap();
        let fine = circle_flow_error(1.0, 0.3, 0.025).unwrap();
        assert!(fine < 1e-3 && fine < coarse, "{coarse} {fine}");
    }

    #[test]
    fn straight_line_is_stationary() {
        let line = solve_expander(&[0.4, 0.4 + PI], Mode::Connected, &RelaxOptions::default())
            .unwrap()
            .networks
            .remove(0);
        assert!(line.edge_arcs[0].is_origin_line());
        let opts = FlowCheckOptions {
            h: 0.05,
            checkpoints: 3,
            ..Default::default()
        };
        let report = direct_flow_check(&line, 1.0, &opts).unwrap();
        assert!(report.max_deviation <= 1e-10, "{}", report.max_deviation);
        let cone = tangent_cone_at_infinity(&line).unwrap();
        assert!((cone[0] - 0.4).abs() < 1e-15 && (cone[1] - 0.4 - PI).abs() < 1e-15);
    }

    #[test]
    fn unbalanced_network_is_not_self_similar() {
        let mut base = triod();
        let good = direct_flow_check(&base, 1.0, &FlowCheckOptions { h: 0.05, checkpoints: 2, ..Default::default() })
            .unwrap()
            .max_deviation;
        base.vertices[0] = PlanePoint::new(0.3, 0.1);
        base.edge_arcs = crate::steiner::network::edge_arcs(&base.topology, &base.boundary, &base.vertices, true).unwrap();
        let bad = direct_flow_check(&base, 1.0, &FlowCheckOptions { h: 0.05, checkpoints: 2, ..Default::default() })
            .unwrap()
            .max_deviation;
        assert!(good < 1e-4 && bad > 1e-2, "{good} {bad}");
    }

    #[test]
    fn resample_keeps_ends() {
        let line = vec![PlanePoint::new(0.0, 0.0), PlanePoint::new(1.0, 0.0), PlanePoint::new(1.0, 2.0)];
        let r = resample(&line, 6);
        assert_eq!(r.len(), 7);
        assert_eq!(r[6], line[2]);
        assert!((r[1].x - 0.5).abs() < 1e-15);
    }
}
