//! Relaxation of a fixed topology to a regular network.
//!
//! Leaves are first anchored on their rays at radius `R`. A polyline network
//! with every node free is descended at the first radius to place the interior
//! vertices; afterwards edges are exact geodesics and only the interior
//! vertices move, stage by stage through the radius schedule and finally with
//! the leaves at their ideal points. The gradient of the length with respect
//! to a vertex `q` is `−e^{|q|²/2} Σ Tᵢ`, with `Tᵢ` the unit tangents of the
//! edges leaving `q`, so the balance `Σ Tᵢ = 0` is the stationarity condition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::{connect_unsampled, BoundarySpec, Endpoint};
use crate::geometry::{IdealPoint, PlanePoint};

use super::network::{edge_arcs, tangents_at, Diagnostics, Network, Stage, Status, VerifyTolerances};
use super::topology::Topology;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxOptions {
    /// Anchor radii of the continuation stages, increasing.
    pub schedule: Vec<f64>,
    /// Balance defect at which a stage stops.
    pub stage_tol: f64,
    pub max_iterations: usize,
    /// Interior vertices closer than this are reported as a collision.
    pub collision_threshold: f64,
    /// Target segment length of the polyline warm start.
    pub polyline_spacing: f64,
    pub polyline_iterations: usize,
    pub verify: VerifyTolerances,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self {
            schedule: vec![4.0, 6.0, 8.0, 12.0],
            stage_tol: 1e-11,
            max_iterations: 100,
            collision_threshold: 1e-3,
            polyline_spacing: 0.1,
            polyline_iterations: 400,
            verify: VerifyTolerances::default(),
        }
    }
}

/// Polyline network with leaves pinned at anchors. Every edge carries its own
/// interior nodes, listed from `edges[e].0` to `edges[e].1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolylineNetwork {
    pub topology: Topology,
    pub anchors: Vec<PlanePoint>,
    pub vertices: Vec<PlanePoint>,
    pub edge_nodes: Vec<Vec<PlanePoint>>,
}

impl PolylineNetwork {
    /// Straight edges between the given vertices and anchors, subdivided at roughly `spacing`.
    pub fn straight(topology: &Topology, anchors: Vec<PlanePoint>, vertices: Vec<PlanePoint>, spacing: f64) -> Self {
        let mut net = Self {
            topology: topology.clone(),
            anchors,
            vertices,
            edge_nodes: Vec::new(),
        };
        net.edge_nodes = (0..topology.edges.len())
            .map(|e| {
                let (a, b) = net.ends(e);
                let n = ((a.distance(b) / spacing).ceil() as usize).max(2);
                (1..n).map(|i| a + (b - a) * (i as f64 / n as f64)).collect()
            })
            .collect();
        net
    }

    fn node(&self, n: usize) -> PlanePoint {
        if self.topology.is_leaf(n) {
            self.anchors[n]
        } else {
            self.vertices[n - self.topology.leaf_count]
        }
    }

    fn ends(&self, e: usize) -> (PlanePoint, PlanePoint) {
        let (u, v) = self.topology.edges[e];
        (self.node(u), self.node(v))
    }

    /// Full path of edge `e`, endpoints included.
    pub fn path(&self, e: usize) -> Vec<PlanePoint> {
        let (a, b) = self.ends(e);
        std::iter::once(a)
            .chain(self.edge_nodes[e].iter().copied())
            .chain(std::iter::once(b))
            .collect()
    }

    /// Free nodes: interior vertices, then each edge's nodes in order.
    pub fn free_nodes(&self) -> Vec<PlanePoint> {
        self.vertices
            .iter()
            .copied()
            .chain(self.edge_nodes.iter().flatten().copied())
            .collect()
    }

    pub fn set_free_nodes(&mut self, nodes: &[PlanePoint]) {
        let nv = self.vertices.len();
        self.vertices.copy_from_slice(&nodes[..nv]);
        let mut i = nv;
        for e in &mut self.edge_nodes {
            let n = e.len();
            e.copy_from_slice(&nodes[i..i + n]);
            i += n;
        }
    }

    /// Discrete g-length: each segment weighted by `e^{|m|²/2}` at its midpoint `m`.
    pub fn length(&self) -> f64 {
        (0..self.edge_nodes.len())
            .map(|e| {
                self.path(e)
                    .windows(2)
                    .map(|w| w[0].distance(w[1]) * (0.5 * ((w[0] + w[1]) * 0.5).norm_sq()).exp())
                    .sum::<f64>()
            })
            .sum()
    }

    /// Exact gradient of [`length`](Self::length) with respect to the free nodes,
    /// and a diagonal scale `Σ w/l` over the segments at each node.
    pub fn gradient_and_scale(&self) -> (Vec<PlanePoint>, Vec<f64>) {
        let k = self.topology.leaf_count;
        let nv = self.vertices.len();
        let total = nv + self.edge_nodes.iter().map(Vec::len).sum::<usize>();
        let mut grad = vec![PlanePoint::ORIGIN; total];
        let mut scale = vec![0.0; total];
        let mut offset = nv;
        for e in 0..self.edge_nodes.len() {
            let (u, v) = self.topology.edges[e];
            let path = self.path(e);
            let n = path.len();
            // Free-node index of each path position.
            let slot = |i: usize| -> Option<usize> {
                if i == 0 {
                    (u >= k).then(|| u - k)
                } else if i == n - 1 {
                    (v >= k).then(|| v - k)
                } else {
                    Some(offset + i - 1)
                }
            };
            for i in 0..n - 1 {
                let (a, b) = (path[i], path[i + 1]);
                let d = b - a;
                let l = d.r();
                let m = (a + b) * 0.5;
                let w = (0.5 * m.norm_sq()).exp();
                let unit = if l > 0.0 { d * (1.0 / l) } else { PlanePoint::ORIGIN };
                let common = m * (0.5 * l * w);
                if let Some(s) = slot(i) {
                    grad[s] = grad[s] + common - unit * w;
                    scale[s] += w / l.max(1e-12);
                }
                if let Some(s) = slot(i + 1) {
                    grad[s] = grad[s] + common + unit * w;
                    scale[s] += w / l.max(1e-12);
                }
            }
            offset += n - 2;
        }
        (grad, scale)
    }

    pub fn gradient(&self) -> Vec<PlanePoint> {
        self.gradient_and_scale().0
    }

    /// Diagonally preconditioned descent with backtracking; every accepted step
    /// strictly lowers the length. Returns the objective after each accepted step.
    pub fn descend(&mut self, iterations: usize) -> Vec<f64> {
        let mut f = self.length();
        let mut history = vec![f];
        let mut alpha: f64 = 0.5;
        for _ in 0..iterations {
            let (g, scale) = self.gradient_and_scale();
            let x = self.free_nodes();
            let mut accepted = false;
            while alpha > 1e-10 {
                let trial: Vec<PlanePoint> =
                    x.iter().zip(&g).zip(&scale).map(|((p, gi), s)| *p - *gi * (alpha / s)).collect();
                let mut next = self.clone();
                next.set_free_nodes(&trial);
                let fn_ = next.length();
                if fn_ < f {
                    *self = next;
                    f = fn_;
                    history.push(f);
                    accepted = true;
                    alpha = (alpha * 1.5).min(1.0);
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted || history.len() >= 2 && history[history.len() - 2] - f <= 1e-15 * f {
                break;
            }
        }
        history
    }
}

/// First guess for the interior vertices: a third of the sum over the three
/// branches at each vertex of the mean leaf direction in that branch.
pub fn initial_vertices(topology: &Topology, boundary: &[IdealPoint]) -> Vec<PlanePoint> {
    let k = topology.leaf_count;
    (k..topology.node_count())
        .map(|node| {
            let mut sum = PlanePoint::ORIGIN;
            for e in topology.incident(node) {
                let (a, b) = topology.edges[e];
                let other = if a == node { b } else { a };
                let leaves = branch_leaves(topology, other, node);
                let mean = leaves
                    .iter()
                    .fold(PlanePoint::ORIGIN, |acc, &l| acc + boundary[l].direction())
                    * (1.0 / leaves.len() as f64);
                sum = sum + mean;
            }
            sum * (1.0 / 3.0)
        })
        .collect()
}

fn branch_leaves(topology: &Topology, start: usize, from: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![(start, from)];
    while let Some((n, parent)) = stack.pop() {
        if topology.is_leaf(n) {
            out.push(n);
            continue;
        }
        for e in topology.incident(n) {
            let (a, b) = topology.edges[e];
            let other = if a == n { b } else { a };
            if other != parent {
                stack.push((other, n));
            }
        }
    }
    out
}

/// Length of the exact geodesic network and the tangent sums `Σ Tᵢ` at its
/// vertices. Ends at leaves are measured relative to `∫_0^{|p|} e^{t²/2} dt`,
/// which keeps the objective finite for ideal leaves.
pub struct ExactObjective<'a> {
    pub topology: &'a Topology,
    pub leaves: Vec<Endpoint>,
}

impl ExactObjective<'_> {
    fn endpoint(&self, vertices: &[PlanePoint], n: usize) -> Endpoint {
        if self.topology.is_leaf(n) {
            self.leaves[n]
        } else {
            Endpoint::Finite(vertices[n - self.topology.leaf_count])
        }
    }

    pub fn evaluate(&self, vertices: &[PlanePoint]) -> Result<(f64, Vec<PlanePoint>)> {
        let t = self.topology;
        let mut arcs = Vec::with_capacity(t.edges.len());
        let mut total = 0.0;
        for &(u, v) in &t.edges {
            let arc = connect_unsampled(&BoundarySpec::new(self.endpoint(vertices, u), self.endpoint(vertices, v)))?;
            total += arc.renormalized_length(t.is_leaf(u), t.is_leaf(v));
            arcs.push(arc);
        }
        let sums = (0..vertices.len())
            .map(|i| {
                tangents_at(t, &arcs, t.leaf_count + i)
                    .iter()
                    .fold(PlanePoint::ORIGIN, |acc, x| acc + x.vector())
            })
            .collect();
        Ok((total, sums))
    }

    /// Gradient of the objective from the tangent sums.
    pub fn gradient(vertices: &[PlanePoint], sums: &[PlanePoint]) -> Vec<PlanePoint> {
        vertices
            .iter()
            .zip(sums)
            .map(|(q, s)| *s * -(0.5 * q.norm_sq()).exp())
            .collect()
    }
}

fn max_norm(v: &[PlanePoint]) -> f64 {
    v.iter().map(|p| p.r()).fold(0.0, f64::max)
}

fn check_collisions(topology: &Topology, vertices: &[PlanePoint], threshold: f64) -> Result<()> {
    let k = topology.leaf_count;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let d = vertices[i].distance(vertices[j]);
            if d < threshold {
                return Err(Error::VertexCollision {
                    a: k + i,
                    b: k + j,
                    distance: d,
                });
            }
        }
    }
    Ok(())
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn flatten(v: &[PlanePoint]) -> Vec<f64> {
    v.iter().flat_map(|p| [p.x, p.y]).collect()
}

fn unflatten(v: &[f64]) -> Vec<PlanePoint> {
    v.chunks(2).map(|c| PlanePoint::new(c[0], c[1])).collect()
}

/// Newton iteration on the balance equations with finite-difference Jacobian,
/// globalized by a backtracking search on the length.
fn solve_stage(obj: &ExactObjective<'_>, start: &[PlanePoint], opts: &RelaxOptions, radius: Option<f64>) -> Result<Stage> {
    let mut x = start.to_vec();
    let (mut f, mut sums) = obj.evaluate(&x)?;
    let n = 2 * x.len();
    let mut iterations = 0;
    loop {
        let defect = max_norm(&sums);
        if defect <= opts.stage_tol || n == 0 {
            return Ok(Stage {
                radius,
                vertices: x,
                objective: f,
                iterations,
                defect,
            });
        }
        if iterations >= opts.max_iterations {
            return Err(Error::NonConvergence { iterations, defect });
        }
        iterations += 1;
        check_collisions(obj.topology, &x, opts.collision_threshold)?;

        let g = flatten(&sums);
        let xf = flatten(&x);
        let h = 1e-7;
        let mut jac = vec![vec![0.0; n]; n];
        for j in 0..n {
            let mut xp = xf.clone();
            xp[j] += h;
            let (_, sp) = obj.evaluate(&unflatten(&xp))?;
            let gp = flatten(&sp);
            for i in 0..n {
                jac[i][j] = (gp[i] - g[i]) / h;
            }
        }
        let grad = flatten(&ExactObjective::gradient(&x, &sums));
        let newton = solve_linear(jac, g.iter().map(|v| -v).collect());
        let slope = |d: &[f64]| d.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>();
        let mut dir = match newton {
            Some(d) if slope(&d) < 0.0 => d,
            // Moving each vertex along its tangent sum lowers the length.
            _ => g.clone(),
        };
        let step = dir.chunks(2).map(|c| c[0].hypot(c[1])).fold(0.0, f64::max);
        if step > 0.5 {
            dir.iter_mut().for_each(|d| *d *= 0.5 / step);
        }
        let slope0 = slope(&dir);
        let mut alpha = 1.0;
        let mut moved = false;
        while alpha > 1e-8 {
            let trial: Vec<f64> = xf.iter().zip(&dir).map(|(a, d)| a + alpha * d).collect();
            let tv = unflatten(&trial);
            if let Ok((ft, st)) = obj.evaluate(&tv) {
                let noise = 1e-12 * (1.0 + f.abs());
                let armijo = ft <= f + 1e-4 * alpha * slope0;
                let flat = (ft - f).abs() <= noise && max_norm(&st) < defect;
                if armijo || flat {
                    x = tv;
                    f = ft;
                    sums = st;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !moved {
            return Err(Error::NonConvergence { iterations, defect });
        }
    }
}

/// Anchors `R·(cos αᵢ, sin αᵢ)` of the leaves.
pub fn anchors(boundary: &[IdealPoint], radius: f64) -> Vec<PlanePoint> {
    boundary.iter().map(|b| b.direction() * radius).collect()
}

/// Relax `topology` against `boundary` (sorted, distinct angles).
pub fn relax(topology: &Topology, boundary: &[IdealPoint], opts: &RelaxOptions) -> Network {
    let mut diagnostics = Diagnostics::default();
    let outcome = run_stages(topology, boundary, opts, &mut diagnostics);
    let (vertices, arcs) = match outcome {
        Ok(v) => match edge_arcs(topology, boundary, &v, true) {
            Ok(a) => (v, a),
            Err(e) => {
                diagnostics.message = Some(e.to_string());
                (v, Vec::new())
            }
        },
        Err(e) => {
            diagnostics.message = Some(e.to_string());
            let v = diagnostics.stages.last().map(|s| s.vertices.clone()).unwrap_or_default();
            (v, Vec::new())
        }
    };
    let failed = diagnostics.message.is_some();
    let mut network = Network {
        topology: topology.clone(),
        boundary: boundary.to_vec(),
        vertices,
        edge_arcs: arcs,
        status: Status::Candidate,
        diagnostics,
    };
    if failed {
        network.status = Status::Failed;
    } else {
        network.verify(&opts.verify);
    }
    network
}

fn run_stages(
    topology: &Topology,
    boundary: &[IdealPoint],
    opts: &RelaxOptions,
    diagnostics: &mut Diagnostics,
) -> Result<Vec<PlanePoint>> {
    if boundary.len() != topology.leaf_count {
        return Err(Error::InvalidInput(format!(
            "{} boundary points for a topology with {} leaves",
            boundary.len(),
            topology.leaf_count
        )));
    }
    let mut vertices = initial_vertices(topology, boundary);
    if let Some(&r) = opts.schedule.first() {
        if !vertices.is_empty() {
            let mut poly = PolylineNetwork::straight(topology, anchors(boundary, r), vertices, opts.polyline_spacing);
            diagnostics.polyline_objective = poly.descend(opts.polyline_iterations);
            vertices = poly.vertices;
        }
    }
    for &r in &opts.schedule {
        let obj = ExactObjective {
            topology,
            leaves: anchors(boundary, r).into_iter().map(Endpoint::Finite).collect(),
        };
        let stage = solve_stage(&obj, &vertices, opts, Some(r))?;
        vertices = stage.vertices.clone();
        diagnostics.stages.push(stage);
    }
    let obj = ExactObjective {
        topology,
        leaves: boundary.iter().map(|&b| Endpoint::Ideal(b)).collect(),
    };
    let stage = solve_stage(&obj, &vertices, opts, None)?;
    vertices = stage.vertices.clone();
    diagnostics.stages.push(stage);
    check_collisions(topology, &vertices, opts.collision_threshold)?;
    Ok(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::topology::{enumerate_topologies, Mode};
    use std::f64::consts::PI;

    fn boundary(angles: &[f64]) -> Vec<IdealPoint> {
        angles.iter().map(|&a| IdealPoint::new(a)).collect()
    }

    #[test]
    fn polyline_gradient_matches_central_differences() {
        let t = enumerate_topologies(4, Mode::Connected).unwrap().remove(0);
        let b = boundary(&[0.1, 1.7, 3.0, 4.4]);
        let net = PolylineNetwork::straight(&t, anchors(&b, 2.0), initial_vertices(&t, &b), 0.3);
        let x = net.free_nodes();
        let g = net.gradient();
        let h = 1e-6;
        for i in 0..x.len() {
            for axis in 0..2 {
                let mut fd = 0.0;
                for sign in [1.0, -1.0] {
                    let mut y = x.clone();
                    if axis == 0 {
                        y[i].x += sign * h;
                    } else {
                        y[i].y += sign * h;
                    }
                    let mut m = net.clone();
                    m.set_free_nodes(&y);
                    fd += sign * m.length();
                }
                fd /= 2.0 * h;
                let an = if axis == 0 { g[i].x } else { g[i].y };
                assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "node {i}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn polyline_descent_is_monotone() {
        let t = enumerate_topologies(3, Mode::Connected).unwrap().remove(0);
        let b = boundary(&[0.0, 2.0, 4.0]);
        let mut net = PolylineNetwork::straight(&t, anchors(&b, 4.0), initial_vertices(&t, &b), 0.1);
        let h = net.descend(200);
        assert!(h.len() > 10);
        assert!(h.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn symmetric_triod_relaxes_to_origin() {
        let t = enumerate_topologies(3, Mode::Connected).unwrap().remove(0);
        let b = boundary(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        let n = relax(&t, &b, &RelaxOptions::default());
        assert_eq!(n.status, Status::Regular, "{:?}", n.diagnostics.message);
        assert!(n.vertices[0].r() <= 1e-6);
    }

    #[test]
    fn generic_triod_is_balanced() {
        let t = enumerate_topologies(3, Mode::Connected).unwrap().remove(0);
        let b = boundary(&[0.3, 1.9, 4.0]);
        let n = relax(&t, &b, &RelaxOptions::default());
        assert_eq!(n.status, Status::Regular, "{:?}", n.diagnostics.message);
        for pair in [(0, 1), (1, 2), (0, 2)] {
            let tg = n.vertex_tangents(0);
            let dot = tg[pair.0].vector().dot(tg[pair.1].vector());
            assert!((dot + 0.5).abs() < 1e-8);
        }
    }

    #[test]
    fn linear_solver() {
        let x = solve_linear(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
        assert!(solve_linear(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 1.0]).is_none());
    }
}
