use std::f64::consts::{PI, TAU};
use std::time::Instant;

use expander_core::flow::{blowup_lift, direct_flow_check, FlowCheckOptions, WorldSheet};
use expander_core::geodesics::{
    connect, fixed_step_profile, shoot_from_apex, width_table, ApexProfile, BoundarySpec, Endpoint,
    GeodesicArc, ShootOptions,
};
use expander_core::geometry::{wrap_angle, IdealPoint, PlanePoint};
use expander_core::polyline::hausdorff;
use expander_core::steiner::relax::{anchors, initial_vertices, PolylineNetwork};
use expander_core::steiner::{enumerate_topologies, solve_expander, Mode, Network, RelaxOptions};
use expander_core::Result;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<(bool, String)>;

fn ideal(a: f64) -> Endpoint {
    Endpoint::Ideal(IdealPoint::new(a))
}

fn solve(angles: &[f64], mode: Mode) -> Result<Vec<Network>> {
    Ok(solve_expander(angles, mode, &RelaxOptions::default())?.networks)
}

fn angle_gap(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Sorted angles in `[0, 2π)` whose cyclic gaps all exceed `min_gap`.
fn random_angles(rng: &mut StdRng, k: usize, min_gap: f64) -> Vec<f64> {
    loop {
        let mut a: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..TAU)).collect();
        a.sort_by(f64::total_cmp);
        let ok = (0..k).all(|i| {
            let next = if i + 1 < k { a[i + 1] } else { a[0] + TAU };
            next - a[i] > min_gap
        });
        if ok {
            return a;
        }
    }
}

fn menger_curvature(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> f64 {
    let area2 = (b - a).cross(c - a).abs();
    2.0 * area2 / (a.distance(b) * b.distance(c) * c.distance(a))
}

fn soliton_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let start = Instant::now();
    let (mut residual, mut asymptote): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let a = rng.gen_range(0.0..TAU);
        let b = a + rng.gen_range(0.05..TAU - 0.05);
        let arc = connect(&BoundarySpec::new(ideal(a), ideal(b)))?;
        residual = residual.max(arc.max_soliton_residual());
        if let GeodesicArc::GraphArc(g) = &arc {
            let shot = shoot_from_apex(g.apex_theta, g.apex_r, &ShootOptions::default())?;
            let (lo, hi) = shot.arc.asymptotes;
            let e = (angle_gap(lo, a) + angle_gap(hi, b)).min(angle_gap(lo, b) + angle_gap(hi, a));
            asymptote = asymptote.max(e);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        residual <= 1e-6 && asymptote <= 1e-6 && secs < 10.0,
        format!("max residual {residual:.2e}, shot asymptote error {asymptote:.2e}, {secs:.2}s"),
    ))
}

fn integrator_order() -> Outcome {
    let mut worst = f64::INFINITY;
    for i in 0..10 {
        let r0 = 0.1 + 0.2 * i as f64;
        let eta = 0.5 * ApexProfile::new(r0)?.half_width();
        let r = |n: usize| fixed_step_profile(r0, eta, n).map(|v| v.0);
        let (a, b, c) = (r(16)?, r(32)?, r(64)?);
        let order = ((a - b) / (b - c)).abs().log2();
        worst = worst.min(order);
    }
    Ok((worst >= 3.8, format!("min observed order {worst:.3}")))
}

fn width_bounds() -> Outcome {
    let radii = [0.05, 0.1, 0.5, 1.0, 2.0, 5.0];
    let table = width_table(&radii)?;
    let mut ok = table.windows(2).all(|w| w[1].1 < w[0].1);
    let mut quad_err: f64 = 0.0;
    let mut detail = Vec::new();
    for &(r0, w) in &table {
        ok &= w < PI / (1.0 + r0 * r0);
        quad_err = quad_err.max((w - 2.0 * ApexProfile::new(r0)?.half_width()).abs());
        detail.push(format!("{r0}:{w:.6}"));
    }
    ok &= quad_err <= 1e-6;
    Ok((ok, format!("widths [{}], quadrature agreement {quad_err:.1e}", detail.join(" "))))
}

fn symmetry() -> Outcome {
    let mut worst: f64 = 0.0;
    for &r0 in &[0.05, 0.3, 1.0, 2.0, 5.0] {
        let theta0 = 0.7;
        let shot = shoot_from_apex(theta0, r0, &ShootOptions::default())?;
        let s = &shot.arc.samples;
        for i in 0..s.len() / 2 {
            let (a, b) = (s[i], s[s.len() - 1 - i]);
            if ((a.theta - theta0) + (b.theta - theta0)).abs() > 1e-12 {
                return Ok((false, format!("unpaired samples at r0 = {r0}")));
            }
            worst = worst.max((a.r - b.r).abs());
        }
    }
    Ok((worst <= 1e-8, format!("max |r(θ0+η) − r(θ0−η)| {worst:.1e}")))
}

fn triods(generic: &Network) -> Outcome {
    let equal = solve(&[0.0, TAU / 3.0, 2.0 * TAU / 3.0], Mode::Connected)?;
    let mut ok = equal.len() == 1;
    let (mut offset, mut curvature) = (f64::NAN, 0.0f64);
    if let Some(n) = equal.first() {
        offset = n.vertices[0].r();
        for line in n.polylines() {
            let mut thin = vec![line[0]];
            for &p in &line[1..] {
                if p.distance(*thin.last().unwrap()) >= 0.05 {
                    thin.push(p);
                }
            }
            for w in thin.windows(3) {
                curvature = curvature.max(menger_curvature(w[0], w[1], w[2]));
            }
        }
        ok &= offset <= 1e-6 && curvature <= 1e-8;
    }
    let mut rng = StdRng::seed_from_u64(5);
    let mut angle_err: f64 = 0.0;
    let mut counts_ok = true;
    let mut triples: Vec<Vec<f64>> = (0..19).map(|_| random_angles(&mut rng, 3, 0.2)).collect();
    triples.push(generic.boundary_angles());
    for angles in &triples {
        let nets = solve(angles, Mode::Connected)?;
        counts_ok &= nets.len() == 1 && nets[0].vertices.len() == 1;
        if let Some(n) = nets.first() {
            let t = n.vertex_tangents(0);
            for i in 0..3 {
                let d = t[i].vector().dot(t[(i + 1) % 3].vector()).clamp(-1.0, 1.0);
                angle_err = angle_err.max((d.acos() - TAU / 3.0).abs());
            }
        }
    }
    ok &= counts_ok && angle_err <= 1e-4;
    Ok((
        ok,
        format!(
            "equal: {} solution(s), |q| {offset:.1e}, curvature {curvature:.1e}; random: unique {counts_ok}, angle error {angle_err:.1e}",
            equal.len()
        ),
    ))
}

/// Asymptotic direction of the curve through `p` with initial direction `psi`
/// under `κ = p·ν`, integrated by classical RK4 in Euclidean arclength.
fn soliton_ray_direction(p: PlanePoint, psi: f64) -> f64 {
    let f = |y: [f64; 3]| {
        let (s, c) = y[2].sin_cos();
        [c, s, -y[0] * s + y[1] * c]
    };
    let mut y = [p.x, p.y, psi];
    let h = 1e-3;
    while y[0].hypot(y[1]) < 7.0 {
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1], y[2] + 0.5 * h * k1[2]]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1], y[2] + 0.5 * h * k2[2]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1], y[2] + h * k3[2]]);
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y[2]
}

/// Half-diagonal `s` of the cross solution with vertices `±(s, s)`: the branch
/// from `(s, s)` leaving at 60° to the diagonal must be asymptotic to the x-axis.
fn cross_oracle() -> f64 {
    let miss = |s: f64| soliton_ray_direction(PlanePoint::new(s, s), PI / 4.0 - PI / 3.0);
    let (mut lo, mut hi) = (0.0, 0.6);
    assert!(miss(lo) < 0.0 && miss(hi) > 0.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if miss(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn cross(nets: &[Network]) -> Outcome {
    let angles = [0.0, PI / 2.0, PI, 1.5 * PI];
    let mut ok = nets.len() == 2 && nets.iter().all(|n| n.vertices.len() == 2 && n.edge_arcs.len() == 5);
    let mut rotation = f64::NAN;
    let mut oracle_err = f64::NAN;
    let s = cross_oracle();
    if nets.len() == 2 {
        rotation = hausdorff(&nets[0].rotated_polylines(PI / 2.0), &nets[1].polylines(), 0.05);
        oracle_err = nets
            .iter()
            .flat_map(|n| &n.vertices)
            .map(|v| (v.x.abs() - s).abs().max((v.y.abs() - s).abs()))
            .fold(0.0, f64::max);
        ok &= rotation <= 1e-5 && oracle_err <= 1e-6;
    }
    let matchings = solve(&angles, Mode::Matchings)?.len();
    ok &= matchings == 2;
    Ok((
        ok,
        format!(
            "{} connected, rotation Hausdorff {rotation:.1e}, RK4 oracle s = {s:.8} (error {oracle_err:.1e}), {matchings} matchings",
            nets.len()
        ),
    ))
}

/// Splits of a tree given as an edge list on nodes `0..k` (leaves) and beyond.
fn tree_splits(edges: &[(usize, usize)], k: usize) -> Vec<Vec<usize>> {
    let n = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0) + 1;
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut splits = Vec::new();
    for &(a, b) in edges {
        let mut side = Vec::new();
        let mut stack = vec![(b, a)];
        while let Some((v, from)) = stack.pop() {
            if v < k {
                side.push(v);
            }
            stack.extend(adj[v].iter().filter(|&&w| w != from).map(|&w| (w, v)));
        }
        side.sort_unstable();
        if side.contains(&0) {
            side = (0..k).filter(|x| !side.contains(x)).collect();
        }
        splits.push(side);
    }
    splits.sort();
    splits
}

fn cyclic_interval(set: &[usize], k: usize) -> bool {
    let starts = set.iter().filter(|&&x| !set.contains(&((x + k - 1) % k))).count();
    starts <= 1
}

/// All leaf-labelled trivalent trees by inserting leaves into edges, kept if
/// every split is an arc of the circle.
fn brute_connected(k: usize) -> usize {
    let mut trees = vec![vec![(k, 0), (k, 1), (k, 2)]];
    for leaf in 3..k {
        let mut next = Vec::new();
        for t in &trees {
            let node = k + leaf - 2;
            for i in 0..t.len() {
                let (a, b) = t[i];
                let mut u = t.clone();
                u[i] = (a, node);
                u.push((node, b));
                u.push((node, leaf));
                next.push(u);
            }
        }
        trees = next;
    }
    let mut seen: Vec<Vec<Vec<usize>>> = trees
        .iter()
        .map(|t| tree_splits(t, k))
        .filter(|s| s.iter().all(|x| cyclic_interval(x, k)))
        .collect();
    seen.sort();
    seen.dedup();
    seen.len()
}

fn brute_matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for j in 1..points.len() {
        let rest: Vec<usize> = points[1..].iter().copied().filter(|&p| p != points[j]).collect();
        for mut m in brute_matchings(&rest) {
            m.push((points[0], points[j]));
            out.push(m);
        }
    }
    out
}

fn combinatorics() -> Outcome {
    const CATALAN: [usize; 6] = [1, 1, 2, 5, 14, 42];
    let mut ok = true;
    let mut detail = Vec::new();
    for k in 3..=7 {
        let brute = brute_connected(k);
        let got = enumerate_topologies(k, Mode::Connected)?.len();
        ok &= brute == CATALAN[k - 2] && got == brute;
        detail.push(format!("k{k}:{got}/{brute}"));
    }
    for k in (2..=10).step_by(2) {
        let pts: Vec<usize> = (0..k).collect();
        let brute = brute_matchings(&pts)
            .into_iter()
            .filter(|m| {
                m.iter().all(|&(a, b)| {
                    m.iter().all(|&(c, d)| !((a < c && c < b && b < d) || (c < a && a < d && d < b)))
                })
            })
            .count();
        let got = enumerate_topologies(k, Mode::Matchings)?.len();
        ok &= brute == CATALAN[k / 2] && got == brute;
        detail.push(format!("m{k}:{got}/{brute}"));
    }
    Ok((ok, detail.join(" ")))
}

fn first_variation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let k = rng.gen_range(3..=6);
        let tops = enumerate_topologies(k, Mode::Connected)?;
        let t = &tops[rng.gen_range(0..tops.len())];
        let b: Vec<IdealPoint> = random_angles(&mut rng, k, 0.2).into_iter().map(IdealPoint::new).collect();
        let radius = rng.gen_range(2.0..4.0);
        let mut net = PolylineNetwork::straight(t, anchors(&b, radius), initial_vertices(t, &b), 0.3);
        let x: Vec<PlanePoint> = net
            .free_nodes()
            .into_iter()
            .map(|p| p + PlanePoint::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)))
            .collect();
        net.set_free_nodes(&x);
        let g = net.gradient();
        let h = 1e-6;
        let (mut diff, mut norm) = (0.0, 0.0);
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
                diff += (fd - an) * (fd - an);
                norm += an * an;
            }
        }
        worst = worst.max((diff / norm).sqrt());
    }
    Ok((worst <= 1e-5, format!("max relative error {worst:.1e}")))
}

fn r_stability() -> Outcome {
    let configs: [&[f64]; 3] = [
        &[0.0, PI / 2.0, PI, 1.5 * PI],
        &[0.3, 1.9, 2.8, 4.0, 5.2],
        &[0.2, 1.1, 2.3, 3.3, 4.4, 5.5],
    ];
    let (mut worst, mut early): (f64, f64) = (0.0, 0.0);
    let mut count = 0;
    for angles in configs {
        for n in solve(angles, Mode::Connected)? {
            let at = |r: f64| n.diagnostics.stages.iter().find(|s| s.radius == Some(r));
            let (Some(a), Some(b)) = (at(8.0), at(12.0)) else {
                return Ok((false, "missing R = 8 or R = 12 stage".into()));
            };
            for (p, q) in a.vertices.iter().zip(&b.vertices) {
                worst = worst.max(p.distance(*q));
            }
            if let Some(c) = at(4.0) {
                for (p, q) in c.vertices.iter().zip(&b.vertices) {
                    early = early.max(p.distance(*q));
                }
            }
            count += 1;
        }
    }
    Ok((
        worst <= 1e-4 && count > 0,
        format!("{count} networks, max vertex motion R=8→12 {worst:.1e} (R=4→12 {early:.1e})"),
    ))
}

fn flow_oracle(nets: &[(&str, &Network)]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, base) in nets {
        let start = Instant::now();
        let coarse = direct_flow_check(base, 2.0, &FlowCheckOptions::default())?;
        let fine = direct_flow_check(base, 2.0, &FlowCheckOptions { h: 0.01, ..Default::default() })?;
        let secs = start.elapsed().as_secs_f64();
        ok &= coarse.max_deviation <= 1e-2 && fine.max_deviation < coarse.max_deviation && secs < 120.0;
        detail.push(format!(
            "{name}: h=0.02 {:.2e}, h=0.01 {:.2e}, {secs:.1}s",
            coarse.max_deviation, fine.max_deviation
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn blowup(nets: &[&Network]) -> Outcome {
    let mut ok = true;
    let (mut drift, mut rays, mut corners): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in nets {
        let sheet = WorldSheet::new((*n).clone(), vec![0.05, 0.5, 1.0, 2.0, 10.0])?;
        let lift = blowup_lift(&sheet)?;
        let input = n.boundary_angles();
        drift = drift.max(lift.f_drift);
        ok &= lift.t_trace.len() == input.len() && lift.corners.len() == input.len();
        for (a, b) in lift.t_trace.iter().zip(&input) {
            rays = rays.max(angle_gap(*a, *b));
        }
        for (a, b) in lift.corners.iter().zip(&input) {
            corners = corners.max(angle_gap(*a, *b));
        }
    }
    ok &= drift <= 1e-12 && rays <= 1e-6 && corners <= 1e-12;
    Ok((
        ok,
        format!("F drift {drift:.1e}, T-trace vs rays {rays:.1e}, corners vs boundary {corners:.1e}"),
    ))
}

fn main() {
    let cross_nets = solve(&[0.0, PI / 2.0, PI, 1.5 * PI], Mode::Connected).expect("cross solve");
    let generic = solve(&[0.3, 1.9, 4.0], Mode::Connected)
        .expect("triod solve")
        .into_iter()
        .next()
        .expect("generic triod has a solution");
    let mut flow_bases = vec![("k=3 generic", &generic)];
    let mut blowup_bases = vec![&generic];
    if let Some(n) = cross_nets.first() {
        flow_bases.push(("k=4 cross", n));
        blowup_bases.push(n);
    }

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("soliton equivalence", Box::new(soliton_equivalence)),
        ("integrator order", Box::new(integrator_order)),
        ("width bounds", Box::new(width_bounds)),
        ("apex symmetry", Box::new(symmetry)),
        ("k=3 triods", Box::new(|| triods(&generic))),
        ("k=4 cross", Box::new(|| cross(&cross_nets))),
        ("topology counts", Box::new(combinatorics)),
        ("polyline first variation", Box::new(first_variation)),
        ("R-stability", Box::new(r_stability)),
        ("self-similarity flow oracle", Box::new(|| flow_oracle(&flow_bases))),
        ("blowup traces", Box::new(|| blowup(&blowup_bases))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
