//! Deterministic SVG figures of networks.
//!
//! The ball chart sends `p` to `p/(√(1+|p|²) + 1)`: central projection onto
//! the upper unit hemisphere followed by stereographic projection from the
//! south pole. The circle at infinity becomes the unit circle.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::flow::{blowup_lift, WorldSheet};
use crate::geometry::PlanePoint;
use crate::steiner::Network;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Plane,
    Ball,
    Blowup,
}

impl std::str::FromStr for Chart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane" => Ok(Chart::Plane),
            "ball" => Ok(Chart::Ball),
            "blowup" => Ok(Chart::Blowup),
            other => Err(Error::InvalidInput(format!("unknown chart {other:?}"))),
        }
    }
}

/// Compactifying map onto the open unit disc.
pub fn ball_map(p: PlanePoint) -> PlanePoint {
    p * (1.0 / ((1.0 + p.norm_sq()).sqrt() + 1.0))
}

const SIZE: f64 = 400.0;
const STROKE: &str = "#1f4e79";

struct Canvas {
    body: String,
}

impl Canvas {
    fn new() -> Self {
        Self { body: String::new() }
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str, width: f64) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.4},{y:.4}")).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
            coords.join(" ")
        );
    }

    fn circle(&mut self, c: (f64, f64), r: f64, fill: &str, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.4}" cy="{:.4}" r="{r:.4}" fill="{fill}" stroke="{stroke}"/>"#,
            c.0, c.1
        );
    }

    fn text(&mut self, at: (f64, f64), s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.4}" y="{:.4}" font-family="sans-serif" font-size="14" text-anchor="middle">{s}</text>"#,
            at.0, at.1
        );
    }

    fn finish(self, width: f64, height: f64, title: &str) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
             <title>{title}</title>\n\
             <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Affine map of a disc of radius `extent` onto a square panel at horizontal offset `x0`.
fn panel(x0: f64, extent: f64) -> impl Fn(PlanePoint) -> (f64, f64) {
    move |p| {
        let s = 0.45 * SIZE / extent;
        (x0 + 0.5 * SIZE + s * p.x, 0.5 * SIZE - s * p.y)
    }
}

/// Edge polylines with every ideal end continued to its point at infinity in the ball chart.
fn ball_edges(network: &Network) -> Vec<Vec<PlanePoint>> {
    network
        .edge_arcs
        .iter()
        .map(|arc| {
            let mut pts: Vec<PlanePoint> = arc.points().into_iter().map(ball_map).collect();
            let (a, b) = arc.ideal_angles();
            if let Some(a) = a {
                pts.insert(0, PlanePoint::from_polar(1.0, a));
            }
            if let Some(b) = b {
                pts.push(PlanePoint::from_polar(1.0, b));
            }
            pts
        })
        .collect()
}

fn unit_circle(c: &mut Canvas, map: &impl Fn(PlanePoint) -> (f64, f64), radius: f64) {
    let pts: Vec<(f64, f64)> = (0..=360)
        .map(|i| map(PlanePoint::from_polar(radius, (i as f64).to_radians())))
        .collect();
    c.polyline(&pts, "#888888", 1.0);
}

fn draw_ball(c: &mut Canvas, network: &Network, x0: f64) {
    let map = panel(x0, 1.0);
    unit_circle(c, &map, 1.0);
    for line in ball_edges(network) {
        let pts: Vec<(f64, f64)> = line.iter().map(|&p| map(p)).collect();
        c.polyline(&pts, STROKE, 1.5);
    }
    for &v in &network.vertices {
        c.circle(map(ball_map(v)), 3.0, STROKE, "none");
    }
}

pub fn render(network: &Network, chart: Chart) -> Result<String> {
    let mut c = Canvas::new();
    match chart {
        Chart::Plane => {
            let extent = 3.0;
            let map = panel(0.0, extent);
            let _ = writeln!(
                c.body,
                r#"<clipPath id="view"><rect x="0" y="0" width="{SIZE}" height="{SIZE}"/></clipPath><g clip-path="url(#view)">"#
            );
            for b in &network.boundary {
                let far = b.direction() * (2.0 * extent);
                c.polyline(&[map(PlanePoint::ORIGIN), map(far)], "#cccccc", 1.0);
            }
            for line in network.polylines() {
                let pts: Vec<(f64, f64)> = line.iter().map(|&p| map(p)).collect();
                c.polyline(&pts, STROKE, 1.5);
            }
            for &v in &network.vertices {
                c.circle(map(v), 3.0, STROKE, "none");
            }
            c.body.push_str("</g>\n");
            Ok(c.finish(SIZE, SIZE, "network in the plane"))
        }
        Chart::Ball => {
            draw_ball(&mut c, network, 0.0);
            let map = panel(0.0, 1.0);
            for b in &network.boundary {
                c.circle(map(b.direction()), 3.0, "#b22222", "none");
            }
            Ok(c.finish(SIZE, SIZE, "network in the ball chart"))
        }
        Chart::Blowup => {
            let lift = blowup_lift(&WorldSheet::new(network.clone(), vec![0.5])?)?;
            // Face F: the network in (x, y)/sqrt(2t), compactified like the ball chart.
            draw_ball(&mut c, network, 0.0);
            let left = panel(0.0, 1.0);
            for &a in &lift.corners {
                c.circle(left(PlanePoint::from_polar(1.0, a)), 4.0, "#b22222", "none");
            }
            c.text((0.5 * SIZE, SIZE - 8.0), "F");
            // Face T: the t = 0 plane outside a ball, compactified to an annulus.
            let right = panel(SIZE, 1.0);
            let inner = 0.35;
            unit_circle(&mut c, &right, inner);
            unit_circle(&mut c, &right, 1.0);
            for &a in &lift.t_trace {
                let ends = [PlanePoint::from_polar(inner, a), PlanePoint::from_polar(1.0, a)];
                c.polyline(&[right(ends[0]), right(ends[1])], STROKE, 1.5);
            }
            for &a in &lift.corners {
                c.circle(right(PlanePoint::from_polar(inner, a)), 4.0, "#b22222", "none");
            }
            c.text((1.5 * SIZE, SIZE - 8.0), "T");
            Ok(c.finish(2.0 * SIZE, SIZE, "blowup faces F and T; F drawn in (x, y)/sqrt(2t) with the ball chart compactification"))
        }
    }
}
