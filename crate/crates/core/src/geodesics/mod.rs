//! Geodesics of g: apex shooting, angular widths, and the two-point connector.

mod connect;
pub mod profile;
pub mod shoot;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{state_soliton_residual, IdealPoint, PlanePoint, PolarGraphState, UnitTangent};

pub use connect::{connect, connect_unsampled, ANGLE_EPS};
pub use profile::{radial_length, ApexProfile};
pub use shoot::{fixed_step_profile, shoot_from_apex, width, width_table, width_with, ApexShot, ShootOptions};

/// Ideal ends of sampled arcs are drawn out to this radius. Beyond it an arc
/// is within `e^{-32}` of its asymptotic ray.
pub const IDEAL_SAMPLE_RADIUS: f64 = 8.0;

/// Target Euclidean spacing of arc samples.
pub const SAMPLE_SPACING: f64 = 0.005;

/// A straight line through the origin, oriented along `angle`. `start` and
/// `end` are signed positions along that direction with `start < end`; `None`
/// marks an ideal end (`−∞` for `start`, `+∞` for `end`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OriginLine {
    pub angle: f64,
    pub start: Option<f64>,
    pub end: Option<f64>,
    #[serde(default)]
    pub samples: Vec<PlanePoint>,
}

/// A geodesic written as a polar graph around its apex `(θ₀, r₀)`. The arc
/// runs from angular offset `start_eta` to `end_eta` (measured from θ₀).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphArc {
    pub apex_theta: f64,
    pub apex_r: f64,
    pub start_eta: f64,
    pub end_eta: f64,
    /// Radius at the start; `None` for an ideal end.
    pub start_r: Option<f64>,
    /// Radius at the end; `None` for an ideal end.
    pub end_r: Option<f64>,
    /// Asymptotic angles `(a, b)` of the maximal arc, `a < b`.
    pub asymptotes: (f64, f64),
    #[serde(default)]
    pub samples: Vec<PolarGraphState>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeodesicArc {
    OriginLine(OriginLine),
    GraphArc(GraphArc),
}

/// One end of a boundary value problem: a point of the plane or of the circle at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Finite(PlanePoint),
    Ideal(IdealPoint),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub first: Endpoint,
    pub second: Endpoint,
}

impl BoundarySpec {
    pub fn new(first: Endpoint, second: Endpoint) -> Self {
        Self { first, second }
    }
}

impl GraphArc {
    pub fn profile(&self) -> ApexProfile {
        ApexProfile::new(self.apex_r).expect("graph arcs have positive apex radius")
    }

    /// Exact state at angular offset `eta` where the radius is `r`.
    fn state_at(&self, eta: f64, r: f64, profile: &ApexProfile) -> PolarGraphState {
        let dr = if eta == 0.0 { 0.0 } else { eta.signum() * r * profile.log_slope(r) };
        PolarGraphState::new(self.apex_theta + eta, r, dr)
    }

    fn direction(&self) -> f64 {
        (self.end_eta - self.start_eta).signum()
    }

    pub fn start_state(&self) -> Option<PolarGraphState> {
        self.start_r.map(|r| self.state_at(self.start_eta, r, &self.profile()))
    }

    pub fn end_state(&self) -> Option<PolarGraphState> {
        self.end_r.map(|r| self.state_at(self.end_eta, r, &self.profile()))
    }

    /// Fill `samples` from the exact profile, spaced about `SAMPLE_SPACING` apart.
    pub fn sample(&mut self) {
        let profile = self.profile();
        let r0 = self.apex_r;
        let far = IDEAL_SAMPLE_RADIUS
            .max(r0 + 2.0)
            .max(self.start_r.unwrap_or(0.0))
            .max(self.end_r.unwrap_or(0.0));
        let start_r = self.start_r.unwrap_or(far);
        let end_r = self.end_r.unwrap_or(far);
        let (s0, s1) = (self.start_eta.signum(), self.end_eta.signum());
        let mut out = Vec::new();
        if s0 * s1 <= 0.0 {
            // Passes through the apex.
            let mut first = sample_piece(&profile, start_r, r0, s0);
            let second = sample_piece(&profile, r0, end_r, s1);
            first.pop();
            out.extend(first);
            out.extend(second);
        } else {
            out = sample_piece(&profile, start_r, end_r, s0);
        }
        self.samples = out
            .into_iter()
            .map(|(eta, r)| self.state_at(eta, r, &profile))
            .collect();
    }
}

/// Points `(η, r)` on one side of the apex going from radius `from` to `to`.
fn sample_piece(profile: &ApexProfile, from: f64, to: f64, side: f64) -> Vec<(f64, f64)> {
    let r0 = profile.apex_radius();
    let (lo, hi) = (from.min(to), from.max(to));
    let eta_lo = profile.eta(lo);
    let span = profile.eta_between(lo, hi);
    let est = (hi - lo) + hi * span;
    let n = ((est / SAMPLE_SPACING).ceil() as usize).clamp(24, 6000);
    let (u_lo, u_hi) = ((lo - r0).max(0.0).sqrt(), (hi - r0).max(0.0).sqrt());
    let mut pts = Vec::with_capacity(n + 1);
    let mut eta = eta_lo;
    let mut prev = lo;
    for i in 0..=n {
        let u = u_lo + (u_hi - u_lo) * i as f64 / n as f64;
        let t = if i == 0 { lo } else if i == n { hi } else { r0 + u * u };
        if i > 0 {
            eta += profile.eta_between(prev, t);
        }
        pts.push((side * eta, t));
        prev = t;
    }
    if from > to {
        pts.reverse();
    }
    pts
}

/// Radius at angular offset `eta` from the apex, by bisection on `η(r)`.
pub fn invert_eta(profile: &ApexProfile, eta: f64) -> f64 {
    let r0 = profile.apex_radius();
    if eta <= 0.0 {
        return r0;
    }
    let mut lo = r0;
    let mut hi = r0 + 1.0;
    while profile.eta(hi) < eta {
        lo = hi;
        hi = 2.0 * hi;
        if hi > 1e3 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if profile.eta(mid) < eta {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

impl OriginLine {
    fn unit(&self) -> PlanePoint {
        PlanePoint::from_polar(1.0, self.angle)
    }

    pub fn sample(&mut self) {
        let far = IDEAL_SAMPLE_RADIUS;
        let s = self.start.unwrap_or(-far.max(self.end.map_or(0.0, |e| e.abs())));
        let e = self.end.unwrap_or(far.max(self.start.map_or(0.0, |s| s.abs())));
        let n = (((e - s) / SAMPLE_SPACING).ceil() as usize).clamp(2, 20_000);
        let u = self.unit();
        self.samples = (0..=n)
            .map(|i| u * (s + (e - s) * i as f64 / n as f64))
            .collect();
    }
}

impl GeodesicArc {
    /// Cartesian polyline through the samples.
    pub fn points(&self) -> Vec<PlanePoint> {
        match self {
            GeodesicArc::OriginLine(l) => l.samples.clone(),
            GeodesicArc::GraphArc(g) => g.samples.iter().map(|s| s.position()).collect(),
        }
    }

    pub fn is_origin_line(&self) -> bool {
        matches!(self, GeodesicArc::OriginLine(_))
    }

    pub fn start_is_ideal(&self) -> bool {
        match self {
            GeodesicArc::OriginLine(l) => l.start.is_none(),
            GeodesicArc::GraphArc(g) => g.start_r.is_none(),
        }
    }

    pub fn end_is_ideal(&self) -> bool {
        match self {
            GeodesicArc::OriginLine(l) => l.end.is_none(),
            GeodesicArc::GraphArc(g) => g.end_r.is_none(),
        }
    }

    /// Asymptotic angles of the ideal ends `(start, end)`.
    pub fn ideal_angles(&self) -> (Option<f64>, Option<f64>) {
        match self {
            GeodesicArc::OriginLine(l) => (
                l.start.is_none().then(|| l.angle + std::f64::consts::PI),
                l.end.is_none().then_some(l.angle),
            ),
            GeodesicArc::GraphArc(g) => {
                let hw = g.profile().half_width();
                (
                    g.start_r.is_none().then(|| g.apex_theta + g.start_eta.signum() * hw),
                    g.end_r.is_none().then(|| g.apex_theta + g.end_eta.signum() * hw),
                )
            }
        }
    }

    /// Unit tangent at the start, pointing into the arc. `None` for ideal ends.
    pub fn start_tangent(&self) -> Option<UnitTangent> {
        match self {
            GeodesicArc::OriginLine(l) => l.start.is_some().then(|| UnitTangent::new(l.angle)),
            GeodesicArc::GraphArc(g) => g.start_state().map(|s| {
                let t = s.tangent();
                if g.direction() > 0.0 { t } else { t.reversed() }
            }),
        }
    }

    /// Unit tangent at the end, pointing into the arc (back toward the start).
    pub fn end_tangent(&self) -> Option<UnitTangent> {
        match self {
            GeodesicArc::OriginLine(l) => l.end.is_some().then(|| UnitTangent::new(l.angle).reversed()),
            GeodesicArc::GraphArc(g) => g.end_state().map(|s| {
                let t = s.tangent();
                if g.direction() > 0.0 { t.reversed() } else { t }
            }),
        }
    }

    pub fn start_point(&self) -> Option<PlanePoint> {
        match self {
            GeodesicArc::OriginLine(l) => l.start.map(|s| l.unit() * s),
            GeodesicArc::GraphArc(g) => g.start_state().map(|s| s.position()),
        }
    }

    pub fn end_point(&self) -> Option<PlanePoint> {
        match self {
            GeodesicArc::OriginLine(l) => l.end.map(|e| l.unit() * e),
            GeodesicArc::GraphArc(g) => g.end_state().map(|s| s.position()),
        }
    }

    /// g-length less `∫_0^{|x|} e^{t²/2} dt` for every flagged end `x`.
    /// Ideal ends must be flagged; the result is then finite.
    pub fn renormalized_length(&self, flag_start: bool, flag_end: bool) -> f64 {
        match self {
            GeodesicArc::OriginLine(l) => {
                let contrib = |s: Option<f64>, flagged: bool, sign: f64| match s {
                    None => 0.0,
                    Some(_) if flagged => 0.0,
                    Some(x) => sign * radial_length(x),
                };
                contrib(l.end, flag_end, 1.0) + contrib(l.start, flag_start, -1.0)
            }
            GeodesicArc::GraphArc(g) => {
                let p = g.profile();
                let rs = g.start_r.unwrap_or(f64::INFINITY);
                let re = g.end_r.unwrap_or(f64::INFINITY);
                let flag_s = flag_start || g.start_r.is_none();
                let flag_e = flag_end || g.end_r.is_none();
                let from_apex = |r: f64, flagged: bool| {
                    if flagged {
                        p.renormalized_length_from_apex(r)
                    } else {
                        p.length_from_apex(r)
                    }
                };
                if g.start_eta * g.end_eta <= 0.0 {
                    from_apex(rs, flag_s) + from_apex(re, flag_e)
                } else {
                    let ((rf, ff), (rn, fn_)) = if re >= rs {
                        ((re, flag_e), (rs, flag_s))
                    } else {
                        ((rs, flag_s), (re, flag_e))
                    };
                    let near = p.length_from_apex(rn) + if fn_ { radial_length(rn) } else { 0.0 };
                    from_apex(rf, ff) - near
                }
            }
        }
    }

    /// Largest soliton residual over the samples, weighted by `min(1, σ)` near the origin.
    pub fn max_soliton_residual(&self) -> f64 {
        match self {
            GeodesicArc::OriginLine(l) => {
                let t = UnitTangent::new(l.angle);
                l.samples
                    .iter()
                    .map(|p| crate::geometry::soliton_residual(*p, t, 0.0).abs() / p.r().max(1.0))
                    .fold(0.0, f64::max)
            }
            // Polar curvature loses about 1/σ of its digits to cancellation,
            // so samples closer than σ = 1 to the origin are weighted by σ.
            GeodesicArc::GraphArc(g) => g
                .samples
                .iter()
                .map(|s| {
                    state_soliton_residual(s)
                        .map(|x| x.abs() * s.sigma().min(1.0))
                        .unwrap_or(f64::INFINITY)
                })
                .fold(0.0, f64::max),
        }
    }

    /// Uniformly scaled copy of the sample polyline.
    pub fn scaled_points(&self, factor: f64) -> Vec<PlanePoint> {
        self.points().into_iter().map(|p| p * factor).collect()
    }
}

/// Upper bound on the angle an arc still travels beyond radius `radius`.
pub fn asymptote_error_bound(arc: &GeodesicArc, radius: f64) -> Result<f64> {
    let g = match arc {
        GeodesicArc::GraphArc(g) => g,
        GeodesicArc::OriginLine(_) => {
            return Err(Error::InvalidInput("origin lines have exact asymptotes".into()))
        }
    };
    if !(radius > g.apex_r) {
        return Err(Error::InvalidInput(format!(
            "radius {radius} must exceed the apex radius {}",
            g.apex_r
        )));
    }
    // p = r/r' = 1/v at the stopping radius.
    let v = g.profile().log_slope(radius);
    Ok(1.0 / (v * radius * radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn asymptote_bound_decreases_to_zero() {
        let shot = shoot_from_apex(0.0, 1.0, &ShootOptions::default()).unwrap();
        let arc = GeodesicArc::GraphArc(shot.arc);
        let mut prev = f64::INFINITY;
        for i in 1..40 {
            let b = asymptote_error_bound(&arc, 1.0 + 0.25 * i as f64).unwrap();
            assert!(b < prev);
            prev = b;
        }
        assert!(prev < 1e-20);
        assert!(asymptote_error_bound(&arc, 0.5).is_err());
    }

    #[test]
    fn bound_at_stop_radius_is_below_tolerance() {
        let shot = shoot_from_apex(0.0, 1.0, &ShootOptions::default()).unwrap();
        let r_blow = shot.stop_radii.1;
        let arc = GeodesicArc::GraphArc(shot.arc);
        assert!(asymptote_error_bound(&arc, r_blow).unwrap() <= 1e-7);
    }

    #[test]
    fn origin_line_tangents() {
        let mut l = OriginLine { angle: PI / 3.0, start: Some(-1.0), end: None, samples: vec![] };
        l.sample();
        let arc = GeodesicArc::OriginLine(l);
        assert!((arc.start_tangent().unwrap().direction - PI / 3.0).abs() < 1e-15);
        assert!(arc.end_tangent().is_none());
        assert!(arc.max_soliton_residual() < 1e-14);
    }
}
