//! Pointwise formulas for the conformal metric `g = e^{x²+y²}(dx² + dy²)`.
//!
//! Polar coordinates `(r, θ)` are used for geodesic work and Cartesian
//! coordinates for network assembly. Nothing here evaluates a polar angle at
//! the origin; curves through the origin are straight lines and are handled
//! by the geodesics module with their own representation.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduce an angle to `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Reduce an angle to `(-π, π]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let a = normalize_angle(angle);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: r * c, y: r * s }
    }

    pub fn r(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Polar angle in `[0, 2π)`; undefined at the origin.
    pub fn theta(&self) -> Option<f64> {
        if self.x == 0.0 && self.y == 0.0 {
            None
        } else {
            Some(normalize_angle(self.y.atan2(self.x)))
        }
    }

    pub fn dot(&self, other: PlanePoint) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(&self, other: PlanePoint) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn distance(&self, other: PlanePoint) -> f64 {
        (*self - other).r()
    }

    pub fn rotate(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn unit(&self) -> Option<Self> {
        let n = self.r();
        (n > 0.0).then(|| *self * (1.0 / n))
    }
}

impl Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for PlanePoint {
    type Output = PlanePoint;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// A direction at infinity, i.e. a point of the boundary circle of the compactified plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealPoint {
    pub angle: f64,
}

impl IdealPoint {
    pub fn new(angle: f64) -> Self {
        Self {
            angle: normalize_angle(angle),
        }
    }

    pub fn direction(&self) -> PlanePoint {
        PlanePoint::from_polar(1.0, self.angle)
    }
}

/// State of a curve written as a polar graph `θ ↦ r(θ)R(θ)`; `dr` is `dr/dθ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarGraphState {
    pub theta: f64,
    pub r: f64,
    pub dr: f64,
}

impl PolarGraphState {
    pub fn new(theta: f64, r: f64, dr: f64) -> Self {
        Self { theta, r, dr }
    }

    /// `σ = √(r² + r′²)`, the speed of the polar parametrization.
    pub fn sigma(&self) -> f64 {
        self.r.hypot(self.dr)
    }

    /// Logarithmic slope `r′/r`.
    pub fn log_slope(&self) -> f64 {
        self.dr / self.r
    }

    pub fn position(&self) -> PlanePoint {
        PlanePoint::from_polar(self.r, self.theta)
    }

    /// Unit tangent in the direction of increasing θ.
    pub fn tangent(&self) -> UnitTangent {
        // F' = r'R + rN, so the tangent makes angle atan2(r, r') with R(θ).
        UnitTangent::new(self.theta + self.r.atan2(self.dr))
    }
}

/// Euclidean unit vector, stored by its angle. Because g is conformal,
/// Euclidean angles between tangents equal g-angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitTangent {
    pub direction: f64,
}

impl UnitTangent {
    pub fn new(direction: f64) -> Self {
        Self { direction }
    }

    pub fn from_vector(v: PlanePoint) -> Option<Self> {
        (v.r() > 0.0).then(|| Self::new(v.y.atan2(v.x)))
    }

    pub fn vector(&self) -> PlanePoint {
        PlanePoint::from_polar(1.0, self.direction)
    }

    /// The tangent rotated by +π/2. This is the orientation of ν used in the soliton equation.
    pub fn left_normal(&self) -> PlanePoint {
        PlanePoint::from_polar(1.0, self.direction + PI / 2.0)
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.direction + PI)
    }
}

/// State of a curve parametrized by the affine parameter of the geodesic system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicState {
    pub r: f64,
    pub theta: f64,
    pub dr: f64,
    pub dtheta: f64,
}

/// The conformal factor `e^{r²}`; lengths scale by its square root.
pub fn conformal_factor(p: PlanePoint) -> f64 {
    p.norm_sq().exp()
}

/// Gauss curvature `K = −2e^{−r²}` of g.
pub fn gauss_curvature(p: PlanePoint) -> f64 {
    -2.0 * (-p.norm_sq()).exp()
}

/// g-length of a polyline: each segment's Euclidean length weighted by
/// `e^{r²/2}` at its midpoint.
pub fn g_length(polyline: &[PlanePoint]) -> Result<f64> {
    if polyline.len() < 2 {
        return Err(Error::TooFewPoints(polyline.len()));
    }
    Ok(polyline
        .windows(2)
        .map(|w| {
            let mid = (w[0] + w[1]) * 0.5;
            w[0].distance(w[1]) * (0.5 * mid.norm_sq()).exp()
        })
        .sum())
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveRadius(r))
    }
}

/// `r″` from `r r″ = r² + 2r′² + r²(r² + r′²)`.
pub fn polar_ode_rhs(s: &PolarGraphState) -> Result<f64> {
    check_radius(s.r)?;
    let (r, dr) = (s.r, s.dr);
    Ok(r + 2.0 * dr * dr / r + r * (r * r + dr * dr))
}

/// `(r̈, θ̈)` of the geodesic equations of g in polar coordinates:
/// `r̈ − (r³ + r)θ̇² + rṙ² = 0`, `θ̈ + 2(r + 1/r)ṙθ̇ = 0`.
pub fn geodesic_rhs(s: &GeodesicState) -> Result<(f64, f64)> {
    check_radius(s.r)?;
    let r = s.r;
    let ddr = (r * r * r + r) * s.dtheta * s.dtheta - r * s.dr * s.dr;
    let ddtheta = -2.0 * (r + 1.0 / r) * s.dr * s.dtheta;
    Ok((ddr, ddtheta))
}

/// Euclidean curvature of a polar graph, `κ = (2r′² − r r″ + r²)/σ³`, signed
/// with respect to the left normal.
pub fn curvature_of_graph(s: &PolarGraphState, ddr: f64) -> Result<f64> {
    check_radius(s.r)?;
    let sigma = s.sigma();
    Ok((2.0 * s.dr * s.dr - s.r * ddr + s.r * s.r) / (sigma * sigma * sigma))
}

/// Curvature of the g-geodesic through `s`, from the acceleration the
/// geodesic system assigns to velocity `(ṙ, θ̇) = (r′, 1)`.
///
/// This goes through [`geodesic_rhs`] rather than [`polar_ode_rhs`], so
/// comparing it with the soliton equation is a check of their equivalence.
pub fn geodesic_curvature_at(s: &PolarGraphState) -> Result<f64> {
    let gs = GeodesicState {
        r: s.r,
        theta: s.theta,
        dr: s.dr,
        dtheta: 1.0,
    };
    let (ddr, ddtheta) = geodesic_rhs(&gs)?;
    let r = s.r;
    // Velocity and acceleration in the (R, N) frame.
    let (vr, vn) = (gs.dr, r * gs.dtheta);
    let (ar, an) = (
        ddr - r * gs.dtheta * gs.dtheta,
        r * ddtheta + 2.0 * gs.dr * gs.dtheta,
    );
    let speed = vr.hypot(vn);
    Ok((vr * an - vn * ar) / (speed * speed * speed))
}

/// `κ − (x,y)·ν`, with ν the left normal of `tangent`. Zero exactly on solitons.
pub fn soliton_residual(p: PlanePoint, tangent: UnitTangent, kappa: f64) -> f64 {
    kappa - p.dot(tangent.left_normal())
}

/// Soliton residual of a polar graph state using the geodesic-system curvature.
pub fn state_soliton_residual(s: &PolarGraphState) -> Result<f64> {
    let kappa = geodesic_curvature_at(s)?;
    Ok(soliton_residual(s.position(), s.tangent(), kappa))
}
