//! Two-point boundary value problem for geodesics of g.
//!
//! Every geodesic not through the origin is a polar graph symmetric about its
//! apex ray, so a solution is fixed by its apex `(θ₀, r₀)`. For endpoints at
//! radii `m ≤ M` (either may be infinite) separated by the angle `δ ∈ (0, π)`,
//! the endpoints either lie on the same side of the apex, with
//! `δ = η(M) − η(m)`, or on opposite sides, with `δ = η(m) + η(M)`. As `r₀`
//! runs from `0` to `m` the first expression increases from `0` to
//! `η_m(M)` and the second decreases from `π` to the same value, so exactly
//! one branch has a root and it is found by a bracketed solve over `r₀`.
//! Varying `r₀` on a branch is the same as varying the initial direction at
//! the finite endpoint.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::wrap_angle;

use super::profile::ApexProfile;
use super::{BoundarySpec, Endpoint, GeodesicArc, GraphArc, OriginLine};

/// Angular separations within this of `0` or `π` are treated as collinear with the origin.
pub const ANGLE_EPS: f64 = 1e-13;

/// Polar data of an endpoint; ideal points have infinite radius.
fn polar(e: &Endpoint) -> (f64, Option<f64>) {
    match e {
        Endpoint::Finite(p) => (p.r(), p.theta()),
        Endpoint::Ideal(q) => (f64::INFINITY, Some(q.angle)),
    }
}

fn finite(r: f64) -> Option<f64> {
    r.is_finite().then_some(r)
}

#[derive(Clone, Copy, Debug)]
enum Branch {
    SameSide,
    Opposite,
}

/// Angular separation as a function of apex radius on one branch.
fn separation(r0: f64, m: f64, big: f64, branch: Branch) -> Result<f64> {
    // exp(ln m) may round above m.
    let p = ApexProfile::new(r0.min(m))?;
    let between = p.eta_between(m, big);
    Ok(match branch {
        Branch::SameSide => between,
        Branch::Opposite => 2.0 * p.eta(m) + between,
    })
}

/// Find `r0` in `(0, hi]` with `separation(r0) = target` on a branch.
fn solve_apex(target: f64, m: f64, big: f64, hi: f64, branch: Branch) -> Result<f64> {
    let f = |x: f64| separation(x.exp(), m, big, branch).map(|s| s - target);
    let clamp = |x: f64| x.exp().min(hi);
    let mut table = Vec::new();
    let x_hi = hi.ln();
    let f_hi = f(x_hi)?;
    table.push((hi, f_hi + target));
    if f_hi == 0.0 {
        return Ok(hi);
    }
    // Walk down in r0 until the sign flips.
    let mut x_lo = x_hi;
    let mut f_lo = f_hi;
    let mut found = false;
    for _ in 0..120 {
        x_lo -= std::f64::consts::LN_2;
        f_lo = f(x_lo)?;
        table.push((x_lo.exp(), f_lo + target));
        if f_lo == 0.0 {
            return Ok(x_lo.exp());
        }
        if f_lo.signum() != f_hi.signum() {
            found = true;
            break;
        }
    }
    if !found {
        return Err(Error::Bracket { target, table });
    }
    // Illinois iteration on [x_lo, x_hi].
    let (mut a, mut fa, mut b, mut fb) = (x_lo, f_lo, x_hi, f_hi);
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c.is_finite() && c > a.min(b) && c < a.max(b) { c } else { 0.5 * (a + b) };
        let fc = f(c)?;
        if fc == 0.0 || (b - a).abs() < 1e-15 * (1.0 + c.abs()) || fc.abs() < 1e-15 {
            return Ok(clamp(c));
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(clamp(0.5 * (a + b)))
}

fn origin_line(angle: f64, start: Option<f64>, end: Option<f64>) -> GeodesicArc {
    GeodesicArc::OriginLine(OriginLine {
        angle,
        start,
        end,
        samples: Vec::new(),
    })
}

/// The unique geodesic through (or terminating at) the two endpoints, without samples.
pub fn connect_unsampled(spec: &BoundarySpec) -> Result<GeodesicArc> {
    let (ra, ta) = polar(&spec.first);
    let (rb, tb) = polar(&spec.second);

    // Through the origin.
    match (ta, tb) {
        (None, None) => return Err(Error::CoincidentEndpoints),
        (None, Some(tb)) => return Ok(origin_line(tb, Some(0.0), finite(rb))),
        (Some(ta), None) => return Ok(origin_line(ta + PI, finite(ra).map(|r| -r), Some(0.0))),
        _ => {}
    }
    let (ta, tb) = (ta.unwrap_or_default(), tb.unwrap_or_default());
    let delta = wrap_angle(tb - ta);

    if delta.abs() <= ANGLE_EPS {
        if ra == rb || (ra.is_infinite() && rb.is_infinite()) {
            return Err(Error::CoincidentEndpoints);
        }
        return Ok(if rb > ra {
            origin_line(ta, Some(ra), finite(rb))
        } else {
            origin_line(ta + PI, finite(ra).map(|r| -r), Some(-rb))
        });
    }
    if delta.abs() >= PI - ANGLE_EPS {
        return Ok(origin_line(tb, finite(ra).map(|r| -r), finite(rb)));
    }

    let s = delta.signum();
    let d = delta.abs();
    let m = ra.min(rb);
    let big = ra.max(rb);

    let (r0, branch) = if m.is_infinite() {
        // Both ideal: opposite sides, 2η(∞) = δ. Width < π/(1+r0²) bounds the root.
        let hi = (PI / d - 1.0).max(0.0).sqrt().max(1e-8) * 1.01;
        (solve_apex(d, f64::INFINITY, f64::INFINITY, hi, Branch::Opposite)?, Branch::Opposite)
    } else {
        let threshold = ApexProfile::new(m)?.eta(big);
        let branch = if d <= threshold { Branch::SameSide } else { Branch::Opposite };
        if (d - threshold).abs() <= 1e-14 {
            (m, branch)
        } else {
            (solve_apex(d, m, big, m, branch)?, branch)
        }
    };

    let profile = ApexProfile::new(r0)?;
    let eta_of = |r: f64| if r >= r0 { profile.eta(r) } else { 0.0 };
    let theta0 = match branch {
        Branch::Opposite => ta + s * eta_of(ra),
        Branch::SameSide if ra < rb => ta - s * eta_of(ra),
        Branch::SameSide => tb + s * eta_of(rb),
    };
    let half = profile.half_width();
    let end_eta = |r: f64, t: f64| {
        if r.is_infinite() {
            wrap_angle(t - theta0).signum() * half
        } else {
            wrap_angle(t - theta0)
        }
    };
    Ok(GeodesicArc::GraphArc(GraphArc {
        apex_theta: theta0,
        apex_r: r0,
        start_eta: end_eta(ra, ta),
        end_eta: end_eta(rb, tb),
        start_r: finite(ra),
        end_r: finite(rb),
        asymptotes: (theta0 - half, theta0 + half),
        samples: Vec::new(),
    }))
}

/// The unique geodesic through (or terminating at) the two endpoints, sampled for output.
pub fn connect(spec: &BoundarySpec) -> Result<GeodesicArc> {
    let mut arc = connect_unsampled(spec)?;
    match &mut arc {
        GeodesicArc::OriginLine(l) => l.sample(),
        GeodesicArc::GraphArc(g) => g.sample(),
    }
    Ok(arc)
}
