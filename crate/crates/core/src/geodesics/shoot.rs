//! Shooting geodesics out of their apex with an adaptive Runge–Kutta pair.
//!
//! Near the apex the arc is integrated as a polar graph in θ. Once
//! `|r′| ≥ r` the tangent is closer to radial than to angular and `r(θ)`
//! blows up at a finite angle, so the independent variable switches to `r`
//! with state `(θ − θ₀, p)`, `p = r/r′`:
//!
//! ```text
//! dθ/dr = p/r,   dp/dr = −p(1 + p²)(1 + r²)/r.
//! ```
//!
//! From `dp/dr ≤ −p(1 + r²)/r` the angle still to be travelled beyond radius
//! `R` is at most `p(R)/R²`, which decides where to stop.

use crate::error::{Error, Result};
use crate::geometry::{polar_ode_rhs, PolarGraphState};
use crate::ode::{fixed_step, Dopri5};

use super::GraphArc;

#[derive(Clone, Copy, Debug)]
pub struct ShootOptions {
    /// Relative tolerance of the Runge–Kutta pair.
    pub rtol: f64,
    /// Stop once the remaining angular travel is provably below this.
    pub asymptote_tol: f64,
    /// Stop at exactly this radius instead of using `asymptote_tol`.
    pub stop_radius: Option<f64>,
    /// Give up if the stopping criterion is not met by this radius.
    pub max_radius: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            asymptote_tol: 1e-7,
            stop_radius: None,
            max_radius: 60.0,
        }
    }
}

struct HalfShot {
    /// States with θ measured from the apex.
    samples: Vec<PolarGraphState>,
    asymptote: f64,
    stop_radius: f64,
}

fn graph_rhs(_theta: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
    let s = PolarGraphState::new(0.0, y[0], y[1]);
    Ok([y[1], polar_ode_rhs(&s)?])
}

fn shoot_half(r0: f64, dir: f64, opts: &ShootOptions) -> Result<HalfShot> {
    let stepper = Dopri5 {
        rtol: opts.rtol,
        atol: opts.rtol * 1e-3 * r0.min(1.0),
        h_init: 1e-3 / (1.0 + r0 * r0),
        h_max: 0.05,
        ..Dopri5::default()
    };
    let stop_r = opts.stop_radius;
    let graph = stepper.integrate(&graph_rhs, 0.0, [r0, 0.0], dir, |_, y| {
        y[1].abs() >= y[0] || stop_r.is_some_and(|r| y[0] >= r)
    })?;
    let mut samples: Vec<PolarGraphState> = graph
        .iter()
        .map(|(eta, y)| PolarGraphState::new(*eta, y[0], y[1]))
        .collect();
    let last = *samples.last().expect("integrator returns the initial state");

    let rhs = move |r: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        if r <= 0.0 {
            return Err(Error::NonPositiveRadius(r));
        }
        let p = y[1];
        Ok([dir * p / r, -p * (1.0 + p * p) * (1.0 + r * r) / r])
    };
    let radial = Dopri5 {
        rtol: opts.rtol,
        atol: 1e-18,
        h_init: 1e-3 * last.r,
        h_max: 0.25,
        h_min: 1e-14 * last.r,
        ..Dopri5::default()
    };
    let tol = opts.asymptote_tol * 1e-2;
    let max_r = opts.max_radius;
    let mut reached = true;
    let tail = radial.integrate(&rhs, last.r, [last.theta, last.r / last.dr.abs()], 1.0, |r, y| {
        if r >= max_r {
            reached = false;
            return true;
        }
        match stop_r {
            Some(target) => r >= target,
            None => y[1] / (r * r) <= tol,
        }
    })?;
    if !reached {
        return Err(Error::Integrator(format!(
            "asymptote not resolved before radius {max_r}"
        )));
    }
    samples.extend(
        tail.iter()
            .skip(1)
            .map(|(r, y)| PolarGraphState::new(y[0], *r, dir * r / y[1])),
    );
    let (stop_radius, y) = *tail.last().expect("non-empty");
    Ok(HalfShot {
        samples,
        asymptote: y[0],
        stop_radius,
    })
}

/// Result of [`shoot_from_apex`].
#[derive(Clone, Debug)]
pub struct ApexShot {
    pub arc: GraphArc,
    /// Radius at which each half stopped (backward, forward).
    pub stop_radii: (f64, f64),
}

/// Integrate the polar graph equation forward and backward from `(θ₀, r₀, r′ = 0)`.
pub fn shoot_from_apex(theta0: f64, r0: f64, opts: &ShootOptions) -> Result<ApexShot> {
    if !(r0 > 0.0) {
        return Err(Error::NonPositiveRadius(r0));
    }
    let fwd = shoot_half(r0, 1.0, opts)?;
    let bwd = shoot_half(r0, -1.0, opts)?;
    let mut samples: Vec<PolarGraphState> = bwd
        .samples
        .iter()
        .rev()
        .map(|s| PolarGraphState::new(theta0 + s.theta, s.r, s.dr))
        .collect();
    samples.extend(
        fwd.samples
            .iter()
            .skip(1)
            .map(|s| PolarGraphState::new(theta0 + s.theta, s.r, s.dr)),
    );
    let arc = GraphArc {
        apex_theta: theta0,
        apex_r: r0,
        start_eta: bwd.asymptote,
        end_eta: fwd.asymptote,
        start_r: None,
        end_r: None,
        asymptotes: (theta0 + bwd.asymptote, theta0 + fwd.asymptote),
        samples,
    };
    Ok(ApexShot {
        arc,
        stop_radii: (bwd.stop_radius, fwd.stop_radius),
    })
}

/// Angular width `b − a` of the maximal arc with apex radius `r0`.
pub fn width(r0: f64) -> Result<f64> {
    width_with(r0, &ShootOptions::default())
}

pub fn width_with(r0: f64, opts: &ShootOptions) -> Result<f64> {
    let shot = shoot_from_apex(0.0, r0, opts)?;
    Ok(shot.arc.asymptotes.1 - shot.arc.asymptotes.0)
}

/// Widths on a grid of apex radii, failing if they are not strictly decreasing
/// in increasing `r0`.
pub fn width_table(radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut table: Vec<(f64, f64)> = Vec::with_capacity(radii.len());
    for &r0 in radii {
        let w = width(r0)?;
        if let Some(&(prev_r, prev_w)) = table.last() {
            if (r0 > prev_r && w >= prev_w) || (r0 < prev_r && w <= prev_w) {
                return Err(Error::NonMonotoneWidth { r0 });
            }
        }
        table.push((r0, w));
    }
    Ok(table)
}

/// `(r, r′)` at angular offset `eta` from the apex, with `n` fixed Runge–Kutta steps.
/// Used for convergence-order checks.
pub fn fixed_step_profile(r0: f64, eta: f64, n: usize) -> Result<(f64, f64)> {
    let y = fixed_step(&graph_rhs, 0.0, [r0, 0.0], eta, n)?;
    Ok((y[0], y[1]))
}
