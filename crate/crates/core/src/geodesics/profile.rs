//! Geodesics of g through their conserved quantity.
//!
//! The metric is rotationally symmetric, so along a geodesic written as a
//! polar graph `r(θ)` the quantity `r² e^{r²} / (1 + (r′/r)²)` is constant.
//! At the apex `r′ = 0`, which gives the logarithmic slope as a function of `r`
//! alone:
//!
//! ```text
//! (r′/r)² = F(r)/F(r₀) − 1,    F(r) = r² e^{r²}.
//! ```
//!
//! The angular offset from the apex and the g-length then reduce to
//! one-dimensional integrals in `r` with an inverse square-root singularity
//! at `r₀`, handled by the substitution `r = r₀ + u²`.

use crate::error::{Error, Result};
use crate::quad;

fn log_f(t: f64) -> f64 {
    2.0 * t.ln() + t * t
}

#[derive(Clone, Copy, Debug)]
enum Density {
    Eta,
    Excess,
}

/// Profile of the geodesic with apex radius `r0`.
#[derive(Clone, Copy, Debug)]
pub struct ApexProfile {
    r0: f64,
    log_f0: f64,
}

impl ApexProfile {
    pub fn new(r0: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::NonPositiveRadius(r0));
        }
        Ok(Self {
            r0,
            log_f0: log_f(r0),
        })
    }

    pub fn apex_radius(&self) -> f64 {
        self.r0
    }

    /// `ln F(t) − ln F(r₀)` for `t = r₀ + u²`, without cancellation near the apex.
    fn log_ratio_u(&self, u: f64) -> f64 {
        let u2 = u * u;
        2.0 * (u2 / self.r0).ln_1p() + u2 * (2.0 * self.r0 + u2)
    }

    /// `|r′/r|` at radius `t ≥ r₀`.
    pub fn log_slope(&self, t: f64) -> f64 {
        (log_f(t) - self.log_f0).exp_m1().max(0.0).sqrt()
    }

    /// Integrand in `t` given `Δ = ln F(t) − ln F(r₀)`.
    fn density(&self, kind: Density, t: f64, delta: f64) -> f64 {
        match kind {
            Density::Eta => 1.0 / (t * delta.exp_m1().sqrt()),
            Density::Excess => {
                let w = (-(-delta).exp_m1()).sqrt();
                (0.5 * t * t - delta).exp() / (w * (1.0 + w))
            }
        }
    }

    /// Integrand in `u` (`t = r₀ + u²`, `dt = 2u du`), finite at `u = 0`.
    fn density_u(&self, kind: Density, u: f64) -> f64 {
        let t = self.r0 + u * u;
        let delta = self.log_ratio_u(u);
        // Limit of (e^Δ − 1)/u² and (1 − e^{−Δ})/u² at the apex.
        let slope = 2.0 / self.r0 + 2.0 * self.r0;
        let (q_plus, q_minus) = if u == 0.0 || delta == 0.0 {
            (slope, slope)
        } else {
            (delta.exp_m1() / (u * u), -(-delta).exp_m1() / (u * u))
        };
        match kind {
            Density::Eta => 2.0 / (t * q_plus.sqrt()),
            Density::Excess => {
                let w = (-(-delta).exp_m1()).sqrt();
                2.0 * (0.5 * t * t - delta).exp() / (q_minus.sqrt() * (1.0 + w))
            }
        }
    }

    /// Radius beyond which both integrands are below `e^{-45}` of their scale.
    fn cutoff(&self, from: f64) -> f64 {
        (self.r0.max(from).powi(2) + 90.0).sqrt()
    }

    fn integrate(&self, r1: f64, r2: f64, kind: Density) -> f64 {
        debug_assert!(r1 >= self.r0 && r2 >= r1);
        let hi = r2.min(self.cutoff(r1));
        if r1 >= hi {
            return 0.0;
        }
        let r0 = self.r0;
        let sing_end = (r0 + 0.5 * r0.min(1.0)).min(hi);
        let mut total = 0.0;
        let mut lo = r1;
        if lo < sing_end {
            let (u1, u2) = ((lo - r0).max(0.0).sqrt(), (sing_end - r0).sqrt());
            total += quad::integrate(|u| self.density_u(kind, u), u1, u2, 1e-16, 1e-13);
            lo = sing_end;
        }
        while lo < hi {
            let next = (lo + lo.min(1.0)).min(hi);
            let g = |t: f64| self.density(kind, t, log_f(t) - self.log_f0);
            total += quad::integrate(g, lo, next, 1e-16, 1e-13);
            lo = next;
        }
        total
    }

    /// Angular offset `|θ − θ₀|` of the point at radius `r` (may be infinite).
    pub fn eta(&self, r: f64) -> f64 {
        self.eta_between(self.r0, r)
    }

    /// `∫_{r1}^{r2} dθ/dr dr` for `r₀ ≤ r1 ≤ r2`.
    pub fn eta_between(&self, r1: f64, r2: f64) -> f64 {
        self.integrate(r1, r2, Density::Eta)
    }

    /// Half the angular width `(b − a)/2` of the maximal arc.
    pub fn half_width(&self) -> f64 {
        self.eta(f64::INFINITY)
    }

    /// g-length from the apex to radius `r` minus the radial length `∫_{r₀}^{r} e^{t²/2} dt`.
    pub fn excess(&self, r: f64) -> f64 {
        self.integrate(self.r0, r, Density::Excess)
    }

    /// g-length from the apex to radius `r` (finite).
    pub fn length_from_apex(&self, r: f64) -> f64 {
        self.excess(r) + radial_length(r) - radial_length(self.r0)
    }

    /// g-length from the apex to radius `r` less `∫_0^r e^{t²/2} dt`; finite for `r = ∞`.
    pub fn renormalized_length_from_apex(&self, r: f64) -> f64 {
        self.excess(r) - radial_length(self.r0)
    }
}

/// `∫_0^s e^{t²/2} dt`, odd in `s`.
pub fn radial_length(s: f64) -> f64 {
    let a = s.abs();
    let mut total = 0.0;
    let mut lo = 0.0;
    while lo < a {
        let next = (lo + 1.0).min(a);
        total += quad::integrate(|t| (0.5 * t * t).exp(), lo, next, 1e-16, 1e-14);
        lo = next;
    }
    total.copysign(s)
}
