//! Self-similar expanding solutions of curve-shortening flow on planar networks.
//!
//! A network of half-lines meeting at the origin flows, after the initial
//! instant, as a family of dilations of one regular network whose edges are
//! geodesics of the conformal metric `g = e^{x²+y²}(dx² + dy²)`. This crate
//! builds those networks and checks them:
//!
//! * [`geometry`]: the metric, its curvature and the soliton equation.
//! * [`geodesics`]: geodesic arcs by apex shooting and the two-point connector.
//! * [`steiner`]: combinatorial types and relaxation to regular geodesic networks.
//! * [`flow`]: the self-similar evolution, its parabolic blowup, and an
//!   independent front-tracking check.
//! * [`io`]: network documents and SVG rendering.

pub mod error;
pub mod flow;
pub mod geodesics;
pub mod geometry;
pub mod io;
pub mod ode;
pub mod polyline;
pub mod quad;
pub mod steiner;

pub use error::{Error, Result};
