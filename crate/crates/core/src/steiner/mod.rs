//! Regular geodesic networks spanning ideal boundary points.

pub mod topology;

pub use topology::{catalan, enumerate_topologies, Mode, Topology};
pub mod network;

pub use network::{hull_check, is_embedded, network_balance_defect as balance_defect, Network, Status};
pub mod relax;

pub use relax::{relax, RelaxOptions};
pub mod solve;

pub use solve::{boundary_points, solve_expander, Solutions};
