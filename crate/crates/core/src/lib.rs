//! Backward dynamics of continuous piecewise-linear interval maps.
//!
//! Everything is computed in exact rational arithmetic: preimage trees and
//! backward orbit branches, finite-resolution approximations of the ω-, α- and
//! special α-limit sets, and an empirical check that backward branches spend a
//! uniformly bounded number of points outside any neighborhood of the set of
//! α-limit points.

pub mod backward;
pub mod birkhoff;
pub mod cells;
pub mod chain;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod interval;
pub mod limit_sets;
pub mod parallel;
pub mod plmap;
pub mod rat;
pub mod report;
pub mod sampler;
pub mod svg;

pub use backward::{Branch, PreimageTree};
pub use birkhoff::{ExcursionReport, Neighborhood, SubcoverCertificate};
pub use cells::{CellGrid, EpsSet};
pub use error::{Error, Result};
pub use interval::{Interval, IntervalUnion};
pub use limit_sets::{LimitKind, PeriodicOrbit, SalphaMode};
pub use plmap::{parse_map, FixedPoints, Lap, PLMap};
pub use rat::Rat;
pub use sampler::BranchSampler;
