//! Fermat curves, torus geodesics and exact rational-point searches.
//!
//! - [`rational`]: exact fractions, n-th root tests, Farey enumeration and
//!   continued-fraction reconstruction.
//! - [`kinematics`]: the curve `y = (1 - x^n)^(1/n)` with its first and
//!   second derivatives and the small-`x` phase classification.
//! - [`torus`]: embedding, metric, Christoffel symbols, geodesic
//!   integration, winding lines and their closure and coverage.
//! - [`search`]: rational points, Diophantine triples and line crossings.

pub mod kinematics;
pub mod rational;
pub mod search;
pub mod torus;

pub use kinematics::{
    acceleration, curve_y, finite_diff_oracle, phase_scan, sample_curve, velocity, CurveParam,
    KinematicsError, KinematicsSample, PhaseClass, PhaseScan,
};
pub use rational::{
    farey_enumerate, nth_root_exact, rational_reconstruct, FareyIter, Rational, RationalError,
};
pub use search::{
    diophantine_triples, line_curve_crossings, rational_points_on_curve, rescale_check,
    CrossingRecord, CrossingSearch, SearchError, SolutionRecord, Triple,
};
pub use torus::{
    density_coverage, integrate_geodesic, wrap_map, ClosurePeriod, GeodesicState, Point3,
    SurfacePoint, Torus, TorusError, Trajectory, WindingLine,
};
