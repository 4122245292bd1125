//! Numerical verification toolkit for level sets of radial harmonic functions
//! on rotationally symmetric 3-manifolds.
//!
//! A metric `g = A(t)^2 dt^2 + B(t)^2 g_{S^2}` on an interval times the
//! 2-sphere is described by two warp profiles. The crate computes curvature
//! of such metrics (with an independent finite-difference oracle), builds
//! radial harmonic functions, evaluates level-set functionals and monotone
//! quantities, checks the identity/inequality chain behind the monotonicity
//! formulas, and generates candidate scalar-flat metrics from a Riccati-type
//! ODE family.

pub mod catalog;
pub mod curvature;
pub mod harmonic;
pub mod identities;
pub mod levelset;
pub mod numeric;
pub mod odes;
pub mod profiles;
pub mod report;

pub use curvature::{curvature_at, curvature_oracle, CurvaturePoint};
pub use harmonic::RadialHarmonic;
pub use levelset::{LevelSetReport, MonotoneSeries};
pub use profiles::{CatalogEntry, Interval, MetricProfile, ProfileCurve};
