//! Cheeger constants of planar convex polygons, the extremal shapes of the
//! associated Blaschke–Santaló diagrams, and the sharp inequalities linking
//! `h` to area, perimeter, inradius, circumradius, diameter and minimal width.

pub mod bounds;
pub mod cheeger;
pub mod diagrams;
pub mod error;
pub mod functionals;
pub mod geom;
pub mod sampler;
pub mod shapes;

pub use bounds::{evaluate_all, BoundId, BoundResult, BoundValue, Direction};
pub use cheeger::{cheeger_constant, CheegerResult};
pub use diagrams::{boundary, membership, DiagramId, DiagramPoint, DiagramSpec, Membership};
pub use error::{Error, Result};
pub use functionals::{measure, FunctionalId, Functionals};
pub use geom::{ConvexPolygon, HalfPlane, Point};
pub use sampler::{valtr, Normalization, Triplet};
pub use shapes::{build, closed_form, solve_param, Family, Resolution, ShapeSpec};
