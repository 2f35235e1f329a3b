//! Assemblages, local-hidden-state feasibility, steering radii (numeric and
//! closed form) and steering-direction classification.

mod analytic;
mod assemblage;
mod classify;
mod directions;
mod lhs;

pub use analytic::{analytic_radius, analytic_radius_for, mixture_radius, symmetric_radius, Link};
pub(crate) use analytic::{bracket_over_c, product_corner};
pub use assemblage::{
    assemblage_from_directions, assemblage_from_mixture, assemblage_from_mixture_on, Assemblage, Cell, Side,
};
pub use classify::{classify, SteeringClass};
pub use directions::{max_radius_over_directions, DirectionScan};
pub use lhs::{lhs_feasible, steering_radius, Feasibility, LhsEnsemble, LhsMember, LhsSolver, SteeringRadiusResult};
