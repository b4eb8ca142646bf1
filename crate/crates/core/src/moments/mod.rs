//! Momentum ray transforms `I^q` / `J^q`, formal combinations of transform
//! data closed under `∂_x`, `∂_ξ` and the John operator, and evaluators for
//! the identities relating them.

mod expression;
pub mod identities;
mod point;
mod transform;

pub use expression::{partial, MomentAtom, MomentExpression};
pub use identities::*;
pub use point::{random_phase_point, random_ts_point, PhasePoint, TSPoint};
pub use transform::{
    convert_i_to_j, convert_i_to_j_magnitude, homogeneity_factor, moment_stack, moment_stack_exact,
    transform_i, transform_i_exact, transform_j, transform_j_coef, transform_j_f64, PointMoments,
};
