//! The q-numerical range `W_q(A) = {<Ax, y> : |x| = |y| = 1, <x, y> = q}`
//! and its radius.

mod ascent;
mod boundary;
mod objective;
mod oracle;
mod param;
mod radius;
mod two_by_two;

pub use ascent::AscentConfig;
pub use boundary::{support_function, trace_boundary, BoundaryTrace};
pub use objective::q_objective;
pub use oracle::sample_oracle;
pub use param::QParameter;
pub use radius::{estimate_radius, estimate_radius_with_starts, scalar_radius, RadiusEstimate};
pub use two_by_two::{exact_2x2, Ellipse2x2};
