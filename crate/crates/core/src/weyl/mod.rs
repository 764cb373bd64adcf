//! Weyl algebra arithmetic in normal order and the theta-operator calculus.

mod op;
mod parse;
mod poly;
mod theta;

pub use op::{WeylMono, WeylOp};
pub use parse::parse_op;
pub use poly::{LaurentPoly, Poly};
pub use theta::{theta_to_weyl, weyl_is_theta, ThetaPoly};
