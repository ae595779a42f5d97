//! Scalar quadrature, root finding and sampled-grid calculus shared by the
//! physics modules.

pub mod quadrature;
pub mod roots;
pub mod samples;

pub use quadrature::{integrate, Limit, Quadrature, QuadratureSpec};
pub use roots::{find_root, RootSpec};
