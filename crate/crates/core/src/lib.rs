//! Conformable calculus on the half-line and the dynamics it induces.

// `!(x > 0)` style guards reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dd;
pub mod dsw;
pub mod error;
pub mod fit;
pub mod kernel;
pub mod quadrature;
pub mod real;
pub mod rng;
pub mod selftest;
pub mod semigroup;
pub mod spaces;
pub mod stencil;
pub mod translation;

pub use error::{Error, Result};
pub use real::Real;

pub type Order64 = kernel::Order<f64>;
pub type Space64 = spaces::SpaceDescriptor<f64>;
pub type GridFunction64 = spaces::GridFunction<f64>;
pub type ScalarFunction64 = kernel::ScalarFunction<f64>;
pub type OperatorFamily64 = semigroup::OperatorFamily<f64>;
pub type WeightCocycle64 = translation::WeightCocycle<f64>;
pub type EigenFamily64 = dsw::EigenFamily<f64>;
pub type DswReport64 = dsw::DswReport<f64>;
