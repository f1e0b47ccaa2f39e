//! Grid calculus and linear algebra shared by the geometric modules.

pub mod fd;
pub mod sparse;
pub mod tridiag;

pub use fd::{cumulative_integral, derivatives, integrate, linspace, Parity};
