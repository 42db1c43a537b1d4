//! Exact p-adic harmonic analysis attached to diagonal quadratic forms.
//!
//! The crate evaluates local zeta functions as rational functions of
//! `t = p^(-s)`, computes Hilbert symbols, Weil constants and ρ-factors,
//! realizes Riesz kernels and the pseudodifferential operator `f(∂, α)` on
//! Lizorkin test functions, and checks the identities relating them by exact
//! arithmetic. Floating point only appears in the independent oracles.

pub mod error;
pub mod padic;
pub mod pseudo;
pub mod quadform;
pub mod report;
pub mod riesz;
pub mod scalars;
pub mod schwartz;
pub mod zeta;

pub use error::{Error, Result};
pub use padic::{Ball, PVector};
pub use quadform::{QuadraticForm, SquareClass};
pub use scalars::{CyclotomicScalar, ExtScalar, Rational, RationalFunctionT};
pub use schwartz::TestFunction;

/// Default bound on ball-subdivision recursion.
pub const DEFAULT_DEPTH_BOUND: u32 = 64;
