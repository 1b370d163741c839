//! Solver library for optimal control of subdiffusion with a time-dependent
//! fractional exponent α(t).
//!
//! The state equation `∂ₜu − ∂ₜ(k ∗ Δu) = q + c` with `k(t) = t^{α(t)−1}/Γ(α(t))`
//! is marched in its convolution-reformulated form
//!
//! ```text
//! ᶜ∂ₜ^{α₀} u − Δu − g′ ∗ Δu = I^{1−α₀}(q + c),    g = β_{1−α₀} ∗ k,
//! ```
//!
//! with the L1 scheme in time and piecewise-linear finite elements on (0, 1).
//! The adjoint equation is solved with the same machinery after time reversal,
//! and the optimal control is found by a projected fixed-point iteration.
//!
//! Module map:
//!
//! * [`special_fn`]: Gamma, Mittag-Leffler, Gauss–Jacobi rules.
//! * [`kernels`]: exponent family, `g`, history weights, L1 coefficients, discrete kernel `P`.
//! * [`fem1d`]: mesh, tridiagonal mass/stiffness operators, Thomas solves, discrete norms.
//! * [`marching`]: state and adjoint time stepping.
//! * [`control`]: projection, fixed-point optimality loop, objective.
//! * [`harness`]: convergence studies, manufactured solutions, config and CSV output.

// `!(x > 0.0)` guards deliberately reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod control;
pub mod error;
pub mod fem1d;
pub mod harness;
pub mod kernels;
pub mod marching;
pub mod special_fn;

pub use error::{Error, Result};
