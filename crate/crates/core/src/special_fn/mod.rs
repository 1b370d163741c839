//! Gamma, Beta, Mittag-Leffler and the quadrature rules used by the kernel tables.

mod gamma;
mod mittag_leffler;
mod quadrature;

pub use gamma::{gamma_fn, ln_gamma_positive, rgamma};
pub use mittag_leffler::{mittag_leffler, MLParams};
pub use quadrature::{beta_fn, integrate_adaptive, jacobi_rule, JacobiRule, DEFAULT_NODE_COUNT};
