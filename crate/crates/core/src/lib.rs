//! Exact arithmetic for genus-zero modular functions and monstrous moonshine.
//!
//! Everything here is integer arithmetic on truncated Laurent series in the
//! nome `q`: no floats, no numerical approximation. The crate builds the
//! modular `J`-function and the eta-quotient hauptmoduln `t_N` from scratch,
//! applies the Hecke operators `U_p` and `V_p`, computes supersingular loci
//! by counting points on curves over `GF(p^2)`, and combines the pieces into
//! the p-adic valuation bookkeeping that recovers the exponent of each prime
//! in the order of the monster group.
//!
//! The top-level entry point is [`monster::verify_prime`], which runs every
//! check for a single prime and returns a machine-readable report.

pub mod arith;
pub mod congruence;
pub mod deligne;
pub mod error;
pub mod etaforms;
pub mod ffield;
pub mod heckeops;
pub mod monster;
pub mod qseries;
pub mod supersingular;

pub use error::{Error, Result};
pub use qseries::{IntPoly, QSeries, Valuation};
