//! Operator means, unitarily invariant norms, and Hermite-Hadamard
//! refinement ladders for positive definite matrices.
//!
//! The crate is organized around a small dense complex-matrix kernel
//! ([`linalg`]), unitarily invariant norms with Fan-dominance certification
//! ([`norms`]), spectral functional calculus ([`matfun`]), the scalar and
//! operator means with their dyadic midpoint/trapezoid ladders ([`means`]),
//! Heinz-block refinement sequences and closed-form block integrals
//! ([`refine`]), and a registry of inequality checks evaluated over seeded
//! random instances ([`suite`]).

pub mod error;
pub mod linalg;
pub mod matfun;
pub mod means;
pub mod norms;
pub mod quad;
pub mod refine;
pub mod suite;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
