//! Dense complex matrix arithmetic and the spectral kernels everything else
//! builds on: cyclic Jacobi eigendecomposition for Hermitian matrices,
//! singular values through the Gram matrix, and seeded random generation of
//! positive definite instances.

mod eig;
mod matrix;
mod pd;
pub mod rand;

pub use eig::{hermitian_eig, singular_values, SpectralDecomposition};
pub use matrix::ComplexMatrix;
pub use pd::HermitianPD;
