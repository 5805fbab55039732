use crate::error::{Error, Result};
use crate::linalg::eig::{hermitian_eig, SpectralDecomposition};
use crate::linalg::matrix::ComplexMatrix;
use crate::tol::Tolerances;

/// A Hermitian positive definite matrix with its spectral decomposition
/// attached.
///
/// Construction validates Hermitian symmetry and strict positivity of the
/// spectrum, and pays for one eigendecomposition up front; every later
/// functional-calculus call (fractional powers, operator means, block
/// integrals) reuses the cached spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPD {
    inner: ComplexMatrix,
    spectral: SpectralDecomposition,
}

impl HermitianPD {
    /// Validates and wraps a Hermitian positive definite matrix.
    pub fn new(matrix: ComplexMatrix, tols: &Tolerances) -> Result<Self> {
        let spectral = hermitian_eig(&matrix, tols)?;
        let min_eig = spectral.eigenvalues[0];
        if min_eig <= 0.0 {
            return Err(Error::invalid(format!(
                "matrix is not positive definite: smallest eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(HermitianPD {
            inner: matrix,
            spectral,
        })
    }

    pub fn identity(n: usize) -> Self {
        HermitianPD {
            inner: ComplexMatrix::identity(n),
            spectral: SpectralDecomposition {
                eigenvalues: vec![1.0; n],
                vectors: ComplexMatrix::identity(n),
            },
        }
    }

    pub fn order(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    pub fn min_eig(&self) -> f64 {
        self.spectral.eigenvalues[0]
    }

    pub fn max_eig(&self) -> f64 {
        self.spectral.eigenvalues[self.order() - 1]
    }

    /// Operator norm, which for positive definite matrices is the largest
    /// eigenvalue.
    pub fn operator_norm(&self) -> f64 {
        self.max_eig()
    }

    /// Inverse through the spectral decomposition.
    pub fn inverse(&self, tols: &Tolerances) -> Result<HermitianPD> {
        let inv = self.spectral.assemble(|l| 1.0 / l)?;
        HermitianPD::new(inv, tols)
    }
}
