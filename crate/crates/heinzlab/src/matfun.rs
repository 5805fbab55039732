//! Spectral functional calculus: scalar maps of Hermitian matrices,
//! fractional powers, and first divided differences of operator monotone
//! functions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianPD};
use crate::tol::Tolerances;

/// A named operator monotone scalar function on `(0, inf)` together with its
/// derivative.
///
/// The enumeration is closed on purpose: the derivative of each variant is
/// correct by construction, which the divided-difference machinery relies on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneFn {
    /// `t^r` with `0 < r <= 1`.
    Power(f64),
    /// Natural logarithm.
    Log,
    Identity,
}

impl MonotoneFn {
    /// Validates the parameter range (`Power` requires `r` in `(0, 1]`).
    pub fn validate(&self) -> Result<()> {
        if let MonotoneFn::Power(r) = self {
            if !(*r > 0.0 && *r <= 1.0) {
                return Err(Error::invalid(format!(
                    "power exponent must lie in (0, 1], got {r}"
                )));
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            MonotoneFn::Power(r) => t.powf(*r),
            MonotoneFn::Log => t.ln(),
            MonotoneFn::Identity => t,
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            MonotoneFn::Power(r) => r * t.powf(r - 1.0),
            MonotoneFn::Log => 1.0 / t,
            MonotoneFn::Identity => 1.0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            MonotoneFn::Power(r) => format!("pow({r})"),
            MonotoneFn::Log => "log".to_string(),
            MonotoneFn::Identity => "id".to_string(),
        }
    }
}

/// Applies a scalar map to a positive definite matrix through its spectrum:
/// `f(A) = U f(Lambda) U*`. Fails with a domain error if the map is undefined
/// (non-finite) at an eigenvalue.
pub fn apply_spectral(f: impl Fn(f64) -> f64, a: &HermitianPD) -> Result<ComplexMatrix> {
    a.spectral().assemble(f)
}

/// `f(A)` for a named monotone function. `Identity` returns the matrix itself
/// so that both sides of derivative-bound checks agree exactly.
pub fn apply_monotone(f: MonotoneFn, a: &HermitianPD) -> Result<ComplexMatrix> {
    f.validate()?;
    match f {
        MonotoneFn::Identity => Ok(a.matrix().clone()),
        _ => apply_spectral(|t| f.eval(t), a),
    }
}

/// Fractional power `A^nu` through the spectral decomposition. Exponents 0
/// and 1 short-circuit to the identity and the matrix itself.
pub fn frac_power(a: &HermitianPD, nu: f64, tols: &Tolerances) -> Result<HermitianPD> {
    if !nu.is_finite() {
        return Err(Error::invalid(format!("exponent must be finite, got {nu}")));
    }
    if nu == 0.0 {
        return Ok(HermitianPD::identity(a.order()));
    }
    if nu == 1.0 {
        return Ok(a.clone());
    }
    let m = a.spectral().assemble(|l| l.powf(nu))?;
    HermitianPD::new(m, tols)
}

/// First divided-difference matrix of `f` on a positive spectrum:
/// `y_ij = (f(l_i) - f(l_j)) / (l_i - l_j)` off the diagonal and `f'(l_i)` on
/// it. Near-degenerate pairs (gap below `near_degenerate * max(1, |l_i|)`)
/// fall back to the derivative at the midpoint to avoid cancellation.
///
/// For operator monotone `f` the result is positive semidefinite.
pub fn divided_difference_matrix(
    f: MonotoneFn,
    eigs: &[f64],
    tols: &Tolerances,
) -> Result<ComplexMatrix> {
    f.validate()?;
    if eigs.is_empty() {
        return Err(Error::invalid("empty spectrum"));
    }
    for &l in eigs {
        if l <= 0.0 {
            return Err(Error::domain(format!(
                "divided differences need a positive spectrum, got eigenvalue {l}"
            )));
        }
    }
    let n = eigs.len();
    let mut y = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let (li, lj) = (eigs[i], eigs[j]);
            let value = if i == j {
                f.deriv(li)
            } else if (li - lj).abs() <= tols.near_degenerate * li.abs().max(1.0) {
                f.deriv(0.5 * (li + lj))
            } else {
                (f.eval(li) - f.eval(lj)) / (li - lj)
            };
            y.set(i, j, Complex64::new(value, 0.0));
            y.set(j, i, Complex64::new(value, 0.0));
        }
    }
    Ok(y)
}

/// Entrywise (Schur) product of two matrices of the same shape.
pub fn schur_product(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.schur_product(n)
}

/// Operator norm of `f'(A)`: the largest `|f'(lambda)|` over the spectrum.
pub fn fprime_opnorm(f: MonotoneFn, a: &HermitianPD) -> Result<f64> {
    f.validate()?;
    Ok(a.spectral()
        .eigenvalues
        .iter()
        .map(|&l| f.deriv(l).abs())
        .fold(0.0, f64::max))
}
