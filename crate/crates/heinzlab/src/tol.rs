//! Central tolerance policy.
//!
//! Every threshold used by the numerical kernels lives here so that a single
//! struct can be tuned from configuration instead of scattering magic numbers
//! through the code. The defaults are chosen for double precision at matrix
//! orders up to ~64 and condition numbers up to ~1e4.

/// Tolerance policy threaded through the kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Hermitian-symmetry check: `max |M - M*|  <=  hermitian_check * (1 + max |M|)`.
    pub hermitian_check: f64,
    /// Jacobi eigensolver stops when the off-diagonal Frobenius norm drops
    /// below `eig_offdiag * ||H||_F`.
    pub eig_offdiag: f64,
    /// Maximum number of cyclic Jacobi sweeps before giving up.
    pub eig_max_sweeps: usize,
    /// Eigenvalues of `M* M` more negative than `-sv_clamp * ||M||_F^2` are a
    /// numerical error; values in `[-sv_clamp * ||M||_F^2, 0)` clamp to zero.
    pub sv_clamp: f64,
    /// Divided differences switch to the midpoint derivative when
    /// `|lambda_i - lambda_j| <= near_degenerate * max(1, |lambda_i|)`.
    pub near_degenerate: f64,
    /// `F_nu(x)` switches to its second-order series when `|ln x| <= fnu_near_one`.
    pub fnu_near_one: f64,
    /// The cross integral `int lambda^t mu^(1-t) dt` takes the equal-eigenvalue
    /// limit branch when `|ln(lambda/mu)| <= cross_log_eps`.
    pub cross_log_eps: f64,
    /// Absolute tolerance factor for adaptive Simpson quadrature (scaled by
    /// the magnitude of the integrand).
    pub quad_abs: f64,
    /// Maximum recursion depth for adaptive Simpson.
    pub quad_max_depth: u32,
    /// Default relative tolerance for inequality checks, anchored at
    /// `max(1, |rhs|)` (or `max(1, ||Q||_op)` for Loewner comparisons).
    pub check_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian_check: 1e-12,
            eig_offdiag: 1e-13,
            eig_max_sweeps: 50,
            sv_clamp: 1e-12,
            near_degenerate: 1e-8,
            fnu_near_one: 1e-6,
            cross_log_eps: 1e-8,
            quad_abs: 1e-9,
            quad_max_depth: 20,
            check_rel: 1e-9,
        }
    }
}

impl Tolerances {
    /// Policy with a different default inequality tolerance, everything else
    /// at the defaults.
    pub fn with_check_rel(check_rel: f64) -> Self {
        Tolerances {
            check_rel,
            ..Tolerances::default()
        }
    }
}
