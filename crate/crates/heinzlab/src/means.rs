//! Scalar and operator means: Heinz, Heron, logarithmic, weighted arithmetic
//! and geometric means, the odd-mean kernel `F_nu`, and the dyadic
//! midpoint/trapezoid refinement ladders that squeeze the Hermite-Hadamard
//! inequality from both sides.
//!
//! Operator means of a fixed pair `(A, B)` share the congruence machinery
//! `A^{1/2} g(A^{-1/2} B A^{-1/2}) A^{1/2}`; [`MeanPair`] computes the inner
//! matrix once and reuses its spectrum for every mean and ladder stage.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianPD};
use crate::tol::Tolerances;

/// Parameter bundle for mean and ladder evaluations.
///
/// `r0 = min(nu, 1 - nu)` is derived, not stored. Range requirements such as
/// `nu in [1/4, 3/4]` or `alpha >= 1/2` belong to individual inequality
/// checks and are validated there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanParams {
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub ladder_n: u32,
    pub ladder_m: u32,
}

impl MeanParams {
    pub fn r0(&self) -> f64 {
        self.nu.min(1.0 - self.nu)
    }
}

impl Default for MeanParams {
    fn default() -> Self {
        MeanParams {
            nu: 0.3,
            alpha: 0.2,
            beta: 0.9,
            ladder_n: 3,
            ladder_m: 3,
        }
    }
}

fn check_positive(value: f64, name: &str) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::invalid(format!("{name} must be positive, got {value}")));
    }
    Ok(())
}

fn check_unit_interval(nu: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::invalid(format!("nu must lie in [0, 1], got {nu}")));
    }
    Ok(())
}

/// Heinz mean `(a^nu b^(1-nu) + a^(1-nu) b^nu) / 2`.
pub fn heinz_scalar(a: f64, b: f64, nu: f64) -> Result<f64> {
    check_positive(a, "a")?;
    check_positive(b, "b")?;
    check_unit_interval(nu)?;
    Ok(0.5 * (a.powf(nu) * b.powf(1.0 - nu) + a.powf(1.0 - nu) * b.powf(nu)))
}

/// Heron mean `(1 - nu) sqrt(ab) + nu (a + b)/2`.
pub fn heron_scalar(a: f64, b: f64, nu: f64) -> Result<f64> {
    check_positive(a, "a")?;
    check_positive(b, "b")?;
    check_unit_interval(nu)?;
    Ok((1.0 - nu) * (a * b).sqrt() + nu * 0.5 * (a + b))
}

/// Logarithmic mean `(a - b) / (ln a - ln b)`, continued by `a` at `a = b`.
///
/// Computed through `ln_1p` of the relative gap so nearby arguments do not
/// cancel.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    check_positive(a, "a")?;
    check_positive(b, "b")?;
    let r = (a - b) / b;
    if r.abs() <= 1e-8 {
        // (a - b)/ln(a/b) = b (1 + r/2 + O(r^2)).
        return Ok(b * (1.0 + 0.5 * r));
    }
    Ok(b * r / r.ln_1p())
}

/// The weight map `1 - 4(nu - nu^2)` carrying Heinz means into Heron means.
pub fn bhatia_alpha(nu: f64) -> f64 {
    1.0 - 4.0 * (nu - nu * nu)
}

/// The symmetric exponential kernel `f_x(t) = (x^t + x^(1-t)) / 2`.
pub fn f_x_scalar(x: f64, t: f64) -> Result<f64> {
    check_positive(x, "x")?;
    Ok(0.5 * (x.powf(t) + x.powf(1.0 - t)))
}

/// The odd kernel `F_nu(x) = (x^nu - x^(1-nu)) / ln x`, continued by
/// `2 nu - 1` at `x = 1`. Near `x = 1` (|ln x| below the policy threshold) a
/// second-order series removes the cancellation:
/// `(2nu - 1)(1 + u/2 + (nu^2 - nu + 1) u^2 / 6)` with `u = ln x`.
pub fn f_nu_scalar(x: f64, nu: f64, tols: &Tolerances) -> Result<f64> {
    check_positive(x, "x")?;
    let u = x.ln();
    if u.abs() <= tols.fnu_near_one {
        return Ok((2.0 * nu - 1.0) * (1.0 + 0.5 * u + (nu * nu - nu + 1.0) * u * u / 6.0));
    }
    Ok((x.powf(nu) - x.powf(1.0 - nu)) / u)
}

fn gamma_line(alpha: f64, beta: f64, t: f64) -> f64 {
    (1.0 - t) * alpha + t * beta
}

fn check_ladder_depth(depth: u32, name: &str) -> Result<()> {
    if depth == 0 {
        return Err(Error::invalid(format!("{name} must be >= 1")));
    }
    if depth > 20 {
        return Err(Error::invalid(format!(
            "{name} = {depth} would sum 2^{depth} terms; the ladders are meant for depth <= 20"
        )));
    }
    Ok(())
}

pub(crate) fn midpoint_ladder_unchecked(f: &impl Fn(f64) -> f64, alpha: f64, beta: f64, n: u32) -> f64 {
    let count = 1u64 << (n - 1);
    let denom = (1u64 << n) as f64;
    let mut acc = 0.0;
    for i in 1..=count {
        let t = (2 * i - 1) as f64 / denom;
        acc += f(gamma_line(alpha, beta, t));
    }
    acc / count as f64
}

/// Dyadic composite midpoint value of `f` over `[alpha, beta]` at depth `n`:
/// the average of `f` at the `2^(n-1)` odd dyadic points. Depth 1 is the
/// plain midpoint value; the sequence increases to the mean integral for
/// convex `f`.
pub fn midpoint_ladder(f: impl Fn(f64) -> f64, alpha: f64, beta: f64, n: u32) -> Result<f64> {
    check_ladder_depth(n, "n")?;
    if !(alpha < beta) {
        return Err(Error::invalid(format!(
            "ladder interval needs alpha < beta, got [{alpha}, {beta}]"
        )));
    }
    Ok(midpoint_ladder_unchecked(&f, alpha, beta, n))
}

pub(crate) fn trapezoid_ladder_unchecked(f: &impl Fn(f64) -> f64, alpha: f64, beta: f64, m: u32) -> f64 {
    if m == 1 {
        return 0.5 * (f(alpha) + f(beta));
    }
    let panels = 1u64 << (m - 1);
    let mut acc = f(alpha) + f(beta);
    for i in 1..panels {
        acc += 2.0 * f(gamma_line(alpha, beta, i as f64 / panels as f64));
    }
    acc / (1u64 << m) as f64
}

/// Dyadic composite trapezoid value of `f` over `[alpha, beta]` at depth `m`.
/// Depth 1 is the endpoint average; the sequence decreases to the mean
/// integral for convex `f`.
pub fn trapezoid_ladder(f: impl Fn(f64) -> f64, alpha: f64, beta: f64, m: u32) -> Result<f64> {
    check_ladder_depth(m, "m")?;
    if !(alpha < beta) {
        return Err(Error::invalid(format!(
            "ladder interval needs alpha < beta, got [{alpha}, {beta}]"
        )));
    }
    Ok(trapezoid_ladder_unchecked(&f, alpha, beta, m))
}

/// Closed form of the mean integral `(1/(beta - alpha)) int_alpha^beta f_x`,
/// the common limit of both ladders. `expm1` keeps the removable singularity
/// at `x = 1` exact.
pub fn fx_mean_integral(x: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_positive(x, "x")?;
    if alpha == beta {
        return Err(Error::invalid("mean integral needs alpha != beta"));
    }
    let u = x.ln();
    let width = beta - alpha;
    if u == 0.0 {
        return Ok(1.0);
    }
    // int_alpha^beta x^t dt = e^{u alpha} expm1(u (beta - alpha)) / u
    let fwd = (u * alpha).exp() * (u * width).exp_m1() / u;
    let rev = (u * (1.0 - beta)).exp() * (u * width).exp_m1() / u;
    Ok(0.5 * (fwd + rev) / width)
}

/// Shared congruence machinery for the operator means of a fixed pair
/// `(A, B)`: `A^{1/2}` and the inner matrix `M = A^{-1/2} B A^{-1/2}` with
/// its spectrum.
#[derive(Debug, Clone)]
pub struct MeanPair {
    a: HermitianPD,
    b: HermitianPD,
    a_half: ComplexMatrix,
    inner: HermitianPD,
}

impl MeanPair {
    pub fn new(a: &HermitianPD, b: &HermitianPD, tols: &Tolerances) -> Result<Self> {
        if a.order() != b.order() {
            return Err(Error::invalid(format!(
                "operator means need equal orders, got {} and {}",
                a.order(),
                b.order()
            )));
        }
        let a_half = a.spectral().assemble(f64::sqrt)?;
        let a_inv_half = a.spectral().assemble(|l| 1.0 / l.sqrt())?;
        let m = a_inv_half
            .matmul(b.matrix())?
            .matmul(&a_inv_half)?
            .hermitize();
        let inner = HermitianPD::new(m, tols)?;
        Ok(MeanPair {
            a: a.clone(),
            b: b.clone(),
            a_half,
            inner,
        })
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn a(&self) -> &HermitianPD {
        &self.a
    }

    pub fn b(&self) -> &HermitianPD {
        &self.b
    }

    /// `A^{1/2} g(M) A^{1/2}`, hermitized to absorb rounding.
    pub fn congruence(&self, g: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let gm = self.inner.spectral().assemble(g)?;
        Ok(self.a_half.matmul(&gm)?.matmul(&self.a_half)?.hermitize())
    }

    /// Weighted arithmetic mean `(1 - nu) A + nu B`.
    pub fn arith(&self, nu: f64) -> Result<ComplexMatrix> {
        check_unit_interval(nu)?;
        self.a.matrix().scale(1.0 - nu).add(&self.b.matrix().scale(nu))
    }

    /// Weighted geometric mean `A^{1/2} M^nu A^{1/2}`. Weights outside
    /// `[0, 1]` are accepted (the result is still positive definite) but no
    /// longer interpolate between `A` and `B`.
    pub fn geom(&self, nu: f64, tols: &Tolerances) -> Result<HermitianPD> {
        let m = self.congruence(|x| x.powf(nu))?;
        HermitianPD::new(m, tols)
    }

    /// Heinz mean `(A #_nu B + A #_{1-nu} B) / 2`, evaluated as one
    /// congruence of `x -> (x^nu + x^(1-nu))/2`.
    pub fn heinz(&self, nu: f64) -> Result<ComplexMatrix> {
        check_unit_interval(nu)?;
        self.congruence(|x| 0.5 * (x.powf(nu) + x.powf(1.0 - nu)))
    }

    /// Heron mean `(1 - nu)(A # B) + nu (A nabla B)`.
    pub fn heron(&self, nu: f64) -> Result<ComplexMatrix> {
        check_unit_interval(nu)?;
        let geo = self.congruence(f64::sqrt)?;
        let ari = self.arith(0.5)?;
        geo.scale(1.0 - nu).add(&ari.scale(nu))
    }

    /// The odd-kernel term `A^{1/2} F_nu(M) A^{1/2}`.
    pub fn f_nu(&self, nu: f64, tols: &Tolerances) -> Result<ComplexMatrix> {
        if !nu.is_finite() {
            return Err(Error::invalid(format!("nu must be finite, got {nu}")));
        }
        let t = tols.clone();
        self.congruence(move |x| {
            f_nu_scalar(x, nu, &t).expect("positive spectrum")
        })
    }

    /// Operator midpoint ladder: the average of Heinz means at the odd dyadic
    /// points of `[alpha, beta]`.
    pub fn midpoint_ladder_op(&self, alpha: f64, beta: f64, n: u32) -> Result<ComplexMatrix> {
        check_ladder_depth(n, "n")?;
        let count = 1u64 << (n - 1);
        let denom = (1u64 << n) as f64;
        let mut acc = ComplexMatrix::zeros(self.order(), self.order());
        for i in 1..=count {
            let t = (2 * i - 1) as f64 / denom;
            acc = acc.add(&self.heinz(gamma_line(alpha, beta, t))?)?;
        }
        Ok(acc.scale(1.0 / count as f64))
    }

    /// Same ladder evaluated as a single congruence of the scalar midpoint
    /// ladder of `f_x`; agreement with the mean-sum form is itself a test.
    pub fn midpoint_ladder_op_spectral(&self, alpha: f64, beta: f64, n: u32) -> Result<ComplexMatrix> {
        check_ladder_depth(n, "n")?;
        let (lo, hi) = sort_pair(alpha, beta)?;
        self.congruence(move |x| {
            midpoint_ladder_unchecked(&|t| 0.5 * (x.powf(t) + x.powf(1.0 - t)), lo, hi, n)
        })
    }

    /// Operator trapezoid ladder: the dyadic trapezoid combination of Heinz
    /// means over `[alpha, beta]`. Depth 1 is `(H_alpha + H_beta)/2`.
    pub fn trapezoid_ladder_op(&self, alpha: f64, beta: f64, m: u32) -> Result<ComplexMatrix> {
        check_ladder_depth(m, "m")?;
        if m == 1 {
            let acc = self.heinz(alpha)?.add(&self.heinz(beta)?)?;
            return Ok(acc.scale(0.5));
        }
        let panels = 1u64 << (m - 1);
        let mut acc = self.heinz(alpha)?.add(&self.heinz(beta)?)?;
        for i in 1..panels {
            let h = self.heinz(gamma_line(alpha, beta, i as f64 / panels as f64))?;
            acc = acc.add(&h.scale(2.0))?;
        }
        Ok(acc.scale(1.0 / (1u64 << m) as f64))
    }

    /// Trapezoid ladder as a single congruence of the scalar ladder.
    pub fn trapezoid_ladder_op_spectral(&self, alpha: f64, beta: f64, m: u32) -> Result<ComplexMatrix> {
        check_ladder_depth(m, "m")?;
        let (lo, hi) = sort_pair(alpha, beta)?;
        self.congruence(move |x| {
            trapezoid_ladder_unchecked(&|t| 0.5 * (x.powf(t) + x.powf(1.0 - t)), lo, hi, m)
        })
    }
}

fn sort_pair(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if alpha == beta {
        return Err(Error::invalid("spectral ladder form needs alpha != beta"));
    }
    Ok(if alpha < beta { (alpha, beta) } else { (beta, alpha) })
}

/// Weighted arithmetic mean `(1 - nu) A + nu B`.
pub fn arith_mean_w(a: &HermitianPD, b: &HermitianPD, nu: f64) -> Result<ComplexMatrix> {
    check_unit_interval(nu)?;
    if a.order() != b.order() {
        return Err(Error::invalid("operands must have equal order"));
    }
    a.matrix().scale(1.0 - nu).add(&b.matrix().scale(nu))
}

/// Weighted geometric mean `A^{1/2} (A^{-1/2} B A^{-1/2})^nu A^{1/2}`.
pub fn geom_mean_w(a: &HermitianPD, b: &HermitianPD, nu: f64, tols: &Tolerances) -> Result<HermitianPD> {
    MeanPair::new(a, b, tols)?.geom(nu, tols)
}

/// Operator Heinz mean `(A #_nu B + A #_{1-nu} B) / 2`.
pub fn heinz_op(a: &HermitianPD, b: &HermitianPD, nu: f64, tols: &Tolerances) -> Result<ComplexMatrix> {
    MeanPair::new(a, b, tols)?.heinz(nu)
}

/// Operator Heron mean `(1 - nu)(A # B) + nu (A nabla B)`.
pub fn heron_op(a: &HermitianPD, b: &HermitianPD, nu: f64, tols: &Tolerances) -> Result<ComplexMatrix> {
    MeanPair::new(a, b, tols)?.heron(nu)
}

/// `A^{1/2} F_nu(A^{-1/2} B A^{-1/2}) A^{1/2}` with the odd kernel of
/// [`f_nu_scalar`].
pub fn f_nu_op(a: &HermitianPD, b: &HermitianPD, nu: f64, tols: &Tolerances) -> Result<ComplexMatrix> {
    MeanPair::new(a, b, tols)?.f_nu(nu, tols)
}

/// Operator midpoint ladder over `[alpha, beta]` (see
/// [`MeanPair::midpoint_ladder_op`]).
pub fn midpoint_ladder_op(
    a: &HermitianPD,
    b: &HermitianPD,
    alpha: f64,
    beta: f64,
    n: u32,
    tols: &Tolerances,
) -> Result<ComplexMatrix> {
    MeanPair::new(a, b, tols)?.midpoint_ladder_op(alpha, beta, n)
}

/// Operator trapezoid ladder over `[alpha, beta]` (see
/// [`MeanPair::trapezoid_ladder_op`]).
pub fn trapezoid_ladder_op(
    a: &HermitianPD,
    b: &HermitianPD,
    alpha: f64,
    beta: f64,
    m: u32,
    tols: &Tolerances,
) -> Result<ComplexMatrix> {
    MeanPair::new(a, b, tols)?.trapezoid_ladder_op(alpha, beta, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;
    use crate::linalg::rand::{random_diagonal_pd, random_pd};
    use crate::matfun::frac_power;
    use crate::quad::composite_simpson;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn min_eig_of_diff(hi: &ComplexMatrix, lo: &ComplexMatrix) -> f64 {
        let diff = hi.sub(lo).unwrap().hermitize();
        hermitian_eig(&diff, &tols()).unwrap().eigenvalues[0]
    }

    #[test]
    fn heinz_scalar_cases() {
        assert_close(heinz_scalar(3.7, 3.7, 0.2).unwrap(), 3.7, 1e-12);
        assert_close(heinz_scalar(4.0, 1.0, 0.5).unwrap(), 2.0, 1e-12);
        assert_close(heinz_scalar(4.0, 1.0, 1.0).unwrap(), 2.5, 1e-12);
        // Symmetric in nu <-> 1 - nu.
        assert_close(
            heinz_scalar(5.0, 2.0, 0.3).unwrap(),
            heinz_scalar(5.0, 2.0, 0.7).unwrap(),
            1e-12,
        );
        assert!(heinz_scalar(-1.0, 2.0, 0.5).is_err());
        assert!(heinz_scalar(1.0, 2.0, 1.5).is_err());
    }

    #[test]
    fn heron_scalar_cases() {
        assert_close(heron_scalar(4.0, 1.0, 0.0).unwrap(), 2.0, 1e-12);
        assert_close(heron_scalar(4.0, 1.0, 1.0).unwrap(), 2.5, 1e-12);
        assert_close(heron_scalar(4.0, 1.0, 0.5).unwrap(), 2.25, 1e-12);
    }

    #[test]
    fn log_mean_cases() {
        assert_close(log_mean(2.5, 2.5).unwrap(), 2.5, 1e-12);
        assert_close(
            log_mean(std::f64::consts::E, 1.0).unwrap(),
            std::f64::consts::E - 1.0,
            1e-12,
        );
        assert_close(log_mean(4.0, 1.0).unwrap(), 3.0 / 4.0f64.ln(), 1e-12);
        // Agrees with quadrature of the defining integral.
        let (a, b) = (7.3f64, 0.4f64);
        let quad = composite_simpson(|nu| a.powf(nu) * b.powf(1.0 - nu), 0.0, 1.0, 1 << 10);
        assert_close(log_mean(a, b).unwrap(), quad, 1e-10);
        // Near-equal arguments stay accurate.
        let x = 3.0;
        let y = 3.0 * (1.0 + 3e-9);
        assert_close(log_mean(x, y).unwrap(), 0.5 * (x + y), 1e-12);
    }

    #[test]
    fn bhatia_alpha_cases() {
        assert_close(bhatia_alpha(0.5), 0.0, 1e-15);
        assert_close(bhatia_alpha(0.0), 1.0, 1e-15);
        assert_close(bhatia_alpha(0.25), 0.25, 1e-15);
    }

    #[test]
    fn f_x_scalar_cases() {
        assert_close(f_x_scalar(1.0, 0.77).unwrap(), 1.0, 1e-15);
        assert_close(f_x_scalar(9.0, 0.5).unwrap(), 3.0, 1e-12);
        assert_close(f_x_scalar(4.0, 0.0).unwrap(), 2.5, 1e-12);
    }

    #[test]
    fn f_nu_scalar_cases() {
        let t = tols();
        assert_close(f_nu_scalar(1.0, 0.3, &t).unwrap(), -0.4, 1e-12);
        let x = 4.0f64;
        let nu = 0.3;
        let direct = (x.powf(nu) - x.powf(1.0 - nu)) / x.ln();
        assert_close(f_nu_scalar(x, nu, &t).unwrap(), direct, 1e-12);
        // Antisymmetry in nu <-> 1 - nu.
        assert_close(
            f_nu_scalar(x, 1.0 - nu, &t).unwrap(),
            -f_nu_scalar(x, nu, &t).unwrap(),
            1e-12,
        );
        // The series branch matches the direct formula just outside the window.
        let near = 1.0f64 + 2e-6;
        let series_side = f_nu_scalar((2.0f64).exp().powf(5e-7), nu, &t).unwrap();
        assert!((series_side - (2.0 * nu - 1.0)).abs() < 1e-5);
        let direct_near = (near.powf(nu) - near.powf(1.0 - nu)) / near.ln();
        assert_close(f_nu_scalar(near, nu, &t).unwrap(), direct_near, 1e-10);
    }

    #[test]
    fn midpoint_ladder_cases() {
        let f = |t: f64| (t - 0.3) * (t - 0.3);
        // Depth 1 is the midpoint value.
        assert_close(
            midpoint_ladder(f, 0.1, 0.9, 1).unwrap(),
            f(0.5),
            1e-15,
        );
        // Constant maps stay constant at every depth.
        for n in 1..=6 {
            assert_close(midpoint_ladder(|_| 2.5, 0.0, 1.0, n).unwrap(), 2.5, 1e-15);
        }
        // Hand expansion at depth 3 over [0, 1]: odd eighths.
        let fx = |t: f64| f_x_scalar(4.0, t).unwrap();
        let by_hand = (fx(1.0 / 8.0) + fx(3.0 / 8.0) + fx(5.0 / 8.0) + fx(7.0 / 8.0)) / 4.0;
        assert_close(midpoint_ladder(fx, 0.0, 1.0, 3).unwrap(), by_hand, 1e-14);
        assert!(midpoint_ladder(fx, 0.9, 0.1, 2).is_err());
        assert!(midpoint_ladder(fx, 0.1, 0.9, 0).is_err());
    }

    #[test]
    fn trapezoid_ladder_cases() {
        let fx = |t: f64| f_x_scalar(4.0, t).unwrap();
        assert_close(
            trapezoid_ladder(fx, 0.0, 1.0, 1).unwrap(),
            0.5 * (fx(0.0) + fx(1.0)),
            1e-14,
        );
        for m in 1..=6 {
            assert_close(trapezoid_ladder(|_| 1.25, 0.0, 1.0, m).unwrap(), 1.25, 1e-15);
        }
        // Hand expansion at depth 3: trapezoid over quarters.
        let by_hand =
            (fx(0.0) + fx(1.0) + 2.0 * (fx(0.25) + fx(0.5) + fx(0.75))) / 8.0;
        assert_close(trapezoid_ladder(fx, 0.0, 1.0, 3).unwrap(), by_hand, 1e-14);
    }

    #[test]
    fn ladder_sandwich_and_limits() {
        // f(mid) <= phi_n <= mean integral <= Phi_m <= endpoint average, with
        // phi increasing and Phi decreasing.
        for &x in &[1e-3, 0.1, 1.0 + 1e-9, 10.0, 1e3] {
            let (alpha, beta) = (0.2, 0.9);
            let fx = move |t: f64| f_x_scalar(x, t).unwrap();
            let mean = fx_mean_integral(x, alpha, beta).unwrap();
            let mut prev = fx(0.5 * (alpha + beta)) - 1e-12;
            for n in 1..=8 {
                let v = midpoint_ladder(fx, alpha, beta, n).unwrap();
                assert!(v >= prev - 1e-11 * prev.abs().max(1.0), "x={x} n={n}");
                assert!(v <= mean + 1e-11 * mean.abs().max(1.0));
                prev = v;
            }
            let mut last = 0.5 * (fx(alpha) + fx(beta)) + 1e-12;
            for m in 1..=8 {
                let v = trapezoid_ladder(fx, alpha, beta, m).unwrap();
                assert!(v <= last + 1e-11 * last.abs().max(1.0), "x={x} m={m}");
                assert!(v >= mean - 1e-11 * mean.abs().max(1.0));
                last = v;
            }
            // Both ladders converge to the mean integral.
            let lo = midpoint_ladder(fx, alpha, beta, 12).unwrap();
            let hi = trapezoid_ladder(fx, alpha, beta, 12).unwrap();
            assert!((lo - mean).abs() <= 1e-6 * mean.abs().max(1.0), "x={x}");
            assert!((hi - mean).abs() <= 1e-6 * mean.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn fx_mean_integral_matches_simpson() {
        for &x in &[0.01, 0.5, 1.0, 3.0, 250.0] {
            let (alpha, beta) = (0.15, 0.85);
            let closed = fx_mean_integral(x, alpha, beta).unwrap();
            let quad = composite_simpson(
                |t| f_x_scalar(x, t).unwrap(),
                alpha,
                beta,
                1 << 10,
            ) / (beta - alpha);
            assert_close(closed, quad, 1e-10 * closed.abs().max(1.0));
        }
        assert_close(fx_mean_integral(1.0, 0.0, 1.0).unwrap(), 1.0, 1e-15);
    }

    #[test]
    fn arith_mean_cases() {
        let t = tols();
        let a = random_pd(3, 6, 100.0, &t).unwrap();
        let same = arith_mean_w(&a, &a, 0.4).unwrap();
        assert!(same.sub(a.matrix()).unwrap().frobenius_norm() < 1e-12);
        let b = random_pd(3, 7, 100.0, &t).unwrap();
        let at_zero = arith_mean_w(&a, &b, 0.0).unwrap();
        assert!(at_zero.sub(a.matrix()).unwrap().frobenius_norm() < 1e-12);
        let mixed = arith_mean_w(&a, &b, 0.3).unwrap();
        let direct = a.matrix().scale(0.7).add(&b.matrix().scale(0.3)).unwrap();
        assert!(mixed.sub(&direct).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn geom_mean_cases() {
        let t = tols();
        // (I, B, nu) -> B^nu.
        let b = random_pd(3, 8, 50.0, &t).unwrap();
        let id = HermitianPD::identity(3);
        let g = geom_mean_w(&id, &b, 0.4, &t).unwrap();
        let bpow = frac_power(&b, 0.4, &t).unwrap();
        let res = g.matrix().sub(bpow.matrix()).unwrap().frobenius_norm();
        assert!(res <= 1e-9 * (1.0 + bpow.matrix().frobenius_norm()));

        // Commuting diagonal case.
        let d4 = HermitianPD::new(ComplexMatrix::diagonal(&[4.0]), &t).unwrap();
        let d9 = HermitianPD::new(ComplexMatrix::diagonal(&[9.0]), &t).unwrap();
        let half = geom_mean_w(&d4, &d9, 0.5, &t).unwrap();
        assert_close(half.matrix().get(0, 0).re, 6.0, 1e-10);

        // Transformer identity A #_nu B = B #_{1-nu} A.
        let a = random_pd(4, 8, 100.0, &t).unwrap();
        let b = random_pd(4, 88, 100.0, &t).unwrap();
        let lhs = geom_mean_w(&a, &b, 0.25, &t).unwrap();
        let rhs = geom_mean_w(&b, &a, 0.75, &t).unwrap();
        let scale = 1.0 + lhs.matrix().frobenius_norm();
        assert!(lhs.matrix().sub(rhs.matrix()).unwrap().frobenius_norm() <= 1e-9 * scale);

        // Symmetry at nu = 1/2.
        let s1 = geom_mean_w(&a, &b, 0.5, &t).unwrap();
        let s2 = geom_mean_w(&b, &a, 0.5, &t).unwrap();
        assert!(s1.matrix().sub(s2.matrix()).unwrap().frobenius_norm() <= 1e-9 * scale);
    }

    #[test]
    fn heinz_op_cases() {
        let t = tols();
        let a = random_pd(3, 10, 100.0, &t).unwrap();
        let b = random_pd(3, 11, 100.0, &t).unwrap();
        let pair = MeanPair::new(&a, &b, &t).unwrap();

        // nu = 1/2 collapses to the geometric mean.
        let h_half = pair.heinz(0.5).unwrap();
        let geo = pair.geom(0.5, &t).unwrap();
        let scale = 1.0 + geo.matrix().frobenius_norm();
        assert!(h_half.sub(geo.matrix()).unwrap().frobenius_norm() <= 1e-9 * scale);

        // H(A, A) = A.
        let same = MeanPair::new(&a, &a, &t).unwrap().heinz(0.3).unwrap();
        assert!(same.sub(a.matrix()).unwrap().frobenius_norm() <= 1e-9 * scale);

        // Average of the two weighted geometric means.
        let avg = pair
            .geom(0.3, &t)
            .unwrap()
            .matrix()
            .add(pair.geom(0.7, &t).unwrap().matrix())
            .unwrap()
            .scale(0.5);
        let h = pair.heinz(0.3).unwrap();
        assert!(h.sub(&avg).unwrap().frobenius_norm() <= 1e-9 * scale);

        // Symmetry nu <-> 1 - nu.
        let h1 = pair.heinz(0.2).unwrap();
        let h2 = pair.heinz(0.8).unwrap();
        assert!(h1.sub(&h2).unwrap().frobenius_norm() <= 1e-12 * scale);

        // Commuting scalar reduction at nu = 1.
        let d4 = HermitianPD::new(ComplexMatrix::diagonal(&[4.0]), &t).unwrap();
        let d1 = HermitianPD::new(ComplexMatrix::diagonal(&[1.0]), &t).unwrap();
        let h = heinz_op(&d4, &d1, 1.0, &t).unwrap();
        assert_close(h.get(0, 0).re, 2.5, 1e-12);
    }

    #[test]
    fn heron_op_cases() {
        let t = tols();
        let a = random_pd(3, 12, 100.0, &t).unwrap();
        let b = random_pd(3, 13, 100.0, &t).unwrap();
        let pair = MeanPair::new(&a, &b, &t).unwrap();
        let scale = 1.0 + a.matrix().frobenius_norm() + b.matrix().frobenius_norm();

        let k0 = pair.heron(0.0).unwrap();
        let geo = pair.geom(0.5, &t).unwrap();
        assert!(k0.sub(geo.matrix()).unwrap().frobenius_norm() <= 1e-9 * scale);

        let k1 = pair.heron(1.0).unwrap();
        let ari = pair.arith(0.5).unwrap();
        assert!(k1.sub(&ari).unwrap().frobenius_norm() <= 1e-9 * scale);

        // Commuting diagonal reduction.
        let da = random_diagonal_pd(3, 14, 100.0, &t).unwrap();
        let db = random_diagonal_pd(3, 15, 100.0, &t).unwrap();
        let k = heron_op(&da, &db, 0.35, &t).unwrap();
        for i in 0..3 {
            let expected = heron_scalar(
                da.matrix().get(i, i).re,
                db.matrix().get(i, i).re,
                0.35,
            )
            .unwrap();
            assert_close(k.get(i, i).re, expected, 1e-9 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn f_nu_op_cases() {
        let t = tols();
        let a = random_pd(3, 16, 100.0, &t).unwrap();
        let b = random_pd(3, 17, 100.0, &t).unwrap();

        // nu = 1/2 kills the kernel.
        let z = f_nu_op(&a, &b, 0.5, &t).unwrap();
        assert!(z.frobenius_norm() <= 1e-10 * (1.0 + a.matrix().frobenius_norm()));

        // B = A gives (2 nu - 1) A.
        let same = f_nu_op(&a, &a, 0.2, &t).unwrap();
        let expected = a.matrix().scale(2.0 * 0.2 - 1.0);
        assert!(same.sub(&expected).unwrap().frobenius_norm() <= 1e-9 * (1.0 + expected.frobenius_norm()));

        // Antisymmetry F_{1-nu} = -F_nu.
        let f3 = f_nu_op(&a, &b, 0.3, &t).unwrap();
        let f7 = f_nu_op(&a, &b, 0.7, &t).unwrap();
        assert!(f3.add(&f7).unwrap().frobenius_norm() <= 1e-9 * (1.0 + f3.frobenius_norm()));

        // Commuting diagonal reduction.
        let da = random_diagonal_pd(2, 18, 50.0, &t).unwrap();
        let db = random_diagonal_pd(2, 19, 50.0, &t).unwrap();
        let f = f_nu_op(&da, &db, 0.3, &t).unwrap();
        for i in 0..2 {
            let (ai, bi) = (da.matrix().get(i, i).re, db.matrix().get(i, i).re);
            let x = bi / ai;
            let expected = ai * f_nu_scalar(x, 0.3, &t).unwrap();
            assert_close(f.get(i, i).re, expected, 1e-9 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn operator_ladders_paper_specializations() {
        let t = tols();
        let a = random_pd(4, 20, 100.0, &t).unwrap();
        let b = random_pd(4, 21, 100.0, &t).unwrap();
        let pair = MeanPair::new(&a, &b, &t).unwrap();
        let nu = 0.3;
        let scale = 1.0 + a.matrix().frobenius_norm() + b.matrix().frobenius_norm();

        // Depth-1 midpoint ladder over [nu, 1/2] is the Heinz mean at (2nu+1)/4.
        let phi1 = pair.midpoint_ladder_op(nu, 0.5, 1).unwrap();
        let heinz_mid = pair.heinz((2.0 * nu + 1.0) / 4.0).unwrap();
        assert!(phi1.sub(&heinz_mid).unwrap().frobenius_norm() <= 1e-9 * scale);

        // Depth-1 trapezoid ladder is the endpoint average.
        let cap1 = pair.trapezoid_ladder_op(nu, 0.5, 1).unwrap();
        let endpoint = pair
            .heinz(nu)
            .unwrap()
            .add(&pair.heinz(0.5).unwrap())
            .unwrap()
            .scale(0.5);
        assert!(cap1.sub(&endpoint).unwrap().frobenius_norm() <= 1e-9 * scale);

        // Depth-2 trapezoid ladder over [nu, 1/2]:
        // (1/4) H_nu + (1/2) H_{(2nu+1)/4} + (1/4) A # B.
        let cap2 = pair.trapezoid_ladder_op(nu, 0.5, 2).unwrap();
        let explicit = pair
            .heinz(nu)
            .unwrap()
            .scale(0.25)
            .add(&heinz_mid.scale(0.5))
            .unwrap()
            .add(&pair.geom(0.5, &t).unwrap().matrix().scale(0.25))
            .unwrap();
        assert!(cap2.sub(&explicit).unwrap().frobenius_norm() <= 1e-9 * scale);

        // A = B collapses every ladder stage to A.
        let same = MeanPair::new(&a, &a, &t).unwrap();
        let flat = same.midpoint_ladder_op(0.1, 0.8, 3).unwrap();
        assert!(flat.sub(a.matrix()).unwrap().frobenius_norm() <= 1e-9 * scale);
    }

    #[test]
    fn operator_ladders_match_spectral_forms() {
        let t = tols();
        let a = random_pd(4, 22, 1e3, &t).unwrap();
        let b = random_pd(4, 23, 1e3, &t).unwrap();
        let pair = MeanPair::new(&a, &b, &t).unwrap();
        let scale = 1.0 + a.matrix().frobenius_norm() + b.matrix().frobenius_norm();
        for (alpha, beta) in [(0.2, 0.5), (0.5, 0.1), (0.0, 1.0)] {
            for depth in 1..=4 {
                let sum_form = pair.midpoint_ladder_op(alpha, beta, depth).unwrap();
                let spec_form = pair.midpoint_ladder_op_spectral(alpha, beta, depth).unwrap();
                assert!(
                    sum_form.sub(&spec_form).unwrap().frobenius_norm() <= 1e-9 * scale,
                    "midpoint depth {depth}"
                );
                let sum_form = pair.trapezoid_ladder_op(alpha, beta, depth).unwrap();
                let spec_form = pair.trapezoid_ladder_op_spectral(alpha, beta, depth).unwrap();
                assert!(
                    sum_form.sub(&spec_form).unwrap().frobenius_norm() <= 1e-9 * scale,
                    "trapezoid depth {depth}"
                );
            }
        }
    }

    #[test]
    fn operator_ladders_commuting_reduction() {
        let t = tols();
        let da = random_diagonal_pd(3, 24, 100.0, &t).unwrap();
        let db = random_diagonal_pd(3, 25, 100.0, &t).unwrap();
        let pair = MeanPair::new(&da, &db, &t).unwrap();
        let (alpha, beta, n, m) = (0.15, 0.8, 3, 3);
        let phi = pair.midpoint_ladder_op(alpha, beta, n).unwrap();
        let cap = pair.trapezoid_ladder_op(alpha, beta, m).unwrap();
        for i in 0..3 {
            let (ai, bi) = (da.matrix().get(i, i).re, db.matrix().get(i, i).re);
            let scalar_phi = midpoint_ladder(
                |t| heinz_scalar(ai, bi, t).unwrap(),
                alpha,
                beta,
                n,
            )
            .unwrap();
            let scalar_cap = trapezoid_ladder(
                |t| heinz_scalar(ai, bi, t).unwrap(),
                alpha,
                beta,
                m,
            )
            .unwrap();
            assert_close(phi.get(i, i).re, scalar_phi, 1e-9 * scalar_phi.max(1.0));
            assert_close(cap.get(i, i).re, scalar_cap, 1e-9 * scalar_cap.max(1.0));
        }
    }

    #[test]
    fn heinz_sandwich_loewner() {
        // A # B <= H_nu(A, B) <= A nabla B.
        let t = tols();
        for seed in 0..5u64 {
            let a = random_pd(4, 500 + seed, 1e3, &t).unwrap();
            let b = random_pd(4, 600 + seed, 1e3, &t).unwrap();
            let pair = MeanPair::new(&a, &b, &t).unwrap();
            let nu = 0.15 + 0.1 * seed as f64;
            let h = pair.heinz(nu).unwrap();
            let geo = pair.geom(0.5, &t).unwrap();
            let ari = pair.arith(0.5).unwrap();
            let scale = ari.frobenius_norm().max(1.0);
            assert!(min_eig_of_diff(&h, geo.matrix()) >= -1e-9 * scale);
            assert!(min_eig_of_diff(&ari, &h) >= -1e-9 * scale);
        }
    }
}
