//! Heinz-block refinement machinery: the two-sided blocks
//! `A^nu X B^(1-nu) + A^(1-nu) X B^nu`, their dyadic midpoint and trapezoid
//! refinement sequences, and the block integrals evaluated in closed form in
//! the joint eigenbasis of `A` and `B` (quadrature stays available as an
//! independent oracle).

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianPD};
use crate::norms::{norm, NormKind};
use crate::quad::adaptive_simpson;
use crate::tol::Tolerances;

/// A pair of positive definite matrices and a carrier `X`, with `X`
/// pre-rotated into the joint eigenbasis so that every exponent family and
/// integral reduces to entrywise spectral weights.
#[derive(Debug, Clone)]
pub struct HeinzBlocks {
    a: HermitianPD,
    b: HermitianPD,
    x: ComplexMatrix,
    /// `U* X V` where `A = U diag(lambda) U*` and `B = V diag(mu) V*`.
    c: ComplexMatrix,
}

impl HeinzBlocks {
    pub fn new(a: &HermitianPD, b: &HermitianPD, x: &ComplexMatrix) -> Result<Self> {
        if a.order() != x.rows() || b.order() != x.cols() {
            return Err(Error::invalid(format!(
                "block shapes: A is {}x{}, B is {}x{}, X is {}x{}",
                a.order(),
                a.order(),
                b.order(),
                b.order(),
                x.rows(),
                x.cols()
            )));
        }
        let c = a
            .spectral()
            .vectors
            .adjoint()
            .matmul(x)?
            .matmul(&b.spectral().vectors)?;
        Ok(HeinzBlocks {
            a: a.clone(),
            b: b.clone(),
            x: x.clone(),
            c,
        })
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    /// Rotates an entrywise-weighted copy of `C` back to the original basis:
    /// `U (w o C) V*`.
    fn from_weights(&self, weight: impl Fn(f64, f64) -> f64) -> Result<ComplexMatrix> {
        let eig_a = &self.a.spectral().eigenvalues;
        let eig_b = &self.b.spectral().eigenvalues;
        let mut weighted = ComplexMatrix::zeros(self.c.rows(), self.c.cols());
        for (i, &lambda) in eig_a.iter().enumerate() {
            for (j, &mu) in eig_b.iter().enumerate() {
                let w = weight(lambda, mu);
                if !w.is_finite() {
                    return Err(Error::numerical(format!(
                        "non-finite spectral weight at eigenvalue pair ({lambda}, {mu})"
                    )));
                }
                weighted.set(i, j, self.c.get(i, j) * w);
            }
        }
        self.a
            .spectral()
            .vectors
            .matmul(&weighted)?
            .matmul(&self.b.spectral().vectors.adjoint())
    }

    /// `A^t X B^(1-t)`.
    pub fn one_sided(&self, t: f64) -> Result<ComplexMatrix> {
        self.from_weights(|l, m| l.powf(t) * m.powf(1.0 - t))
    }

    /// The symmetric block `A^nu X B^(1-nu) + A^(1-nu) X B^nu`.
    pub fn block(&self, nu: f64) -> Result<ComplexMatrix> {
        self.from_weights(|l, m| {
            l.powf(nu) * m.powf(1.0 - nu) + l.powf(1.0 - nu) * m.powf(nu)
        })
    }

    /// The antisymmetric block `A^nu X B^(1-nu) - A^(1-nu) X B^nu`.
    pub fn block_diff(&self, nu: f64) -> Result<ComplexMatrix> {
        self.from_weights(|l, m| {
            l.powf(nu) * m.powf(1.0 - nu) - l.powf(1.0 - nu) * m.powf(nu)
        })
    }

    /// `A X - X B`, the commutator-style difference the derivative bounds
    /// compare against.
    pub fn commutator(&self) -> Result<ComplexMatrix> {
        self.from_weights(|l, m| l - m)
    }

    /// `A^p X - X B^p`.
    pub fn power_commutator(&self, p: f64) -> Result<ComplexMatrix> {
        self.from_weights(|l, m| l.powf(p) - m.powf(p))
    }

    /// Midpoint refinement: the average of blocks at the odd dyadic points of
    /// `[alpha, beta]`. Depth 1 is the single block at the interval midpoint.
    /// `alpha = beta` degenerates to the block at `alpha`.
    pub fn midpoint_refinement(&self, alpha: f64, beta: f64, n: u32) -> Result<ComplexMatrix> {
        check_depth(n, "n")?;
        let count = 1u64 << (n - 1);
        let denom = (1u64 << n) as f64;
        let mut acc = ComplexMatrix::zeros(self.x.rows(), self.x.cols());
        for i in 1..=count {
            let t = (2 * i - 1) as f64 / denom;
            acc = acc.add(&self.block((1.0 - t) * alpha + t * beta)?)?;
        }
        Ok(acc.scale(1.0 / count as f64))
    }

    /// Trapezoid refinement of blocks over `[alpha, beta]`. Depth 1 is the
    /// endpoint average `(block(alpha) + block(beta)) / 2`.
    pub fn trapezoid_refinement(&self, alpha: f64, beta: f64, m: u32) -> Result<ComplexMatrix> {
        check_depth(m, "m")?;
        let mut acc = self.block(alpha)?.add(&self.block(beta)?)?;
        if m == 1 {
            return Ok(acc.scale(0.5));
        }
        let panels = 1u64 << (m - 1);
        for i in 1..panels {
            let t = i as f64 / panels as f64;
            let b = self.block((1.0 - t) * alpha + t * beta)?;
            acc = acc.add(&b.scale(2.0))?;
        }
        Ok(acc.scale(1.0 / (1u64 << m) as f64))
    }

    /// Closed form of `int_alpha^beta (A^t X B^(1-t) + A^(1-t) X B^t) dt`:
    /// each eigen-pair entry integrates to
    /// `mu (rho^beta - rho^alpha) / ln rho` with `rho = lambda / mu`, taking
    /// the limit branch when `|ln rho|` is below the policy threshold.
    pub fn integral(&self, alpha: f64, beta: f64, tols: &Tolerances) -> Result<ComplexMatrix> {
        if !(alpha < beta) {
            return Err(Error::invalid(format!(
                "integral needs alpha < beta, got [{alpha}, {beta}]"
            )));
        }
        self.from_weights(|l, m| {
            cross_integral(l, m, alpha, beta, tols) + cross_integral(m, l, alpha, beta, tols)
        })
    }

    /// Closed form of `int_0^1 A^t X B^(1-t) dt`; diagonal pairs reduce to
    /// logarithmic-mean weights.
    pub fn one_sided_integral(&self, tols: &Tolerances) -> Result<ComplexMatrix> {
        self.from_weights(|l, m| cross_integral(l, m, 0.0, 1.0, tols))
    }

    /// Mean of the scalar map `t -> |||block(t)|||` over `[nu, 1-nu]`,
    /// evaluated by adaptive Simpson. Undefined at `nu = 1/2` (empty
    /// interval), which is rejected.
    pub fn norm_of_block_integral(
        &self,
        nu: f64,
        kind: NormKind,
        tols: &Tolerances,
    ) -> Result<f64> {
        if !(0.0..=1.0).contains(&nu) {
            return Err(Error::invalid(format!("nu must lie in [0, 1], got {nu}")));
        }
        if nu == 0.5 {
            return Err(Error::invalid(
                "nu = 1/2 makes the averaging interval empty; the mean of block norms \
                 is left undefined there",
            ));
        }
        let lo = nu.min(1.0 - nu);
        let hi = nu.max(1.0 - nu);
        let f = |t: f64| -> f64 {
            let b = self.block(t).expect("finite weights");
            norm(&b, kind, tols).expect("valid norm kind")
        };
        // Validate the norm kind once up front so the closure cannot panic.
        norm(&self.x, kind, tols)?;
        let scale = f(lo).max(f(hi)).max(f(0.5 * (lo + hi))) * (hi - lo);
        let eps = tols.quad_abs * scale.max(1.0);
        let integral = adaptive_simpson(&f, lo, hi, eps, tols.quad_max_depth);
        Ok(integral / (hi - lo))
    }
}

fn check_depth(depth: u32, name: &str) -> Result<()> {
    if depth == 0 {
        return Err(Error::invalid(format!("{name} must be >= 1")));
    }
    if depth > 20 {
        return Err(Error::invalid(format!(
            "{name} = {depth} would sum 2^{depth} blocks; refinements are meant for depth <= 20"
        )));
    }
    Ok(())
}

/// `int_alpha^beta lambda^t mu^(1-t) dt` for positive `lambda`, `mu`.
fn cross_integral(lambda: f64, mu: f64, alpha: f64, beta: f64, tols: &Tolerances) -> f64 {
    let u = (lambda / mu).ln();
    let width = beta - alpha;
    if u.abs() <= tols.cross_log_eps {
        // lambda ~ mu: the integrand is nearly constant lambda^t mu^(1-t)
        // ~ mu e^{u t}; the midpoint value keeps second-order accuracy.
        return mu * width * (u * 0.5 * (alpha + beta)).exp();
    }
    mu * (u * alpha).exp() * (u * width).exp_m1() / u
}

/// `A^nu X B^(1-nu) + A^(1-nu) X B^nu`.
pub fn heinz_block(
    a: &HermitianPD,
    b: &HermitianPD,
    x: &ComplexMatrix,
    nu: f64,
) -> Result<ComplexMatrix> {
    HeinzBlocks::new(a, b, x)?.block(nu)
}

/// `A^nu X B^(1-nu) - A^(1-nu) X B^nu`.
pub fn heinz_block_diff(
    a: &HermitianPD,
    b: &HermitianPD,
    x: &ComplexMatrix,
    nu: f64,
) -> Result<ComplexMatrix> {
    HeinzBlocks::new(a, b, x)?.block_diff(nu)
}

/// Midpoint refinement sequence member (depth `n`) over `[alpha, beta]`.
pub fn block_midpoint_refinement(
    a: &HermitianPD,
    b: &HermitianPD,
    x: &ComplexMatrix,
    alpha: f64,
    beta: f64,
    n: u32,
) -> Result<ComplexMatrix> {
    HeinzBlocks::new(a, b, x)?.midpoint_refinement(alpha, beta, n)
}

/// Trapezoid refinement sequence member (depth `m`) over `[alpha, beta]`.
pub fn block_trapezoid_refinement(
    a: &HermitianPD,
    b: &HermitianPD,
    x: &ComplexMatrix,
    alpha: f64,
    beta: f64,
    m: u32,
) -> Result<ComplexMatrix> {
    HeinzBlocks::new(a, b, x)?.trapezoid_refinement(alpha, beta, m)
}

/// `int_alpha^beta (A^t X B^(1-t) + A^(1-t) X B^t) dt` in closed form.
pub fn heinz_integral(
    a: &HermitianPD,
    b: &HermitianPD,
    x: &ComplexMatrix,
    alpha: f64,
    beta: f64,
    tols: &Tolerances,
) -> Result<ComplexMatrix> {
    HeinzBlocks::new(a, b, x)?.integral(alpha, beta, tols)
}

/// `int_0^1 A^t X B^(1-t) dt` in closed form.
pub fn one_sided_integral(
    a: &HermitianPD,
    b: &HermitianPD,
    x: &ComplexMatrix,
    tols: &Tolerances,
) -> Result<ComplexMatrix> {
    HeinzBlocks::new(a, b, x)?.one_sided_integral(tols)
}

/// `(1/|1-2nu|) | int_nu^(1-nu) |||block(t)||| dt |` by adaptive Simpson.
pub fn norm_of_block_integral(
    a: &HermitianPD,
    b: &HermitianPD,
    x: &ComplexMatrix,
    nu: f64,
    kind: NormKind,
    tols: &Tolerances,
) -> Result<f64> {
    HeinzBlocks::new(a, b, x)?.norm_of_block_integral(nu, kind, tols)
}
