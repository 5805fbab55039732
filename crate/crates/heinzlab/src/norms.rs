//! Unitarily invariant norms and the Fan-dominance certificate.
//!
//! Every norm here is a symmetric gauge of the singular values, so a norm
//! inequality that holds in all Ky Fan norms holds in every unitarily
//! invariant norm. [`fan_dominates`] runs that sweep and reports per-k
//! margins.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, ComplexMatrix};
use crate::tol::Tolerances;

/// Selector for a unitarily invariant norm.
///
/// `Trace`, `HilbertSchmidt` and `Operator` are aliases of `Schatten(1)`,
/// `Schatten(2)` and `Schatten(inf)`; `KyFan(1)` coincides with the operator
/// norm and `KyFan(n)` with the trace norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    /// Sum of the k largest singular values, `1 <= k <= min(rows, cols)`.
    KyFan(usize),
    /// `(sum s_j^p)^{1/p}` for `p >= 1`; `p = inf` gives the operator norm.
    Schatten(f64),
    Trace,
    HilbertSchmidt,
    Operator,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::KyFan(k) => write!(f, "kyfan:{k}"),
            NormKind::Schatten(p) => {
                if p.is_infinite() {
                    write!(f, "schatten:inf")
                } else {
                    write!(f, "schatten:{p}")
                }
            }
            NormKind::Trace => write!(f, "trace"),
            NormKind::HilbertSchmidt => write!(f, "hs"),
            NormKind::Operator => write!(f, "operator"),
        }
    }
}

impl NormKind {
    /// Parses the textual form produced by `Display`.
    pub fn parse(s: &str) -> Result<NormKind> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("kyfan:") {
            let k: usize = rest
                .parse()
                .map_err(|_| Error::invalid(format!("bad Ky Fan index in '{s}'")))?;
            return Ok(NormKind::KyFan(k));
        }
        if let Some(rest) = lower.strip_prefix("schatten:") {
            if rest == "inf" {
                return Ok(NormKind::Schatten(f64::INFINITY));
            }
            let p: f64 = rest
                .parse()
                .map_err(|_| Error::invalid(format!("bad Schatten exponent in '{s}'")))?;
            return Ok(NormKind::Schatten(p));
        }
        match lower.as_str() {
            "trace" => Ok(NormKind::Trace),
            "hs" | "hilbert-schmidt" | "frobenius" => Ok(NormKind::HilbertSchmidt),
            "operator" | "spectral" => Ok(NormKind::Operator),
            _ => Err(Error::invalid(format!("unknown norm '{s}'"))),
        }
    }

    /// The diagnostic sweep used by the inequality suites: every Ky Fan norm
    /// for the given order plus Schatten p in {1, 1.5, 2, 3, inf}.
    pub fn standard_sweep(order: usize) -> Vec<NormKind> {
        let mut v: Vec<NormKind> = (1..=order).map(NormKind::KyFan).collect();
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            v.push(NormKind::Schatten(p));
        }
        v
    }

    fn validate(&self, count: usize) -> Result<()> {
        match self {
            NormKind::KyFan(k) => {
                if *k == 0 || *k > count {
                    return Err(Error::invalid(format!(
                        "Ky Fan index {k} out of range 1..={count}"
                    )));
                }
            }
            NormKind::Schatten(p) => {
                if p.is_nan() || *p < 1.0 {
                    return Err(Error::invalid(format!(
                        "Schatten exponent must be >= 1, got {p}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Evaluates the norm on a precomputed descending singular-value vector.
    pub fn of_singular_values(&self, sv: &[f64]) -> Result<f64> {
        self.validate(sv.len())?;
        Ok(match self {
            NormKind::KyFan(k) => sv[..*k].iter().sum(),
            NormKind::Trace => sv.iter().sum(),
            NormKind::HilbertSchmidt => sv.iter().map(|s| s * s).sum::<f64>().sqrt(),
            NormKind::Operator => sv.first().copied().unwrap_or(0.0),
            NormKind::Schatten(p) => {
                if p.is_infinite() {
                    sv.first().copied().unwrap_or(0.0)
                } else if *p == 1.0 {
                    sv.iter().sum()
                } else if *p == 2.0 {
                    sv.iter().map(|s| s * s).sum::<f64>().sqrt()
                } else {
                    // Factor out the largest value so powers stay in range.
                    let top = sv.first().copied().unwrap_or(0.0);
                    if top == 0.0 {
                        0.0
                    } else {
                        let sum: f64 = sv.iter().map(|s| (s / top).powf(*p)).sum();
                        top * sum.powf(1.0 / p)
                    }
                }
            }
        })
    }
}

/// Evaluates a unitarily invariant norm of a matrix.
pub fn norm(m: &ComplexMatrix, kind: NormKind, tols: &Tolerances) -> Result<f64> {
    let sv = singular_values(m, tols)?;
    kind.of_singular_values(&sv)
}

/// Result of a Fan-dominance comparison: `holds` is true when every Ky Fan
/// norm of `X` stays below the one of `Y` within the anchored tolerance;
/// `margins[k-1]` is the raw gap `KyFan_k(Y) - KyFan_k(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FanDominance {
    pub holds: bool,
    pub margins: Vec<f64>,
}

/// Checks `|||X||| <= |||Y|||` for every unitarily invariant norm by sweeping
/// all Ky Fan norms of the common order.
pub fn fan_dominates(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: f64,
    tols: &Tolerances,
) -> Result<FanDominance> {
    x.check_same_shape(y)?;
    let sx = singular_values(x, tols)?;
    let sy = singular_values(y, tols)?;
    let mut margins = Vec::with_capacity(sx.len());
    let mut holds = true;
    let mut acc_x = 0.0;
    let mut acc_y = 0.0;
    for (a, b) in sx.iter().zip(&sy) {
        acc_x += a;
        acc_y += b;
        let margin = acc_y - acc_x;
        if margin < -tol * acc_y.abs().max(1.0) {
            holds = false;
        }
        margins.push(margin);
    }
    Ok(FanDominance { holds, margins })
}
