//! Sharpness scan for the Heinz-vs-logarithmic-mean comparison: the bound
//! `H_nu(a, b) <= L(a, b)` holds exactly for `nu` in the closed interval with
//! endpoints `(sqrt(3) -+ 1) / (2 sqrt(3))`, so a grid scan must find
//! counterexamples outside it and none inside.

use crate::error::Result;
use crate::means::{heinz_scalar, log_mean};

/// Interval endpoints `((sqrt(3) - 1) / (2 sqrt(3)), (sqrt(3) + 1) / (2 sqrt(3)))`.
pub fn drissi_interval() -> (f64, f64) {
    let s = 3.0f64.sqrt();
    ((s - 1.0) / (2.0 * s), (s + 1.0) / (2.0 * s))
}

/// True when the Heinz weight lies inside the interval where the logarithmic
/// mean dominates.
pub fn inside_drissi_interval(nu: f64) -> bool {
    let (lo, hi) = drissi_interval();
    (lo..=hi).contains(&nu)
}

/// A grid point where the Heinz mean exceeds the logarithmic mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrissiViolation {
    pub a: f64,
    pub b: f64,
    pub heinz: f64,
    pub log_mean: f64,
    /// `heinz - log_mean`, positive for a violation.
    pub margin: f64,
}

/// The default ratio grid `2^k` for `k = -20..=20`.
pub fn default_ratio_grid() -> Vec<f64> {
    (-20..=20).map(|k| 2.0f64.powi(k)).collect()
}

/// Scans `(a, 1)` over the ratio grid for `H_nu(a, 1) > L(a, 1)` (both means
/// are homogeneous, so fixing `b = 1` loses nothing). Returns the first
/// violating grid point. A guard of `1e-12 * max(1, L)` keeps rounding noise
/// from counting as a violation.
pub fn scan_drissi(nu: f64, grid: &[f64]) -> Result<Option<DrissiViolation>> {
    if grid.is_empty() {
        return Err(crate::error::Error::invalid("empty scan grid"));
    }
    for &a in grid {
        let h = heinz_scalar(a, 1.0, nu)?;
        let l = log_mean(a, 1.0)?;
        let margin = h - l;
        if margin > 1e-12 * l.max(1.0) {
            return Ok(Some(DrissiViolation {
                a,
                b: 1.0,
                heinz: h,
                log_mean: l,
                margin,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_endpoints() {
        let (lo, hi) = drissi_interval();
        assert!((lo - 0.2113248654051871).abs() < 1e-12);
        assert!((hi - 0.7886751345948129).abs() < 1e-12);
        assert!((lo + hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_mean_never_violates() {
        assert!(scan_drissi(0.5, &default_ratio_grid()).unwrap().is_none());
    }

    #[test]
    fn just_outside_the_interval_violates() {
        let hit = scan_drissi(0.21, &default_ratio_grid()).unwrap();
        let v = hit.expect("0.21 lies outside the interval");
        assert!(v.margin > 0.0);
        assert!(v.heinz > v.log_mean);
    }

    #[test]
    fn inside_the_interval_stays_clean() {
        for nu in [0.2114, 0.25, 0.5, 0.75] {
            assert!(
                scan_drissi(nu, &default_ratio_grid()).unwrap().is_none(),
                "nu = {nu}"
            );
        }
    }

    #[test]
    fn endpoints_at_zero_and_one_violate_strongly() {
        // At nu = 0 the Heinz mean is the arithmetic mean, which beats the
        // logarithmic mean for every a != b.
        let v = scan_drissi(0.0, &default_ratio_grid()).unwrap().unwrap();
        assert!(v.margin > 0.1);
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(scan_drissi(0.3, &[]).is_err());
    }
}
