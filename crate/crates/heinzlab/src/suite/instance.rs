use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::rand::{
    derive_seed, param_rng, random_diagonal_general, random_diagonal_pd, random_general,
    random_hermitian, random_pd,
};
use crate::linalg::{ComplexMatrix, HermitianPD};
use crate::tol::Tolerances;

/// How the carrier `X` (and for `Diagonal`, the whole triple) is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XKind {
    /// Complex Gaussian `X`, random positive definite `A` and `B`.
    General,
    /// Hermitian `X = (G + G*)/2`.
    Hermitian,
    /// `X = I`.
    Identity,
    /// Fully commuting instance: `A`, `B`, and `X` all diagonal, so every
    /// matrix check reduces to its scalar analogue entrywise.
    Diagonal,
}

impl fmt::Display for XKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            XKind::General => "general",
            XKind::Hermitian => "hermitian",
            XKind::Identity => "identity",
            XKind::Diagonal => "diagonal",
        };
        f.write_str(s)
    }
}

impl XKind {
    pub fn parse(s: &str) -> Result<XKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "general" => Ok(XKind::General),
            "hermitian" => Ok(XKind::Hermitian),
            "identity" => Ok(XKind::Identity),
            "diagonal" => Ok(XKind::Diagonal),
            other => Err(Error::invalid(format!("unknown x-kind '{other}'"))),
        }
    }
}

/// Deterministic description of a random test instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub order: usize,
    pub seed: u64,
    pub cond_cap: f64,
    pub x_kind: XKind,
}

impl InstanceSpec {
    pub fn new(order: usize, seed: u64, cond_cap: f64, x_kind: XKind) -> Self {
        InstanceSpec {
            order,
            seed,
            cond_cap,
            x_kind,
        }
    }
}

/// Materialized instance: the positive definite pair and the carrier.
#[derive(Debug, Clone)]
pub struct Instance {
    pub a: HermitianPD,
    pub b: HermitianPD,
    pub x: ComplexMatrix,
}

// Sub-seed roles so A, B, X and scalar parameters never share a stream.
const ROLE_A: u64 = 1;
const ROLE_B: u64 = 2;
const ROLE_X: u64 = 3;
pub(crate) const ROLE_PARAMS: u64 = 4;
const ROLE_SCALAR: u64 = 5;

impl InstanceSpec {
    pub fn materialize(&self, tols: &Tolerances) -> Result<Instance> {
        if self.order == 0 {
            return Err(Error::invalid("instance order must be >= 1"));
        }
        let seed_a = derive_seed(self.seed, ROLE_A);
        let seed_b = derive_seed(self.seed, ROLE_B);
        let seed_x = derive_seed(self.seed, ROLE_X);
        match self.x_kind {
            XKind::Diagonal => Ok(Instance {
                a: random_diagonal_pd(self.order, seed_a, self.cond_cap, tols)?,
                b: random_diagonal_pd(self.order, seed_b, self.cond_cap, tols)?,
                x: random_diagonal_general(self.order, seed_x),
            }),
            kind => {
                let a = random_pd(self.order, seed_a, self.cond_cap, tols)?;
                let b = random_pd(self.order, seed_b, self.cond_cap, tols)?;
                let x = match kind {
                    XKind::General => random_general(self.order, seed_x),
                    XKind::Hermitian => random_hermitian(self.order, seed_x),
                    XKind::Identity => ComplexMatrix::identity(self.order),
                    XKind::Diagonal => unreachable!(),
                };
                Ok(Instance { a, b, x })
            }
        }
    }

    /// Scalar parameter for scalar-only checks: log-uniform in
    /// `[1/cond_cap, cond_cap]`, deterministic in the seed.
    pub fn scalar_x(&self) -> f64 {
        let mut rng = param_rng(self.seed, ROLE_SCALAR);
        let span = self.cond_cap.max(1.0 + 1e-12).ln();
        (crate::linalg::rand::uniform_in(&mut rng, -span, span)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn materialize_is_deterministic() {
        let tols = Tolerances::default();
        let spec = InstanceSpec::new(3, 42, 1e3, XKind::General);
        let i1 = spec.materialize(&tols).unwrap();
        let i2 = spec.materialize(&tols).unwrap();
        assert_eq!(i1.a.matrix(), i2.a.matrix());
        assert_eq!(i1.b.matrix(), i2.b.matrix());
        assert_eq!(i1.x, i2.x);
        // A and B come from distinct streams.
        assert_ne!(i1.a.matrix(), i1.b.matrix());
    }

    #[test]
    fn diagonal_instances_commute() {
        let tols = Tolerances::default();
        let spec = InstanceSpec::new(4, 7, 100.0, XKind::Diagonal);
        let inst = spec.materialize(&tols).unwrap();
        let ab = inst.a.matrix().matmul(inst.b.matrix()).unwrap();
        let ba = inst.b.matrix().matmul(inst.a.matrix()).unwrap();
        assert!(ab.sub(&ba).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn identity_x_kind() {
        let tols = Tolerances::default();
        let spec = InstanceSpec::new(2, 1, 10.0, XKind::Identity);
        let inst = spec.materialize(&tols).unwrap();
        assert_eq!(inst.x, ComplexMatrix::identity(2));
    }

    #[test]
    fn scalar_x_in_range() {
        let spec = InstanceSpec::new(2, 5, 1e4, XKind::General);
        let x = spec.scalar_x();
        assert!(x >= 1e-4 && x <= 1e4);
        assert_eq!(x, spec.scalar_x());
    }

    #[test]
    fn x_kind_round_trip() {
        for kind in [XKind::General, XKind::Hermitian, XKind::Identity, XKind::Diagonal] {
            assert_eq!(XKind::parse(&kind.to_string()).unwrap(), kind);
        }
        assert!(XKind::parse("banded").is_err());
    }
}
