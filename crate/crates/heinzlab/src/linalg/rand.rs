//! Seeded random matrix generation.
//!
//! All generators run on `ChaCha8`, a counter-based stream cipher RNG, so a
//! 64-bit seed reproduces the same matrix bit for bit on every platform.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::pd::HermitianPD;
use crate::tol::Tolerances;

/// Derives an independent sub-seed from `(seed, role)` with the splitmix64
/// finalizer, so nearby base seeds do not reuse each other's streams.
pub fn derive_seed(seed: u64, role: u64) -> u64 {
    let mut z = seed ^ role.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn standard_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Square matrix of independent standard complex Gaussians.
pub fn random_general(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng_for(seed);
    gaussian_from(&mut rng, n)
}

fn gaussian_from(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let entries = (0..n * n).map(|_| standard_complex(rng)).collect();
    ComplexMatrix::new(n, n, entries).expect("gaussian entries are finite")
}

/// Random Hermitian matrix `(G + G*)/2` from a seeded Gaussian `G`.
pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    random_general(n, seed).hermitize()
}

/// Haar-ish random unitary: Gaussian columns orthonormalized by modified
/// Gram-Schmidt.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng_for(seed);
    unitary_from(&mut rng, n)
}

fn unitary_from(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut m = gaussian_from(rng, n);
    for j in 0..n {
        loop {
            for k in 0..j {
                // proj = <col_k, col_j>
                let mut proj = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    proj += m.get(i, k).conj() * m.get(i, j);
                }
                for i in 0..n {
                    let v = m.get(i, j) - proj * m.get(i, k);
                    m.set(i, j, v);
                }
            }
            let norm = (0..n).map(|i| m.get(i, j).norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for i in 0..n {
                    let v = m.get(i, j) / norm;
                    m.set(i, j, v);
                }
                break;
            }
            // Degenerate column (vanishing probability): redraw it.
            for i in 0..n {
                m.set(i, j, standard_complex(rng));
            }
        }
    }
    m
}

/// Seeded random Hermitian positive definite matrix with a log-uniform
/// spectrum in `[1, cond_cap]`, assembled as `U diag(lambda) U*` from a
/// random unitary `U`. The spectrum construction bounds the condition number
/// by `cond_cap`.
pub fn random_pd(n: usize, seed: u64, cond_cap: f64, tols: &Tolerances) -> Result<HermitianPD> {
    if cond_cap < 1.0 {
        return Err(Error::invalid(format!(
            "cond_cap must be >= 1, got {cond_cap}"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("order must be >= 1"));
    }
    let mut rng = rng_for(seed);
    let log_cap = cond_cap.ln();
    let spectrum: Vec<f64> = (0..n)
        .map(|_| (rng.random::<f64>() * log_cap).exp())
        .collect();
    if n == 1 {
        return HermitianPD::new(ComplexMatrix::diagonal(&spectrum), tols);
    }
    let u = unitary_from(&mut rng, n);
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &lambda) in spectrum.iter().enumerate() {
                acc += u.get(i, k) * lambda * u.get(j, k).conj();
            }
            h.set(i, j, acc);
        }
    }
    HermitianPD::new(h.hermitize(), tols)
}

/// Diagonal positive definite matrix with a seeded log-uniform spectrum in
/// `[1, cond_cap]`; the commuting building block for scalar-reduction checks.
pub fn random_diagonal_pd(n: usize, seed: u64, cond_cap: f64, tols: &Tolerances) -> Result<HermitianPD> {
    if cond_cap < 1.0 {
        return Err(Error::invalid(format!(
            "cond_cap must be >= 1, got {cond_cap}"
        )));
    }
    let mut rng = rng_for(seed);
    let log_cap = cond_cap.ln();
    let spectrum: Vec<f64> = (0..n)
        .map(|_| (rng.random::<f64>() * log_cap).exp())
        .collect();
    HermitianPD::new(ComplexMatrix::diagonal(&spectrum), tols)
}

/// Diagonal matrix with standard complex Gaussian entries.
pub fn random_diagonal_general(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng_for(seed);
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, standard_complex(&mut rng));
    }
    m
}

/// Seeded uniform sample in `[lo, hi)`.
pub fn uniform_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// A fresh ChaCha stream for parameter sampling.
pub fn param_rng(seed: u64, role: u64) -> ChaCha8Rng {
    rng_for(derive_seed(seed, role))
}
