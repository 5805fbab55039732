use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::tol::Tolerances;

/// Eigenvalues and eigenvectors of a Hermitian matrix.
///
/// Eigenvalues are ascending; the columns of `vectors` are the matching
/// orthonormal eigenvectors, so `H = U diag(eigenvalues) U*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Reassembles `U f(lambda) U*` for a scalar map applied to the spectrum.
    /// Returns an error if the map produces a non-finite value, naming the
    /// offending eigenvalue.
    pub fn assemble(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let n = self.order();
        let mut mapped = Vec::with_capacity(n);
        for &lambda in &self.eigenvalues {
            let v = f(lambda);
            if !v.is_finite() {
                return Err(Error::domain(format!(
                    "scalar map undefined at eigenvalue {lambda}"
                )));
            }
            mapped.push(v);
        }
        let u = &self.vectors;
        // U diag(mapped) U*, assembled directly to keep the result Hermitian.
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &fv) in mapped.iter().enumerate() {
                    acc += u.get(i, k) * fv * u.get(j, k).conj();
                }
                out.set(i, j, acc);
                if i != j {
                    out.set(j, i, acc.conj());
                } else {
                    out.set(i, i, Complex64::new(acc.re, 0.0));
                }
            }
        }
        Ok(out)
    }

    /// `||U diag(lambda) U* - H||_F`, the reconstruction residual.
    pub fn reconstruction_residual(&self, h: &ComplexMatrix) -> f64 {
        match self.assemble(|t| t) {
            Ok(rec) => match rec.sub(h) {
                Ok(d) => d.frobenius_norm(),
                Err(_) => f64::INFINITY,
            },
            Err(_) => f64::INFINITY,
        }
    }

    /// `||U* U - I||_F`, the unitarity residual.
    pub fn unitarity_residual(&self) -> f64 {
        let u = &self.vectors;
        let gram = u.adjoint().matmul(u).expect("square");
        let id = ComplexMatrix::identity(self.order());
        gram.sub(&id).expect("same shape").frobenius_norm()
    }
}

fn offdiag_frobenius(h: &ComplexMatrix) -> f64 {
    let n = h.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += h.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi sweeps.
///
/// Rejects non-square or non-Hermitian input. Fails with a numerical error
/// naming the residual if the off-diagonal mass has not dropped below
/// `eig_offdiag * ||H||_F` after `eig_max_sweeps` sweeps.
pub fn hermitian_eig(h: &ComplexMatrix, tols: &Tolerances) -> Result<SpectralDecomposition> {
    h.check_square()?;
    let res = h.hermitian_residual();
    let scale = 1.0 + h.max_norm();
    if res > tols.hermitian_check * scale {
        return Err(Error::invalid(format!(
            "matrix is not Hermitian: residual {res:.3e} exceeds {:.3e}",
            tols.hermitian_check * scale
        )));
    }

    let n = h.rows();
    let mut a = h.hermitize();
    let mut u = ComplexMatrix::identity(n);
    if n == 1 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![a.get(0, 0).re],
            vectors: u,
        });
    }

    let threshold = tols.eig_offdiag * a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut converged = offdiag_frobenius(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < tols.eig_max_sweeps {
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut u, p, q);
            }
        }
        sweeps += 1;
        converged = offdiag_frobenius(&a) <= threshold;
    }
    if !converged {
        return Err(Error::numerical(format!(
            "jacobi eigensolver did not converge: off-diagonal residual {:.3e} \
             after {sweeps} sweeps (threshold {threshold:.3e})",
            offdiag_frobenius(&a)
        )));
    }

    // Sort ascending, permuting eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    let eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| eigs[i].partial_cmp(&eigs[j]).expect("finite"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigs[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, new_col, u.get(row, old_col));
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        vectors,
    })
}

/// One complex Jacobi rotation zeroing the (p, q) entry.
///
/// With h = |h| e^{i phi} the 2x2 block diag(1, e^{-i phi}) reduces to a real
/// symmetric problem, which the classic tangent formula diagonalizes.
fn rotate(a: &mut ComplexMatrix, u: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.rows();
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let phase = apq / r; // e^{i phi}

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column rotation: col_p <- c*col_p - s*conj(phase)*col_q,
    //                  col_q <- s*phase*col_p + c*col_q  (old values).
    let sp = s * phase; // s e^{i phi}
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * sp.conj());
        a.set(k, q, akp * sp + akq * c);
    }
    // Row rotation with the conjugate coefficients.
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * sp);
        a.set(q, k, apk * sp.conj() + aqk * c);
    }
    // The targeted entries are zero by construction; pin them and keep the
    // diagonal real to stop rounding drift.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(app - t * r, 0.0));
    a.set(q, q, Complex64::new(aqq + t * r, 0.0));

    for k in 0..n {
        let ukp = u.get(k, p);
        let ukq = u.get(k, q);
        u.set(k, p, ukp * c - ukq * sp.conj());
        u.set(k, q, ukp * sp + ukq * c);
    }
}

/// Singular values in descending order, via the spectrum of `M* M`.
///
/// Tiny negative eigenvalues of the Gram matrix (down to
/// `-sv_clamp * ||M||_F^2`) clamp to zero; anything more negative is reported
/// as a numerical error.
pub fn singular_values(m: &ComplexMatrix, tols: &Tolerances) -> Result<Vec<f64>> {
    let gram = m.adjoint().matmul(m)?;
    let spec = hermitian_eig(&gram, tols)?;
    let scale = m.frobenius_norm().powi(2);
    let floor = -tols.sv_clamp * scale.max(1.0);
    let mut vals = Vec::with_capacity(spec.eigenvalues.len());
    for &lambda in &spec.eigenvalues {
        if lambda < floor {
            return Err(Error::numerical(format!(
                "gram matrix eigenvalue {lambda:.3e} below clamp floor {floor:.3e}"
            )));
        }
        vals.push(lambda.max(0.0).sqrt());
    }
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    vals.truncate(m.rows().min(m.cols()));
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rand::{random_general, random_hermitian, random_unitary};

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_order_3() {
        let spec = hermitian_eig(&ComplexMatrix::identity(3), &tols()).unwrap();
        for &l in &spec.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
        assert!(spec.unitarity_residual() < 1e-10);
        assert!(spec.reconstruction_residual(&ComplexMatrix::identity(3)) < 1e-10);
    }

    #[test]
    fn diagonal_sorted_ascending() {
        let h = ComplexMatrix::diagonal(&[3.0, 1.0, 2.0]);
        let spec = hermitian_eig(&h, &tols()).unwrap();
        assert_eq!(spec.eigenvalues.len(), 3);
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 2.0).abs() < 1e-14);
        assert!((spec.eigenvalues[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_matches_characteristic_roots() {
        // Independent oracle: eigenvalues of a 2x2 Hermitian matrix are the
        // roots of lambda^2 - tr lambda + det with real tr and det.
        let h = random_hermitian(2, 7);
        let tr = h.get(0, 0).re + h.get(1, 1).re;
        let det = h.get(0, 0).re * h.get(1, 1).re - h.get(0, 1).norm_sqr();
        let disc = (tr * tr - 4.0 * det).sqrt();
        let lo = (tr - disc) / 2.0;
        let hi = (tr + disc) / 2.0;

        let spec = hermitian_eig(&h, &tols()).unwrap();
        assert!((spec.eigenvalues[0] - lo).abs() < 1e-12);
        assert!((spec.eigenvalues[1] - hi).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eig(&m, &tols()),
            Err(Error::Invalid(_))
        ));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(hermitian_eig(&rect, &tols()).is_err());
    }

    #[test]
    fn singular_values_of_unitary_are_ones() {
        let u = random_unitary(4, 3);
        let sv = singular_values(&u, &tols()).unwrap();
        for &s in &sv {
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn singular_values_of_signed_diagonal() {
        let m = ComplexMatrix::diagonal(&[3.0, -4.0]);
        let sv = singular_values(&m, &tols()).unwrap();
        assert!((sv[0] - 4.0).abs() < 1e-12);
        assert!((sv[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn singular_values_match_gram_spectrum() {
        let m = random_general(4, 11);
        let sv = singular_values(&m, &tols()).unwrap();
        let gram = m.adjoint().matmul(&m).unwrap();
        let mut expected: Vec<f64> = hermitian_eig(&gram, &tols())
            .unwrap()
            .eigenvalues
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .collect();
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (s, e) in sv.iter().zip(&expected) {
            assert!((s - e).abs() < 1e-10);
        }
    }

    #[test]
    fn singular_values_invariant_under_unitaries() {
        let m = random_general(5, 21);
        let u = random_unitary(5, 22);
        let v = random_unitary(5, 23);
        let rotated = u.matmul(&m).unwrap().matmul(&v).unwrap();
        let s1 = singular_values(&m, &tols()).unwrap();
        let s2 = singular_values(&rotated, &tols()).unwrap();
        for (a, b) in s1.iter().zip(&s2) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn reconstruction_on_random_hermitian() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 8);
            let h = random_hermitian(n, 100 + seed);
            let spec = hermitian_eig(&h, &tols()).unwrap();
            let scale = 1.0 + h.frobenius_norm();
            assert!(spec.reconstruction_residual(&h) <= 1e-10 * scale);
            assert!(spec.unitarity_residual() <= 1e-10);
            for w in spec.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }
}
