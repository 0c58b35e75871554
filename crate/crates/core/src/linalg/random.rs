use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, Hermitian, Spectrum, Unitary};
use crate::error::Result;

/// Complex Gaussian `(N(0,1) + i N(0,1)) / sqrt 2`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Householder QR of a square matrix. Returns `(Q, R)` with `A = QR`.
pub fn qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.nrows();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let norm_x = libm::sqrt((k..n).map(|i| r[(i, k)].norm_sqr()).sum());
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        let mut w: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        w[0] -= alpha;
        let wn = libm::sqrt(w.iter().map(|z| z.norm_sqr()).sum());
        if wn == 0.0 {
            continue;
        }
        for z in &mut w {
            *z /= wn;
        }
        // R <- (I - 2 w w^*) R on rows k..n
        for c in 0..n {
            let dot: Complex64 = w
                .iter()
                .enumerate()
                .map(|(j, wj)| wj.conj() * r[(k + j, c)])
                .sum();
            for (j, wj) in w.iter().enumerate() {
                r[(k + j, c)] -= *wj * dot * 2.0;
            }
        }
        // Q <- Q (I - 2 w w^*) on columns k..n
        for row in 0..n {
            let dot: Complex64 = w
                .iter()
                .enumerate()
                .map(|(j, wj)| q[(row, k + j)] * wj)
                .sum();
            for (j, wj) in w.iter().enumerate() {
                q[(row, k + j)] -= dot * wj.conj() * 2.0;
            }
        }
    }
    (q, r)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix, with the phases
/// of `diag R` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Unitary {
    let z = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let (q, r) = qr(&z);
    let phases: Vec<Complex64> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    Unitary::new_unchecked(ComplexMatrix::from_fn(n, n, |row, c| {
        q[(row, c)] * phases[c]
    }))
}

/// `U diag(λ) U^*` for a Haar-random `U`.
pub fn random_orbit_point<R: Rng + ?Sized>(lambda: &Spectrum, rng: &mut R) -> Result<Hermitian> {
    let u = haar_unitary(lambda.len(), rng);
    Hermitian::from_real_diagonal(lambda.values()).conjugate(&u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::unitarity_defect;
    use crate::seed::Seed;

    #[test]
    fn qr_reconstructs() {
        let mut rng = Seed(7).rng();
        let a = ComplexMatrix::from_fn(5, 5, |_, _| complex_gaussian(&mut rng));
        let (q, r) = qr(&a);
        assert!(unitarity_defect(&q) < 1e-14);
        assert!(q.matmul(&r).sub(&a).max_abs() < 1e-13);
        for row in 1..5 {
            for c in 0..row {
                assert!(r[(row, c)].norm() < 1e-13);
            }
        }
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = Seed(11).rng();
        for n in 1..8 {
            let u = haar_unitary(n, &mut rng);
            assert!(unitarity_defect(u.matrix()) < 1e-13);
        }
    }
}
