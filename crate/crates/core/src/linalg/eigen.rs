use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, Hermitian, SkewHermitian, Spectrum, Unitary};
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 50;
/// Stop once the off-diagonal Frobenius mass is below this fraction of `||A||_F`.
pub const JACOBI_RELATIVE_THRESHOLD: f64 = 1e-13;

/// Eigendecomposition `A = Q diag(spectrum) Q^*` with eigenvalues in descending order.
///
/// Cyclic complex Jacobi. Each rotation acts on the `(p, q)` plane with
/// `J_pp = J_qq = c`, `J_pq = s e^{iφ}`, `J_qp = -s e^{-iφ}` where `φ = arg a_pq`.
pub fn eig_hermitian(a: &Hermitian) -> Result<(Spectrum, Unitary)> {
    let n = a.size();
    if n == 0 {
        return Err(Error::EmptySpectrum);
    }
    let mut m = a.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_RELATIVE_THRESHOLD * m.frobenius_norm();

    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(y, y)].re.total_cmp(&m[(x, x)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let q = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((Spectrum::new(values)?, Unitary::new_unchecked(q)))
}

/// Eigenvalues only, descending.
pub fn eigenvalues(a: &Hermitian) -> Result<Spectrum> {
    eig_hermitian(a).map(|(s, _)| s)
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += m[(r, c)].norm_sqr();
            }
        }
    }
    libm::sqrt(acc)
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = m[(p, q)];
    let abs = g.norm();
    if abs == 0.0 {
        return;
    }
    let n = m.nrows();
    let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * abs);
    let root = libm::sqrt(1.0 + tau * tau);
    let t = if tau >= 0.0 {
        1.0 / (tau + root)
    } else {
        -1.0 / (-tau + root)
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;
    let e = g / abs;
    let jpq = e * s;
    let jqp = -e.conj() * s;

    // M <- M J
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * c;
    }
    // M <- J^* M
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c + mqk * jqp.conj();
        m[(q, k)] = mpk * jpq.conj() + mqk * c;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * c;
    }
}

/// `exp(S)` for skew-Hermitian `S`, through the eigendecomposition of `-iS`.
pub fn exp_skew(s: &SkewHermitian) -> Result<Unitary> {
    let n = s.size();
    let h = Hermitian::new(&s.matrix().scale(Complex64::new(0.0, -1.0)))?;
    let (spec, q) = eig_hermitian(&h)?;
    let qm = q.matrix();
    let phases: Vec<Complex64> = spec
        .values()
        .iter()
        .map(|&x| Complex64::new(libm::cos(x), libm::sin(x)))
        .collect();
    let scaled = ComplexMatrix::from_fn(n, n, |r, c| qm[(r, c)] * phases[c]);
    Ok(Unitary::new_unchecked(scaled.matmul(&qm.adjoint())))
}
