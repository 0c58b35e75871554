use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::SizeMismatch {
                    left: cols,
                    right: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    /// Matrix product. Panics if the inner dimensions differ.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let out_row = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length differs");
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shapes differ"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shapes differ"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Top-left `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        assert!(k <= self.rows && k <= self.cols, "block larger than matrix");
        Self::from_fn(k, k, |r, c| self[(r, c)])
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

/// Dense real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::SizeMismatch {
                    left: rows,
                    right: col.len(),
                });
            }
            for (r, &x) in col.iter().enumerate() {
                m[(r, c)] = x;
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

/// Hermitian matrix. Construction symmetrizes, so rounding noise in the input is removed.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian(ComplexMatrix);

impl Hermitian {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = m.nrows();
        let h = ComplexMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(m[(r, r)].re, 0.0)
            } else {
                (m[(r, c)] + m[(c, r)].conj()) * 0.5
            }
        });
        Ok(Self(h))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Leading principal `k x k` block, for `1 <= k <= size`.
    pub fn leading(&self, k: usize) -> Result<Hermitian> {
        if k == 0 || k > self.size() {
            return Err(Error::OutOfRange {
                index: k,
                min: 1,
                max: self.size(),
            });
        }
        Ok(Self(self.0.leading_block(k)))
    }

    /// `U A U^*`, re-symmetrized.
    pub fn conjugate(&self, u: &Unitary) -> Result<Hermitian> {
        if u.size() != self.size() {
            return Err(Error::SizeMismatch {
                left: self.size(),
                right: u.size(),
            });
        }
        let m = u.matrix().matmul(&self.0).matmul(&u.matrix().adjoint());
        Hermitian::new(&m)
    }
}

/// Skew-Hermitian matrix, an element of the Lie algebra `u(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewHermitian(ComplexMatrix);

impl SkewHermitian {
    /// Projects onto the skew-Hermitian part `(M - M^*) / 2`.
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = m.nrows();
        let s = ComplexMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(0.0, m[(r, r)].im)
            } else {
                (m[(r, c)] - m[(c, r)].conj()) * 0.5
            }
        });
        Ok(Self(s))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// Zero-pads to `n x n` with `self` in the top-left corner.
    pub fn embed(&self, n: usize) -> Result<SkewHermitian> {
        Ok(Self(embed_block(&self.0, n)?))
    }
}

/// Tolerance on `||U^* U - I||_max` accepted by [`Unitary::new`].
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// Unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary(ComplexMatrix);

impl Unitary {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = unitarity_defect(&m);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `U ⊕ I`, padded to `n x n`.
    pub fn embed(&self, n: usize) -> Result<Unitary> {
        let mut m = embed_block(&self.0, n)?;
        for i in self.size()..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(Self(m))
    }
}

/// `||M^* M - I||_max`.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    m.adjoint()
        .matmul(m)
        .sub(&ComplexMatrix::identity(m.nrows()))
        .max_abs()
}

/// Places a `k x k` matrix in the top-left corner of an `n x n` zero matrix.
pub fn embed_block(m: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let k = m.nrows();
    if k > n {
        return Err(Error::OutOfRange {
            index: k,
            min: 0,
            max: n,
        });
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..k {
        for c in 0..k {
            out[(r, c)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// `[X, Y] = XY - YX`.
pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::NotSquare {
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    if !y.is_square() {
        return Err(Error::NotSquare {
            rows: y.nrows(),
            cols: y.ncols(),
        });
    }
    if x.nrows() != y.nrows() {
        return Err(Error::SizeMismatch {
            left: x.nrows(),
            right: y.nrows(),
        });
    }
    Ok(x.matmul(y).sub(&y.matmul(x)))
}

/// Eigenvalues sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Accepts a finite, non-empty, descending list.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(index) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::NotDescending { index: index + 1 });
        }
        Ok(Self(values))
    }

    /// Sorts into descending order first.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicities of exactly repeated values, in order of appearance.
    pub fn multiplicities(&self) -> Vec<usize> {
        exact_multiplicities(&self.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Sizes of runs of exactly equal values in a sorted list.
pub(crate) fn exact_multiplicities(sorted: &[f64]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (idx, v) in sorted.iter().enumerate() {
        if idx > 0 && sorted[idx - 1] == *v {
            *out.last_mut().expect("non-empty after first entry") += 1;
        } else {
            out.push(1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_symmetrizes() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.3), c(2.0, 1.0)],
            vec![c(2.0, -0.8), c(3.0, 0.0)],
        ])
        .unwrap();
        let h = Hermitian::new(&m).unwrap();
        let hm = h.matrix();
        assert_eq!(hm[(0, 0)], c(1.0, 0.0));
        assert_eq!(hm[(0, 1)], c(2.0, 0.9));
        assert_eq!(hm[(1, 0)], c(2.0, -0.9));
    }

    #[test]
    fn commutator_rejects_mismatch() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert_eq!(
            commutator(&a, &b),
            Err(Error::SizeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn commutator_of_pauli_matrices() {
        let x = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let y = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let z = commutator(&x, &y).unwrap();
        assert_eq!(z[(0, 0)], c(0.0, 2.0));
        assert_eq!(z[(1, 1)], c(0.0, -2.0));
        assert_eq!(z[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn embed_block_pads_with_zeros() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        let e = embed_block(&m, 3).unwrap();
        assert_eq!(e[(1, 1)], c(2.0, 0.0));
        assert_eq!(e[(2, 2)], c(0.0, 0.0));
        assert!(embed_block(&e, 2).is_err());
    }

    #[test]
    fn unitary_check() {
        assert!(Unitary::new(ComplexMatrix::identity(3)).is_ok());
        assert!(matches!(
            Unitary::new(ComplexMatrix::from_real_diagonal(&[1.0, 2.0])),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn spectrum_ordering() {
        assert!(Spectrum::new(vec![3.0, 1.0, 1.0]).is_ok());
        assert_eq!(
            Spectrum::new(vec![1.0, 2.0]),
            Err(Error::NotDescending { index: 1 })
        );
        assert_eq!(Spectrum::new(vec![]), Err(Error::EmptySpectrum));
        let s = Spectrum::from_unsorted(vec![1.0, 3.0, 1.0]).unwrap();
        assert_eq!(s.values(), &[3.0, 1.0, 1.0]);
        assert_eq!(s.multiplicities(), vec![1, 2]);
    }
}
