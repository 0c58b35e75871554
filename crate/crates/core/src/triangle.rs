//! Gelfand-Cetlin triangles and the momentum map.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, Complex64, ComplexMatrix, Hermitian, Spectrum, Unitary};

/// Default relative tolerance under which two momentum values are snapped together.
pub const DEFAULT_SNAP_TOLERANCE: f64 = 1e-8;

/// Entry `(i, k)` of a triangle: the `i`-th largest eigenvalue of the leading
/// `k x k` block. Both indices are 1-based, `1 <= i <= k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrianglePosition {
    pub k: usize,
    pub i: usize,
}

impl TrianglePosition {
    pub const fn new(i: usize, k: usize) -> Self {
        Self { k, i }
    }
}

/// Rows `1..=n` of interlacing eigenvalues. Row `n` is the orbit spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct GcTriangle {
    rows: Vec<Vec<f64>>,
}

impl GcTriangle {
    /// Checks shape and finiteness only. Use [`validate_triangle`] for the inequalities.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        for (idx, row) in rows.iter().enumerate() {
            if row.len() != idx + 1 {
                return Err(Error::MalformedTriangle {
                    row: idx + 1,
                    expected: idx + 1,
                    found: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { rows })
    }

    /// Momentum rows `1..n-1` followed by the spectrum as row `n`.
    pub fn from_parts(lambda: &[f64], upper_rows: &[Vec<f64>]) -> Result<Self> {
        let mut rows = upper_rows.to_vec();
        rows.push(lambda.to_vec());
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Row `k`, 1-based.
    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k - 1]
    }

    pub fn lambda(&self) -> &[f64] {
        &self.rows[self.rows.len() - 1]
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::new(self.lambda().to_vec())
    }

    pub fn get(&self, p: TrianglePosition) -> f64 {
        self.rows[p.k - 1][p.i - 1]
    }

    pub fn set(&mut self, p: TrianglePosition, value: f64) {
        self.rows[p.k - 1][p.i - 1] = value;
    }

    pub fn contains(&self, p: TrianglePosition) -> bool {
        p.k >= 1 && p.k <= self.n() && p.i >= 1 && p.i <= p.k
    }

    /// All positions, row by row.
    pub fn positions(&self) -> impl Iterator<Item = TrianglePosition> + '_ {
        (1..=self.n()).flat_map(|k| (1..=k).map(move |i| TrianglePosition::new(i, k)))
    }

    /// Largest entrywise difference, or `None` when the sizes differ.
    pub fn max_abs_diff(&self, other: &GcTriangle) -> Option<f64> {
        if self.n() != other.n() {
            return None;
        }
        Some(
            self.rows
                .iter()
                .flatten()
                .zip(other.rows.iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }

    /// `λ_1 - λ_n`.
    pub fn spread(&self) -> f64 {
        let l = self.lambda();
        l[0] - l[l.len() - 1]
    }
}

/// One broken inequality `value(lower) <= value(upper)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Violation {
    /// Entry that should be the smaller of the two.
    pub lower: TrianglePosition,
    /// Entry that should be the larger of the two.
    pub upper: TrianglePosition,
    pub amount: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriangleValidation {
    pub violations: Vec<Violation>,
}

impl TriangleValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidTriangle {
                position: v.lower,
                amount: v.amount,
            }),
        }
    }
}

/// Checks row monotonicity and interlacing, each within `tol`.
pub fn validate_triangle(t: &GcTriangle, tol: f64) -> TriangleValidation {
    let mut violations = Vec::new();
    let mut check = |lower: TrianglePosition, upper: TrianglePosition| {
        let amount = t.get(lower) - t.get(upper);
        if amount > tol || amount.is_nan() {
            violations.push(Violation {
                lower,
                upper,
                amount,
            });
        }
    };
    let n = t.n();
    for k in 1..=n {
        for i in 1..k {
            check(TrianglePosition::new(i + 1, k), TrianglePosition::new(i, k));
        }
        if k < n {
            for i in 1..=k {
                let here = TrianglePosition::new(i, k);
                check(here, TrianglePosition::new(i, k + 1));
                check(TrianglePosition::new(i + 1, k + 1), here);
            }
        }
    }
    TriangleValidation { violations }
}

/// Leading principal `k x k` block.
pub fn leading_principal(a: &Hermitian, k: usize) -> Result<Hermitian> {
    a.leading(k)
}

/// Row `k` = descending eigenvalues of `A_k`, without snapping.
pub fn momentum_map_raw(a: &Hermitian) -> Result<GcTriangle> {
    let n = a.size();
    let mut rows = Vec::with_capacity(n);
    for k in 1..=n {
        rows.push(eigenvalues(&a.leading(k)?)?.values().to_vec());
    }
    GcTriangle::new(rows)
}

/// Momentum map with near-equal entries snapped at [`DEFAULT_SNAP_TOLERANCE`].
pub fn momentum_map(a: &Hermitian) -> Result<GcTriangle> {
    momentum_map_with(a, DEFAULT_SNAP_TOLERANCE)
}

pub fn momentum_map_with(a: &Hermitian, eps_eq: f64) -> Result<GcTriangle> {
    Ok(snap_to_pattern(&momentum_map_raw(a)?, eps_eq))
}

/// Sets entries closer than `eps_eq` times the spectrum spread exactly equal
/// (single-linkage clusters replaced by their mean), then clamps each row into
/// the interval allowed by the row below it.
pub fn snap_to_pattern(t: &GcTriangle, eps_eq: f64) -> GcTriangle {
    let lambda = t.lambda();
    let spread = t.spread();
    let scale = if spread > 0.0 {
        spread
    } else {
        lambda[0].abs().max(1.0)
    };
    let tol = eps_eq * scale;

    let mut entries: Vec<(f64, TrianglePosition)> = t.positions().map(|p| (t.get(p), p)).collect();
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = t.clone();
    let mut start = 0;
    while start < entries.len() {
        let mut end = start + 1;
        while end < entries.len() && entries[end].0 - entries[end - 1].0 <= tol {
            end += 1;
        }
        if end - start > 1 {
            let mean = entries[start..end].iter().map(|e| e.0).sum::<f64>() / (end - start) as f64;
            let lo = entries[start].0;
            let hi = entries[end - 1].0;
            let rep = mean.clamp(lo, hi);
            for e in &entries[start..end] {
                out.set(e.1, rep);
            }
        }
        start = end;
    }

    let n = out.n();
    for k in (1..n).rev() {
        for i in 1..=k {
            let hi = out.get(TrianglePosition::new(i, k + 1));
            let lo = out.get(TrianglePosition::new(i + 1, k + 1));
            let p = TrianglePosition::new(i, k);
            let v = out.get(p);
            out.set(p, v.clamp(lo, hi));
        }
    }
    out
}

/// Eigenvalue map from the flag side: row `k` holds the eigenvalues of the
/// leading block of `C D_λ C^*` where `C = C_star^*`. Needs `λ_n > 0`.
pub fn gamma_lambda(c_star: &Unitary, lambda: &Spectrum) -> Result<GcTriangle> {
    let n = lambda.len();
    if c_star.size() != n {
        return Err(Error::SizeMismatch {
            left: c_star.size(),
            right: n,
        });
    }
    let smallest = lambda.values()[n - 1];
    if smallest <= 0.0 {
        return Err(Error::NonPositiveSpectrum { smallest });
    }
    let u = c_star.matrix();
    let lam = lambda.values();
    let mut rows = Vec::with_capacity(n);
    for k in 1..=n {
        // Gram matrix of D_λ on the span of the first k columns of C_star.
        let g = ComplexMatrix::from_fn(k, k, |r, c| {
            (0..n)
                .map(|m| u[(m, r)].conj() * u[(m, c)] * lam[m])
                .sum::<Complex64>()
        });
        rows.push(eigenvalues(&Hermitian::new(&g)?)?.values().to_vec());
    }
    GcTriangle::new(rows)
}
