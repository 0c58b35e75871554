use alloc::vec::Vec;

use super::matrix::RealMatrix;

const MAX_SWEEPS: usize = 80;
const ORTHOGONALITY_TOLERANCE: f64 = 1e-15;
/// Column pairs whose inner product is below `(NEGLIGIBLE * ||A||_F)^2` are left
/// alone; such rotations move singular values by far less than any rank cutoff.
const NEGLIGIBLE: f64 = 1e-14;

/// Singular values (descending) and matching right singular vectors.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// `right_vectors[j]` pairs with `singular_values[j]`.
    pub right_vectors: Vec<Vec<f64>>,
}

impl Svd {
    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values strictly above `cutoff`.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    /// Right singular vectors whose singular value is at most `cutoff`.
    pub fn null_space(&self, cutoff: f64) -> Vec<Vec<f64>> {
        self.singular_values
            .iter()
            .zip(&self.right_vectors)
            .filter(|(&s, _)| s <= cutoff)
            .map(|(_, v)| v.clone())
            .collect()
    }
}

/// One-sided Jacobi (Hestenes) SVD. Orthogonalizes the columns of `a` in place,
/// so the column norms become the singular values. Returns `ncols` values even
/// when `nrows < ncols`; the surplus ones are zero.
pub fn svd(a: &RealMatrix) -> Svd {
    let m = a.nrows();
    let d = a.ncols();
    let mut cols: Vec<Vec<f64>> = (0..d).map(|c| a.column(c)).collect();
    let mut v: Vec<Vec<f64>> = (0..d)
        .map(|c| {
            let mut e = alloc::vec![0.0; d];
            e[c] = 1.0;
            e
        })
        .collect();

    let fro2: f64 = cols.iter().flatten().map(|x| x * x).sum();
    let floor = NEGLIGIBLE * NEGLIGIBLE * fro2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..d {
            for j in i + 1..d {
                let alpha: f64 = cols[i].iter().map(|x| x * x).sum();
                let beta: f64 = cols[j].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if gamma.abs() <= ORTHOGONALITY_TOLERANCE * libm::sqrt(alpha * beta)
                    || gamma.abs() <= floor
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                rotate_pair(&mut left[i], &mut right[0], c, s, m);
                let (left, right) = v.split_at_mut(j);
                rotate_pair(&mut left[i], &mut right[0], c, s, d);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| libm::sqrt(c.iter().map(|x| x * x).sum()))
        .collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    Svd {
        singular_values: order.iter().map(|&i| norms[i]).collect(),
        right_vectors: order.iter().map(|&i| v[i].clone()).collect(),
    }
}

/// Singular values only, descending. Works on whichever of `A`, `A^T` has
/// fewer columns; the nonzero values agree and the rank is the same.
pub fn singular_values(a: &RealMatrix) -> Vec<f64> {
    if a.ncols() > a.nrows() {
        svd(&a.transpose()).singular_values
    } else {
        svd(a).singular_values
    }
}

fn rotate_pair(x: &mut [f64], y: &mut [f64], c: f64, s: f64, len: usize) {
    for k in 0..len {
        let a = x[k];
        let b = y[k];
        x[k] = c * a - s * b;
        y[k] = s * a + c * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rank_of_dependent_columns() {
        let a = RealMatrix::from_columns(
            3,
            &[
                vec![1.0, 2.0, 3.0],
                vec![2.0, 4.0, 6.0],
                vec![0.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        let s = svd(&a);
        assert_eq!(s.rank(1e-10 * s.largest()), 2);
        let null = s.null_space(1e-10 * s.largest());
        assert_eq!(null.len(), 1);
        let n = &null[0];
        // 2 e_0 - e_1 spans the kernel, up to scale.
        assert!((n[0] + 2.0 * n[1]).abs() < 1e-12);
        assert!(n[2].abs() < 1e-12);
    }

    #[test]
    fn transpose_gives_same_values() {
        let a = RealMatrix::from_columns(2, &[vec![1.0, 0.5], vec![2.0, -1.0], vec![0.0, 3.0]])
            .unwrap();
        let full = svd(&a).singular_values;
        let fast = singular_values(&a);
        assert_eq!(fast.len(), 2);
        for (x, y) in fast.iter().zip(&full) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn wide_matrix_has_zero_values() {
        let a = RealMatrix::from_columns(1, &[vec![3.0], vec![4.0]]).unwrap();
        let s = svd(&a);
        assert!((s.singular_values[0] - 5.0).abs() < 1e-14);
        assert!(s.singular_values[1].abs() < 1e-14);
    }
}
