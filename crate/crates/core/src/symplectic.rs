//! Numerical checks on fiber points: tangent spaces from two constructions,
//! their rank, the symplectic pairing between them and the stabilizer dimensions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fiber::{commutant_basis, eigen_clusters, sample_fiber};
use crate::linalg::{
    commutator, singular_values, svd, Complex64, ComplexMatrix, Hermitian, RealMatrix,
    SkewHermitian,
};
use crate::pattern::{analyze, g_k_dims, u_lambda_dim, FiberClassification, TopologyDescriptor};
use crate::seed::Seed;
use crate::triangle::GcTriangle;

pub use crate::tolerance::ToleranceConfig;

/// Walk length per sample in [`full_report`], as a multiple of `n`.
pub const WALK_STEPS_PER_LEVEL: usize = 3;

/// A level-`k` symmetry `Y = Y_k ⊕ 0` and the orbit tangent vector `[Y, A]`.
#[derive(Clone, Debug)]
pub struct TangentGenerator {
    pub level: usize,
    pub y: SkewHermitian,
    /// `[Y, A]` in the coordinates of [`flatten_hermitian`].
    pub vector: Vec<f64>,
}

/// Diagonal, then `√2` times the real parts and the imaginary parts of the
/// strict upper triangle. Isometric for the Frobenius norm.
pub fn flatten_hermitian(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.nrows();
    let mut out = Vec::with_capacity(n * n);
    out.extend((0..n).map(|i| h[(i, i)].re));
    let s = core::f64::consts::SQRT_2;
    for r in 0..n {
        for c in r + 1..n {
            out.push(s * h[(r, c)].re);
        }
    }
    for r in 0..n {
        for c in r + 1..n {
            out.push(s * h[(r, c)].im);
        }
    }
    out
}

/// `ω_A([Y, A], [Z, A]) = -Im tr(A [Y, Z])`.
pub fn kks_pairing(a: &Hermitian, y: &SkewHermitian, z: &SkewHermitian) -> Result<f64> {
    let yz = commutator(y.matrix(), z.matrix())?;
    if a.size() != yz.nrows() {
        return Err(Error::SizeMismatch {
            left: a.size(),
            right: yz.nrows(),
        });
    }
    Ok(-a.matrix().matmul(&yz).trace().im)
}

/// Real basis of `u(m)`: `i E_jj`, `E_jl - E_lj`, `i (E_jl + E_lj)`.
fn unitary_algebra_basis(m: usize) -> Vec<ComplexMatrix> {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(m * m);
    for j in 0..m {
        let mut e = ComplexMatrix::zeros(m, m);
        e[(j, j)] = i;
        out.push(e);
    }
    for j in 0..m {
        for l in j + 1..m {
            let mut e = ComplexMatrix::zeros(m, m);
            e[(j, l)] = one;
            e[(l, j)] = -one;
            out.push(e);
            let mut f = ComplexMatrix::zeros(m, m);
            f[(j, l)] = i;
            f[(l, j)] = i;
            out.push(f);
        }
    }
    out
}

/// Reference size for rank cutoffs. Tangent vectors below `eps_rank * ‖A‖_max`
/// are round-off, which matters at point fibers where every vector is noise.
fn rank_reference(a: &Hermitian) -> f64 {
    a.matrix().max_abs()
}

fn generator(a: &Hermitian, level: usize, y_k: &ComplexMatrix) -> Result<TangentGenerator> {
    let y = SkewHermitian::new(y_k)?.embed(a.size())?;
    let vector = flatten_hermitian(&commutator(y.matrix(), a.matrix())?);
    Ok(TangentGenerator { level, y, vector })
}

/// For every level `k`, the commutant of `A_k` embedded in `u(n)`.
pub fn tangent_generators_commutant(
    a: &Hermitian,
    cfg: &ToleranceConfig,
) -> Result<Vec<TangentGenerator>> {
    let mut out = Vec::new();
    for k in 1..=a.size() {
        for g in commutant_basis(&a.leading(k)?, cfg.eps_eq)?.generators {
            out.push(generator(a, k, g.matrix())?);
        }
    }
    Ok(out)
}

/// For every level `k`, the solutions `Y_k in u(k)` of the linearized level
/// equations: the leading `(k-1) x (k-1)` block of `[A_k, Y_k]` vanishes, and
/// for every eigenspace `W` of `A_{k-1}` that the border column of `A_k` misses,
/// the projection of the last column of `[A_k, Y_k]` onto `W` vanishes too.
pub fn tangent_generators_border(
    a: &Hermitian,
    cfg: &ToleranceConfig,
) -> Result<Vec<TangentGenerator>> {
    let n = a.size();
    let scale = rank_reference(a);
    let mut out = Vec::new();
    for k in 1..=n {
        let a_k = a.leading(k)?;
        let basis = unitary_algebra_basis(k);
        let mut missed: Vec<Vec<Complex64>> = Vec::new();
        if k > 1 {
            let (_, q, clusters) = eigen_clusters(&a.leading(k - 1)?, cfg.eps_eq)?;
            let x: Vec<Complex64> = (0..k - 1).map(|r| a.matrix()[(r, k - 1)]).collect();
            for range in clusters {
                let cols: Vec<Vec<Complex64>> = range.map(|j| q.matrix().column(j)).collect();
                let proj: f64 = cols
                    .iter()
                    .map(|w| {
                        w.iter()
                            .zip(&x)
                            .map(|(wi, xi)| wi.conj() * xi)
                            .sum::<Complex64>()
                            .norm_sqr()
                    })
                    .sum();
                if libm::sqrt(proj) <= cfg.eps_rank * scale.max(f64::MIN_POSITIVE) {
                    missed.extend(cols);
                }
            }
        }
        let mut columns = Vec::with_capacity(basis.len());
        for b in &basis {
            let c = commutator(a_k.matrix(), b)?;
            let mut col = if k > 1 {
                flatten_hermitian(&c.leading_block(k - 1))
            } else {
                Vec::new()
            };
            for w in &missed {
                let z: Complex64 = (0..k - 1).map(|r| w[r].conj() * c[(r, k - 1)]).sum();
                col.push(z.re);
                col.push(z.im);
            }
            columns.push(col);
        }
        let rows = columns[0].len();
        let decomposition = svd(&RealMatrix::from_columns(rows, &columns)?);
        let cutoff = cfg.eps_rank * decomposition.largest().max(scale);
        for coeffs in decomposition.null_space(cutoff) {
            let mut y = ComplexMatrix::zeros(k, k);
            for (b, &c) in basis.iter().zip(&coeffs) {
                y = y.add(&b.scale(Complex64::new(c, 0.0)));
            }
            out.push(generator(a, k, &y)?);
        }
    }
    Ok(out)
}

/// Rank of a set of tangent vectors, with singular values above
/// `eps_rank * max(σ_max, reference)` counted.
pub fn tangent_rank(
    generators: &[TangentGenerator],
    reference: f64,
    eps_rank: f64,
) -> Result<usize> {
    if generators.is_empty() {
        return Ok(0);
    }
    let columns: Vec<Vec<f64>> = generators.iter().map(|g| g.vector.clone()).collect();
    let values = singular_values(&RealMatrix::from_columns(columns[0].len(), &columns)?);
    let cutoff = eps_rank * values.first().copied().unwrap_or(0.0).max(reference);
    Ok(values.iter().filter(|&&s| s > cutoff).count())
}

/// Tangent rank of the commutant generators: the fiber dimension at a generic point.
pub fn numeric_fiber_dim(a: &Hermitian, cfg: &ToleranceConfig) -> Result<usize> {
    let g = tangent_generators_commutant(a, cfg)?;
    tangent_rank(&g, rank_reference(a), cfg.eps_rank)
}

/// [`numeric_fiber_dim`] at `eps_rank / 10`, `eps_rank` and `eps_rank * 10`.
pub fn rank_stability(a: &Hermitian, cfg: &ToleranceConfig) -> Result<[usize; 3]> {
    let g = tangent_generators_commutant(a, cfg)?;
    let s = rank_reference(a);
    Ok([
        tangent_rank(&g, s, cfg.eps_rank / 10.0)?,
        tangent_rank(&g, s, cfg.eps_rank)?,
        tangent_rank(&g, s, cfg.eps_rank * 10.0)?,
    ])
}

/// Ranks of the commutant set, the border set and their union.
pub fn construction_ranks(a: &Hermitian, cfg: &ToleranceConfig) -> Result<(usize, usize, usize)> {
    let s = rank_reference(a);
    let comm = tangent_generators_commutant(a, cfg)?;
    let border = tangent_generators_border(a, cfg)?;
    let rc = tangent_rank(&comm, s, cfg.eps_rank)?;
    let rb = tangent_rank(&border, s, cfg.eps_rank)?;
    let mut union = comm;
    union.extend(border);
    let ru = tangent_rank(&union, s, cfg.eps_rank)?;
    Ok((rc, rb, ru))
}

/// Largest normalized pairing `|ω(v_i, v_j)| / ((1 + ‖A‖_max) max(1, |v_i| |v_j|))`
/// over pairs of commutant tangent vectors.
pub fn isotropy_residual(a: &Hermitian, cfg: &ToleranceConfig) -> Result<f64> {
    let gens = tangent_generators_commutant(a, cfg)?;
    let am = a.matrix();
    // tr(A [Y, Z]) = tr([A, Y] Z)
    let ay: Vec<ComplexMatrix> = gens
        .iter()
        .map(|g| commutator(am, g.y.matrix()))
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<f64> = gens
        .iter()
        .map(|g| libm::sqrt(g.vector.iter().map(|x| x * x).sum()))
        .collect();
    let n = a.size();
    let denom_a = 1.0 + am.max_abs();
    let mut worst: f64 = 0.0;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let z = gens[j].y.matrix();
            let mut tr = Complex64::new(0.0, 0.0);
            for r in 0..n {
                for c in 0..n {
                    tr += ay[i][(r, c)] * z[(c, r)];
                }
            }
            let w = tr.im.abs() / (denom_a * (norms[i] * norms[j]).max(1.0));
            worst = worst.max(w);
        }
    }
    Ok(worst)
}

/// Real dimension of `{S in u(k-1) : [S, A_{k-1}] = 0, S x_k = 0}` for each `k`,
/// where `x_k` holds the first `k-1` entries of column `k`. The first entry is 0.
pub fn h_prime_dims_numeric(a: &Hermitian, cfg: &ToleranceConfig) -> Result<Vec<usize>> {
    let n = a.size();
    let scale = rank_reference(a);
    let mut out = Vec::with_capacity(n);
    out.push(0);
    for k in 2..=n {
        let m = k - 1;
        let a_m = a.leading(m)?;
        let x: Vec<Complex64> = (0..m).map(|r| a.matrix()[(r, m)]).collect();
        let basis = unitary_algebra_basis(m);
        let mut columns = Vec::with_capacity(basis.len());
        for b in &basis {
            let mut col = flatten_hermitian(&commutator(b, a_m.matrix())?);
            for z in b.mul_vec(&x) {
                col.push(z.re);
                col.push(z.im);
            }
            columns.push(col);
        }
        let d = svd(&RealMatrix::from_columns(columns[0].len(), &columns)?);
        let cutoff = cfg.eps_rank * d.largest().max(scale);
        out.push(d.null_space(cutoff).len());
    }
    Ok(out)
}

/// Combinatorial, group-theoretic and numeric dimension of a fiber, side by side.
#[derive(Clone, Debug)]
pub struct FiberReport {
    pub triangle: GcTriangle,
    pub dim_combinatorial: usize,
    /// `Σ g_k - Σ h'_k - dim U_λ`.
    pub dim_groups: i64,
    pub dim_numeric: usize,
    pub classification: FiberClassification,
    pub topology: TopologyDescriptor,
    pub isotropy_residual: f64,
    pub h_prime_dims: Vec<usize>,
    pub g_dims: Vec<usize>,
    pub consistent: bool,
}

/// Samples `samples` walk-separated fiber points and compares the three
/// dimension counts. Ranks take the maximum over samples and `h'` the
/// entrywise minimum, since special points can only lose rank.
pub fn full_report(
    t: &GcTriangle,
    samples: usize,
    cfg: &ToleranceConfig,
    seed: Seed,
) -> Result<FiberReport> {
    cfg.validate()?;
    let analysis = analyze(t)?;
    let points = sample_fiber(t, samples, WALK_STEPS_PER_LEVEL * t.n(), seed, cfg)?;
    let mut dim_numeric = 0;
    let mut iso: f64 = 0.0;
    let mut h_prime: Option<Vec<usize>> = None;
    for p in &points {
        dim_numeric = dim_numeric.max(numeric_fiber_dim(p, cfg)?);
        iso = iso.max(isotropy_residual(p, cfg)?);
        let h = h_prime_dims_numeric(p, cfg)?;
        h_prime = Some(match h_prime {
            None => h,
            Some(prev) => prev.iter().zip(&h).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    let h_prime_dims = h_prime.unwrap_or_default();
    let g_dims = g_k_dims(t);
    let dim_groups = g_dims.iter().sum::<usize>() as i64
        - h_prime_dims.iter().sum::<usize>() as i64
        - u_lambda_dim(&t.spectrum()?) as i64;
    let consistent = analysis.dimension as i64 == dim_groups
        && analysis.dimension == dim_numeric
        && iso <= cfg.eps_iso;
    Ok(FiberReport {
        triangle: t.clone(),
        dim_combinatorial: analysis.dimension,
        dim_groups,
        dim_numeric,
        classification: analysis.classification,
        topology: analysis.topology,
        isotropy_residual: iso,
        h_prime_dims,
        g_dims,
        consistent,
    })
}
