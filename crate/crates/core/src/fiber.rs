//! Explicit points of a fiber and random walks inside it.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, eigenvalues, exp_skew, Complex64, ComplexMatrix, Hermitian, SkewHermitian,
    Spectrum, Unitary,
};
use crate::seed::Seed;
use crate::tolerance::ToleranceConfig;
use crate::triangle::{momentum_map_raw, validate_triangle, GcTriangle};

/// Relative gap under which a source and a target eigenvalue are paired off
/// before the partial-fraction step.
pub const DEFLATION_TOLERANCE: f64 = 1e-9;
/// Slack allowed in the interlacing precondition, relative to `max(1, scale)`.
pub const INTERLACING_SLACK: f64 = 1e-12;

/// Border data of `[[A_k, x], [x^*, a]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BorderedExtension {
    /// Border column in the ambient basis.
    pub x: Vec<Complex64>,
    /// Corner entry.
    pub a: f64,
    /// `|x|^2` carried by each retained eigenvalue, all non-negative.
    pub t_weights: Vec<f64>,
}

/// Extends `A_k` by one row and column so the result has spectrum `target`.
pub fn bordered_extension(
    a_k: &Hermitian,
    target: &Spectrum,
    cfg: &ToleranceConfig,
) -> Result<Hermitian> {
    bordered_extension_detailed(a_k, target, cfg).map(|(m, _)| m)
}

pub fn bordered_extension_detailed(
    a_k: &Hermitian,
    target: &Spectrum,
    cfg: &ToleranceConfig,
) -> Result<(Hermitian, BorderedExtension)> {
    let k = a_k.size();
    if target.len() != k + 1 {
        return Err(Error::SizeMismatch {
            left: k + 1,
            right: target.len(),
        });
    }
    let (source, q) = eig_hermitian(a_k)?;
    let mu = source.values();
    let nu = target.values();
    let scale = mu.iter().chain(nu).map(|v| v.abs()).fold(0.0, f64::max);
    let floor = scale.max(1.0);

    let mut worst: f64 = 0.0;
    for i in 0..k {
        worst = worst.max(mu[i] - nu[i]).max(nu[i + 1] - mu[i]);
    }
    if worst > INTERLACING_SLACK * floor {
        return Err(Error::InterlacingViolation { amount: worst });
    }

    // Pair off common values, one copy at a time. Scanning from the bottom keeps
    // the first eigenvector of a repeated eigenvalue as the retained one.
    let match_tol = DEFLATION_TOLERANCE * scale;
    let mut target_used = vec![false; k + 1];
    let mut retained = Vec::with_capacity(k);
    for s in (0..k).rev() {
        let m = mu[s];
        let hit = (0..=k)
            .rev()
            .find(|&p| !target_used[p] && (nu[p] - m).abs() <= match_tol);
        match hit {
            Some(p) => target_used[p] = true,
            None => retained.push(s),
        }
    }
    retained.reverse();
    let rest: Vec<f64> = (0..=k)
        .filter(|&p| !target_used[p])
        .map(|p| nu[p])
        .collect();

    let t_weights: Vec<f64> = retained
        .iter()
        .map(|&s| {
            let m = mu[s];
            let num: f64 = rest.iter().map(|&v| m - v).product();
            let den: f64 = retained
                .iter()
                .filter(|&&l| l != s)
                .map(|&l| m - mu[l])
                .product();
            (-num / den).max(0.0)
        })
        .collect();

    let mut x_eig = vec![Complex64::new(0.0, 0.0); k];
    for (&s, &w) in retained.iter().zip(&t_weights) {
        x_eig[s] = Complex64::new(libm::sqrt(w), 0.0);
    }
    let x = q.matrix().mul_vec(&x_eig);
    let a = nu.iter().sum::<f64>() - a_k.matrix().trace().re;

    let src = a_k.matrix();
    let m = ComplexMatrix::from_fn(k + 1, k + 1, |r, c| match (r < k, c < k) {
        (true, true) => src[(r, c)],
        (true, false) => x[r],
        (false, true) => x[c].conj(),
        (false, false) => Complex64::new(a, 0.0),
    });
    let out = Hermitian::new(&m)?;
    let got = eigenvalues(&out)?;
    let error = got
        .values()
        .iter()
        .zip(nu)
        .map(|(g, t)| (g - t).abs())
        .fold(0.0, f64::max);
    if error > cfg.eps_spec * floor {
        return Err(Error::SpectrumMismatch { error });
    }
    Ok((out, BorderedExtension { x, a, t_weights }))
}

/// Real basis of `{S in u(k) : [S, A_k] = 0}` for one level.
#[derive(Clone, Debug)]
pub struct CommutantBasis {
    pub level: usize,
    pub generators: Vec<SkewHermitian>,
}

/// Eigenvalue clusters of `A`: consecutive descending eigenvalues whose gap is
/// within `eps` times the largest modulus. Returns the spectrum, eigenvectors
/// and cluster index ranges.
pub(crate) fn eigen_clusters(
    a: &Hermitian,
    eps: f64,
) -> Result<(Spectrum, Unitary, Vec<core::ops::Range<usize>>)> {
    let (spec, q) = eig_hermitian(a)?;
    let v = spec.values();
    let scale = spec.max_abs().max(f64::MIN_POSITIVE);
    let mut ranges = Vec::new();
    let mut start = 0;
    for j in 1..=v.len() {
        if j == v.len() || v[j - 1] - v[j] > eps * scale {
            ranges.push(start..j);
            start = j;
        }
    }
    Ok((spec, q, ranges))
}

/// For each eigenvalue cluster of size `m`, the `m^2` standard generators of
/// `u(m)` in the eigenbasis, expressed in the ambient basis.
pub fn commutant_basis(a_k: &Hermitian, eps: f64) -> Result<CommutantBasis> {
    let k = a_k.size();
    let (_, q, clusters) = eigen_clusters(a_k, eps)?;
    let q = q.matrix();
    let col = |j: usize| q.column(j);
    let outer =
        |x: &[Complex64], y: &[Complex64]| ComplexMatrix::from_fn(k, k, |r, c| x[r] * y[c].conj());
    let i = Complex64::new(0.0, 1.0);
    let mut generators = Vec::new();
    for range in clusters {
        for a in range.clone() {
            let qa = col(a);
            generators.push(SkewHermitian::new(&outer(&qa, &qa).scale(i))?);
            for b in a + 1..range.end {
                let qb = col(b);
                let ab = outer(&qa, &qb);
                let ba = outer(&qb, &qa);
                generators.push(SkewHermitian::new(&ab.sub(&ba))?);
                generators.push(SkewHermitian::new(&ab.add(&ba).scale(i))?);
            }
        }
    }
    Ok(CommutantBasis {
        level: k,
        generators,
    })
}

/// Conjugates `A` by `exp(S) ⊕ I`, with `S` a random combination of the level-`k`
/// commutant generators, coefficients uniform in `[-π, π]`.
pub fn fiber_step<R: Rng + ?Sized>(
    a: &Hermitian,
    k: usize,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> Result<Hermitian> {
    let n = a.size();
    if k == 0 || k > n {
        return Err(Error::OutOfRange {
            index: k,
            min: 1,
            max: n,
        });
    }
    let basis = commutant_basis(&a.leading(k)?, cfg.eps_eq)?;
    let mut s = ComplexMatrix::zeros(k, k);
    for g in &basis.generators {
        let c: f64 = rng.random_range(-core::f64::consts::PI..=core::f64::consts::PI);
        s = s.add(&g.matrix().scale(Complex64::new(c, 0.0)));
    }
    let u = exp_skew(&SkewHermitian::new(&s)?)?.embed(n)?;
    a.conjugate(&u)
}

/// Largest entry of `|F(A) - t|`.
pub fn momentum_drift(a: &Hermitian, t: &GcTriangle) -> Result<f64> {
    let got = momentum_map_raw(a)?;
    got.max_abs_diff(t).ok_or(Error::SizeMismatch {
        left: a.size(),
        right: t.n(),
    })
}

/// A point of the fiber over `t`: bordered extensions row by row, each followed
/// by random symmetries at every level built so far.
pub fn base_point(t: &GcTriangle, seed: Seed, cfg: &ToleranceConfig) -> Result<Hermitian> {
    validate_triangle(t, 0.0).into_result()?;
    let n = t.n();
    let mut rng = seed.rng();
    let mut a = Hermitian::from_real_diagonal(t.row(1));
    for k in 1..n {
        let target = Spectrum::new(t.row(k + 1).to_vec())?;
        a = bordered_extension(&a, &target, cfg)?;
        for level in 1..=k {
            a = fiber_step(&a, level, &mut rng, cfg)?;
        }
    }
    let scale = t.lambda().iter().map(|v| v.abs()).fold(1.0, f64::max);
    let drift = momentum_drift(&a, t)?;
    if drift > cfg.eps_spec * scale {
        return Err(Error::SpectrumMismatch { error: drift });
    }
    Ok(a)
}

/// `count` walks from a common base point, each of `steps` fiber steps with
/// the level cycling through `1..=n`.
pub fn sample_fiber(
    t: &GcTriangle,
    count: usize,
    steps: usize,
    seed: Seed,
    cfg: &ToleranceConfig,
) -> Result<Vec<Hermitian>> {
    if count == 0 {
        return Err(Error::NoSamples);
    }
    let base = base_point(t, seed.derive(0), cfg)?;
    let n = t.n();
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let mut rng = seed.derive(j as u64 + 1).rng();
        let mut a = base.clone();
        for s in 0..steps {
            a = fiber_step(&a, s % n + 1, &mut rng, cfg)?;
        }
        out.push(a);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn spectrum(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn scalar_to_two_by_two() {
        let (m, ext) = bordered_extension_detailed(
            &Hermitian::from_real_diagonal(&[2.0]),
            &spectrum(&[3.0, 1.0]),
            &cfg(),
        )
        .unwrap();
        assert_eq!(ext.a, 2.0);
        assert!((ext.t_weights[0] - 1.0).abs() < 1e-15);
        assert!((m.matrix()[(0, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn full_deflation() {
        let (m, ext) = bordered_extension_detailed(
            &Hermitian::from_real_diagonal(&[1.5]),
            &spectrum(&[1.5, 1.5]),
            &cfg(),
        )
        .unwrap();
        assert_eq!(ext.x, vec![Complex64::new(0.0, 0.0)]);
        assert_eq!(m, Hermitian::from_real_diagonal(&[1.5, 1.5]));
    }

    #[test]
    fn partial_deflation() {
        let (m, ext) = bordered_extension_detailed(
            &Hermitian::from_real_diagonal(&[2.0, 2.0]),
            &spectrum(&[3.0, 2.0, 1.0]),
            &cfg(),
        )
        .unwrap();
        assert_eq!(ext.a, 2.0);
        assert_eq!(ext.t_weights.len(), 1);
        assert!((ext.x.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-14);
        let got = eigenvalues(&m).unwrap();
        for (g, w) in got.values().iter().zip([3.0, 2.0, 1.0]) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn interlacing_violation() {
        let r = bordered_extension(
            &Hermitian::from_real_diagonal(&[2.0]),
            &spectrum(&[1.5, 1.0]),
            &cfg(),
        );
        assert!(matches!(r, Err(Error::InterlacingViolation { .. })));
    }

    #[test]
    fn commutant_counts() {
        let diag = Hermitian::from_real_diagonal(&[3.0, 2.0, 1.0]);
        assert_eq!(commutant_basis(&diag, 1e-8).unwrap().generators.len(), 3);
        let scalar = Hermitian::from_real_diagonal(&[2.0, 2.0]);
        assert_eq!(commutant_basis(&scalar, 1e-8).unwrap().generators.len(), 4);
        let b = commutant_basis(&Hermitian::from_real_diagonal(&[2.0, 2.0, 1.0]), 1e-8).unwrap();
        assert_eq!(b.generators.len(), 5);
        for g in &b.generators {
            let c = commutator(
                g.matrix(),
                &ComplexMatrix::from_real_diagonal(&[2.0, 2.0, 1.0]),
            )
            .unwrap();
            assert!(c.max_abs() < 1e-14);
        }
    }

    #[test]
    fn step_at_top_level_fixes_diagonal() {
        let d = Hermitian::from_real_diagonal(&[3.0, 2.0, 1.0]);
        let mut rng = Seed(4).rng();
        let out = fiber_step(&d, 3, &mut rng, &cfg()).unwrap();
        assert!(out.matrix().sub(d.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn point_fiber_samples() {
        let t = GcTriangle::new(vec![vec![2.0], vec![2.0, 2.0]]).unwrap();
        let s = sample_fiber(&t, 3, 5, Seed(1), &cfg()).unwrap();
        for a in s {
            assert!(
                a.matrix()
                    .sub(&ComplexMatrix::from_real_diagonal(&[2.0, 2.0]))
                    .max_abs()
                    < 1e-14
            );
        }
    }
}
