//! Equality chains of a triangle, the fiber dimension count and the classification
//! of singular fibers.
//!
//! Positions are often easier to reason about in the coordinates `u = i`,
//! `v = k - i`: along `u` the entries are non-increasing and along `v`
//! non-decreasing, so a diamond of equalities is a full `l x l` square and a
//! parallelogram is a full rectangle.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{exact_multiplicities, Spectrum};
use crate::triangle::{validate_triangle, GcTriangle, TrianglePosition};

/// `(n^2 - Σ m^2) / 2`, half the orbit dimension.
pub fn regular_fiber_dim(lambda: &Spectrum) -> usize {
    let n = lambda.len();
    (n * n - u_lambda_dim(lambda)) / 2
}

/// `Σ m^2` over the multiplicities of `λ`: the dimension of its stabilizer.
pub fn u_lambda_dim(lambda: &Spectrum) -> usize {
    lambda.multiplicities().iter().map(|m| m * m).sum()
}

fn sum_of_squares(sorted: &[f64]) -> usize {
    exact_multiplicities(sorted).iter().map(|m| m * m).sum()
}

/// Neighbours of `p` with larger `(k, i)`: right in the row and the two entries below.
fn forward_neighbours(p: TrianglePosition, n: usize) -> impl Iterator<Item = TrianglePosition> {
    let right = (p.i < p.k).then(|| TrianglePosition::new(p.i + 1, p.k));
    let below = (p.k < n).then(|| TrianglePosition::new(p.i, p.k + 1));
    let below_right = (p.k < n).then(|| TrianglePosition::new(p.i + 1, p.k + 1));
    right.into_iter().chain(below).chain(below_right)
}

/// Adjacent pairs of exactly equal entries, plus the positions pinned by `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualityPattern {
    pub n: usize,
    pub equal_pairs: BTreeSet<(TrianglePosition, TrianglePosition)>,
    pub forced: BTreeSet<TrianglePosition>,
}

impl EqualityPattern {
    pub fn is_forced(&self, p: TrianglePosition) -> bool {
        self.forced.contains(&p)
    }
}

pub fn extract_pattern(t: &GcTriangle) -> EqualityPattern {
    let n = t.n();
    let lambda = t.lambda();
    let mut equal_pairs = BTreeSet::new();
    let mut forced = BTreeSet::new();
    for p in t.positions() {
        for q in forward_neighbours(p, n) {
            if t.get(p) == t.get(q) {
                equal_pairs.insert((p, q));
            }
        }
        // (i, k) is squeezed between λ_i and λ_{i+n-k}.
        if lambda[p.i - 1] == lambda[p.i + n - p.k - 1] {
            forced.insert(p);
        }
    }
    EqualityPattern {
        n,
        equal_pairs,
        forced,
    }
}

/// A connected set of equal entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    positions: Vec<TrianglePosition>,
    value: f64,
    first_row: usize,
    row_counts: Vec<usize>,
    constant: bool,
}

impl Chain {
    /// Positions sorted by row, then by index.
    pub fn positions(&self) -> &[TrianglePosition] {
        &self.positions
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn first_row(&self) -> usize {
        self.first_row
    }

    pub fn last_row(&self) -> usize {
        self.first_row + self.row_counts.len() - 1
    }

    pub fn row_counts(&self) -> &[usize] {
        &self.row_counts
    }

    /// Every position is pinned by the spectrum, so the chain holds on the whole orbit.
    pub fn is_constant(&self) -> bool {
        self.constant
    }

    /// `Σ l_j` over consecutive rows with `l_j = l_{j-1}`.
    pub fn deficit(&self) -> usize {
        self.row_counts
            .windows(2)
            .filter(|w| w[0] == w[1])
            .map(|w| w[1])
            .sum()
    }

    pub fn has_repeated_counts(&self) -> bool {
        self.row_counts.windows(2).any(|w| w[0] == w[1])
    }

    /// `(extent in u, extent in v)` when the chain fills a rectangle in `(u, v)`.
    pub fn rectangle(&self) -> Option<(usize, usize)> {
        let us = self.positions.iter().map(|p| p.i);
        let vs = self.positions.iter().map(|p| p.k - p.i);
        let (umin, umax) = (us.clone().min()?, us.max()?);
        let (vmin, vmax) = (vs.clone().min()?, vs.max()?);
        let du = umax - umin + 1;
        let dv = vmax - vmin + 1;
        (du * dv == self.positions.len()).then_some((du, dv))
    }

    /// Side length when the chain is a full diamond of size at least 2.
    pub fn diamond_size(&self) -> Option<usize> {
        match self.rectangle() {
            Some((a, b)) if a == b && a >= 2 => Some(a),
            _ => None,
        }
    }

    pub fn all_counts_one(&self) -> bool {
        self.row_counts.iter().all(|&l| l == 1)
    }
}

/// Connected components of the equal-pair graph.
pub fn chains(p: &EqualityPattern, t: &GcTriangle) -> Result<Vec<Chain>> {
    let n = t.n();
    let index = |q: TrianglePosition| q.k * (q.k - 1) / 2 + (q.i - 1);
    let total = n * (n + 1) / 2;
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut in_pair = vec![false; total];
    for &(a, b) in &p.equal_pairs {
        let (ra, rb) = (find(&mut parent, index(a)), find(&mut parent, index(b)));
        parent[ra] = rb;
        in_pair[index(a)] = true;
        in_pair[index(b)] = true;
    }

    let mut groups: Vec<(usize, Vec<TrianglePosition>)> = Vec::new();
    for q in t.positions() {
        let idx = index(q);
        if !in_pair[idx] {
            continue;
        }
        let root = find(&mut parent, idx);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => g.1.push(q),
            None => groups.push((root, vec![q])),
        }
    }

    let mut out = Vec::with_capacity(groups.len());
    for (_, positions) in groups {
        let first_row = positions[0].k;
        let last_row = positions[positions.len() - 1].k;
        let mut row_counts = Vec::with_capacity(last_row - first_row + 1);
        for k in first_row..=last_row {
            let idx: Vec<usize> = positions.iter().filter(|q| q.k == k).map(|q| q.i).collect();
            let contiguous = !idx.is_empty() && idx.windows(2).all(|w| w[1] == w[0] + 1);
            if !contiguous {
                return Err(Error::NonContiguousChain { row: k });
            }
            row_counts.push(idx.len());
        }
        let constant = positions.iter().all(|q| p.is_forced(*q));
        out.push(Chain {
            value: t.get(positions[0]),
            positions,
            first_row,
            row_counts,
            constant,
        });
    }
    Ok(out)
}

fn checked(t: &GcTriangle) -> Result<Spectrum> {
    validate_triangle(t, 0.0).into_result()?;
    t.spectrum()
}

/// `N` minus the chain deficits.
pub fn fiber_dimension(t: &GcTriangle) -> Result<usize> {
    Ok(analyze(t)?.dimension)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiberKind {
    Regular,
    Elliptic,
    Diamond,
    MultiDiamond,
    SymmetricOverlapping,
    GeneralDegenerate,
}

impl FiberKind {
    pub const ALL: [FiberKind; 6] = [
        FiberKind::Regular,
        FiberKind::Elliptic,
        FiberKind::Diamond,
        FiberKind::MultiDiamond,
        FiberKind::SymmetricOverlapping,
        FiberKind::GeneralDegenerate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FiberKind::Regular => "Regular",
            FiberKind::Elliptic => "Elliptic",
            FiberKind::Diamond => "Diamond",
            FiberKind::MultiDiamond => "MultiDiamond",
            FiberKind::SymmetricOverlapping => "SymmetricOverlapping",
            FiberKind::GeneralDegenerate => "GeneralDegenerate",
        }
    }

    pub fn parse(s: &str) -> Option<FiberKind> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberClassification {
    pub kind: FiberKind,
    /// Fiber dimension equals `N`.
    pub lagrangian: bool,
}

pub fn classify(t: &GcTriangle) -> Result<FiberClassification> {
    Ok(analyze(t)?.classification)
}

/// `SU(l_1) x ... x SU(l_s) x T^torus`. Only the certified kinds carry a known
/// diffeomorphism type; otherwise `torus` is just the dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyDescriptor {
    pub su_factors: Vec<usize>,
    pub torus_dim: usize,
    pub certified: bool,
}

impl TopologyDescriptor {
    pub fn dimension(&self) -> usize {
        self.su_factors.iter().map(|l| l * l - 1).sum::<usize>() + self.torus_dim
    }
}

impl fmt::Display for TopologyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.su_factors {
            write!(f, "SU({l}) x ")?;
        }
        write!(f, "T^{}", self.torus_dim)?;
        if !self.certified {
            f.write_str(" (dimension only)")?;
        }
        Ok(())
    }
}

pub fn topology(t: &GcTriangle) -> Result<TopologyDescriptor> {
    Ok(analyze(t)?.topology)
}

/// `Σ m^2` over the multiplicities of each row.
pub fn g_k_dims(t: &GcTriangle) -> Vec<usize> {
    t.rows().iter().map(|r| sum_of_squares(r)).collect()
}

/// Everything the combinatorial side knows about a triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternAnalysis {
    pub dimension: usize,
    pub regular_dimension: usize,
    pub classification: FiberClassification,
    pub chains: Vec<Chain>,
    pub topology: TopologyDescriptor,
}

pub fn analyze(t: &GcTriangle) -> Result<PatternAnalysis> {
    let lambda = checked(t)?;
    let big_n = regular_fiber_dim(&lambda);
    let pattern = extract_pattern(t);
    let chains = chains(&pattern, t)?;
    let deficit: usize = chains.iter().map(Chain::deficit).sum();
    let dimension = big_n.saturating_sub(deficit);

    let active: Vec<&Chain> = chains.iter().filter(|c| !c.is_constant()).collect();
    let diamonds: Vec<usize> = active.iter().filter_map(|c| c.diamond_size()).collect();
    let kind = if active.is_empty() {
        FiberKind::Regular
    } else if active.iter().all(|c| c.all_counts_one()) {
        FiberKind::Elliptic
    } else if diamonds.len() == active.len() {
        if diamonds.len() == 1 {
            FiberKind::Diamond
        } else {
            FiberKind::MultiDiamond
        }
    } else if active.iter().all(|c| !c.has_repeated_counts()) {
        FiberKind::SymmetricOverlapping
    } else {
        FiberKind::GeneralDegenerate
    };

    let topology = match kind {
        FiberKind::Regular | FiberKind::Elliptic => TopologyDescriptor {
            su_factors: Vec::new(),
            torus_dim: dimension,
            certified: true,
        },
        FiberKind::Diamond | FiberKind::MultiDiamond => {
            let used: usize = diamonds.iter().map(|l| l * l - 1).sum();
            match dimension.checked_sub(used) {
                Some(torus_dim) => TopologyDescriptor {
                    su_factors: diamonds,
                    torus_dim,
                    certified: true,
                },
                None => TopologyDescriptor {
                    su_factors: Vec::new(),
                    torus_dim: dimension,
                    certified: false,
                },
            }
        }
        _ => TopologyDescriptor {
            su_factors: Vec::new(),
            torus_dim: dimension,
            certified: false,
        },
    };

    Ok(PatternAnalysis {
        dimension,
        regular_dimension: big_n,
        classification: FiberClassification {
            kind,
            lagrangian: dimension == big_n,
        },
        chains,
        topology,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(rows: &[&[f64]]) -> GcTriangle {
        GcTriangle::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn spectrum(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn regular_and_stabilizer_dims() {
        assert_eq!(regular_fiber_dim(&spectrum(&[3.0, 2.0, 1.0])), 3);
        assert_eq!(regular_fiber_dim(&spectrum(&[1.0, 1.0])), 0);
        assert_eq!(regular_fiber_dim(&spectrum(&[2.0, 2.0, 1.0])), 2);
        assert_eq!(u_lambda_dim(&spectrum(&[3.0, 2.0, 1.0])), 3);
        assert_eq!(u_lambda_dim(&spectrum(&[2.0, 2.0, 1.0])), 5);
        assert_eq!(u_lambda_dim(&spectrum(&[4.0, 4.0, 4.0])), 9);
    }

    #[test]
    fn strict_triangle_has_no_pairs() {
        let p = extract_pattern(&tri(&[&[2.5], &[2.7, 1.5], &[3.0, 2.0, 1.0]]));
        assert!(p.equal_pairs.is_empty());
        assert!(p.forced.iter().all(|q| q.k == 3));
    }

    #[test]
    fn spherical_pattern_pairs() {
        let p = extract_pattern(&tri(&[&[2.0], &[2.0, 2.0], &[3.0, 2.0, 1.0]]));
        let pos = TrianglePosition::new;
        let expected: BTreeSet<_> = [
            (pos(1, 1), pos(1, 2)),
            (pos(1, 1), pos(2, 2)),
            (pos(1, 2), pos(2, 2)),
            (pos(1, 2), pos(2, 3)),
            (pos(2, 2), pos(2, 3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(p.equal_pairs, expected);
    }

    #[test]
    fn forced_corridor() {
        let p = extract_pattern(&tri(&[&[1.5], &[2.0, 1.2], &[2.0, 2.0, 1.0]]));
        assert!(!p.is_forced(TrianglePosition::new(1, 1)));
        assert!(p.is_forced(TrianglePosition::new(1, 2)));
        assert!(!p.is_forced(TrianglePosition::new(2, 2)));
    }

    #[test]
    fn diamond_chain() {
        let t = tri(&[&[2.0], &[2.0, 2.0], &[3.0, 2.0, 1.0]]);
        let c = chains(&extract_pattern(&t), &t).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].row_counts(), &[1, 2, 1]);
        assert_eq!(c[0].diamond_size(), Some(2));
        let a = analyze(&t).unwrap();
        assert_eq!(a.dimension, 3);
        assert_eq!(
            a.classification,
            FiberClassification {
                kind: FiberKind::Diamond,
                lagrangian: true
            }
        );
        assert_eq!(
            a.topology,
            TopologyDescriptor {
                su_factors: vec![2],
                torus_dim: 0,
                certified: true
            }
        );
    }

    #[test]
    fn elliptic_chain() {
        let t = tri(&[&[3.0], &[3.0, 1.5], &[3.0, 2.0, 1.0]]);
        let c = chains(&extract_pattern(&t), &t).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].row_counts(), &[1, 1, 1]);
        let a = analyze(&t).unwrap();
        assert_eq!(a.dimension, 1);
        assert_eq!(a.classification.kind, FiberKind::Elliptic);
        assert!(!a.classification.lagrangian);
    }

    #[test]
    fn single_diagonal_equality() {
        let t = tri(&[&[2.5], &[2.5, 1.5], &[3.0, 2.0, 1.0]]);
        let a = analyze(&t).unwrap();
        assert_eq!(a.dimension, 2);
        assert_eq!(a.topology.torus_dim, 2);
        assert_eq!(a.classification.kind, FiberKind::Elliptic);
    }

    #[test]
    fn regular_triangle() {
        let t = tri(&[&[2.5], &[2.7, 1.5], &[3.0, 2.0, 1.0]]);
        let a = analyze(&t).unwrap();
        assert!(a.chains.is_empty());
        assert_eq!(a.dimension, 3);
        assert_eq!(a.classification.kind, FiberKind::Regular);
        assert_eq!(a.topology.torus_dim, 3);
    }

    #[test]
    fn g_dims_by_row() {
        let t = tri(&[&[2.0], &[2.0, 2.0], &[3.0, 2.0, 1.0]]);
        assert_eq!(g_k_dims(&t), vec![1, 4, 3]);
    }

    #[test]
    fn invalid_triangle_rejected() {
        let t = tri(&[&[4.0], &[3.0, 1.0]]);
        assert!(matches!(analyze(&t), Err(Error::InvalidTriangle { .. })));
    }
}
