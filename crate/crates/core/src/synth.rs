//! Builds triangles that realize a prescribed set of equalities and nothing else.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::pattern::{chains, extract_pattern};
use crate::seed::Seed;
use crate::triangle::{GcTriangle, TrianglePosition};

/// Positions `(i, k) = (u, u + v)` for `u0 <= u < u0 + du`, `v0 <= v < v0 + dv`.
pub fn rectangle_positions(u0: usize, v0: usize, du: usize, dv: usize) -> Vec<TrianglePosition> {
    let mut out = Vec::with_capacity(du * dv);
    for u in u0..u0 + du {
        for v in v0..v0 + dv {
            out.push(TrianglePosition::new(u, u + v));
        }
    }
    out.sort();
    out
}

/// Diamond of side `l` whose lowest-row entry is `(i, k)`.
pub fn diamond_positions(i: usize, k: usize, l: usize) -> Vec<TrianglePosition> {
    rectangle_positions(i, k - i, l, l)
}

/// Triangle of size `n` whose equal adjacent entries are exactly the given blocks
/// (blocks sharing a position are merged). Values are integer levels of the
/// interlacing order plus a small seeded offset, so every decimal has at most
/// three fractional digits and the spectrum has no repeated values unless a
/// block spans several entries of the last row.
pub fn realize_pattern(
    n: usize,
    blocks: &[Vec<TrianglePosition>],
    seed: Seed,
) -> Result<GcTriangle> {
    if n == 0 {
        return Err(Error::EmptySpectrum);
    }
    let total = n * (n + 1) / 2;
    let index = |p: TrianglePosition| p.k * (p.k - 1) / 2 + (p.i - 1);
    let mut positions = Vec::with_capacity(total);
    for k in 1..=n {
        for i in 1..=k {
            positions.push(TrianglePosition::new(i, k));
        }
    }

    let mut class: Vec<usize> = (0..total).collect();
    fn find(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    for block in blocks {
        for p in block {
            if p.k == 0 || p.k > n || p.i == 0 || p.i > p.k {
                return Err(Error::OutOfRange {
                    index: p.k,
                    min: 1,
                    max: n,
                });
            }
        }
        for w in block.windows(2) {
            let (a, b) = (find(&mut class, index(w[0])), find(&mut class, index(w[1])));
            class[a] = b;
        }
    }
    let roots: Vec<usize> = (0..total).map(|x| find(&mut class, x)).collect();

    // Edges point from the smaller entry to the larger one.
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); total];
    for &p in &positions {
        if p.k < n {
            let here = roots[index(p)];
            let up = roots[index(TrianglePosition::new(p.i, p.k + 1))];
            let down = roots[index(TrianglePosition::new(p.i + 1, p.k + 1))];
            if here != up {
                succ[here].insert(up);
            }
            if here != down {
                succ[down].insert(here);
            }
        }
    }

    let mut indegree = vec![0usize; total];
    for s in &succ {
        for &t in s {
            indegree[t] += 1;
        }
    }
    let nodes: Vec<usize> = (0..total).filter(|&x| roots[x] == x).collect();
    let mut level = vec![1usize; total];
    let mut ready: Vec<usize> = nodes
        .iter()
        .copied()
        .filter(|&x| indegree[x] == 0)
        .collect();
    let mut visited = 0;
    while let Some(x) = ready.pop() {
        visited += 1;
        for &y in &succ[x] {
            level[y] = level[y].max(level[x] + 1);
            indegree[y] -= 1;
            if indegree[y] == 0 {
                ready.push(y);
            }
        }
    }
    if visited != nodes.len() {
        return Err(Error::PatternNotClosed);
    }

    let mut rng = seed.rng();
    let mut value = vec![0.0; total];
    for &x in &nodes {
        let jitter: u32 = rng.random_range(0..300);
        value[x] = (level[x] as f64 * 1000.0 + jitter as f64) / 1000.0;
    }
    let rows = (1..=n)
        .map(|k| {
            (1..=k)
                .map(|i| value[roots[index(TrianglePosition::new(i, k))]])
                .collect()
        })
        .collect();
    let t = GcTriangle::new(rows)?;

    // The realized equalities must be exactly the requested classes.
    let found = chains(&extract_pattern(&t), &t)?;
    let mut requested: Vec<Vec<TrianglePosition>> = Vec::new();
    for &x in &nodes {
        let members: Vec<TrianglePosition> = positions
            .iter()
            .copied()
            .filter(|&p| roots[index(p)] == x)
            .collect();
        if members.len() > 1 {
            requested.push(members);
        }
    }
    let mut got: Vec<Vec<TrianglePosition>> =
        found.iter().map(|c| c.positions().to_vec()).collect();
    requested.sort();
    got.sort();
    if requested != got {
        return Err(Error::PatternNotClosed);
    }
    Ok(t)
}
