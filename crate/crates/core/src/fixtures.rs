//! The regression corpus: one triangle per singularity shape and placement.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::seed::Seed;
use crate::synth::{diamond_positions, realize_pattern, rectangle_positions};
use crate::triangle::{GcTriangle, TrianglePosition};

/// Shape that produced a fixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Regular,
    /// Chains of diagonal equalities only; `equalities` counts the adjacent equal pairs.
    Elliptic {
        equalities: usize,
    },
    Diamond {
        size: usize,
    },
    /// Full `du x dv` rectangle in `(u, v)` with `du != dv`.
    Parallelogram {
        du: usize,
        dv: usize,
    },
    MultiDiamond {
        sizes: Vec<usize>,
    },
    OverlappingDiamonds,
    /// Spectrum with one value of the given multiplicity, optionally with a
    /// further equality block.
    NonGeneric {
        multiplicity: usize,
    },
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Regular => "regular",
            Family::Elliptic { .. } => "elliptic",
            Family::Diamond { .. } => "diamond",
            Family::Parallelogram { .. } => "parallelogram",
            Family::MultiDiamond { .. } => "multi-diamond",
            Family::OverlappingDiamonds => "overlapping",
            Family::NonGeneric { .. } => "non-generic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub family: Family,
    pub triangle: GcTriangle,
}

/// Number of placements kept per shape once `n` exceeds [`EXHAUSTIVE_UP_TO`].
pub const PLACEMENTS_PER_SHAPE: usize = 3;
/// Every placement of every shape is emitted up to this size.
pub const EXHAUSTIVE_UP_TO: usize = 5;

fn fits(n: usize, u0: usize, v0: usize, du: usize, dv: usize) -> bool {
    u0 >= 1 && (u0 + du - 1) + (v0 + dv - 1) <= n
}

/// All `(u0, v0)` where a `du x dv` rectangle fits, thinned to first, middle and
/// last once `n` is large.
fn placements(n: usize, du: usize, dv: usize) -> Vec<(usize, usize)> {
    let mut all = Vec::new();
    for u0 in 1..=n {
        for v0 in 0..n {
            if fits(n, u0, v0, du, dv) {
                all.push((u0, v0));
            }
        }
    }
    if n <= EXHAUSTIVE_UP_TO || all.len() <= PLACEMENTS_PER_SHAPE {
        return all;
    }
    let last = all.len() - 1;
    let mut picked = vec![all[0], all[last / 2], all[last]];
    picked.dedup();
    picked
}

fn push(out: &mut Vec<Fixture>, name: String, family: Family, t: Result<GcTriangle>) {
    if let Ok(triangle) = t {
        out.push(Fixture {
            name,
            family,
            triangle,
        });
    }
}

/// Triangles for every `n` in `2..=n_max`. Shapes that would force extra
/// equalities at a placement are skipped.
pub fn standard_corpus(n_max: usize, seed: Seed) -> Vec<Fixture> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        let s = seed.derive(n as u64);
        let mut stream = 0u64;
        let mut next = || {
            stream += 1;
            s.derive(stream)
        };

        push(
            &mut out,
            format!("n{n}-regular"),
            Family::Regular,
            realize_pattern(n, &[], next()),
        );

        // One diagonal equality in either direction.
        for (du, dv, dir) in [(1, 2, "up"), (2, 1, "down")] {
            for (u0, v0) in placements(n, du, dv) {
                let b = rectangle_positions(u0, v0, du, dv);
                let name = format!("n{n}-elliptic-{dir}-u{u0}v{v0}");
                push(
                    &mut out,
                    name,
                    Family::Elliptic { equalities: 1 },
                    realize_pattern(n, &[b], next()),
                );
            }
        }
        // Two separate diagonal equalities.
        if n >= 3 {
            let a = rectangle_positions(1, 0, 1, 2);
            let b = rectangle_positions(n - 1, 0, 2, 1);
            let name = format!("n{n}-elliptic-pair");
            push(
                &mut out,
                name,
                Family::Elliptic { equalities: 2 },
                realize_pattern(n, &[a, b], next()),
            );
        }

        for l in 2..=n {
            for (u0, v0) in placements(n, l, l) {
                let b = diamond_positions(u0, u0 + v0, l);
                let name = format!("n{n}-diamond{l}-u{u0}v{v0}");
                push(
                    &mut out,
                    name,
                    Family::Diamond { size: l },
                    realize_pattern(n, &[b], next()),
                );
            }
        }

        for du in 1..=n {
            for dv in 1..=n {
                if du == dv || du + dv < 3 {
                    continue;
                }
                for (u0, v0) in placements(n, du, dv) {
                    let b = rectangle_positions(u0, v0, du, dv);
                    let name = format!("n{n}-para{du}x{dv}-u{u0}v{v0}");
                    let t = realize_pattern(n, &[b], next());
                    let family = if du == 1 || dv == 1 {
                        Family::Elliptic {
                            equalities: du.max(dv) - 1,
                        }
                    } else {
                        Family::Parallelogram { du, dv }
                    };
                    push(&mut out, name, family, t);
                }
            }
        }

        // Two disjoint size-2 diamonds.
        let small = placements(n, 2, 2);
        let mut pairs = 0;
        'outer: for (x, &(u1, v1)) in small.iter().enumerate() {
            for &(u2, v2) in &small[x + 1..] {
                let a = diamond_positions(u1, u1 + v1, 2);
                let b = diamond_positions(u2, u2 + v2, 2);
                if a.iter().any(|p| b.contains(p)) {
                    continue;
                }
                let t = realize_pattern(n, &[a, b], next());
                if t.is_ok() {
                    let name = format!("n{n}-twodiamonds-u{u1}v{v1}-u{u2}v{v2}");
                    push(
                        &mut out,
                        name,
                        Family::MultiDiamond { sizes: vec![2, 2] },
                        t,
                    );
                    pairs += 1;
                    if n > EXHAUSTIVE_UP_TO && pairs >= PLACEMENTS_PER_SHAPE {
                        break 'outer;
                    }
                }
            }
        }

        // Two diamonds of side l sharing an (l-1)-square corner.
        for l in 2..=n {
            for (u0, v0) in placements(n, l + 1, l + 1) {
                let mut b = diamond_positions(u0, u0 + v0, l);
                b.extend(diamond_positions(u0 + 1, u0 + v0 + 2, l));
                b.sort();
                b.dedup();
                let name = format!("n{n}-overlap{l}-u{u0}v{v0}");
                push(
                    &mut out,
                    name,
                    Family::OverlappingDiamonds,
                    realize_pattern(n, &[b], next()),
                );
            }
        }

        // Repeated spectrum values: the entries pinned by `λ_j = ... = λ_{j+m-1}`.
        for m in 2..=n.min(3) {
            for j in 1..=n + 1 - m {
                let pinned = pinned_block(n, j, m);
                let extras: [(&str, Vec<TrianglePosition>); 3] = [
                    ("plain", Vec::new()),
                    ("diag", rectangle_positions(1, 0, 1, 2)),
                    ("diamond", diamond_positions(1, 1, 2)),
                ];
                for (tag, extra) in extras {
                    if n > EXHAUSTIVE_UP_TO && tag != "plain" {
                        continue;
                    }
                    let mut blocks = vec![pinned.clone()];
                    if !extra.is_empty() {
                        blocks.push(extra);
                    }
                    let name = format!("n{n}-repeated{m}-at{j}-{tag}");
                    let family = Family::NonGeneric { multiplicity: m };
                    push(&mut out, name, family, realize_pattern(n, &blocks, next()));
                }
            }
        }
    }
    out
}

/// Positions pinned when `λ_j = ... = λ_{j+m-1}`: `(i, k)` with `j <= i` and
/// `i + n - k <= j + m - 1`.
pub fn pinned_block(n: usize, j: usize, m: usize) -> Vec<TrianglePosition> {
    let mut out = Vec::new();
    for k in n + 1 - m..=n {
        for i in j..=j + m - 1 - (n - k) {
            out.push(TrianglePosition::new(i, k));
        }
    }
    out
}

/// The two overlapping `3 x 3` diamonds in a triangle of size 7.
pub fn overlapping_diamonds_n7(seed: Seed) -> Result<GcTriangle> {
    let mut b: Vec<TrianglePosition> = diamond_positions(1, 1, 3);
    b.extend(diamond_positions(2, 3, 3));
    b.sort();
    b.dedup();
    realize_pattern(7, &[b], seed)
}
