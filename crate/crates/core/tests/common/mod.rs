//! Shared helpers for the integration and acceptance suites: carrier
//! builders, randomized decomposition-sequence generators, an independent
//! brute-force dimension oracle, and the finite-group zoo.

#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;

use fdc_core::decomp::{Decomposition, DecompositionSequence, Stage};
use fdc_core::group::{Elem, FiniteGroup, GroupModel, GroupSpace, LatticeGroup};
use fdc_core::metric::{FiniteMetricSpace, PointSubset, Space};

/// Z restricted to [lo, hi] with the word metric |a - b|.
pub fn z_window_space(lo: i64, hi: i64) -> Space {
    let labels = (lo..=hi).map(|v| v.to_string()).collect();
    FiniteMetricSpace::from_fn(labels, move |i, j| {
        (i as i64 - j as i64).unsigned_abs() as u32
    })
}

pub fn z_model(window: u32) -> GroupModel {
    GroupModel::Lattice(Arc::new(LatticeGroup::z(window)))
}

pub fn z2_model(window: u32) -> GroupModel {
    GroupModel::Lattice(Arc::new(LatticeGroup::zn(2, window)))
}

pub fn z_interval_ctx(model: &GroupModel, lo: i64, hi: i64) -> GroupSpace {
    model
        .space_over((lo..=hi).map(|v| Elem::Vector(vec![v])).collect())
        .unwrap()
}

pub fn z2_patch_ctx(model: &GroupModel, lo: i64, hi: i64) -> GroupSpace {
    let elems: Vec<Elem> = (lo..=hi)
        .flat_map(|x| (lo..=hi).map(move |y| Elem::Vector(vec![x, y])))
        .collect();
    model.space_over(elems).unwrap()
}

/// Splits [a, b] into alternating color blocks with every block at least
/// max(1, gap-1) long, so consecutive same-color blocks are gap-separated.
/// Intervals too short for two blocks come back as a single piece.
fn split_interval<R: Rng>(
    rng: &mut R,
    a: i64,
    b: i64,
    gap: u32,
) -> (Vec<(i64, i64)>, Vec<(i64, i64)>) {
    let min_block = (gap as i64 - 1).max(1);
    let len = b - a + 1;
    if len < 2 * min_block {
        return (vec![(a, b)], vec![]);
    }
    let mut colors = (Vec::new(), Vec::new());
    let mut lo = a;
    let mut color0 = true;
    while lo <= b {
        let max_block = (min_block + 8).min(b - lo + 1);
        let mut block = rng.random_range(min_block..=max_block);
        // never leave a remainder shorter than one block
        if b - (lo + block) + 1 < min_block {
            block = b - lo + 1;
        }
        let piece = (lo, lo + block - 1);
        if color0 {
            colors.0.push(piece);
        } else {
            colors.1.push(piece);
        }
        lo += block;
        color0 = !color0;
    }
    colors
}

fn interval_subset(space: &Space, lo: i64, piece: (i64, i64)) -> PointSubset {
    PointSubset::from_indices(space, (piece.0..=piece.1).map(|v| (v - lo) as usize))
}

/// Strictly increasing random gaps; with `doubling` each gap is at least
/// twice the previous one (the regime in which the forward transform
/// achieves Lebesgue bounds floor(R_k/4)).
pub fn random_gaps<R: Rng>(rng: &mut R, stages: usize, max_gap: u32, doubling: bool) -> Vec<u32> {
    let mut gaps = Vec::new();
    let mut lo = 4u32;
    for s in 0..stages {
        let headroom = if doubling {
            max_gap >> (stages - 1 - s)
        } else {
            max_gap - (stages - 1 - s) as u32
        };
        let g = rng.random_range(lo..=headroom.max(lo));
        gaps.push(g);
        lo = if doubling { 2 * g } else { g + 1 };
    }
    gaps
}

/// A randomized ordinary decomposition sequence over a Z interval: up to
/// `max_stages` stages with strictly increasing gaps at most `max_gap`.
pub fn random_interval_sequence<R: Rng>(
    rng: &mut R,
    max_stages: usize,
    max_gap: u32,
    doubling: bool,
) -> DecompositionSequence {
    let len = rng.random_range(60..=500i64);
    let stages_n = rng.random_range(1..=max_stages);
    let gaps = random_gaps(rng, stages_n, max_gap, doubling);
    interval_sequence_with_gaps(rng, len, &gaps)
}

/// Same, but over an explicit carrier length and gap list.
pub fn interval_sequence_with_gaps<R: Rng>(
    rng: &mut R,
    len: i64,
    gaps: &[u32],
) -> DecompositionSequence {
    let space = z_window_space(0, len - 1);
    let start = PointSubset::full(&space);
    let mut prev_pieces: Vec<(i64, i64)> = vec![(0, len - 1)];
    let mut stages = Vec::new();
    for &gap in gaps {
        let mut parts = Vec::new();
        let mut next = Vec::new();
        for &(a, b) in &prev_pieces {
            let (c0, c1) = split_interval(rng, a, b, gap);
            next.extend(c0.iter().copied());
            next.extend(c1.iter().copied());
            parts.push(
                Decomposition::new(
                    interval_subset(&space, 0, (a, b)),
                    c0.into_iter().map(|p| interval_subset(&space, 0, p)).collect(),
                    c1.into_iter().map(|p| interval_subset(&space, 0, p)).collect(),
                )
                .unwrap(),
            );
        }
        stages.push(Stage { gap, parts });
        prev_pieces = next;
    }
    DecompositionSequence::new(start, stages).unwrap()
}

/// A randomized ordinary decomposition sequence over a Z^2 patch: stage 1
/// peels x into strips, stage 2 peels y inside each strip, any later stage
/// passes pieces through.
pub fn random_lattice_sequence<R: Rng>(
    rng: &mut R,
    max_stages: usize,
    max_gap: u32,
    doubling: bool,
) -> DecompositionSequence {
    let stages_n = rng.random_range(1..=max_stages);
    let gaps = random_gaps(rng, stages_n, max_gap, doubling);
    lattice_sequence_with_gaps(rng, &gaps)
}

/// Same, over an explicit gap list. The patch is sized to fit at least two
/// blocks of the largest gap per axis, within the 484-point budget.
pub fn lattice_sequence_with_gaps<R: Rng>(rng: &mut R, gaps: &[u32]) -> DecompositionSequence {
    let max_gap = gaps.iter().copied().max().unwrap_or(4) as i64;
    let lo = (2 * (max_gap - 1).max(1)).min(22);
    let w = rng.random_range(lo.max(12)..=22i64);
    let labels = (0..w * w)
        .map(|i| format!("({},{})", i / w, i % w))
        .collect();
    let width = w;
    let space = FiniteMetricSpace::from_fn(labels, move |i, j| {
        let (xi, yi) = (i as i64 / width, i as i64 % width);
        let (xj, yj) = (j as i64 / width, j as i64 % width);
        ((xi - xj).abs() + (yi - yj).abs()) as u32
    });
    let rect = |x0: i64, x1: i64, y0: i64, y1: i64| -> PointSubset {
        PointSubset::from_indices(
            &space,
            (x0..=x1).flat_map(|x| (y0..=y1).map(move |y| (x * w + y) as usize)),
        )
    };
    let start = PointSubset::full(&space);
    // pieces as rectangles (x0, x1, y0, y1)
    let mut prev: Vec<(i64, i64, i64, i64)> = vec![(0, w - 1, 0, w - 1)];
    let mut stages = Vec::new();
    for (si, &gap) in gaps.iter().enumerate() {
        let mut parts = Vec::new();
        let mut next = Vec::new();
        for &(x0, x1, y0, y1) in &prev {
            let (c0, c1) = match si {
                0 => {
                    let (a, b) = split_interval(rng, x0, x1, gap);
                    (
                        a.into_iter().map(|(p, q)| (p, q, y0, y1)).collect::<Vec<_>>(),
                        b.into_iter().map(|(p, q)| (p, q, y0, y1)).collect::<Vec<_>>(),
                    )
                }
                1 => {
                    let (a, b) = split_interval(rng, y0, y1, gap);
                    (
                        a.into_iter().map(|(p, q)| (x0, x1, p, q)).collect::<Vec<_>>(),
                        b.into_iter().map(|(p, q)| (x0, x1, p, q)).collect::<Vec<_>>(),
                    )
                }
                _ => (vec![(x0, x1, y0, y1)], vec![]),
            };
            next.extend(c0.iter().copied());
            next.extend(c1.iter().copied());
            parts.push(
                Decomposition::new(
                    rect(x0, x1, y0, y1),
                    c0.into_iter().map(|(a, b, c, d)| rect(a, b, c, d)).collect(),
                    c1.into_iter().map(|(a, b, c, d)| rect(a, b, c, d)).collect(),
                )
                .unwrap(),
            );
        }
        stages.push(Stage { gap, parts });
        prev = next;
    }
    DecompositionSequence::new(start, stages).unwrap()
}

/// Independent brute-force oracle for the fixed-scale dimension: exhaustive
/// search over all colorings in carrier order, with sound prefix pruning
/// (component diameters only grow as points are added). No ordering
/// heuristics, no symmetry breaking; components are recomputed from scratch
/// at every step.
pub fn asdim_oracle(region: &PointSubset, r: u32, bound: u32, max_colors: usize) -> Option<u32> {
    let points = region.bits().to_vec();
    let space = region.space();
    let dist = |a: usize, b: usize| space.dist(points[a], points[b]);
    fn color_class_ok(
        members: &[usize],
        dist: &dyn Fn(usize, usize) -> u32,
        r: u32,
        bound: u32,
    ) -> bool {
        // components under the closer-than-r relation, diameters <= bound
        let mut remaining: Vec<usize> = members.to_vec();
        while let Some(seed) = remaining.pop() {
            let mut comp = vec![seed];
            let mut frontier = vec![seed];
            while let Some(x) = frontier.pop() {
                let mut keep = Vec::new();
                for &y in &remaining {
                    if dist(x, y) < r {
                        comp.push(y);
                        frontier.push(y);
                    } else {
                        keep.push(y);
                    }
                }
                remaining = keep;
            }
            for (ai, &a) in comp.iter().enumerate() {
                for &b in &comp[ai + 1..] {
                    if dist(a, b) > bound {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn assign(
        pos: usize,
        total: usize,
        colors: usize,
        coloring: &mut Vec<usize>,
        dist: &dyn Fn(usize, usize) -> u32,
        r: u32,
        bound: u32,
    ) -> bool {
        if pos == total {
            return true;
        }
        for c in 0..colors {
            coloring[pos] = c;
            let members: Vec<usize> = (0..=pos).filter(|&i| coloring[i] == c).collect();
            if color_class_ok(&members, dist, r, bound)
                && assign(pos + 1, total, colors, coloring, dist, r, bound)
            {
                return true;
            }
        }
        coloring[pos] = usize::MAX;
        false
    }
    for m in 1..=max_colors {
        let mut coloring = vec![usize::MAX; points.len()];
        if assign(0, points.len(), m, &mut coloring, &dist, r, bound) {
            return Some((m - 1) as u32);
        }
    }
    None
}

/// Finite groups of order at most 16 used by the acceptance suite.
pub fn zoo_to_16() -> Vec<Arc<FiniteGroup>> {
    let mut zoo: Vec<Arc<FiniteGroup>> = (1..=16).map(FiniteGroup::cyclic).collect();
    let c2 = FiniteGroup::cyclic(2);
    let c4 = FiniteGroup::cyclic(4);
    zoo.push(FiniteGroup::direct_product(&c2, &c2));
    zoo.push(FiniteGroup::direct_product(&c2, &c4));
    zoo.push(FiniteGroup::direct_product(&c2, &FiniteGroup::direct_product(&c2, &c2)));
    zoo.push(FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3)));
    zoo.push(FiniteGroup::symmetric(3));
    zoo.push(FiniteGroup::dihedral(4));
    zoo.push(FiniteGroup::dihedral(5));
    zoo.push(FiniteGroup::dihedral(6));
    zoo.push(FiniteGroup::dihedral(8));
    zoo.push(FiniteGroup::quaternion());
    zoo.push(FiniteGroup::alternating4());
    zoo
}

/// Additional zoo members of order 17..=24.
pub fn zoo_17_to_24() -> Vec<Arc<FiniteGroup>> {
    let mut zoo: Vec<Arc<FiniteGroup>> = (17..=24).map(FiniteGroup::cyclic).collect();
    zoo.push(FiniteGroup::symmetric(4));
    zoo.push(FiniteGroup::dihedral(12));
    zoo.push(FiniteGroup::direct_product(
        &FiniteGroup::cyclic(2),
        &FiniteGroup::cyclic(12),
    ));
    zoo.push(FiniteGroup::direct_product(
        &FiniteGroup::cyclic(3),
        &FiniteGroup::quaternion(),
    ));
    zoo.push(FiniteGroup::direct_product(
        &FiniteGroup::cyclic(2),
        &FiniteGroup::alternating4(),
    ));
    zoo
}
