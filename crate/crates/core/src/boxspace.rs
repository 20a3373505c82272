//! Residually finite chains and truncated box spaces.
//!
//! A chain is a nested list of finite-index normal subgroups; its box space
//! is the coarse disjoint union of the quotients, with the cross-piece
//! distance diam(G/N_i) + diam(G/N_j) + i + j taken literally (piece indices
//! are 1-based to match that formula). The constructor verifies the metric
//! axioms of the result rather than assuming them.

use crate::error::{Error, Result};
use crate::group::{GroupModel, QuotientModel, Subgroup};
use crate::metric::{FiniteMetricSpace, Space};

/// A nested chain N_1 >= N_2 >= ... of finite-index normal subgroups, with
/// each quotient materialized.
pub struct NormalChain {
    parent: GroupModel,
    subgroups: Vec<Subgroup>,
    quotients: Vec<QuotientModel>,
}

impl NormalChain {
    /// Validates normality of every level, nesting, and finite index (by
    /// materializing every quotient).
    pub fn new(parent: &GroupModel, subgroups: Vec<Subgroup>) -> Result<Self> {
        if subgroups.is_empty() {
            return Err(Error::Invalid("a chain needs at least one subgroup".into()));
        }
        for (i, pair) in subgroups.windows(2).enumerate() {
            if !pair[0].contains_subgroup(&pair[1]) {
                return Err(Error::NotNested {
                    level: i + 2,
                    witness: format!("{} is not contained in {}", pair[1].name(), pair[0].name()),
                });
            }
        }
        let quotients = subgroups
            .iter()
            .map(|n| QuotientModel::new(parent, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(NormalChain {
            parent: parent.clone(),
            subgroups,
            quotients,
        })
    }

    /// The chain 2^i Z (or m^i Z for any base) inside Z, depth levels.
    pub fn power_chain_in_z(parent: &GroupModel, base: i64, depth: usize) -> Result<Self> {
        let mut subs = Vec::new();
        let mut m: i64 = 1;
        for i in 1..=depth {
            m = m.checked_mul(base).ok_or_else(|| {
                Error::Invalid(format!("chain modulus overflows at level {i}"))
            })?;
            subs.push(Subgroup::sublattice(
                parent,
                vec![vec![m]],
                &format!("{m}Z"),
            )?);
        }
        Self::new(parent, subs)
    }

    pub fn parent(&self) -> &GroupModel {
        &self.parent
    }

    /// Number of materialized levels.
    pub fn depth(&self) -> usize {
        self.subgroups.len()
    }

    /// Subgroup N_i, 1-based.
    pub fn subgroup(&self, i: usize) -> &Subgroup {
        assert!((1..=self.depth()).contains(&i), "chain level out of range");
        &self.subgroups[i - 1]
    }

    /// Quotient G/N_i, 1-based.
    pub fn quotient(&self, i: usize) -> &QuotientModel {
        assert!((1..=self.depth()).contains(&i), "chain level out of range");
        &self.quotients[i - 1]
    }
}

/// Is the projection onto level `i` an isometric bijection on the open
/// R-ball at the identity?
pub fn isometric_on_ball(q: &QuotientModel, r: u32) -> Result<bool> {
    let ball = q.parent().ball(r)?;
    let mut seen = vec![false; q.order()];
    let mut image = Vec::with_capacity(ball.len());
    for e in &ball {
        let c = q.project(e)?;
        if std::mem::replace(&mut seen[c], true) {
            return Ok(false); // not injective
        }
        image.push(c);
    }
    // surjectivity onto the quotient ball (the ball-pushforward lemma makes
    // the image exactly the quotient ball; check it anyway)
    for c in 0..q.order() {
        if (q.group().length(c) < r) != seen[c] {
            return Ok(false);
        }
    }
    // isometry: pairwise distances agree
    let qg = q.group();
    for (a, ea) in ball.iter().enumerate() {
        for (b, eb) in ball.iter().enumerate().skip(a + 1) {
            let parent_d = q.parent().distance(ea, eb)?;
            let quot_d = qg.length(qg.mul(qg.inv(image[a]), image[b]));
            if parent_d != quot_d {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The largest R <= r_max with the projection onto level `i` an isometric
/// bijection on the open R-ball. At R = 1 the ball is the identity alone,
/// so the result is at least 1.
pub fn injectivity_radius(chain: &NormalChain, i: usize, r_max: u32) -> Result<u32> {
    let q = chain.quotient(i);
    let mut last_pass = 0;
    for r in 1..=r_max {
        if isometric_on_ball(q, r)? {
            last_pass = r;
        } else {
            break;
        }
    }
    Ok(last_pass)
}

/// The minimal level i with injectivity radius >= r (the i_0 of the
/// isometry lemma), or None if no materialized level suffices.
pub fn minimal_isometric_level(chain: &NormalChain, r: u32) -> Result<Option<usize>> {
    for i in 1..=chain.depth() {
        if isometric_on_ball(chain.quotient(i), r)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// One piece of a coarse disjoint union.
#[derive(Debug, Clone)]
pub struct BoxPiece {
    /// 1-based piece index (the i of the cross-distance formula).
    pub index: usize,
    /// First point of the piece in the union space.
    pub start: usize,
    /// Number of points.
    pub len: usize,
    /// Exact diameter of the piece.
    pub diameter: u32,
    pub name: String,
}

/// A truncated box space (or ball union): a coarse disjoint union of finite
/// pieces with the literal cross-distance formula.
pub struct BoxSpace {
    space: Space,
    pieces: Vec<BoxPiece>,
    /// (piece index 1-based, coset index within the quotient) per point.
    points: Vec<(usize, usize)>,
}

impl BoxSpace {
    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn pieces(&self) -> &[BoxPiece] {
        &self.pieces
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }

    /// Cross-piece distance between pieces i and j (1-based, distinct).
    pub fn cross_distance(&self, i: usize, j: usize) -> u32 {
        assert_ne!(i, j);
        self.pieces[i - 1].diameter + self.pieces[j - 1].diameter + (i + j) as u32
    }
}

fn assemble_union(
    per_piece: Vec<(String, Vec<(usize, String)>, Vec<Vec<u32>>)>,
) -> Result<BoxSpace> {
    // per_piece: (name, [(coset index, label)], within-piece distance matrix)
    let mut pieces = Vec::new();
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (idx0, (name, members, within)) in per_piece.iter().enumerate() {
        let index = idx0 + 1;
        let start = points.len();
        let mut diameter = 0;
        for (a, (coset, label)) in members.iter().enumerate() {
            points.push((index, *coset));
            labels.push(format!("{index}:{label}"));
            for b in (a + 1)..members.len() {
                diameter = diameter.max(within[a][b]);
            }
        }
        pieces.push(BoxPiece {
            index,
            start,
            len: members.len(),
            diameter,
            name: name.clone(),
        });
    }
    let n = points.len();
    let mut matrix = vec![vec![0u32; n]; n];
    for (pa, piece_a) in pieces.iter().enumerate() {
        for (pb, piece_b) in pieces.iter().enumerate() {
            let cross = piece_a.diameter + piece_b.diameter + (piece_a.index + piece_b.index) as u32;
            for a in 0..piece_a.len {
                for b in 0..piece_b.len {
                    matrix[piece_a.start + a][piece_b.start + b] = if pa == pb {
                        per_piece[pa].2[a][b]
                    } else {
                        cross
                    };
                }
            }
        }
    }
    let space = FiniteMetricSpace::from_matrix(labels, matrix)?;
    space.check_axioms()?;
    let boxed = BoxSpace {
        space,
        pieces,
        points,
    };
    Ok(boxed)
}

fn quotient_matrix(q: &QuotientModel, members: &[usize]) -> Vec<Vec<u32>> {
    let g = q.group();
    members
        .iter()
        .map(|&a| {
            members
                .iter()
                .map(|&b| g.length(g.mul(g.inv(a), b)))
                .collect()
        })
        .collect()
}

/// The box space of the first k levels of the chain: pieces are the whole
/// quotients, with the cross-distance formula on their diameters.
pub fn build_box(chain: &NormalChain, k: usize) -> Result<BoxSpace> {
    if k == 0 || k > chain.depth() {
        return Err(Error::Invalid(format!(
            "box truncation k={k} must be between 1 and the chain depth {}",
            chain.depth()
        )));
    }
    let per_piece = (1..=k)
        .map(|i| {
            let q = chain.quotient(i);
            let members: Vec<usize> = (0..q.order()).collect();
            let labeled = members
                .iter()
                .map(|&c| (c, q.group().label(c).to_string()))
                .collect();
            let within = quotient_matrix(q, &members);
            (q.group().name().to_string(), labeled, within)
        })
        .collect();
    assemble_union(per_piece)
}

/// The coarse disjoint union of quotient balls B_{G/N_i}(1, r_i), with the
/// box-space cross formula applied to the ball diameters. The radii must be
/// strictly increasing and there must be one per materialized level used.
pub fn build_ball_union(chain: &NormalChain, radii: &[u32]) -> Result<BoxSpace> {
    if radii.is_empty() || radii.len() > chain.depth() {
        return Err(Error::Invalid(format!(
            "need between 1 and {} radii, got {}",
            chain.depth(),
            radii.len()
        )));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("ball-union radii must be strictly increasing".into()));
    }
    if radii.iter().any(|&r| r == 0) {
        return Err(Error::Invalid("ball-union radii must be positive".into()));
    }
    let per_piece = radii
        .iter()
        .enumerate()
        .map(|(idx0, &r)| {
            let q = chain.quotient(idx0 + 1);
            let members: Vec<usize> = (0..q.order()).filter(|&c| q.group().length(c) < r).collect();
            let labeled = members
                .iter()
                .map(|&c| (c, q.group().label(c).to_string()))
                .collect();
            let within = quotient_matrix(q, &members);
            (
                format!("B_{}(1,{r})", q.group().name()),
                labeled,
                within,
            )
        })
        .collect();
    assemble_union(per_piece)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::LatticeGroup;
    use std::sync::Arc;

    fn z(window: u32) -> GroupModel {
        GroupModel::Lattice(Arc::new(LatticeGroup::z(window)))
    }

    fn chain_2i(depth: usize, window: u32) -> NormalChain {
        NormalChain::power_chain_in_z(&z(window), 2, depth).unwrap()
    }

    #[test]
    fn box_of_two_pieces_cross_distance() {
        let chain = chain_2i(2, 64);
        let b = build_box(&chain, 2).unwrap();
        assert_eq!(b.pieces()[0].diameter, 1); // Z/2
        assert_eq!(b.pieces()[1].diameter, 2); // Z/4
        assert_eq!(b.cross_distance(1, 2), 6);
        let i = b.pieces()[0].start;
        let j = b.pieces()[1].start;
        assert_eq!(b.space().dist(i, j), 6);
    }

    #[test]
    fn box_of_one_piece_is_the_quotient() {
        let chain = chain_2i(1, 64);
        let b = build_box(&chain, 1).unwrap();
        assert_eq!(b.space().len(), 2);
        assert_eq!(b.space().dist(0, 1), 1);
    }

    #[test]
    fn power_of_three_diameters() {
        let chain = NormalChain::power_chain_in_z(&z(80), 3, 3).unwrap();
        let b = build_box(&chain, 3).unwrap();
        let diams: Vec<u32> = b.pieces().iter().map(|p| p.diameter).collect();
        assert_eq!(diams, vec![1, 4, 13]);
    }

    #[test]
    fn within_piece_distances_bounded_by_diameter_and_cross_exceeds_both() {
        let chain = chain_2i(3, 64);
        let b = build_box(&chain, 3).unwrap();
        for (x, &(pi, _)) in b.points().iter().enumerate() {
            for (y, &(pj, _)) in b.points().iter().enumerate() {
                let d = b.space().dist(x, y);
                if pi == pj {
                    assert!(d <= b.pieces()[pi - 1].diameter);
                } else {
                    assert!(d > b.pieces()[pi - 1].diameter);
                    assert!(d > b.pieces()[pj - 1].diameter);
                }
            }
        }
    }

    #[test]
    fn injectivity_radius_examples() {
        let chain = chain_2i(7, 200);
        // Z -> Z/2: ball {-1,0,1} is not injective, so radius 1.
        assert_eq!(injectivity_radius(&chain, 1, 10).unwrap(), 1);
        // any chain at r_max = 1 gives 1
        assert_eq!(injectivity_radius(&chain, 3, 1).unwrap(), 1);
        // Z -> Z/2^i for i >= 2: radius 2^{i-2} + 1
        for i in 2..=7 {
            let expect = (1u32 << (i - 2)) + 1;
            assert_eq!(injectivity_radius(&chain, i, 64).unwrap(), expect, "level {i}");
        }
    }

    #[test]
    fn injectivity_radius_z12() {
        let parent = z(100);
        let chain = NormalChain::new(
            &parent,
            vec![Subgroup::sublattice(&parent, vec![vec![12]], "12Z").unwrap()],
        )
        .unwrap();
        assert!(injectivity_radius(&chain, 1, 4).unwrap() >= 4);
    }

    #[test]
    fn minimal_level_matches_staircase() {
        let chain = chain_2i(7, 200);
        assert_eq!(minimal_isometric_level(&chain, 2).unwrap(), Some(2));
        assert_eq!(minimal_isometric_level(&chain, 3).unwrap(), Some(3));
        assert_eq!(minimal_isometric_level(&chain, 9).unwrap(), Some(5));
        assert_eq!(minimal_isometric_level(&chain, 34).unwrap(), None);
    }

    #[test]
    fn ball_union_example() {
        let chain = chain_2i(2, 64);
        let u = build_ball_union(&chain, &[1, 2]).unwrap();
        assert_eq!(u.pieces()[0].len, 1); // B_{Z/2}(1,1) = {0}
        assert_eq!(u.pieces()[1].len, 3); // B_{Z/4}(1,2) = {0,1,3}
        assert_eq!(u.pieces()[0].diameter, 0);
        assert_eq!(u.pieces()[1].diameter, 2);
        assert_eq!(u.cross_distance(1, 2), 5); // 0 + 2 + 1 + 2
    }

    #[test]
    fn ball_union_all_radius_one_gives_singletons() {
        let chain = chain_2i(3, 64);
        assert!(build_ball_union(&chain, &[1, 1, 1]).is_err()); // not strictly increasing
        let u = build_ball_union(&chain, &[1, 2, 3]).unwrap();
        assert_eq!(u.pieces()[0].len, 1);
    }

    #[test]
    fn non_nested_chain_is_rejected() {
        let parent = z(50);
        let subs = vec![
            Subgroup::sublattice(&parent, vec![vec![4]], "4Z").unwrap(),
            Subgroup::sublattice(&parent, vec![vec![6]], "6Z").unwrap(),
        ];
        assert!(matches!(
            NormalChain::new(&parent, subs),
            Err(Error::NotNested { .. })
        ));
    }

    #[test]
    fn theorem_one_ball_family_embeds() {
        // For each r below the level's injectivity radius, the parent ball
        // B(1, r) is isometric to the quotient ball at that level.
        let chain = chain_2i(6, 200);
        for r in [2u32, 3, 5, 9, 17] {
            let level = minimal_isometric_level(&chain, r).unwrap().unwrap();
            assert!(isometric_on_ball(chain.quotient(level), r).unwrap());
        }
    }
}
