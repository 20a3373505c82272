//! Equi-variant pullback and pushforward of decompositions along a quotient
//! projection, under a separation constant c with N_K meeting the open
//! 2c-ball only at the identity.
//!
//! Pullback: a piece Y of the quotient with diam(Y) < c lifts to a unique
//! isometric copy U_Y near any chosen base preimage; the preimage of Y is
//! the disjoint union of right translates U_Y . h over h in N_K. Only
//! translates fully inside the window are materialized.
//!
//! Pushforward: an N_K-invariant decomposition of a window projects to a
//! decomposition of the quotient, one image piece per translate orbit.

use crate::error::{Error, Result};
use crate::group::{same_model, Elem, GroupModel, GroupSpace, QuotientModel};
use crate::metric::{same_space, PointSubset};

use super::{verify_full, verify_invariance, Decomposition, FullVerdict, InvarianceVerdict};

fn check_separation(q: &QuotientModel, c: u32) -> Result<()> {
    if c == 0 {
        return Err(Error::Invalid("separation constant must be positive".into()));
    }
    let identity = q.parent().identity();
    for h in q.normal().enumerate_within(2 * c - 1)? {
        if h != identity {
            let len = q.parent().word_length(&h)?;
            return Err(Error::SeparationViolated {
                scale: 2 * c,
                witness: q.parent().label(&h),
                length: len,
            });
        }
    }
    Ok(())
}

fn check_piece_diameters(d: &Decomposition, c: u32) -> Result<()> {
    for (color, family) in [d.color(0), d.color(1)].into_iter().enumerate() {
        for (pi, piece) in family.pieces().iter().enumerate() {
            let diam = piece.diameter();
            if diam >= c {
                return Err(Error::PieceTooLarge {
                    piece: format!("color {color} piece {pi}"),
                    diameter: diam,
                    bound: c,
                });
            }
        }
    }
    Ok(())
}

fn window_length_bound(window: &GroupSpace) -> Result<u32> {
    let mut best = 0;
    for e in window.elems() {
        best = best.max(window.model().word_length(e)?);
    }
    Ok(best)
}

/// Result of a pullback: the window decomposition plus the verdicts the
/// construction is obliged to check.
#[derive(Debug)]
pub struct PullbackOutcome {
    pub decomposition: Decomposition,
    /// Whether the materialized translates cover the whole window.
    pub cover_ok: bool,
    /// Invariance of the output under the chain subgroup, on the window.
    pub invariance: InvarianceVerdict,
    /// Every materialized translate is isometric to its image piece.
    pub lifts_isometric: bool,
}

/// Pulls a decomposition of the quotient back to a window in the parent
/// group, as disjoint unions of translates of isometric lifts.
pub fn pullback_equivariant(
    d: &Decomposition,
    q: &QuotientModel,
    qspace: &GroupSpace,
    window: &GroupSpace,
    c: u32,
) -> Result<PullbackOutcome> {
    if !same_space(d.space(), qspace.space()) {
        return Err(Error::CarrierMismatch);
    }
    let quotient_model = GroupModel::Finite(q.group().clone());
    if !same_model(qspace.model(), &quotient_model) {
        return Err(Error::Invalid(
            "the quotient space does not belong to the given quotient model".into(),
        ));
    }
    check_separation(q, c)?;
    check_piece_diameters(d, c)?;

    let lift_ball = q.parent().ball(c)?;
    let quotient_diameter = q.group().diameter();
    let translation_bound = window_length_bound(window)? + quotient_diameter + c;
    let identity = q.parent().identity();
    let translations: Vec<Elem> = q.normal().enumerate_within(translation_bound)?;

    let mut colors: [Vec<PointSubset>; 2] = [Vec::new(), Vec::new()];
    let mut lifts_isometric = true;
    for (ci, family) in [d.color(0), d.color(1)].into_iter().enumerate() {
        for piece in family.pieces() {
            if piece.is_empty() {
                continue;
            }
            // base preimage: the canonical representative of the least coset
            let base_point = piece.iter().next().expect("piece is nonempty");
            let base_coset = qspace.elem(base_point).as_idx().expect("quotient points are cosets");
            let base_rep = q.rep(base_coset).clone();
            // unique lift of each coset of the piece inside B(base, c)
            let mut lift: Vec<Elem> = Vec::with_capacity(piece.len());
            let mut cosets: Vec<usize> = Vec::with_capacity(piece.len());
            for y in piece.iter() {
                let target = qspace.elem(y).as_idx().expect("quotient points are cosets");
                let found = lift_ball
                    .iter()
                    .map(|w| q.parent().mul(&base_rep, w))
                    .find(|u| q.project(u).map(|cu| cu == target).unwrap_or(false));
                match found {
                    Some(u) => {
                        lift.push(u);
                        cosets.push(target);
                    }
                    None => {
                        return Err(Error::Invalid(format!(
                            "no lift of coset {} within distance {c} of {}",
                            q.group().label(target),
                            q.parent().label(&base_rep),
                        )))
                    }
                }
            }
            for h in &translations {
                let translated: Option<Vec<usize>> = lift
                    .iter()
                    .map(|u| {
                        let moved = if *h == identity {
                            u.clone()
                        } else {
                            q.parent().mul(u, h)
                        };
                        window.index_of(&moved)
                    })
                    .collect();
                // only translates fully inside the window are observable
                let Some(points) = translated else { continue };
                let subset = PointSubset::from_indices(window.space(), points.iter().copied());
                for (a, &pa) in points.iter().enumerate() {
                    for (b, &pb) in points.iter().enumerate().skip(a + 1) {
                        let down = qspace.space().dist(
                            qspace.index_of(&Elem::Idx(cosets[a])).expect("coset point"),
                            qspace.index_of(&Elem::Idx(cosets[b])).expect("coset point"),
                        );
                        if window.space().dist(pa, pb) != down {
                            lifts_isometric = false;
                        }
                    }
                }
                colors[ci].push(subset);
            }
        }
    }
    let region = PointSubset::full(window.space());
    let [c0, c1] = colors;
    let decomposition = Decomposition::new(region.clone(), c0, c1)?;
    let cover_ok = region
        .difference(&decomposition.pooled().union())
        .is_empty();
    let invariance = verify_invariance(&decomposition, window, q.normal())?;
    Ok(PullbackOutcome {
        decomposition,
        cover_ok,
        invariance,
        lifts_isometric,
    })
}

/// Result of a pushforward: the quotient decomposition plus the checked
/// verdicts (nothing is assumed).
#[derive(Debug)]
pub struct PushforwardOutcome {
    pub decomposition: Decomposition,
    /// Invariance of the input, re-checked as the precondition.
    pub invariance: InvarianceVerdict,
    /// When a full bound is supplied: the input's full verdict at that bound.
    pub input_full: Option<FullVerdict>,
    /// When a full bound is supplied: the output's full verdict at the same
    /// bound (Lebesgue preservation, checked).
    pub output_full: Option<FullVerdict>,
}

/// Pushes an N_K-invariant decomposition of a window forward to the
/// quotient: one image piece per translate orbit.
pub fn pushforward_equivariant(
    d: &Decomposition,
    q: &QuotientModel,
    qspace: &GroupSpace,
    window: &GroupSpace,
    c: u32,
    full_bound: Option<u32>,
) -> Result<PushforwardOutcome> {
    if !same_space(d.space(), window.space()) {
        return Err(Error::CarrierMismatch);
    }
    let quotient_model = GroupModel::Finite(q.group().clone());
    if !same_model(qspace.model(), &quotient_model) {
        return Err(Error::Invalid(
            "the quotient space does not belong to the given quotient model".into(),
        ));
    }
    check_separation(q, c)?;
    check_piece_diameters(d, c)?;
    let invariance = verify_invariance(d, window, q.normal())?;
    if !invariance.pass {
        let w = invariance.witness.as_ref().expect("failed verdicts carry a witness");
        return Err(Error::Invalid(format!(
            "input decomposition is not invariant under {}: color {} piece {} translated by {}",
            q.normal().name(),
            w.color,
            w.piece,
            q.parent().label(&w.translation),
        )));
    }
    let input_full = match full_bound {
        Some(r) => Some(verify_full(d, r)?),
        None => None,
    };

    let project_subset = |s: &PointSubset| -> Result<PointSubset> {
        let mut indices = Vec::new();
        for p in s.iter() {
            let coset = q.project(window.elem(p))?;
            let point = qspace
                .index_of(&Elem::Idx(coset))
                .ok_or_else(|| Error::Invalid("coset missing from the quotient space".into()))?;
            indices.push(point);
        }
        Ok(PointSubset::from_indices(qspace.space(), indices))
    };

    let mut colors: [Vec<PointSubset>; 2] = [Vec::new(), Vec::new()];
    for (ci, family) in [d.color(0), d.color(1)].into_iter().enumerate() {
        for piece in family.pieces() {
            if piece.is_empty() {
                continue;
            }
            let image = project_subset(piece)?;
            if !colors[ci].iter().any(|seen| seen == &image) {
                colors[ci].push(image);
            }
        }
    }
    let region = project_subset(d.region())?;
    let [c0, c1] = colors;
    let decomposition = Decomposition::new(region, c0, c1)?;
    let output_full = match full_bound {
        Some(r) => Some(verify_full(&decomposition, r)?),
        None => None,
    };
    Ok(PushforwardOutcome {
        decomposition,
        invariance,
        input_full,
        output_full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{LatticeGroup, Subgroup};
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn setup(
        modulus: i64,
        window_lo: i64,
        window_hi: i64,
    ) -> (GroupModel, QuotientModel, GroupSpace, GroupSpace) {
        let parent = GroupModel::Lattice(Arc::new(LatticeGroup::z(600)));
        let n = Subgroup::sublattice(&parent, vec![vec![modulus]], &format!("{modulus}Z")).unwrap();
        let q = QuotientModel::new(&parent, &n).unwrap();
        let qspace = q.quotient_space().unwrap();
        let window = parent
            .space_over((window_lo..=window_hi).map(|v| Elem::Vector(vec![v])).collect())
            .unwrap();
        (parent, q, qspace, window)
    }

    fn coset_subset(q: &QuotientModel, qspace: &GroupSpace, reps: &[i64]) -> PointSubset {
        let indices: Vec<usize> = reps
            .iter()
            .map(|&v| {
                let c = q.project(&Elem::Vector(vec![v])).unwrap();
                qspace.index_of(&Elem::Idx(c)).unwrap()
            })
            .collect();
        PointSubset::from_indices(qspace.space(), indices)
    }

    fn window_interval(window: &GroupSpace, a: i64, b: i64) -> PointSubset {
        let indices: Vec<usize> = (a..=b)
            .map(|v| window.index_of(&Elem::Vector(vec![v])).unwrap())
            .collect();
        PointSubset::from_indices(window.space(), indices)
    }

    fn piece_sets(d: &Decomposition, color: usize) -> BTreeSet<Vec<usize>> {
        d.color(color)
            .pieces()
            .iter()
            .filter(|p| !p.is_empty())
            .map(|p| p.bits().to_vec())
            .collect()
    }

    #[test]
    fn pullback_z4_example() {
        let (_parent, q, qspace, window) = setup(4, -8, 7);
        let d = Decomposition::new(
            PointSubset::full(qspace.space()),
            vec![coset_subset(&q, &qspace, &[0, 1])],
            vec![coset_subset(&q, &qspace, &[2, 3])],
        )
        .unwrap();
        let out = pullback_equivariant(&d, &q, &qspace, &window, 2).unwrap();
        assert!(out.cover_ok);
        assert!(out.invariance.pass);
        assert!(out.lifts_isometric);
        let expect0: BTreeSet<Vec<usize>> = [
            window_interval(&window, -8, -7),
            window_interval(&window, -4, -3),
            window_interval(&window, 0, 1),
            window_interval(&window, 4, 5),
        ]
        .iter()
        .map(|p| p.bits().to_vec())
        .collect();
        assert_eq!(piece_sets(&out.decomposition, 0), expect0);
        let expect1: BTreeSet<Vec<usize>> = [
            window_interval(&window, -6, -5),
            window_interval(&window, -2, -1),
            window_interval(&window, 2, 3),
            window_interval(&window, 6, 7),
        ]
        .iter()
        .map(|p| p.bits().to_vec())
        .collect();
        assert_eq!(piece_sets(&out.decomposition, 1), expect1);
    }

    #[test]
    fn pullback_of_singletons() {
        let (_parent, q, qspace, window) = setup(3, -6, 5);
        let d = Decomposition::new(
            PointSubset::full(qspace.space()),
            vec![
                coset_subset(&q, &qspace, &[0]),
                coset_subset(&q, &qspace, &[1]),
                coset_subset(&q, &qspace, &[2]),
            ],
            vec![],
        )
        .unwrap();
        let out = pullback_equivariant(&d, &q, &qspace, &window, 1).unwrap();
        assert!(out.cover_ok);
        assert!(out.invariance.pass);
        // every piece is a singleton translate
        assert!(out
            .decomposition
            .color(0)
            .pieces()
            .iter()
            .all(|p| p.len() == 1));
        assert_eq!(out.decomposition.color(0).pieces().len(), 12);
    }

    #[test]
    fn pullback_rejects_oversized_pieces() {
        let (_parent, q, qspace, window) = setup(4, -8, 7);
        // a piece of diameter 2 = half the period: no isometric lift
        let d = Decomposition::new(
            PointSubset::full(qspace.space()),
            vec![coset_subset(&q, &qspace, &[0, 1, 2])],
            vec![coset_subset(&q, &qspace, &[3])],
        )
        .unwrap();
        assert!(matches!(
            pullback_equivariant(&d, &q, &qspace, &window, 2),
            Err(Error::PieceTooLarge { .. })
        ));
    }

    #[test]
    fn separation_precondition() {
        let (_parent, q, qspace, window) = setup(4, -8, 7);
        let d = Decomposition::new(
            PointSubset::full(qspace.space()),
            vec![coset_subset(&q, &qspace, &[0])],
            vec![],
        )
        .unwrap();
        // 2c = 8 > 4: the subgroup element 4 violates separation
        assert!(matches!(
            pullback_equivariant(&d, &q, &qspace, &window, 4),
            Err(Error::SeparationViolated { .. })
        ));
    }

    #[test]
    fn pushforward_inverts_pullback() {
        let (_parent, q, qspace, window) = setup(4, -8, 7);
        let d = Decomposition::new(
            PointSubset::full(qspace.space()),
            vec![coset_subset(&q, &qspace, &[0, 1])],
            vec![coset_subset(&q, &qspace, &[2, 3])],
        )
        .unwrap();
        let pulled = pullback_equivariant(&d, &q, &qspace, &window, 2).unwrap();
        let pushed =
            pushforward_equivariant(&pulled.decomposition, &q, &qspace, &window, 2, None).unwrap();
        for color in 0..2 {
            assert_eq!(piece_sets(&pushed.decomposition, color), piece_sets(&d, color));
        }
    }

    #[test]
    fn pushforward_rejects_oversized_window_piece() {
        let (_parent, q, qspace, window) = setup(4, -8, 7);
        let whole = Decomposition::single_piece(PointSubset::full(window.space()));
        // the whole-window piece has diameter 15, far above the separation
        // constant, so the projection need not be isometric on it
        assert!(matches!(
            pushforward_equivariant(&whole, &q, &qspace, &window, 2, None),
            Err(Error::PieceTooLarge { .. })
        ));
    }

    #[test]
    fn pushforward_of_small_single_piece_window() {
        // a window smaller than the separation scale: the single-piece
        // decomposition is vacuously invariant and maps to its image
        let (_parent, q, qspace, window) = setup(16, 0, 3);
        let whole = Decomposition::single_piece(PointSubset::full(window.space()));
        let out = pushforward_equivariant(&whole, &q, &qspace, &window, 4, None).unwrap();
        assert!(out.invariance.pass);
        assert_eq!(out.decomposition.color(0).pieces()[0].len(), 4);
    }

    #[test]
    fn pushforward_preserves_lebesgue() {
        // interval tiling of Z by {8k..8k+3} / {8k+4..8k+7}, N_K = 16Z,
        // pushed to Z/16: four pieces, full bound preserved.
        let (_parent, q, qspace, window) = setup(16, -16, 15);
        let mut color0 = Vec::new();
        let mut color1 = Vec::new();
        for k in -2..2i64 {
            color0.push(window_interval(&window, 8 * k, 8 * k + 3));
            color1.push(window_interval(&window, 8 * k + 4, 8 * k + 7));
        }
        let d = Decomposition::new(PointSubset::full(window.space()), color0, color1).unwrap();
        let out = pushforward_equivariant(&d, &q, &qspace, &window, 6, Some(1)).unwrap();
        assert!(out.invariance.pass);
        let input_full = out.input_full.unwrap();
        let output_full = out.output_full.unwrap();
        assert!(input_full.pass);
        assert!(output_full.pass);
        assert!(output_full.lebesgue >= input_full.lebesgue.min(1));
        assert_eq!(out.decomposition.color(0).pieces().len(), 2);
        assert_eq!(out.decomposition.color(1).pieces().len(), 2);
    }
}
