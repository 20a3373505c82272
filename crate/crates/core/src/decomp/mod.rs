//! The decomposition calculus: two-color decompositions of a carrier region,
//! the ordinary (r-disjoint) and full (Lebesgue) verifiers, invariance under
//! a subgroup action, staged decomposition sequences, the transform
//! constructions between ordinary and full sequences, equi-variant pullback
//! and pushforward along quotient maps, canonical decompositions, and the
//! fixed-scale dimension solver.

pub mod asdim;
pub mod canonical;
pub mod equivariant;
pub mod transform;

use crate::error::{Error, Result};
use crate::group::{Elem, GroupSpace, Subgroup};
use crate::metric::{PointSubset, Space, SubsetFamily, same_space};

pub use asdim::{asdim_at_scale, AsdimOutcome, SolverMode};
pub use canonical::{coset_decomposition, interval_decomposition_z};
pub use equivariant::{pullback_equivariant, pushforward_equivariant, PullbackOutcome, PushforwardOutcome};
pub use transform::{full_to_ordinary, ordinary_to_full};

/// A two-color family of pieces over a carrier region: X = X_0 u X_1 with
/// X_i a union of pieces. The colors may overlap; the union of all pieces
/// is expected to cover the region (the verifiers report when it does not).
#[derive(Clone, Debug)]
pub struct Decomposition {
    region: PointSubset,
    colors: [SubsetFamily; 2],
}

impl Decomposition {
    pub fn new(
        region: PointSubset,
        color0: Vec<PointSubset>,
        color1: Vec<PointSubset>,
    ) -> Result<Self> {
        let space = region.space().clone();
        let colors = [
            SubsetFamily::new(&space, color0)?,
            SubsetFamily::new(&space, color1)?,
        ];
        Ok(Decomposition { region, colors })
    }

    /// The trivial decomposition: the region itself as the only piece.
    pub fn single_piece(region: PointSubset) -> Self {
        let space = region.space().clone();
        let colors = [
            SubsetFamily::new(&space, vec![region.clone()]).expect("same carrier"),
            SubsetFamily::empty(&space),
        ];
        Decomposition { region, colors }
    }

    pub fn region(&self) -> &PointSubset {
        &self.region
    }

    pub fn space(&self) -> &Space {
        self.region.space()
    }

    pub fn color(&self, i: usize) -> &SubsetFamily {
        &self.colors[i]
    }

    /// All pieces in canonical order: color 0 then color 1.
    pub fn all_pieces(&self) -> impl Iterator<Item = &PointSubset> {
        self.colors[0].pieces().iter().chain(self.colors[1].pieces())
    }

    /// Both color families pooled into one, viewed as a cover of the region.
    pub fn pooled(&self) -> SubsetFamily {
        let mut pieces = Vec::new();
        pieces.extend_from_slice(self.colors[0].pieces());
        pieces.extend_from_slice(self.colors[1].pieces());
        SubsetFamily::new(self.space(), pieces).expect("same carrier")
    }

    pub fn max_piece_diameter(&self) -> u32 {
        self.colors[0].max_diameter().max(self.colors[1].max_diameter())
    }
}

/// A same-color pair of pieces closer than the required gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapViolation {
    pub color: usize,
    pub piece_a: usize,
    pub piece_b: usize,
    pub distance: u32,
}

/// Outcome of an ordinary (r-disjoint) verification.
#[derive(Debug, Clone)]
pub struct OrdinaryVerdict {
    pub pass: bool,
    pub gap: u32,
    /// Region points covered by no piece.
    pub uncovered: Vec<usize>,
    pub violations: Vec<GapViolation>,
}

/// Passes iff the pieces cover the region and each color family is
/// r-disjoint. Failures carry the uncovered points and violating pairs.
pub fn verify_ordinary(d: &Decomposition, r: u32) -> OrdinaryVerdict {
    let uncovered = d.region.difference(&d.pooled().union()).bits().to_vec();
    let mut violations = Vec::new();
    for (color, family) in d.colors.iter().enumerate() {
        let pieces = family.pieces();
        for i in 0..pieces.len() {
            for j in (i + 1)..pieces.len() {
                if pieces[i].bits() == pieces[j].bits() {
                    continue;
                }
                let dist = pieces[i]
                    .set_distance(&pieces[j])
                    .expect("family pieces share a carrier");
                if !dist.at_least(r) {
                    violations.push(GapViolation {
                        color,
                        piece_a: i,
                        piece_b: j,
                        distance: dist.finite().expect("violations are finite"),
                    });
                }
            }
        }
    }
    OrdinaryVerdict {
        pass: uncovered.is_empty() && violations.is_empty(),
        gap: r,
        uncovered,
        violations,
    }
}

/// Outcome of a full (Lebesgue) verification.
#[derive(Debug, Clone)]
pub struct FullVerdict {
    pub pass: bool,
    pub required: u32,
    /// Exact Lebesgue number of the pooled cover.
    pub lebesgue: u32,
    /// Same-color piece pairs that share a point (full decompositions need
    /// each color to be a plain disjoint union).
    pub overlaps: Vec<(usize, usize, usize)>,
}

/// Passes iff each color is a disjoint union and the pooled pieces, viewed
/// as a cover of the region, have Lebesgue number >= R. A cover failure is
/// an error, not a verdict.
///
/// The Lebesgue number is capped at diameter+1 (a piece containing the
/// whole region makes every radius work), so the requirement is compared
/// against min(R, cap).
pub fn verify_full(d: &Decomposition, r: u32) -> Result<FullVerdict> {
    let mut overlaps = Vec::new();
    for (color, family) in d.colors.iter().enumerate() {
        let pieces = family.pieces();
        for i in 0..pieces.len() {
            for j in (i + 1)..pieces.len() {
                if pieces[i].bits() == pieces[j].bits() {
                    continue;
                }
                if !pieces[i].intersection(&pieces[j]).is_empty() {
                    overlaps.push((color, i, j));
                }
            }
        }
    }
    let lebesgue = d.pooled().lebesgue_number(&d.region)?;
    let cap = d.region.diameter() + 1;
    Ok(FullVerdict {
        pass: overlaps.is_empty() && lebesgue >= r.min(cap),
        required: r,
        lebesgue,
        overlaps,
    })
}

/// A piece and translation witnessing an invariance failure.
#[derive(Debug, Clone)]
pub struct InvarianceWitness {
    pub color: usize,
    pub piece: usize,
    pub translation: Elem,
}

/// Outcome of an H-invariance verification.
#[derive(Debug, Clone)]
pub struct InvarianceVerdict {
    pub pass: bool,
    pub witness: Option<InvarianceWitness>,
}

/// Verifies that each color family is stable under right translation by the
/// acting subgroup, up to the window: for every piece V and enumerated
/// acting element h, the translated points that remain in the region must
/// lie inside a single piece of the same color. Translates that leave the
/// region entirely are unobservable at this scale and are skipped.
pub fn verify_invariance(
    d: &Decomposition,
    ctx: &GroupSpace,
    acting: &Subgroup,
) -> Result<InvarianceVerdict> {
    if !same_space(ctx.space(), d.space()) {
        return Err(Error::CarrierMismatch);
    }
    let bound = d.region.diameter();
    let identity = ctx.model().identity();
    let translations: Vec<Elem> = acting
        .enumerate_within(bound)?
        .into_iter()
        .filter(|h| *h != identity)
        .collect();
    for (color, family) in d.colors.iter().enumerate() {
        for (pi, piece) in family.pieces().iter().enumerate() {
            if piece.is_empty() {
                continue;
            }
            for h in &translations {
                let (translated, _escaped) = ctx.translate_right(piece, h);
                let visible = translated.intersection(&d.region);
                if visible.is_empty() {
                    continue;
                }
                let housed = family.pieces().iter().any(|m| visible.is_subset(m));
                if !housed {
                    return Ok(InvarianceVerdict {
                        pass: false,
                        witness: Some(InvarianceWitness {
                            color,
                            piece: pi,
                            translation: h.clone(),
                        }),
                    });
                }
            }
        }
    }
    Ok(InvarianceVerdict { pass: true, witness: None })
}

/// One stage of a decomposition sequence: a gap (or Lebesgue bound) and one
/// decomposition per piece of the previous stage, in canonical piece order.
#[derive(Clone, Debug)]
pub struct Stage {
    pub gap: u32,
    pub parts: Vec<Decomposition>,
}

/// A staged sequence of decompositions starting from one region. For
/// ordinary sequences the gaps are the challenge values R_i; for full
/// sequences they are the Lebesgue bounds.
#[derive(Clone, Debug)]
pub struct DecompositionSequence {
    pub start: PointSubset,
    pub stages: Vec<Stage>,
}

impl DecompositionSequence {
    pub fn new(start: PointSubset, stages: Vec<Stage>) -> Result<Self> {
        let seq = DecompositionSequence { start, stages };
        seq.check_structure()?;
        Ok(seq)
    }

    /// Pieces entering stage k+1 (k = 0 means the start region itself), in
    /// canonical order: per part, color 0 pieces then color 1 pieces.
    pub fn stage_pieces(&self, k: usize) -> Vec<PointSubset> {
        if k == 0 {
            return vec![self.start.clone()];
        }
        self.stages[k - 1]
            .parts
            .iter()
            .flat_map(|d| d.all_pieces().cloned())
            .collect()
    }

    /// Structural validation: every stage decomposes exactly the pieces of
    /// the previous stage, in order, on the same carrier space.
    pub fn check_structure(&self) -> Result<()> {
        let mut expected = vec![self.start.clone()];
        for (si, stage) in self.stages.iter().enumerate() {
            if stage.parts.len() != expected.len() {
                return Err(Error::Invalid(format!(
                    "stage {} has {} parts but the previous stage has {} pieces",
                    si + 1,
                    stage.parts.len(),
                    expected.len()
                )));
            }
            for (part, piece) in stage.parts.iter().zip(&expected) {
                if !same_space(part.space(), self.start.space()) {
                    return Err(Error::CarrierMismatch);
                }
                if part.region() != piece {
                    return Err(Error::Invalid(format!(
                        "stage {} part region does not match the piece it decomposes",
                        si + 1
                    )));
                }
            }
            expected = self.stage_pieces(si + 1);
        }
        Ok(())
    }

    /// Verifies every stage as an ordinary decomposition at its gap.
    /// Returns per-stage, per-part verdicts.
    pub fn verify_ordinary_stages(&self) -> Vec<Vec<OrdinaryVerdict>> {
        self.stages
            .iter()
            .map(|s| s.parts.iter().map(|d| verify_ordinary(d, s.gap)).collect())
            .collect()
    }

    /// Verifies every stage as a full decomposition at its bound.
    pub fn verify_full_stages(&self) -> Result<Vec<Vec<FullVerdict>>> {
        self.stages
            .iter()
            .map(|s| s.parts.iter().map(|d| verify_full(d, s.gap)).collect())
            .collect()
    }

    /// Max piece diameter of the final stage (of the start, if no stages).
    pub fn final_max_diameter(&self) -> u32 {
        let pieces = self.stage_pieces(self.stages.len());
        pieces.iter().map(|p| p.diameter()).max().unwrap_or(0)
    }

    pub fn gaps(&self) -> Vec<u32> {
        self.stages.iter().map(|s| s.gap).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use std::sync::Arc;

    fn z_window(lo: i64, hi: i64) -> Space {
        let labels = (lo..=hi).map(|v| v.to_string()).collect();
        FiniteMetricSpace::from_fn(labels, move |i, j| {
            (i as i64 - j as i64).unsigned_abs() as u32
        })
    }

    fn iv(space: &Space, lo: i64, a: i64, b: i64) -> PointSubset {
        PointSubset::from_indices(space, (a..=b).map(|v| (v - lo) as usize))
    }

    #[test]
    fn ordinary_examples() {
        let z = z_window(0, 19);
        let d = Decomposition::new(
            PointSubset::full(&z),
            vec![iv(&z, 0, 0, 4), iv(&z, 0, 10, 14)],
            vec![iv(&z, 0, 5, 9), iv(&z, 0, 15, 19)],
        )
        .unwrap();
        assert!(verify_ordinary(&d, 5).pass);
        let v = verify_ordinary(&d, 7);
        assert!(!v.pass);
        assert_eq!(
            v.violations,
            vec![
                GapViolation { color: 0, piece_a: 0, piece_b: 1, distance: 6 },
                GapViolation { color: 1, piece_a: 0, piece_b: 1, distance: 6 },
            ]
        );

        let single = Decomposition::single_piece(PointSubset::full(&z));
        assert!(verify_ordinary(&single, 1_000).pass);
    }

    #[test]
    fn ordinary_reports_uncovered() {
        let z = z_window(0, 9);
        let d = Decomposition::new(
            PointSubset::full(&z),
            vec![iv(&z, 0, 0, 3)],
            vec![iv(&z, 0, 6, 9)],
        )
        .unwrap();
        let v = verify_ordinary(&d, 2);
        assert!(!v.pass);
        assert_eq!(v.uncovered, vec![4, 5]);
    }

    #[test]
    fn full_examples() {
        let z = z_window(0, 11);
        let full = PointSubset::full(&z);
        let d = Decomposition::new(
            full.clone(),
            vec![iv(&z, 0, 0, 7)],
            vec![iv(&z, 0, 4, 11)],
        )
        .unwrap();
        let v = verify_full(&d, 3).unwrap();
        assert!(v.pass);
        assert_eq!(v.lebesgue, 3);

        let whole = Decomposition::single_piece(full.clone());
        assert!(verify_full(&whole, 12).unwrap().pass); // diameter 11, cap 12

        let touching = Decomposition::new(
            full.clone(),
            vec![iv(&z, 0, 0, 5)],
            vec![iv(&z, 0, 6, 11)],
        )
        .unwrap();
        let v = verify_full(&touching, 2).unwrap();
        assert!(!v.pass);
        assert_eq!(v.lebesgue, 1);
    }

    #[test]
    fn full_rejects_overlapping_same_color() {
        let z = z_window(0, 9);
        let d = Decomposition::new(
            PointSubset::full(&z),
            vec![iv(&z, 0, 0, 5), iv(&z, 0, 4, 9)],
            vec![],
        )
        .unwrap();
        let v = verify_full(&d, 1).unwrap();
        assert!(!v.pass);
        assert_eq!(v.overlaps, vec![(0, 0, 1)]);
    }

    #[test]
    fn full_errors_on_cover_failure() {
        let z = z_window(0, 9);
        let d = Decomposition::new(PointSubset::full(&z), vec![iv(&z, 0, 0, 3)], vec![]).unwrap();
        assert!(matches!(verify_full(&d, 1), Err(Error::NotACover { .. })));
    }

    #[test]
    fn invariance_examples() {
        use crate::group::{FiniteGroup, GroupModel, Subgroup};
        let g = GroupModel::Finite(FiniteGroup::cyclic(12));
        let ws = g.induced_space(100).unwrap();
        let subset = |vals: &[usize]| {
            PointSubset::from_indices(
                ws.space(),
                vals.iter().map(|&v| ws.index_of(&Elem::Idx(v)).unwrap()),
            )
        };
        let acting = Subgroup::members(&g, vec![0, 4, 8], "<4>").unwrap();
        let d = Decomposition::new(
            PointSubset::full(ws.space()),
            vec![subset(&[0, 1]), subset(&[4, 5]), subset(&[8, 9])],
            vec![subset(&[2, 3]), subset(&[6, 7]), subset(&[10, 11])],
        )
        .unwrap();
        assert!(verify_invariance(&d, &ws, &acting).unwrap().pass);

        // trivial acting subgroup: vacuously invariant
        let trivial = Subgroup::members(&g, vec![0], "1").unwrap();
        assert!(verify_invariance(&d, &ws, &trivial).unwrap().pass);

        // dropping a translate breaks invariance
        let broken = Decomposition::new(
            PointSubset::full(ws.space()),
            vec![subset(&[0, 1]), subset(&[4, 5])],
            vec![subset(&[2, 3]), subset(&[6, 7]), subset(&[10, 11])],
        )
        .unwrap();
        let v = verify_invariance(&broken, &ws, &acting).unwrap();
        assert!(!v.pass);
        let w = v.witness.unwrap();
        assert_eq!(w.color, 0);
    }

    #[test]
    fn sequence_structure_checks() {
        let z = z_window(0, 19);
        let start = PointSubset::full(&z);
        let stage1 = Stage {
            gap: 3,
            parts: vec![Decomposition::new(
                start.clone(),
                vec![iv(&z, 0, 0, 9)],
                vec![iv(&z, 0, 10, 19)],
            )
            .unwrap()],
        };
        // stage 2 must decompose both pieces, in order
        let stage2 = Stage {
            gap: 5,
            parts: vec![
                Decomposition::single_piece(iv(&z, 0, 0, 9)),
                Decomposition::single_piece(iv(&z, 0, 10, 19)),
            ],
        };
        let seq = DecompositionSequence::new(start.clone(), vec![stage1.clone(), stage2]).unwrap();
        assert_eq!(seq.stage_pieces(2).len(), 2);

        let bad = DecompositionSequence::new(
            start.clone(),
            vec![stage1, Stage { gap: 5, parts: vec![] }],
        );
        assert!(bad.is_err());
    }
}
