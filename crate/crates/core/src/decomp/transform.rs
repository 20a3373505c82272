//! The two transform constructions between ordinary and full decomposition
//! sequences.
//!
//! Ordinary to full: each stage-k piece is replaced by its floor(R_k/2)
//! outer neighborhood taken inside the enlarged stage-(k-1) piece; the
//! result is a full sequence with Lebesgue bounds floor(R_k/4).
//!
//! Full to ordinary: each stage-k piece is shrunk by iterated relative inner
//! neighborhoods along its ancestor chain, with parameters R_1 and
//! R_t - R_{t-1}; the result is an ordinary sequence with those gaps.
//!
//! Both constructions verify their input stages first and fail loudly on an
//! unverified stage; callers re-verify the output with the checkers.

use crate::error::{Error, Result};
use crate::metric::PointSubset;

use super::{verify_full, verify_ordinary, Decomposition, DecompositionSequence, Stage};

/// {x in W and S : d(x, S minus W) >= mu}, the inner mu-neighborhood of W
/// relative to the subspace S (ambient distances).
fn inner_relative(s: &PointSubset, w: &PointSubset, mu: u32) -> PointSubset {
    let w = w.intersection(s);
    let complement = s.difference(&w).bits().to_vec();
    if complement.is_empty() {
        return w;
    }
    let space = s.space().clone();
    PointSubset::from_indices(
        &space,
        w.iter().filter(|&x| {
            let row = space.row(x);
            complement.iter().all(|&y| row[y] >= mu)
        }),
    )
}

/// Transforms an ordinary sequence with strictly increasing gaps R_1 < ... <
/// R_n into a full sequence with Lebesgue bounds floor(R_i / 4). Stage-k
/// pieces become floor(R_k/2) outer neighborhoods relative to the enlarged
/// parent piece.
pub fn ordinary_to_full(seq: &DecompositionSequence) -> Result<DecompositionSequence> {
    seq.check_structure()?;
    let gaps = seq.gaps();
    if gaps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(
            "ordinary-to-full needs strictly increasing gaps".into(),
        ));
    }
    for (si, stage) in seq.stages.iter().enumerate() {
        for part in &stage.parts {
            let v = verify_ordinary(part, stage.gap);
            if !v.pass {
                return Err(Error::StageUnverified {
                    stage: si + 1,
                    details: format!(
                        "{} uncovered point(s), {} gap violation(s) at gap {}",
                        v.uncovered.len(),
                        v.violations.len(),
                        stage.gap
                    ),
                });
            }
        }
    }

    // transformed carrier per piece of the previous stage; starts at the root
    let mut parent_regions = vec![seq.start.clone()];
    let mut out_stages = Vec::new();
    for stage in &seq.stages {
        let grow = stage.gap / 2;
        let mut next_regions = Vec::new();
        let mut parts = Vec::new();
        for (part, region) in stage.parts.iter().zip(&parent_regions) {
            let mut colors: [Vec<PointSubset>; 2] = [Vec::new(), Vec::new()];
            for (c, family) in [part.color(0), part.color(1)].into_iter().enumerate() {
                for piece in family.pieces() {
                    let enlarged = piece.outer_neighborhood(grow).intersection(region);
                    colors[c].push(enlarged.clone());
                    next_regions.push(enlarged);
                }
            }
            let [c0, c1] = colors;
            parts.push(Decomposition::new(region.clone(), c0, c1)?);
        }
        out_stages.push(Stage {
            gap: stage.gap / 4,
            parts,
        });
        parent_regions = next_regions;
    }
    DecompositionSequence::new(seq.start.clone(), out_stages)
}

/// Transforms a full sequence with strictly increasing Lebesgue bounds
/// R_1 < ... < R_n into an ordinary sequence with gaps R_1, R_2 - R_1, ...,
/// R_n - R_{n-1}, by iterated relative inner neighborhoods along each
/// piece's ancestor chain.
pub fn full_to_ordinary(seq: &DecompositionSequence) -> Result<DecompositionSequence> {
    seq.check_structure()?;
    let bounds = seq.gaps();
    if bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(
            "full-to-ordinary needs strictly increasing Lebesgue bounds".into(),
        ));
    }
    for (si, stage) in seq.stages.iter().enumerate() {
        for part in &stage.parts {
            let v = verify_full(part, stage.gap).map_err(|e| Error::StageUnverified {
                stage: si + 1,
                details: e.to_string(),
            })?;
            if !v.pass {
                return Err(Error::StageUnverified {
                    stage: si + 1,
                    details: format!(
                        "Lebesgue number {} below bound {}, {} same-color overlap(s)",
                        v.lebesgue,
                        stage.gap,
                        v.overlaps.len()
                    ),
                });
            }
        }
    }
    // shrink parameters: mu_1 = R_1, mu_t = R_t - R_{t-1}
    let mut shrink = vec![bounds[0]];
    for w in bounds.windows(2) {
        shrink.push(w[1] - w[0]);
    }

    struct Ctx {
        transformed: PointSubset,
        carriers: Vec<PointSubset>,
    }
    let mut parent_ctxs = vec![Ctx {
        transformed: seq.start.clone(),
        carriers: Vec::new(),
    }];
    let mut out_stages = Vec::new();
    for (k, stage) in seq.stages.iter().enumerate() {
        let mut next_ctxs = Vec::new();
        let mut parts = Vec::new();
        for (part, pctx) in stage.parts.iter().zip(&parent_ctxs) {
            let mut carriers = pctx.carriers.clone();
            carriers.push(pctx.transformed.clone());
            let mut colors: [Vec<PointSubset>; 2] = [Vec::new(), Vec::new()];
            for (c, family) in [part.color(0), part.color(1)].into_iter().enumerate() {
                for piece in family.pieces() {
                    let mut cur = piece.clone();
                    for (carrier, &mu) in carriers.iter().zip(&shrink) {
                        cur = inner_relative(carrier, &cur, mu);
                    }
                    colors[c].push(cur.clone());
                    next_ctxs.push(Ctx {
                        transformed: cur,
                        carriers: carriers.clone(),
                    });
                }
            }
            let [c0, c1] = colors;
            parts.push(Decomposition::new(pctx.transformed.clone(), c0, c1)?);
        }
        out_stages.push(Stage {
            gap: shrink[k],
            parts,
        });
        parent_ctxs = next_ctxs;
    }
    DecompositionSequence::new(seq.start.clone(), out_stages)
}
