//! The decomposition game: player 2 names gaps, player 1 must split every
//! piece of the current family into a two-color r-disjoint decomposition,
//! and wins by reaching a family of diameter at most B.
//!
//! Strategies are pluggable rules producing a decomposition per piece; the
//! engine verifies every proposal and records a replayable transcript.
//! The straight (sFDC) check fixes the whole challenge sequence up front
//! and reports the least round at which the family is bounded; the
//! equi-variant variant additionally verifies that the final round's
//! decompositions are invariant under a declared chain subgroup.

use std::fmt;

use crate::boxspace::NormalChain;
use crate::decomp::{
    coset_decomposition, interval_decomposition_z, verify_invariance, verify_ordinary,
    Decomposition, InvarianceVerdict, OrdinaryVerdict,
};
use crate::error::{Error, Result};
use crate::group::{Elem, GroupModel, GroupSpace, Subgroup};
use crate::metric::{PointSubset, SubsetFamily};

/// Player 2's moves: the list of gaps, one per round.
#[derive(Debug, Clone)]
pub struct Challenge {
    rounds: Vec<u32>,
}

impl Challenge {
    /// A challenge for the free-form game: any positive gaps.
    pub fn new(rounds: Vec<u32>) -> Result<Self> {
        if rounds.iter().any(|&r| r == 0) {
            return Err(Error::Invalid("challenge gaps must be positive".into()));
        }
        Ok(Challenge { rounds })
    }

    /// A straight-FDC challenge: strictly increasing positive gaps.
    pub fn strictly_increasing(rounds: Vec<u32>) -> Result<Self> {
        let c = Self::new(rounds)?;
        if !c.is_strictly_increasing() {
            return Err(Error::Invalid(
                "a straight challenge must be strictly increasing".into(),
            ));
        }
        Ok(c)
    }

    pub fn rounds(&self) -> &[u32] {
        &self.rounds
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.rounds.windows(2).all(|w| w[0] < w[1])
    }
}

/// Player 1: a named rule proposing a decomposition of each piece.
pub trait Strategy {
    fn name(&self) -> String;

    /// Proposes a decomposition of `piece` at gap `challenge` in round
    /// `round` (1-based). A strategy that cannot split returns the piece
    /// unchanged; hard failures become lost rounds in the transcript.
    fn propose(
        &self,
        ctx: &GroupSpace,
        piece: &PointSubset,
        challenge: u32,
        round: usize,
    ) -> Result<Decomposition>;

    /// The chain level K whose subgroup the strategy declares for the
    /// equi-variant check of its final round, if any.
    fn acting_chain_level(&self) -> Option<usize> {
        None
    }
}

/// Why a game was lost.
#[derive(Debug, Clone)]
pub enum LossReason {
    /// A proposal failed its ordinary verification.
    InvalidProposal { round: usize, details: String },
    /// The strategy could not produce a proposal at all.
    StrategyFailed { round: usize, details: String },
    /// All challenges were played without reaching a bounded family.
    ChallengesExhausted { final_max_diameter: u32 },
}

impl fmt::Display for LossReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossReason::InvalidProposal { round, details } => {
                write!(f, "invalid proposal at round {round}: {details}")
            }
            LossReason::StrategyFailed { round, details } => {
                write!(f, "strategy failed at round {round}: {details}")
            }
            LossReason::ChallengesExhausted { final_max_diameter } => write!(
                f,
                "challenges exhausted with final max diameter {final_max_diameter}"
            ),
        }
    }
}

/// Game outcome: won after a number of rounds, or lost with a reason.
#[derive(Debug, Clone)]
pub enum Outcome {
    Won {
        rounds_played: usize,
        final_max_diameter: u32,
    },
    Lost(LossReason),
}

impl Outcome {
    pub fn is_won(&self) -> bool {
        matches!(self, Outcome::Won { .. })
    }
}

/// One verified round of the game.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    /// 1-based round number.
    pub round: usize,
    pub challenge: u32,
    /// One proposal per family member entering the round, in order.
    pub proposals: Vec<Decomposition>,
    pub verdicts: Vec<OrdinaryVerdict>,
}

/// A verified record of a play-through: initial family, rounds, outcome.
#[derive(Debug, Clone)]
pub struct GameTranscript {
    pub strategy: String,
    pub bound: u32,
    pub initial: SubsetFamily,
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
}

impl GameTranscript {
    /// The family entering round k+1 (k = 0 is the initial family).
    pub fn family_at(&self, k: usize) -> SubsetFamily {
        if k == 0 {
            return self.initial.clone();
        }
        family_after(&self.rounds[k - 1])
    }
}

fn family_after(record: &RoundRecord) -> SubsetFamily {
    let space = record.proposals[0].space().clone();
    let mut pieces: Vec<PointSubset> = Vec::new();
    for d in &record.proposals {
        for piece in d.all_pieces() {
            if !piece.is_empty() && !pieces.iter().any(|seen| seen == piece) {
                pieces.push(piece.clone());
            }
        }
    }
    SubsetFamily::new(&space, pieces).expect("proposal pieces share the carrier")
}

/// Plays the game: reports a win as soon as the family is bounded, a loss
/// on a failed proposal or when challenges run out. Deterministic in
/// (initial, challenge, strategy).
pub fn play(
    ctx: &GroupSpace,
    initial: &SubsetFamily,
    challenge: &Challenge,
    strategy: &dyn Strategy,
    bound: u32,
) -> GameTranscript {
    let mut transcript = GameTranscript {
        strategy: strategy.name(),
        bound,
        initial: initial.clone(),
        rounds: Vec::new(),
        outcome: Outcome::Won {
            rounds_played: 0,
            final_max_diameter: 0,
        },
    };
    let mut family = initial.clone();
    for (i, &gap) in challenge.rounds().iter().enumerate() {
        let diam = family.max_diameter();
        if diam <= bound {
            transcript.outcome = Outcome::Won {
                rounds_played: i,
                final_max_diameter: diam,
            };
            return transcript;
        }
        let round = i + 1;
        let mut proposals = Vec::new();
        for piece in family.pieces() {
            match strategy.propose(ctx, piece, gap, round) {
                Ok(d) => proposals.push(d),
                Err(e) => {
                    transcript.outcome = Outcome::Lost(LossReason::StrategyFailed {
                        round,
                        details: e.to_string(),
                    });
                    return transcript;
                }
            }
        }
        let verdicts: Vec<OrdinaryVerdict> =
            proposals.iter().map(|d| verify_ordinary(d, gap)).collect();
        let record = RoundRecord {
            round,
            challenge: gap,
            proposals,
            verdicts,
        };
        let failed = record.verdicts.iter().position(|v| !v.pass);
        if let Some(part) = failed {
            transcript.outcome = Outcome::Lost(LossReason::InvalidProposal {
                round,
                details: format!("piece {part} fails verification at gap {gap}"),
            });
            transcript.rounds.push(record);
            return transcript;
        }
        family = family_after(&record);
        transcript.rounds.push(record);
    }
    let diam = family.max_diameter();
    transcript.outcome = if diam <= bound {
        Outcome::Won {
            rounds_played: challenge.rounds().len(),
            final_max_diameter: diam,
        }
    } else {
        Outcome::Lost(LossReason::ChallengesExhausted {
            final_max_diameter: diam,
        })
    };
    transcript
}

/// Re-verifies a stored transcript: recomputes every verdict and the
/// outcome from the recorded proposals alone. Replaying a transcript must
/// reproduce its stored verdicts exactly.
pub fn replay(transcript: &GameTranscript) -> Outcome {
    let mut family = transcript.initial.clone();
    for record in &transcript.rounds {
        let diam = family.max_diameter();
        if diam <= transcript.bound {
            return Outcome::Won {
                rounds_played: record.round - 1,
                final_max_diameter: diam,
            };
        }
        for (part, d) in record.proposals.iter().enumerate() {
            let v = verify_ordinary(d, record.challenge);
            if !v.pass {
                return Outcome::Lost(LossReason::InvalidProposal {
                    round: record.round,
                    details: format!(
                        "piece {part} fails verification at gap {}",
                        record.challenge
                    ),
                });
            }
        }
        family = family_after(record);
    }
    let diam = family.max_diameter();
    if diam <= transcript.bound {
        Outcome::Won {
            rounds_played: transcript.rounds.len(),
            final_max_diameter: diam,
        }
    } else {
        Outcome::Lost(LossReason::ChallengesExhausted {
            final_max_diameter: diam,
        })
    }
}

/// Straight-FDC check: the least m at which the stage family is bounded,
/// with the verified transcript. The challenge must be strictly increasing.
pub fn sfdc_check(
    ctx: &GroupSpace,
    initial: &SubsetFamily,
    challenge: &Challenge,
    strategy: &dyn Strategy,
    bound: u32,
) -> Result<(Option<usize>, GameTranscript)> {
    if !challenge.is_strictly_increasing() {
        return Err(Error::Invalid(
            "straight FDC needs a strictly increasing challenge".into(),
        ));
    }
    let transcript = play(ctx, initial, challenge, strategy, bound);
    let m = match transcript.outcome {
        Outcome::Won { rounds_played, .. } => Some(rounds_played),
        Outcome::Lost(_) => None,
    };
    Ok((m, transcript))
}

/// Equi-variant straight-FDC verdict.
#[derive(Debug)]
pub struct EquiSfdcReport {
    /// (m, K) on success: bounded after m rounds, last round invariant
    /// under the chain subgroup N_K.
    pub m_and_level: Option<(usize, usize)>,
    /// Invariance verdicts of the final round's proposals (empty when the
    /// game was won with no rounds or no level was declared).
    pub invariance: Vec<InvarianceVerdict>,
    pub transcript: GameTranscript,
}

/// Runs the straight check and additionally requires the last round's
/// decompositions to be invariant under the declared chain subgroup. A
/// strategy declaring no level reduces to the plain straight check.
pub fn equivariant_sfdc_check(
    ctx: &GroupSpace,
    chain: &NormalChain,
    initial: &SubsetFamily,
    challenge: &Challenge,
    strategy: &dyn Strategy,
    bound: u32,
) -> Result<EquiSfdcReport> {
    let (m, transcript) = sfdc_check(ctx, initial, challenge, strategy, bound)?;
    let Some(m) = m else {
        return Ok(EquiSfdcReport {
            m_and_level: None,
            invariance: Vec::new(),
            transcript,
        });
    };
    let Some(level) = strategy.acting_chain_level() else {
        return Ok(EquiSfdcReport {
            m_and_level: Some((m, 0)),
            invariance: Vec::new(),
            transcript,
        });
    };
    if level == 0 || level > chain.depth() {
        return Err(Error::Invalid(format!(
            "strategy declares chain level {level}, chain has depth {}",
            chain.depth()
        )));
    }
    let acting = chain.subgroup(level);
    let mut invariance = Vec::new();
    let mut all_pass = true;
    if m > 0 {
        for d in &transcript.rounds[m - 1].proposals {
            let v = verify_invariance(d, ctx, acting)?;
            all_pass &= v.pass;
            invariance.push(v);
        }
    }
    Ok(EquiSfdcReport {
        m_and_level: all_pass.then_some((m, level)),
        invariance,
        transcript,
    })
}

/// Annulus strategy for Z-like models, from the length-annulus
/// decomposition.
pub struct IntervalStrategy;

impl Strategy for IntervalStrategy {
    fn name(&self) -> String {
        "interval".into()
    }

    fn propose(
        &self,
        ctx: &GroupSpace,
        piece: &PointSubset,
        challenge: u32,
        _round: usize,
    ) -> Result<Decomposition> {
        interval_decomposition_z(ctx, piece, challenge)
    }
}

/// Peels one lattice axis per round into alternating slabs of width R.
/// Rounds beyond the axis list pass pieces through unchanged.
pub struct CoordinatePeelStrategy {
    pub axes: Vec<usize>,
}

impl Strategy for CoordinatePeelStrategy {
    fn name(&self) -> String {
        "coordinate-peel".into()
    }

    fn propose(
        &self,
        ctx: &GroupSpace,
        piece: &PointSubset,
        challenge: u32,
        round: usize,
    ) -> Result<Decomposition> {
        let GroupModel::Lattice(g) = ctx.model() else {
            return Err(Error::Invalid("coordinate peel needs a lattice model".into()));
        };
        let Some(&axis) = self.axes.get(round - 1) else {
            return Ok(Decomposition::single_piece(piece.clone()));
        };
        if axis >= g.rank() {
            return Err(Error::Invalid(format!(
                "axis {axis} out of range for rank {}",
                g.rank()
            )));
        }
        // slab q holds points with coordinate in [qR, (q+1)R); q's parity is
        // the color, so same-color slabs are at distance R+1 along the axis
        let mut slabs: std::collections::BTreeMap<i64, Vec<usize>> =
            std::collections::BTreeMap::new();
        for p in piece.iter() {
            let Elem::Vector(v) = ctx.elem(p) else { unreachable!() };
            let q = v[axis].div_euclid(challenge as i64);
            slabs.entry(q).or_default().push(p);
        }
        let mut color0 = Vec::new();
        let mut color1 = Vec::new();
        for (q, points) in slabs {
            let subset = PointSubset::from_indices(ctx.space(), points);
            if q.rem_euclid(2) == 0 {
                color0.push(subset);
            } else {
                color1.push(subset);
            }
        }
        Decomposition::new(piece.clone(), color0, color1)
    }
}

/// Splits each piece into left-coset classes of a fixed subgroup; the round
/// fails when the R-ball condition does not hold.
pub struct CosetStrategy {
    pub sub: Subgroup,
}

impl Strategy for CosetStrategy {
    fn name(&self) -> String {
        format!("coset({})", self.sub.name())
    }

    fn propose(
        &self,
        ctx: &GroupSpace,
        piece: &PointSubset,
        challenge: u32,
        _round: usize,
    ) -> Result<Decomposition> {
        coset_decomposition(ctx, piece, &self.sub, challenge).map(|(d, _)| d)
    }
}

/// Tiles Z-model pieces with half-period blocks in alternating colors,
/// aligned to absolute coordinates, and declares a chain level for the
/// equi-variant check.
pub struct PeriodicIntervalStrategy {
    pub period: u32,
    pub chain_level: usize,
}

impl Strategy for PeriodicIntervalStrategy {
    fn name(&self) -> String {
        format!("periodic-interval(period {})", self.period)
    }

    fn propose(
        &self,
        ctx: &GroupSpace,
        piece: &PointSubset,
        _challenge: u32,
        _round: usize,
    ) -> Result<Decomposition> {
        let GroupModel::Lattice(g) = ctx.model() else {
            return Err(Error::Invalid("periodic tiling needs a Z model".into()));
        };
        if g.rank() != 1 {
            return Err(Error::Invalid("periodic tiling needs rank 1".into()));
        }
        if self.period < 2 || self.period % 2 != 0 {
            return Err(Error::Invalid("period must be even and at least 2".into()));
        }
        let half = (self.period / 2) as i64;
        let mut blocks: std::collections::BTreeMap<i64, Vec<usize>> =
            std::collections::BTreeMap::new();
        for p in piece.iter() {
            let Elem::Vector(v) = ctx.elem(p) else { unreachable!() };
            blocks.entry(v[0].div_euclid(half)).or_default().push(p);
        }
        let mut color0 = Vec::new();
        let mut color1 = Vec::new();
        for (q, points) in blocks {
            let subset = PointSubset::from_indices(ctx.space(), points);
            if q.rem_euclid(2) == 0 {
                color0.push(subset);
            } else {
                color1.push(subset);
            }
        }
        Decomposition::new(piece.clone(), color0, color1)
    }

    fn acting_chain_level(&self) -> Option<usize> {
        Some(self.chain_level)
    }
}

/// Never splits: every piece passes through unchanged. Losses become
/// observable in the transcript.
pub struct NoSplitStrategy;

impl Strategy for NoSplitStrategy {
    fn name(&self) -> String {
        "no-split".into()
    }

    fn propose(
        &self,
        _ctx: &GroupSpace,
        piece: &PointSubset,
        _challenge: u32,
        _round: usize,
    ) -> Result<Decomposition> {
        Ok(Decomposition::single_piece(piece.clone()))
    }
}

/// Builds a strategy by name, as the command surface exposes them.
pub fn strategy_by_name(
    name: &str,
    axes: Option<Vec<usize>>,
    period: Option<u32>,
    chain_level: Option<usize>,
    sub: Option<Subgroup>,
) -> Result<Box<dyn Strategy>> {
    match name {
        "interval" => Ok(Box::new(IntervalStrategy)),
        "coordinate-peel" => Ok(Box::new(CoordinatePeelStrategy {
            axes: axes.unwrap_or_else(|| vec![0, 1, 2, 3]),
        })),
        "coset" => {
            let sub =
                sub.ok_or_else(|| Error::Invalid("coset strategy needs a subgroup".into()))?;
            Ok(Box::new(CosetStrategy { sub }))
        }
        "periodic-interval" => {
            let period = period.ok_or_else(|| {
                Error::Invalid("periodic-interval strategy needs a period".into())
            })?;
            let chain_level = chain_level.ok_or_else(|| {
                Error::Invalid("periodic-interval strategy needs an acting chain level".into())
            })?;
            Ok(Box::new(PeriodicIntervalStrategy {
                period,
                chain_level,
            }))
        }
        "no-split" => Ok(Box::new(NoSplitStrategy)),
        other => Err(Error::Invalid(format!("unknown strategy {other:?}"))),
    }
}
