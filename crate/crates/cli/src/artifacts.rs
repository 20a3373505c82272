//! Artifact files: decomposition sequences and game transcripts as JSON,
//! with conversions to and from the core types over a scenario's carrier.
//!
//! Pieces are stored as sorted point-index arrays into the scenario's
//! region space, so an artifact is only meaningful together with the
//! scenario that produced it; the embedded scenario digest ties them.

use serde::{Deserialize, Serialize};

use fdc_core::decomp::{Decomposition, DecompositionSequence, Stage};
use fdc_core::game::{GameTranscript, LossReason, Outcome, RoundRecord};
use fdc_core::group::GroupSpace;
use fdc_core::metric::{PointSubset, SubsetFamily};

use crate::scenario::ConfigError;

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionDto {
    pub region: Vec<usize>,
    pub color0: Vec<Vec<usize>>,
    pub color1: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageDto {
    pub gap: u32,
    pub parts: Vec<DecompositionDto>,
}

/// A staged decomposition sequence on a scenario's region.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceArtifact {
    /// Always "decomposition_sequence".
    pub kind: String,
    /// "ordinary" (gaps) or "full" (Lebesgue bounds).
    pub flavor: String,
    pub scenario_digest: String,
    pub start: Vec<usize>,
    pub stages: Vec<StageDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundDto {
    pub round: usize,
    pub challenge: u32,
    pub proposals: Vec<DecompositionDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeDto {
    /// "won" or "lost".
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds_played: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_max_diameter: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// A recorded play-through of the decomposition game.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranscriptArtifact {
    /// Always "transcript".
    pub kind: String,
    pub scenario_digest: String,
    pub strategy: String,
    pub bound: u32,
    pub challenge: Vec<u32>,
    pub initial: Vec<Vec<usize>>,
    pub rounds: Vec<RoundDto>,
    pub outcome: OutcomeDto,
}

pub fn decomposition_to_dto(d: &Decomposition) -> DecompositionDto {
    DecompositionDto {
        region: d.region().bits().to_vec(),
        color0: d.color(0).pieces().iter().map(|p| p.bits().to_vec()).collect(),
        color1: d.color(1).pieces().iter().map(|p| p.bits().to_vec()).collect(),
    }
}

fn subset_from_indices(ctx: &GroupSpace, indices: &[usize], what: &str) -> Result<PointSubset> {
    if indices.iter().any(|&i| i >= ctx.len()) {
        return Err(ConfigError::new(format!(
            "{what}: point index out of range for a region of {} points",
            ctx.len()
        )));
    }
    Ok(PointSubset::from_indices(ctx.space(), indices.iter().copied()))
}

pub fn decomposition_from_dto(ctx: &GroupSpace, dto: &DecompositionDto) -> Result<Decomposition> {
    let region = subset_from_indices(ctx, &dto.region, "region")?;
    let color0 = dto
        .color0
        .iter()
        .map(|p| subset_from_indices(ctx, p, "color0 piece"))
        .collect::<Result<Vec<_>>>()?;
    let color1 = dto
        .color1
        .iter()
        .map(|p| subset_from_indices(ctx, p, "color1 piece"))
        .collect::<Result<Vec<_>>>()?;
    Decomposition::new(region, color0, color1).map_err(|e| ConfigError::new(e.to_string()))
}

pub fn sequence_to_artifact(
    seq: &DecompositionSequence,
    flavor: &str,
    scenario_digest: &str,
) -> SequenceArtifact {
    SequenceArtifact {
        kind: "decomposition_sequence".into(),
        flavor: flavor.into(),
        scenario_digest: scenario_digest.into(),
        start: seq.start.bits().to_vec(),
        stages: seq
            .stages
            .iter()
            .map(|s| StageDto {
                gap: s.gap,
                parts: s.parts.iter().map(decomposition_to_dto).collect(),
            })
            .collect(),
    }
}

pub fn sequence_from_artifact(
    ctx: &GroupSpace,
    artifact: &SequenceArtifact,
) -> Result<DecompositionSequence> {
    let start = subset_from_indices(ctx, &artifact.start, "start")?;
    let stages = artifact
        .stages
        .iter()
        .map(|s| {
            Ok(Stage {
                gap: s.gap,
                parts: s
                    .parts
                    .iter()
                    .map(|p| decomposition_from_dto(ctx, p))
                    .collect::<Result<Vec<_>>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DecompositionSequence::new(start, stages).map_err(|e| ConfigError::new(e.to_string()))
}

pub fn outcome_to_dto(outcome: &Outcome) -> OutcomeDto {
    match outcome {
        Outcome::Won {
            rounds_played,
            final_max_diameter,
        } => OutcomeDto {
            status: "won".into(),
            rounds_played: Some(*rounds_played),
            final_max_diameter: Some(*final_max_diameter),
            reason: None,
        },
        Outcome::Lost(reason) => OutcomeDto {
            status: "lost".into(),
            rounds_played: None,
            final_max_diameter: None,
            reason: Some(reason.to_string()),
        },
    }
}

pub fn transcript_to_artifact(
    t: &GameTranscript,
    challenge: &[u32],
    scenario_digest: &str,
) -> TranscriptArtifact {
    TranscriptArtifact {
        kind: "transcript".into(),
        scenario_digest: scenario_digest.into(),
        strategy: t.strategy.clone(),
        bound: t.bound,
        challenge: challenge.to_vec(),
        initial: t.initial.pieces().iter().map(|p| p.bits().to_vec()).collect(),
        rounds: t
            .rounds
            .iter()
            .map(|r| RoundDto {
                round: r.round,
                challenge: r.challenge,
                proposals: r.proposals.iter().map(decomposition_to_dto).collect(),
            })
            .collect(),
        outcome: outcome_to_dto(&t.outcome),
    }
}

pub fn transcript_from_artifact(
    ctx: &GroupSpace,
    artifact: &TranscriptArtifact,
) -> Result<GameTranscript> {
    let initial_pieces = artifact
        .initial
        .iter()
        .map(|p| subset_from_indices(ctx, p, "initial piece"))
        .collect::<Result<Vec<_>>>()?;
    let initial = SubsetFamily::new(ctx.space(), initial_pieces)
        .map_err(|e| ConfigError::new(e.to_string()))?;
    let rounds = artifact
        .rounds
        .iter()
        .map(|r| {
            let proposals = r
                .proposals
                .iter()
                .map(|p| decomposition_from_dto(ctx, p))
                .collect::<Result<Vec<_>>>()?;
            let verdicts = proposals
                .iter()
                .map(|d| fdc_core::decomp::verify_ordinary(d, r.challenge))
                .collect();
            Ok(RoundRecord {
                round: r.round,
                challenge: r.challenge,
                proposals,
                verdicts,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let outcome = match artifact.outcome.status.as_str() {
        "won" => Outcome::Won {
            rounds_played: artifact.outcome.rounds_played.unwrap_or(artifact.rounds.len()),
            final_max_diameter: artifact.outcome.final_max_diameter.unwrap_or(0),
        },
        _ => Outcome::Lost(LossReason::ChallengesExhausted {
            final_max_diameter: artifact.outcome.final_max_diameter.unwrap_or(0),
        }),
    };
    Ok(GameTranscript {
        strategy: artifact.strategy.clone(),
        bound: artifact.bound,
        initial,
        rounds,
        outcome,
    })
}
