//! Command implementations. Every command builds its objects from the
//! scenario, runs the library, and emits one deterministic report; exit
//! codes are 0 (pass/win), 1 (verified negative), 2 (configuration), 3
//! (internal invariant breach).

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use fdc_core::boxspace::{build_ball_union, build_box};
use fdc_core::decomp::{
    asdim_at_scale, full_to_ordinary, ordinary_to_full, SolverMode,
};
use fdc_core::game::{equivariant_sfdc_check, play, replay, sfdc_check, Challenge, Outcome};
use fdc_core::group::{associated_family, GroupModel, GroupSpace, LatticeGroup};
use fdc_core::maps::{check_coarse_equivalence, MapFamily, MapMember, ModulusReport};
use fdc_core::metric::{PointSubset, SubsetFamily};
use fdc_core::Error as CoreError;

use crate::artifacts::{
    self, sequence_from_artifact, sequence_to_artifact, transcript_from_artifact,
    transcript_to_artifact, SequenceArtifact, TranscriptArtifact,
};
use crate::cache;
use crate::report::{to_value, Report};
use crate::scenario::{ConfigError, Scenario};

/// A command failure with its exit code.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    pub fn internal(message: impl std::fmt::Display) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::config(e)
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CrossCheckFailed { .. } | CoreError::MetricAxiom { .. } => {
                Failure::internal(e)
            }
            other => Failure::config(other),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Shared command options from the CLI surface.
pub struct Options {
    pub out: Option<PathBuf>,
    pub bound: Option<u32>,
    pub seed: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    pub exact: bool,
    pub greedy: bool,
}

fn build_ctx_cached(scn: &Scenario, model: &GroupModel, opts: &Options) -> Result<GroupSpace, Failure> {
    let ctx = scn.build_ctx(model)?;
    let dir = cache::resolve_dir(opts.cache_dir.clone());
    cache::prime_space(ctx.space(), dir.as_deref(), &scn.digest());
    Ok(ctx)
}

fn challenge_rounds(scn: &Scenario, opts: &Options) -> Result<Vec<u32>, Failure> {
    match scn.challenge_rounds() {
        Ok(rounds) => Ok(rounds),
        Err(e) => {
            // the randomized utility: synthesize a doubling challenge from
            // the seed when the scenario has none
            if let Some(seed) = opts.seed {
                let base = (seed % 5) as u32 + 2;
                let len = scn.run_num::<usize>("rounds")?.unwrap_or(3);
                return Ok((0..len).map(|i| base << i).collect());
            }
            Err(e.into())
        }
    }
}

fn family_of_region(ctx: &GroupSpace) -> SubsetFamily {
    SubsetFamily::new(ctx.space(), vec![PointSubset::full(ctx.space())])
        .expect("the region lives on its own space")
}

pub fn cmd_build_box(scn: &Scenario, opts: &Options) -> CmdResult {
    let model = scn.build_model()?;
    let chain = scn.build_chain(&model)?;
    let radii: Option<String> = scn.get_str("run", "radii")?;
    let (kind, boxed) = match radii {
        Some(list) => {
            let radii: Vec<u32> = list
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Failure::config("bad radii list")))
                .collect::<Result<_, _>>()?;
            ("ball-union", build_ball_union(&chain, &radii)?)
        }
        None => {
            let k = scn.run_num::<usize>("k")?.unwrap_or(chain.depth());
            ("box", build_box(&chain, k)?)
        }
    };
    let pieces: Vec<Value> = boxed
        .pieces()
        .iter()
        .map(|p| {
            json!({
                "index": p.index,
                "name": p.name,
                "points": p.len,
                "diameter": p.diameter,
            })
        })
        .collect();
    let mut cross = Vec::new();
    for i in 1..=boxed.pieces().len() {
        for j in (i + 1)..=boxed.pieces().len() {
            cross.push(json!([i, j, boxed.cross_distance(i, j)]));
        }
    }
    let results = json!({
        "kind": kind,
        "pieces": pieces,
        "cross_distances": cross,
        "metric_axioms": "pass",
        "points_total": boxed.space().len(),
    });
    Report::new("build-box", scn, results).write(opts.out.as_deref())?;
    Ok(0)
}

pub fn cmd_play(scn: &Scenario, opts: &Options) -> CmdResult {
    let model = scn.build_model()?;
    let ctx = build_ctx_cached(scn, &model, opts)?;
    let rounds = challenge_rounds(scn, opts)?;
    if rounds.windows(2).any(|w| w[0] > w[1]) {
        return Err(Failure::config(
            "play challenges must be nondecreasing (the straight game wants them strictly increasing)",
        ));
    }
    let challenge = Challenge::new(rounds.clone()).map_err(Failure::from)?;
    let strategy = scn.build_strategy(&model)?;
    let bound = scn.bound(opts.bound)?;
    let family = family_of_region(&ctx);
    let transcript = play(&ctx, &family, &challenge, strategy.as_ref(), bound);
    let won = transcript.outcome.is_won();
    let artifact = transcript_to_artifact(&transcript, &rounds, &scn.digest());
    let results = json!({
        "outcome": to_value(&artifacts::outcome_to_dto(&transcript.outcome)),
        "transcript": to_value(&artifact),
    });
    Report::new("play", scn, results).write(opts.out.as_deref())?;
    Ok(if won { 0 } else { 1 })
}

pub fn cmd_sfdc(scn: &Scenario, opts: &Options) -> CmdResult {
    let model = scn.build_model()?;
    let ctx = build_ctx_cached(scn, &model, opts)?;
    let rounds = challenge_rounds(scn, opts)?;
    let challenge = Challenge::strictly_increasing(rounds.clone()).map_err(Failure::from)?;
    let strategy = scn.build_strategy(&model)?;
    let bound = scn.bound(opts.bound)?;
    let family = family_of_region(&ctx);
    let (m, transcript) =
        sfdc_check(&ctx, &family, &challenge, strategy.as_ref(), bound).map_err(Failure::from)?;
    let artifact = transcript_to_artifact(&transcript, &rounds, &scn.digest());
    let results = json!({
        "m": m,
        "outcome": to_value(&artifacts::outcome_to_dto(&transcript.outcome)),
        "transcript": to_value(&artifact),
    });
    Report::new("sfdc", scn, results).write(opts.out.as_deref())?;
    Ok(if m.is_some() { 0 } else { 1 })
}

pub fn cmd_equi_sfdc(scn: &Scenario, opts: &Options) -> CmdResult {
    let model = scn.build_model()?;
    let ctx = build_ctx_cached(scn, &model, opts)?;
    let chain = scn.build_chain(&model)?;
    let rounds = challenge_rounds(scn, opts)?;
    let challenge = Challenge::strictly_increasing(rounds.clone()).map_err(Failure::from)?;
    let strategy = scn.build_strategy(&model)?;
    let bound = scn.bound(opts.bound)?;
    let family = family_of_region(&ctx);
    let report =
        equivariant_sfdc_check(&ctx, &chain, &family, &challenge, strategy.as_ref(), bound)
            .map_err(Failure::from)?;
    let artifact = transcript_to_artifact(&report.transcript, &rounds, &scn.digest());
    let pass = report.m_and_level.is_some();
    let results = json!({
        "m": report.m_and_level.map(|(m, _)| m),
        "level": report.m_and_level.map(|(_, k)| k),
        "invariance_checked": report.invariance.len(),
        "invariance_pass": report.invariance.iter().all(|v| v.pass),
        "outcome": to_value(&artifacts::outcome_to_dto(&report.transcript.outcome)),
        "transcript": to_value(&artifact),
    });
    Report::new("equi-sfdc", scn, results).write(opts.out.as_deref())?;
    Ok(if pass { 0 } else { 1 })
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::config(format!("reading {}: {e}", path.display())))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| Failure::config(format!("parsing {}: {e}", path.display())))
}

pub fn cmd_transform(
    scn: &Scenario,
    opts: &Options,
    artifact_path: &Path,
    direction: &str,
    artifact_out: Option<&Path>,
) -> CmdResult {
    let model = scn.build_model()?;
    let ctx = build_ctx_cached(scn, &model, opts)?;
    let value = read_json(artifact_path)?;
    let artifact: SequenceArtifact = serde_json::from_value(value)
        .map_err(|e| Failure::config(format!("not a decomposition-sequence artifact: {e}")))?;
    if artifact.kind != "decomposition_sequence" {
        return Err(Failure::config(format!(
            "artifact kind is {:?}, expected a decomposition sequence",
            artifact.kind
        )));
    }
    if artifact.scenario_digest != scn.digest() {
        return Err(Failure::config(
            "artifact was produced under a different scenario digest",
        ));
    }
    let seq = sequence_from_artifact(&ctx, &artifact)?;
    let (out_seq, out_flavor, verdicts) = match direction {
        "to-full" => {
            let full = ordinary_to_full(&seq).map_err(Failure::from)?;
            let verdicts: Vec<Value> = full
                .verify_full_stages()
                .map_err(Failure::from)?
                .iter()
                .enumerate()
                .flat_map(|(k, stage)| {
                    stage.iter().enumerate().map(move |(p, v)| {
                        json!({
                            "stage": k + 1,
                            "part": p,
                            "pass": v.pass,
                            "lebesgue": v.lebesgue,
                            "required": v.required,
                        })
                    })
                })
                .collect();
            (full, "full", verdicts)
        }
        "to-ordinary" => {
            let ord = full_to_ordinary(&seq).map_err(Failure::from)?;
            let verdicts: Vec<Value> = ord
                .verify_ordinary_stages()
                .iter()
                .enumerate()
                .flat_map(|(k, stage)| {
                    stage.iter().enumerate().map(move |(p, v)| {
                        json!({
                            "stage": k + 1,
                            "part": p,
                            "pass": v.pass,
                            "gap": v.gap,
                            "uncovered": v.uncovered.len(),
                            "violations": v.violations.len(),
                        })
                    })
                })
                .collect();
            (ord, "ordinary", verdicts)
        }
        other => {
            return Err(Failure::config(format!(
                "unknown direction {other:?} (use to-full or to-ordinary)"
            )))
        }
    };
    let all_pass = verdicts
        .iter()
        .all(|v| v["pass"].as_bool().unwrap_or(false));
    let out_artifact = sequence_to_artifact(&out_seq, out_flavor, &scn.digest());
    if let Some(path) = artifact_out {
        let mut bytes = serde_json::to_vec_pretty(&to_value(&out_artifact))
            .expect("artifacts are valid JSON");
        bytes.push(b'\n');
        std::fs::write(path, bytes)
            .map_err(|e| Failure::config(format!("writing {}: {e}", path.display())))?;
    }
    let results = json!({
        "direction": direction,
        "gaps_in": seq.gaps(),
        "gaps_out": out_seq.gaps(),
        "verdicts": verdicts,
        "all_pass": all_pass,
        "sequence": to_value(&out_artifact),
    });
    Report::new("transform", scn, results).write(opts.out.as_deref())?;
    Ok(if all_pass { 0 } else { 1 })
}

pub fn cmd_verify(scn: &Scenario, opts: &Options, artifact_path: &Path) -> CmdResult {
    let model = scn.build_model()?;
    let ctx = build_ctx_cached(scn, &model, opts)?;
    let value = read_json(artifact_path)?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Failure::config("artifact has no `kind` field"))?
        .to_string();
    match kind.as_str() {
        "transcript" => {
            let artifact: TranscriptArtifact = serde_json::from_value(value)
                .map_err(|e| Failure::config(format!("bad transcript artifact: {e}")))?;
            if artifact.scenario_digest != scn.digest() {
                return Err(Failure::config(
                    "artifact was produced under a different scenario digest",
                ));
            }
            let transcript = transcript_from_artifact(&ctx, &artifact)?;
            let replayed = replay(&transcript);
            let matches_stored = matches!(
                (&replayed, artifact.outcome.status.as_str()),
                (Outcome::Won { .. }, "won") | (Outcome::Lost(_), "lost")
            );
            let results = json!({
                "kind": kind,
                "replayed_outcome": to_value(&artifacts::outcome_to_dto(&replayed)),
                "stored_outcome": to_value(&artifact.outcome),
                "matches_stored": matches_stored,
            });
            Report::new("verify", scn, results).write(opts.out.as_deref())?;
            Ok(if replayed.is_won() && matches_stored { 0 } else { 1 })
        }
        "decomposition_sequence" => {
            let artifact: SequenceArtifact = serde_json::from_value(value)
                .map_err(|e| Failure::config(format!("bad sequence artifact: {e}")))?;
            if artifact.scenario_digest != scn.digest() {
                return Err(Failure::config(
                    "artifact was produced under a different scenario digest",
                ));
            }
            let seq = sequence_from_artifact(&ctx, &artifact)?;
            let (pass, detail) = match artifact.flavor.as_str() {
                "ordinary" => {
                    let stages = seq.verify_ordinary_stages();
                    let pass = stages.iter().flatten().all(|v| v.pass);
                    (pass, json!(stages.iter().flatten().filter(|v| !v.pass).count()))
                }
                "full" => {
                    let stages = seq.verify_full_stages().map_err(Failure::from)?;
                    let pass = stages.iter().flatten().all(|v| v.pass);
                    (pass, json!(stages.iter().flatten().filter(|v| !v.pass).count()))
                }
                other => {
                    return Err(Failure::config(format!(
                        "unknown sequence flavor {other:?}"
                    )))
                }
            };
            let results = json!({
                "kind": kind,
                "flavor": artifact.flavor,
                "pass": pass,
                "failing_parts": detail,
            });
            Report::new("verify", scn, results).write(opts.out.as_deref())?;
            Ok(if pass { 0 } else { 1 })
        }
        other => Err(Failure::config(format!("unknown artifact kind {other:?}"))),
    }
}

pub fn cmd_asdim(scn: &Scenario, opts: &Options) -> CmdResult {
    let model = scn.build_model()?;
    let ctx = build_ctx_cached(scn, &model, opts)?;
    let r: u32 = scn
        .run_num("r")?
        .ok_or_else(|| Failure::config("missing `r` in [run]"))?;
    let piece_bound: u32 = scn
        .run_num("piece-bound")?
        .ok_or_else(|| Failure::config("missing `piece-bound` in [run]"))?;
    let mode = if opts.greedy {
        SolverMode::Greedy
    } else if opts.exact {
        SolverMode::default()
    } else {
        match scn.get_str("run", "mode")?.as_deref() {
            Some("greedy") => SolverMode::Greedy,
            _ => SolverMode::default(),
        }
    };
    let region = PointSubset::full(ctx.space());
    let outcome = asdim_at_scale(&region, r, piece_bound, mode);
    let families: Vec<Value> = outcome
        .families
        .iter()
        .map(|fam| {
            let pieces: Vec<Vec<usize>> =
                fam.pieces().iter().map(|p| p.bits().to_vec()).collect();
            json!({
                "pieces": pieces,
                "r_disjoint": fam.is_r_disjoint(r).ok,
                "max_diameter": fam.max_diameter(),
            })
        })
        .collect();
    let results = json!({
        "n": outcome.n,
        "exact": outcome.exact,
        "r": r,
        "piece_bound": piece_bound,
        "families": families,
    });
    Report::new("asdim", scn, results).write(opts.out.as_deref())?;
    Ok(0)
}

fn modulus_table(profile: &ModulusReport) -> Vec<Value> {
    profile
        .table
        .iter()
        .map(|(&t, &(hi, lo))| json!([t, hi, lo]))
        .collect()
}

pub fn cmd_profile_map(scn: &Scenario, opts: &Options) -> CmdResult {
    let model = scn.build_model()?;
    let GroupModel::Lattice(base) = &model else {
        return Err(Failure::config("profile-map compares lattice generating sets"));
    };
    let other_gens = scn.map_other_generators()?;
    let other = GroupModel::Lattice(std::sync::Arc::new(
        LatticeGroup::new(
            &format!("{}*", base.name()),
            base.rank(),
            other_gens,
            base.window(),
        )
        .map_err(Failure::from)?,
    ));
    let ctx = build_ctx_cached(scn, &model, opts)?;
    let other_ctx = other
        .space_over(ctx.elems().to_vec())
        .map_err(Failure::from)?;
    let forward = MapFamily::new(
        "forward",
        vec![MapMember::new(ctx.space(), other_ctx.space(), (0..ctx.len()).collect())
            .map_err(Failure::from)?],
    );
    let backward = MapFamily::new(
        "backward",
        vec![MapMember::new(other_ctx.space(), ctx.space(), (0..ctx.len()).collect())
            .map_err(Failure::from)?],
    );
    let c: u32 = scn.map_c()?.unwrap_or(2);
    let (num, den, shift) = scn.map_floor()?;
    let floor = move |t: u32| (num * t / den).saturating_sub(shift);
    let verdict =
        check_coarse_equivalence(&forward, &backward, c, &floor).map_err(Failure::from)?;
    let results = json!({
        "pass": verdict.pass,
        "c": c,
        "floor": format!("{num}/{den} - {shift}"),
        "forward_table": modulus_table(&verdict.forward_profile),
        "backward_table": modulus_table(&verdict.backward_profile),
        "displacement_witness": verdict.displacement_witness.map(|(m, x, d)| json!([m, x, d])),
        "floor_witness": verdict.floor_witness.map(|(name, t)| json!([name, t])),
    });
    Report::new("profile-map", scn, results).write(opts.out.as_deref())?;
    Ok(if verdict.pass { 0 } else { 1 })
}

pub fn cmd_associated_family(scn: &Scenario, opts: &Options) -> CmdResult {
    let model = scn.build_model()?;
    let GroupModel::Finite(g) = &model else {
        return Err(Failure::config("associated-family needs a finite group"));
    };
    let cap: usize = scn.run_num("cap")?.unwrap_or(64);
    let family = associated_family(g, cap).map_err(Failure::from)?;
    let entries: Vec<Value> = family
        .entries
        .iter()
        .map(|e| {
            json!({
                "subgroup": e.subgroup,
                "normal": e.normal,
                "quotient_order": e.quotient.order(),
                "quotient_lengths": e.quotient.group().lengths(),
                "quotient_name": e.quotient.group().name(),
            })
        })
        .collect();
    let results = json!({
        "group": g.name(),
        "entries": entries,
        "count": entries.len(),
    });
    Report::new("associated-family", scn, results).write(opts.out.as_deref())?;
    Ok(0)
}
