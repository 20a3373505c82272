//! fdc: finite-scale decomposition complexity toolkit.
//!
//! Scenarios come from a config file; every command writes one
//! deterministic machine-readable report (stdout or --out) and prints its
//! timing to stderr. Exit codes: 0 pass/win, 1 verified negative, 2
//! configuration error, 3 internal invariant breach.

mod artifacts;
mod cache;
mod commands;
mod report;
mod scenario;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{Failure, Options};
use scenario::Scenario;

#[derive(Parser)]
#[command(
    name = "fdc",
    version,
    about = "Word metrics, box spaces, decomposition verifiers and the decomposition game at desk scale"
)]
struct Cli {
    /// Scenario config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Report destination (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Bound B, overriding the scenario's [run] bound.
    #[arg(long, global = true)]
    bound: Option<u32>,

    /// Seed for the randomized test utilities (doubling challenges).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cache directory for distance tables (falls back to CLI_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Force the exact solver (asdim).
    #[arg(long, global = true)]
    exact: bool,

    /// Force the greedy solver (asdim).
    #[arg(long, global = true, conflicts_with = "exact")]
    greedy: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the box space (or ball union) of the scenario's chain.
    BuildBox,
    /// Play the decomposition game on the scenario's region.
    Play,
    /// Straight-FDC check: least round with a bounded family.
    Sfdc,
    /// Equi-variant straight-FDC check against the chain.
    EquiSfdc,
    /// Transform a stored decomposition sequence (ordinary <-> full).
    Transform {
        /// Decomposition-sequence artifact to transform.
        #[arg(long)]
        artifact: PathBuf,
        /// to-full or to-ordinary.
        #[arg(long)]
        direction: String,
        /// Also write the transformed sequence as its own artifact.
        #[arg(long)]
        artifact_out: Option<PathBuf>,
    },
    /// Re-verify a stored transcript or decomposition sequence.
    Verify {
        /// Artifact to re-verify.
        #[arg(long)]
        artifact: PathBuf,
    },
    /// Fixed-scale dimension of the region.
    Asdim,
    /// Modulus profile and coarse-equivalence check of two generating sets.
    ProfileMap,
    /// Enumerate the family of subquotients of a finite group.
    AssociatedFamily,
}

fn load_scenario(path: &Option<PathBuf>) -> Result<Scenario, Failure> {
    let Some(path) = path else {
        return Err(Failure::config("missing --config"));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("reading {}: {e}", path.display())))?;
    Scenario::parse(&text).map_err(Failure::from)
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let opts = Options {
        out: cli.out.clone(),
        bound: cli.bound,
        seed: cli.seed,
        cache_dir: cli.cache_dir.clone(),
        exact: cli.exact,
        greedy: cli.greedy,
    };
    let outcome = load_scenario(&cli.config).and_then(|scn| match &cli.command {
        Command::BuildBox => commands::cmd_build_box(&scn, &opts),
        Command::Play => commands::cmd_play(&scn, &opts),
        Command::Sfdc => commands::cmd_sfdc(&scn, &opts),
        Command::EquiSfdc => commands::cmd_equi_sfdc(&scn, &opts),
        Command::Transform {
            artifact,
            direction,
            artifact_out,
        } => commands::cmd_transform(&scn, &opts, artifact, direction, artifact_out.as_deref()),
        Command::Verify { artifact } => commands::cmd_verify(&scn, &opts, artifact),
        Command::Asdim => commands::cmd_asdim(&scn, &opts),
        Command::ProfileMap => commands::cmd_profile_map(&scn, &opts),
        Command::AssociatedFamily => commands::cmd_associated_family(&scn, &opts),
    });
    // timing is segregated from the report
    eprintln!("timing: {:?}", started.elapsed());
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}
