//! Run orchestration: evolution (fitness-driven or random baseline),
//! incremental logging, best-tree extraction, and the multi-trial
//! evaluation/comparison harness.
//!
//! Random streams derive from the master seed per purpose (seeding,
//! per-generation reproduction, per-generation episodes, per-trial
//! evaluation), so changing the trial count never perturbs evolution.

pub mod config;
pub mod presets;
pub mod runlog;
pub mod stats;
pub mod trees;

use std::ops::ControlFlow;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::arena::{run_episode, EpisodeError, EpisodeOutcome};
use crate::behavior_tree::{compile, CompileError};
use crate::chromosome::Chromosome;
use crate::fitness::score;
use crate::rng;
use crate::selection::{next_generation, next_generation_random};
use crate::types::AgentId;

pub use config::{load_experiment, ConfigError, ExperimentConfig, LoadedExperiment, MapRef, Mode};
pub use runlog::{select_best, GenerationRecord, RunLog, RunLogWriter};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Episode(#[from] EpisodeError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Scores every member of a population from one shared episode. Members
/// whose tree failed to compile get the floor score.
fn score_generation(
    loaded: &LoadedExperiment,
    pop: &[Chromosome],
    episode_seed: u64,
) -> Result<Vec<f64>, RunError> {
    let cfg = &loaded.config;
    let outcome = run_episode(
        pop,
        &loaded.map,
        &cfg.sim,
        &cfg.library,
        &cfg.fitness,
        cfg.experiment.human_count,
        episode_seed,
        false,
    )?;
    Ok(collect_scores(&outcome, pop, loaded))
}

fn collect_scores(
    outcome: &EpisodeOutcome,
    pop: &[Chromosome],
    loaded: &LoadedExperiment,
) -> Vec<f64> {
    let cfg = &loaded.config;
    let mut fitnesses: Vec<f64> = pop
        .iter()
        .enumerate()
        .map(|(i, member)| {
            score(
                &outcome.ledger,
                AgentId(i as u32),
                member.size(),
                &cfg.fitness,
            )
        })
        .collect();
    for (i, _) in &outcome.compile_failures {
        fitnesses[*i] = cfg.experiment.floor_score;
    }
    fitnesses
}

/// Runs evolution (or the random baseline, per config mode). Generation 0 is
/// the seeded population; `generations` reproduction steps follow, each
/// evaluated in one shared episode. When `out_dir` is given the log is
/// written incrementally. The hook runs after each logged generation and can
/// stop the run early.
pub fn evolve_with_hook(
    loaded: &LoadedExperiment,
    out_dir: Option<&Path>,
    mut hook: impl FnMut(&GenerationRecord) -> ControlFlow<()>,
) -> Result<RunLog, RunError> {
    let cfg = &loaded.config;
    cfg.validate()?;
    let master = cfg.experiment.master_seed;
    let mut writer = match out_dir {
        Some(dir) => Some(RunLogWriter::create(dir, &loaded.effective_json, master)?),
        None => None,
    };

    let mut seed_rng = rng::stream(master, "seeding", 0);
    let mut pop = crate::genetic_ops::seed_population(
        &loaded.initial_tree,
        cfg.experiment.zombie_count,
        &cfg.library,
        &cfg.mutators,
        &mut seed_rng,
    );

    let mut log = RunLog {
        seed: master,
        records: Vec::new(),
    };
    for generation in 0..=cfg.experiment.generations {
        let episode_seed = rng::derive_seed(master, "episode", generation as u64);
        let fitnesses = score_generation(loaded, &pop, episode_seed)?;
        let record = GenerationRecord::new(generation, fitnesses, &pop);
        if let Some(w) = writer.as_mut() {
            w.append(&record)?;
        }
        log.records.push(record);
        if hook(log.records.last().expect("just pushed")).is_break() {
            break;
        }
        if generation < cfg.experiment.generations {
            let mut gen_rng = rng::stream(master, "generation", generation as u64);
            let fitnesses = &log.records.last().expect("just pushed").fitnesses;
            pop = match cfg.experiment.mode {
                Mode::Evolve => next_generation(
                    &pop,
                    fitnesses,
                    &cfg.selection,
                    &cfg.mutators,
                    &cfg.library,
                    &mut gen_rng,
                ),
                Mode::Baseline => {
                    next_generation_random(&pop, &cfg.mutators, &cfg.library, &mut gen_rng)
                }
            };
        }
    }
    if let (Some(w), Some(best)) = (writer.as_ref(), select_best(&log)) {
        w.write_best(&best)?;
    }
    Ok(log)
}

pub fn evolve(loaded: &LoadedExperiment, out_dir: Option<&Path>) -> Result<RunLog, RunError> {
    evolve_with_hook(loaded, out_dir, |_| ControlFlow::Continue(()))
}

/// Summary of a multi-trial homogeneous-population evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalStats {
    /// One score per (trial, individual), trial-major.
    pub scores: Vec<f64>,
    pub mean: f64,
    pub median: f64,
    pub iqr: f64,
    pub min: f64,
    pub max: f64,
}

impl EvalStats {
    fn from_scores(scores: Vec<f64>) -> EvalStats {
        let mean = scores.iter().sum::<f64>() / scores.len() as f64;
        let median = stats::median(&scores);
        let iqr = stats::interquartile_range(&scores);
        let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        EvalStats {
            scores,
            mean,
            median,
            iqr,
            min,
            max,
        }
    }
}

/// Evaluates one tree: spawns the full zombie population homogeneously with
/// it and runs `trials` independent episodes with derived seeds. Scores
/// cover every individual of every trial. Trials run in parallel; results
/// merge by trial index.
pub fn evaluate(
    tree: &Chromosome,
    loaded: &LoadedExperiment,
    trials: usize,
) -> Result<EvalStats, RunError> {
    assert!(trials >= 1);
    let cfg = &loaded.config;
    compile(tree, &cfg.library)?;
    let pop: Vec<Chromosome> = vec![tree.deep_copy(); cfg.experiment.zombie_count];
    let master = cfg.experiment.master_seed;
    let per_trial: Vec<Result<Vec<f64>, RunError>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = rng::derive_seed(master, "trial", trial as u64);
            score_generation(loaded, &pop, seed)
        })
        .collect();
    let mut scores = Vec::with_capacity(trials * pop.len());
    for trial in per_trial {
        scores.extend(trial?);
    }
    Ok(EvalStats::from_scores(scores))
}

/// Evaluates several named trees under identical conditions.
pub fn compare(
    entries: &[(String, Chromosome)],
    loaded: &LoadedExperiment,
    trials: usize,
) -> Result<Vec<(String, EvalStats)>, RunError> {
    assert!(entries.len() >= 2, "compare needs at least two trees");
    let mut out = Vec::with_capacity(entries.len());
    for (name, tree) in entries {
        out.push((name.clone(), evaluate(tree, loaded, trials)?));
    }
    Ok(out)
}

/// Comparison table as CSV.
pub fn comparison_csv(rows: &[(String, EvalStats)]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["name", "median", "iqr", "mean", "min", "max"])
        .expect("header");
    for (name, stats) in rows {
        writer
            .write_record([
                name.clone(),
                format!("{}", stats.median),
                format!("{}", stats.iqr),
                format!("{}", stats.mean),
                format!("{}", stats.min),
                format!("{}", stats.max),
            ])
            .expect("row");
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("utf8")
}

/// Raw per-score rows as CSV (name, trial, member, score).
pub fn comparison_raw_csv(rows: &[(String, EvalStats)], population: usize) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["name", "trial", "member", "score"])
        .expect("header");
    for (name, stats) in rows {
        for (i, score) in stats.scores.iter().enumerate() {
            writer
                .write_record([
                    name.clone(),
                    (i / population).to_string(),
                    (i % population).to_string(),
                    format!("{score}"),
                ])
                .expect("row");
        }
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("utf8")
}

/// Resolves a preset config into a loaded experiment without touching the
/// filesystem (bundled maps and trees).
pub fn load_preset(name: &str) -> Option<LoadedExperiment> {
    let config = presets::all()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| c)?;
    let map = match &config.experiment.map {
        MapRef::Preset { preset } => crate::arena::ArenaMap::preset(preset)?,
        MapRef::Path { .. } => return None,
    };
    let mut effective = serde_json::to_string_pretty(&config).expect("config serializes");
    effective.push('\n');
    Some(LoadedExperiment {
        config,
        effective_json: effective,
        map,
        initial_tree: trees::initial_degraded(),
    })
}
