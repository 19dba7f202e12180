//! The experiment config file: one JSON document with sections
//! {experiment, mutators, selection, sim, fitness, library}, dotted-key
//! overrides, and full validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{ArenaMap, SimConfig};
use crate::chromosome::Chromosome;
use crate::fitness::{measures, FitnessSpec};
use crate::genetic_ops::MutatorConfig;
use crate::node_library::NodeLibrary;
use crate::selection::SelectionConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("override key `{0}` does not exist in the config")]
    UnknownOverrideKey(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Evolve,
    Baseline,
}

/// Map source: a bundled preset name or a map file path (relative paths
/// resolve against the config file's directory).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapRef {
    Preset { preset: String },
    Path { path: PathBuf },
}

fn default_floor_score() -> f64 {
    -1.0e9
}
fn default_eval_trials() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSection {
    pub map: MapRef,
    /// Population size; one zombie per population member.
    pub zombie_count: usize,
    pub human_count: usize,
    /// Reproduction steps; generations 0..=generations are evaluated.
    pub generations: u32,
    pub master_seed: u64,
    #[serde(default)]
    pub mode: Mode,
    /// Score assigned to members whose tree fails to compile.
    #[serde(default = "default_floor_score")]
    pub floor_score: f64,
    /// Path to the starting tree (relative to the config file).
    pub initial_tree: PathBuf,
    /// Default trial count for the evaluation harness.
    #[serde(default = "default_eval_trials")]
    pub eval_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub mutators: MutatorConfig,
    #[serde(default)]
    pub selection: SelectionConfig,
    #[serde(default)]
    pub sim: SimConfig,
    pub fitness: FitnessSpec,
    pub library: NodeLibrary,
}

/// A config resolved against the filesystem: map loaded, initial tree
/// parsed, ready to run.
#[derive(Debug, Clone)]
pub struct LoadedExperiment {
    pub config: ExperimentConfig,
    pub effective_json: String,
    pub map: ArenaMap,
    pub initial_tree: Chromosome,
}

fn apply_override(doc: &mut serde_json::Value, key: &str, value: &str) -> Result<(), ConfigError> {
    let mut cursor = &mut *doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = cursor
            .as_object_mut()
            .ok_or_else(|| ConfigError::UnknownOverrideKey(key.to_string()))?;
        if !obj.contains_key(*part) {
            return Err(ConfigError::UnknownOverrideKey(key.to_string()));
        }
        if i + 1 == parts.len() {
            let parsed: serde_json::Value = serde_json::from_str(value)
                .unwrap_or_else(|_| serde_json::Value::String(value.to_string()));
            obj.insert(part.to_string(), parsed);
            return Ok(());
        }
        cursor = obj.get_mut(*part).expect("checked above");
    }
    Err(ConfigError::UnknownOverrideKey(key.to_string()))
}

impl ExperimentConfig {
    /// Parses a config document, applying `key=value` overrides first.
    pub fn parse_with_overrides(
        text: &str,
        overrides: &[(String, String)],
    ) -> Result<(ExperimentConfig, String), ConfigError> {
        let mut doc: serde_json::Value = serde_json::from_str(text)?;
        for (key, value) in overrides {
            apply_override(&mut doc, key, value)?;
        }
        let config: ExperimentConfig = serde_json::from_value(doc.clone())?;
        // The effective document round-trips through the typed config so
        // defaults are materialized.
        let mut effective = serde_json::to_string_pretty(&config)?;
        effective.push('\n');
        Ok((config, effective))
    }

    /// Structural validation of every section. Collects all problems.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut problems: Vec<String> = Vec::new();
        if self.experiment.zombie_count < 2 {
            problems.push("experiment.zombie_count must be at least 2".into());
        }
        if self.experiment.human_count == 0 {
            problems.push("experiment.human_count must be at least 1".into());
        }
        if let Err(e) = self.mutators.validate() {
            problems.push(format!("mutators: {e}"));
        }
        if let Err(e) = self.selection.validate(self.experiment.zombie_count) {
            problems.push(format!("selection: {e}"));
        }
        if let Err(e) = self.sim.validate() {
            problems.push(format!("sim: {e}"));
        }
        if let Err(e) = self.fitness.validate() {
            problems.push(format!("fitness: {e}"));
        }
        for key in self.fitness.keys() {
            if !measures::ALL.contains(&key) {
                problems.push(format!("fitness: unknown measure `{key}`"));
            }
        }
        let report = self.library.validate();
        for issue in &report.issues {
            problems.push(format!("library: {issue}"));
        }
        if let MapRef::Preset { preset } = &self.experiment.map {
            if ArenaMap::preset(preset).is_none() {
                problems.push(format!("experiment.map: unknown preset `{preset}`"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(problems.join("; ")))
        }
    }

    /// Resolves the map reference. `base` anchors relative paths.
    pub fn load_map(&self, base: &Path) -> Result<ArenaMap, ConfigError> {
        match &self.experiment.map {
            MapRef::Preset { preset } => ArenaMap::preset(preset)
                .ok_or_else(|| ConfigError::Invalid(format!("unknown map preset `{preset}`"))),
            MapRef::Path { path } => {
                let full = base.join(path);
                ArenaMap::from_file(&full)
                    .map_err(|e| ConfigError::Invalid(format!("map `{}`: {e}", full.display())))
            }
        }
    }

    pub fn load_initial_tree(&self, base: &Path) -> Result<Chromosome, ConfigError> {
        let full = base.join(&self.experiment.initial_tree);
        let tree = Chromosome::from_file(&full)
            .map_err(|e| ConfigError::Invalid(format!("initial tree `{}`: {e}", full.display())))?;
        tree.validate(&self.library).map_err(|e| {
            ConfigError::Invalid(format!("initial tree does not fit the library: {e}"))
        })?;
        Ok(tree)
    }
}

/// Loads and fully resolves a config file.
pub fn load_experiment(
    path: &Path,
    overrides: &[(String, String)],
) -> Result<LoadedExperiment, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    let (config, effective_json) = ExperimentConfig::parse_with_overrides(&text, overrides)?;
    config.validate()?;
    let base = path.parent().unwrap_or(Path::new("."));
    let map = config.load_map(base)?;
    map.validate()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let initial_tree = config.load_initial_tree(base)?;
    Ok(LoadedExperiment {
        config,
        effective_json,
        map,
        initial_tree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::presets;

    #[test]
    fn desk_preset_validates() {
        let cfg = presets::desk_config();
        cfg.validate().unwrap();
    }

    #[test]
    fn overrides_replace_values() {
        let text = serde_json::to_string_pretty(&presets::desk_config()).unwrap();
        let (cfg, _) = ExperimentConfig::parse_with_overrides(
            &text,
            &[
                ("experiment.generations".to_string(), "3".to_string()),
                ("sim.dt".to_string(), "0.2".to_string()),
            ],
        )
        .unwrap();
        assert_eq!(cfg.experiment.generations, 3);
        assert_eq!(cfg.sim.dt, 0.2);
    }

    #[test]
    fn unknown_override_key_rejected() {
        let text = serde_json::to_string_pretty(&presets::desk_config()).unwrap();
        let err = ExperimentConfig::parse_with_overrides(
            &text,
            &[("experiment.galaxy".to_string(), "1".to_string())],
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::UnknownOverrideKey(_)));
    }

    #[test]
    fn effective_config_revalidates_identically() {
        let cfg = presets::desk_config();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let (parsed, effective) = ExperimentConfig::parse_with_overrides(&text, &[]).unwrap();
        assert_eq!(parsed, cfg);
        let (reparsed, effective2) =
            ExperimentConfig::parse_with_overrides(&effective, &[]).unwrap();
        assert_eq!(reparsed, cfg);
        assert_eq!(effective, effective2);
    }

    #[test]
    fn bad_section_collects_problem() {
        let mut cfg = presets::desk_config();
        cfg.experiment.zombie_count = 1;
        cfg.selection.tournament_k = 99;
        let err = cfg.validate().unwrap_err();
        let text = err.to_string();
        assert!(text.contains("zombie_count"), "{text}");
        assert!(text.contains("tournament_k"), "{text}");
    }
}
