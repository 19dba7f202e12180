//! Bundled experiment presets. The desk preset is the default: small enough
//! to evolve in minutes on a laptop. The paper-scale presets mirror the
//! original experiment sizes (20/50/40 zombies, 1000 generations, 90-second
//! episodes) and are opt-in.

use std::path::PathBuf;

use crate::arena::SimConfig;
use crate::experiment::config::{ExperimentConfig, ExperimentSection, MapRef, Mode};
use crate::fitness::bundled_spec;
use crate::genetic_ops::MutatorConfig;
use crate::node_library::default_roster;
use crate::selection::SelectionConfig;

fn base(map: &str, zombies: usize, humans: usize, generations: u32) -> ExperimentConfig {
    ExperimentConfig {
        experiment: ExperimentSection {
            map: MapRef::Preset {
                preset: map.to_string(),
            },
            zombie_count: zombies,
            human_count: humans,
            generations,
            master_seed: 1,
            mode: Mode::Evolve,
            floor_score: -1.0e9,
            initial_tree: PathBuf::from("trees/initial_degraded.btree.json"),
            eval_trials: 20,
        },
        mutators: MutatorConfig::default(),
        selection: SelectionConfig::default(),
        sim: SimConfig::default(),
        fitness: bundled_spec(),
        library: default_roster(),
    }
}

/// Desk scale: medium map, 12 zombies, 3 humans, 150 generations,
/// 60-second episodes.
pub fn desk_config() -> ExperimentConfig {
    base("medium", 12, 3, 150)
}

/// Paper-scale presets: 1000 generations, 90-second episodes.
pub fn paper_small_config() -> ExperimentConfig {
    let mut cfg = base("small", 20, 6, 1000);
    cfg.sim.episode_seconds = 90.0;
    cfg
}

pub fn paper_medium_config() -> ExperimentConfig {
    let mut cfg = base("medium", 50, 6, 1000);
    cfg.sim.episode_seconds = 90.0;
    cfg
}

pub fn paper_large_config() -> ExperimentConfig {
    let mut cfg = base("large", 40, 6, 1000);
    cfg.sim.episode_seconds = 90.0;
    cfg
}

pub fn all() -> Vec<(&'static str, ExperimentConfig)> {
    vec![
        ("desk", desk_config()),
        ("paper_small", paper_small_config()),
        ("paper_medium", paper_medium_config()),
        ("paper_large", paper_large_config()),
    ]
}
