//! Deterministic fixed-timestep survival arena: maps, pathfinding, agents,
//! perception, scripted humans, damage, chase detection, and fitness-event
//! emission.

pub mod agent;
pub mod chase;
pub mod episode;
pub mod human;
pub mod map;
pub mod pathfind;

use serde::{Deserialize, Serialize};

pub use agent::{AgentState, Role};
pub use chase::{ChaseConfig, ChaseDetector, ChaseEvent};
pub use episode::{run_episode, EpisodeError, EpisodeOutcome, TraceRow};
pub use human::HumanConfig;
pub use map::{ArenaMap, MapError};
pub use pathfind::{find_path, Path, PathCost, PathError};

fn default_dt() -> f64 {
    0.1
}
fn default_episode_seconds() -> f64 {
    60.0
}
fn default_perception_radius() -> f64 {
    8.0
}
fn default_fov_degrees() -> f64 {
    120.0
}
fn default_attack_range() -> f64 {
    1.2
}
fn default_damage_per_second() -> f64 {
    20.0
}
fn default_zombie_base_speed() -> f64 {
    2.8
}
fn default_respawn_seconds() -> f64 {
    2.0
}
fn default_near_last_known_radius() -> f64 {
    4.0
}
fn default_idle_epsilon() -> f64 {
    0.01
}

/// Simulation parameters for one episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_episode_seconds")]
    pub episode_seconds: f64,
    #[serde(default = "default_perception_radius")]
    pub perception_radius: f64,
    #[serde(default = "default_fov_degrees")]
    pub fov_degrees: f64,
    #[serde(default = "default_attack_range")]
    pub attack_range: f64,
    #[serde(default = "default_damage_per_second")]
    pub damage_per_second: f64,
    #[serde(default = "default_zombie_base_speed")]
    pub zombie_base_speed: f64,
    #[serde(default = "default_respawn_seconds")]
    pub respawn_seconds: f64,
    /// Radius around the last known enemy location that counts as searching.
    #[serde(default = "default_near_last_known_radius")]
    pub near_last_known_radius: f64,
    /// Per-tick displacement below which an agent counts as idle.
    #[serde(default = "default_idle_epsilon")]
    pub idle_epsilon: f64,
    #[serde(default)]
    pub human: HumanConfig,
    #[serde(default)]
    pub chase: ChaseConfig,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: default_dt(),
            episode_seconds: default_episode_seconds(),
            perception_radius: default_perception_radius(),
            fov_degrees: default_fov_degrees(),
            attack_range: default_attack_range(),
            damage_per_second: default_damage_per_second(),
            zombie_base_speed: default_zombie_base_speed(),
            respawn_seconds: default_respawn_seconds(),
            near_last_known_radius: default_near_last_known_radius(),
            idle_epsilon: default_idle_epsilon(),
            human: HumanConfig::default(),
            chase: ChaseConfig::default(),
        }
    }
}

/// Default simulation parameters (desk scale).
pub fn default_sim_config() -> SimConfig {
    SimConfig::default()
}

impl SimConfig {
    /// Number of ticks in one episode.
    pub fn ticks(&self) -> usize {
        (self.episode_seconds / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.dt > 0.0) {
            return Err(format!("dt must be positive, got {}", self.dt));
        }
        let ticks = self.episode_seconds / self.dt;
        if (ticks - ticks.round()).abs() > 1e-9 || ticks < 1.0 {
            return Err(format!(
                "episode_seconds ({}) must be a positive multiple of dt ({})",
                self.episode_seconds, self.dt
            ));
        }
        for (name, v) in [
            ("perception_radius", self.perception_radius),
            ("attack_range", self.attack_range),
            ("damage_per_second", self.damage_per_second),
            ("zombie_base_speed", self.zombie_base_speed),
            ("human.base_speed", self.human.base_speed),
            ("human.replan_interval", self.human.replan_interval),
        ] {
            if !(v > 0.0) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if !(0.0..=360.0).contains(&self.fov_degrees) {
            return Err(format!(
                "fov_degrees must lie in [0, 360], got {}",
                self.fov_degrees
            ));
        }
        Ok(())
    }
}
