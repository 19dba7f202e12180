//! The scripted human stand-in: a wander controller that periodically picks
//! a nearby point preferring distance from zombies, self-visibility, cover
//! from zombie eyes, and heading alignment, plus a stamina-limited sprint
//! when chased.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arena::agent::{AgentState, MotionCmd};
use crate::arena::map::ArenaMap;
use crate::arena::pathfind::find_path;
use crate::arena::SimConfig;
use crate::types::{angle_between, Vec2};

fn default_base_speed() -> f64 {
    3.0
}
fn default_replan_interval() -> f64 {
    0.5
}
fn default_candidate_count() -> usize {
    12
}
fn default_wander_radius() -> f64 {
    6.0
}
fn default_sprint_multiplier() -> f64 {
    1.6
}
fn default_sprint_duration() -> f64 {
    3.0
}
fn default_recovery_rate() -> f64 {
    0.5
}
fn default_weight_zombie_distance() -> f64 {
    2.0
}
fn default_weight_visible_self() -> f64 {
    1.0
}
fn default_weight_hidden() -> f64 {
    1.0
}
fn default_weight_heading() -> f64 {
    0.6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HumanConfig {
    #[serde(default = "default_base_speed")]
    pub base_speed: f64,
    #[serde(default = "default_replan_interval")]
    pub replan_interval: f64,
    #[serde(default = "default_candidate_count")]
    pub candidate_count: usize,
    #[serde(default = "default_wander_radius")]
    pub wander_radius: f64,
    #[serde(default = "default_sprint_multiplier")]
    pub sprint_multiplier: f64,
    /// Seconds of sprint available when fully rested.
    #[serde(default = "default_sprint_duration")]
    pub sprint_duration: f64,
    /// Stamina seconds recovered per second while not sprinting.
    #[serde(default = "default_recovery_rate")]
    pub recovery_rate: f64,
    #[serde(default = "default_weight_zombie_distance")]
    pub weight_zombie_distance: f64,
    #[serde(default = "default_weight_visible_self")]
    pub weight_visible_self: f64,
    #[serde(default = "default_weight_hidden")]
    pub weight_hidden: f64,
    #[serde(default = "default_weight_heading")]
    pub weight_heading: f64,
}

impl Default for HumanConfig {
    fn default() -> Self {
        HumanConfig {
            base_speed: default_base_speed(),
            replan_interval: default_replan_interval(),
            candidate_count: default_candidate_count(),
            wander_radius: default_wander_radius(),
            sprint_multiplier: default_sprint_multiplier(),
            sprint_duration: default_sprint_duration(),
            recovery_rate: default_recovery_rate(),
            weight_zombie_distance: default_weight_zombie_distance(),
            weight_visible_self: default_weight_visible_self(),
            weight_hidden: default_weight_hidden(),
            weight_heading: default_weight_heading(),
        }
    }
}

fn visible(map: &ArenaMap, from: Vec2, to: Vec2, radius: f64) -> bool {
    from.distance(to) <= radius && map.line_of_sight(from, to)
}

fn score_candidate(
    candidate: Vec2,
    agent: &AgentState,
    zombies: &[Vec2],
    map: &ArenaMap,
    cfg: &SimConfig,
) -> f64 {
    let h = &cfg.human;
    let zombie_distance = zombies
        .iter()
        .map(|z| candidate.distance(*z))
        .fold(f64::INFINITY, f64::min);
    let distance_term = if zombie_distance.is_finite() {
        (zombie_distance / cfg.perception_radius).min(1.0)
    } else {
        1.0
    };
    let visible_self = if visible(map, agent.pos, candidate, cfg.perception_radius) {
        1.0
    } else {
        0.0
    };
    let hidden = if zombies
        .iter()
        .any(|z| visible(map, *z, candidate, cfg.perception_radius))
    {
        0.0
    } else {
        1.0
    };
    let alignment =
        (1.0 + (angle_between(agent.heading, (candidate - agent.pos).angle())).cos()) / 2.0;
    h.weight_zombie_distance * distance_term
        + h.weight_visible_self * visible_self
        + h.weight_hidden * hidden
        + h.weight_heading * alignment
}

/// One controller step: update sprint/stamina every tick, and re-pick a
/// wander destination every `replan_interval`.
pub fn human_controller_step(
    agent: &mut AgentState,
    zombies: &[Vec2],
    map: &ArenaMap,
    cfg: &SimConfig,
    now: f64,
    dt: f64,
) {
    let chased = zombies
        .iter()
        .any(|z| agent.pos.distance(*z) <= cfg.perception_radius);
    if chased && agent.stamina > 0.0 {
        agent.sprinting = true;
        agent.stamina = (agent.stamina - dt).max(0.0);
    } else {
        agent.sprinting = false;
        agent.stamina = (agent.stamina + cfg.human.recovery_rate * dt).min(cfg.human.sprint_duration);
    }

    if now + 1e-9 < agent.next_replan {
        return;
    }
    agent.next_replan = now + cfg.human.replan_interval;

    let mut candidates: Vec<Vec2> = Vec::with_capacity(cfg.human.candidate_count);
    let mut guard = 0;
    while candidates.len() < cfg.human.candidate_count && guard < cfg.human.candidate_count * 8 {
        guard += 1;
        let u: f64 = agent.rng.gen();
        let theta: f64 = agent.rng.gen::<f64>() * std::f64::consts::TAU;
        let r = cfg.human.wander_radius * u.sqrt();
        let p = agent.pos + Vec2::from_angle(theta).scaled(r);
        if map.is_free(p.cell()) {
            candidates.push(p);
        }
    }
    if candidates.is_empty() {
        return;
    }
    let mut scored: Vec<(f64, Vec2)> = candidates
        .into_iter()
        .map(|p| (score_candidate(p, agent, zombies, map, cfg), p))
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    for (_, dest) in scored {
        if let Ok(Some(path)) = find_path(map, agent.pos.cell(), dest.cell()) {
            agent.motion.issue(MotionCmd::ToPoint {
                dest,
                path: path.cells,
                next: 0,
            });
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::agent::{integrate_motion, MotionSlot, Role};
    use crate::arena::default_sim_config;
    use crate::blackboard::Blackboard;
    use crate::node_library::standard_blackboard;
    use crate::types::AgentId;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn human_at(pos: Vec2, seed: u64) -> AgentState {
        let cfg = default_sim_config();
        AgentState {
            id: AgentId(100),
            role: Role::Human,
            pos,
            heading: 0.0,
            speed_multiplier: 1.0,
            health: 100.0,
            stamina: cfg.human.sprint_duration,
            sprinting: false,
            alive: true,
            respawn_timer: 0.0,
            blackboard: Blackboard::new(&standard_blackboard()),
            motion: MotionSlot::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            last_displacement: Vec2::ZERO,
            next_replan: 0.0,
            last_seen_target_pos: None,
        }
    }

    #[test]
    fn wanders_without_zombies() {
        let map = ArenaMap::preset("medium").unwrap();
        let cfg = default_sim_config();
        let start = Vec2::new(18.5, 18.5);
        let mut agent = human_at(start, 3);
        let mut total = 0.0;
        for tick in 0..100 {
            let now = tick as f64 * 0.1;
            human_controller_step(&mut agent, &[], &map, &cfg, now, 0.1);
            integrate_motion(&mut agent, &map, &cfg, 0.1, &|_| None);
            total += agent.last_displacement.length();
        }
        assert!(total > 1.0, "human barely moved: {total}");
    }

    #[test]
    fn flees_adjacent_zombie() {
        let map = ArenaMap::preset("large").unwrap();
        let cfg = default_sim_config();
        let mut fled = 0;
        let trials = 1_000;
        for seed in 0..trials {
            let start = Vec2::new(24.5, 24.5);
            let zombie = Vec2::new(23.5, 24.5);
            let mut agent = human_at(start, seed);
            human_controller_step(&mut agent, &[zombie], &map, &cfg, 0.0, 0.1);
            // Walk the plan for one second and compare distances.
            for _ in 0..10 {
                integrate_motion(&mut agent, &map, &cfg, 0.1, &|_| None);
            }
            if agent.pos.distance(zombie) > start.distance(zombie) {
                fled += 1;
            }
        }
        assert!(
            fled as f64 / trials as f64 >= 0.95,
            "fled only {fled}/{trials}"
        );
    }

    #[test]
    fn zero_stamina_means_base_speed() {
        let cfg = default_sim_config();
        let mut agent = human_at(Vec2::new(18.5, 18.5), 9);
        agent.stamina = 0.0;
        let map = ArenaMap::preset("medium").unwrap();
        human_controller_step(&mut agent, &[Vec2::new(19.5, 18.5)], &map, &cfg, 0.0, 0.1);
        assert!(!agent.sprinting);
        assert_eq!(agent.current_speed(&cfg), cfg.human.base_speed);
    }

    #[test]
    fn stamina_drains_and_recovers() {
        let cfg = default_sim_config();
        let map = ArenaMap::preset("medium").unwrap();
        let mut agent = human_at(Vec2::new(18.5, 18.5), 10);
        let zombie = vec![Vec2::new(19.5, 18.5)];
        for tick in 0..5 {
            human_controller_step(&mut agent, &zombie, &map, &cfg, tick as f64 * 0.1, 0.1);
        }
        assert!(agent.sprinting);
        assert!(agent.stamina < cfg.human.sprint_duration);
        let drained = agent.stamina;
        for tick in 5..15 {
            human_controller_step(&mut agent, &[], &map, &cfg, tick as f64 * 0.1, 0.1);
        }
        assert!(!agent.sprinting);
        assert!(agent.stamina > drained);
    }
}
