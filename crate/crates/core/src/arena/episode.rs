//! One shared fixed-timestep episode: every zombie runs its own compiled
//! tree, humans wander under the scripted controller, and the arena emits
//! fitness events. The episode is a pure function of (trees, map, config,
//! seed): repeated runs are byte-identical.
//!
//! Tick order is fixed: perception, zombie tree ticks, human controller,
//! human movement, zombie movement, damage, chase detection and per-tick
//! fitness events, respawns, trace.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::arena::agent::{integrate_motion, AgentState, MotionCmd, MotionSlot, Role};
use crate::arena::chase::{ChaseDetector, ChaseEvent};
use crate::arena::human::human_controller_step;
use crate::arena::map::ArenaMap;
use crate::arena::pathfind::find_path;
use crate::arena::SimConfig;
use crate::behavior_tree::{compile, MotionState, MotionToken, TreeInstance, WorldView};
use crate::blackboard::{Blackboard, KeyType, Value};
use crate::chromosome::Chromosome;
use crate::fitness::{measures, FitnessLedger, FitnessSpec};
use crate::node_library::NodeLibrary;
use crate::primitives::keys;
use crate::rng;
use crate::types::{angle_between, AgentId, Vec2};

#[derive(Debug, Error)]
pub enum EpisodeError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("blackboard schema missing standard key `{0}` (or wrong type)")]
    MissingBlackboardKey(String),
    #[error("fitness spec references unknown measure `{0}`")]
    UnknownFitnessKey(String),
    #[error("map error: {0}")]
    Map(#[from] crate::arena::map::MapError),
}

/// One row of the per-tick episode trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub tick: usize,
    pub agent: AgentId,
    pub role: Role,
    pub x: f64,
    pub y: f64,
    pub health: f64,
    pub event: String,
}

#[derive(Debug, Clone)]
pub struct EpisodeOutcome {
    pub ledger: FitnessLedger,
    pub trace: Vec<TraceRow>,
    /// Damage events attributed per human (event-side accounting).
    pub damage_events_by_human: BTreeMap<AgentId, f64>,
    /// Health decrements observed per human (state-side accounting).
    pub health_lost_by_human: BTreeMap<AgentId, f64>,
    /// Member indices whose trees failed to compile, with the error text.
    pub compile_failures: Vec<(usize, String)>,
}

impl EpisodeOutcome {
    /// Trace as CSV: tick, agent id, role, x, y, health, event.
    pub fn trace_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["tick", "agent_id", "role", "x", "y", "health", "event"])
            .expect("write header");
        for row in &self.trace {
            writer
                .write_record([
                    row.tick.to_string(),
                    row.agent.to_string(),
                    row.role.as_str().to_string(),
                    format!("{:.4}", row.x),
                    format!("{:.4}", row.y),
                    format!("{:.4}", row.health),
                    row.event.clone(),
                ])
                .expect("write row");
        }
        String::from_utf8(writer.into_inner().expect("flush csv")).expect("utf8")
    }
}

/// World view of one zombie during its tree tick.
struct ZombieCtx<'a> {
    agent: &'a mut AgentState,
    humans: &'a [AgentState],
    map: &'a ArenaMap,
    cfg: &'a SimConfig,
    now: f64,
}

impl ZombieCtx<'_> {
    fn human_position(&self, id: AgentId) -> Option<Vec2> {
        self.humans
            .iter()
            .find(|h| h.id == id && h.alive)
            .map(|h| h.pos)
    }
}

impl WorldView for ZombieCtx<'_> {
    fn blackboard(&self) -> &Blackboard {
        &self.agent.blackboard
    }
    fn blackboard_mut(&mut self) -> &mut Blackboard {
        &mut self.agent.blackboard
    }
    fn position(&self) -> Vec2 {
        self.agent.pos
    }
    fn heading(&self) -> f64 {
        self.agent.heading
    }
    fn set_heading(&mut self, heading: f64) {
        self.agent.heading = heading;
    }
    fn is_moving(&self) -> bool {
        self.agent.is_moving(self.cfg)
    }
    fn now(&self) -> f64 {
        self.now
    }
    fn entity_position(&self, id: AgentId) -> Option<Vec2> {
        self.human_position(id)
    }
    fn random_waypoint(&mut self) -> Option<Vec2> {
        if self.map.waypoints.is_empty() {
            return None;
        }
        let i = self.agent.rng.gen_range(0..self.map.waypoints.len());
        Some(self.map.waypoints[i])
    }
    fn random_point_near(&mut self, center: Vec2, radius: f64) -> Option<Vec2> {
        for _ in 0..16 {
            let u: f64 = self.agent.rng.gen();
            let theta: f64 = self.agent.rng.gen::<f64>() * std::f64::consts::TAU;
            let p = center + Vec2::from_angle(theta).scaled(radius * u.sqrt());
            if self.map.is_free(p.cell()) {
                return Some(p);
            }
        }
        None
    }
    fn random_unit(&mut self) -> f64 {
        self.agent.rng.gen()
    }
    fn start_move_to(&mut self, dest: Vec2) -> Option<MotionToken> {
        match find_path(self.map, self.agent.pos.cell(), dest.cell()) {
            Ok(Some(path)) => Some(self.agent.motion.issue(MotionCmd::ToPoint {
                dest,
                path: path.cells,
                next: 0,
            })),
            _ => None,
        }
    }
    fn start_follow(&mut self, target: AgentId, pathfind: bool) -> MotionToken {
        let planned_goal = self
            .human_position(target)
            .map(|p| p.cell())
            .unwrap_or_else(|| self.agent.pos.cell());
        self.agent.motion.issue(MotionCmd::Follow {
            target,
            pathfind,
            path: Vec::new(),
            next: 0,
            planned_goal,
        })
    }
    fn start_straight(&mut self, direction: f64, distance: Option<f64>) -> MotionToken {
        self.agent.motion.issue(MotionCmd::Straight {
            direction,
            remaining: distance,
        })
    }
    fn motion_state(&self, token: MotionToken) -> MotionState {
        self.agent.motion.state_for(token)
    }
    fn stop(&mut self) {
        self.agent.motion.stop();
    }
    fn set_speed_multiplier(&mut self, multiplier: f64) {
        self.agent.speed_multiplier = multiplier;
    }
}

fn check_standard_keys(lib: &NodeLibrary) -> Result<(), EpisodeError> {
    let find = |key: &str| {
        lib.blackboard
            .iter()
            .find(|d| d.key == key)
            .map(|d| d.kind)
    };
    for (key, kind) in [
        (keys::SENSED_PLAYER, KeyType::Entity),
        (keys::TARGET_ENEMY, KeyType::Entity),
        (keys::LAST_KNOWN_ENEMY_LOCATION, KeyType::Position),
        (keys::CURRENT_WAYPOINT, KeyType::Position),
    ] {
        if find(key) != Some(kind) {
            return Err(EpisodeError::MissingBlackboardKey(key.to_string()));
        }
    }
    Ok(())
}

fn spawn_agent(
    id: AgentId,
    role: Role,
    pos: Vec2,
    heading: f64,
    lib: &NodeLibrary,
    cfg: &SimConfig,
    seed: u64,
) -> AgentState {
    AgentState {
        id,
        role,
        pos,
        heading,
        speed_multiplier: 1.0,
        health: 100.0,
        stamina: cfg.human.sprint_duration,
        sprinting: false,
        alive: true,
        respawn_timer: 0.0,
        blackboard: Blackboard::new(&lib.blackboard),
        motion: MotionSlot::default(),
        rng: rng::stream(seed, "agent", id.0 as u64),
        last_displacement: Vec2::ZERO,
        next_replan: 0.0,
        last_seen_target_pos: None,
    }
}

/// Runs one shared episode: one tree per zombie, `human_count` scripted
/// humans, for the configured episode length. Trees that fail to compile
/// leave their zombie inert and are reported in `compile_failures`.
#[allow(clippy::too_many_arguments)]
pub fn run_episode(
    trees: &[Chromosome],
    map: &ArenaMap,
    cfg: &SimConfig,
    lib: &NodeLibrary,
    spec: &FitnessSpec,
    human_count: usize,
    seed: u64,
    record_trace: bool,
) -> Result<EpisodeOutcome, EpisodeError> {
    cfg.validate().map_err(EpisodeError::InvalidConfig)?;
    map.validate()?;
    check_standard_keys(lib)?;
    for key in spec.keys() {
        if !measures::ALL.contains(&key) {
            return Err(EpisodeError::UnknownFitnessKey(key.to_string()));
        }
    }

    let zombie_count = trees.len();
    let mut compile_failures = Vec::new();
    let mut instances: Vec<Option<TreeInstance>> = Vec::with_capacity(zombie_count);
    for (i, tree) in trees.iter().enumerate() {
        match compile(tree, lib) {
            Ok(instance) => instances.push(Some(instance)),
            Err(err) => {
                compile_failures.push((i, err.to_string()));
                instances.push(None);
            }
        }
    }

    let mut spawn_rng = rng::stream(seed, "spawn", 0);
    let mut zombie_cells = map.zombie_spawns.clone();
    shuffle(&mut zombie_cells, &mut spawn_rng);
    let mut human_cells = map.human_spawns.clone();
    shuffle(&mut human_cells, &mut spawn_rng);

    let mut zombies: Vec<AgentState> = (0..zombie_count)
        .map(|i| {
            let pos = zombie_cells[i % zombie_cells.len()].center();
            let heading = spawn_rng.gen::<f64>() * std::f64::consts::TAU;
            spawn_agent(AgentId(i as u32), Role::Zombie, pos, heading, lib, cfg, seed)
        })
        .collect();
    let mut humans: Vec<AgentState> = (0..human_count)
        .map(|i| {
            let pos = human_cells[i % human_cells.len()].center();
            let heading = spawn_rng.gen::<f64>() * std::f64::consts::TAU;
            spawn_agent(
                AgentId((zombie_count + i) as u32),
                Role::Human,
                pos,
                heading,
                lib,
                cfg,
                seed,
            )
        })
        .collect();

    let mut ledger = FitnessLedger::new(measures::ALL);
    for z in &zombies {
        for key in measures::ALL {
            ledger.record_event(z.id, key, 0.0).expect("declared");
        }
    }
    let mut detectors: Vec<ChaseDetector> = vec![ChaseDetector::default(); zombie_count];
    let mut damage_events_by_human: BTreeMap<AgentId, f64> = BTreeMap::new();
    let mut health_lost_by_human: BTreeMap<AgentId, f64> = BTreeMap::new();
    let mut trace: Vec<TraceRow> = Vec::new();
    let fov_half = (cfg.fov_degrees / 2.0).to_radians();
    let dt = cfg.dt;

    for tick in 0..cfg.ticks() {
        let now = tick as f64 * dt;
        let mut events: BTreeMap<AgentId, Vec<String>> = BTreeMap::new();

        // Perception: nearest live human inside radius and field of view.
        for z in zombies.iter_mut() {
            let mut nearest: Option<(f64, &AgentState)> = None;
            for h in humans.iter().filter(|h| h.alive) {
                let d = z.pos.distance(h.pos);
                if d > cfg.perception_radius {
                    continue;
                }
                if angle_between(z.heading, (h.pos - z.pos).angle()) > fov_half {
                    continue;
                }
                if nearest.as_ref().map_or(true, |(best, _)| d < *best) {
                    nearest = Some((d, h));
                }
            }
            match nearest {
                Some((_, h)) => {
                    z.blackboard
                        .set(keys::SENSED_PLAYER, Value::Entity(h.id))
                        .expect("schema checked");
                    z.blackboard
                        .set(keys::TARGET_ENEMY, Value::Entity(h.id))
                        .expect("schema checked");
                    z.last_seen_target_pos = Some(h.pos);
                }
                None => {
                    if z.blackboard.is_set(keys::TARGET_ENEMY) {
                        if let Some(last) = z.last_seen_target_pos {
                            z.blackboard
                                .set(keys::LAST_KNOWN_ENEMY_LOCATION, Value::Position(last))
                                .expect("schema checked");
                        }
                        z.blackboard.clear(keys::TARGET_ENEMY).expect("schema checked");
                    }
                    z.blackboard.clear(keys::SENSED_PLAYER).expect("schema checked");
                }
            }
        }

        // Zombie decisions.
        for (i, z) in zombies.iter_mut().enumerate() {
            if let Some(instance) = instances[i].as_mut() {
                let mut ctx = ZombieCtx {
                    agent: z,
                    humans: &humans,
                    map,
                    cfg,
                    now,
                };
                instance.tick(&mut ctx, dt);
            }
        }

        // Human decisions.
        let zombie_positions: Vec<Vec2> = zombies.iter().map(|z| z.pos).collect();
        for h in humans.iter_mut() {
            if h.alive {
                human_controller_step(h, &zombie_positions, map, cfg, now, dt);
            }
        }

        // Movement: humans first, zombies track their latest positions.
        for h in humans.iter_mut() {
            if h.alive {
                integrate_motion(h, map, cfg, dt, &|_| None);
            } else {
                h.last_displacement = Vec2::ZERO;
            }
        }
        for z in zombies.iter_mut() {
            let humans_ref = &humans;
            let zc = zombie_count;
            integrate_motion(z, map, cfg, dt, &move |id: AgentId| {
                let idx = id.0 as usize;
                if idx >= zc {
                    humans_ref
                        .get(idx - zc)
                        .filter(|h| h.alive)
                        .map(|h| h.pos)
                } else {
                    None
                }
            });
        }

        // Damage: each zombie bites the nearest live human in reach.
        for z in zombies.iter() {
            let mut victim: Option<(f64, usize)> = None;
            for (hi, h) in humans.iter().enumerate() {
                if !h.alive {
                    continue;
                }
                let d = z.pos.distance(h.pos);
                if d <= cfg.attack_range && victim.as_ref().map_or(true, |(best, _)| d < *best) {
                    victim = Some((d, hi));
                }
            }
            if let Some((_, hi)) = victim {
                let h = &mut humans[hi];
                let before = h.health;
                let dmg = (cfg.damage_per_second * dt).min(h.health);
                if dmg > 0.0 {
                    h.health -= dmg;
                    ledger
                        .record_event(z.id, measures::DAMAGE_DEALT, dmg)
                        .expect("declared");
                    *damage_events_by_human.entry(h.id).or_insert(0.0) += dmg;
                    *health_lost_by_human.entry(h.id).or_insert(0.0) += before - h.health;
                    events.entry(z.id).or_default().push("damage".into());
                }
                if h.health <= 0.0 {
                    h.alive = false;
                    h.respawn_timer = cfg.respawn_seconds;
                    h.motion.stop();
                    events.entry(h.id).or_default().push("died".into());
                }
            }
        }

        // Chase detection and per-tick fitness events.
        let live_humans: Vec<Vec2> = humans.iter().filter(|h| h.alive).map(|h| h.pos).collect();
        for (i, z) in zombies.iter().enumerate() {
            let velocity = z.last_displacement.scaled(1.0 / dt);
            match detectors[i].step(z.pos, velocity, &live_humans, &cfg.chase) {
                Some(ChaseEvent::Started) => {
                    events.entry(z.id).or_default().push("chase_started".into());
                    if detectors[i].chase_count > cfg.chase.restart_allowance {
                        ledger
                            .record_event(z.id, measures::EXCESS_CHASE_RESTARTS, 1.0)
                            .expect("declared");
                    }
                }
                Some(ChaseEvent::Broken) => {
                    events.entry(z.id).or_default().push("chase_broken".into());
                }
                None => {}
            }
            if detectors[i].is_active() {
                ledger
                    .record_event(z.id, measures::CHASE_TICKS, 1.0)
                    .expect("declared");
            }
            let moved = z.last_displacement.length();
            if moved > cfg.idle_epsilon {
                ledger
                    .record_event(z.id, measures::DISTANCE_PATROLLED, moved)
                    .expect("declared");
            } else {
                ledger
                    .record_event(z.id, measures::IDLE_TICKS, 1.0)
                    .expect("declared");
            }
            if !z.blackboard.is_set(keys::TARGET_ENEMY) {
                if let Some(last) = z.blackboard.get_position(keys::LAST_KNOWN_ENEMY_LOCATION) {
                    if z.pos.distance(last) <= cfg.near_last_known_radius {
                        ledger
                            .record_event(z.id, measures::NEAR_LAST_KNOWN_TICKS, 1.0)
                            .expect("declared");
                    }
                }
            }
        }

        // Respawns.
        for h in humans.iter_mut() {
            if !h.alive {
                h.respawn_timer -= dt;
                if h.respawn_timer <= 0.0 {
                    let cell = human_cells[spawn_rng.gen_range(0..human_cells.len())];
                    h.pos = cell.center();
                    h.heading = spawn_rng.gen::<f64>() * std::f64::consts::TAU;
                    h.health = 100.0;
                    h.stamina = cfg.human.sprint_duration;
                    h.alive = true;
                    h.motion.stop();
                    h.next_replan = now;
                    events.entry(h.id).or_default().push("respawned".into());
                }
            }
        }

        if record_trace {
            for a in zombies.iter().chain(humans.iter()) {
                trace.push(TraceRow {
                    tick,
                    agent: a.id,
                    role: a.role,
                    x: a.pos.x,
                    y: a.pos.y,
                    health: a.health,
                    event: events
                        .get(&a.id)
                        .map(|e| e.join(";"))
                        .unwrap_or_default(),
                });
            }
        }
    }

    Ok(EpisodeOutcome {
        ledger,
        trace,
        damage_events_by_human,
        health_lost_by_human,
        compile_failures,
    })
}

fn shuffle<T>(items: &mut [T], rng: &mut impl Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}
