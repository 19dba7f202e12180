//! Agent state and fixed-timestep motion integration.

use rand_chacha::ChaCha8Rng;

use crate::arena::map::ArenaMap;
use crate::arena::pathfind::find_path;
use crate::arena::SimConfig;
use crate::behavior_tree::{MotionState, MotionToken};
use crate::blackboard::Blackboard;
use crate::types::{AgentId, Cell, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Zombie,
    Human,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Zombie => "zombie",
            Role::Human => "human",
        }
    }
}

/// How close a pathfinding move must get to its destination point.
pub const ARRIVE_POINT: f64 = 0.35;

#[derive(Debug, Clone, PartialEq)]
pub enum MotionCmd {
    None,
    /// Pathfind to a fixed point.
    ToPoint { dest: Vec2, path: Vec<Cell>, next: usize },
    /// Track a live agent, re-pathing as it moves (or heading straight at it).
    Follow {
        target: AgentId,
        pathfind: bool,
        path: Vec<Cell>,
        next: usize,
        planned_goal: Cell,
    },
    /// Move along a fixed direction, optionally for a bounded distance.
    Straight { direction: f64, remaining: Option<f64> },
}

#[derive(Debug, Clone)]
pub struct MotionSlot {
    pub token: MotionToken,
    pub cmd: MotionCmd,
    pub status: MotionState,
}

impl Default for MotionSlot {
    fn default() -> Self {
        MotionSlot {
            token: 0,
            cmd: MotionCmd::None,
            status: MotionState::Arrived,
        }
    }
}

impl MotionSlot {
    /// Issues a new command, superseding the previous token.
    pub fn issue(&mut self, cmd: MotionCmd) -> MotionToken {
        self.token += 1;
        self.cmd = cmd;
        self.status = MotionState::Moving;
        self.token
    }

    pub fn stop(&mut self) {
        self.token += 1;
        self.cmd = MotionCmd::None;
        self.status = MotionState::Arrived;
    }

    pub fn state_for(&self, token: MotionToken) -> MotionState {
        if token != self.token {
            MotionState::Superseded
        } else {
            self.status
        }
    }
}

#[derive(Debug, Clone)]
pub struct AgentState {
    pub id: AgentId,
    pub role: Role,
    pub pos: Vec2,
    pub heading: f64,
    pub speed_multiplier: f64,
    pub health: f64,
    pub stamina: f64,
    pub sprinting: bool,
    pub alive: bool,
    pub respawn_timer: f64,
    pub blackboard: Blackboard,
    pub motion: MotionSlot,
    pub rng: ChaCha8Rng,
    /// Displacement over the last integration step.
    pub last_displacement: Vec2,
    /// Human controller: time of the next replan.
    pub next_replan: f64,
    /// Zombie bookkeeping: where the tracked target was last seen.
    pub last_seen_target_pos: Option<Vec2>,
}

impl AgentState {
    pub fn current_speed(&self, cfg: &SimConfig) -> f64 {
        match self.role {
            Role::Zombie => cfg.zombie_base_speed * self.speed_multiplier,
            Role::Human => {
                let sprint = if self.sprinting {
                    cfg.human.sprint_multiplier
                } else {
                    1.0
                };
                cfg.human.base_speed * sprint
            }
        }
    }

    pub fn is_moving(&self, cfg: &SimConfig) -> bool {
        self.last_displacement.length() > cfg.idle_epsilon
    }
}

/// Attempts a displacement with axis sliding; the position never enters a
/// blocked cell. Returns the new position and whether the move was fully
/// blocked.
fn slide_move(map: &ArenaMap, pos: Vec2, delta: Vec2) -> (Vec2, bool) {
    let full = pos + delta;
    if map.is_free(full.cell()) {
        return (full, false);
    }
    let x_only = pos + Vec2::new(delta.x, 0.0);
    if delta.x.abs() > 1e-9 && map.is_free(x_only.cell()) {
        return (x_only, false);
    }
    let y_only = pos + Vec2::new(0.0, delta.y);
    if delta.y.abs() > 1e-9 && map.is_free(y_only.cell()) {
        return (y_only, false);
    }
    (pos, true)
}

fn plan_to(map: &ArenaMap, from: Vec2, goal: Cell) -> Option<Vec<Cell>> {
    match find_path(map, from.cell(), goal) {
        Ok(Some(path)) => Some(path.cells),
        _ => None,
    }
}

/// Advances one agent's motion by `dt`, updating position, heading, and
/// motion status. `lookup` resolves live follow-target positions.
pub fn integrate_motion(
    agent: &mut AgentState,
    map: &ArenaMap,
    cfg: &SimConfig,
    dt: f64,
    lookup: &dyn Fn(AgentId) -> Option<Vec2>,
) {
    let start = agent.pos;
    let speed = agent.current_speed(cfg);
    let step = speed * dt;

    match &mut agent.motion.cmd {
        MotionCmd::None => {}
        MotionCmd::Straight { direction, remaining } => {
            let allowed = remaining.map_or(step, |r| r.min(step));
            if allowed > 0.0 {
                let delta = Vec2::from_angle(*direction).scaled(allowed);
                let (new_pos, blocked) = slide_move(map, agent.pos, delta);
                let moved = new_pos.distance(agent.pos);
                agent.pos = new_pos;
                if let Some(r) = remaining {
                    *r -= moved;
                }
                if blocked {
                    agent.motion.status = MotionState::Blocked;
                } else {
                    agent.motion.status = MotionState::Moving;
                }
            }
            if let Some(r) = remaining {
                if *r <= 1e-9 {
                    agent.motion.status = MotionState::Arrived;
                    agent.motion.cmd = MotionCmd::None;
                }
            }
        }
        MotionCmd::ToPoint { dest, path, next } => {
            let dest = *dest;
            let mut budget = step;
            let mut blocked = false;
            while budget > 1e-9 {
                let target = if *next < path.len() {
                    path[*next].center()
                } else {
                    dest
                };
                let to_target = target - agent.pos;
                let dist = to_target.length();
                if dist <= budget {
                    let (new_pos, hit) = slide_move(map, agent.pos, to_target);
                    agent.pos = new_pos;
                    blocked = hit;
                    budget -= dist.max(1e-9);
                    if hit {
                        break;
                    }
                    if *next < path.len() {
                        *next += 1;
                    } else {
                        break;
                    }
                } else {
                    let delta = to_target.scaled(budget / dist);
                    let (new_pos, hit) = slide_move(map, agent.pos, delta);
                    agent.pos = new_pos;
                    blocked = hit;
                    budget = 0.0;
                }
            }
            if agent.pos.distance(dest) <= ARRIVE_POINT {
                agent.motion.status = MotionState::Arrived;
                agent.motion.cmd = MotionCmd::None;
            } else if blocked {
                // Knocked off the lane; re-plan from here.
                match plan_to(map, agent.pos, dest.cell()) {
                    Some(new_path) => {
                        *path = new_path;
                        *next = 0;
                        agent.motion.status = MotionState::Moving;
                    }
                    None => agent.motion.status = MotionState::Blocked,
                }
            } else {
                agent.motion.status = MotionState::Moving;
            }
        }
        MotionCmd::Follow {
            target,
            pathfind,
            path,
            next,
            planned_goal,
        } => {
            let Some(target_pos) = lookup(*target) else {
                agent.motion.status = MotionState::Blocked;
                return;
            };
            if agent.pos.distance(target_pos) <= cfg.attack_range {
                agent.motion.status = MotionState::Arrived;
                agent.motion.cmd = MotionCmd::None;
                agent.last_displacement = agent.pos - start;
                return;
            }
            if !*pathfind {
                let direction = (target_pos - agent.pos).angle();
                let delta = Vec2::from_angle(direction).scaled(step);
                let (new_pos, blocked) = slide_move(map, agent.pos, delta);
                agent.pos = new_pos;
                agent.motion.status = if blocked {
                    MotionState::Blocked
                } else {
                    MotionState::Moving
                };
            } else {
                let goal = target_pos.cell();
                if goal != *planned_goal || (*next >= path.len() && !path.is_empty()) {
                    match plan_to(map, agent.pos, goal) {
                        Some(new_path) => {
                            *path = new_path;
                            *next = 0;
                            *planned_goal = goal;
                        }
                        None => {
                            agent.motion.status = MotionState::Blocked;
                            agent.last_displacement = agent.pos - start;
                            return;
                        }
                    }
                }
                let mut budget = step;
                while budget > 1e-9 && *next < path.len() {
                    let target = path[*next].center();
                    let to_target = target - agent.pos;
                    let dist = to_target.length();
                    if dist <= budget {
                        let (new_pos, hit) = slide_move(map, agent.pos, to_target);
                        agent.pos = new_pos;
                        budget -= dist.max(1e-9);
                        if hit {
                            break;
                        }
                        *next += 1;
                    } else {
                        let delta = to_target.scaled(budget / dist);
                        let (new_pos, _) = slide_move(map, agent.pos, delta);
                        agent.pos = new_pos;
                        budget = 0.0;
                    }
                }
                if agent.pos.distance(target_pos) <= cfg.attack_range {
                    agent.motion.status = MotionState::Arrived;
                    agent.motion.cmd = MotionCmd::None;
                } else {
                    agent.motion.status = MotionState::Moving;
                }
            }
        }
    }

    agent.last_displacement = agent.pos - start;
    if agent.last_displacement.length() > 1e-9 {
        agent.heading = agent.last_displacement.angle();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::default_sim_config;
    use crate::node_library::standard_blackboard;
    use rand::SeedableRng;

    fn agent_at(pos: Vec2) -> AgentState {
        AgentState {
            id: AgentId(0),
            role: Role::Zombie,
            pos,
            heading: 0.0,
            speed_multiplier: 1.0,
            health: 100.0,
            stamina: 0.0,
            sprinting: false,
            alive: true,
            respawn_timer: 0.0,
            blackboard: Blackboard::new(&standard_blackboard()),
            motion: MotionSlot::default(),
            rng: ChaCha8Rng::seed_from_u64(1),
            last_displacement: Vec2::ZERO,
            next_replan: 0.0,
            last_seen_target_pos: None,
        }
    }

    #[test]
    fn straight_move_stops_at_wall() {
        let map = ArenaMap::preset("small").unwrap();
        let cfg = default_sim_config();
        let mut agent = agent_at(Vec2::new(2.5, 1.5));
        agent.motion.issue(MotionCmd::Straight {
            direction: std::f64::consts::PI, // toward the left wall
            remaining: None,
        });
        for _ in 0..100 {
            integrate_motion(&mut agent, &map, &cfg, 0.1, &|_| None);
        }
        assert!(map.is_free(agent.pos.cell()));
        assert_eq!(agent.motion.status, MotionState::Blocked);
        assert!(agent.pos.x >= 1.0);
    }

    #[test]
    fn bounded_straight_move_arrives() {
        let map = ArenaMap::preset("large").unwrap();
        let cfg = default_sim_config();
        let mut agent = agent_at(Vec2::new(18.5, 10.5));
        let token = agent.motion.issue(MotionCmd::Straight {
            direction: 0.0,
            remaining: Some(2.0),
        });
        let mut ticks = 0;
        while agent.motion.state_for(token) == MotionState::Moving && ticks < 100 {
            integrate_motion(&mut agent, &map, &cfg, 0.1, &|_| None);
            ticks += 1;
        }
        assert_eq!(agent.motion.state_for(token), MotionState::Arrived);
        assert!((agent.pos.x - 20.5).abs() < 1e-6);
    }

    #[test]
    fn path_move_rounds_walls() {
        let map = ArenaMap::preset("small").unwrap();
        let cfg = default_sim_config();
        let mut agent = agent_at(Cell::new(1, 4).center());
        let dest = Cell::new(7, 4).center(); // other side of the 4..6 block
        let path = plan_to(&map, agent.pos, dest.cell()).unwrap();
        let token = agent.motion.issue(MotionCmd::ToPoint {
            dest,
            path,
            next: 0,
        });
        let mut ticks = 0;
        while agent.motion.state_for(token) == MotionState::Moving && ticks < 400 {
            integrate_motion(&mut agent, &map, &cfg, 0.1, &|_| None);
            assert!(map.is_free(agent.pos.cell()), "entered a wall at {:?}", agent.pos);
            ticks += 1;
        }
        assert_eq!(agent.motion.state_for(token), MotionState::Arrived);
        assert!(agent.pos.distance(dest) <= ARRIVE_POINT + 1e-9);
    }

    #[test]
    fn superseded_token_reported() {
        let map = ArenaMap::preset("large").unwrap();
        let cfg = default_sim_config();
        let mut agent = agent_at(Vec2::new(18.5, 10.5));
        let first = agent.motion.issue(MotionCmd::Straight {
            direction: 0.0,
            remaining: None,
        });
        let second = agent.motion.issue(MotionCmd::Straight {
            direction: 1.0,
            remaining: None,
        });
        integrate_motion(&mut agent, &map, &cfg, 0.1, &|_| None);
        assert_eq!(agent.motion.state_for(first), MotionState::Superseded);
        assert_eq!(agent.motion.state_for(second), MotionState::Moving);
    }
}
