//! Executable behavior-tree engine.
//!
//! [`compile`] turns a validated chromosome into a [`TreeInstance`] with all
//! primitive bindings resolved and property values copied bit-exactly. The
//! instance is then polled with a fixed timestep: selectors return the first
//! non-failing child, sequences fail fast, and a `Running` result is resumed
//! on the next tick without re-running completed earlier siblings. Attached
//! decorators are re-evaluated on every tick of their node; a decorator
//! failing while its node is running aborts that subtree.
//!
//! The engine talks to its agent through [`WorldView`]: perception, target
//! selection, and damage stay outside the tree, which only decides actions.

use thiserror::Error;

use crate::blackboard::{Blackboard, Value};
use crate::chromosome::{Chromosome, ChromosomeNode, CompositeKind, GenomeError, NodePayload, PropertyValue};
use crate::node_library::{NodeKind, NodeLibrary};
use crate::primitives::{keys, DecoratorPrimitive, TaskPrimitive};
use crate::types::{angle_between, AgentId, Vec2};

/// Tri-state result of ticking a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Success,
    Failure,
    Running,
}

/// Handle for a movement command issued to the world. A newer command
/// supersedes an older token.
pub type MotionToken = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionState {
    Moving,
    Arrived,
    Blocked,
    Superseded,
}

/// Agent-context view the tree executes against.
pub trait WorldView {
    fn blackboard(&self) -> &Blackboard;
    fn blackboard_mut(&mut self) -> &mut Blackboard;
    fn position(&self) -> Vec2;
    fn heading(&self) -> f64;
    fn set_heading(&mut self, heading: f64);
    fn is_moving(&self) -> bool;
    /// Episode clock in seconds.
    fn now(&self) -> f64;
    /// Current position of a live agent.
    fn entity_position(&self, id: AgentId) -> Option<Vec2>;
    /// Uniform random waypoint of the map.
    fn random_waypoint(&mut self) -> Option<Vec2>;
    /// Uniform random unblocked point within `radius` of `center`.
    fn random_point_near(&mut self, center: Vec2, radius: f64) -> Option<Vec2>;
    fn random_unit(&mut self) -> f64;
    /// Pathfinding move to a destination; `None` when unreachable.
    fn start_move_to(&mut self, dest: Vec2) -> Option<MotionToken>;
    /// Follow a live agent, with or without pathfinding.
    fn start_follow(&mut self, target: AgentId, pathfind: bool) -> MotionToken;
    /// Straight-line move along `direction`, optionally bounded by distance.
    fn start_straight(&mut self, direction: f64, distance: Option<f64>) -> MotionToken;
    fn motion_state(&self, token: MotionToken) -> MotionState;
    fn stop(&mut self);
    fn set_speed_multiplier(&mut self, multiplier: f64);
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("unknown node id `{0}`")]
    UnknownNodeId(String),
    #[error("arity violation: {0}")]
    ArityViolation(String),
    #[error("property `{property}` of `{id}` out of range")]
    PropertyOutOfRange { id: String, property: String },
    #[error("invalid binding for `{id}`: {reason}")]
    InvalidBinding { id: String, reason: String },
}

impl From<GenomeError> for CompileError {
    fn from(err: GenomeError) -> Self {
        match err {
            GenomeError::UnknownNodeId(id) => CompileError::UnknownNodeId(id),
            GenomeError::PropertyOutOfRange { id, property } => {
                CompileError::PropertyOutOfRange { id, property }
            }
            other => CompileError::ArityViolation(other.to_string()),
        }
    }
}

type FollowState = Option<(MotionToken, AgentId)>;

#[derive(Debug, Clone)]
enum TaskExec {
    FindBotWaypoint,
    FindPatrolLocation { radius: f64 },
    MoveToCurrentWaypoint(Option<MotionToken>),
    MoveToSensedPlayer(FollowState),
    MoveTowardTargetEnemy(FollowState),
    MoveToLastKnownEnemyLocation(Option<MotionToken>),
    FindLocationNearLastKnownEnemy { radius: f64 },
    ForgetLastKnownEnemy,
    StopMoving,
    FaceTarget,
    PickRandomHeading,
    StepForward { distance: f64, motion: Option<MotionToken> },
    Idle,
    Wait { duration: f64, elapsed: f64 },
    RotateBy { angle: f64 },
    MoveDistance { distance: f64, motion: Option<MotionToken> },
    SetSpeed { multiplier: f64 },
    RememberPointOffset { dx: f64, dy: f64 },
    AlwaysSucceed,
    AlwaysFail,
}

#[derive(Debug, Clone)]
enum DecoratorExec {
    HasSensedEnemy,
    HasNoTargetEnemy,
    HasWaypoint,
    HasLastKnownLocation,
    IsTargetClose { distance: f64 },
    IsTargetFar { distance: f64 },
    IsMoving,
    IsWaypointInConeToEnemy { half_angle: f64 },
    DistanceLt { threshold: f64 },
    Cooldown { seconds: f64, ready_at: f64 },
    ChanceGate { p: f64, invert: bool },
    BlackboardKeySet { key: String },
}

impl DecoratorExec {
    fn evaluate(&mut self, world: &mut dyn WorldView) -> bool {
        let bb = world.blackboard();
        match self {
            DecoratorExec::HasSensedEnemy => bb.is_set(keys::SENSED_PLAYER),
            DecoratorExec::HasNoTargetEnemy => !bb.is_set(keys::TARGET_ENEMY),
            DecoratorExec::HasWaypoint => bb.is_set(keys::CURRENT_WAYPOINT),
            DecoratorExec::HasLastKnownLocation => bb.is_set(keys::LAST_KNOWN_ENEMY_LOCATION),
            DecoratorExec::IsTargetClose { distance } => {
                matches!(target_position(world), Some(p) if world.position().distance(p) <= *distance)
            }
            DecoratorExec::IsTargetFar { distance } => {
                matches!(target_position(world), Some(p) if world.position().distance(p) >= *distance)
            }
            DecoratorExec::IsMoving => world.is_moving(),
            DecoratorExec::IsWaypointInConeToEnemy { half_angle } => {
                let wp = bb.get_position(keys::CURRENT_WAYPOINT);
                let enemy = target_position(world).or_else(|| {
                    world.blackboard().get_position(keys::LAST_KNOWN_ENEMY_LOCATION)
                });
                match (wp, enemy) {
                    (Some(wp), Some(enemy)) => {
                        let here = world.position();
                        let to_wp = (wp - here).angle();
                        let to_enemy = (enemy - here).angle();
                        angle_between(to_wp, to_enemy) <= *half_angle
                    }
                    _ => false,
                }
            }
            DecoratorExec::DistanceLt { threshold } => {
                let enemy = target_position(world).or_else(|| sensed_position(world));
                matches!(enemy, Some(p) if world.position().distance(p) < *threshold)
            }
            DecoratorExec::Cooldown { ready_at, .. } => world.now() >= *ready_at,
            DecoratorExec::ChanceGate { p, invert } => (world.random_unit() < *p) != *invert,
            DecoratorExec::BlackboardKeySet { key } => bb.is_set(key),
        }
    }

    fn on_node_completed(&mut self, now: f64) {
        if let DecoratorExec::Cooldown { seconds, ready_at } = self {
            *ready_at = now + *seconds;
        }
    }
}

fn target_position(world: &dyn WorldView) -> Option<Vec2> {
    let id = world.blackboard().get_entity(keys::TARGET_ENEMY)?;
    world.entity_position(id)
}

fn sensed_position(world: &dyn WorldView) -> Option<Vec2> {
    let id = world.blackboard().get_entity(keys::SENSED_PLAYER)?;
    world.entity_position(id)
}

#[derive(Debug, Clone)]
enum NodeBody {
    Selector(Vec<CompiledNode>),
    Sequence(Vec<CompiledNode>),
    Task(TaskExec),
}

#[derive(Debug, Clone)]
struct CompiledNode {
    body: NodeBody,
    decorators: Vec<DecoratorExec>,
}

/// A compiled behavior tree bound to one agent. Ticking mutates internal
/// running state, so an instance must not be shared across concurrent ticks;
/// distinct instances are independent.
#[derive(Debug, Clone)]
pub struct TreeInstance {
    root: CompiledNode,
    running: Option<Vec<usize>>,
    node_count: usize,
}

impl TreeInstance {
    /// Nodes in the compiled graph, attached decorators included.
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Child-index path of the currently running node, if any.
    pub fn running_path(&self) -> Option<&[usize]> {
        self.running.as_deref()
    }

    /// Drops all running state and task progress.
    pub fn reset(&mut self) {
        self.running = None;
        reset_subtree(&mut self.root);
    }

    pub fn tick(&mut self, world: &mut dyn WorldView, dt: f64) -> NodeStatus {
        debug_assert!(dt > 0.0);
        let resume = self.running.take();
        let mut path = Vec::new();
        let status = tick_node(
            &mut self.root,
            world,
            dt,
            resume.as_deref(),
            &mut path,
        );
        if status == NodeStatus::Running {
            self.running = Some(path);
        }
        status
    }
}

/// Compiles a genome against a library. The genome must validate; topology
/// and property values carry over exactly.
pub fn compile(genome: &Chromosome, lib: &NodeLibrary) -> Result<TreeInstance, CompileError> {
    genome.validate(lib)?;
    let root = compile_node(&genome.root, lib)?;
    Ok(TreeInstance {
        root,
        running: None,
        node_count: genome.size(),
    })
}

fn compile_node(node: &ChromosomeNode, lib: &NodeLibrary) -> Result<CompiledNode, CompileError> {
    let decorators = node
        .decorators
        .iter()
        .map(|d| compile_decorator(d, lib))
        .collect::<Result<Vec<_>, _>>()?;
    let body = match &node.payload {
        NodePayload::Composite(kind) => {
            let children = node
                .children
                .iter()
                .map(|c| compile_node(c, lib))
                .collect::<Result<Vec<_>, _>>()?;
            match kind {
                CompositeKind::Selector => NodeBody::Selector(children),
                CompositeKind::Sequence => NodeBody::Sequence(children),
            }
        }
        _ => NodeBody::Task(compile_task(node, lib)?),
    };
    Ok(CompiledNode { body, decorators })
}

struct Binding<'a> {
    id: &'a str,
    primitive: &'a str,
    values: &'a std::collections::BTreeMap<String, PropertyValue>,
}

fn binding_of<'a>(
    node: &'a ChromosomeNode,
    lib: &'a NodeLibrary,
    kind: NodeKind,
) -> Result<Binding<'a>, CompileError> {
    match &node.payload {
        NodePayload::Mapped { id } => {
            let def = lib
                .mapped(id)
                .ok_or_else(|| CompileError::UnknownNodeId(id.clone()))?;
            if def.kind != kind {
                return Err(CompileError::ArityViolation(format!(
                    "`{id}` is not a {kind:?}"
                )));
            }
            Ok(Binding {
                id,
                primitive: &def.primitive,
                values: &def.params,
            })
        }
        NodePayload::Generated { template, properties } => {
            let tpl = lib
                .template(template)
                .ok_or_else(|| CompileError::UnknownNodeId(template.clone()))?;
            if tpl.kind != kind {
                return Err(CompileError::ArityViolation(format!(
                    "`{template}` is not a {kind:?}"
                )));
            }
            Ok(Binding {
                id: template,
                primitive: &tpl.primitive,
                values: properties,
            })
        }
        NodePayload::Composite(_) => Err(CompileError::ArityViolation(
            "composite where a leaf payload was expected".into(),
        )),
    }
}

fn real_param(b: &Binding<'_>, name: &str) -> Result<f64, CompileError> {
    match b.values.get(name) {
        Some(PropertyValue::Real(v)) => Ok(*v),
        Some(PropertyValue::Integer(v)) => Ok(*v as f64),
        _ => Err(CompileError::InvalidBinding {
            id: b.id.to_string(),
            reason: format!("missing real parameter `{name}`"),
        }),
    }
}

fn bool_param(b: &Binding<'_>, name: &str) -> Result<bool, CompileError> {
    match b.values.get(name) {
        Some(PropertyValue::Boolean(v)) => Ok(*v),
        _ => Err(CompileError::InvalidBinding {
            id: b.id.to_string(),
            reason: format!("missing boolean parameter `{name}`"),
        }),
    }
}

fn key_param(b: &Binding<'_>, name: &str) -> Result<String, CompileError> {
    match b.values.get(name) {
        Some(PropertyValue::Key(v)) => Ok(v.clone()),
        _ => Err(CompileError::InvalidBinding {
            id: b.id.to_string(),
            reason: format!("missing blackboard-key parameter `{name}`"),
        }),
    }
}

fn compile_task(node: &ChromosomeNode, lib: &NodeLibrary) -> Result<TaskExec, CompileError> {
    let b = binding_of(node, lib, NodeKind::Task)?;
    let primitive = TaskPrimitive::parse(b.primitive).ok_or_else(|| CompileError::InvalidBinding {
        id: b.id.to_string(),
        reason: format!("unknown task primitive `{}`", b.primitive),
    })?;
    Ok(match primitive {
        TaskPrimitive::FindBotWaypoint => TaskExec::FindBotWaypoint,
        TaskPrimitive::FindPatrolLocation => TaskExec::FindPatrolLocation {
            radius: real_param(&b, "radius")?,
        },
        TaskPrimitive::MoveToCurrentWaypoint => TaskExec::MoveToCurrentWaypoint(None),
        TaskPrimitive::MoveToSensedPlayer => TaskExec::MoveToSensedPlayer(None),
        TaskPrimitive::MoveTowardTargetEnemy => TaskExec::MoveTowardTargetEnemy(None),
        TaskPrimitive::MoveToLastKnownEnemyLocation => TaskExec::MoveToLastKnownEnemyLocation(None),
        TaskPrimitive::FindLocationNearLastKnownEnemy => TaskExec::FindLocationNearLastKnownEnemy {
            radius: real_param(&b, "radius")?,
        },
        TaskPrimitive::ForgetLastKnownEnemy => TaskExec::ForgetLastKnownEnemy,
        TaskPrimitive::StopMoving => TaskExec::StopMoving,
        TaskPrimitive::FaceTarget => TaskExec::FaceTarget,
        TaskPrimitive::PickRandomHeading => TaskExec::PickRandomHeading,
        TaskPrimitive::StepForward => TaskExec::StepForward {
            distance: real_param(&b, "distance")?,
            motion: None,
        },
        TaskPrimitive::Idle => TaskExec::Idle,
        TaskPrimitive::Wait => TaskExec::Wait {
            duration: real_param(&b, "duration")?,
            elapsed: 0.0,
        },
        TaskPrimitive::RotateBy => TaskExec::RotateBy {
            angle: real_param(&b, "angle")?,
        },
        TaskPrimitive::MoveDistance => TaskExec::MoveDistance {
            distance: real_param(&b, "distance")?,
            motion: None,
        },
        TaskPrimitive::SetSpeed => TaskExec::SetSpeed {
            multiplier: real_param(&b, "multiplier")?,
        },
        TaskPrimitive::RememberPointOffset => TaskExec::RememberPointOffset {
            dx: real_param(&b, "dx")?,
            dy: real_param(&b, "dy")?,
        },
        TaskPrimitive::AlwaysSucceed => TaskExec::AlwaysSucceed,
        TaskPrimitive::AlwaysFail => TaskExec::AlwaysFail,
    })
}

fn compile_decorator(node: &ChromosomeNode, lib: &NodeLibrary) -> Result<DecoratorExec, CompileError> {
    let b = binding_of(node, lib, NodeKind::Decorator)?;
    let primitive =
        DecoratorPrimitive::parse(b.primitive).ok_or_else(|| CompileError::InvalidBinding {
            id: b.id.to_string(),
            reason: format!("unknown decorator primitive `{}`", b.primitive),
        })?;
    Ok(match primitive {
        DecoratorPrimitive::HasSensedEnemy => DecoratorExec::HasSensedEnemy,
        DecoratorPrimitive::HasNoTargetEnemy => DecoratorExec::HasNoTargetEnemy,
        DecoratorPrimitive::HasWaypoint => DecoratorExec::HasWaypoint,
        DecoratorPrimitive::HasLastKnownLocation => DecoratorExec::HasLastKnownLocation,
        DecoratorPrimitive::IsTargetClose => DecoratorExec::IsTargetClose {
            distance: real_param(&b, "distance")?,
        },
        DecoratorPrimitive::IsTargetFar => DecoratorExec::IsTargetFar {
            distance: real_param(&b, "distance")?,
        },
        DecoratorPrimitive::IsMoving => DecoratorExec::IsMoving,
        DecoratorPrimitive::IsWaypointInConeToEnemy => DecoratorExec::IsWaypointInConeToEnemy {
            half_angle: real_param(&b, "half_angle_degrees")?.to_radians(),
        },
        DecoratorPrimitive::DistanceLt => DecoratorExec::DistanceLt {
            threshold: real_param(&b, "threshold")?,
        },
        DecoratorPrimitive::Cooldown => DecoratorExec::Cooldown {
            seconds: real_param(&b, "seconds")?,
            ready_at: 0.0,
        },
        DecoratorPrimitive::ChanceGate => DecoratorExec::ChanceGate {
            p: real_param(&b, "p")?,
            invert: bool_param(&b, "invert")?,
        },
        DecoratorPrimitive::BlackboardKeySet => DecoratorExec::BlackboardKeySet {
            key: key_param(&b, "key")?,
        },
    })
}

// --- tick -------------------------------------------------------------------

fn split_resume(resume: Option<&[usize]>) -> (usize, Option<&[usize]>) {
    match resume {
        Some([first, rest @ ..]) => (*first, Some(rest)),
        _ => (0, None),
    }
}

fn reset_subtree(node: &mut CompiledNode) {
    match &mut node.body {
        NodeBody::Task(task) => reset_task(task),
        NodeBody::Selector(children) | NodeBody::Sequence(children) => {
            for child in children {
                reset_subtree(child);
            }
        }
    }
}

fn reset_task(task: &mut TaskExec) {
    match task {
        TaskExec::Wait { elapsed, .. } => *elapsed = 0.0,
        TaskExec::MoveToCurrentWaypoint(state)
        | TaskExec::MoveToLastKnownEnemyLocation(state) => *state = None,
        TaskExec::MoveToSensedPlayer(state) | TaskExec::MoveTowardTargetEnemy(state) => {
            *state = None
        }
        TaskExec::StepForward { motion, .. } | TaskExec::MoveDistance { motion, .. } => {
            *motion = None
        }
        _ => {}
    }
}

fn tick_node(
    node: &mut CompiledNode,
    world: &mut dyn WorldView,
    dt: f64,
    resume: Option<&[usize]>,
    path: &mut Vec<usize>,
) -> NodeStatus {
    for deco in &mut node.decorators {
        if !deco.evaluate(world) {
            if resume.is_some() {
                // Aborts a running subtree: drop its task progress.
                reset_subtree(node);
            }
            return NodeStatus::Failure;
        }
    }

    let status = match &mut node.body {
        NodeBody::Task(task) => tick_task(task, world, dt),
        // Empty composites fail: a node with nothing to run has not acted,
        // and this keeps freshly inserted composites from preempting their
        // selector siblings during evolution.
        NodeBody::Selector(children) | NodeBody::Sequence(children) if children.is_empty() => {
            NodeStatus::Failure
        }
        NodeBody::Selector(children) => {
            let (start, sub) = split_resume(resume);
            let mut status = NodeStatus::Failure;
            for i in start..children.len() {
                let child_resume = if i == start { sub } else { None };
                path.push(i);
                match tick_node(&mut children[i], world, dt, child_resume, path) {
                    NodeStatus::Failure => {
                        path.pop();
                    }
                    other => {
                        status = other;
                        if other == NodeStatus::Success {
                            path.pop();
                        }
                        break;
                    }
                }
            }
            status
        }
        NodeBody::Sequence(children) => {
            let (start, sub) = split_resume(resume);
            let mut status = NodeStatus::Success;
            for i in start..children.len() {
                let child_resume = if i == start { sub } else { None };
                path.push(i);
                match tick_node(&mut children[i], world, dt, child_resume, path) {
                    NodeStatus::Success => {
                        path.pop();
                    }
                    other => {
                        status = other;
                        if other == NodeStatus::Failure {
                            path.pop();
                        }
                        break;
                    }
                }
            }
            status
        }
    };

    if status != NodeStatus::Running {
        if let NodeBody::Task(task) = &mut node.body {
            reset_task(task);
        }
        let now = world.now();
        for deco in &mut node.decorators {
            deco.on_node_completed(now);
        }
    }
    status
}

fn tick_task(task: &mut TaskExec, world: &mut dyn WorldView, dt: f64) -> NodeStatus {
    use NodeStatus::*;
    match task {
        TaskExec::Idle | TaskExec::AlwaysSucceed => Success,
        TaskExec::AlwaysFail => Failure,
        TaskExec::FindBotWaypoint => match world.random_waypoint() {
            Some(p) => write_position(world, keys::CURRENT_WAYPOINT, p),
            None => Failure,
        },
        TaskExec::FindPatrolLocation { radius } => {
            let radius = *radius;
            match world.blackboard().get_position(keys::CURRENT_WAYPOINT) {
                Some(wp) => match world.random_point_near(wp, radius) {
                    Some(p) => write_position(world, keys::CURRENT_WAYPOINT, p),
                    None => Failure,
                },
                None => Failure,
            }
        }
        TaskExec::FindLocationNearLastKnownEnemy { radius } => {
            let radius = *radius;
            match world.blackboard().get_position(keys::LAST_KNOWN_ENEMY_LOCATION) {
                Some(center) => match world.random_point_near(center, radius) {
                    Some(p) => write_position(world, keys::CURRENT_WAYPOINT, p),
                    None => Failure,
                },
                None => Failure,
            }
        }
        TaskExec::ForgetLastKnownEnemy => {
            match world.blackboard_mut().clear(keys::LAST_KNOWN_ENEMY_LOCATION) {
                Ok(()) => Success,
                Err(_) => Failure,
            }
        }
        TaskExec::StopMoving => {
            world.stop();
            Success
        }
        TaskExec::FaceTarget => match target_position(world) {
            Some(p) => {
                let dir = (p - world.position()).angle();
                world.set_heading(dir);
                Success
            }
            None => Failure,
        },
        TaskExec::PickRandomHeading => {
            let theta = world.random_unit() * std::f64::consts::TAU;
            world.set_heading(theta);
            Success
        }
        TaskExec::RotateBy { angle } => {
            let h = world.heading() + *angle;
            world.set_heading(h);
            Success
        }
        TaskExec::SetSpeed { multiplier } => {
            world.set_speed_multiplier(*multiplier);
            Success
        }
        TaskExec::RememberPointOffset { dx, dy } => {
            let p = world.position() + Vec2::new(*dx, *dy);
            write_position(world, keys::CURRENT_WAYPOINT, p)
        }
        TaskExec::Wait { duration, elapsed } => {
            if *elapsed + 1e-9 >= *duration {
                Success
            } else {
                *elapsed += dt;
                Running
            }
        }
        TaskExec::MoveToCurrentWaypoint(state) => {
            tick_point_move(state, world, keys::CURRENT_WAYPOINT)
        }
        TaskExec::MoveToLastKnownEnemyLocation(state) => {
            tick_point_move(state, world, keys::LAST_KNOWN_ENEMY_LOCATION)
        }
        TaskExec::MoveToSensedPlayer(state) => {
            tick_follow(state, world, keys::SENSED_PLAYER, true)
        }
        TaskExec::MoveTowardTargetEnemy(state) => {
            tick_follow(state, world, keys::TARGET_ENEMY, false)
        }
        TaskExec::StepForward { distance, motion } | TaskExec::MoveDistance { distance, motion } => {
            match motion {
                None => {
                    let dir = world.heading();
                    *motion = Some(world.start_straight(dir, Some(*distance)));
                    Running
                }
                Some(token) => match world.motion_state(*token) {
                    MotionState::Arrived => Success,
                    MotionState::Moving => Running,
                    MotionState::Blocked | MotionState::Superseded => Failure,
                },
            }
        }
    }
}

fn write_position(world: &mut dyn WorldView, key: &str, p: Vec2) -> NodeStatus {
    match world.blackboard_mut().set(key, Value::Position(p)) {
        Ok(()) => NodeStatus::Success,
        Err(_) => NodeStatus::Failure,
    }
}

fn tick_point_move(
    state: &mut Option<MotionToken>,
    world: &mut dyn WorldView,
    key: &str,
) -> NodeStatus {
    match state {
        None => {
            let dest = match world.blackboard().get_position(key) {
                Some(p) => p,
                None => return NodeStatus::Failure,
            };
            match world.start_move_to(dest) {
                Some(token) => {
                    *state = Some(token);
                    NodeStatus::Running
                }
                None => NodeStatus::Failure,
            }
        }
        Some(token) => match world.motion_state(*token) {
            MotionState::Arrived => NodeStatus::Success,
            MotionState::Moving => NodeStatus::Running,
            MotionState::Blocked | MotionState::Superseded => NodeStatus::Failure,
        },
    }
}

fn tick_follow(
    state: &mut FollowState,
    world: &mut dyn WorldView,
    key: &str,
    pathfind: bool,
) -> NodeStatus {
    let current = world.blackboard().get_entity(key);
    match state {
        None => match current {
            Some(target) => {
                let token = world.start_follow(target, pathfind);
                *state = Some((token, target));
                NodeStatus::Running
            }
            None => NodeStatus::Failure,
        },
        Some((token, target)) => {
            match current {
                None => NodeStatus::Failure,
                Some(new_target) if new_target != *target => {
                    let token = world.start_follow(new_target, pathfind);
                    *state = Some((token, new_target));
                    NodeStatus::Running
                }
                Some(_) => match world.motion_state(*token) {
                    MotionState::Arrived => NodeStatus::Success,
                    MotionState::Moving => NodeStatus::Running,
                    // A straight follow keeps shoving against the obstacle.
                    MotionState::Blocked if !pathfind => NodeStatus::Running,
                    MotionState::Blocked | MotionState::Superseded => NodeStatus::Failure,
                },
            }
        }
    }
}
