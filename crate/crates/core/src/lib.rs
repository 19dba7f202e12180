//! Evolves NPC behavior trees by genetic programming and scores them in a
//! deterministic fixed-timestep grid arena.
//!
//! The crate is organized around the pipeline:
//!
//! * [`chromosome`] — the serializable tree genome manipulated by evolution.
//! * [`node_library`] — designer-declared building blocks (mapped nodes and
//!   generated-node templates) the operators draw from.
//! * [`behavior_tree`] — compiles genomes into executable tree instances and
//!   ticks them against a world view.
//! * [`genetic_ops`] — depth-uniform subtree crossover, the twelve point
//!   mutators, child construction, and initial-population seeding.
//! * [`selection`] — tournament selection, elitism, generational replacement,
//!   and the fitness-blind baseline step.
//! * [`fitness`] — event-driven per-agent accumulators and weighted
//!   piecewise-linear scoring with a tree-size band penalty.
//! * [`arena`] — the survival-arena simulator: maps, pathfinding, perception,
//!   scripted humans, damage, and fitness-event emission.
//! * [`experiment`] — run orchestration, logging, best-tree extraction, and
//!   the multi-trial evaluation/comparison harness.

pub mod arena;
pub mod behavior_tree;
pub mod blackboard;
pub mod chromosome;
pub mod dot;
pub mod experiment;
pub mod fitness;
pub mod genetic_ops;
pub mod node_library;
pub mod primitives;
pub mod rng;
pub mod selection;
pub mod testkit;
pub mod types;

pub use behavior_tree::{compile, NodeStatus, TreeInstance};
pub use blackboard::{Blackboard, KeyDecl, KeyType, Value};
pub use chromosome::{Chromosome, ChromosomeNode, CompositeKind, NodeAddress, NodePayload, PropertyValue};
pub use fitness::{FitnessLedger, FitnessSpec};
pub use genetic_ops::MutatorConfig;
pub use node_library::NodeLibrary;
pub use selection::SelectionConfig;
pub use types::{AgentId, Cell, Vec2};
