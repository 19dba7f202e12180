//! Test support: random genome construction used by property tests and
//! oracles across the workspace. Not part of the evolution pipeline.

use rand::Rng;

use crate::chromosome::{Chromosome, ChromosomeNode, CompositeKind};
use crate::genetic_ops::new_random_node_helpers::{random_decorator_node, random_task_node};
use crate::node_library::NodeLibrary;

/// Builds a random valid chromosome: composite-rooted, tree depth at most
/// `max_depth`, tasks and composites mixed, decorators sprinkled on.
pub fn random_chromosome(lib: &NodeLibrary, max_depth: usize, rng: &mut impl Rng) -> Chromosome {
    fn grow(
        lib: &NodeLibrary,
        depth: usize,
        max_depth: usize,
        rng: &mut impl Rng,
    ) -> ChromosomeNode {
        let kind = if rng.gen::<bool>() {
            CompositeKind::Selector
        } else {
            CompositeKind::Sequence
        };
        let mut node = ChromosomeNode::composite(kind);
        let n_children = rng.gen_range(0..=3);
        for _ in 0..n_children {
            let child = if depth + 1 < max_depth && rng.gen::<f64>() < 0.35 {
                grow(lib, depth + 1, max_depth, rng)
            } else {
                random_task_node(lib, rng)
            };
            node.children.push(child);
        }
        while rng.gen::<f64>() < 0.25 {
            node.decorators.push(random_decorator_node(lib, rng));
        }
        node
    }

    let mut root = grow(lib, 0, max_depth.max(1), rng);
    // Guarantee at least one non-root node so operators have material.
    if root.children.is_empty() {
        root.children.push(random_task_node(lib, rng));
    }
    if rng.gen::<f64>() < 0.5 {
        if let Some(first) = root.children.first_mut() {
            if !first.payload.is_composite() && rng.gen::<f64>() < 0.5 {
                first.decorators.push(random_decorator_node(lib, rng));
            }
        }
    }
    Chromosome::new(root)
}
