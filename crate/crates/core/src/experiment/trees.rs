//! Bundled trees: the degraded starting tree evolution improves on, a
//! do-nothing floor, and three hand-built reference trees used as comparison
//! fixtures.

use std::collections::BTreeMap;

use crate::chromosome::{Chromosome, ChromosomeNode, CompositeKind, PropertyValue};

fn props(entries: &[(&str, PropertyValue)]) -> BTreeMap<String, PropertyValue> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// The starting point: retains some structure (a sense-react branch and an
/// idle branch) but no node that can move the agent.
pub fn initial_degraded() -> Chromosome {
    Chromosome::new(
        ChromosomeNode::composite(CompositeKind::Selector).with_children(vec![
            ChromosomeNode::composite(CompositeKind::Sequence)
                .with_children(vec![
                    ChromosomeNode::mapped("face_target"),
                    ChromosomeNode::generated("wait", props(&[("duration", PropertyValue::Real(1.0))])),
                ])
                .with_decorators(vec![ChromosomeNode::mapped("has_sensed_enemy")]),
            ChromosomeNode::composite(CompositeKind::Sequence).with_children(vec![
                ChromosomeNode::mapped("idle"),
                ChromosomeNode::generated("wait", props(&[("duration", PropertyValue::Real(2.0))])),
            ]),
        ]),
    )
}

/// Lone idle task; scores the all-idle floor.
pub fn do_nothing() -> Chromosome {
    Chromosome::new(
        ChromosomeNode::composite(CompositeKind::Selector)
            .with_children(vec![ChromosomeNode::mapped("idle")]),
    )
}

/// Chase on sight, otherwise patrol random waypoints with a small offset.
pub fn reference_chase_patrol() -> Chromosome {
    Chromosome::new(
        ChromosomeNode::composite(CompositeKind::Selector).with_children(vec![
            ChromosomeNode::mapped("move_to_sensed_player")
                .with_decorators(vec![ChromosomeNode::mapped("has_sensed_enemy")]),
            ChromosomeNode::composite(CompositeKind::Sequence).with_children(vec![
                ChromosomeNode::mapped("find_bot_waypoint"),
                ChromosomeNode::composite(CompositeKind::Sequence)
                    .with_children(vec![
                        ChromosomeNode::mapped("find_patrol_location"),
                        ChromosomeNode::mapped("move_to_current_waypoint"),
                    ])
                    .with_decorators(vec![ChromosomeNode::mapped("has_waypoint")]),
            ]),
        ]),
    )
}

/// Chase, then search near the last known location, then patrol.
pub fn reference_search_last_known() -> Chromosome {
    Chromosome::new(
        ChromosomeNode::composite(CompositeKind::Selector).with_children(vec![
            ChromosomeNode::mapped("move_to_sensed_player")
                .with_decorators(vec![ChromosomeNode::mapped("has_sensed_enemy")]),
            ChromosomeNode::composite(CompositeKind::Sequence)
                .with_children(vec![
                    ChromosomeNode::mapped("find_location_near_last_known_enemy"),
                    ChromosomeNode::mapped("move_to_current_waypoint"),
                    ChromosomeNode::generated("wait", props(&[("duration", PropertyValue::Real(0.5))])),
                    ChromosomeNode::mapped("forget_last_known_enemy"),
                ])
                .with_decorators(vec![ChromosomeNode::mapped("has_last_known_location")]),
            ChromosomeNode::composite(CompositeKind::Sequence).with_children(vec![
                ChromosomeNode::mapped("find_bot_waypoint"),
                ChromosomeNode::mapped("move_to_current_waypoint"),
            ]),
        ]),
    )
}

/// Straight-line chaser with heading-based wandering; weaker on obstacle
/// maps because the chase does not pathfind.
pub fn reference_wander_chase() -> Chromosome {
    Chromosome::new(
        ChromosomeNode::composite(CompositeKind::Selector).with_children(vec![
            ChromosomeNode::mapped("move_toward_target_enemy")
                .with_decorators(vec![ChromosomeNode::mapped("has_sensed_enemy")]),
            ChromosomeNode::composite(CompositeKind::Sequence).with_children(vec![
                ChromosomeNode::mapped("pick_random_heading"),
                ChromosomeNode::generated(
                    "move_distance",
                    props(&[("distance", PropertyValue::Real(5.0))]),
                ),
            ]),
        ]),
    )
}

/// All bundled trees by file stem, for export and fixtures.
pub fn bundled() -> Vec<(&'static str, Chromosome)> {
    vec![
        ("initial_degraded", initial_degraded()),
        ("do_nothing", do_nothing()),
        ("reference_chase_patrol", reference_chase_patrol()),
        ("reference_search_last_known", reference_search_last_known()),
        ("reference_wander_chase", reference_wander_chase()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior_tree::compile;
    use crate::node_library::default_roster;

    #[test]
    fn bundled_trees_compile_against_default_roster() {
        let lib = default_roster();
        for (name, tree) in bundled() {
            tree.validate(&lib).unwrap_or_else(|e| panic!("{name}: {e}"));
            compile(&tree, &lib).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn degraded_tree_size_matches_walk_oracle() {
        let tree = initial_degraded();
        fn walk(n: &ChromosomeNode) -> usize {
            1 + n.decorators.len() + n.children.iter().map(walk).sum::<usize>()
        }
        assert_eq!(tree.size(), walk(&tree.root));
        assert_eq!(tree.size(), 8);
    }

    #[test]
    fn degraded_tree_has_no_movement_nodes() {
        let movers = [
            "move_to_current_waypoint",
            "move_to_sensed_player",
            "move_toward_target_enemy",
            "move_to_last_known_enemy_location",
            "step_forward",
            "move_distance",
            "find_bot_waypoint",
            "find_patrol_location",
        ];
        fn ids(n: &ChromosomeNode, out: &mut Vec<String>) {
            if let Some(id) = n.payload.library_id() {
                out.push(id.to_string());
            }
            for d in &n.decorators {
                ids(d, out);
            }
            for c in &n.children {
                ids(c, out);
            }
        }
        let mut found = Vec::new();
        ids(&initial_degraded().root, &mut found);
        for id in found {
            assert!(!movers.contains(&id.as_str()), "degraded tree moves via {id}");
        }
    }
}
