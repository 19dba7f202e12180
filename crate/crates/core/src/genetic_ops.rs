//! Crossover and the point-mutator roster, plus child construction and
//! initial-population seeding.
//!
//! Reproduction copies the primary parent exactly, applies depth-uniform
//! subtree crossover with its own probability, then gives each of the twelve
//! point mutators an independent chance, in fixed roster order. Every
//! operator maps valid chromosomes to valid chromosomes and never mutates
//! its inputs.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::chromosome::{Chromosome, ChromosomeNode, CompositeKind, NodeAddress, NodePayload, PropertyValue};
use crate::node_library::{LibEntry, NodeKind, NodeLibrary, PropertyRange};

/// Number of point mutators in the roster.
pub const POINT_MUTATOR_COUNT: usize = 12;

/// The fixed roster, applied in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointMutator {
    AddTask,
    AddComposite,
    AddDecorator,
    DeleteNode,
    DeleteDecorator,
    ReplaceTask,
    ReplaceComposite,
    ReplaceDecorator,
    MutateRealProperty,
    MutateIntegerProperty,
    MutateBooleanProperty,
    MutateBlackboardProperty,
}

pub const POINT_MUTATORS: [PointMutator; POINT_MUTATOR_COUNT] = [
    PointMutator::AddTask,
    PointMutator::AddComposite,
    PointMutator::AddDecorator,
    PointMutator::DeleteNode,
    PointMutator::DeleteDecorator,
    PointMutator::ReplaceTask,
    PointMutator::ReplaceComposite,
    PointMutator::ReplaceDecorator,
    PointMutator::MutateRealProperty,
    PointMutator::MutateIntegerProperty,
    PointMutator::MutateBooleanProperty,
    PointMutator::MutateBlackboardProperty,
];

fn default_crossover_prob() -> f64 {
    0.2
}
fn default_point_mutator_prob() -> f64 {
    0.0184
}
fn default_gaussian_std_percent() -> f64 {
    0.10
}
fn default_init_iterations() -> u32 {
    10
}
fn default_init_crossover_prob() -> f64 {
    0.40
}
fn default_init_point_prob_target() -> f64 {
    0.40
}

/// Probabilities for reproduction and for seeding the initial population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutatorConfig {
    /// Chance that a child undergoes crossover.
    #[serde(default = "default_crossover_prob")]
    pub crossover_prob: f64,
    /// Independent chance for each of the twelve point mutators.
    #[serde(default = "default_point_mutator_prob")]
    pub point_mutator_prob: f64,
    /// Gaussian perturbation std as a fraction of the current value.
    #[serde(default = "default_gaussian_std_percent")]
    pub gaussian_std_percent: f64,
    /// Rounds of random modification when seeding the initial population.
    #[serde(default = "default_init_iterations")]
    pub init_iterations: u32,
    /// Per-round crossover chance while seeding.
    #[serde(default = "default_init_crossover_prob")]
    pub init_crossover_prob: f64,
    /// Target per-round chance of at least one point mutation while seeding.
    #[serde(default = "default_init_point_prob_target")]
    pub init_point_prob_target: f64,
}

impl Default for MutatorConfig {
    fn default() -> Self {
        MutatorConfig {
            crossover_prob: default_crossover_prob(),
            point_mutator_prob: default_point_mutator_prob(),
            gaussian_std_percent: default_gaussian_std_percent(),
            init_iterations: default_init_iterations(),
            init_crossover_prob: default_init_crossover_prob(),
            init_point_prob_target: default_init_point_prob_target(),
        }
    }
}

impl MutatorConfig {
    pub fn validate(&self) -> Result<(), String> {
        let probs = [
            ("crossover_prob", self.crossover_prob),
            ("point_mutator_prob", self.point_mutator_prob),
            ("init_crossover_prob", self.init_crossover_prob),
            ("init_point_prob_target", self.init_point_prob_target),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if !(self.gaussian_std_percent > 0.0) {
            return Err(format!(
                "gaussian_std_percent must be positive, got {}",
                self.gaussian_std_percent
            ));
        }
        Ok(())
    }
}

/// Per-mutator probability such that at least one of the twelve fires with
/// probability `target`: solves (1-x)^12 = 1-target.
pub fn point_prob_for_target(target: f64) -> f64 {
    1.0 - (1.0 - target).powf(1.0 / POINT_MUTATOR_COUNT as f64)
}

/// What one crossover did, for calibration tests.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverTrace {
    pub child_addr: NodeAddress,
    pub donor_addr: NodeAddress,
}

/// What one reproduction did.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChildTrace {
    pub crossover: Option<CrossoverTrace>,
    /// Point mutators whose probability draw fired, in roster order.
    pub selected: Vec<PointMutator>,
}

fn pick<'a, T>(items: &'a [T], rng: &mut impl Rng) -> Option<&'a T> {
    if items.is_empty() {
        None
    } else {
        Some(&items[rng.gen_range(0..items.len())])
    }
}

/// Uniform pick over a chromosome's occupied non-root depths, then uniform
/// over the tree nodes at that depth. `None` when only the root exists.
fn pick_nonroot_node(c: &Chromosome, rng: &mut impl Rng) -> Option<NodeAddress> {
    let depths = c.occupied_nonroot_depths();
    let depth = *pick(&depths, rng)?;
    let nodes = c.nodes_at_depth(depth).expect("occupied depth");
    pick(&nodes, rng).cloned()
}

/// Depth-uniform subtree crossover. Replaces one subtree of a copy of
/// `child` with a deep copy of one subtree of `donor`; both swap points are
/// chosen by picking a non-root depth uniformly, then a node at that depth
/// uniformly. Degenerate inputs (either tree a lone root) return the child
/// unchanged.
pub fn crossover(
    child: &Chromosome,
    donor: &Chromosome,
    rng: &mut impl Rng,
) -> (Chromosome, Option<CrossoverTrace>) {
    let mut out = child.deep_copy();
    let child_addr = match pick_nonroot_node(child, rng) {
        Some(addr) => addr,
        None => return (out, None),
    };
    let donor_addr = match pick_nonroot_node(donor, rng) {
        Some(addr) => addr,
        None => return (out, None),
    };
    let replacement = donor.node(&donor_addr).expect("picked address").clone();
    *out.node_mut(&child_addr).expect("picked address") = replacement;
    (
        out,
        Some(CrossoverTrace {
            child_addr,
            donor_addr,
        }),
    )
}

fn new_node_from_entry(entry: LibEntry<'_>, rng: &mut impl Rng) -> ChromosomeNode {
    match entry {
        LibEntry::Mapped(def) => ChromosomeNode::mapped(&def.id),
        LibEntry::Template(tpl) => {
            ChromosomeNode::generated(&tpl.id, NodeLibrary::instantiate(tpl, rng))
        }
    }
}

fn new_payload_from_entry(entry: LibEntry<'_>, rng: &mut impl Rng) -> NodePayload {
    new_node_from_entry(entry, rng).payload
}

/// Composite addresses of the tree (always contains the root).
fn composite_addresses(c: &Chromosome) -> Vec<NodeAddress> {
    c.tree_addresses()
        .into_iter()
        .filter(|a| c.node(a).map(|n| n.payload.is_composite()).unwrap_or(false))
        .collect()
}

fn leaf_addresses(c: &Chromosome) -> Vec<NodeAddress> {
    c.tree_addresses()
        .into_iter()
        .filter(|a| c.node(a).map(|n| !n.payload.is_composite()).unwrap_or(false))
        .collect()
}

/// Addresses of every generated node (tree leaves and attached decorators)
/// together with the property names whose range kind matches `want`.
fn property_slots(
    c: &Chromosome,
    lib: &NodeLibrary,
    want: fn(&PropertyRange) -> bool,
) -> Vec<(NodeAddress, String)> {
    let mut out = Vec::new();
    let mut addrs = c.tree_addresses();
    addrs.extend(c.decorator_addresses());
    for addr in addrs {
        let node = c.node(&addr).expect("walked address");
        if let NodePayload::Generated { template, properties } = &node.payload {
            if let Some(tpl) = lib.template(template) {
                for name in properties.keys() {
                    if let Some(spec) = tpl.property(name) {
                        if want(&spec.range) {
                            out.push((addr.clone(), name.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

fn insert_at_random_slot(c: &mut Chromosome, node: ChromosomeNode, rng: &mut impl Rng) {
    let composites = composite_addresses(c);
    let target = pick(&composites, rng).expect("root always present").clone();
    let parent = c.node_mut(&target).expect("composite address");
    let slot = rng.gen_range(0..=parent.children.len());
    parent.children.insert(slot, node);
}

fn gaussian_perturb(current: f64, range: (f64, f64), std_percent: f64, rng: &mut impl Rng) -> f64 {
    let (lo, hi) = range;
    let std = if current == 0.0 {
        std_percent * (hi - lo)
    } else {
        std_percent * current.abs()
    };
    if std <= 0.0 {
        return current.clamp(lo, hi);
    }
    let normal = Normal::new(current, std).expect("finite std");
    normal.sample(rng).clamp(lo, hi)
}

/// Applies one point mutator in place. Degenerate cases (nothing eligible)
/// leave the chromosome unchanged; validity is always preserved.
pub fn apply_point_mutator(
    mutator: PointMutator,
    c: &mut Chromosome,
    lib: &NodeLibrary,
    cfg: &MutatorConfig,
    rng: &mut impl Rng,
) {
    match mutator {
        PointMutator::AddTask => {
            let entries = lib.entries_of_kind(NodeKind::Task);
            if let Some(entry) = pick(&entries, rng) {
                let node = new_node_from_entry(*entry, rng);
                insert_at_random_slot(c, node, rng);
            }
        }
        PointMutator::AddComposite => {
            let kind = if rng.gen::<bool>() {
                CompositeKind::Selector
            } else {
                CompositeKind::Sequence
            };
            insert_at_random_slot(c, ChromosomeNode::composite(kind), rng);
        }
        PointMutator::AddDecorator => {
            let entries = lib.entries_of_kind(NodeKind::Decorator);
            if let Some(entry) = pick(&entries, rng) {
                let deco = new_node_from_entry(*entry, rng);
                let addrs = c.tree_addresses();
                let target = pick(&addrs, rng).expect("root exists").clone();
                c.node_mut(&target).expect("walked").decorators.push(deco);
            }
        }
        PointMutator::DeleteNode => {
            let addrs: Vec<NodeAddress> = c
                .tree_addresses()
                .into_iter()
                .filter(|a| !a.is_root())
                .collect();
            if let Some(addr) = pick(&addrs, rng) {
                let (parent_path, index) = (
                    &addr.path[..addr.path.len() - 1],
                    *addr.path.last().expect("non-root"),
                );
                let parent = c
                    .node_mut(&NodeAddress::tree(parent_path.to_vec()))
                    .expect("parent of picked node");
                let removed = parent.children.remove(index);
                // A deleted composite splices its children into the parent at
                // its position; its own decorators are discarded.
                if removed.payload.is_composite() {
                    for (offset, grandchild) in removed.children.into_iter().enumerate() {
                        parent.children.insert(index + offset, grandchild);
                    }
                }
            }
        }
        PointMutator::DeleteDecorator => {
            let addrs = c.decorator_addresses();
            if let Some(addr) = pick(&addrs, rng) {
                let host = c
                    .node_mut(&NodeAddress::tree(addr.path.clone()))
                    .expect("host of decorator");
                host.decorators.remove(addr.decorator.expect("decorator address"));
            }
        }
        PointMutator::ReplaceTask => {
            let addrs = leaf_addresses(c);
            if let Some(addr) = pick(&addrs, rng) {
                let entries = lib.entries_of_kind(NodeKind::Task);
                if let Some(entry) = pick(&entries, rng) {
                    let payload = new_payload_from_entry(*entry, rng);
                    c.node_mut(addr).expect("picked").payload = payload;
                }
            }
        }
        PointMutator::ReplaceComposite => {
            let addrs = composite_addresses(c);
            if let Some(addr) = pick(&addrs, rng) {
                let kind = if rng.gen::<bool>() {
                    CompositeKind::Selector
                } else {
                    CompositeKind::Sequence
                };
                c.node_mut(addr).expect("picked").payload = NodePayload::Composite(kind);
            }
        }
        PointMutator::ReplaceDecorator => {
            let addrs = c.decorator_addresses();
            if let Some(addr) = pick(&addrs, rng) {
                let entries = lib.entries_of_kind(NodeKind::Decorator);
                if let Some(entry) = pick(&entries, rng) {
                    let payload = new_payload_from_entry(*entry, rng);
                    c.node_mut(addr).expect("picked").payload = payload;
                }
            }
        }
        PointMutator::MutateRealProperty => {
            let slots = property_slots(c, lib, |r| matches!(r, PropertyRange::Real { .. }));
            if let Some((addr, name)) = pick(&slots, rng).cloned() {
                let (template, current) = match &c.node(&addr).expect("slot").payload {
                    NodePayload::Generated { template, properties } => {
                        match properties.get(&name) {
                            Some(PropertyValue::Real(v)) => (template.clone(), *v),
                            _ => return,
                        }
                    }
                    _ => return,
                };
                let range = match &lib.template(&template).expect("validated").property(&name) {
                    Some(spec) => match spec.range {
                        PropertyRange::Real { min, max } => (min, max),
                        _ => return,
                    },
                    None => return,
                };
                let next = gaussian_perturb(current, range, cfg.gaussian_std_percent, rng);
                if let NodePayload::Generated { properties, .. } =
                    &mut c.node_mut(&addr).expect("slot").payload
                {
                    properties.insert(name, PropertyValue::Real(next));
                }
            }
        }
        PointMutator::MutateIntegerProperty => {
            let slots = property_slots(c, lib, |r| matches!(r, PropertyRange::Integer { .. }));
            if let Some((addr, name)) = pick(&slots, rng).cloned() {
                let (template, current) = match &c.node(&addr).expect("slot").payload {
                    NodePayload::Generated { template, properties } => {
                        match properties.get(&name) {
                            Some(PropertyValue::Integer(v)) => (template.clone(), *v),
                            _ => return,
                        }
                    }
                    _ => return,
                };
                let range = match &lib.template(&template).expect("validated").property(&name) {
                    Some(spec) => match spec.range {
                        PropertyRange::Integer { min, max } => (min, max),
                        _ => return,
                    },
                    None => return,
                };
                let perturbed = gaussian_perturb(
                    current as f64,
                    (range.0 as f64, range.1 as f64),
                    cfg.gaussian_std_percent,
                    rng,
                );
                let next = (perturbed.round() as i64).clamp(range.0, range.1);
                if let NodePayload::Generated { properties, .. } =
                    &mut c.node_mut(&addr).expect("slot").payload
                {
                    properties.insert(name, PropertyValue::Integer(next));
                }
            }
        }
        PointMutator::MutateBooleanProperty => {
            let slots = property_slots(c, lib, |r| matches!(r, PropertyRange::Boolean));
            if let Some((addr, name)) = pick(&slots, rng).cloned() {
                let next = rng.gen::<bool>();
                if let NodePayload::Generated { properties, .. } =
                    &mut c.node_mut(&addr).expect("slot").payload
                {
                    properties.insert(name, PropertyValue::Boolean(next));
                }
            }
        }
        PointMutator::MutateBlackboardProperty => {
            let slots = property_slots(c, lib, |r| matches!(r, PropertyRange::BlackboardKey { .. }));
            if let Some((addr, name)) = pick(&slots, rng).cloned() {
                let template = match &c.node(&addr).expect("slot").payload {
                    NodePayload::Generated { template, .. } => template.clone(),
                    _ => return,
                };
                let options = match &lib.template(&template).expect("validated").property(&name) {
                    Some(spec) => match &spec.range {
                        PropertyRange::BlackboardKey { options } => options.clone(),
                        _ => return,
                    },
                    None => return,
                };
                if let Some(key) = pick(&options, rng).cloned() {
                    if let NodePayload::Generated { properties, .. } =
                        &mut c.node_mut(&addr).expect("slot").payload
                    {
                        properties.insert(name, PropertyValue::Key(key));
                    }
                }
            }
        }
    }
}

/// Random single-node construction shared with [`crate::testkit`].
pub mod new_random_node_helpers {
    use super::*;

    pub fn random_task_node(lib: &NodeLibrary, rng: &mut impl Rng) -> ChromosomeNode {
        let entries = lib.entries_of_kind(NodeKind::Task);
        new_node_from_entry(*pick(&entries, rng).expect("library has tasks"), rng)
    }

    pub fn random_decorator_node(lib: &NodeLibrary, rng: &mut impl Rng) -> ChromosomeNode {
        let entries = lib.entries_of_kind(NodeKind::Decorator);
        new_node_from_entry(*pick(&entries, rng).expect("library has decorators"), rng)
    }
}

fn make_child_inner(
    primary: &Chromosome,
    donor: &Chromosome,
    lib: &NodeLibrary,
    crossover_prob: f64,
    point_prob: f64,
    cfg: &MutatorConfig,
    rng: &mut impl Rng,
) -> (Chromosome, ChildTrace) {
    let mut trace = ChildTrace::default();
    let mut child = primary.deep_copy();
    if rng.gen::<f64>() < crossover_prob {
        let (crossed, applied) = crossover(&child, donor, rng);
        child = crossed;
        trace.crossover = applied;
    }
    for mutator in POINT_MUTATORS {
        if rng.gen::<f64>() < point_prob {
            trace.selected.push(mutator);
            apply_point_mutator(mutator, &mut child, lib, cfg, rng);
        }
    }
    (child, trace)
}

/// Builds one child: exact copy of the primary parent, optional crossover
/// with the donor, then each point mutator independently.
pub fn make_child(
    primary: &Chromosome,
    donor: &Chromosome,
    lib: &NodeLibrary,
    cfg: &MutatorConfig,
    rng: &mut impl Rng,
) -> Chromosome {
    make_child_traced(primary, donor, lib, cfg, rng).0
}

pub fn make_child_traced(
    primary: &Chromosome,
    donor: &Chromosome,
    lib: &NodeLibrary,
    cfg: &MutatorConfig,
    rng: &mut impl Rng,
) -> (Chromosome, ChildTrace) {
    make_child_inner(
        primary,
        donor,
        lib,
        cfg.crossover_prob,
        cfg.point_mutator_prob,
        cfg,
        rng,
    )
}

/// Seeds a population of `n` members from the initial tree. Each member is
/// built by `init_iterations` rounds of reproduction against a uniformly
/// chosen prior member (the initial tree itself until members exist), with
/// per-round probabilities set so a point mutation fires with roughly
/// `init_point_prob_target` chance and crossover with `init_crossover_prob`.
pub fn seed_population(
    initial: &Chromosome,
    n: usize,
    lib: &NodeLibrary,
    cfg: &MutatorConfig,
    rng: &mut impl Rng,
) -> Vec<Chromosome> {
    assert!(n >= 2, "population needs at least two members");
    let point_prob = point_prob_for_target(cfg.init_point_prob_target);
    let mut members: Vec<Chromosome> = Vec::with_capacity(n);
    for i in 0..n {
        let mut current = initial.deep_copy();
        for _ in 0..cfg.init_iterations {
            let donor = if members.is_empty() {
                initial
            } else {
                let pool = members.len() + 1;
                let pick = rng.gen_range(0..pool);
                if pick == members.len() {
                    initial
                } else {
                    &members[pick]
                }
            };
            current = make_child_inner(
                &current,
                donor,
                lib,
                cfg.init_crossover_prob,
                point_prob,
                cfg,
                rng,
            )
            .0;
        }
        current.generation_born = 0;
        current.lineage_id = i as u64;
        members.push(current);
    }
    members
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::node_library::default_roster;
    use crate::testkit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn multiset(c: &Chromosome) -> BTreeMap<String, usize> {
        fn key(p: &NodePayload) -> String {
            match p {
                NodePayload::Composite(CompositeKind::Selector) => "selector".into(),
                NodePayload::Composite(CompositeKind::Sequence) => "sequence".into(),
                NodePayload::Mapped { id } => format!("m:{id}"),
                NodePayload::Generated { template, properties } => {
                    format!("g:{template}:{properties:?}")
                }
            }
        }
        fn walk(n: &ChromosomeNode, out: &mut BTreeMap<String, usize>) {
            *out.entry(key(&n.payload)).or_default() += 1;
            for d in &n.decorators {
                *out.entry(key(&d.payload)).or_default() += 1;
            }
            for c in &n.children {
                walk(c, out);
            }
        }
        let mut out = BTreeMap::new();
        walk(&c.root, &mut out);
        out
    }

    #[test]
    fn crossover_on_lone_root_is_identity() {
        let lib = default_roster();
        let lone = Chromosome::new(ChromosomeNode::composite(CompositeKind::Selector));
        let donor = testkit::random_chromosome(&lib, 4, &mut ChaCha8Rng::seed_from_u64(1));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (out, trace) = crossover(&lone, &donor, &mut rng);
        assert_eq!(out.serialize(), lone.serialize());
        assert!(trace.is_none());
    }

    #[test]
    fn crossover_depth_selection_is_uniform() {
        let lib = default_roster();
        // Occupied non-root depths {1, 2, 3}: root -> seq -> seq -> task.
        let child = Chromosome::new(
            ChromosomeNode::composite(CompositeKind::Selector).with_children(vec![
                ChromosomeNode::composite(CompositeKind::Sequence).with_children(vec![
                    ChromosomeNode::composite(CompositeKind::Sequence)
                        .with_children(vec![ChromosomeNode::mapped("idle")]),
                ]),
                ChromosomeNode::mapped("stop_moving"),
            ]),
        );
        child.validate(&lib).unwrap();
        let donor = child.deep_copy();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let trials = 30_000;
        let mut counts = [0usize; 4];
        for _ in 0..trials {
            let (_, trace) = crossover(&child, &donor, &mut rng);
            counts[trace.unwrap().child_addr.depth()] += 1;
        }
        assert_eq!(counts[0], 0);
        for d in 1..=3 {
            let freq = counts[d] as f64 / trials as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.02, "depth {d} freq {freq}");
        }
    }

    #[test]
    fn crossover_multiset_accounting() {
        let lib = default_roster();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for round in 0..1_000 {
            let child = testkit::random_chromosome(&lib, 4, &mut rng);
            let donor = testkit::random_chromosome(&lib, 4, &mut rng);
            let before_child = child.serialize();
            let before_donor = donor.serialize();
            let (result, trace) = crossover(&child, &donor, &mut rng);
            assert_eq!(child.serialize(), before_child, "child input mutated");
            assert_eq!(donor.serialize(), before_donor, "donor input mutated");
            result.validate(&lib).unwrap_or_else(|e| panic!("round {round}: {e}"));
            let Some(trace) = trace else { continue };

            let removed = Chromosome::new(
                ChromosomeNode::composite(CompositeKind::Selector)
                    .with_children(vec![child.node(&trace.child_addr).unwrap().clone()]),
            );
            let inserted = Chromosome::new(
                ChromosomeNode::composite(CompositeKind::Selector)
                    .with_children(vec![donor.node(&trace.donor_addr).unwrap().clone()]),
            );
            let mut expected = multiset(&child);
            for (k, v) in multiset(&removed) {
                if k == "selector" && v == 1 {
                    continue; // wrapper root
                }
                let slot = expected.entry(k.clone()).or_default();
                let take = if k == "selector" { v - 1 } else { v };
                assert!(*slot >= take, "round {round}: removing more {k} than present");
                *slot -= take;
                if *slot == 0 {
                    expected.remove(&k);
                }
            }
            for (k, v) in multiset(&inserted) {
                let add = if k == "selector" { v - 1 } else { v };
                if add > 0 {
                    *expected.entry(k).or_default() += add;
                }
            }
            expected.retain(|_, v| *v > 0);
            assert_eq!(multiset(&result), expected, "round {round}");
        }
    }

    #[test]
    fn delete_node_on_lone_root_is_noop() {
        let lib = default_roster();
        let cfg = MutatorConfig::default();
        let mut c = Chromosome::new(ChromosomeNode::composite(CompositeKind::Selector));
        let before = c.serialize();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        apply_point_mutator(PointMutator::DeleteNode, &mut c, &lib, &cfg, &mut rng);
        assert_eq!(c.serialize(), before);
    }

    #[test]
    fn delete_composite_splices_children() {
        let lib = default_roster();
        let cfg = MutatorConfig::default();
        // Root with one composite child holding three tasks. Deleting any
        // non-root node must hit the composite or one of its tasks; force
        // the composite by retrying seeds until the root has 3 children.
        let base = Chromosome::new(
            ChromosomeNode::composite(CompositeKind::Selector).with_children(vec![
                ChromosomeNode::composite(CompositeKind::Sequence).with_children(vec![
                    ChromosomeNode::mapped("idle"),
                    ChromosomeNode::mapped("stop_moving"),
                    ChromosomeNode::mapped("face_target"),
                ]),
            ]),
        );
        let mut seen_splice = false;
        for seed in 0..32 {
            let mut c = base.deep_copy();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            apply_point_mutator(PointMutator::DeleteNode, &mut c, &lib, &cfg, &mut rng);
            c.validate(&lib).unwrap();
            if c.root.children.len() == 3 {
                // Composite deleted: children spliced, net node loss exactly 1.
                assert_eq!(c.size(), base.size() - 1);
                assert!(c.root.children.iter().all(|n| !n.payload.is_composite()));
                seen_splice = true;
            }
        }
        assert!(seen_splice, "splice case never sampled");
    }

    #[test]
    fn gaussian_real_mutation_std_matches() {
        // Template range wide enough that clamping never bites.
        let mut lib = default_roster();
        lib.templates.push(crate::node_library::GeneratedNodeTemplate {
            id: "wide_wait".into(),
            kind: NodeKind::Task,
            primitive: "wait".into(),
            properties: vec![crate::node_library::PropertySpec {
                name: "duration".into(),
                range: PropertyRange::Real { min: 0.0, max: 100.0 },
            }],
        });
        let cfg = MutatorConfig::default();
        let base = Chromosome::new(
            ChromosomeNode::composite(CompositeKind::Selector).with_children(vec![
                ChromosomeNode::generated(
                    "wide_wait",
                    [("duration".to_string(), PropertyValue::Real(2.0))].into(),
                ),
            ]),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 10_000;
        let mut deltas = Vec::with_capacity(n);
        for _ in 0..n {
            let mut c = base.deep_copy();
            apply_point_mutator(PointMutator::MutateRealProperty, &mut c, &lib, &cfg, &mut rng);
            match &c.root.children[0].payload {
                NodePayload::Generated { properties, .. } => match properties["duration"] {
                    PropertyValue::Real(v) => deltas.push(v - 2.0),
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            }
        }
        let mean = deltas.iter().sum::<f64>() / n as f64;
        let var = deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1) as f64;
        let std = var.sqrt();
        assert!((std - 0.20).abs() < 0.01, "sample std {std}");
    }

    #[test]
    fn integer_property_mutation_rounds_and_clamps() {
        let mut lib = default_roster();
        lib.templates.push(crate::node_library::GeneratedNodeTemplate {
            id: "retry".into(),
            kind: NodeKind::Task,
            primitive: "idle".into(),
            properties: vec![crate::node_library::PropertySpec {
                name: "count".into(),
                range: PropertyRange::Integer { min: 1, max: 5 },
            }],
        });
        let cfg = MutatorConfig::default();
        let base = Chromosome::new(
            ChromosomeNode::composite(CompositeKind::Selector).with_children(vec![
                ChromosomeNode::generated(
                    "retry",
                    [("count".to_string(), PropertyValue::Integer(3))].into(),
                ),
            ]),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let mut c = base.deep_copy();
            apply_point_mutator(PointMutator::MutateIntegerProperty, &mut c, &lib, &cfg, &mut rng);
            match &c.root.children[0].payload {
                NodePayload::Generated { properties, .. } => match properties["count"] {
                    PropertyValue::Integer(v) => assert!((1..=5).contains(&v)),
                    _ => panic!("type changed"),
                },
                _ => unreachable!(),
            }
            c.validate(&lib).unwrap();
        }
    }

    #[test]
    fn property_mutators_noop_without_matching_type() {
        // Default roster trees with no integer property anywhere.
        let lib = default_roster();
        let cfg = MutatorConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut c = testkit::random_chromosome(&lib, 4, &mut rng);
        let before = c.serialize();
        apply_point_mutator(PointMutator::MutateIntegerProperty, &mut c, &lib, &cfg, &mut rng);
        assert_eq!(c.serialize(), before);
    }

    #[test]
    fn zero_probability_child_is_byte_identical() {
        let lib = default_roster();
        let cfg = MutatorConfig {
            crossover_prob: 0.0,
            point_mutator_prob: 0.0,
            ..MutatorConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let primary = testkit::random_chromosome(&lib, 4, &mut rng);
        let donor = testkit::random_chromosome(&lib, 4, &mut rng);
        let child = make_child(&primary, &donor, &lib, &cfg, &mut rng);
        assert_eq!(child.serialize(), primary.serialize());
    }

    #[test]
    fn seed_point_prob_solves_target() {
        // (1-x)^12 = 0.60  =>  x ~ 0.0417; bisection oracle.
        let target = 0.40;
        let x = point_prob_for_target(target);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 1.0 - (1.0 - mid).powi(12) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((x - lo).abs() < 1e-9, "closed form {x} vs bisection {lo}");
        assert!((x - 0.0417).abs() < 0.0001);
    }

    #[test]
    fn seed_population_with_zero_probs_copies_initial() {
        let lib = default_roster();
        let cfg = MutatorConfig {
            init_crossover_prob: 0.0,
            init_point_prob_target: 0.0,
            ..MutatorConfig::default()
        };
        let initial = Chromosome::new(
            ChromosomeNode::composite(CompositeKind::Selector)
                .with_children(vec![ChromosomeNode::mapped("idle")]),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let pop = seed_population(&initial, 20, &lib, &cfg, &mut rng);
        assert_eq!(pop.len(), 20);
        for (i, member) in pop.iter().enumerate() {
            assert_eq!(member.root, initial.root);
            assert_eq!(member.lineage_id, i as u64);
        }
    }

    #[test]
    fn seeded_members_validate_and_compile() {
        let lib = default_roster();
        let cfg = MutatorConfig::default();
        let initial = crate::experiment::trees::initial_degraded();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let pop = seed_population(&initial, 30, &lib, &cfg, &mut rng);
        for member in &pop {
            member.validate(&lib).unwrap();
            crate::behavior_tree::compile(member, &lib).unwrap();
        }
    }

    #[test]
    fn operators_preserve_validity_and_clamping() {
        let lib = default_roster();
        let cfg = MutatorConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for round in 0..2_000 {
            let mut c = testkit::random_chromosome(&lib, 4, &mut rng);
            let mutator = POINT_MUTATORS[rng.gen_range(0..POINT_MUTATOR_COUNT)];
            apply_point_mutator(mutator, &mut c, &lib, &cfg, &mut rng);
            c.validate(&lib)
                .unwrap_or_else(|e| panic!("round {round} {mutator:?}: {e}"));
        }
    }
}
