//! The evolvable genome: a compact serializable tree of node references.
//!
//! A chromosome stores composites structurally, references designer-defined
//! nodes by id (`Mapped`), and carries concrete sampled property values for
//! template-generated nodes (`Generated`). Decorators attach to nodes rather
//! than wrapping them, so subtree operations move tree children only while
//! dedicated mutators move decorators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::node_library::NodeLibrary;

/// One concrete property value of a generated node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Integer(i64),
    Real(f64),
    Boolean(bool),
    Key(String),
}

impl PropertyValue {
    pub fn type_name(&self) -> &'static str {
        match self {
            PropertyValue::Integer(_) => "integer",
            PropertyValue::Real(_) => "real",
            PropertyValue::Boolean(_) => "boolean",
            PropertyValue::Key(_) => "blackboard_key",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositeKind {
    Selector,
    Sequence,
}

/// What a chromosome node is: a structural composite, a reference to a
/// mapped library node, or an instance of a generated-node template.
#[derive(Debug, Clone, PartialEq)]
pub enum NodePayload {
    Composite(CompositeKind),
    Mapped { id: String },
    Generated {
        template: String,
        properties: BTreeMap<String, PropertyValue>,
    },
}

impl NodePayload {
    pub fn is_composite(&self) -> bool {
        matches!(self, NodePayload::Composite(_))
    }

    /// Library id of the payload; `None` for composites.
    pub fn library_id(&self) -> Option<&str> {
        match self {
            NodePayload::Composite(_) => None,
            NodePayload::Mapped { id } => Some(id),
            NodePayload::Generated { template, .. } => Some(template),
        }
    }
}

/// A tree node with its attached decorators. Decorator entries hold
/// task/decorator payloads and never have children or decorators of their
/// own.
#[derive(Debug, Clone, PartialEq)]
pub struct ChromosomeNode {
    pub payload: NodePayload,
    pub children: Vec<ChromosomeNode>,
    pub decorators: Vec<ChromosomeNode>,
}

impl ChromosomeNode {
    pub fn composite(kind: CompositeKind) -> Self {
        ChromosomeNode {
            payload: NodePayload::Composite(kind),
            children: Vec::new(),
            decorators: Vec::new(),
        }
    }

    pub fn mapped(id: &str) -> Self {
        ChromosomeNode {
            payload: NodePayload::Mapped { id: id.to_string() },
            children: Vec::new(),
            decorators: Vec::new(),
        }
    }

    pub fn generated(template: &str, properties: BTreeMap<String, PropertyValue>) -> Self {
        ChromosomeNode {
            payload: NodePayload::Generated {
                template: template.to_string(),
                properties,
            },
            children: Vec::new(),
            decorators: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<ChromosomeNode>) -> Self {
        self.children = children;
        self
    }

    pub fn with_decorators(mut self, decorators: Vec<ChromosomeNode>) -> Self {
        self.decorators = decorators;
        self
    }

    /// Total node count of this subtree, attached decorators included.
    pub fn subtree_size(&self) -> usize {
        1 + self.decorators.len()
            + self.children.iter().map(|c| c.subtree_size()).sum::<usize>()
    }
}

/// Address of a node: the child-index path from the root, plus the decorator
/// slot when the address names an attached decorator of that node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeAddress {
    pub path: Vec<usize>,
    pub decorator: Option<usize>,
}

impl NodeAddress {
    pub fn root() -> Self {
        NodeAddress {
            path: Vec::new(),
            decorator: None,
        }
    }

    pub fn tree(path: Vec<usize>) -> Self {
        NodeAddress {
            path,
            decorator: None,
        }
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty() && self.decorator.is_none()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("depth {requested} out of range (max depth {max})")]
pub struct DepthOutOfRange {
    pub requested: usize,
    pub max: usize,
}

/// Errors from parsing or validating chromosome documents.
#[derive(Debug, Error)]
pub enum GenomeError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("unknown node id `{0}`")]
    UnknownNodeId(String),
    #[error("property `{property}` of `{id}` out of range")]
    PropertyOutOfRange { id: String, property: String },
}

/// The genome: a composite-rooted tree plus lineage bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub root: ChromosomeNode,
    pub generation_born: u64,
    pub lineage_id: u64,
}

impl Chromosome {
    pub fn new(root: ChromosomeNode) -> Self {
        Chromosome {
            root,
            generation_born: 0,
            lineage_id: 0,
        }
    }

    /// Total count of tree nodes plus attached decorators.
    pub fn size(&self) -> usize {
        self.root.subtree_size()
    }

    /// An explicit deep copy sharing no state with the source.
    pub fn deep_copy(&self) -> Chromosome {
        self.clone()
    }

    /// Longest root-to-leaf path over tree children (root depth 0).
    pub fn max_depth(&self) -> usize {
        fn walk(node: &ChromosomeNode, depth: usize) -> usize {
            node.children
                .iter()
                .map(|c| walk(c, depth + 1))
                .max()
                .unwrap_or(depth)
        }
        walk(&self.root, 0)
    }

    /// Addresses of all tree nodes at depth `d`. Attached decorators share
    /// their host's depth but are listed by [`Chromosome::decorator_addresses`].
    pub fn nodes_at_depth(&self, d: usize) -> Result<Vec<NodeAddress>, DepthOutOfRange> {
        let max = self.max_depth();
        if d > max {
            return Err(DepthOutOfRange { requested: d, max });
        }
        let mut out = Vec::new();
        fn walk(node: &ChromosomeNode, depth: usize, target: usize, path: &mut Vec<usize>, out: &mut Vec<NodeAddress>) {
            if depth == target {
                out.push(NodeAddress::tree(path.clone()));
                return;
            }
            for (i, child) in node.children.iter().enumerate() {
                path.push(i);
                walk(child, depth + 1, target, path, out);
                path.pop();
            }
        }
        walk(&self.root, 0, d, &mut Vec::new(), &mut out);
        Ok(out)
    }

    /// Addresses of every tree node (decorators excluded), pre-order.
    pub fn tree_addresses(&self) -> Vec<NodeAddress> {
        let mut out = Vec::new();
        fn walk(node: &ChromosomeNode, path: &mut Vec<usize>, out: &mut Vec<NodeAddress>) {
            out.push(NodeAddress::tree(path.clone()));
            for (i, child) in node.children.iter().enumerate() {
                path.push(i);
                walk(child, path, out);
                path.pop();
            }
        }
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    /// Addresses of every attached decorator, pre-order by host.
    pub fn decorator_addresses(&self) -> Vec<NodeAddress> {
        let mut out = Vec::new();
        for addr in self.tree_addresses() {
            let node = self.node(&addr).expect("address from walk");
            for i in 0..node.decorators.len() {
                out.push(NodeAddress {
                    path: addr.path.clone(),
                    decorator: Some(i),
                });
            }
        }
        out
    }

    /// Tree depths `>= 1` that hold at least one node.
    pub fn occupied_nonroot_depths(&self) -> Vec<usize> {
        (1..=self.max_depth())
            .filter(|&d| {
                self.nodes_at_depth(d)
                    .map(|v| !v.is_empty())
                    .unwrap_or(false)
            })
            .collect()
    }

    /// Resolves an address to a node (tree node or attached decorator).
    pub fn node(&self, addr: &NodeAddress) -> Option<&ChromosomeNode> {
        let mut cur = &self.root;
        for &i in &addr.path {
            cur = cur.children.get(i)?;
        }
        match addr.decorator {
            None => Some(cur),
            Some(d) => cur.decorators.get(d),
        }
    }

    pub fn node_mut(&mut self, addr: &NodeAddress) -> Option<&mut ChromosomeNode> {
        let mut cur = &mut self.root;
        for &i in &addr.path {
            cur = cur.children.get_mut(i)?;
        }
        match addr.decorator {
            None => Some(cur),
            Some(d) => cur.decorators.get_mut(d),
        }
    }

    /// Structural validation against a library: payload ids exist with the
    /// right role, tasks have no children, decorators appear only as
    /// attachments, and generated property values sit inside their template
    /// ranges.
    pub fn validate(&self, lib: &NodeLibrary) -> Result<(), GenomeError> {
        if !self.root.payload.is_composite() {
            return Err(GenomeError::Invariant("root must be a composite".into()));
        }
        validate_node(&self.root, lib, true)
    }
}

fn validate_payload_entry(
    node: &ChromosomeNode,
    lib: &NodeLibrary,
    expect_decorator: bool,
) -> Result<(), GenomeError> {
    let id = node.payload.library_id().expect("non-composite payload");
    let is_decorator = match &node.payload {
        NodePayload::Mapped { .. } => match lib.mapped(id) {
            Some(def) => def.kind == crate::node_library::NodeKind::Decorator,
            None => return Err(GenomeError::UnknownNodeId(id.to_string())),
        },
        NodePayload::Generated { properties, .. } => match lib.template(id) {
            Some(tpl) => {
                tpl.check_properties(properties).map_err(|property| {
                    GenomeError::PropertyOutOfRange {
                        id: id.to_string(),
                        property,
                    }
                })?;
                tpl.kind == crate::node_library::NodeKind::Decorator
            }
            None => return Err(GenomeError::UnknownNodeId(id.to_string())),
        },
        NodePayload::Composite(_) => unreachable!(),
    };
    if is_decorator != expect_decorator {
        return Err(GenomeError::Invariant(format!(
            "`{id}` used as a {} but the library declares it a {}",
            if expect_decorator { "decorator" } else { "task" },
            if is_decorator { "decorator" } else { "task" },
        )));
    }
    Ok(())
}

fn validate_node(node: &ChromosomeNode, lib: &NodeLibrary, _is_root: bool) -> Result<(), GenomeError> {
    for deco in &node.decorators {
        if deco.payload.is_composite() {
            return Err(GenomeError::Invariant(
                "composite attached as a decorator".into(),
            ));
        }
        if !deco.children.is_empty() || !deco.decorators.is_empty() {
            return Err(GenomeError::Invariant(
                "attached decorators carry no children or decorators".into(),
            ));
        }
        validate_payload_entry(deco, lib, true)?;
    }
    match &node.payload {
        NodePayload::Composite(_) => {
            for child in &node.children {
                if !child.payload.is_composite() {
                    validate_payload_entry(child, lib, false)?;
                }
                validate_node(child, lib, false)?;
            }
        }
        _ => {
            if !node.children.is_empty() {
                return Err(GenomeError::Invariant(format!(
                    "task `{}` has children",
                    node.payload.library_id().unwrap_or("?")
                )));
            }
        }
    }
    Ok(())
}

// --- serialization ---------------------------------------------------------
//
// Document schema per node: {kind, id?, properties?, children?, decorators?}
// with kind in {selector, sequence, task, decorator}. Whether a non-composite
// payload is a task or a decorator is positional (children list vs decorators
// list), and the document kind must agree.

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    properties: Option<BTreeMap<String, PropertyValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    children: Option<Vec<NodeDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decorators: Option<Vec<NodeDoc>>,
}

#[derive(Serialize, Deserialize)]
struct ChromosomeDoc {
    generation_born: u64,
    lineage_id: u64,
    root: NodeDoc,
}

fn node_to_doc(node: &ChromosomeNode, as_decorator: bool) -> NodeDoc {
    let (kind, id, properties) = match &node.payload {
        NodePayload::Composite(CompositeKind::Selector) => ("selector".to_string(), None, None),
        NodePayload::Composite(CompositeKind::Sequence) => ("sequence".to_string(), None, None),
        NodePayload::Mapped { id } => (
            if as_decorator { "decorator" } else { "task" }.to_string(),
            Some(id.clone()),
            None,
        ),
        NodePayload::Generated { template, properties } => (
            if as_decorator { "decorator" } else { "task" }.to_string(),
            Some(template.clone()),
            Some(properties.clone()),
        ),
    };
    NodeDoc {
        kind,
        id,
        properties,
        children: if node.children.is_empty() {
            None
        } else {
            Some(node.children.iter().map(|c| node_to_doc(c, false)).collect())
        },
        decorators: if node.decorators.is_empty() {
            None
        } else {
            Some(node.decorators.iter().map(|d| node_to_doc(d, true)).collect())
        },
    }
}

fn doc_to_node(doc: NodeDoc, in_decorator_list: bool) -> Result<ChromosomeNode, GenomeError> {
    let payload = match doc.kind.as_str() {
        "selector" | "sequence" => {
            if in_decorator_list {
                return Err(GenomeError::Invariant(
                    "composite inside a decorators list".into(),
                ));
            }
            if doc.id.is_some() || doc.properties.is_some() {
                return Err(GenomeError::Schema(
                    "composites carry no id or properties".into(),
                ));
            }
            NodePayload::Composite(match doc.kind.as_str() {
                "selector" => CompositeKind::Selector,
                _ => CompositeKind::Sequence,
            })
        }
        "task" | "decorator" => {
            let is_decorator_kind = doc.kind == "decorator";
            if is_decorator_kind != in_decorator_list {
                return Err(GenomeError::Invariant(if in_decorator_list {
                    "task payload inside a decorators list".into()
                } else {
                    "decorator payload used as a tree child".into()
                }));
            }
            let id = doc
                .id
                .ok_or_else(|| GenomeError::Schema(format!("`{}` node missing id", doc.kind)))?;
            match doc.properties {
                Some(properties) => NodePayload::Generated { template: id, properties },
                None => NodePayload::Mapped { id },
            }
        }
        other => {
            return Err(GenomeError::Schema(format!("unknown payload kind `{other}`")));
        }
    };
    let is_composite = payload.is_composite();
    let mut node = ChromosomeNode {
        payload,
        children: Vec::new(),
        decorators: Vec::new(),
    };
    if in_decorator_list && (doc.children.is_some() || doc.decorators.is_some()) {
        return Err(GenomeError::Invariant(
            "attached decorators carry no children or decorators".into(),
        ));
    }
    if let Some(children) = doc.children {
        if !is_composite {
            return Err(GenomeError::Invariant("task node has children".into()));
        }
        node.children = children
            .into_iter()
            .map(|c| doc_to_node(c, false))
            .collect::<Result<_, _>>()?;
    }
    if let Some(decorators) = doc.decorators {
        node.decorators = decorators
            .into_iter()
            .map(|d| doc_to_node(d, true))
            .collect::<Result<_, _>>()?;
    }
    Ok(node)
}

impl Chromosome {
    /// Lossless text form (JSON). Property numerics round-trip bit-exactly.
    pub fn serialize(&self) -> String {
        let doc = ChromosomeDoc {
            generation_born: self.generation_born,
            lineage_id: self.lineage_id,
            root: node_to_doc(&self.root, false),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("chromosome serializes");
        text.push('\n');
        text
    }

    pub fn deserialize(text: &str) -> Result<Chromosome, GenomeError> {
        let doc: ChromosomeDoc = serde_json::from_str(text)?;
        let root = doc_to_node(doc.root, false)?;
        if !root.payload.is_composite() {
            return Err(GenomeError::Invariant("root must be a composite".into()));
        }
        Ok(Chromosome {
            root,
            generation_born: doc.generation_born,
            lineage_id: doc.lineage_id,
        })
    }

    pub fn to_file(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.serialize())
    }

    pub fn from_file(path: &std::path::Path) -> Result<Chromosome, GenomeError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            GenomeError::Schema(format!("cannot read {}: {e}", path.display()))
        })?;
        Chromosome::deserialize(&text)
    }
}
