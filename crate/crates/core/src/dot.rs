//! Graphviz export of a chromosome: tree nodes as boxes, attached
//! decorators as dashed-linked badges.

use crate::chromosome::{Chromosome, ChromosomeNode, CompositeKind, NodePayload, PropertyValue};

fn payload_label(payload: &NodePayload) -> String {
    match payload {
        NodePayload::Composite(CompositeKind::Selector) => "selector".to_string(),
        NodePayload::Composite(CompositeKind::Sequence) => "sequence".to_string(),
        NodePayload::Mapped { id } => id.clone(),
        NodePayload::Generated { template, properties } => {
            let props: Vec<String> = properties
                .iter()
                .map(|(k, v)| match v {
                    PropertyValue::Integer(i) => format!("{k}={i}"),
                    PropertyValue::Real(r) => format!("{k}={r:.3}"),
                    PropertyValue::Boolean(b) => format!("{k}={b}"),
                    PropertyValue::Key(s) => format!("{k}={s}"),
                })
                .collect();
            format!("{template}\\n{}", props.join("\\n"))
        }
    }
}

fn shape_of(node: &ChromosomeNode) -> &'static str {
    match node.payload {
        NodePayload::Composite(_) => "box",
        _ => "ellipse",
    }
}

/// Renders the tree as a Graphviz digraph document.
pub fn to_dot(tree: &Chromosome) -> String {
    let mut out = String::from("digraph behavior_tree {\n  rankdir=TB;\n  node [fontsize=10];\n");
    let mut counter = 0usize;
    fn walk(node: &ChromosomeNode, out: &mut String, counter: &mut usize) -> usize {
        let me = *counter;
        *counter += 1;
        out.push_str(&format!(
            "  n{me} [label=\"{}\", shape={}];\n",
            payload_label(&node.payload),
            shape_of(node)
        ));
        for (i, deco) in node.decorators.iter().enumerate() {
            let id = *counter;
            *counter += 1;
            out.push_str(&format!(
                "  n{id} [label=\"{}\", shape=diamond, style=dashed];\n",
                payload_label(&deco.payload)
            ));
            out.push_str(&format!(
                "  n{me} -> n{id} [style=dashed, label=\"dec{i}\"];\n"
            ));
        }
        for child in &node.children {
            let child_id = walk(child, out, counter);
            out.push_str(&format!("  n{me} -> n{child_id};\n"));
        }
        me
    }
    walk(&tree.root, &mut out, &mut counter);
    out.push_str("}\n");
    out
}

/// Indented text outline with size and depth stats, for quick inspection.
pub fn to_outline(tree: &Chromosome) -> String {
    let mut out = String::new();
    fn walk(node: &ChromosomeNode, indent: usize, out: &mut String) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(&payload_label(&node.payload).replace("\\n", " "));
        if !node.decorators.is_empty() {
            let badges: Vec<String> = node
                .decorators
                .iter()
                .map(|d| payload_label(&d.payload).replace("\\n", " "))
                .collect();
            out.push_str(&format!("  [{}]", badges.join(", ")));
        }
        out.push('\n');
        for child in &node.children {
            walk(child, indent + 1, out);
        }
    }
    walk(&tree.root, 0, &mut out);
    out.push_str(&format!(
        "\nnodes: {} (decorators included)\nmax depth: {}\n",
        tree.size(),
        tree.max_depth()
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromosome::ChromosomeNode;

    #[test]
    fn lone_selector_has_exactly_one_node() {
        let tree = Chromosome::new(ChromosomeNode::composite(CompositeKind::Selector));
        let dot = to_dot(&tree);
        assert_eq!(dot.matches("label=").count(), 1);
        assert!(dot.starts_with("digraph"));
        assert!(dot.trim_end().ends_with('}'));
    }

    #[test]
    fn decorators_appear_as_dashed_badges() {
        let tree = crate::experiment::trees::reference_chase_patrol();
        let dot = to_dot(&tree);
        assert!(dot.contains("style=dashed"));
        assert!(dot.contains("has_sensed_enemy"));
        let outline = to_outline(&tree);
        assert!(outline.contains("move_to_sensed_player"));
        assert!(outline.contains("nodes: "));
    }
}
