use std::collections::HashMap;
use std::fmt::Write;

use super::{layout_with, Orientation, RenderError, RenderOptions};
use crate::model::{CognitiveMap, EdgeKind, NodeId, NodeKind};

pub(crate) fn shape(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Product => "shape=ellipse",
        NodeKind::Customer => "shape=circle",
        NodeKind::Feature => "shape=box, style=dashed",
        NodeKind::Concept => "shape=box",
    }
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

/// Graphviz source. Nodes are numbered `n0, n1, ...` in layout order so
/// structurally equal maps give identical text.
pub fn to_dot(map: &CognitiveMap, options: &RenderOptions) -> Result<String, RenderError> {
    let layout = layout_with(map, Orientation::ProductTop)?;
    let name: HashMap<&NodeId, String> =
        layout.nodes.iter().enumerate().map(|(i, n)| (&n.id, format!("n{i}"))).collect();

    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(map.title())).unwrap();
    let rankdir = match options.orientation {
        Orientation::ProductTop => "TB",
        Orientation::ProductBottom => "BT",
    };
    writeln!(out, "  rankdir={rankdir};").unwrap();
    writeln!(out, "  node [fontname=\"Helvetica\"];").unwrap();
    writeln!(out, "  edge [fontname=\"Helvetica\"];").unwrap();
    out.push('\n');
    for n in &layout.nodes {
        writeln!(out, "  {} [label=\"{}\", {}];", name[&n.id], escape(&n.label), shape(n.kind)).unwrap();
    }
    out.push('\n');
    for band in &layout.bands {
        if band.nodes.is_empty() {
            continue;
        }
        let members: Vec<&str> = band.nodes.iter().map(|id| name[id].as_str()).collect();
        writeln!(out, "  {{ rank=same; {}; }}", members.join("; ")).unwrap();
    }
    out.push('\n');
    for e in &layout.edges {
        match (e.kind, e.sign) {
            (EdgeKind::Influence, Some(sign)) => {
                writeln!(out, "  {} -> {} [label=\"{}\"];", name[&e.src], name[&e.dst], sign.diagram_label()).unwrap()
            }
            _ => writeln!(out, "  {} -> {};", name[&e.src], name[&e.dst]).unwrap(),
        }
    }
    if options.include_legend {
        out.push('\n');
        out.push_str(LEGEND);
    }
    out.push_str("}\n");
    Ok(out)
}

const LEGEND: &str = r#"  subgraph cluster_legend {
    label="Legend";
    fontname="Helvetica";
    legend_product [label="product", shape=ellipse];
    legend_customer [label="customer", shape=circle];
    legend_feature [label="feature", shape=box, style=dashed];
    legend_concept [label="concept", shape=box];
    legend_a [label="", shape=point];
    legend_b [label="", shape=point];
    legend_c [label="", shape=point];
    legend_d [label="", shape=point];
    legend_e [label="", shape=point];
    legend_f [label="", shape=point];
    legend_a -> legend_b [label="+ increases"];
    legend_c -> legend_d [label="- decreases"];
    legend_e -> legend_f [label="/o/ does not affect"];
  }
"#;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sign;

    #[test]
    fn product_only_map_is_one_node() {
        let mut m = CognitiveMap::new("x");
        m.add_node(NodeKind::Product, "Solo").unwrap();
        let opts = RenderOptions {
            include_legend: false,
            ..Default::default()
        };
        let dot = to_dot(&m, &opts).unwrap();
        assert!(dot.contains("n0 [label=\"Solo\", shape=ellipse];"));
        assert!(!dot.contains("n1"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn neutral_edge_label() {
        let mut m = CognitiveMap::new("x");
        let p = m.add_node(NodeKind::Product, "p").unwrap();
        let f = m.add_node(NodeKind::Feature, "f").unwrap();
        let c = m.add_node(NodeKind::Concept, "c").unwrap();
        m.add_edge(&p, &f, None).unwrap();
        m.add_edge(&f, &c, Some(Sign::Neutral)).unwrap();
        let dot = to_dot(&m, &RenderOptions::default()).unwrap();
        assert!(dot.contains("n1 -> n2 [label=\"/o/\"];"));
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("cluster_legend"));
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(escape(r#"a "b" \c"#), r#"a \"b\" \\c"#);
    }
}
