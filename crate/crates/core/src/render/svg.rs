use std::collections::HashMap;
use std::fmt::Write;

use super::{layout_with, RenderError, RenderOptions, BAND_HEIGHT, NODE_SPACING};
use crate::model::{CognitiveMap, EdgeKind, NodeId, NodeKind};

const BOX_W: f64 = 150.0;
const BOX_H: f64 = 44.0;
const RADIUS: f64 = 34.0;
const LEGEND_H: f64 = 70.0;

fn xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Half-extent of a node's outline towards its top or bottom.
fn half_height(kind: NodeKind) -> f64 {
    match kind {
        NodeKind::Customer => RADIUS,
        _ => BOX_H / 2.0,
    }
}

fn shape(out: &mut String, kind: NodeKind, x: f64, y: f64) {
    match kind {
        NodeKind::Product => writeln!(
            out,
            r#"  <ellipse class="product" cx="{x:.1}" cy="{y:.1}" rx="{:.1}" ry="{:.1}"/>"#,
            BOX_W / 2.0,
            BOX_H / 2.0
        ),
        NodeKind::Customer => {
            writeln!(out, r#"  <circle class="customer" cx="{x:.1}" cy="{y:.1}" r="{RADIUS:.1}"/>"#)
        }
        NodeKind::Feature | NodeKind::Concept => writeln!(
            out,
            r#"  <rect class="{}" x="{:.1}" y="{:.1}" width="{BOX_W:.1}" height="{BOX_H:.1}"/>"#,
            kind.as_str(),
            x - BOX_W / 2.0,
            y - BOX_H / 2.0
        ),
    }
    .unwrap();
}

pub fn to_svg(map: &CognitiveMap, options: &RenderOptions) -> Result<String, RenderError> {
    let layout = layout_with(map, options.orientation)?;
    let legend = if options.include_legend { LEGEND_H } else { 0.0 };
    let width = layout.width.max(4.0 * NODE_SPACING * 0.75);
    let height = layout.height + legend;
    let at: HashMap<&NodeId, (f64, f64, NodeKind)> = layout.nodes.iter().map(|n| (&n.id, (n.x, n.y, n.kind))).collect();

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="Helvetica, Arial, sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, "  <title>{}</title>", xml(map.title())).unwrap();
    out.push_str(
        r##"  <defs>
    <marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="8" markerHeight="8" orient="auto-start-reverse">
      <path d="M0,0 L10,5 L0,10 z" fill="#333"/>
    </marker>
  </defs>
  <style>
    ellipse, circle, rect { fill: #fff; stroke: #333; stroke-width: 1.5; }
    rect.feature { stroke-dasharray: 6 4; }
    line { stroke: #333; stroke-width: 1.2; marker-end: url(#arrow); }
    text { text-anchor: middle; dominant-baseline: middle; fill: #111; }
    text.sign { font-weight: bold; }
  </style>
"##,
    );

    // Faint separators between bands.
    for b in 1..layout.bands.len() {
        let row = match options.orientation {
            super::Orientation::ProductTop => b,
            super::Orientation::ProductBottom => layout.bands.len() - b,
        };
        let y = row as f64 * BAND_HEIGHT;
        writeln!(out, r##"  <path class="band" d="M0,{y:.1} H{width:.1}" stroke="#ddd" stroke-dasharray="2 4"/>"##).unwrap();
    }

    for e in &layout.edges {
        let (x1, y1, k1) = at[&e.src];
        let (x2, y2, k2) = at[&e.dst];
        let dir = if y2 >= y1 { 1.0 } else { -1.0 };
        let (sy, ty) = (y1 + dir * half_height(k1), y2 - dir * half_height(k2));
        writeln!(
            out,
            r#"  <line class="{}" x1="{x1:.1}" y1="{sy:.1}" x2="{x2:.1}" y2="{ty:.1}"/>"#,
            e.kind.as_str()
        )
        .unwrap();
        if let (EdgeKind::Influence, Some(sign)) = (e.kind, e.sign) {
            writeln!(
                out,
                r#"  <text class="sign" x="{:.1}" y="{:.1}">{}</text>"#,
                (x1 + x2) / 2.0 + 10.0,
                (sy + ty) / 2.0,
                xml(sign.diagram_label())
            )
            .unwrap();
        }
    }

    for n in &layout.nodes {
        shape(&mut out, n.kind, n.x, n.y);
        writeln!(out, r#"  <text x="{:.1}" y="{:.1}">{}</text>"#, n.x, n.y, xml(&n.label)).unwrap();
    }

    if options.include_legend {
        let y = layout.height + LEGEND_H / 2.0;
        let step = width / 4.0;
        for (i, kind) in NodeKind::ALL.iter().enumerate() {
            let x = step * (i as f64 + 0.5);
            writeln!(out, r#"  <g class="legend">"#).unwrap();
            shape(&mut out, *kind, x, y);
            writeln!(out, r#"  <text x="{x:.1}" y="{y:.1}">{}</text>"#, kind.as_str()).unwrap();
            writeln!(out, "  </g>").unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sign;

    fn map() -> CognitiveMap {
        let mut m = CognitiveMap::new("A & B");
        let p = m.add_node(NodeKind::Product, "p").unwrap();
        let f = m.add_node(NodeKind::Feature, "f").unwrap();
        let c = m.add_node(NodeKind::Concept, "<c>").unwrap();
        let u = m.add_node(NodeKind::Customer, "u").unwrap();
        m.add_edge(&p, &f, None).unwrap();
        m.add_edge(&f, &c, Some(Sign::Negative)).unwrap();
        m.add_edge(&u, &c, None).unwrap();
        m
    }

    #[test]
    fn shapes_and_escaping() {
        let svg = to_svg(&map(), &RenderOptions::default()).unwrap();
        assert!(svg.starts_with("<svg xmlns="));
        assert!(svg.contains("<title>A &amp; B</title>"));
        assert!(svg.contains("&lt;c&gt;"));
        assert!(svg.contains(r#"<circle class="customer""#));
        assert!(svg.contains(r#"<rect class="feature""#));
        assert_eq!(svg.matches("<line ").count(), 3);
        assert_eq!(svg.matches(r#"class="sign""#).count(), 1);
    }

    #[test]
    fn deterministic() {
        let o = RenderOptions::default();
        assert_eq!(to_svg(&map(), &o).unwrap(), to_svg(&map(), &o).unwrap());
    }
}
