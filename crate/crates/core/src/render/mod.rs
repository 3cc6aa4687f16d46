//! Diagrams in the map notation: Graphviz DOT, standalone SVG, and a
//! layered layout for interactive canvases.
//!
//! Bands come straight from [`assign_layers`]; within a band nodes are
//! ordered by a barycenter sweep to reduce edge crossings.

mod dot;
mod svg;

use std::collections::HashMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{assign_layers, AnalysisError, BandRole};
use crate::model::{normalize_label, CognitiveMap, Diagnostic, EdgeId, EdgeKind, NodeId, NodeKind, Sign};

pub use dot::to_dot;
pub use svg::to_svg;

pub const LAYOUT_VERSION: u32 = 1;
pub const NODE_SPACING: f64 = 200.0;
pub const BAND_HEIGHT: f64 = 120.0;
const SWEEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Dot,
    Svg,
    Layout,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(Format::Dot),
            "svg" => Ok(Format::Svg),
            "layout" | "json" => Ok(Format::Layout),
            other => Err(format!("unknown render format `{other}` (dot, svg, layout)")),
        }
    }
}

/// Product at the top (the template's orientation) or at the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    #[default]
    ProductTop,
    ProductBottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub format: Format,
    pub orientation: Orientation,
    pub include_legend: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            format: Format::Dot,
            orientation: Orientation::ProductTop,
            include_legend: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("cannot render a map with validation errors")]
    InvalidMap(Vec<Diagnostic>),
}

impl RenderError {
    pub fn code(&self) -> &'static str {
        "InvalidMap"
    }
}

impl From<AnalysisError> for RenderError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::InvalidMap(d) => RenderError::InvalidMap(d),
            AnalysisError::UnknownEdge(_) => unreachable!("layout never looks up edges by id"),
        }
    }
}

/// Render in whichever format the options ask for.
pub fn render(map: &CognitiveMap, options: &RenderOptions) -> Result<String, RenderError> {
    match options.format {
        Format::Dot => to_dot(map, options),
        Format::Svg => to_svg(map, options),
        Format::Layout => {
            let l = layout_with(map, options.orientation)?;
            Ok(serde_json::to_string_pretty(&l).expect("layout serializes") + "\n")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutBand {
    pub index: usize,
    pub role: BandRole,
    /// Node ids left to right.
    pub nodes: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub label: String,
    pub band: usize,
    pub order: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutEdge {
    pub id: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: EdgeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub version: u32,
    pub orientation: Orientation,
    pub width: f64,
    pub height: f64,
    pub crossings: usize,
    pub bands: Vec<LayoutBand>,
    /// Sorted by band, then order.
    pub nodes: Vec<LayoutNode>,
    /// Sorted by source position, then target position.
    pub edges: Vec<LayoutEdge>,
}

impl Layout {
    pub fn node(&self, id: &str) -> Option<&LayoutNode> {
        self.nodes.iter().find(|n| n.id.as_str() == id)
    }

    pub fn position(&self, id: &NodeId) -> Option<(usize, usize)> {
        self.node(id.as_str()).map(|n| (n.band, n.order))
    }
}

pub fn layout(map: &CognitiveMap) -> Result<Layout, RenderError> {
    layout_with(map, Orientation::ProductTop)
}

pub fn layout_with(map: &CognitiveMap, orientation: Orientation) -> Result<Layout, RenderError> {
    let layers = assign_layers(map)?;
    let band_count = layers.band_count();

    let mut bands: Vec<Vec<usize>> = vec![Vec::new(); band_count];
    let index: HashMap<&NodeId, usize> = map.nodes().iter().enumerate().map(|(i, n)| (&n.id, i)).collect();
    let band_of: Vec<usize> = map
        .nodes()
        .iter()
        .map(|n| layers.layer(&n.id).expect("every node is layered"))
        .collect();
    for (i, b) in band_of.iter().enumerate() {
        bands[*b].push(i);
    }
    let key = |i: usize| {
        let n = &map.nodes()[i];
        (n.kind, normalize_label(&n.label), n.label.clone())
    };
    for band in &mut bands {
        band.sort_by_key(|&i| key(i));
    }

    let links: Vec<(usize, usize)> = map.edges().iter().map(|e| (index[&e.src], index[&e.dst])).collect();
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); map.nodes().len()];
    for &(a, b) in &links {
        neighbours[a].push(b);
        neighbours[b].push(a);
    }

    let mut best = bands.clone();
    let mut best_crossings = crossings(&bands, &band_of, &links);
    for sweep in 0..SWEEPS {
        let downward = sweep % 2 == 0;
        let order: Vec<usize> = if downward {
            (1..band_count).collect()
        } else {
            (0..band_count.saturating_sub(1)).rev().collect()
        };
        for b in order {
            let pos = positions(&bands);
            let mut scored: Vec<(Option<f64>, usize, usize)> = bands[b]
                .iter()
                .enumerate()
                .map(|(slot, &i)| {
                    let fixed: Vec<f64> = neighbours[i]
                        .iter()
                        .filter(|&&j| if downward { band_of[j] < b } else { band_of[j] > b })
                        .map(|&j| pos[j])
                        .collect();
                    let bary = if fixed.is_empty() {
                        None
                    } else {
                        Some(fixed.iter().sum::<f64>() / fixed.len() as f64)
                    };
                    (bary, slot, i)
                })
                .collect();
            // Nodes without fixed neighbours keep their slot.
            scored.sort_by(|x, y| {
                let xv = x.0.unwrap_or(x.1 as f64 / bands[b].len().max(1) as f64);
                let yv = y.0.unwrap_or(y.1 as f64 / bands[b].len().max(1) as f64);
                xv.total_cmp(&yv).then_with(|| key(x.2).cmp(&key(y.2)))
            });
            bands[b] = scored.into_iter().map(|(_, _, i)| i).collect();
        }
        let c = crossings(&bands, &band_of, &links);
        if c < best_crossings {
            best_crossings = c;
            best = bands.clone();
        }
    }

    let widest = best.iter().map(Vec::len).max().unwrap_or(0);
    let width = widest.max(1) as f64 * NODE_SPACING;
    let height = band_count.max(1) as f64 * BAND_HEIGHT;
    let mut nodes = Vec::with_capacity(map.nodes().len());
    for (b, members) in best.iter().enumerate() {
        let offset = (widest - members.len()) as f64 * NODE_SPACING / 2.0;
        let row = match orientation {
            Orientation::ProductTop => b,
            Orientation::ProductBottom => band_count - 1 - b,
        };
        for (order, &i) in members.iter().enumerate() {
            let n = &map.nodes()[i];
            nodes.push(LayoutNode {
                id: n.id.clone(),
                kind: n.kind,
                label: n.label.clone(),
                band: b,
                order,
                x: offset + (order as f64 + 0.5) * NODE_SPACING,
                y: (row as f64 + 0.5) * BAND_HEIGHT,
            });
        }
    }
    let place: HashMap<&NodeId, (usize, usize)> = nodes.iter().map(|n| (&n.id, (n.band, n.order))).collect();
    let mut edges: Vec<LayoutEdge> = map
        .edges()
        .iter()
        .map(|e| LayoutEdge {
            id: e.id.clone(),
            src: e.src.clone(),
            dst: e.dst.clone(),
            kind: e.kind,
            sign: e.sign,
            saturated: e.saturated,
        })
        .collect();
    edges.sort_by_key(|e| (place[&e.src], place[&e.dst]));

    Ok(Layout {
        version: LAYOUT_VERSION,
        orientation,
        width,
        height,
        crossings: best_crossings,
        bands: best
            .iter()
            .enumerate()
            .map(|(b, members)| LayoutBand {
                index: b,
                role: layers.role(b),
                nodes: members.iter().map(|&i| map.nodes()[i].id.clone()).collect(),
            })
            .collect(),
        nodes,
        edges,
    })
}

/// Relative position in `[0, 1)` of every node within its band.
fn positions(bands: &[Vec<usize>]) -> Vec<f64> {
    let total: usize = bands.iter().map(Vec::len).sum();
    let mut pos = vec![0.0; total];
    for band in bands {
        for (slot, &i) in band.iter().enumerate() {
            pos[i] = slot as f64 / band.len() as f64;
        }
    }
    pos
}

/// Crossings between edges joining the same pair of bands.
fn crossings(bands: &[Vec<usize>], band_of: &[usize], links: &[(usize, usize)]) -> usize {
    let pos = positions(bands);
    let mut count = 0;
    for (k, &(a1, b1)) in links.iter().enumerate() {
        for &(a2, b2) in &links[k + 1..] {
            let (top1, bot1) = ordered(a1, b1, band_of);
            let (top2, bot2) = ordered(a2, b2, band_of);
            if band_of[top1] != band_of[top2] || band_of[bot1] != band_of[bot2] {
                continue;
            }
            let dt = pos[top1] - pos[top2];
            let db = pos[bot1] - pos[bot2];
            if dt * db < 0.0 {
                count += 1;
            }
        }
    }
    count
}

fn ordered(a: usize, b: usize, band_of: &[usize]) -> (usize, usize) {
    if band_of[a] <= band_of[b] {
        (a, b)
    } else {
        (b, a)
    }
}
