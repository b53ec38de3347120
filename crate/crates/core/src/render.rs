//! Output formats: SVG for scenes, the versioned scene document read by the
//! web UI, and per-residue hot-spot colourings for 3D structures.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::StructureModel;
use crate::layout::{Anchor, Glyph, GlyphKind, HotspotColors, Palette, Rgba, Scene};
use crate::model::{HotspotBin, ModificationRecord};

pub const SCENE_VERSION: u32 = 1;

/// JSON Schema (draft 2020-12) for [`SceneDocument`].
pub const SCENE_SCHEMA: &str = include_str!("../../../docs/scene.schema.json");

/// JSON Schema for the structure coloring file.
pub const COLORING_SCHEMA: &str = include_str!("../../../docs/coloring.schema.json");

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("chain {0:?} not found in structure")]
    ChainNotFound(char),
    #[error("scene document version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u64, expected: u32 },
    #[error("scenes disagree: {0}")]
    InconsistentScenes(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Formats a coordinate with two decimals; values that round to zero print as `0.00`.
fn num(v: f64) -> String {
    if v.abs() < 0.005 {
        "0.00".to_string()
    } else {
        format!("{v:.2}")
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn fill_attrs(color: Rgba) -> String {
    if color.a == 255 {
        format!("fill=\"{}\"", color.hex_rgb())
    } else {
        format!("fill=\"{}\" fill-opacity=\"{}\"", color.hex_rgb(), num(color.opacity()))
    }
}

fn data_attrs(glyph: &Glyph) -> String {
    let mut out = String::new();
    if let Some(p) = &glyph.payload {
        if let Some(record) = p.record {
            let _ = write!(out, " data-record=\"{record}\"");
        }
        if let Some(position) = p.position {
            let _ = write!(out, " data-position=\"{position}\"");
        }
    }
    out
}

fn svg_element(glyph: &Glyph) -> String {
    let g = glyph;
    match g.kind {
        GlyphKind::Circle => format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {}{}/>",
            num(g.x),
            num(g.y),
            num(g.size / 2.0),
            fill_attrs(g.fill),
            data_attrs(g)
        ),
        GlyphKind::Cross => {
            let h = g.size / 2.0;
            let (x0, x1, y0, y1) = (num(g.x - h), num(g.x + h), num(g.y - h), num(g.y + h));
            let opacity = if g.fill.a == 255 {
                String::new()
            } else {
                format!(" stroke-opacity=\"{}\"", num(g.fill.opacity()))
            };
            format!(
                "<path class=\"cross\" d=\"M{x0} {y0}L{x1} {y1}M{x0} {y1}L{x1} {y0}\" stroke=\"{}\"{opacity} stroke-width=\"1.50\" fill=\"none\"{}/>",
                g.fill.hex_rgb(),
                data_attrs(g)
            )
        }
        GlyphKind::Bar | GlyphKind::AxisTick | GlyphKind::WindowOverlay => {
            let class = match g.kind {
                GlyphKind::Bar => "bar",
                GlyphKind::AxisTick => "tick",
                _ => "window",
            };
            format!(
                "<rect class=\"{class}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {}{}/>",
                num(g.x),
                num(g.y),
                num(g.size),
                num(g.height),
                fill_attrs(g.fill),
                data_attrs(g)
            )
        }
        GlyphKind::Label => {
            let anchor = match g.anchor.unwrap_or(Anchor::Start) {
                Anchor::Start => "start",
                Anchor::Middle => "middle",
                Anchor::End => "end",
            };
            format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{anchor}\" {}>{}</text>",
                num(g.x),
                num(g.y),
                num(g.size),
                fill_attrs(g.fill),
                escape(g.text.as_deref().unwrap_or(""))
            )
        }
    }
}

/// Ticks and unattributed labels (tick numbers, row names) are axis furniture.
fn is_axis(glyph: &Glyph) -> bool {
    match glyph.kind {
        GlyphKind::AxisTick => true,
        GlyphKind::Label => glyph.payload.is_none(),
        _ => false,
    }
}

/// Renders a scene as SVG 1.1. Axis glyphs go into `<g class="axes">`, all
/// other glyphs into `<g class="marks">`; each group keeps glyph-list order.
/// Output depends only on the scene, byte for byte.
pub fn emit_svg(scene: &Scene) -> String {
    let (w, h) = (num(scene.width), num(scene.height));
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\">"
    );
    out.push_str("<g class=\"axes\">\n");
    for g in scene.glyphs.iter().filter(|g| is_axis(g)) {
        out.push_str(&svg_element(g));
        out.push('\n');
    }
    out.push_str("</g>\n");
    let mut marks = scene.glyphs.iter().filter(|g| !is_axis(g)).peekable();
    if marks.peek().is_some() {
        out.push_str("<g class=\"marks\">\n");
        for g in marks {
            out.push_str(&svg_element(g));
            out.push('\n');
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Views {
    pub distribution: Scene,
    pub classification: Scene,
    pub types: Scene,
}

/// Row label order of each row view, top to bottom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    pub classification: Vec<String>,
    pub types: Vec<String>,
}

/// Everything the web UI needs for one protein.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneDocument {
    pub version: u32,
    pub accession: String,
    #[serde(rename = "L")]
    pub length: usize,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub species: String,
    pub palette: Palette,
    pub views: Views,
    pub context: Scene,
    pub orders: Orders,
    /// Records referenced by glyph payload indices.
    pub records: Vec<ModificationRecord>,
}

impl SceneDocument {
    /// Assembles a document, checking that all scenes describe the same sequence.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        accession: &str,
        length: usize,
        name: &str,
        species: &str,
        palette: Palette,
        views: Views,
        context: Scene,
        records: Vec<ModificationRecord>,
    ) -> Result<Self, RenderError> {
        if context.coordinate_map.start != 1 || context.coordinate_map.end as usize != length.max(1) {
            return Err(RenderError::InconsistentScenes(format!(
                "context bar spans {}..{}, sequence length is {length}",
                context.coordinate_map.start, context.coordinate_map.end
            )));
        }
        for scene in [&views.distribution, &views.classification, &views.types] {
            if !scene.window.fits(length) {
                return Err(RenderError::InconsistentScenes(format!(
                    "{:?} window {} exceeds length {length}",
                    scene.view, scene.window
                )));
            }
        }
        if let Some(r) = records.iter().find(|r| r.accession != accession) {
            return Err(RenderError::InconsistentScenes(format!(
                "record for {} in document for {accession}",
                r.accession
            )));
        }
        let orders = Orders {
            classification: views.classification.rows.clone(),
            types: views.types.rows.clone(),
        };
        Ok(Self {
            version: SCENE_VERSION,
            accession: accession.to_string(),
            length,
            name: name.to_string(),
            species: species.to_string(),
            palette,
            views,
            context,
            orders,
            records,
        })
    }
}

pub fn emit_scene_json(doc: &SceneDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("scene document serializes");
    text.push('\n');
    text
}

/// Parses a scene document, rejecting unsupported versions before anything else.
pub fn parse_scene_json(text: &str) -> Result<SceneDocument, RenderError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let found = value.get("version").and_then(serde_json::Value::as_u64).unwrap_or(0);
    if found != SCENE_VERSION as u64 {
        return Err(RenderError::VersionMismatch {
            found,
            expected: SCENE_VERSION,
        });
    }
    Ok(serde_json::from_value(value)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringEntry {
    pub chain: char,
    /// Author residue number.
    pub resi: i32,
    /// `#rrggbb`
    pub color: String,
    pub bin: HotspotBin,
    /// Set when the residue maps outside the sequence.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unmatched: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureColoring {
    pub accession: String,
    pub source_id: String,
    pub entries: Vec<ColoringEntry>,
}

impl StructureColoring {
    pub fn unmatched(&self) -> impl Iterator<Item = &ColoringEntry> {
        self.entries.iter().filter(|e| e.unmatched)
    }
}

/// Colours every residue of `chain` by the hot-spot bin of its sequence
/// position (`author_number - offset`). Residues that land outside
/// `1..=bins.len()` are white and flagged `unmatched`.
pub fn emit_structure_coloring(
    model: &StructureModel,
    chain: char,
    accession: &str,
    bins: &[HotspotBin],
    colors: &HotspotColors,
) -> Result<(StructureColoring, String), RenderError> {
    let residues = model.chain(chain).ok_or(RenderError::ChainNotFound(chain))?;
    let offset = model.offset_for(chain, accession);
    let entries = residues
        .residues
        .iter()
        .map(|res| {
            let position = res.number as i64 - offset as i64;
            let bin = usize::try_from(position - 1).ok().and_then(|i| bins.get(i)).copied();
            let unmatched = bin.is_none();
            let bin = bin.unwrap_or(HotspotBin::None);
            ColoringEntry {
                chain,
                resi: res.number,
                color: colors.color(bin).hex_rgb(),
                bin,
                unmatched,
            }
        })
        .collect();
    let coloring = StructureColoring {
        accession: accession.to_string(),
        source_id: model.source_id.clone(),
        entries,
    };
    let mut json = serde_json::to_string_pretty(&coloring)?;
    json.push('\n');
    Ok((coloring, json))
}

/// JavaScript that applies a colouring to an embeddable 3Dmol.js viewer:
/// defines `applyHotspotColors(viewer)`.
pub fn emit_3dmol_script(coloring: &StructureColoring) -> String {
    let mut groups: Vec<(char, String, Vec<i32>)> = Vec::new();
    for e in &coloring.entries {
        match groups
            .iter_mut()
            .find(|(c, color, _)| *c == e.chain && *color == e.color)
        {
            Some((_, _, resis)) => resis.push(e.resi),
            None => groups.push((e.chain, e.color.clone(), vec![e.resi])),
        }
    }
    let mut out = format!(
        "// Hot-spot colouring for {} ({})\nfunction applyHotspotColors(viewer) {{\n",
        coloring.accession, coloring.source_id
    );
    for (chain, color, resis) in groups {
        let list: Vec<String> = resis.iter().map(i32::to_string).collect();
        let _ = writeln!(
            out,
            "  viewer.setStyle({{chain: '{chain}', resi: [{}]}}, {{cartoon: {{color: '{color}'}}}});",
            list.join(", ")
        );
    }
    out.push_str("  viewer.render();\n}\n");
    out
}
