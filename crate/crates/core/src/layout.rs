//! Resolution-independent 2D scenes for the distribution, classification and
//! modification-type views, plus the context bar with its focus window.
//!
//! Coordinates are abstract units with the origin at the top left. Every
//! circle glyph carries the index of the record it stands for.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::analytics::RowKey;
use crate::exec;
use crate::model::{HotspotBin, ModificationRecord, OccupancyMatrix, Window};

/// Default category cycle (20 colours).
pub const DEFAULT_CYCLE: [&str; 20] = [
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c", "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
    "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f", "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgba {
    pub r: u8,
    pub g: u8,
    pub b: u8,
    pub a: u8,
}

impl Rgba {
    pub const BLACK: Rgba = Rgba {
        r: 0,
        g: 0,
        b: 0,
        a: 255,
    };

    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b, a: 255 }
    }

    pub fn with_opacity(self, opacity: f64) -> Self {
        Self {
            a: (opacity.clamp(0.0, 1.0) * 255.0).round() as u8,
            ..self
        }
    }

    pub fn opacity(&self) -> f64 {
        self.a as f64 / 255.0
    }

    /// `#rrggbb`, ignoring alpha.
    pub fn hex_rgb(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }
}

impl fmt::Display for Rgba {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}{:02x}", self.r, self.g, self.b, self.a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid colour {0:?}: expected #RRGGBB or #RRGGBBAA")]
pub struct ColorError(pub String);

impl FromStr for Rgba {
    type Err = ColorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ColorError(s.to_string());
        let hex = s.trim().strip_prefix('#').ok_or_else(err)?;
        if !(hex.len() == 6 || hex.len() == 8) || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(err());
        }
        let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| err());
        Ok(Rgba {
            r: byte(0)?,
            g: byte(2)?,
            b: byte(4)?,
            a: if hex.len() == 8 { byte(6)? } else { 255 },
        })
    }
}

impl Serialize for Rgba {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rgba {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HotspotColors {
    pub none: Rgba,
    pub low: Rgba,
    pub high: Rgba,
}

impl Default for HotspotColors {
    fn default() -> Self {
        Self {
            none: Rgba::rgb(0xff, 0xff, 0xff),
            low: Rgba::rgb(0x8f, 0xbc, 0xe6),
            high: Rgba::rgb(0xe8, 0x8e, 0x8e),
        }
    }
}

impl HotspotColors {
    pub fn color(&self, bin: HotspotBin) -> Rgba {
        match bin {
            HotspotBin::None => self.none,
            HotspotBin::Low => self.low,
            HotspotBin::High => self.high,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryColor {
    pub category: String,
    pub color: Rgba,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Palette {
    pub categories: Vec<CategoryColor>,
    pub opacity: f64,
    pub mutation_mark_color: Rgba,
    pub hotspot: HotspotColors,
    pub context_bar_color: Rgba,
    pub window_color: Rgba,
    pub axis_color: Rgba,
}

impl Palette {
    /// Fill for a category; unknown categories get the axis colour at the palette opacity.
    pub fn color(&self, category: &str) -> Rgba {
        self.categories
            .iter()
            .find(|c| c.category == category)
            .map(|c| c.color)
            .unwrap_or_else(|| self.axis_color.with_opacity(self.opacity))
    }
}

/// Palette inputs from the layout config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PaletteConfig {
    pub opacity: f64,
    /// Per-category colour overrides.
    pub overrides: BTreeMap<String, Rgba>,
    /// Replaces the default category cycle when non-empty.
    pub cycle: Vec<Rgba>,
    pub hotspot: HotspotColors,
}

impl Default for PaletteConfig {
    fn default() -> Self {
        Self {
            opacity: 0.6,
            overrides: BTreeMap::new(),
            cycle: Vec::new(),
            hotspot: HotspotColors::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{categories} categories exceed the {cycle}-colour cycle; colours repeat")]
pub struct TooManyCategories {
    pub categories: usize,
    pub cycle: usize,
}

/// Assigns one colour per category by walking the colour cycle in list
/// order. Overrides win over the cycle. When categories outnumber the cycle
/// the colours wrap around and a warning is returned alongside the palette.
pub fn assign_palette(categories: &[String], config: &PaletteConfig) -> (Palette, Option<TooManyCategories>) {
    let cycle: Vec<Rgba> = if config.cycle.is_empty() {
        DEFAULT_CYCLE
            .iter()
            .map(|h| h.parse().expect("valid default colour"))
            .collect()
    } else {
        config.cycle.clone()
    };
    let opacity = if config.opacity > 0.0 && config.opacity <= 1.0 {
        config.opacity
    } else {
        0.6
    };

    let mut wrapped = false;
    let categories = categories
        .iter()
        .enumerate()
        .map(|(i, category)| {
            let color = match config.overrides.get(category) {
                Some(c) if c.a == 255 => c.with_opacity(opacity),
                Some(c) => *c,
                None => {
                    wrapped |= i >= cycle.len();
                    cycle[i % cycle.len()].with_opacity(opacity)
                }
            };
            CategoryColor {
                category: category.clone(),
                color,
            }
        })
        .collect::<Vec<_>>();

    let warning = wrapped.then_some(TooManyCategories {
        categories: categories.len(),
        cycle: cycle.len(),
    });
    let palette = Palette {
        categories,
        opacity,
        mutation_mark_color: Rgba::BLACK,
        hotspot: config.hotspot.clone(),
        context_bar_color: Rgba::rgb(0x88, 0x88, 0x88),
        window_color: Rgba::rgb(0x46, 0x82, 0xb4).with_opacity(0.2),
        axis_color: Rgba::rgb(0x33, 0x33, 0x33),
    };
    (palette, warning)
}

/// Category list shared by all views: classifications first, then
/// modification types, each by descending frequency with alphabetical ties.
pub fn palette_categories(records: &[ModificationRecord]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    for key in [RowKey::Classification, RowKey::ModType] {
        for (label, _) in crate::analytics::distribution(records, key) {
            if seen.insert(label.clone()) {
                out.push(label);
            }
        }
    }
    out
}

/// Geometry and styling knobs. Every field has a default, so a config file
/// only needs the values it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutConfig {
    pub width: f64,
    pub diameter: f64,
    pub gap: f64,
    pub band_height: f64,
    pub margin_left: f64,
    pub margin_right: f64,
    pub margin_top: f64,
    pub margin_bottom: f64,
    pub context_height: f64,
    /// Cells with more records than this collapse into one circle and a count label.
    pub max_stack: Option<usize>,
    pub palette: PaletteConfig,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            width: 1200.0,
            diameter: 6.0,
            gap: 1.0,
            band_height: 14.0,
            margin_left: 150.0,
            margin_right: 20.0,
            margin_top: 20.0,
            margin_bottom: 40.0,
            context_height: 60.0,
            max_stack: None,
            palette: PaletteConfig::default(),
        }
    }
}

impl LayoutConfig {
    fn pitch(&self) -> f64 {
        self.diameter + self.gap
    }

    fn radius(&self) -> f64 {
        self.diameter / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlyphKind {
    Circle,
    Cross,
    Bar,
    AxisTick,
    Label,
    WindowOverlay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    Start,
    Middle,
    End,
}

/// What a glyph was drawn from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Payload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<usize>,
}

/// A mark in a scene.
///
/// Geometry by kind: circles and crosses are centred on `(x, y)` with
/// diameter/arm span `size`; bars, axis ticks and window overlays are
/// rectangles with top-left `(x, y)`, width `size` and height `height`;
/// labels anchor text of font size `size` at `(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Glyph {
    pub kind: GlyphKind,
    pub x: f64,
    pub y: f64,
    pub size: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub height: f64,
    pub fill: Rgba,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Payload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Anchor>,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

impl Glyph {
    fn circle(x: f64, y: f64, size: f64, fill: Rgba, payload: Payload) -> Self {
        Self {
            kind: GlyphKind::Circle,
            x,
            y,
            size,
            height: 0.0,
            fill,
            payload: Some(payload),
            text: None,
            anchor: None,
        }
    }

    fn cross(x: f64, y: f64, size: f64, fill: Rgba, payload: Payload) -> Self {
        Self {
            kind: GlyphKind::Cross,
            payload: Some(payload),
            ..Self::circle(x, y, size, fill, Payload::default())
        }
    }

    fn rect(kind: GlyphKind, x: f64, y: f64, width: f64, height: f64, fill: Rgba) -> Self {
        Self {
            kind,
            x,
            y,
            size: width,
            height,
            fill,
            payload: None,
            text: None,
            anchor: None,
        }
    }

    fn label(x: f64, y: f64, size: f64, fill: Rgba, text: String, anchor: Anchor) -> Self {
        Self {
            kind: GlyphKind::Label,
            x,
            y,
            size,
            height: 0.0,
            fill,
            payload: None,
            text: Some(text),
            anchor: Some(anchor),
        }
    }
}

/// Affine map from sequence position to x: `start -> left`, `end -> right`.
/// A single-position window maps to the midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordinateMap {
    pub start: u32,
    pub end: u32,
    pub left: f64,
    pub right: f64,
}

impl CoordinateMap {
    pub fn x(&self, position: u32) -> f64 {
        if self.end == self.start {
            return (self.left + self.right) / 2.0;
        }
        let t = (position as f64 - self.start as f64) / (self.end as f64 - self.start as f64);
        self.left + t * (self.right - self.left)
    }

    /// Horizontal distance between adjacent positions.
    pub fn step(&self) -> f64 {
        if self.end == self.start {
            self.right - self.left
        } else {
            (self.right - self.left) / (self.end - self.start) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViewKind {
    Distribution,
    Classification,
    Types,
    Context,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub view: ViewKind,
    pub width: f64,
    pub height: f64,
    pub window: Window,
    pub coordinate_map: CoordinateMap,
    /// Band labels top to bottom (row views only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<String>,
    pub glyphs: Vec<Glyph>,
}

impl Scene {
    pub fn count(&self, kind: GlyphKind) -> usize {
        self.glyphs.iter().filter(|g| g.kind == kind).count()
    }

    pub fn glyphs_of(&self, kind: GlyphKind) -> impl Iterator<Item = &Glyph> {
        self.glyphs.iter().filter(move |g| g.kind == kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("row order is not a permutation of {rows} rows")]
    BadPermutation { rows: usize },
    #[error("window {window} does not fit a sequence of length {length}")]
    WindowOutOfRange { window: Window, length: usize },
    #[error("record {record} ({label:?} at {position}) disagrees with the occupancy matrix")]
    MatrixMismatch {
        record: usize,
        label: String,
        position: u32,
    },
}

/// `end <- min(end, len)`, `start <- min(start, end)`.
pub fn clamp_window(window: Window, len: usize) -> Window {
    window.clamp(len)
}

fn check_window(window: Window, len: usize) -> Result<(), LayoutError> {
    if len == 0 || !window.fits(len) {
        return Err(LayoutError::WindowOutOfRange { window, length: len });
    }
    Ok(())
}

fn coordinate_map(window: Window, config: &LayoutConfig) -> CoordinateMap {
    CoordinateMap {
        start: window.start(),
        end: window.end(),
        left: config.margin_left,
        right: config.width - config.margin_right,
    }
}

/// Keeps circle centres unique at the 0.01-unit precision used by the SVG
/// emitter by nudging exact repeats sideways.
#[derive(Default)]
struct Occupied(HashSet<(i64, i64)>);

impl Occupied {
    fn place(&mut self, x: f64, y: f64, min_x: f64, max_x: f64) -> f64 {
        let key = |x: f64| ((x * 100.0).round() as i64, (y * 100.0).round() as i64);
        if self.0.insert(key(x)) {
            return x;
        }
        for step in 1.. {
            for dir in [1.0, -1.0] {
                let candidate = x + dir * step as f64 * 0.01;
                if candidate >= min_x && candidate <= max_x && self.0.insert(key(candidate)) {
                    return candidate;
                }
            }
        }
        unreachable!()
    }
}

/// Centres of `k` circles stacked horizontally around `cx`, shifted inward
/// so the whole stack stays on the canvas.
fn horizontal_stack(cx: f64, k: usize, config: &LayoutConfig, width: f64) -> Vec<f64> {
    let pitch = config.pitch();
    let r = config.radius();
    let half = (k as f64 - 1.0) / 2.0;
    let mut xs: Vec<f64> = (0..k).map(|i| cx + (i as f64 - half) * pitch).collect();
    let lo = xs[0] - r;
    let hi = xs[k - 1] + r;
    let shift = if lo < 0.0 {
        -lo
    } else if hi > width {
        width - hi
    } else {
        0.0
    };
    if shift != 0.0 {
        xs.iter_mut().for_each(|x| *x += shift);
    }
    xs
}

fn x_axis(map: &CoordinateMap, baseline: f64, palette: &Palette, glyphs: &mut Vec<Glyph>) {
    let axis = palette.axis_color;
    glyphs.push(Glyph::rect(
        GlyphKind::AxisTick,
        map.left,
        baseline,
        map.right - map.left,
        1.0,
        axis,
    ));
    for p in tick_positions(map.start, map.end) {
        let x = map.x(p);
        glyphs.push(Glyph::rect(GlyphKind::AxisTick, x - 0.5, baseline, 1.0, 5.0, axis));
        glyphs.push(Glyph::label(
            x,
            baseline + 16.0,
            10.0,
            axis,
            p.to_string(),
            Anchor::Middle,
        ));
    }
}

/// Round-number positions (1, 2 or 5 times a power of ten) inside the window,
/// at most ten of them. A window narrower than one step gets its endpoints.
pub fn tick_positions(start: u32, end: u32) -> Vec<u32> {
    let span = (end - start) as u64;
    let mut step = 1u64;
    'outer: for magnitude in (0..10).map(|e| 10u64.pow(e)) {
        for m in [1, 2, 5] {
            step = m * magnitude;
            if span / step < 10 {
                break 'outer;
            }
        }
    }
    let first = (start as u64).div_ceil(step) * step;
    let ticks: Vec<u32> = (first..=end as u64).step_by(step as usize).map(|p| p as u32).collect();
    if ticks.is_empty() {
        vec![start, end]
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    } else {
        ticks
    }
}

/// Classification view: one band per classification in `order`.
pub fn layout_classification_view(
    matrix: &OccupancyMatrix,
    order: &[usize],
    records: &[ModificationRecord],
    window: Window,
    palette: &Palette,
    config: &LayoutConfig,
) -> Result<Scene, LayoutError> {
    layout_row_view(
        ViewKind::Classification,
        RowKey::Classification,
        matrix,
        order,
        records,
        window,
        palette,
        config,
    )
}

/// Modification-type view: one band per modification type in `order`.
pub fn layout_type_view(
    matrix: &OccupancyMatrix,
    order: &[usize],
    records: &[ModificationRecord],
    window: Window,
    palette: &Palette,
    config: &LayoutConfig,
) -> Result<Scene, LayoutError> {
    layout_row_view(
        ViewKind::Types,
        RowKey::ModType,
        matrix,
        order,
        records,
        window,
        palette,
        config,
    )
}

#[allow(clippy::too_many_arguments)]
fn layout_row_view(
    view: ViewKind,
    key: RowKey,
    matrix: &OccupancyMatrix,
    order: &[usize],
    records: &[ModificationRecord],
    window: Window,
    palette: &Palette,
    config: &LayoutConfig,
) -> Result<Scene, LayoutError> {
    let n_rows = matrix.n_rows();
    let mut seen = vec![false; n_rows];
    if order.len() != n_rows
        || order
            .iter()
            .any(|&r| r >= n_rows || std::mem::replace(&mut seen[r], true))
    {
        return Err(LayoutError::BadPermutation { rows: n_rows });
    }
    check_window(window, matrix.len())?;

    // Record indices per (row, position), in input order.
    let mut cells: HashMap<(usize, u32), Vec<usize>> = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        let label = key.of(r);
        let mismatch = || LayoutError::MatrixMismatch {
            record: i,
            label: label.to_string(),
            position: r.position,
        };
        let row = matrix.row_index(label).ok_or_else(mismatch)?;
        if r.position as usize > matrix.len() {
            return Err(mismatch());
        }
        cells.entry((row, r.position)).or_default().push(i);
    }
    for (&(row, position), idxs) in &cells {
        if matrix.get(row, position as usize - 1) as usize != idxs.len() {
            let i = idxs[0];
            return Err(LayoutError::MatrixMismatch {
                record: i,
                label: key.of(&records[i]).to_string(),
                position,
            });
        }
    }

    let map = coordinate_map(window, config);
    let widest = cells
        .iter()
        .filter(|((_, p), _)| window.contains(*p))
        .map(|(_, v)| stacked_len(v.len(), config))
        .max()
        .unwrap_or(0);
    let width = config.width.max(widest as f64 * config.pitch() + config.diameter);
    let height = config.margin_top + n_rows as f64 * config.band_height + config.margin_bottom;
    let r = config.radius();

    let bands = exec::map_range(n_rows, |band| {
        let row = order[band];
        let label = &matrix.row_labels()[row];
        let y = config.margin_top + (band as f64 + 0.5) * config.band_height;
        let fill = palette.color(label);
        let mut occupied = Occupied::default();
        let mut circles = Vec::new();
        let mut crosses = Vec::new();
        let counts = matrix.row(row);
        for position in window.start()..=window.end() {
            if counts[position as usize - 1] == 0 {
                continue;
            }
            let idxs = &cells[&(row, position)];
            let cx = map.x(position);
            let payload = |record: usize| Payload {
                row: Some(label.clone()),
                position: Some(position),
                record: Some(record),
            };
            let shown = stacked_len(idxs.len(), config);
            for (x, &record) in horizontal_stack(cx, shown, config, width).into_iter().zip(idxs) {
                let x = occupied.place(x, y, r, width - r);
                circles.push(Glyph::circle(x, y, config.diameter, fill, payload(record)));
            }
            if shown < idxs.len() {
                circles.push(count_label(cx, y - config.diameter, position, idxs.len(), palette));
            }
            for &record in idxs.iter().filter(|&&i| records[i].is_mutation) {
                crosses.push(Glyph::cross(
                    cx,
                    y,
                    config.diameter + 2.0,
                    palette.mutation_mark_color,
                    payload(record),
                ));
            }
        }
        (circles, crosses)
    });

    let mut glyphs = Vec::new();
    x_axis(&map, height - config.margin_bottom + 4.0, palette, &mut glyphs);
    for (band, &row) in order.iter().enumerate() {
        let y = config.margin_top + (band as f64 + 0.5) * config.band_height;
        let label = matrix.row_labels()[row].clone();
        glyphs.push(Glyph::label(
            config.margin_left - 8.0,
            y + 3.5,
            10.0,
            palette.axis_color,
            label,
            Anchor::End,
        ));
    }
    let mut crosses = Vec::new();
    for (c, x) in bands {
        glyphs.extend(c);
        crosses.extend(x);
    }
    glyphs.extend(crosses);

    Ok(Scene {
        view,
        width,
        height,
        window,
        coordinate_map: map,
        rows: order.iter().map(|&r| matrix.row_labels()[r].clone()).collect(),
        glyphs,
    })
}

fn stacked_len(k: usize, config: &LayoutConfig) -> usize {
    match config.max_stack {
        Some(cap) if k > cap => 1,
        _ => k,
    }
}

fn count_label(x: f64, y: f64, position: u32, k: usize, palette: &Palette) -> Glyph {
    let mut label = Glyph::label(
        x,
        y.max(8.0),
        8.0,
        palette.axis_color,
        format!("\u{d7}{k}"),
        Anchor::Middle,
    );
    label.payload = Some(Payload {
        row: None,
        position: Some(position),
        record: None,
    });
    label
}

/// Distribution view: records stacked bottom-up over their position, each
/// circle coloured by its record's classification.
pub fn layout_distribution_view(
    records: &[ModificationRecord],
    stats: &crate::analytics::ResidueStats,
    window: Window,
    palette: &Palette,
    config: &LayoutConfig,
) -> Result<Scene, LayoutError> {
    let len = stats.len();
    check_window(window, len)?;

    let mut by_position: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        if window.contains(r.position) {
            by_position.entry(r.position).or_default().push(i);
        }
    }

    let map = coordinate_map(window, config);
    let tallest = by_position
        .values()
        .map(|v| stacked_len(v.len(), config))
        .max()
        .unwrap_or(0);
    let plot_height = (tallest as f64 * config.pitch()).max(config.band_height);
    let height = config.margin_top + plot_height + config.margin_bottom;
    let baseline = height - config.margin_bottom;
    let width = config.width;
    let r = config.radius();

    let columns: Vec<(&u32, &Vec<usize>)> = by_position.iter().collect();
    let stacks = exec::map(&columns, |&(&position, idxs)| {
        let cx = map.x(position);
        let shown = stacked_len(idxs.len(), config);
        let mut circles = Vec::with_capacity(shown);
        let mut crosses = Vec::new();
        for (level, &record) in idxs.iter().take(shown).enumerate() {
            let y = baseline - r - level as f64 * config.pitch();
            let rec = &records[record];
            let payload = Payload {
                row: Some(rec.classification.clone()),
                position: Some(position),
                record: Some(record),
            };
            circles.push(Glyph::circle(
                cx,
                y,
                config.diameter,
                palette.color(&rec.classification),
                payload,
            ));
        }
        if shown < idxs.len() {
            circles.push(count_label(
                cx,
                baseline - config.pitch() - r - 4.0,
                position,
                idxs.len(),
                palette,
            ));
        }
        for (level, &record) in idxs.iter().enumerate().filter(|(_, &i)| records[i].is_mutation) {
            let y = baseline - r - level.min(shown - 1) as f64 * config.pitch();
            let payload = Payload {
                row: Some(records[record].classification.clone()),
                position: Some(position),
                record: Some(record),
            };
            crosses.push(Glyph::cross(
                cx,
                y,
                config.diameter + 2.0,
                palette.mutation_mark_color,
                payload,
            ));
        }
        (circles, crosses)
    });

    let mut glyphs = Vec::new();
    x_axis(&map, baseline + 4.0, palette, &mut glyphs);
    let mut occupied = Occupied::default();
    let mut crosses = Vec::new();
    for (circles, x) in stacks {
        for mut g in circles {
            if g.kind == GlyphKind::Circle {
                g.x = occupied.place(g.x, g.y, r, width - r);
            }
            glyphs.push(g);
        }
        crosses.extend(x);
    }
    glyphs.extend(crosses);

    Ok(Scene {
        view: ViewKind::Distribution,
        width,
        height,
        window,
        coordinate_map: map,
        rows: Vec::new(),
        glyphs,
    })
}

/// Full-sequence overview strip: one bar per modified position (height
/// proportional to its count) and an overlay marking the focus window.
pub fn layout_context_bar(counts: &[u32], window: Window, palette: &Palette, config: &LayoutConfig) -> Scene {
    let len = counts.len().max(1);
    let window = window.clamp(len);
    let full = Window::full(len);
    let map = coordinate_map(full, config);
    let top = 4.0;
    let baseline = config.context_height - 22.0;
    let max = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let bar_width = (map.step() * 0.8).clamp(0.5, 8.0);

    let mut glyphs = Vec::new();
    x_axis(&map, baseline, palette, &mut glyphs);
    for (i, &c) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        let h = c as f64 / max * (baseline - top);
        let x = (map.x(i as u32 + 1) - bar_width / 2.0).clamp(0.0, config.width - bar_width);
        let mut bar = Glyph::rect(GlyphKind::Bar, x, baseline - h, bar_width, h, palette.context_bar_color);
        bar.payload = Some(Payload {
            row: None,
            position: Some(i as u32 + 1),
            record: None,
        });
        glyphs.push(bar);
    }
    let x0 = map.x(window.start());
    let x1 = map.x(window.end());
    let mut overlay = Glyph::rect(
        GlyphKind::WindowOverlay,
        x0,
        0.0,
        x1 - x0,
        baseline,
        palette.window_color,
    );
    if overlay.size < 1.0 {
        overlay.x = (x0 - 0.5).max(0.0);
        overlay.size = 1.0;
    }
    overlay.payload = Some(Payload {
        row: None,
        position: Some(window.start()),
        record: None,
    });
    glyphs.push(overlay);

    Scene {
        view: ViewKind::Context,
        width: config.width,
        height: config.context_height,
        window,
        coordinate_map: map,
        rows: Vec::new(),
        glyphs,
    }
}
