//! End-to-end rendering of one protein: matrices, row orders, all scenes,
//! SVG text and the scene document.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::analytics::{self, AnalyticsError, RowKey};
use crate::layout::{self, LayoutConfig, LayoutError, Scene};
use crate::model::{ModificationRecord, OccupancyMatrix, ProteinEntry, Window};
use crate::ordering::{self, OrderingError};
use crate::render::{self, RenderError, SceneDocument, Views};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderMode {
    /// Greedy Hamming seriation.
    #[default]
    Greedy,
    /// First-appearance order.
    None,
}

impl std::str::FromStr for OrderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(OrderMode::Greedy),
            "none" => Ok(OrderMode::None),
            other => Err(format!("unknown order {other:?} (expected greedy or none)")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RenderOptions {
    /// Focus window; clamped to the sequence. Defaults to the whole sequence.
    pub window: Option<Window>,
    pub order: OrderMode,
    pub layout: LayoutConfig,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Ordering(#[from] OrderingError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Render(#[from] RenderError),
}

#[derive(Debug, Clone)]
pub struct RenderedProtein {
    pub document: SceneDocument,
    pub distribution_svg: String,
    pub classification_svg: String,
    pub types_svg: String,
    pub warnings: Vec<String>,
}

/// Row permutation for a matrix under `mode`; empty matrices give an empty order.
pub fn row_order(matrix: &OccupancyMatrix, mode: OrderMode) -> Result<Vec<usize>, OrderingError> {
    match mode {
        _ if matrix.n_rows() == 0 => Ok(Vec::new()),
        OrderMode::Greedy => ordering::seriate_rows(matrix),
        OrderMode::None => Ok((0..matrix.n_rows()).collect()),
    }
}

/// Builds the three focus views and the context bar.
pub fn build_scenes(
    records: &[ModificationRecord],
    len: usize,
    options: &RenderOptions,
) -> Result<(Views, Scene, layout::Palette, Vec<String>), PipelineError> {
    let window = options.window.unwrap_or(Window::full(len)).clamp(len);
    let config = &options.layout;
    let stats = analytics::residue_counts(records, len)?;
    let classes = analytics::occupancy_matrix(records, RowKey::Classification, len)?;
    let types = analytics::occupancy_matrix(records, RowKey::ModType, len)?;
    let class_order = row_order(&classes, options.order)?;
    let type_order = row_order(&types, options.order)?;

    let (palette, warning) = layout::assign_palette(&layout::palette_categories(records), &config.palette);
    let warnings = warning.into_iter().map(|w| w.to_string()).collect();

    let views = Views {
        distribution: layout::layout_distribution_view(records, &stats, window, &palette, config)?,
        classification: layout::layout_classification_view(&classes, &class_order, records, window, &palette, config)?,
        types: layout::layout_type_view(&types, &type_order, records, window, &palette, config)?,
    };
    let context = layout::layout_context_bar(&stats.counts, window, &palette, config);
    Ok((views, context, palette, warnings))
}

/// Renders one protein. `records` must all belong to `entry`.
pub fn render_protein(
    entry: &ProteinEntry,
    records: &[ModificationRecord],
    options: &RenderOptions,
) -> Result<RenderedProtein, PipelineError> {
    let len = entry.len();
    let (views, context, palette, warnings) = build_scenes(records, len, options)?;
    let distribution_svg = render::emit_svg(&views.distribution);
    let classification_svg = render::emit_svg(&views.classification);
    let types_svg = render::emit_svg(&views.types);
    let document = SceneDocument::new(
        &entry.accession,
        len,
        &entry.name,
        &entry.species,
        palette,
        views,
        context,
        records.to_vec(),
    )?;
    Ok(RenderedProtein {
        document,
        distribution_svg,
        classification_svg,
        types_svg,
        warnings,
    })
}

/// Splits records by accession, keeping input order within each group.
pub fn group_by_accession(records: &[ModificationRecord]) -> BTreeMap<String, Vec<ModificationRecord>> {
    let mut out: BTreeMap<String, Vec<ModificationRecord>> = BTreeMap::new();
    for r in records {
        out.entry(r.accession.clone()).or_default().push(r.clone());
    }
    out
}
