use std::path::Path;

use modview::ingest::fetch::{DEFAULT_PREDICTED_TEMPLATE, DEFAULT_XRAY_TEMPLATE};
use modview::ingest::UrlTemplates;
use modview::layout::LayoutConfig;
use serde::{Deserialize, Serialize};

use crate::output::{read_text, Failure};

/// Contents of the `--config` JSON file. Every field is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub layout: LayoutConfig,
    /// Whether records flagged as mutations count towards per-residue totals
    /// and hot-spot bins.
    pub include_mutations_in_counts: bool,
    /// Download URL templates; `{id}` is replaced by the structure id.
    pub xray_url: String,
    pub predicted_url: String,
}

impl Default for FileConfig {
    fn default() -> Self {
        Self {
            layout: LayoutConfig::default(),
            include_mutations_in_counts: true,
            xray_url: DEFAULT_XRAY_TEMPLATE.into(),
            predicted_url: DEFAULT_PREDICTED_TEMPLATE.into(),
        }
    }
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = read_text(path)?;
        serde_json::from_str(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
    }

    pub fn templates(&self) -> UrlTemplates {
        UrlTemplates {
            xray: self.xray_url.clone(),
            predicted: self.predicted_url.clone(),
        }
    }
}
