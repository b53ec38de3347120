//! Download-once structure cache.
//!
//! Files live at `<cache_dir>/<kind>/<id>.pdb`. A cached file is never
//! fetched again; new downloads are written to a temp file in the same
//! directory and renamed into place.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::pdb::SourceKind;

pub const DEFAULT_XRAY_TEMPLATE: &str = "https://files.rcsb.org/download/{id}.pdb";
pub const DEFAULT_PREDICTED_TEMPLATE: &str = "https://alphafold.ebi.ac.uk/files/AF-{id}-F1-model_v4.pdb";

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("not found")]
    NotFound,
    #[error("{0}")]
    Other(String),
}

/// Minimal HTTP GET used by [`Fetcher`]; swap in a stub for tests.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError>;
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("{id}: not found at {url}")]
    NotFound { id: String, url: String },
    #[error("{id}: network error fetching {url}: {message}")]
    NetworkError { id: String, url: String, message: String },
    #[error("{id}: checksum mismatch (expected {expected}, got {actual})")]
    ChecksumMismatch {
        id: String,
        expected: String,
        actual: String,
    },
    #[error("invalid structure id {0:?}")]
    InvalidId(String),
    #[error("cache I/O error at {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrlTemplates {
    pub xray: String,
    pub predicted: String,
}

impl Default for UrlTemplates {
    fn default() -> Self {
        Self {
            xray: DEFAULT_XRAY_TEMPLATE.to_string(),
            predicted: DEFAULT_PREDICTED_TEMPLATE.to_string(),
        }
    }
}

impl UrlTemplates {
    /// Substitutes `{id}` into the template for `kind`.
    pub fn url(&self, id: &str, kind: SourceKind) -> String {
        let template = match kind {
            SourceKind::XRay => &self.xray,
            SourceKind::Predicted => &self.predicted,
        };
        template.replace("{id}", id)
    }
}

pub struct Fetcher<T> {
    cache_dir: PathBuf,
    templates: UrlTemplates,
    transport: T,
    digests: HashMap<String, String>,
}

impl<T: Transport> Fetcher<T> {
    pub fn new(cache_dir: impl Into<PathBuf>, transport: T) -> Self {
        Self {
            cache_dir: cache_dir.into(),
            templates: UrlTemplates::default(),
            transport,
            digests: HashMap::new(),
        }
    }

    pub fn with_templates(mut self, templates: UrlTemplates) -> Self {
        self.templates = templates;
        self
    }

    /// Expected SHA-256 (hex) for an id; checked on download.
    pub fn with_digest(mut self, id: impl Into<String>, sha256_hex: impl Into<String>) -> Self {
        self.digests.insert(id.into(), sha256_hex.into().to_ascii_lowercase());
        self
    }

    pub fn templates(&self) -> &UrlTemplates {
        &self.templates
    }

    pub fn cache_path(&self, id: &str, kind: SourceKind) -> PathBuf {
        self.cache_dir.join(kind.cache_dir_name()).join(format!("{id}.pdb"))
    }

    /// Returns the cached path for `id`, downloading it first if needed.
    pub fn fetch_structure(&self, id: &str, kind: SourceKind) -> Result<PathBuf, FetchError> {
        if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(FetchError::InvalidId(id.to_string()));
        }
        let path = self.cache_path(id, kind);
        if path.is_file() {
            return Ok(path);
        }

        let url = self.templates.url(id, kind);
        let body = self.transport.get(&url).map_err(|e| match e {
            TransportError::NotFound => FetchError::NotFound {
                id: id.to_string(),
                url: url.clone(),
            },
            TransportError::Other(message) => FetchError::NetworkError {
                id: id.to_string(),
                url: url.clone(),
                message,
            },
        })?;

        if let Some(expected) = self.digests.get(id) {
            let actual = hex::encode(Sha256::digest(&body));
            if &actual != expected {
                return Err(FetchError::ChecksumMismatch {
                    id: id.to_string(),
                    expected: expected.clone(),
                    actual,
                });
            }
        }

        write_atomically(&path, &body)?;
        Ok(path)
    }
}

fn write_atomically(path: &Path, body: &[u8]) -> Result<(), FetchError> {
    let io_err = |source| FetchError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().expect("cache path has a parent");
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(body).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Blocking HTTP transport.
#[cfg(feature = "http")]
#[derive(Debug, Clone, Default)]
pub struct HttpTransport;

#[cfg(feature = "http")]
impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError> {
        match ureq::get(url).call() {
            Ok(mut response) => response
                .body_mut()
                .with_config()
                .limit(256 * 1024 * 1024)
                .read_to_vec()
                .map_err(|e| TransportError::Other(e.to_string())),
            Err(ureq::Error::StatusCode(404)) => Err(TransportError::NotFound),
            Err(e) => Err(TransportError::Other(e.to_string())),
        }
    }
}
