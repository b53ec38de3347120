//! Protein modification analysis and visual encoding.
//!
//! The pipeline runs `ingest` (tables, FASTA, PDB, structure cache) into
//! `analytics` (per-residue counts, distributions, occupancy matrices,
//! repeated patterns), `ordering` (Hamming-distance seriation of matrix
//! rows), `layout` (resolution-independent scenes) and finally `render`
//! (SVG, scene JSON for the web UI, per-residue 3D colourings).
//!
//! With the default `parallel` feature the data-parallel loops run on rayon;
//! build with `--no-default-features` for a purely sequential core. Both
//! produce identical output.

pub mod analytics;
pub mod exec;
pub mod ingest;
pub mod layout;
pub mod model;
pub mod ordering;
pub mod pipeline;
pub mod render;

pub use model::{HotspotBin, ModificationRecord, OccupancyMatrix, ProteinEntry, ValidationReport, Window};
