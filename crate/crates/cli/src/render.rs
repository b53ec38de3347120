use std::path::Path;

use clap::ValueEnum;
use modview::exec;
use modview::pipeline::{render_protein, RenderOptions};
use modview::render::{emit_scene_json, SceneDocument};

use crate::inputs::Protein;
use crate::output::{write_atomic, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ViewArg {
    Dist,
    Class,
    Type,
    All,
}

impl ViewArg {
    fn wants(self, view: ViewArg) -> bool {
        self == ViewArg::All || self == view
    }
}

/// Writes the selected SVGs and `<ACC>.scene.json` for every protein.
pub fn run(
    proteins: &[Protein],
    out: &Path,
    view: ViewArg,
    options: &RenderOptions,
) -> (Vec<SceneDocument>, Vec<(String, Failure)>) {
    let results = exec::map_coarse(proteins, |p| {
        let acc = &p.entry.accession;
        let rendered = render_protein(&p.entry, &p.records, options).map_err(|e| Failure::validation(e.to_string()))?;
        for w in &rendered.warnings {
            eprintln!("warning: {acc}: {w}");
        }
        let svgs = [
            (ViewArg::Dist, "distribution", &rendered.distribution_svg),
            (ViewArg::Class, "classification", &rendered.classification_svg),
            (ViewArg::Type, "types", &rendered.types_svg),
        ];
        for (which, name, svg) in svgs {
            if view.wants(which) {
                write_atomic(out, &format!("{acc}.{name}.svg"), svg.as_bytes())?;
            }
        }
        write_atomic(
            out,
            &format!("{acc}.scene.json"),
            emit_scene_json(&rendered.document).as_bytes(),
        )?;
        Ok(rendered.document)
    });
    let mut docs = Vec::new();
    let mut failures = Vec::new();
    for (p, r) in proteins.iter().zip(results) {
        match r {
            Ok(doc) => docs.push(doc),
            Err(f) => failures.push((p.entry.accession.clone(), f)),
        }
    }
    (docs, failures)
}
