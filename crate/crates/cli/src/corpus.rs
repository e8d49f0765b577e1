use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use psdl::interp::SceneTemplate;
use psdl::lang::{parse, Program};

/// A template and its program, loaded from `<name>.json` and `<name>.psdl`.
#[derive(Clone, Debug)]
pub struct Scene {
    pub name: String,
    pub template: SceneTemplate,
    pub program: Program,
}

pub fn read_template(path: &Path) -> Result<SceneTemplate> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let t: SceneTemplate =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    t.validate().with_context(|| format!("validating {}", path.display()))?;
    Ok(t)
}

/// Every template in `dir` that has a matching program, sorted by name.
pub fn load_corpus(dir: &Path) -> Result<Vec<Scene>> {
    let mut names = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                names.push(stem.to_string());
            }
        }
    }
    names.sort();
    let mut scenes = Vec::with_capacity(names.len());
    for name in names {
        let program_path = dir.join(format!("{name}.psdl"));
        if !program_path.exists() {
            bail!("{} has no matching program", dir.join(format!("{name}.json")).display());
        }
        let template = read_template(&dir.join(format!("{name}.json")))?;
        let source = fs::read_to_string(&program_path)
            .with_context(|| format!("reading {}", program_path.display()))?;
        let program =
            parse(&source).with_context(|| format!("parsing {}", program_path.display()))?;
        scenes.push(Scene {
            name,
            template,
            program,
        });
    }
    Ok(scenes)
}
