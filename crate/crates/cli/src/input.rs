use std::path::{Path, PathBuf};

use treelattice::fixtures;
use treelattice::graph::{parse_graph, Graph};

use crate::{Failure, EXIT_IO};

/// Overrides where bare fixture names are looked up.
pub const FIXTURE_DIR_VAR: &str = "TREELAT_FIXTURE_DIR";

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_IO,
        kind: "io",
        message: format!("{}: {e}", path.display()),
    })
}

/// Reads a graph from `arg`. A path that does not exist is looked up in
/// the fixture directory, then among the bundled fixtures, with or without
/// its `.graph` extension.
pub fn load_graph(arg: &Path) -> Result<Graph, Failure> {
    let text = if arg.exists() {
        read(arg)?
    } else if let Some(found) = in_fixture_dir(arg) {
        read(&found)?
    } else {
        let name = arg.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        let name = name.strip_suffix(".graph").unwrap_or(name);
        match fixtures::source(name) {
            Some(text) => text.to_string(),
            None => read(arg)?,
        }
    };
    parse_graph(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", arg.display(), f.message);
        f
    })
}

fn in_fixture_dir(arg: &Path) -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os(FIXTURE_DIR_VAR)?);
    let name = arg.file_name()?;
    let plain = dir.join(name);
    if plain.exists() {
        return Some(plain);
    }
    let with_ext = dir.join(format!("{}.graph", name.to_string_lossy()));
    with_ext.exists().then_some(with_ext)
}
