//! Where a graph comes from: a generator spec or an edge-list file.

use std::path::{Path, PathBuf};

use arbcolor::graph::{degeneracy, generate_graph};
use arbcolor::{Graph, GraphSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_context, CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    Spec(GraphSpec),
    File { path: PathBuf, sha256: String },
}

pub struct LoadedGraph {
    pub graph: Graph,
    pub source: GraphSource,
    /// Generator-known arboricity bound, or the degeneracy for files.
    pub default_a: usize,
    pub label: String,
    pub forest_certificate: Option<Vec<usize>>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses `kind:key=value,...`, e.g. `forest_union:a=4,n=1000,seed=3`.
/// `n` may be omitted when the caller supplies it.
pub fn parse_spec(text: &str, n: Option<usize>, seed: Option<u64>) -> CliResult<GraphSpec> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let mut map = serde_json::Map::new();
    map.insert("kind".into(), kind.trim().into());
    for pair in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected key=value in graph spec, got {pair:?}")))?;
        let v: u64 = v.trim().parse().map_err(|_| {
            CliError::Config(format!("graph spec value for {k} must be an integer, got {v:?}"))
        })?;
        map.insert(k.trim().into(), v.into());
    }
    if let Some(n) = n {
        map.insert("n".into(), n.into());
    }
    if let Some(seed) = seed {
        map.entry("seed").or_insert(seed.into());
    }
    serde_json::from_value(map.into()).map_err(|e| CliError::Config(format!("bad graph spec {text:?}: {e}")))
}

pub fn from_spec(spec: GraphSpec) -> CliResult<LoadedGraph> {
    let generated = generate_graph(&spec)?;
    Ok(LoadedGraph {
        default_a: spec.arboricity_bound(),
        label: spec.label(),
        graph: generated.graph,
        source: GraphSource::Spec(spec),
        forest_certificate: generated.forest_certificate,
    })
}

pub fn from_file(path: &Path) -> CliResult<LoadedGraph> {
    let bytes = io_context(std::fs::read(path), path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Io(format!("{}: not UTF-8", path.display())))?;
    let graph =
        arbcolor::io::parse_edge_list(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(LoadedGraph {
        default_a: degeneracy(&graph).max(1),
        label: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        graph,
        source: GraphSource::File {
            path: path.to_owned(),
            sha256: sha256_hex(&bytes),
        },
        forest_certificate: None,
    })
}

/// An existing file is read as an edge list; anything else must be a spec.
pub fn load(arg: &str, seed: Option<u64>) -> CliResult<LoadedGraph> {
    let path = Path::new(arg);
    if path.is_file() {
        return from_file(path);
    }
    if !arg.contains(':') && (arg.contains('/') || arg.ends_with(".txt")) {
        return Err(CliError::Io(format!("{arg}: no such file")));
    }
    from_spec(parse_spec(arg, None, seed)?)
}

/// Per-graph seed derived from the top-level seed and the graph's position.
pub fn derive_seed(seed: u64, index: usize) -> u64 {
    let digest = Sha256::digest(format!("{seed}:{index}").as_bytes());
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use arbcolor::GraphKind;

    #[test]
    fn spec_strings() {
        let s = parse_spec("forest_union:a=4,n=100,seed=3", None, None).unwrap();
        assert_eq!(s, GraphSpec::new(GraphKind::ForestUnion { a: 4 }, 100, 3));
        let s = parse_spec("tree", Some(10), Some(9)).unwrap();
        assert_eq!(s, GraphSpec::new(GraphKind::Tree, 10, 9));
        assert!(parse_spec("tree:n=x", None, None).is_err());
        assert!(parse_spec("nope:n=3", None, None).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_eq!(derive_seed(5, 2), derive_seed(5, 2));
    }
}
