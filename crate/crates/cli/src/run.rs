//! `run`: execute one algorithm and write its artifacts.
//!
//! Layout of a run directory:
//!
//! | file              | contents                                    |
//! |-------------------|---------------------------------------------|
//! | `graph.txt`       | edge list                                   |
//! | `coloring.txt`    | `v c` per vertex                            |
//! | `orientation.txt` | `u v +/-/0` per edge                        |
//! | `witness.txt`     | arbdefect witness, same format              |
//! | `levels.txt`      | H-partition level per vertex, `v l`         |
//! | `forests.txt`     | `u v f` per edge                            |
//! | `mis.txt`         | one member per line                         |
//! | `trace.json`      | round trace                                 |
//! | `run.json`        | [`RunRecord`]                               |

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use arbcolor::io::{format_coloring, format_edge_list, format_orientation};
use arbcolor::{Graph, GraphSpec, RoundTrace};
use serde::{Deserialize, Serialize};

use crate::algo::{colors_used, execute, AlgoParams, Claims, Outcome};
use crate::error::{io_context, CliError, CliResult};
use crate::source::{self, sha256_hex, GraphSource, LoadedGraph};

/// Everything that determines a run. Hashed into `config_hash`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub graph: GraphSource,
    pub a: usize,
    pub epsilon: f64,
    pub algorithm: AlgoParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_cap_factor: Option<f64>,
}

impl RunConfig {
    pub fn hash(&self) -> String {
        sha256_hex(serde_json::to_string(self).unwrap().as_bytes())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub label: String,
    pub config: RunConfig,
    pub config_hash: String,
    pub n: usize,
    pub m: usize,
    pub rounds: usize,
    pub messages: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<usize>,
    pub claims: Claims,
    pub artifacts: Vec<String>,
    #[serde(default)]
    pub details: serde_json::Value,
}

/// Graph entry in an experiment config: a generator spec or a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphEntry {
    File { file: PathBuf },
    Spec(GraphSpec),
}

/// A batch of runs read from `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graphs: Vec<GraphEntry>,
    pub algorithm: AlgoParams,
    /// Arboricity bound; defaults per graph.
    #[serde(default)]
    pub a: Option<usize>,
    #[serde(default = "one")]
    pub epsilon: f64,
    #[serde(default = "one_usize")]
    pub repetitions: usize,
    pub out: PathBuf,
    #[serde(default)]
    pub round_cap_factor: Option<f64>,
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = io_context(std::fs::read_to_string(path), path)?;
        let config: Self =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if config.graphs.is_empty() {
            return Err(CliError::Config("config lists no graphs".into()));
        }
        if config.repetitions == 0 {
            return Err(CliError::Config("repetitions must be positive".into()));
        }
        Ok(config)
    }
}

/// `⌈64·(log₂ n + 1)·factor⌉`.
pub fn round_cap(n: usize, factor: f64) -> usize {
    (64.0 * ((n.max(1) as f64).log2() + 1.0) * factor).ceil() as usize
}

pub struct Execution {
    pub record: RunRecord,
    pub outcome: Outcome,
}

pub fn run_one(
    loaded: &LoadedGraph,
    a: Option<usize>,
    epsilon: f64,
    algorithm: &AlgoParams,
    round_cap_factor: Option<f64>,
) -> CliResult<Execution> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(CliError::Config(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let g = &loaded.graph;
    let a = a.unwrap_or(loaded.default_a);
    if a == 0 {
        return Err(CliError::Config("--a must be positive".into()));
    }
    if let Some(f) = round_cap_factor {
        if !(f.is_finite() && f > 0.0) {
            return Err(CliError::Config(format!(
                "round cap factor must be positive, got {f}"
            )));
        }
    }
    let outcome = execute(g, a, epsilon, algorithm)?;
    if let Some(factor) = round_cap_factor {
        let cap = round_cap(g.n(), factor);
        if outcome.trace.rounds > cap {
            return Err(CliError::RoundCap {
                rounds: outcome.trace.rounds,
                cap,
            });
        }
    }
    let config = RunConfig {
        graph: loaded.source.clone(),
        a,
        epsilon,
        algorithm: algorithm.clone(),
        round_cap_factor,
    };
    let record = RunRecord {
        version: env!("CARGO_PKG_VERSION").to_owned(),
        label: loaded.label.clone(),
        config_hash: config.hash(),
        config,
        n: g.n(),
        m: g.m(),
        rounds: outcome.trace.rounds,
        messages: outcome.trace.messages_sent,
        colors: colors_used(&outcome),
        claims: outcome.claims.clone(),
        artifacts: artifact_names(&outcome),
        details: outcome.details.clone(),
    };
    Ok(Execution { record, outcome })
}

fn artifact_names(out: &Outcome) -> Vec<String> {
    let mut names = vec!["graph.txt".to_owned()];
    let optional = [
        (out.coloring.is_some(), "coloring.txt"),
        (out.orientation.is_some(), "orientation.txt"),
        (out.witness.is_some(), "witness.txt"),
        (out.levels.is_some(), "levels.txt"),
        (out.forest_index.is_some(), "forests.txt"),
        (out.mis.is_some(), "mis.txt"),
    ];
    names.extend(
        optional
            .iter()
            .filter(|(has, _)| *has)
            .map(|(_, n)| n.to_string()),
    );
    names.push("trace.json".into());
    names.push("run.json".into());
    names
}

pub fn format_forests(g: &Graph, index: &[usize]) -> String {
    let mut s = String::new();
    for (&(u, v), f) in g.edges().iter().zip(index) {
        writeln!(s, "{u} {v} {f}").unwrap();
    }
    s
}

fn write(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    io_context(std::fs::write(&path, contents), &path)
}

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).unwrap() + "\n"
}

pub fn write_artifacts(dir: &Path, g: &Graph, exec: &Execution) -> CliResult<()> {
    io_context(std::fs::create_dir_all(dir), dir)?;
    let out = &exec.outcome;
    write(dir, "graph.txt", &format_edge_list(g))?;
    if let Some(c) = &out.coloring {
        write(dir, "coloring.txt", &format_coloring(c))?;
    }
    if let Some(o) = &out.orientation {
        write(dir, "orientation.txt", &format_orientation(o))?;
    }
    if let Some(w) = &out.witness {
        write(dir, "witness.txt", &format_orientation(w))?;
    }
    if let Some(l) = &out.levels {
        write(dir, "levels.txt", &format_coloring(l))?;
    }
    if let Some(f) = &out.forest_index {
        write(dir, "forests.txt", &format_forests(g, f))?;
    }
    if let Some(mis) = &out.mis {
        let text: String = mis.iter().map(|v| format!("{v}\n")).collect();
        write(dir, "mis.txt", &text)?;
    }
    write(dir, "trace.json", &json(&out.trace))?;
    write(dir, "run.json", &json(&exec.record))
}

pub fn summary(record: &RunRecord) -> String {
    let colors = record.colors.map_or(String::new(), |c| format!(", {c} colors"));
    format!(
        "{} {:?}: n={} m={} a={}, {} rounds{colors} [{}]",
        record.label,
        record.config.algorithm.algo,
        record.n,
        record.m,
        record.config.a,
        record.rounds,
        &record.config_hash[..12]
    )
}

/// Runs every graph of a config; repetitions must reproduce each other.
pub fn run_config(config: &ExperimentConfig, seed: Option<u64>) -> CliResult<Vec<RunRecord>> {
    let mut records = Vec::new();
    for (i, entry) in config.graphs.iter().enumerate() {
        let loaded = match entry {
            GraphEntry::File { file } => source::from_file(file)?,
            GraphEntry::Spec(spec) => {
                let mut spec = *spec;
                if let Some(s) = seed {
                    spec.seed = source::derive_seed(s, i);
                }
                source::from_spec(spec)?
            }
        };
        let dir = config.out.join(&loaded.label);
        let mut first: Option<(RunRecord, RoundTrace)> = None;
        for rep in 0..config.repetitions {
            let exec = run_one(
                &loaded,
                config.a,
                config.epsilon,
                &config.algorithm,
                config.round_cap_factor,
            )?;
            match &first {
                None => {
                    write_artifacts(&dir, &loaded.graph, &exec)?;
                    first = Some((exec.record.clone(), exec.outcome.trace.clone()));
                }
                Some((record, trace)) => {
                    if *record != exec.record || *trace != exec.outcome.trace {
                        return Err(CliError::Algorithm(arbcolor::Error::InvariantViolation(format!(
                            "repetition {rep} of {} differs from the first",
                            loaded.label
                        ))));
                    }
                }
            }
        }
        records.push(first.unwrap().0);
    }
    Ok(records)
}

pub fn load_record(dir: &Path) -> CliResult<RunRecord> {
    let path = dir.join("run.json");
    let text = io_context(std::fs::read_to_string(&path), &path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
