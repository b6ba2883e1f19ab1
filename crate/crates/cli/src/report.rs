//! `report`: tables of colors against `a` and rounds against `n`.
//!
//! With `--input`, aggregates every `run.json` and `sweep.json` below a
//! directory. Without it, runs the standard tradeoff grid on forest unions.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::algo::{Algo, AlgoParams, Growth};
use crate::error::{io_context, CliResult};
use crate::run::{run_one, RunRecord};
use crate::source::{derive_seed, from_spec, parse_spec};
use crate::sweep::{sweep, Axis, SweepArgs, SweepResult};

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub graph: String,
    pub algorithm: String,
    pub n: usize,
    pub a: usize,
    pub colors: Option<usize>,
    pub rounds: usize,
}

pub struct Report {
    pub rows: Vec<Row>,
    pub sweeps: Vec<SweepResult>,
}

fn algo_name(p: &AlgoParams) -> String {
    let mut s = serde_json::to_value(p.algo)
        .unwrap()
        .as_str()
        .unwrap_or_default()
        .to_owned();
    let extra: Vec<String> = [
        p.p.map(|x| format!("p={x}")),
        p.t.map(|x| format!("t={x}")),
        p.k.map(|x| format!("k={x}")),
        p.d.map(|x| format!("d={x}")),
        p.mu.map(|x| format!("mu={x}")),
        p.eta.map(|x| format!("eta={x}")),
        p.f.map(|x| {
            format!(
                "f={}",
                serde_json::to_value(x).unwrap().as_str().unwrap_or_default()
            )
        }),
        p.g.map(|x| {
            format!(
                "g={}",
                serde_json::to_value(x).unwrap().as_str().unwrap_or_default()
            )
        }),
    ]
    .into_iter()
    .flatten()
    .collect();
    if !extra.is_empty() {
        s += &format!("({})", extra.join(","));
    }
    s
}

fn row(r: &RunRecord) -> Row {
    Row {
        graph: r.label.clone(),
        algorithm: algo_name(&r.config.algorithm),
        n: r.n,
        a: r.config.a,
        colors: r.colors,
        rounds: r.rounds,
    }
}

fn collect(dir: &Path, runs: &mut Vec<PathBuf>, sweeps: &mut Vec<PathBuf>) -> CliResult<()> {
    let mut entries: Vec<_> = io_context(std::fs::read_dir(dir), dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    entries.sort();
    for path in entries {
        if path.is_dir() {
            collect(&path, runs, sweeps)?;
        } else if path.file_name().is_some_and(|n| n == "run.json") {
            runs.push(path);
        } else if path.file_name().is_some_and(|n| n == "sweep.json") {
            sweeps.push(path);
        }
    }
    Ok(())
}

pub fn aggregate(input: &Path) -> CliResult<Report> {
    let (mut runs, mut sweeps) = (Vec::new(), Vec::new());
    collect(input, &mut runs, &mut sweeps)?;
    let parse_err =
        |p: &Path, e: serde_json::Error| crate::error::CliError::Io(format!("{}: {e}", p.display()));
    let mut rows = Vec::new();
    for path in runs {
        let text = io_context(std::fs::read_to_string(&path), &path)?;
        let record: RunRecord = serde_json::from_str(&text).map_err(|e| parse_err(&path, e))?;
        rows.push(row(&record));
    }
    let mut results = Vec::new();
    for path in sweeps {
        let text = io_context(std::fs::read_to_string(&path), &path)?;
        results.push(serde_json::from_str(&text).map_err(|e| parse_err(&path, e))?);
    }
    Ok(Report {
        rows,
        sweeps: results,
    })
}

fn standard_algorithms() -> Vec<AlgoParams> {
    let with = |algo, f: &dyn Fn(&mut AlgoParams)| {
        let mut p = AlgoParams::new(algo);
        f(&mut p);
        p
    };
    vec![
        AlgoParams::new(Algo::Be08),
        with(Algo::LengthColoring, &|_| {}),
        with(Algo::Eta, &|p| p.eta = Some(0.5)),
        with(Algo::Eta, &|p| p.eta = Some(0.34)),
        with(Algo::Tradeoff, &|p| p.f = Some(Growth::Loglog2)),
        with(Algo::FastG, &|p| {
            p.eta = Some(0.5);
            p.g = Some(Growth::Loglog2)
        }),
        with(Algo::Scaled, &|p| {
            p.t = Some(2);
            p.mu = Some(0.5)
        }),
    ]
}

/// Colors against `a` at fixed `n`, then rounds against `n` at `a = 4`.
pub fn tradeoff_grid(n: usize, seed: u64, epsilon: f64) -> CliResult<Report> {
    let mut rows = Vec::new();
    for (i, a) in [2usize, 4, 8, 16, 32].into_iter().enumerate() {
        let spec = parse_spec(
            &format!("forest_union:a={a}"),
            Some(n),
            Some(derive_seed(seed, i)),
        )?;
        let loaded = from_spec(spec)?;
        for params in standard_algorithms() {
            let exec = run_one(&loaded, Some(a), epsilon, &params, None)?;
            rows.push(row(&exec.record));
        }
    }
    let mut sweeps = Vec::new();
    for params in [AlgoParams::new(Algo::Be08), {
        let mut p = AlgoParams::new(Algo::PartialOrientation);
        p.t = Some(2);
        p
    }] {
        sweeps.push(sweep(&SweepArgs {
            graph: "layered_forests:a=4,branching=5",
            axis: Axis::N,
            from: 256,
            to: 8192,
            epsilon,
            seed: Some(seed),
            algorithm: &params,
        })?);
    }
    Ok(Report { rows, sweeps })
}

pub fn markdown(report: &Report) -> String {
    let mut s = String::new();
    if !report.rows.is_empty() {
        s += "## Colors and rounds\n\n| graph | algorithm | n | a | colors | rounds |\n|---|---|---|---|---|---|\n";
        for r in &report.rows {
            let colors = r.colors.map_or("-".into(), |c| c.to_string());
            s += &format!(
                "| {} | {} | {} | {} | {colors} | {} |\n",
                r.graph, r.algorithm, r.n, r.a, r.rounds
            );
        }
    }
    for sw in &report.sweeps {
        s += &format!(
            "\n## Sweep of {} over {:?}: {}\n\n",
            algo_name(&sw.algorithm),
            sw.axis,
            sw.graph
        );
        s += &crate::sweep::table(sw);
    }
    s
}

pub fn csv(report: &Report) -> String {
    let mut s = String::from("graph,algorithm,n,a,colors,rounds\n");
    for r in &report.rows {
        let colors = r.colors.map_or(String::new(), |c| c.to_string());
        s += &format!(
            "{},\"{}\",{},{},{colors},{}\n",
            r.graph, r.algorithm, r.n, r.a, r.rounds
        );
    }
    s
}
