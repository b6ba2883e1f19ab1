//! `verify`: re-check a run directory's claims from its files alone.

use std::path::Path;

use arbcolor::graph::degeneracy;
use arbcolor::io::{parse_coloring, parse_edge_list, parse_orientation};
use arbcolor::verify::{check_coloring, validate_orientation, CertificateReport, Claim};
use arbcolor::{Coloring, Graph, PartialOrientation};
use serde::{Deserialize, Serialize};

use crate::error::{io_context, CliError, CliResult};
use crate::run::{json, load_record};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Certificate {
    pub config_hash: String,
    pub passed: bool,
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<CertificateReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<CertificateReport>,
}

fn read(dir: &Path, name: &str) -> CliResult<String> {
    let path = dir.join(name);
    io_context(std::fs::read_to_string(&path), &path)
}

fn parsed<T>(r: arbcolor::Result<T>, name: &str) -> CliResult<T> {
    r.map_err(|e| CliError::Io(format!("{name}: {e}")))
}

fn orientation(dir: &Path, g: &Graph, name: &str) -> CliResult<PartialOrientation> {
    parsed(parse_orientation(g, &read(dir, name)?), name)
}

fn coloring(dir: &Path, g: &Graph, name: &str) -> CliResult<Coloring> {
    parsed(parse_coloring(g.n(), &read(dir, name)?), name)
}

pub fn verify_dir(dir: &Path, graph_file: Option<&Path>) -> CliResult<Certificate> {
    let record = load_record(dir)?;
    let g = match graph_file {
        Some(path) => {
            let text = io_context(std::fs::read_to_string(path), path)?;
            parsed(parse_edge_list(&text), &path.display().to_string())?
        }
        None => parsed(parse_edge_list(&read(dir, "graph.txt")?), "graph.txt")?,
    };
    let claims = &record.claims;
    let mut cert = Certificate {
        config_hash: record.config_hash.clone(),
        ..Certificate::default()
    };
    if claims.legal || claims.defect.is_some() || claims.arbdefect.is_some() || claims.palette.is_some() {
        let c = coloring(dir, &g, "coloring.txt")?;
        // The witness orients exactly the intra-class edges.
        let witness = match claims.arbdefect {
            Some(_) => {
                let intra = g.filter_edges(|u, v| c.color(u) == c.color(v));
                match parse_orientation(&intra, &read(dir, "witness.txt")?) {
                    Ok(w) => Some(w),
                    Err(e) => {
                        cert.failures.push(format!("witness: {e}"));
                        None
                    }
                }
            }
            None => None,
        };
        let mut list = Vec::new();
        if claims.legal {
            list.push(Claim::Legal);
        }
        if let Some(m) = claims.defect {
            list.push(Claim::Defect(m));
        }
        if let (Some(bound), Some(w)) = (claims.arbdefect, &witness) {
            list.push(Claim::Arbdefect {
                bound,
                witness: Some(w),
            });
        }
        let report = check_coloring(&g, &c, &list)?;
        for f in &report.failures {
            cert.failures.push(format!("coloring: {f}"));
        }
        if let Some(p) = claims.palette {
            if c.palette_size() as usize > p {
                cert.failures.push(format!(
                    "coloring uses color {} beyond palette {p}",
                    c.palette_size()
                ));
            }
        }
        cert.coloring = Some(report);
    }

    if let Some(oc) = &claims.orientation {
        let sigma = orientation(dir, &g, "orientation.txt")?;
        let report = validate_orientation(&g, &sigma, oc);
        for f in &report.failures {
            cert.failures.push(format!("orientation: {f}"));
        }
        cert.orientation = Some(report);
    }

    if let Some(bound) = claims.upward_degree {
        let levels = coloring(dir, &g, "levels.txt")?;
        for v in g.vertices() {
            let up = g
                .neighbors(v)
                .iter()
                .filter(|&&w| levels.color(w) >= levels.color(v))
                .count();
            if up > bound {
                cert.failures.push(format!(
                    "vertex {v} has {up} neighbours at its level or above, bound {bound}"
                ));
                break;
            }
        }
    }

    if let Some(count) = claims.forests {
        check_forests(&g, &read(dir, "forests.txt")?, count, &mut cert.failures)?;
    }

    if claims.mis {
        let text = read(dir, "mis.txt")?;
        let mut inside = vec![false; g.n() + 1];
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let v: usize = line.trim().parse().map_err(|_| {
                CliError::Io(format!("mis.txt line {}: expected a vertex, got {line:?}", i + 1))
            })?;
            if v == 0 || v > g.n() {
                return Err(CliError::Io(format!(
                    "mis.txt line {}: vertex {v} out of range",
                    i + 1
                )));
            }
            inside[v] = true;
        }
        if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| inside[u] && inside[v]) {
            cert.failures.push(format!("mis: adjacent members {u} and {v}"));
        }
        if let Some(v) = g
            .vertices()
            .find(|&v| !inside[v] && g.neighbors(v).iter().all(|&w| !inside[w]))
        {
            cert.failures.push(format!("mis: vertex {v} could be added"));
        }
    }

    cert.passed = cert.failures.is_empty();
    let path = dir.join("certificate.json");
    io_context(std::fs::write(&path, json(&cert)), &path)?;
    Ok(cert)
}

fn check_forests(g: &Graph, text: &str, count: usize, failures: &mut Vec<String>) -> CliResult<()> {
    let mut forests: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    let mut seen = 0;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Io(format!("forests.txt line {}: {line:?}", i + 1)))?;
        let &[u, v, f] = nums.as_slice() else {
            return Err(CliError::Io(format!(
                "forests.txt line {}: expected `u v f`",
                i + 1
            )));
        };
        if !g.has_edge(u, v) {
            failures.push(format!("forests: ({u}, {v}) is not an edge"));
            continue;
        }
        if f == 0 || f > count {
            failures.push(format!(
                "forests: edge ({u}, {v}) in forest {f} outside 1..={count}"
            ));
            continue;
        }
        forests[f - 1].push((u, v));
        seen += 1;
    }
    if seen != g.m() {
        failures.push(format!("forests: {seen} edges listed, graph has {}", g.m()));
    }
    for (i, edges) in forests.into_iter().enumerate() {
        match Graph::from_edges(g.n(), edges) {
            Ok(forest) if degeneracy(&forest) > 1 => {
                failures.push(format!("forests: forest {} has a cycle", i + 1))
            }
            Ok(_) => {}
            Err(e) => failures.push(format!("forests: forest {}: {e}", i + 1)),
        }
    }
    Ok(())
}
