//! Maps `--algo` and its parameters onto library calls.

use arbcolor::arbdefective::arbdefective_coloring;
use arbcolor::decomposition::{be08_legal_coloring, forests_decomposition, h_partition};
use arbcolor::legal::{
    coloring_driver, legal_coloring, mis_from_coloring, DriverConfig, DriverMode, GrowthFn,
};
use arbcolor::orientation::{color_from_orientation, complete_orientation, partial_orientation};
use arbcolor::recolor::{arb_kuhn, defective_coloring};
use arbcolor::verify::OrientationClaims;
use arbcolor::{degree_bound, Coloring, Graph, PartialOrientation, RoundTrace, VertexId};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    HPartition,
    Forests,
    Be08,
    CompleteOrientation,
    PartialOrientation,
    LengthColoring,
    Defective,
    Arbdefective,
    ArbKuhn,
    Legal,
    LegalOa,
    Superlog,
    Tradeoff,
    Eta,
    FastG,
    Scaled,
    Mis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Growth {
    Loglog2,
    Log3,
    Identity,
}

impl From<Growth> for GrowthFn {
    fn from(g: Growth) -> Self {
        match g {
            Growth::Loglog2 => GrowthFn::LogLogSquared,
            Growth::Log3 => GrowthFn::LogCubed,
            Growth::Identity => GrowthFn::Identity,
        }
    }
}

/// Algorithm choice and its parameters; shared by flags and config files.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct AlgoParams {
    #[arg(long, value_enum)]
    pub algo: Algo,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Growth function for `tradeoff`.
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Growth>,
    /// Growth function for `fast-g`.
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Growth>,
}

impl AlgoParams {
    pub fn new(algo: Algo) -> Self {
        Self {
            algo,
            p: None,
            t: None,
            k: None,
            d: None,
            mu: None,
            eta: None,
            f: None,
            g: None,
        }
    }
}

/// What the producer claims; `verify` re-checks each entry from files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Claims {
    #[serde(default)]
    pub legal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub palette: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arbdefect: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<OrientationClaims>,
    /// Every vertex has at most this many neighbours at its level or above.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upward_degree: Option<usize>,
    /// Number of forests in a forests decomposition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forests: Option<usize>,
    #[serde(default)]
    pub mis: bool,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub coloring: Option<Coloring>,
    pub orientation: Option<PartialOrientation>,
    pub witness: Option<PartialOrientation>,
    /// H-partition levels, written in the coloring format.
    pub levels: Option<Coloring>,
    pub forest_index: Option<Vec<usize>>,
    pub mis: Option<Vec<VertexId>>,
    pub trace: RoundTrace,
    pub claims: Claims,
    /// Algorithm-specific details for run.json.
    pub details: serde_json::Value,
}

fn need<T: Copy>(x: Option<T>, flag: &str, algo: Algo) -> CliResult<T> {
    x.ok_or_else(|| CliError::Config(format!("--{flag} is required for {algo:?}")))
}

fn legal_claims(c: &Coloring) -> Claims {
    Claims {
        legal: true,
        palette: Some(c.palette_size() as usize),
        ..Claims::default()
    }
}

pub fn execute(g: &Graph, a: usize, epsilon: f64, params: &AlgoParams) -> CliResult<Outcome> {
    let algo = params.algo;
    let bound = degree_bound(a, epsilon);
    let driver = |mode| -> CliResult<Outcome> {
        let config = DriverConfig { mode, epsilon };
        let run = coloring_driver(g, a, &config)?;
        Ok(Outcome {
            claims: legal_claims(&run.coloring),
            details: serde_json::json!({ "driver": config, "log": run.log }),
            coloring: Some(run.coloring),
            trace: run.trace,
            ..Outcome::default()
        })
    };
    let out = match algo {
        Algo::HPartition => {
            let (hp, trace) = h_partition(g, a, epsilon)?;
            let levels = Coloring::new(hp.level.map(|_, &l| l as u32), hp.levels.max(1) as u32)?;
            Outcome {
                levels: Some(levels),
                trace,
                claims: Claims {
                    upward_degree: Some(bound),
                    ..Claims::default()
                },
                details: serde_json::json!({ "levels": hp.levels }),
                ..Outcome::default()
            }
        }
        Algo::Forests => {
            let (fd, trace) = forests_decomposition(g, a, epsilon)?;
            Outcome {
                claims: Claims {
                    forests: Some(fd.forests),
                    orientation: Some(OrientationClaims {
                        acyclic: true,
                        complete: true,
                        out_degree: Some(bound),
                        ..OrientationClaims::default()
                    }),
                    ..Claims::default()
                },
                details: serde_json::json!({ "forests": fd.forests }),
                forest_index: Some(fd.forest_index),
                orientation: Some(fd.orientation),
                trace,
                ..Outcome::default()
            }
        }
        Algo::Be08 => {
            let (c, trace) = be08_legal_coloring(g, a, epsilon)?;
            Outcome {
                claims: Claims {
                    palette: Some(bound + 1),
                    ..legal_claims(&c)
                },
                coloring: Some(c),
                trace,
                ..Outcome::default()
            }
        }
        Algo::CompleteOrientation | Algo::PartialOrientation => {
            let (run, deficit, complete) = if algo == Algo::CompleteOrientation {
                (complete_orientation(g, a, epsilon)?, 0, true)
            } else {
                let t = need(params.t, "t", algo)?;
                (partial_orientation(g, a, t, epsilon)?, a / t.max(1), false)
            };
            let metrics = run.orientation.metrics()?;
            Outcome {
                claims: Claims {
                    orientation: Some(OrientationClaims {
                        acyclic: true,
                        complete,
                        out_degree: Some(bound),
                        deficit: Some(deficit),
                        length: Some(metrics.length),
                    }),
                    ..Claims::default()
                },
                details: serde_json::to_value(metrics).unwrap(),
                levels: Some(Coloring::new(
                    run.partition.level.map(|_, &l| l as u32),
                    run.partition.levels.max(1) as u32,
                )?),
                orientation: Some(run.orientation),
                trace: run.trace,
                ..Outcome::default()
            }
        }
        Algo::LengthColoring => {
            let run = complete_orientation(g, a, epsilon)?;
            let (c, trace) = color_from_orientation(&run.orientation)?;
            let length = run.orientation.metrics()?.length;
            Outcome {
                claims: Claims {
                    palette: Some(length + 1),
                    orientation: Some(OrientationClaims {
                        acyclic: true,
                        complete: true,
                        length: Some(length),
                        ..OrientationClaims::default()
                    }),
                    ..legal_claims(&c)
                },
                coloring: Some(c),
                orientation: Some(run.orientation),
                trace: run.trace.then(trace),
                ..Outcome::default()
            }
        }
        Algo::Defective => {
            let delta = g.max_degree();
            let run = match (params.p, params.d) {
                (Some(p), _) => defective_coloring(g, delta, p)?,
                (None, Some(d)) => arbcolor::recolor::defective_coloring_with_defect(g, delta, d)?,
                (None, None) => return Err(CliError::Config("--p or --d is required for Defective".into())),
            };
            let defect = params.p.map_or(params.d.unwrap_or(0), |p| delta / p.max(1));
            Outcome {
                claims: Claims {
                    defect: Some(defect),
                    palette: Some(run.coloring.palette_size() as usize),
                    ..Claims::default()
                },
                details: serde_json::json!({ "max_degree": delta, "steps": run.steps }),
                coloring: Some(run.coloring),
                trace: run.trace,
                ..Outcome::default()
            }
        }
        Algo::Arbdefective => {
            let k = need(params.k, "k", algo)?;
            let t = params.t.unwrap_or(k);
            let (res, trace) = arbdefective_coloring(g, a, k, t, epsilon)?;
            Outcome {
                claims: Claims {
                    arbdefect: Some(res.bound),
                    palette: Some(k),
                    ..Claims::default()
                },
                details: serde_json::json!({ "k": k, "t": t }),
                coloring: Some(res.coloring),
                orientation: Some(res.orientation),
                witness: Some(res.witness),
                trace,
                ..Outcome::default()
            }
        }
        Algo::ArbKuhn => {
            let d = need(params.d, "d", algo)?;
            let orient = complete_orientation(g, a, epsilon)?;
            let run = arb_kuhn(g, &orient.orientation, bound, d)?;
            let c = run.coloring;
            let witness = orient.orientation.restrict(|u, v| c.color(u) == c.color(v));
            Outcome {
                claims: Claims {
                    arbdefect: Some(d),
                    palette: Some(c.palette_size() as usize),
                    ..Claims::default()
                },
                details: serde_json::json!({ "steps": run.steps }),
                coloring: Some(c),
                orientation: Some(orient.orientation),
                witness: Some(witness),
                trace: orient.trace.then(run.trace),
                ..Outcome::default()
            }
        }
        Algo::Legal => {
            let p = need(params.p, "p", algo)?;
            let run = legal_coloring(g, a, p, epsilon)?;
            Outcome {
                claims: legal_claims(&run.coloring),
                details: serde_json::json!({ "p": p, "iterations": run.iterations }),
                coloring: Some(run.coloring),
                trace: run.trace,
                ..Outcome::default()
            }
        }
        Algo::LegalOa => driver(DriverMode::LegalOA {
            mu: need(params.mu, "mu", algo)?,
        })?,
        Algo::Superlog => driver(DriverMode::Superlog {
            mu_prime: need(params.mu, "mu", algo)?,
        })?,
        Algo::Tradeoff => driver(DriverMode::TradeoffF {
            f: need(params.f, "f", algo)?.into(),
        })?,
        Algo::Eta => driver(DriverMode::Eta {
            eta: need(params.eta, "eta", algo)?,
        })?,
        Algo::FastG => driver(DriverMode::FastG {
            eta: need(params.eta, "eta", algo)?,
            g: need(params.g, "g", algo)?.into(),
        })?,
        Algo::Scaled => driver(DriverMode::Scaled {
            t: need(params.t, "t", algo)?,
            mu: need(params.mu, "mu", algo)?,
        })?,
        Algo::Mis => {
            let (c, trace) = be08_legal_coloring(g, a, epsilon)?;
            let (mis, mis_trace) = mis_from_coloring(g, &c)?;
            Outcome {
                claims: Claims {
                    mis: true,
                    ..legal_claims(&c)
                },
                details: serde_json::json!({ "size": mis.len(), "colors": c.distinct_colors() }),
                mis: Some(mis),
                coloring: Some(c),
                trace: trace.then(mis_trace),
                ..Outcome::default()
            }
        }
    };
    Ok(out)
}

/// Colors used, for tables.
pub fn colors_used(out: &Outcome) -> Option<usize> {
    out.coloring.as_ref().map(Coloring::distinct_colors)
}
