//! `sweep`: one algorithm over geometrically growing `n` or `a`.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::algo::{colors_used, execute, AlgoParams};
use crate::error::{io_context, CliError, CliResult};
use crate::run::json;
use crate::source::{self, parse_spec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    N,
    A,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub label: String,
    pub n: usize,
    pub a: usize,
    pub rounds: usize,
    pub messages: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<usize>,
}

/// `rounds ≈ slope · log₂ n` fitted through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    /// Largest `|r - slope·x| / (slope·x)` over the points.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub graph: String,
    pub axis: Axis,
    pub epsilon: f64,
    pub algorithm: AlgoParams,
    pub points: Vec<SweepPoint>,
    pub rounds_fit: Option<Fit>,
    /// Exponent `e` of `colors ≈ C·x^e` (log-log least squares).
    pub color_exponent: Option<f64>,
}

pub struct SweepArgs<'a> {
    pub graph: &'a str,
    pub axis: Axis,
    pub from: usize,
    pub to: usize,
    pub epsilon: f64,
    pub seed: Option<u64>,
    pub algorithm: &'a AlgoParams,
}

pub fn fit_through_origin(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let slope = xs.iter().zip(ys).map(|(x, y)| x * y).sum::<f64>() / sxx;
    if !(sxx > 0.0 && slope > 0.0) {
        return None;
    }
    let dev = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| ((y - slope * x) / (slope * x)).abs())
        .fold(0.0, f64::max);
    Some((slope, dev))
}

fn loglog_exponent(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

pub fn sweep(args: &SweepArgs<'_>) -> CliResult<SweepResult> {
    if args.from == 0 || args.to < args.from {
        return Err(CliError::Config(format!(
            "bad sweep range {}..{}",
            args.from, args.to
        )));
    }
    let mut values = Vec::new();
    let mut x = args.from;
    while x <= args.to {
        values.push(x);
        x *= 2;
    }
    let specs = values
        .iter()
        .map(|&x| {
            let text = match args.axis {
                Axis::N => return parse_spec(args.graph, Some(x), args.seed),
                Axis::A if args.graph.contains(':') => format!("{},a={x}", args.graph),
                Axis::A => format!("{}:a={x}", args.graph),
            };
            parse_spec(&text, None, args.seed)
        })
        .collect::<CliResult<Vec<_>>>()?;

    // Points are independent; run them side by side.
    let results: Vec<CliResult<SweepPoint>> = std::thread::scope(|s| {
        let handles: Vec<_> = specs
            .iter()
            .map(|&spec| {
                s.spawn(move || {
                    let loaded = source::from_spec(spec)?;
                    let a = loaded.default_a.max(1);
                    let out = execute(&loaded.graph, a, args.epsilon, args.algorithm)?;
                    Ok(SweepPoint {
                        label: loaded.label,
                        n: loaded.graph.n(),
                        a,
                        rounds: out.trace.rounds,
                        messages: out.trace.messages_sent,
                        colors: colors_used(&out),
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let points = results.into_iter().collect::<CliResult<Vec<_>>>()?;

    let xs: Vec<f64> = points
        .iter()
        .map(|p| match args.axis {
            Axis::N => (p.n as f64).log2(),
            Axis::A => p.a as f64,
        })
        .collect();
    let rounds: Vec<f64> = points.iter().map(|p| p.rounds as f64).collect();
    let rounds_fit = (args.axis == Axis::N)
        .then(|| fit_through_origin(&xs, &rounds))
        .flatten()
        .map(|(slope, max_deviation)| Fit { slope, max_deviation });
    let color_exponent = if points.iter().all(|p| p.colors.is_some()) && args.axis == Axis::A {
        let cs: Vec<f64> = points.iter().map(|p| p.colors.unwrap() as f64).collect();
        let a: Vec<f64> = points.iter().map(|p| p.a as f64).collect();
        loglog_exponent(&a, &cs)
    } else {
        None
    };
    Ok(SweepResult {
        graph: args.graph.to_owned(),
        axis: args.axis,
        epsilon: args.epsilon,
        algorithm: args.algorithm.clone(),
        points,
        rounds_fit,
        color_exponent,
    })
}

pub fn table(result: &SweepResult) -> String {
    let mut s = String::from("| graph | n | a | rounds | colors |\n|---|---|---|---|---|\n");
    for p in &result.points {
        let colors = p.colors.map_or("-".into(), |c| c.to_string());
        s += &format!("| {} | {} | {} | {} | {colors} |\n", p.label, p.n, p.a, p.rounds);
    }
    if let Some(fit) = result.rounds_fit {
        s += &format!(
            "\nrounds ≈ {:.3}·log2 n, max deviation {:.1}%\n",
            fit.slope,
            fit.max_deviation * 100.0
        );
    }
    if let Some(e) = result.color_exponent {
        s += &format!("colors ≈ C·a^{e:.2}\n");
    }
    s
}

pub fn write(dir: &Path, result: &SweepResult) -> CliResult<()> {
    io_context(std::fs::create_dir_all(dir), dir)?;
    let path = dir.join("sweep.json");
    io_context(std::fs::write(&path, json(result)), &path)?;
    let mut csv = String::from("label,n,a,rounds,messages,colors\n");
    for p in &result.points {
        let colors = p.colors.map_or(String::new(), |c| c.to_string());
        csv += &format!(
            "{},{},{},{},{},{colors}\n",
            p.label, p.n, p.a, p.rounds, p.messages
        );
    }
    let path = dir.join("sweep.csv");
    io_context(std::fs::write(&path, csv), &path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_fits() {
        let (slope, dev) = fit_through_origin(&[1.0, 2.0, 4.0], &[3.0, 6.0, 12.0]).unwrap();
        assert!((slope - 3.0).abs() < 1e-12 && dev < 1e-12);
        assert!(fit_through_origin(&[1.0, 2.0], &[0.0, 0.0]).is_none());
    }

    #[test]
    fn power_law_exponent() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 5.0 * x.powf(1.5)).collect();
        assert!((loglog_exponent(&xs, &ys).unwrap() - 1.5).abs() < 1e-9);
    }
}
