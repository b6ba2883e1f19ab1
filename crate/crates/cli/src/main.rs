mod algo;
mod error;
mod report;
mod run;
mod source;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use algo::AlgoParams;
use error::{io_context, CliError, CliResult};
use run::{json, ExperimentConfig};
use source::{derive_seed, parse_spec};
use sweep::Axis;

/// Distributed coloring experiments on a simulated synchronous network.
#[derive(Parser)]
#[command(name = "arbcolor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write generated graphs as edge-list files.
    Gen {
        /// Generator spec, e.g. `forest_union:a=4`; repeatable.
        #[arg(long, required = true)]
        graph: Vec<String>,
        /// Sizes, comma separated; overrides `n` in the spec.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Top-level seed; per-graph seeds are derived from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one algorithm and write its artifacts.
    Run(RunArgs),
    /// Re-check the claims of a run directory from its files.
    Verify {
        /// Run directory written by `run`.
        dir: PathBuf,
        /// Graph file to use instead of the directory's `graph.txt`.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Run one algorithm over n or a growing by factors of 2.
    Sweep(SweepCmd),
    /// Tables of colors against a and rounds against n.
    Report {
        /// Aggregate run.json and sweep.json files below this directory
        /// instead of running the standard grid.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2048)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Directory for report.md and report.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Edge-list file or generator spec such as `tree:n=100,seed=2`.
    #[arg(long, required_unless_present = "config")]
    graph: Option<String>,
    /// Arboricity bound; defaults to the generator's bound or the degeneracy.
    #[arg(long)]
    a: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[command(flatten)]
    algo: Option<AlgoParams>,
    /// Seed for generator specs that do not fix one.
    #[arg(long)]
    seed: Option<u64>,
    /// Fail when a run needs more than `64·(log₂ n + 1)·factor` rounds.
    #[arg(long)]
    round_cap_factor: Option<f64>,
    #[arg(long, required_unless_present = "config")]
    out: Option<PathBuf>,
    /// Experiment config (JSON); replaces the graph and algorithm flags.
    #[arg(long, conflicts_with_all = ["graph", "algo"])]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepCmd {
    /// Generator spec without the swept parameter.
    #[arg(long)]
    graph: String,
    #[arg(long, value_enum, default_value_t = Axis::N)]
    vary: Axis,
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    algo: AlgoParams,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn gen(graphs: &[String], ns: &[usize], seed: u64, out: &PathBuf) -> CliResult<()> {
    io_context(std::fs::create_dir_all(out), out)?;
    let mut manifest = Vec::new();
    let sizes: Vec<Option<usize>> = if ns.is_empty() {
        vec![None]
    } else {
        ns.iter().map(|&n| Some(n)).collect()
    };
    let mut index = 0;
    for text in graphs {
        for &n in &sizes {
            let spec = parse_spec(text, n, Some(derive_seed(seed, index)))?;
            index += 1;
            let loaded = source::from_spec(spec)?;
            let file = out.join(format!("{}.txt", loaded.label));
            io_context(
                arbcolor::io::write_graph(&file, &loaded.graph)
                    .map_err(|e| std::io::Error::other(e.to_string())),
                &file,
            )?;
            println!(
                "{} ({} vertices, {} edges)",
                file.display(),
                loaded.graph.n(),
                loaded.graph.m()
            );
            manifest.push(serde_json::json!({
                "spec": spec,
                "file": file.file_name().unwrap().to_string_lossy(),
                "arboricity_bound": spec.arboricity_bound(),
                "forest_certificate": loaded.forest_certificate,
            }));
        }
    }
    let path = out.join("manifest.json");
    io_context(
        std::fs::write(
            &path,
            json(&serde_json::json!({ "seed": seed, "graphs": manifest })),
        ),
        &path,
    )
}

fn run_cmd(args: RunArgs) -> CliResult<()> {
    if let Some(path) = &args.config {
        let mut config = ExperimentConfig::load(path)?;
        if let Some(out) = args.out {
            config.out = out;
        }
        for record in run::run_config(&config, args.seed)? {
            println!("{}", run::summary(&record));
        }
        return Ok(());
    }
    let algo = args
        .algo
        .ok_or_else(|| CliError::Config("--algo is required without --config".into()))?;
    let graph = args.graph.expect("required by clap");
    let out = args.out.expect("required by clap");
    let loaded = source::load(&graph, args.seed)?;
    let exec = run::run_one(&loaded, args.a, args.epsilon, &algo, args.round_cap_factor)?;
    run::write_artifacts(&out, &loaded.graph, &exec)?;
    println!("{}", run::summary(&exec.record));
    Ok(())
}

fn verify_cmd(dir: PathBuf, graph: Option<PathBuf>) -> CliResult<()> {
    let cert = verify::verify_dir(&dir, graph.as_deref())?;
    if cert.passed {
        println!("{}: all certificates pass", dir.display());
        Ok(())
    } else {
        for f in &cert.failures {
            eprintln!("  {f}");
        }
        Err(CliError::Verify(format!(
            "{} failing check(s) in {}",
            cert.failures.len(),
            dir.display()
        )))
    }
}

fn sweep_cmd(cmd: SweepCmd) -> CliResult<()> {
    let result = sweep::sweep(&sweep::SweepArgs {
        graph: &cmd.graph,
        axis: cmd.vary,
        from: cmd.from,
        to: cmd.to,
        epsilon: cmd.epsilon,
        seed: cmd.seed,
        algorithm: &cmd.algo,
    })?;
    print!("{}", sweep::table(&result));
    if let Some(out) = cmd.out {
        sweep::write(&out, &result)?;
    }
    Ok(())
}

fn report_cmd(
    input: Option<PathBuf>,
    n: usize,
    seed: u64,
    epsilon: f64,
    out: Option<PathBuf>,
) -> CliResult<()> {
    let report = match input {
        Some(dir) => report::aggregate(&dir)?,
        None => report::tradeoff_grid(n, seed, epsilon)?,
    };
    let md = report::markdown(&report);
    print!("{md}");
    if let Some(out) = out {
        io_context(std::fs::create_dir_all(&out), &out)?;
        let path = out.join("report.md");
        io_context(std::fs::write(&path, &md), &path)?;
        let path = out.join("report.csv");
        io_context(std::fs::write(&path, report::csv(&report)), &path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { graph, n, seed, out } => gen(&graph, &n, seed, &out),
        Command::Run(args) => run_cmd(args),
        Command::Verify { dir, graph } => verify_cmd(dir, graph),
        Command::Sweep(cmd) => sweep_cmd(cmd),
        Command::Report {
            input,
            n,
            seed,
            epsilon,
            out,
        } => report_cmd(input, n, seed, epsilon, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("arbcolor: {e}");
            e.exit_code()
        }
    }
}
