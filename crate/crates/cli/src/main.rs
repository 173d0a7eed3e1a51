//! `rumor`: generate graphs, simulate rumor spreading, check model coupling,
//! evaluate time bounds and run Monte Carlo experiments.

mod args;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use rumor_core::experiment::{results_csv, summary_csv, trial_seed};
use rumor_core::graph::{read_edge_list, to_edge_list};
use rumor_core::{
    bounds, generate, run_coupled_with, run_experiment, simulate, BoundConstants, CouplingReport, ExperimentPlan,
    Graph, GraphError, GraphSpec, Model, RunConfig,
};

use args::{BoundsArgs, Cli, Command, CoupleArgs, ExperimentArgs, GenArgs, GraphArgs, RunArgs};

const EXIT_USAGE: u8 = 1;
const EXIT_CENSORED: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Io { .. } => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Couple(a) => cmd_couple(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Experiment(a) => cmd_experiment(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn load_graph(args: &GraphArgs, seed: u64) -> Result<Graph, Failure> {
    let spec = args.to_spec(seed).map_err(Failure::Usage)?;
    Ok(generate(&spec)?)
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let g = load_graph(&a.graph, a.seed)?;
    emit(a.out.as_deref(), &to_edge_list(&g))?;
    Ok(0)
}

fn cmd_run(a: RunArgs) -> Outcome {
    let g = load_graph(&a.graph, a.graph_seed)?;
    let config = RunConfig {
        protocol: a.protocol,
        model: a.model,
        source: a.source,
        seed: a.seed,
        tie_break: a.tie_break,
        buffer_capacity: a.buffer_capacity,
        overflow: a.overflow,
        max_rounds: a.max_rounds,
    };
    let trace = simulate(&g, &config).map_err(Failure::usage)?;
    if let Some(path) = &a.trace {
        emit(Some(path), &trace.to_jsonl())?;
    }
    match trace.completion_round {
        Some(r) => {
            emit(None, &format!("{r}\n"))?;
            Ok(0)
        }
        None => {
            emit(None, &format!("censored after {} rounds\n", trace.rounds_run()))?;
            Ok(EXIT_CENSORED)
        }
    }
}

#[derive(Serialize)]
struct CoupleOutput {
    protocol: rumor_core::Protocol,
    source: usize,
    base_seed: u64,
    seeds: usize,
    all_equal_every_round: bool,
    divergent_runs: usize,
    censored_runs: usize,
    reports: Vec<CouplingReport>,
}

fn cmd_couple(a: CoupleArgs) -> Outcome {
    if a.seeds == 0 {
        return Err(Failure::usage("--seeds must be at least 1"));
    }
    let g = load_graph(&a.graph, a.graph_seed)?;
    let mut reports = Vec::with_capacity(a.seeds);
    for i in 0..a.seeds {
        let config = RunConfig::new(
            a.protocol,
            Model::Buffered,
            a.source,
            trial_seed(a.seed, 0, a.source, i),
        )
        .with_tie_break(a.tie_break)
        .with_max_rounds(a.max_rounds);
        reports.push(run_coupled_with(&g, &config).map_err(Failure::usage)?);
    }
    let divergent_runs = reports.iter().filter(|r| !r.informed_sets_equal_every_round).count();
    let censored_runs = reports.iter().filter(|r| !r.both_completed).count();
    let out = CoupleOutput {
        protocol: a.protocol,
        source: a.source,
        base_seed: a.seed,
        seeds: a.seeds,
        all_equal_every_round: divergent_runs == 0,
        divergent_runs,
        censored_runs,
        reports,
    };
    let mut text = serde_json::to_string_pretty(&out).map_err(Failure::usage)?;
    text.push('\n');
    emit(a.out.as_deref(), &text)?;
    Ok(if censored_runs > 0 { EXIT_CENSORED } else { 0 })
}

fn cmd_bounds(a: BoundsArgs) -> Outcome {
    let constants = match &a.constants {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<BoundConstants>(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => BoundConstants::default(),
    };
    let g = load_graph(&a.graph, a.graph_seed)?;
    let report = bounds::bounds_report(&g, &constants).map_err(Failure::usage)?;
    let text = if a.json {
        let mut s = serde_json::to_string_pretty(&report).map_err(Failure::usage)?;
        s.push('\n');
        s
    } else {
        bounds::render_table(&report)
    };
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_experiment(a: ExperimentArgs) -> Outcome {
    let text = fs::read_to_string(&a.plan).map_err(|e| Failure::Io(format!("{}: {e}", a.plan.display())))?;
    let mut plan: ExperimentPlan =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", a.plan.display())))?;
    if let Some(seed) = a.base_seed {
        plan.base_seed = seed;
    }
    // edge-list paths in a plan are relative to the plan file
    let base = a.plan.parent().map(Path::to_path_buf).unwrap_or_default();
    for spec in &mut plan.graphs {
        if let GraphSpec::EdgeListFile { path } = spec {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }
    if a.jobs == Some(0) {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    // check file inputs up front so a missing file is an i/o error, not a plan error
    for spec in &plan.graphs {
        if let GraphSpec::EdgeListFile { path } = spec {
            read_edge_list(path)?;
        }
    }
    let out = run_experiment(&plan, a.jobs).map_err(Failure::usage)?;
    let summary = summary_csv(&out.summaries).map_err(Failure::usage)?;
    let results = results_csv(&out.results).map_err(Failure::usage)?;
    if let Some(path) = &a.results {
        emit(Some(path), &results)?;
    }
    emit(a.summary.as_deref(), &summary)?;
    Ok(0)
}
