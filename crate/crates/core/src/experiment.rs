//! Monte Carlo harness: repeated seeded runs over graphs and sources,
//! per-source statistics and the worst-source mean, plus a log-log slope
//! fit for scaling experiments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{Model, Protocol, RunConfig, SimError, TieBreak, DEFAULT_MAX_ROUNDS};
use crate::graph::{generate, Graph, GraphError, GraphSpec, NodeId};
use crate::simulate;
use crate::tape::{hash_words, SplitMix64};

const SAMPLE_TAG: u64 = 0x5A4D_504C_4553_5243;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid plan `{field}`: {reason}")]
    InvalidPlan { field: &'static str, reason: String },
    #[error("graph {index}: {source}")]
    Graph { index: usize, source: GraphError },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("scaling fit: {0}")]
    Fit(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sources {
    /// Every node; realizes the worst case over sources.
    All,
    Fixed(NodeId),
    /// `k` distinct nodes drawn from the plan's base seed.
    Sample(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub graphs: Vec<GraphSpec>,
    pub protocol: Protocol,
    pub model: Model,
    pub trials: usize,
    pub sources: Sources,
    pub base_seed: u64,
    #[serde(default)]
    pub tie_break: TieBreak,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: u64,
    #[serde(default)]
    pub buffer_capacity: Option<usize>,
}

fn default_max_rounds() -> u64 {
    DEFAULT_MAX_ROUNDS
}

/// One row of the results CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialResult {
    pub graph_id: String,
    pub protocol: Protocol,
    pub model: Model,
    pub tie_break: TieBreak,
    pub source: NodeId,
    pub trial: usize,
    pub seed: u64,
    pub completion_round: Option<u64>,
    pub censored: bool,
    pub total_messages: u64,
    pub max_buffer: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub graph_id: String,
    pub protocol: Protocol,
    pub model: Model,
    pub source: NodeId,
    pub trials: usize,
    /// Statistics over completed runs only.
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub min: Option<u64>,
    pub max: Option<u64>,
    pub ci95: Option<f64>,
    pub censored_fraction: f64,
    /// Largest per-source mean of this graph.
    pub worst_source_mean: Option<f64>,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    graph_id: &'a str,
    protocol: Protocol,
    model: Model,
    source: NodeId,
    trials: usize,
    mean: Option<f64>,
    std: Option<f64>,
    min: Option<u64>,
    max: Option<u64>,
    ci95: Option<f64>,
    worst_source_mean: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub results: Vec<TrialResult>,
    pub summaries: Vec<Summary>,
}

/// Seed of trial `trial` for `source` on the `graph_index`-th graph.
pub fn trial_seed(base_seed: u64, graph_index: usize, source: NodeId, trial: usize) -> u64 {
    hash_words(&[base_seed, graph_index as u64, source as u64, trial as u64])
}

impl ExperimentPlan {
    fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |field, reason: &str| {
            Err(ExperimentError::InvalidPlan {
                field,
                reason: reason.into(),
            })
        };
        if self.graphs.is_empty() {
            return bad("graphs", "at least one graph is required");
        }
        if self.trials == 0 {
            return bad("trials", "must be at least 1");
        }
        if self.max_rounds == 0 {
            return bad("max_rounds", "must be at least 1");
        }
        Ok(())
    }

    fn sources_for(&self, graph_index: usize, g: &Graph) -> Result<Vec<NodeId>, ExperimentError> {
        let n = g.node_count();
        match self.sources {
            Sources::All => Ok((0..n).collect()),
            Sources::Fixed(v) if v < n => Ok(vec![v]),
            Sources::Fixed(v) => Err(ExperimentError::InvalidPlan {
                field: "sources",
                reason: format!("source {v} does not exist in graph {graph_index} (n = {n})"),
            }),
            Sources::Sample(k) if (1..=n).contains(&k) => {
                let mut rng = SplitMix64::new(hash_words(&[self.base_seed, graph_index as u64, SAMPLE_TAG]));
                let mut nodes: Vec<NodeId> = (0..n).collect();
                for i in 0..k {
                    let j = i + rng.below(n - i);
                    nodes.swap(i, j);
                }
                let mut picked = nodes[..k].to_vec();
                picked.sort_unstable();
                Ok(picked)
            }
            Sources::Sample(k) => Err(ExperimentError::InvalidPlan {
                field: "sources",
                reason: format!("cannot sample {k} sources from graph {graph_index} (n = {n})"),
            }),
        }
    }
}

/// Runs every trial of `plan`. `jobs` bounds the worker threads (`None`:
/// rayon's default); the output does not depend on it.
pub fn run_experiment(plan: &ExperimentPlan, jobs: Option<usize>) -> Result<ExperimentOutput, ExperimentError> {
    plan.validate()?;
    let mut graphs = Vec::with_capacity(plan.graphs.len());
    for (index, spec) in plan.graphs.iter().enumerate() {
        let g = generate(spec).map_err(|source| ExperimentError::Graph { index, source })?;
        g.ensure_connected()
            .map_err(|source| ExperimentError::Graph { index, source })?;
        let sources = plan.sources_for(index, &g)?;
        graphs.push((format!("g{index}-{}", spec.label()), g, sources));
    }

    let tasks: Vec<(usize, NodeId, usize)> = graphs
        .iter()
        .enumerate()
        .flat_map(|(gi, (_, _, sources))| {
            sources
                .iter()
                .flat_map(move |&s| (0..plan.trials).map(move |t| (gi, s, t)))
        })
        .collect();

    let run_task = |&(gi, source, trial): &(usize, NodeId, usize)| -> Result<TrialResult, SimError> {
        let (graph_id, g, _) = &graphs[gi];
        let seed = trial_seed(plan.base_seed, gi, source, trial);
        let config = RunConfig {
            protocol: plan.protocol,
            model: plan.model,
            source,
            seed,
            tie_break: plan.tie_break,
            buffer_capacity: plan.buffer_capacity,
            overflow: Default::default(),
            max_rounds: plan.max_rounds,
        };
        let trace = simulate(g, &config)?;
        Ok(TrialResult {
            graph_id: graph_id.clone(),
            protocol: plan.protocol,
            model: plan.model,
            tie_break: plan.tie_break,
            source,
            trial,
            seed,
            completion_round: trace.completion_round,
            censored: trace.is_censored(),
            total_messages: trace.total_messages_sent,
            max_buffer: trace.max_buffer(),
        })
    };

    let results: Vec<TrialResult> = match jobs {
        Some(1) => tasks.iter().map(run_task).collect::<Result<_, _>>()?,
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| ExperimentError::Pool(e.to_string()))?
            .install(|| tasks.par_iter().map(run_task).collect::<Result<_, _>>())?,
        None => tasks.par_iter().map(run_task).collect::<Result<_, _>>()?,
    };

    let summaries = summarize(&results, plan);
    Ok(ExperimentOutput { results, summaries })
}

fn summarize(results: &[TrialResult], plan: &ExperimentPlan) -> Vec<Summary> {
    let mut summaries: Vec<Summary> = results
        .chunks(plan.trials)
        .map(|chunk| {
            let first = &chunk[0];
            let done: Vec<u64> = chunk.iter().filter_map(|r| r.completion_round).collect();
            let censored = chunk.len() - done.len();
            if censored > 0 {
                log::warn!(
                    "{} source {}: {censored} of {} runs hit max_rounds and are excluded from the mean",
                    first.graph_id,
                    first.source,
                    chunk.len()
                );
            }
            let stats = Stats::of(&done);
            Summary {
                graph_id: first.graph_id.clone(),
                protocol: first.protocol,
                model: first.model,
                source: first.source,
                trials: chunk.len(),
                mean: stats.as_ref().map(|s| s.mean),
                std: stats.as_ref().map(|s| s.std),
                min: stats.as_ref().map(|s| s.min),
                max: stats.as_ref().map(|s| s.max),
                ci95: stats.as_ref().map(|s| s.ci95),
                censored_fraction: censored as f64 / chunk.len() as f64,
                worst_source_mean: None,
            }
        })
        .collect();
    let mut start = 0;
    while start < summaries.len() {
        let id = summaries[start].graph_id.clone();
        let end = start + summaries[start..].iter().take_while(|s| s.graph_id == id).count();
        let worst = summaries[start..end].iter().filter_map(|s| s.mean).reduce(f64::max);
        for s in &mut summaries[start..end] {
            s.worst_source_mean = worst;
        }
        start = end;
    }
    summaries
}

struct Stats {
    mean: f64,
    std: f64,
    min: u64,
    max: u64,
    ci95: f64,
}

impl Stats {
    fn of(values: &[u64]) -> Option<Stats> {
        let k = values.len();
        if k == 0 {
            return None;
        }
        let mean = values.iter().map(|&v| v as f64).sum::<f64>() / k as f64;
        let var = if k > 1 {
            values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (k - 1) as f64
        } else {
            0.0
        };
        let std = var.sqrt();
        Some(Stats {
            mean,
            std,
            min: *values.iter().min()?,
            max: *values.iter().max()?,
            ci95: 1.96 * std / (k as f64).sqrt(),
        })
    }
}

pub fn results_csv(results: &[TrialResult]) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in results {
        w.serialize(r)?;
    }
    Ok(into_string(w))
}

pub fn summary_csv(summaries: &[Summary]) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in summaries {
        w.serialize(SummaryRow {
            graph_id: &s.graph_id,
            protocol: s.protocol,
            model: s.model,
            source: s.source,
            trials: s.trials,
            mean: s.mean,
            std: s.std,
            min: s.min,
            max: s.max,
            ci95: s.ci95,
            worst_source_mean: s.worst_source_mean,
        })?;
    }
    Ok(into_string(w))
}

fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<f64, ExperimentError> {
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(ExperimentError::Fit(format!(
            "point ({x}, {y}) is not strictly positive"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let distinct = {
        let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.len()
    };
    if distinct < 2 || sxx == 0.0 {
        return Err(ExperimentError::Fit("need at least two distinct x values".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(graphs: Vec<GraphSpec>, protocol: Protocol, trials: usize, sources: Sources) -> ExperimentPlan {
        ExperimentPlan {
            graphs,
            protocol,
            model: Model::Buffered,
            trials,
            sources,
            base_seed: 17,
            tie_break: TieBreak::UniformRandom,
            max_rounds: 100_000,
            buffer_capacity: None,
        }
    }

    #[test]
    fn slope_of_exact_power_laws() {
        let s = scaling_fit(&[(2.0, 4.0), (4.0, 16.0), (8.0, 64.0)]).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        let s = scaling_fit(&[(2.0, 2.0), (4.0, 4.0), (8.0, 8.0)]).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(scaling_fit(&[(2.0, 2.0), (2.0, 3.0)]).is_err());
        assert!(scaling_fit(&[(2.0, 2.0)]).is_err());
        assert!(scaling_fit(&[(0.0, 2.0), (1.0, 3.0)]).is_err());
    }

    #[test]
    fn push_on_complete_two_is_always_one() {
        let out = run_experiment(
            &plan(
                vec![GraphSpec::Complete { n: 2 }],
                Protocol::Push,
                100,
                Sources::Fixed(0),
            ),
            None,
        )
        .unwrap();
        let s = &out.summaries[0];
        assert_eq!(s.mean, Some(1.0));
        assert_eq!(s.std, Some(0.0));
        assert_eq!(out.results.len(), 100);
    }

    #[test]
    fn pull_on_star_is_delta() {
        let out = run_experiment(
            &plan(
                vec![GraphSpec::Star { delta: 4 }],
                Protocol::Pull,
                50,
                Sources::Fixed(0),
            ),
            None,
        )
        .unwrap();
        let s = &out.summaries[0];
        assert_eq!((s.mean, s.std, s.min, s.max), (Some(4.0), Some(0.0), Some(4), Some(4)));
    }

    #[test]
    fn worst_source_is_max_of_per_source_means() {
        let p = plan(
            vec![GraphSpec::StarChain { d: 2, delta: 3 }, GraphSpec::Path { n: 5 }],
            Protocol::Pull,
            8,
            Sources::All,
        );
        let out = run_experiment(&p, Some(2)).unwrap();
        assert_eq!(out.summaries.len(), 8 + 5);
        for id in ["g0-star-chain-2x3", "g1-path-5"] {
            let rows: Vec<_> = out.summaries.iter().filter(|s| s.graph_id == id).collect();
            // brute force over raw trial rows
            let brute = rows
                .iter()
                .map(|s| {
                    let xs: Vec<u64> = out
                        .results
                        .iter()
                        .filter(|r| r.graph_id == id && r.source == s.source)
                        .map(|r| r.completion_round.unwrap())
                        .collect();
                    xs.iter().sum::<u64>() as f64 / xs.len() as f64
                })
                .fold(f64::MIN, f64::max);
            assert!(rows.iter().all(|s| s.worst_source_mean == Some(brute)));
            assert!(rows
                .iter()
                .all(|s| s.min.unwrap() as f64 <= s.mean.unwrap() && s.mean.unwrap() <= s.max.unwrap() as f64));
        }
    }

    #[test]
    fn jobs_do_not_change_output() {
        let p = plan(
            vec![GraphSpec::RandomRegular {
                n: 20,
                degree: 3,
                seed: 2,
            }],
            Protocol::Pull,
            10,
            Sources::Sample(4),
        );
        let a = run_experiment(&p, Some(1)).unwrap();
        let b = run_experiment(&p, Some(4)).unwrap();
        let c = run_experiment(&p, None).unwrap();
        assert_eq!(results_csv(&a.results).unwrap(), results_csv(&b.results).unwrap());
        assert_eq!(summary_csv(&a.summaries).unwrap(), summary_csv(&c.summaries).unwrap());
    }

    #[test]
    fn censored_runs_are_reported_not_averaged() {
        let mut p = plan(
            vec![GraphSpec::StarChain { d: 2, delta: 8 }],
            Protocol::Pull,
            5,
            Sources::Fixed(0),
        );
        p.max_rounds = 3;
        let out = run_experiment(&p, None).unwrap();
        assert!(out.results.iter().all(|r| r.censored && r.completion_round.is_none()));
        assert_eq!(out.summaries[0].mean, None);
        assert_eq!(out.summaries[0].censored_fraction, 1.0);
    }

    #[test]
    fn invalid_plans_abort_before_running() {
        let p = plan(
            vec![GraphSpec::Path { n: 3 }, GraphSpec::Star { delta: 0 }],
            Protocol::Push,
            1,
            Sources::Fixed(0),
        );
        assert!(matches!(
            run_experiment(&p, None),
            Err(ExperimentError::Graph { index: 1, .. })
        ));
        let p = plan(vec![GraphSpec::Path { n: 3 }], Protocol::Push, 0, Sources::Fixed(0));
        assert!(matches!(
            run_experiment(&p, None),
            Err(ExperimentError::InvalidPlan { field: "trials", .. })
        ));
        let p = plan(vec![GraphSpec::Path { n: 3 }], Protocol::Push, 1, Sources::Sample(4));
        assert!(matches!(
            run_experiment(&p, None),
            Err(ExperimentError::InvalidPlan { field: "sources", .. })
        ));
        let p = plan(vec![GraphSpec::Path { n: 3 }], Protocol::Push, 1, Sources::Fixed(3));
        assert!(run_experiment(&p, None).is_err());
    }

    #[test]
    fn csv_headers() {
        let out = run_experiment(
            &plan(vec![GraphSpec::Complete { n: 3 }], Protocol::Push, 2, Sources::Fixed(0)),
            None,
        )
        .unwrap();
        let results = results_csv(&out.results).unwrap();
        assert!(results.starts_with(
            "graph_id,protocol,model,tie_break,source,trial,seed,completion_round,censored,total_messages,max_buffer\n"
        ));
        assert!(results
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("g0-complete-3,push,buffered,uniform-random,0,0,"));
        let summary = summary_csv(&out.summaries).unwrap();
        assert!(summary.starts_with("graph_id,protocol,model,source,trials,mean,std,min,max,ci95,worst_source_mean\n"));
    }

    #[test]
    fn plan_json_shape() {
        let p: ExperimentPlan = serde_json::from_str(
            r#"{"graphs":[{"kind":"star","delta":4}],"protocol":"pull","model":"buffered",
                "trials":3,"sources":{"fixed":0},"base_seed":1}"#,
        )
        .unwrap();
        assert_eq!(p.sources, Sources::Fixed(0));
        assert_eq!(p.max_rounds, DEFAULT_MAX_ROUNDS);
        let all: Sources = serde_json::from_str("\"all\"").unwrap();
        assert_eq!(all, Sources::All);
    }

    #[test]
    fn seeds_differ_across_coordinates() {
        let s = trial_seed(1, 0, 0, 0);
        assert_ne!(s, trial_seed(1, 0, 0, 1));
        assert_ne!(s, trial_seed(1, 0, 1, 0));
        assert_ne!(s, trial_seed(1, 1, 0, 0));
        assert_ne!(s, trial_seed(2, 0, 0, 0));
    }
}
