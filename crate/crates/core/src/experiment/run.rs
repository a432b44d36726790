use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{brute_force_opt, sieve_streaming, vanilla_greedy, MAX_EXHAUSTIVE_N};
use crate::distributed::{distorted_greedy, run_distributed, DistributedConfig};
use crate::error::{Error, Result};
use crate::modefinding::{surrogate_instance, SlcInstance, WeakSubmodularInstance};
use crate::objectives::{
    similarity_from_features, vertex_cover_cost, CountingOracle, FacilityLocation, LogDet, Metric, ModularCost,
    RegularizedInstance, SaturatingCoverage, Solution, SubmodularOracle, VertexCover,
};
use crate::streaming::{distorted_stream_run, threshold_streaming, zeta_grid, TauMode};
use crate::synth::shuffled;

use super::config::{Algorithm, ExperimentConfig, ObjectiveKind, StreamOrder};
use super::load::{load_costs, load_edge_list, load_matrix, load_scores, load_stream_order, write_id_map};
use super::results::{ResultRow, RoundRow};

/// An objective and its costs, ready to be paired with a budget.
pub struct Dataset {
    pub name: String,
    pub oracle: Box<dyn SubmodularOracle>,
    pub cost: ModularCost,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.oracle.n()
    }

    pub fn instance(&self, k: usize) -> Result<RegularizedInstance<&dyn SubmodularOracle>> {
        RegularizedInstance::new(&*self.oracle, self.cost.clone(), k)
    }
}

fn external_cost(cfg: &ExperimentConfig, n: usize) -> Result<ModularCost> {
    let cost = match &cfg.cost_file {
        Some(p) => load_costs(p, cfg.header)?,
        None => ModularCost::uniform(n, cfg.cost)?,
    };
    if cost.len() != n {
        return Err(Error::Config(format!(
            "cost file lists {} costs for {n} elements",
            cost.len()
        )));
    }
    Ok(cost)
}

/// Loads the dataset described by `cfg` and builds its objective.
pub fn load_dataset(cfg: &ExperimentConfig) -> Result<Dataset> {
    let name = cfg.dataset_name();
    let metric = if cfg.metric_scale == 1.0 {
        Metric::Euclidean
    } else {
        Metric::ScaledEuclidean(cfg.metric_scale)
    };
    let (oracle, cost): (Box<dyn SubmodularOracle>, ModularCost) = match cfg.objective {
        ObjectiveKind::Coverage => {
            let loaded = load_edge_list(&cfg.dataset)?;
            if let Some(p) = &cfg.id_map {
                write_id_map(p, &loaded.original_ids)?;
            }
            let n = loaded.graph.n();
            let cost = match cfg.cost_file {
                Some(_) => external_cost(cfg, n)?,
                None => vertex_cover_cost(&loaded.graph.out_degrees(), cfg.q),
            };
            (Box::new(VertexCover::unit_weights(loaded.graph)), cost)
        }
        ObjectiveKind::Facility => {
            let sim = similarity_from_features(&load_matrix(&cfg.dataset, cfg.header)?, metric)?;
            let n = sim.rows();
            (Box::new(FacilityLocation::new(sim)?), external_cost(cfg, n)?)
        }
        ObjectiveKind::Logdet => {
            let raw = load_matrix(&cfg.dataset, cfg.header)?;
            let m = if cfg.matrix_input {
                raw
            } else {
                similarity_from_features(&raw, metric)?
            };
            let n = m.rows();
            (Box::new(LogDet::new(m, cfg.alpha)?), external_cost(cfg, n)?)
        }
        ObjectiveKind::Saturating => {
            let scores = load_scores(&cfg.dataset, cfg.header)?;
            let n = scores.iter().map(|s| s.element + 1).max().unwrap_or(0);
            (Box::new(SaturatingCoverage::new(n, &scores)?), external_cost(cfg, n)?)
        }
        ObjectiveKind::Slc => {
            if cfg.cost_file.is_some() {
                return Err(Error::Config("the slc objective derives its own costs".into()));
            }
            let l = load_matrix(&cfg.dataset, cfg.header)?;
            let d = cfg.support.unwrap_or(l.rows());
            let weak = WeakSubmodularInstance::new(SlcInstance::new(l, d)?, cfg.gamma)?;
            let (oracle, cost) = surrogate_instance(weak, 1)?.into_parts();
            (Box::new(oracle), cost)
        }
    };
    Ok(Dataset { name, oracle, cost })
}

/// Rows of a finished experiment, in canonical order.
#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub rounds: Vec<RoundRow>,
}

struct Cell {
    algorithm: Algorithm,
    k: usize,
    seed: u64,
}

/// Runs every `(algorithm, k, seed)` cell of `cfg` on `dataset`. Everything
/// that can fail is checked before the first cell starts.
pub fn run_on_dataset(cfg: &ExperimentConfig, dataset: &Dataset) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let algorithms = cfg.algorithms()?;
    let n = dataset.n();
    if algorithms.contains(&Algorithm::BruteForce) && n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge {
            n,
            limit: MAX_EXHAUSTIVE_N,
        });
    }
    if algorithms.contains(&Algorithm::DistortedStreaming) {
        zeta_grid(cfg.eps, cfg.delta)?;
    }
    let fixed_order = match cfg.stream_order()? {
        StreamOrder::File(p) => Some(load_stream_order(p, n)?),
        _ => None,
    };
    let shuffle = matches!(cfg.stream_order()?, StreamOrder::Shuffled);

    let mut cells = Vec::new();
    for &algorithm in &algorithms {
        for &k in &cfg.k {
            for &seed in &cfg.seeds {
                cells.push(Cell { algorithm, k, seed });
            }
        }
    }

    let outputs: Vec<(ResultRow, Vec<RoundRow>)> = cells
        .par_iter()
        .map(|cell| {
            let stream = match (&fixed_order, shuffle) {
                (Some(order), _) => order.clone(),
                (None, true) => shuffled(n, cell.seed),
                (None, false) => (0..n).collect(),
            };
            run_cell(cfg, dataset, cell, stream)
        })
        .collect::<Result<_>>()?;

    let mut out = ExperimentOutput::default();
    for (row, rounds) in outputs {
        out.rows.push(row);
        out.rounds.extend(rounds);
    }
    let order = |a: &str| Algorithm::ALL.iter().position(|x| x.id() == a);
    out.rows.sort_by_key(|r| (order(&r.algorithm), r.k, r.seed));
    Ok(out)
}

/// Loads the dataset and runs the experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let dataset = load_dataset(cfg)?;
    run_on_dataset(cfg, &dataset)
}

fn run_cell(
    cfg: &ExperimentConfig,
    dataset: &Dataset,
    cell: &Cell,
    stream: Vec<usize>,
) -> Result<(ResultRow, Vec<RoundRow>)> {
    let counting = CountingOracle::new(&*dataset.oracle);
    let inst = RegularizedInstance::new(&counting, dataset.cost.clone(), cell.k)?;
    let start = Instant::now();
    let mut rounds = Vec::new();
    let mut machines = 1;
    let solution: Solution = match cell.algorithm {
        Algorithm::Greedy => vanilla_greedy(&inst),
        Algorithm::DistortedGreedy => {
            let all: Vec<usize> = (0..inst.n()).collect();
            let set = distorted_greedy(&inst, &all);
            inst.solution(set, "distorted-greedy")
        }
        Algorithm::Sieve => sieve_streaming(stream, &inst, cfg.eps)?,
        Algorithm::DistortedStreaming => distorted_stream_run(stream, &inst, cfg.eps, cfg.delta, TauMode::Guessed)?,
        Algorithm::ThresholdStreaming => threshold_streaming(stream, &inst, cfg.r, cfg.eps)?,
        Algorithm::Distributed => {
            machines = cfg.machines;
            let dcfg = DistributedConfig::new(cfg.machines, cfg.eps, cell.seed)?;
            let run = run_distributed(&inst, &dcfg)?;
            rounds = run
                .machines
                .iter()
                .map(|m| RoundRow {
                    dataset: dataset.name.clone(),
                    algorithm: cell.algorithm.id().into(),
                    k: cell.k,
                    eps: cfg.eps,
                    m: cfg.machines,
                    seed: cell.seed,
                    round: m.round,
                    machine: m.machine,
                    shard_size: m.shard_size,
                    candidate_size: m.candidate_size,
                    pool_sets: m.pool_sets,
                    oracle_calls: m.evaluations,
                })
                .collect();
            run.solution
        }
        Algorithm::BruteForce => {
            let opt = brute_force_opt(&inst)?;
            inst.solution(opt.elements, "brute-force")
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let row = ResultRow {
        dataset: dataset.name.clone(),
        algorithm: cell.algorithm.id().into(),
        k: cell.k,
        eps: cfg.eps,
        delta: cfg.delta,
        m: machines,
        seed: cell.seed,
        f_value: solution.f_value,
        g_value: solution.g_value,
        ell_value: solution.ell_value,
        oracle_calls: counting.calls(),
        wall_ms,
        provenance: solution.provenance,
    };
    Ok((row, rounds))
}
