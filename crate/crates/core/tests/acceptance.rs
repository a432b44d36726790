//! Acceptance suite. Runs as a plain binary (no libtest harness) so each
//! criterion prints one PASS/FAIL line; exits non-zero if a hard criterion fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regsub::baselines::sieve_streaming;
use regsub::distributed::{distorted_greedy, run_distributed, DistributedConfig};
use regsub::modefinding::{
    min_gamma, sample_slc_matrix, surrogate_instance, SetFunction, SlcInstance, TableSetFunction,
    WeakSubmodularInstance,
};
use regsub::objectives::{
    similarity_from_features, vertex_cover_cost, FacilityLocation, LogDet, Metric, ModularOracle,
    ReservoirEstimator, SampledFacilityLocation, SaturatingCoverage, VertexCover,
};
use regsub::streaming::{
    alpha_of_r, approx_ratio_zeta, beta_from_zeta, copy_count_bound, distorted_stream_run, h_of_r,
    tau_copy_range, threshold_stream_with_tau, threshold_streaming, zeta_grid, DistortedStreaming, TauMode,
    ThresholdParams, ThresholdState,
};
use regsub::synth::{
    random_costs, random_digraph, random_features, random_gram, random_instance, random_oracle, random_scores,
    shuffled, RandomObjective,
};
use regsub::validate::{check_oracle, max_monotone_drop, max_pair_excess, tabulate};
use regsub::{CountingOracle, ElementId, RegularizedInstance, SubmodularOracle};

use common::{enumerate_best, mean_and_se, optimum};

const E_INV: f64 = 0.36787944117144233;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn closed_form_algebra() -> Outcome {
    let h1 = h_of_r(1.0).unwrap();
    let a1 = alpha_of_r(1.0).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let ok_h = (h1 - 0.381966011250105).abs() < 1e-12 && (h1 - phi.powi(-2)).abs() < 1e-12;
    let ok_a = (a1 - 2.618033988749895).abs() < 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let r = 10.0 * (1.0 - rng.random::<f64>());
        worst = worst.max(rel_err(alpha_of_r(r).unwrap() * h_of_r(r).unwrap(), r));
    }
    outcome(
        ok_h && ok_a && worst <= 1e-10,
        format!("h(1)={h1:.12}, alpha(1)={a1:.12}, max rel err of alpha*h=r over 1000 r: {worst:.1e}"),
    )
}

fn zeta_beta_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let z = rng.random_range(0.01..0.49);
        worst = worst.max(rel_err(approx_ratio_zeta(beta_from_zeta(z).unwrap()).unwrap(), z));
    }
    let mut min_gap = f64::INFINITY;
    let mut entries = 0;
    for eps in [0.01, 0.05, 0.1, 0.2, 0.25, 0.3, 0.4, 0.5] {
        for delta in [0.01, 0.05, 0.1, 0.5, 1.0, 2.0] {
            for e in zeta_grid(eps, delta).unwrap() {
                min_gap = min_gap.min(e.r - 2.0 * eps);
                entries += 1;
            }
        }
    }
    outcome(
        worst <= 1e-10 && min_gap >= -1e-12,
        format!("max round-trip rel err {worst:.1e}; min r - 2eps over {entries} grid entries: {min_gap:.3e}"),
    )
}

fn distorted_greedy_guarantee() -> Outcome {
    let mut failures = 0;
    let mut min_slack = f64::INFINITY;
    for seed in 0..300 {
        let (_, inst) = random_instance(10, 3, 1000 + seed).unwrap();
        let all: Vec<ElementId> = (0..inst.n()).collect();
        let out = distorted_greedy(&inst, &all);
        let (_, bound, _, _) = enumerate_best(&inst, 1.0 - E_INV, 1.0, inst.k());
        let slack = inst.f(&out) - bound;
        min_slack = min_slack.min(slack);
        if slack < -1e-9 || out.len() > inst.k() {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("300 instances, {failures} violations, min f(S) - [(1-1/e)g(O) - l(O)] = {min_slack:.3e}"),
    )
}

fn threshold_guarantee() -> Outcome {
    let eps = 0.1;
    let mut failures = 0;
    let mut checks = 0;
    let mut min_slack = f64::INFINITY;
    for seed in 0..200 {
        let (_, inst) = random_instance(10, 3, 2000 + seed).unwrap();
        let stream = shuffled(inst.n(), seed);
        for r in [0.25, 1.0, 4.0] {
            let h = h_of_r(r).unwrap();
            let (t_star, bound, _, _) = enumerate_best(&inst, h - eps, r, inst.k());
            let target = h * inst.g(&t_star) - r * inst.ell(&t_star);
            let f = if target > 0.0 {
                let tau = target / ((1.0 + eps) * inst.k() as f64);
                threshold_stream_with_tau(stream.iter().copied(), &inst, r, tau).unwrap().f_value
            } else {
                0.0
            };
            let slack = f - bound;
            min_slack = min_slack.min(slack);
            checks += 1;
            if slack < -1e-9 {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checks} (instance, r) pairs, {failures} violations, min slack {min_slack:.3e}"),
    )
}

fn distorted_streaming_guarantee() -> Outcome {
    let (eps, delta) = (0.1, 0.1);
    let mut found = 0;
    let mut failures = 0;
    let mut min_slack = f64::INFINITY;
    let mut seed = 3000;
    while found < 100 {
        seed += 1;
        let (_, inst) = random_instance(10, 3, seed).unwrap();
        let (_, f_opt, _, l_opt) = optimum(&inst);
        if !(l_opt > 0.0 && f_opt > 0.0) {
            continue;
        }
        found += 1;
        let zeta = approx_ratio_zeta(f_opt / l_opt).unwrap();
        let bound = ((1.0 - delta / 2.0) * zeta - eps / (2.0 * zeta)) * f_opt;
        let out = distorted_stream_run(shuffled(inst.n(), seed), &inst, eps, delta, TauMode::Guessed).unwrap();
        let slack = out.f_value - bound;
        min_slack = min_slack.min(slack);
        if slack < -1e-9 {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("100 instances with l(OPT) > 0, {failures} violations, min slack {min_slack:.3e}"),
    )
}

/// Threshold streaming with every copy of the final window present from the start.
fn eager_threshold<O: SubmodularOracle>(stream: &[ElementId], inst: &RegularizedInstance<O>, r: f64, eps: f64) -> Vec<ElementId> {
    let h = h_of_r(r).unwrap();
    let m = stream
        .iter()
        .map(|&u| h * inst.g(&[u]) - r * inst.cost().of(u))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut copies: Vec<ThresholdState> = tau_copy_range(m, inst.k(), r, eps)
        .unwrap()
        .map(|i| ThresholdState::new(ThresholdParams::new(r, (1.0 + eps).powi(i as i32), inst.k()).unwrap()))
        .collect();
    for &u in stream {
        for c in &mut copies {
            c.offer(u, inst);
        }
    }
    let mut best: Option<(f64, Vec<ElementId>)> = None;
    for c in &copies {
        if c.selected().is_empty() {
            continue;
        }
        let f = inst.f(c.selected());
        if best.as_ref().is_none_or(|b| f > b.0) {
            best = Some((f, c.selected().to_vec()));
        }
    }
    match best {
        Some((f, mut set)) if f > inst.f(&[]) => {
            set.sort_unstable();
            set
        }
        _ => Vec::new(),
    }
}

fn lazy_eager_equivalence() -> Outcome {
    let mut mismatches = 0;
    let mut nonempty = 0;
    for seed in 0..100u64 {
        let (_, inst) = random_instance(30, 5, 4000 + seed).unwrap();
        let stream = shuffled(inst.n(), seed);
        let r = [0.25, 1.0, 4.0][seed as usize % 3];
        let lazy = threshold_streaming(stream.iter().copied(), &inst, r, 0.1).unwrap().elements;
        let eager = eager_threshold(&stream, &inst, r, 0.1);
        if !lazy.is_empty() {
            nonempty += 1;
        }
        if lazy != eager {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("100 streams ({nonempty} non-empty outputs), {mismatches} lazy/eager mismatches"),
    )
}

fn distributed_guarantee() -> Outcome {
    let (m, eps, k, n) = (3, 0.5, 3, 12);
    let mut failures = 0;
    let mut degenerate_mismatch = 0;
    let mut min_z = f64::INFINITY;
    for i in 0..20u64 {
        let kind = RandomObjective::ALL[i as usize % RandomObjective::ALL.len()];
        let oracle = random_oracle(kind, n, 5000 + i).unwrap();
        let scale = 0.3 + 0.9 * (i as f64 / 19.0);
        let cost = random_costs(&*oracle, scale, 6000 + i).unwrap();
        let inst = RegularizedInstance::new(oracle, cost, k).unwrap();
        let (_, best, _, _) = enumerate_best(&inst, 1.0 - E_INV, 1.0, k);
        let bound = (1.0 - eps) * best;
        let values: Vec<f64> = (0..500)
            .map(|seed| {
                run_distributed(&inst, &DistributedConfig::new(m, eps, seed).unwrap())
                    .unwrap()
                    .solution
                    .f_value
            })
            .collect();
        let (mean, se) = mean_and_se(&values);
        if mean < bound - 2.0 * se - 1e-12 {
            failures += 1;
        }
        min_z = min_z.min((mean - bound) / se.max(1e-12));

        let all: Vec<ElementId> = (0..n).collect();
        let mut plain = distorted_greedy(&inst, &all);
        plain.sort_unstable();
        let single = run_distributed(&inst, &DistributedConfig::new(1, 1.0, i).unwrap()).unwrap();
        if single.solution.elements != plain {
            degenerate_mismatch += 1;
        }
    }
    outcome(
        failures == 0 && degenerate_mismatch == 0,
        format!(
            "20 instances x 500 seeds, {failures} below bound - 2SE (min (mean - bound)/SE = {min_z:.2}); \
             m=1 eps=1 mismatches: {degenerate_mismatch}"
        ),
    )
}

fn random_weak_table(n: usize, rng: &mut ChaCha8Rng) -> TableSetFunction {
    let items = rng.random_range(2..8);
    let weights: Vec<f64> = (0..items).map(|_| rng.random_range(0.1..1.5)).collect();
    let covers: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..items).map(|_| rng.random_bool(0.4)).collect())
        .collect();
    let noise = rng.random_range(0.0..0.6);
    let empty = [0.0, 0.0, -1.0, 0.5][rng.random_range(0..4)];
    let values = (0..1usize << n)
        .map(|mask| {
            if mask == 0 {
                return empty;
            }
            let covered: f64 = (0..items)
                .filter(|&j| (0..n).any(|u| mask >> u & 1 == 1 && covers[u][j]))
                .map(|j| weights[j])
                .sum();
            empty + covered + noise * (rng.random::<f64>() - 0.5)
        })
        .collect();
    TableSetFunction::new(n, values).unwrap()
}

fn weak_submodular_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    let mut max_gamma = 0.0f64;
    let mut worst_forms = 0.0f64;
    for t in 0..100 {
        let n = rng.random_range(2..=8);
        let rho = random_weak_table(n, &mut rng);
        let gamma = min_gamma(&rho).unwrap();
        max_gamma = max_gamma.max(gamma);
        let weak = WeakSubmodularInstance::new(rho.clone(), gamma).unwrap();

        let lambda = tabulate(n, |s| weak.lambda_value(s)).unwrap();
        let lambda_ok = max_pair_excess(n, &lambda) <= 1e-9;

        let (direct, closed) = weak.derived_cost_forms().unwrap();
        let forms = direct.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_forms = worst_forms.max(forms);

        let offset = weak.offset();
        let inst = surrogate_instance(weak, n).unwrap();
        let g = tabulate(n, |s| inst.g(s)).unwrap();
        let g_ok = max_monotone_drop(n, &g) <= 1e-9 && max_pair_excess(n, &g) <= 1e-9;
        let empty_ok = inst.ell(&[]) == 0.0 && (g[0] - (rho.value(&[]) - offset)).abs() <= 1e-12;
        if !(lambda_ok && g_ok && empty_ok && forms <= 1e-9) {
            bad.push(t);
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "100 instances (max gamma {max_gamma:.3}), failing: {bad:?}; max |closed-form gap| {worst_forms:.1e}"
        ),
    )
}

fn oracle_suites() -> Outcome {
    let n = 10;
    let sim = Arc::new(similarity_from_features(&random_features(n, 3, 11), Metric::Euclidean).unwrap());
    let slc = sample_slc_matrix(n, 0.0, 0.7, 12).unwrap();
    let slc_g = surrogate_instance(
        WeakSubmodularInstance::new(SlcInstance::new(slc.matrix, n).unwrap(), 0.0).unwrap(),
        1,
    )
    .unwrap()
    .into_parts()
    .0;
    let weights: Vec<f64> = (0..n).map(|i| 0.5 + (i % 3) as f64).collect();
    let oracles: Vec<(&str, Box<dyn SubmodularOracle>)> = vec![
        ("modular", Box::new(ModularOracle::new(weights.clone()).unwrap())),
        (
            "vertex-cover",
            Box::new(VertexCover::new(random_digraph(n, 0.3, 13), weights).unwrap()),
        ),
        ("facility", Box::new(FacilityLocation::shared(sim.clone()).unwrap())),
        (
            "sampled-facility",
            Box::new(SampledFacilityLocation::new(sim, vec![0, 3, 3, 7, 9]).unwrap()),
        ),
        ("logdet", Box::new(LogDet::new(random_gram(n, 4, 14), 1.5).unwrap())),
        (
            "saturating",
            Box::new(SaturatingCoverage::new(n, &random_scores(n, 4, 0.5, 15)).unwrap()),
        ),
        ("slc-surrogate", Box::new(slc_g)),
    ];
    let mut failing = Vec::new();
    for (i, (name, o)) in oracles.iter().enumerate() {
        let rep = check_oracle(&**o, 500, 100 + i as u64);
        if !(rep.passes(1e-9) && o.value(&[]) == 0.0 && rep.triples == 500) {
            failing.push(*name);
        }
    }
    outcome(
        failing.is_empty(),
        format!("{} objectives x 500 triples, failing: {failing:?}", oracles.len()),
    )
}

fn single_pass_budget() -> Outcome {
    let (n, k, eps, delta) = (1000, 10, 0.1, 0.1);
    let graph = random_digraph(n, 0.005, 21);
    let cost = vertex_cover_cost(&graph.out_degrees(), 6);
    let counting = CountingOracle::new(VertexCover::unit_weights(graph));
    let inst = RegularizedInstance::new(&counting, cost, k).unwrap();
    let mut run = DistortedStreaming::new(k, eps, delta, TauMode::Guessed).unwrap();
    let per_entry: Vec<f64> = run.grid().map(|e| copy_count_bound(k, e.r, eps).unwrap()).collect();
    let budget: f64 = per_entry.iter().sum();
    let worst_entry = per_entry.iter().copied().fold(0.0, f64::max);
    let grid_bound = run.grid_len() as f64 * worst_entry;
    let mut worst = 0u64;
    let mut value_ok = true;
    let mut memory_ok = true;
    for u in shuffled(n, 22) {
        let before = (counting.value_calls(), counting.marginal_calls());
        run.process(u, &inst);
        worst = worst.max(counting.marginal_calls() - before.1);
        value_ok &= counting.value_calls() - before.0 == 1;
        memory_ok &= run.stored_elements() as f64 <= budget * k as f64;
    }
    let f = run.finish(&inst).f_value;
    outcome(
        worst as f64 <= budget && budget <= grid_bound && value_ok && memory_ok,
        format!(
            "grid {} entries; max marginals per element {worst} <= per-entry copy bounds {budget:.1} \
             (grid x max bound {grid_bound:.1}); one singleton query per element: {value_ok}; f = {f:.3}",
            run.grid_len()
        ),
    )
}

fn desk_replica() -> Outcome {
    let (n, q) = (300, 6);
    let graph = random_digraph(n, 0.03, 31);
    let cost = vertex_cover_cost(&graph.out_degrees(), q);
    let oracle = VertexCover::unit_weights(graph);
    let ks: Vec<usize> = (1..=10).map(|i| 5 * i).collect();
    let mut ordered = 0;
    let mut log = Vec::new();
    for &k in &ks {
        let inst = RegularizedInstance::new(&oracle, cost.clone(), k).unwrap();
        let all: Vec<ElementId> = (0..n).collect();
        let dg = inst.f(&distorted_greedy(&inst, &all));
        let ds = distorted_stream_run(0..n, &inst, 0.1, 0.1, TauMode::Guessed).unwrap().f_value;
        let sv = sieve_streaming(0..n, &inst, 0.1).unwrap().f_value;
        if dg >= ds && ds >= sv {
            ordered += 1;
        }
        log.push(format!("k={k}: {dg:.0}/{ds:.0}/{sv:.0}"));
    }
    let frac = ordered as f64 / ks.len() as f64;
    outcome(
        frac >= 0.8,
        format!(
            "distorted-greedy >= distorted-streaming >= sieve for {ordered}/{} k values; f (dg/ds/sieve) {}",
            ks.len(),
            log.join(", ")
        ),
    )
}

fn reservoir_estimate() -> Outcome {
    let (n, s) = (50, 25);
    let sim = similarity_from_features(&random_features(n, 4, 41), Metric::Euclidean).unwrap();
    let exact = FacilityLocation::new(sim.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let size = rng.random_range(1..=5);
        let set: Vec<ElementId> = shuffled(n, rng.random())[..size].to_vec();
        let estimates: Vec<f64> = (0..1000)
            .map(|seed| {
                let mut est = ReservoirEstimator::new(s, seed);
                est.extend(0..n);
                est.facility_estimate(|&i: &usize, j| sim.get(i, j), &set).unwrap()
            })
            .collect();
        let (mean, _) = mean_and_se(&estimates);
        worst = worst.max(rel_err(mean, exact.value(&set)));
    }
    outcome(
        worst <= 0.01,
        format!("10 sets x 1000 seeds, max relative error of the mean estimate {:.3}%", 100.0 * worst),
    )
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    soft: bool,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "closed-form threshold coefficients", limit: Duration::from_secs(1), soft: false, run: closed_form_algebra },
        Criterion { id: 2, title: "ratio/beta round trip and grid r >= 2eps", limit: Duration::from_secs(1), soft: false, run: zeta_beta_round_trip },
        Criterion { id: 3, title: "distorted greedy guarantee", limit: Duration::from_secs(30), soft: false, run: distorted_greedy_guarantee },
        Criterion { id: 4, title: "threshold streaming with known tau", limit: Duration::from_secs(60), soft: false, run: threshold_guarantee },
        Criterion { id: 5, title: "distorted streaming with guessed tau", limit: Duration::from_secs(120), soft: false, run: distorted_streaming_guarantee },
        Criterion { id: 6, title: "lazy and eager threshold copies agree", limit: Duration::from_secs(30), soft: false, run: lazy_eager_equivalence },
        Criterion { id: 7, title: "distributed greedy expectation bound", limit: Duration::from_secs(300), soft: false, run: distributed_guarantee },
        Criterion { id: 8, title: "weak submodularity reduction", limit: Duration::from_secs(60), soft: false, run: weak_submodular_reduction },
        Criterion { id: 9, title: "oracle property suites", limit: Duration::from_secs(30), soft: false, run: oracle_suites },
        Criterion { id: 10, title: "single-pass oracle budget", limit: Duration::from_secs(30), soft: false, run: single_pass_budget },
        Criterion { id: 11, title: "desk-scale coverage ordering", limit: Duration::from_secs(120), soft: true, run: desk_replica },
        Criterion { id: 12, title: "reservoir facility estimate", limit: Duration::from_secs(30), soft: false, run: reservoir_estimate },
    ];
    let mut hard_failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let out = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.limit;
        let pass = out.pass && in_time;
        let label = match (pass, c.soft) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (soft, logged only)",
        };
        if !pass && !c.soft {
            hard_failures += 1;
        }
        println!(
            "criterion {:>2} {label}: {} [{:.2}s of {}s] {}",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            out.detail
        );
    }
    println!("acceptance: {} criteria, {hard_failures} hard failures", criteria.len());
    if hard_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
