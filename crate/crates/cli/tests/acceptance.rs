//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashSet;
use std::path::Path;
use std::time::{Duration, Instant};

use clap::Parser;
use eqas_core::analysis::{op_frequency, smooth};
use eqas_core::env::height;
use eqas_core::genome::{alternating_layer_genome, random_genome};
use eqas_core::quantum::run_circuit;
use eqas_core::search::run_search;
use eqas_core::{
    reinforce, seed, Circuit, EnvKind, Genome, LogProbGrads, PolicyParams, Preprocess, RlEvaluator,
    SearchConfig, SoftmaxPqcPolicy, TrainConfig,
};
use rand::Rng;
use serde::Deserialize;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!("took {elapsed:.1?}, limit {limit:?}"),
    )
}

fn quantum_numerics() -> Check {
    let start = Instant::now();
    let mut rng = seed::derived_rng(2024, "acceptance-quantum", &[]);
    let (mut amp, mut fd, mut psr) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let c = common::random_circuit(&mut rng);
        let ours =
            run_circuit(&c.ops, &c.theta, &c.lambda, &c.data, c.n).map_err(|e| e.to_string())?;
        let oracle = common::state(c.n, &c.ops, &c.theta, &c.lambda, &c.data);
        for (a, b) in ours.amplitudes().iter().zip(oracle.iter()) {
            amp = amp.max((a - b).norm());
        }
        let grads = Circuit::new(c.n, c.ops.clone())
            .and_then(|circ| {
                circ.gradients(
                    &c.theta,
                    &c.lambda,
                    &c.data,
                    std::slice::from_ref(&c.observable),
                )
            })
            .map_err(|e| e.to_string())?;
        let f_theta =
            |t: &[f64]| common::expectation(c.n, &c.ops, t, &c.lambda, &c.data, &c.observable);
        let f_lambda =
            |l: &[f64]| common::expectation(c.n, &c.ops, &c.theta, l, &c.data, &c.observable);
        for (g, d) in grads.theta[0]
            .iter()
            .zip(common::central_difference(&c.theta, 1e-5, f_theta))
        {
            fd = fd.max((g - d).abs());
        }
        for (g, d) in grads.lambda[0]
            .iter()
            .zip(common::central_difference(&c.lambda, 1e-5, f_lambda))
        {
            fd = fd.max((g - d).abs());
        }
        for (g, d) in grads.theta[0]
            .iter()
            .zip(common::parameter_shift(&c.theta, f_theta))
        {
            psr = psr.max((g - d).abs());
        }
    }
    let elapsed = start.elapsed();
    ensure(amp <= 1e-10, format!("amplitude error {amp:e}"))?;
    ensure(fd <= 1e-6, format!("finite-difference error {fd:e}"))?;
    ensure(psr <= 1e-10, format!("parameter-shift error {psr:e}"))?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!(
        "200 circuits: max amp err {amp:.1e}, FD err {fd:.1e}, PSR err {psr:.1e}, {elapsed:.2?}"
    ))
}

fn enumeration() -> Check {
    let start = Instant::now();
    let mut counts = Vec::new();
    for len in 1..=6usize {
        let mut archs = HashSet::new();
        for mut k in 0..4usize.pow(len as u32) {
            let v: Vec<i64> = (0..len)
                .map(|_| {
                    let d = (k % 4) as i64;
                    k /= 4;
                    d
                })
                .collect();
            archs.insert(
                Genome::from_ints(&v, len)
                    .map_err(|e| e.to_string())?
                    .decode(),
            );
        }
        counts.push(archs.len());
    }
    let elapsed = start.elapsed();
    ensure(
        counts == [1, 4, 13, 40, 121, 364],
        format!("counts {counts:?}"),
    )?;
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "distinct architectures {counts:?} in {elapsed:.2?}"
    ))
}

fn genome_fidelity() -> Check {
    let cases = [
        ("3-3-2-3-3-1-2-1-3-2-3-2-0", EnvKind::CartPole, (36, 16, 2)),
        (
            "3-1-2-3-1-2-2-2-3-2-1-1-1-3-2-0",
            EnvKind::MountainCar,
            (36, 12, 3),
        ),
        (
            alternating_layer_genome(6).to_string().leak(),
            EnvKind::CartPole,
            (84, 24, 2),
        ),
    ];
    for (s, env, want) in cases {
        let body: Vec<u8> = s
            .split('-')
            .map(|t| t.parse().unwrap())
            .filter(|&c| c != 0)
            .collect();
        let spec = env.spec();
        let oracle = common::hand_count(&body, spec.state_dim, spec.n_actions);
        ensure(
            oracle == want,
            format!("hand count for {s} is {oracle:?}, expected {want:?}"),
        )?;
        let g: Genome = s.parse().map_err(|e: eqas_core::Error| e.to_string())?;
        ensure(g.to_string() == s, format!("{s} does not round-trip"))?;
        let shape = g.decode().param_shape(spec.state_dim, spec.n_actions, 1);
        let got = (shape.n_theta, shape.n_lambda, shape.n_weights);
        ensure(
            got == want,
            format!("{s}: shape {got:?}, expected {want:?}"),
        )?;
    }
    let baseline = alternating_layer_genome(6);
    ensure(
        baseline.len() == 19,
        format!("baseline length {}", baseline.len()),
    )?;
    Ok("CartPole (36,16,2), MountainCar (36,12,3), depth-6 baseline length 19 (84,24,2)".into())
}

fn policy_properties() -> Check {
    let mut rng = seed::derived_rng(2024, "acceptance-policy", &[]);
    let (mut sum_err, mut score_err, mut fd_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..500 {
        let env = if rng.random_bool(0.5) {
            EnvKind::CartPole
        } else {
            EnvKind::MountainCar
        };
        let spec = env.spec();
        let arch = random_genome(&mut rng, 8).decode();
        let policy =
            SoftmaxPqcPolicy::new(arch, spec.state_dim, env.observables(), Preprocess::Arctan)
                .map_err(|e| e.to_string())?;
        let mut params = policy.init_params(rng.random_range(0.1..3.0), &mut rng);
        params
            .lambda
            .iter_mut()
            .for_each(|l| *l = rng.random_range(-2.0..2.0));
        params
            .weights
            .iter_mut()
            .for_each(|w| *w = rng.random_range(-2.0..2.0));
        let state: Vec<f64> = (0..spec.state_dim)
            .map(|_| rng.random_range(-3.0..3.0))
            .collect();

        let probs = policy
            .action_probs(&params, &state)
            .map_err(|e| e.to_string())?;
        sum_err = sum_err.max((probs.iter().sum::<f64>() - 1.0).abs());
        let mut total = LogProbGrads::zeros(policy.shape());
        for (a, &p) in probs.iter().enumerate() {
            let g = policy
                .log_prob_grads(&params, &state, a)
                .map_err(|e| e.to_string())?;
            total.add_scaled(p, &g);
            let lp = |p: &PolicyParams| policy.action_probs(p, &state).unwrap()[a].ln();
            let fd_t = common::central_difference(&params.theta, 1e-5, |t| {
                lp(&PolicyParams {
                    theta: t.to_vec(),
                    ..params.clone()
                })
            });
            let fd_l = common::central_difference(&params.lambda, 1e-5, |l| {
                lp(&PolicyParams {
                    lambda: l.to_vec(),
                    ..params.clone()
                })
            });
            let fd_w = common::central_difference(&params.weights, 1e-5, |w| {
                lp(&PolicyParams {
                    weights: w.to_vec(),
                    ..params.clone()
                })
            });
            for (x, y) in g
                .theta
                .iter()
                .chain(&g.lambda)
                .chain(&g.weights)
                .zip(fd_t.iter().chain(&fd_l).chain(&fd_w))
            {
                fd_err = fd_err.max((x - y).abs());
            }
        }
        for v in total
            .theta
            .iter()
            .chain(&total.lambda)
            .chain(&total.weights)
        {
            score_err = score_err.max(v.abs());
        }
    }
    ensure(
        sum_err <= 1e-12,
        format!("probability sum error {sum_err:e}"),
    )?;
    ensure(
        score_err <= 1e-8,
        format!("score identity error {score_err:e}"),
    )?;
    ensure(fd_err <= 1e-6, format!("log-prob FD error {fd_err:e}"))?;
    Ok(format!(
        "500 instances: sum err {sum_err:.1e}, score identity {score_err:.1e}, FD err {fd_err:.1e}"
    ))
}

#[derive(Deserialize)]
struct Fixture {
    generator: String,
    traces: Vec<Trace>,
}

#[derive(Deserialize)]
struct Trace {
    env: String,
    initial: Vec<f64>,
    actions: Vec<usize>,
    states: Vec<Vec<f64>>,
    rewards: Vec<f64>,
}

fn environment_traces() -> Check {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/tests/fixtures/gym_traces.json"
    );
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let fixture: Fixture = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut steps = 0;
    for t in &fixture.traces {
        let kind: EnvKind = t.env.parse().map_err(|e: eqas_core::Error| e.to_string())?;
        let mut env = kind.make();
        env.reset_to(&t.initial).map_err(|e| e.to_string())?;
        for (i, &a) in t.actions.iter().take(50).enumerate() {
            let r = env.step(a).map_err(|e| e.to_string())?;
            steps += 1;
            for (x, y) in r.next_state.iter().zip(&t.states[i]) {
                worst = worst.max((x - y).abs());
            }
            match kind {
                EnvKind::CartPole => ensure(r.reward == t.rewards[i], "CartPole reward differs")?,
                EnvKind::MountainCar => ensure(
                    r.reward == -1.0 + height(r.next_state[0]),
                    format!("MountainCar reward at step {i} is not -1 + height"),
                )?,
            }
            if r.done() {
                break;
            }
        }
    }
    ensure(worst <= 1e-12, format!("max state deviation {worst:e}"))?;

    // CartPole return equals episode length under random play
    let mut rng = seed::derived_rng(2024, "acceptance-env", &[]);
    for s in 0..10 {
        let mut env = EnvKind::CartPole.make();
        env.reset(s);
        let (mut n, mut total) = (0, 0.0);
        loop {
            let r = env
                .step(rng.random_range(0..2))
                .map_err(|e| e.to_string())?;
            n += 1;
            total += r.reward;
            if r.done() {
                break;
            }
        }
        ensure(
            total == n as f64,
            format!("CartPole return {total} != length {n}"),
        )?;
    }
    Ok(format!(
        "{} reference traces ({steps} steps, {}), max deviation {worst:.1e}",
        fixture.traces.len(),
        fixture.generator
    ))
}

fn training_smoke() -> Check {
    let start = Instant::now();
    let arch = alternating_layer_genome(6).decode();
    let mut finals = Vec::new();
    for s in 0..5 {
        let cfg = TrainConfig {
            episodes: 500,
            batch_size: 10,
            seed: s,
            ..TrainConfig::for_env(EnvKind::CartPole)
        };
        let out = reinforce::train(&arch, EnvKind::CartPole, &cfg).map_err(|e| e.to_string())?;
        let tail = &out.curve.episode_rewards[450..];
        finals.push(tail.iter().sum::<f64>() / tail.len() as f64);
    }
    let passing = finals.iter().filter(|&&m| m >= 100.0).count();
    let summary: Vec<String> = finals.iter().map(|m| format!("{m:.1}")).collect();
    let elapsed = start.elapsed();
    ensure(
        passing >= 3,
        format!(
            "final-50 means [{}]: {passing}/5 reach 100",
            summary.join(", ")
        ),
    )?;
    within(elapsed, Duration::from_secs(15 * 60))?;
    Ok(format!(
        "final-50 means [{}]: {passing}/5 seeds >= 100, {elapsed:.1?}",
        summary.join(", ")
    ))
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn search_smoke() -> Check {
    let start = Instant::now();
    let (mut initial, mut last) = (Vec::new(), Vec::new());
    for s in 0..3 {
        let cfg = SearchConfig {
            pop_size: 8,
            generations: 5,
            seed: s,
            ..SearchConfig::default()
        };
        let train = TrainConfig {
            episodes: 125,
            ..TrainConfig::for_env(EnvKind::CartPole)
        };
        let evaluator = RlEvaluator::new(EnvKind::CartPole, train, &cfg);
        ensure(
            evaluator.train.episodes == 100,
            "evaluation budget is not 100 episodes",
        )?;
        let report = run_search(&cfg, &evaluator).map_err(|e| e.to_string())?;
        let bests: Vec<f64> = report.generations.iter().map(|g| g.best.fitness).collect();
        ensure(
            bests.windows(2).all(|w| w[1] >= w[0]),
            format!("seed {s}: best fitness decreased {bests:?}"),
        )?;
        initial.push(bests[0]);
        last.push(*bests.last().unwrap());
    }
    let summary = format!("initial bests {initial:.1?}, final bests {last:.1?}");
    let (mi, mf) = (median(&mut initial), median(&mut last));
    let elapsed = start.elapsed();
    ensure(
        mf > mi,
        format!("{summary}: median final {mf:.1} does not exceed initial {mi:.1}"),
    )?;
    within(elapsed, Duration::from_secs(30 * 60))?;
    Ok(format!(
        "{summary}; medians {mi:.1} -> {mf:.1}, {elapsed:.1?}"
    ))
}

fn cli(args: &[&str]) -> Result<Vec<String>, String> {
    let mut argv = vec!["eqas"];
    argv.extend_from_slice(args);
    let cli = eqas_cli::Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    eqas_cli::run(cli).map_err(|e| format!("{e:#}"))
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

fn determinism() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for (name, args) in [
        (
            "search",
            vec![
                "search",
                "--env",
                "CartPole-v1",
                "--seed",
                "3",
                "--generations",
                "2",
                "--pop-size",
                "6",
                "--episodes",
                "20",
            ],
        ),
        (
            "search-mc",
            vec![
                "search",
                "--env",
                "MountainCar-v0",
                "--seed",
                "3",
                "--generations",
                "1",
                "--pop-size",
                "4",
                "--episodes",
                "5",
            ],
        ),
        (
            "train",
            vec![
                "train",
                "3-3-2-3-3-1-2-1-3-2-3-2-0",
                "--env",
                "CartPole-v1",
                "--seed",
                "8",
                "--episodes",
                "20",
                "--trials",
                "3",
            ],
        ),
    ] {
        let mut outputs = Vec::new();
        for run in 0..3 {
            let workers = ["1", "4", "1"][run];
            let dir = tmp.path().join(format!("{name}-{run}"));
            let mut a = args.clone();
            a.extend(["--workers", workers, "--out", dir.to_str().unwrap()]);
            cli(&a)?;
            if name == "search" {
                let report = dir.join("report.json");
                cli(&["report", report.to_str().unwrap(), "--top-k", "5"])?;
            }
            outputs.push(files(&dir));
        }
        ensure(
            outputs[0] == outputs[1],
            format!("{name}: --workers 1 and --workers 4 differ"),
        )?;
        ensure(
            outputs[0] == outputs[2],
            format!("{name}: repeated run differs"),
        )?;
        compared += outputs[0].len();
    }
    Ok(format!(
        "{compared} CSV/JSON files byte-identical across repeats and --workers 1/4"
    ))
}

fn analysis() -> Check {
    let mut rng = seed::derived_rng(2024, "acceptance-analysis", &[]);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let genomes: Vec<Genome> = (0..rng.random_range(1..30))
            .map(|_| random_genome(&mut rng, 30))
            .collect();
        for row in op_frequency(&genomes).map_err(|e| e.to_string())?.probs {
            worst = worst.max((row.iter().sum::<f64>() - 1.0).abs());
        }
    }
    ensure(worst <= 1e-12, format!("row sum error {worst:e}"))?;
    let curve: Vec<f64> = (1..=20).map(|i| (i * i) as f64).collect();
    let expected = [
        1.0,
        2.5,
        14.0 / 3.0,
        7.5,
        11.0,
        91.0 / 6.0,
        20.0,
        25.5,
        31.666666666666668,
        38.5,
        50.5,
        64.5,
        80.5,
        98.5,
        118.5,
        140.5,
        164.5,
        190.5,
        218.5,
        248.5,
    ];
    let got = smooth(&curve, 10).map_err(|e| e.to_string())?;
    ensure(got == expected, format!("window-10 smoothing {got:?}"))?;
    Ok(format!(
        "row sums within {worst:.1e}; window-10 trailing means exact on 20 points"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("quantum numerics", quantum_numerics),
        ("search-space enumeration", enumeration),
        ("genome fidelity", genome_fidelity),
        ("policy properties", policy_properties),
        ("environment traces", environment_traces),
        ("training smoke", training_smoke),
        ("search smoke", search_smoke),
        ("determinism", determinism),
        ("analysis", analysis),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
