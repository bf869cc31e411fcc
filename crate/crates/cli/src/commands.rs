use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use eqas_core::analysis::{op_frequency, smooth, top_k};
use eqas_core::genome::alternating_layer_genome;
use eqas_core::io::{self, Checkpoint};
use eqas_core::search::run_search;
use eqas_core::{reinforce, Error, Genome, LearningCurve, RlEvaluator};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::{BaselineArgs, Common, DecodeArgs, ReportArgs, SearchArgs, TrainArgs};

/// File config (if any), then flags and `EQAS_*` variables on top.
pub fn resolve(common: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = match (&common.config, common.env) {
        (Some(path), env) => RunConfig::from_file_with_env(path, env)?,
        (None, Some(env)) => RunConfig::for_env(env),
        (None, None) => bail!(Error::Config(
            "env: missing environment name (use --env or a config file)".into()
        )),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(episodes) = common.episodes {
        cfg.train.episodes = episodes;
    }
    cfg.sync_seed();
    Ok(cfg)
}

fn with_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> anyhow::Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            bail!(Error::Config("workers: must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    Ok(builder
        .build()
        .context("cannot start worker pool")?
        .install(f))
}

pub fn search(args: &SearchArgs) -> anyhow::Result<Vec<String>> {
    let mut cfg = resolve(&args.common)?;
    if let Some(g) = args.generations {
        cfg.search.generations = g;
    }
    if let Some(p) = args.pop_size {
        cfg.search.pop_size = p;
    }
    cfg.validate()?;
    let evaluator = RlEvaluator::new(cfg.env, cfg.train.clone(), &cfg.search);
    log::info!(
        "searching {} with population {} for {} generations, {} episodes per evaluation",
        cfg.env,
        cfg.search.pop_size,
        cfg.search.generations,
        cfg.search.eval_episodes(cfg.train.episodes)
    );
    let report = with_workers(args.common.workers, || run_search(&cfg.search, &evaluator))??;
    io::write_report(&cfg.out.join("report.json"), &report)?;
    io::write_generations(&cfg.out.join("generations.csv"), &report)?;
    log::info!(
        "best fitness {} written to {}",
        report.best.fitness,
        cfg.out.display()
    );
    Ok(vec![report.best.genome.clone()])
}

pub fn train(args: &TrainArgs) -> anyhow::Result<Vec<String>> {
    let genome: Genome = args.genome.parse()?;
    let cfg = resolve(&args.common)?;
    if args.trials == 0 {
        bail!(Error::Config("trials: must be at least 1".into()));
    }
    cfg.train.validate()?;
    let arch = genome.decode();
    let outcomes = with_workers(args.common.workers, || {
        (0..args.trials)
            .into_par_iter()
            .map(|i| {
                let train = eqas_core::TrainConfig {
                    seed: cfg.seed + i as u64,
                    ..cfg.train.clone()
                };
                reinforce::train(&arch, cfg.env, &train)
            })
            .collect::<Result<Vec<_>, _>>()
    })??;

    let mut lines = Vec::new();
    for (i, out) in outcomes.iter().enumerate() {
        io::write_learning_curve(&cfg.out.join(format!("curve_trial{i}.csv")), &out.curve)?;
        let ckpt = Checkpoint::new(cfg.env, &genome, cfg.train.preprocess, &out.params);
        io::write_checkpoint(&cfg.out.join(format!("checkpoint_trial{i}.json")), &ckpt)?;
        let mean = reinforce::fitness(&out.curve).unwrap_or(f64::NAN);
        lines.push(format!(
            "trial {i} seed {}: mean reward {mean:.3}",
            cfg.seed + i as u64
        ));
    }
    let curves: Vec<LearningCurve> = outcomes.into_iter().map(|o| o.curve).collect();
    io::write_summary(&cfg.out.join("summary.csv"), &curves)?;
    Ok(lines)
}

pub fn baseline(args: &BaselineArgs) -> anyhow::Result<Vec<String>> {
    if args.depth == 0 {
        bail!(Error::Config("depth: must be at least 1".into()));
    }
    let genome = alternating_layer_genome(args.depth);
    let mut lines = vec![genome.to_string()];
    if let Some(env) = args.env {
        let spec = env.spec();
        let shape = genome
            .decode()
            .param_shape(spec.state_dim, spec.n_actions, 1);
        lines.push(format!(
            "{env}: theta {}, lambda {}, weights {}",
            shape.n_theta, shape.n_lambda, shape.n_weights
        ));
    }
    Ok(lines)
}

fn report_dir(args: &ReportArgs) -> PathBuf {
    args.out.clone().unwrap_or_else(|| {
        args.report
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."))
            .to_path_buf()
    })
}

pub fn report(args: &ReportArgs) -> anyhow::Result<Vec<String>> {
    let report = io::read_report(&args.report)?;
    if report.generations.is_empty() {
        bail!(Error::Usage(format!(
            "{} has no generations",
            args.report.display()
        )));
    }
    let out = report_dir(args);
    let top = top_k(&report, args.top_k);
    let genomes = top
        .iter()
        .map(|r| r.genome.parse::<Genome>())
        .collect::<Result<Vec<_>, _>>()?;
    let freq = op_frequency(&genomes)?;
    io::write_frequency(&out.join("op_frequency.csv"), &freq)?;
    io::write_frequency(
        &out.join("op_frequency_smoothed.csv"),
        &freq.smoothed(args.window)?,
    )?;

    let best: Vec<f64> = report.generations.iter().map(|g| g.best.fitness).collect();
    let mean: Vec<f64> = report
        .generations
        .iter()
        .map(|g| g.individuals.iter().map(|i| i.fitness).sum::<f64>() / g.individuals.len() as f64)
        .collect();
    let (best_s, mean_s) = (smooth(&best, args.window)?, smooth(&mean, args.window)?);
    write_rows(
        &out.join("fitness.csv"),
        &[
            "generation",
            "best",
            "mean",
            "best_smoothed",
            "mean_smoothed",
        ],
        report
            .generations
            .iter()
            .enumerate()
            .map(|(i, g)| (g.generation, best[i], mean[i], best_s[i], mean_s[i])),
    )?;
    write_rows(
        &out.join("top_k.csv"),
        &["rank", "genome", "fitness"],
        top.iter()
            .enumerate()
            .map(|(i, r)| (i + 1, &r.genome, r.fitness)),
    )?;
    Ok(top
        .iter()
        .map(|r| format!("{} {}", r.genome, r.fitness))
        .collect())
}

fn write_rows<R: serde::Serialize>(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = R>,
) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let mut w = csv_writer(path)?;
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn csv_writer(path: &Path) -> anyhow::Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))
}

pub fn decode(args: &DecodeArgs) -> anyhow::Result<Vec<String>> {
    let genome: Genome = args.genome.parse()?;
    let arch = genome.decode();
    let spec = args.env.spec();
    let n = spec.state_dim;
    let shape = arch.param_shape(n, spec.n_actions, 1);
    let circuit = arch.circuit(n)?;
    let blocks: Vec<String> = arch.blocks().iter().map(|b| format!("{b:?}")).collect();
    let mut lines = vec![
        format!("genome: {}", genome.normalized()),
        format!(
            "blocks: {} + final measurement",
            if blocks.is_empty() {
                "none".into()
            } else {
                blocks.join(", ")
            }
        ),
        format!("{}: {} qubits, {} gates", args.env, n, circuit.ops().len()),
    ];
    lines.extend(circuit.ops().iter().map(|op| format!("  {op}")));
    let readout: Vec<String> = args
        .env
        .observables()
        .iter()
        .map(|o| o.to_string())
        .collect();
    lines.push(format!("readout: {}", readout.join(", ")));
    lines.push(format!(
        "params: theta {}, lambda {}, weights {}",
        shape.n_theta, shape.n_lambda, shape.n_weights
    ));
    Ok(lines)
}
