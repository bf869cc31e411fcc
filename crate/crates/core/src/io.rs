//! File formats: learning-curve, summary, frequency and generation CSVs,
//! policy checkpoints and search reports as JSON.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::analysis::OpFrequencyMatrix;
use crate::env::EnvKind;
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::policy::{PolicyParams, Preprocess};
use crate::quantum::ZObservable;
use crate::reinforce::LearningCurve;
use crate::search::SearchReport;

pub const CURVE_HEADER: [&str; 2] = ["episode", "reward"];
pub const SUMMARY_HEADER: [&str; 3] = ["episode", "mean", "std"];
pub const FREQUENCY_HEADER: [&str; 5] = [
    "position",
    "p_measure",
    "p_variational",
    "p_encoding",
    "p_entangle",
];
pub const GENERATION_HEADER: [&str; 4] = ["generation", "slot", "genome", "fitness"];

/// Trained policy together with everything needed to rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub env: EnvKind,
    pub genome: Genome,
    pub observables: Vec<ZObservable>,
    pub preprocess: Preprocess,
    pub beta: f64,
    pub theta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Checkpoint {
    pub fn new(
        env: EnvKind,
        genome: &Genome,
        preprocess: Preprocess,
        params: &PolicyParams,
    ) -> Self {
        Self {
            env,
            genome: genome.normalized(),
            observables: env.observables(),
            preprocess,
            beta: params.beta,
            theta: params.theta.clone(),
            lambda: params.lambda.clone(),
            weights: params.weights.clone(),
        }
    }

    pub fn params(&self) -> PolicyParams {
        PolicyParams {
            theta: self.theta.clone(),
            lambda: self.lambda.clone(),
            weights: self.weights.clone(),
            beta: self.beta,
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn csv_writer(path: &Path, header: &[&str]) -> Result<csv::Writer<BufWriter<File>>> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header)?;
    Ok(w)
}

fn finish(mut w: csv::Writer<BufWriter<File>>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_reader(BufReader::new(f))?)
}

pub fn write_checkpoint(path: &Path, ckpt: &Checkpoint) -> Result<()> {
    write_json(path, ckpt)
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    read_json(path)
}

pub fn write_report(path: &Path, report: &SearchReport) -> Result<()> {
    write_json(path, report)
}

pub fn read_report(path: &Path) -> Result<SearchReport> {
    read_json(path)
}

/// `episode,reward` with episodes numbered from 1.
pub fn write_learning_curve(path: &Path, curve: &LearningCurve) -> Result<()> {
    let mut w = csv_writer(path, &CURVE_HEADER)?;
    for (i, r) in curve.episode_rewards.iter().enumerate() {
        w.serialize((i + 1, r))?;
    }
    finish(w, path)
}

pub fn read_learning_curve(path: &Path) -> Result<LearningCurve> {
    let mut r = csv::Reader::from_path(path)?;
    let episode_rewards = r
        .deserialize::<(usize, f64)>()
        .map(|row| row.map(|(_, reward)| reward))
        .collect::<std::result::Result<_, _>>()?;
    Ok(LearningCurve { episode_rewards })
}

/// Per-episode mean and population standard deviation across trials.
pub fn summarize(curves: &[LearningCurve]) -> Result<Vec<(f64, f64)>> {
    let Some(first) = curves.first() else {
        return Err(Error::Usage("summary needs at least one curve".into()));
    };
    let len = first.episode_rewards.len();
    if curves.iter().any(|c| c.episode_rewards.len() != len) {
        return Err(Error::Usage("curves differ in length".into()));
    }
    let n = curves.len() as f64;
    Ok((0..len)
        .map(|t| {
            let mean = curves.iter().map(|c| c.episode_rewards[t]).sum::<f64>() / n;
            let var = curves
                .iter()
                .map(|c| (c.episode_rewards[t] - mean).powi(2))
                .sum::<f64>()
                / n;
            (mean, var.sqrt())
        })
        .collect())
}

pub fn write_summary(path: &Path, curves: &[LearningCurve]) -> Result<()> {
    let rows = summarize(curves)?;
    let mut w = csv_writer(path, &SUMMARY_HEADER)?;
    for (i, (mean, std)) in rows.into_iter().enumerate() {
        w.serialize((i + 1, mean, std))?;
    }
    finish(w, path)
}

/// One row per position, probabilities ordered by opcode.
pub fn write_frequency(path: &Path, m: &OpFrequencyMatrix) -> Result<()> {
    let mut w = csv_writer(path, &FREQUENCY_HEADER)?;
    for (pos, p) in m.probs.iter().enumerate() {
        w.serialize((pos, p[0], p[1], p[2], p[3]))?;
    }
    finish(w, path)
}

/// `generation,slot,genome,fitness` for every logged individual.
pub fn write_generations(path: &Path, report: &SearchReport) -> Result<()> {
    let mut w = csv_writer(path, &GENERATION_HEADER)?;
    for g in &report.generations {
        for (slot, ind) in g.individuals.iter().enumerate() {
            w.serialize((g.generation, slot, &ind.genome, ind.fitness))?;
        }
    }
    finish(w, path)
}
