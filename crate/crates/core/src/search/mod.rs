//! NSGA-II search over genomes with RL-trained fitness.
//!
//! Genomes are kept at full `max_len` length (genes after the first
//! measurement are inert) so crossover always sees equal-length parents.
//! All randomness is derived from `SearchConfig::seed`, per generation and
//! per slot, so results do not depend on how evaluations are scheduled.

mod nsga2;
mod operators;
mod report;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use nsga2::{
    binary_tournament, crowding_distances, dominates, non_dominated_sort, rank_and_crowding,
    select_survivors, Ranking,
};
pub use operators::{
    crossover_at, eliminate_duplicates, polynomial_mutation_int, two_point_crossover,
};
pub use report::{GenerationLog, IndividualRecord, SearchReport};

use crate::env::EnvKind;
use crate::error::{Error, Result};
use crate::genome::{random_raw_genome, search_space_size, Genome};
use crate::reinforce::{self, TrainConfig};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchConfig {
    pub pop_size: usize,
    pub generations: usize,
    pub max_len: usize,
    pub episode_factor: f64,
    pub crossover_prob: f64,
    /// Per-gene mutation probability; `None` means `1 / max_len`.
    pub mutation_prob: Option<f64>,
    pub mutation_eta: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            pop_size: 20,
            generations: 20,
            max_len: 30,
            episode_factor: 0.8,
            crossover_prob: 0.9,
            mutation_prob: None,
            mutation_eta: 20.0,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn mutation_prob(&self) -> f64 {
        self.mutation_prob.unwrap_or(1.0 / self.max_len as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: String| Err(Error::Config(format!("search.{field}: {why}")));
        if self.pop_size < 2 || !self.pop_size.is_multiple_of(2) {
            return bad(
                "pop_size",
                format!("must be even and at least 2, got {}", self.pop_size),
            );
        }
        if self.max_len == 0 {
            return bad("max_len", "must be at least 1".into());
        }
        if !(self.episode_factor > 0.0 && self.episode_factor <= 1.0) {
            return bad(
                "episode_factor",
                format!("must be in (0, 1], got {}", self.episode_factor),
            );
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return bad("crossover_prob", "must be in [0, 1]".into());
        }
        if !(0.0..=1.0).contains(&self.mutation_prob()) {
            return bad("mutation_prob", "must be in [0, 1]".into());
        }
        if !(self.mutation_eta.is_finite() && self.mutation_eta >= 0.0) {
            return bad("mutation_eta", "must be non-negative".into());
        }
        // parents and offspring must all be distinct architectures
        if search_space_size(self.max_len) < BigUint::from(2 * self.pop_size) {
            return bad(
                "max_len",
                format!(
                    "{} admits fewer than 2 × pop_size distinct architectures",
                    self.max_len
                ),
            );
        }
        Ok(())
    }

    /// Training episodes per fitness evaluation.
    pub fn eval_episodes(&self, base_episodes: usize) -> usize {
        (self.episode_factor * base_episodes as f64).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub fitness: Option<f64>,
    pub eval_seed: u64,
    pub eval_episodes: usize,
}

impl Individual {
    pub fn new(genome: Genome) -> Self {
        Self {
            genome,
            fitness: None,
            eval_seed: 0,
            eval_episodes: 0,
        }
    }

    fn fitness_or_panic(&self) -> f64 {
        self.fitness.expect("individual evaluated before selection")
    }
}

/// Maps a genome to a fitness value (higher is better).
pub trait Evaluator: Sync {
    fn evaluate(&self, genome: &Genome, seed: u64) -> Result<f64>;

    /// Episode budget recorded alongside each evaluation.
    fn episodes(&self) -> usize;

    /// Fitness assigned when evaluation fails.
    fn penalty(&self) -> f64;

    /// Echoed into the search report.
    fn describe(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

/// One REINFORCE trial per evaluation; fitness is the mean episode reward.
#[derive(Debug, Clone)]
pub struct RlEvaluator {
    pub env: EnvKind,
    pub train: TrainConfig,
}

impl RlEvaluator {
    /// `train.episodes` is the full budget; evaluations use
    /// `episode_factor` of it.
    pub fn new(env: EnvKind, train: TrainConfig, search: &SearchConfig) -> Self {
        let mut train = train;
        train.episodes = search.eval_episodes(train.episodes);
        Self { env, train }
    }
}

impl Evaluator for RlEvaluator {
    fn evaluate(&self, genome: &Genome, seed: u64) -> Result<f64> {
        let cfg = TrainConfig {
            seed,
            ..self.train.clone()
        };
        let out = reinforce::train(&genome.decode(), self.env, &cfg)?;
        reinforce::fitness(&out.curve)
    }

    fn episodes(&self) -> usize {
        self.train.episodes
    }

    fn penalty(&self) -> f64 {
        self.env.min_episode_return()
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::json!({ "env": self.env, "train": self.train })
    }
}

/// Evaluate `ind` with `seed`; failures get the evaluator's penalty.
pub fn evaluate<E: Evaluator + ?Sized>(ind: &Individual, evaluator: &E, seed: u64) -> Individual {
    let fitness = match evaluator.evaluate(&ind.genome, seed) {
        Ok(f) if f.is_finite() => f,
        Ok(f) => {
            log::warn!(
                "genome {} produced non-finite fitness {f}; penalized",
                ind.genome
            );
            evaluator.penalty()
        }
        Err(e) => {
            log::warn!("evaluation of genome {} failed: {e}; penalized", ind.genome);
            evaluator.penalty()
        }
    };
    Individual {
        genome: ind.genome.clone(),
        fitness: Some(fitness),
        eval_seed: seed,
        eval_episodes: evaluator.episodes(),
    }
}

fn evaluate_all<E: Evaluator + ?Sized>(
    genomes: Vec<Genome>,
    evaluator: &E,
    root: u64,
    generation: usize,
) -> Vec<Individual> {
    genomes
        .into_par_iter()
        .enumerate()
        .map(|(slot, g)| {
            let s = seed::derive(root, "eval", &[generation as u64, slot as u64]);
            evaluate(&Individual::new(g), evaluator, s)
        })
        .collect()
}

fn objectives(pop: &[Individual]) -> Vec<Vec<f64>> {
    pop.iter().map(|i| vec![-i.fitness_or_panic()]).collect()
}

/// One NSGA-II generation: tournament selection, two-point crossover,
/// integer polynomial mutation, duplicate elimination, parallel evaluation
/// and crowded-comparison survival from parents ∪ offspring.
pub fn nsga2_generation<E: Evaluator + ?Sized>(
    parents: &[Individual],
    cfg: &SearchConfig,
    evaluator: &E,
    generation: usize,
) -> Result<Vec<Individual>> {
    let n = cfg.pop_size;
    let mut rng = seed::derived_rng(cfg.seed, "variation", &[generation as u64]);
    let ranking = rank_and_crowding(&objectives(parents));

    let mut offspring = Vec::with_capacity(n + 1);
    while offspring.len() < n {
        let a = &parents[binary_tournament(&ranking, &mut rng)].genome;
        let b = &parents[binary_tournament(&ranking, &mut rng)].genome;
        let (x, y) = if rand::Rng::random::<f64>(&mut rng) < cfg.crossover_prob {
            two_point_crossover(a, b, &mut rng)?
        } else {
            (a.clone(), b.clone())
        };
        for child in [x, y] {
            offspring.push(polynomial_mutation_int(
                &child,
                cfg.mutation_eta,
                cfg.mutation_prob(),
                &mut rng,
            ));
        }
    }
    offspring.truncate(n);
    let existing: Vec<Genome> = parents.iter().map(|p| p.genome.clone()).collect();
    let offspring = eliminate_duplicates(&offspring, &existing, cfg.max_len, &mut rng)?;

    let mut merged = parents.to_vec();
    merged.extend(evaluate_all(offspring, evaluator, cfg.seed, generation));
    let keep = select_survivors(&objectives(&merged), n);
    Ok(keep.into_iter().map(|i| merged[i].clone()).collect())
}

pub fn initial_population<E: Evaluator + ?Sized>(
    cfg: &SearchConfig,
    evaluator: &E,
) -> Result<Vec<Individual>> {
    let mut rng = seed::derived_rng(cfg.seed, "init-population", &[]);
    let raw: Vec<Genome> = (0..cfg.pop_size)
        .map(|_| random_raw_genome(&mut rng, cfg.max_len))
        .collect();
    let genomes = eliminate_duplicates(&raw, &[], cfg.max_len, &mut rng)?;
    Ok(evaluate_all(genomes, evaluator, cfg.seed, 0))
}

/// Full search: evaluated random initial population, then
/// `cfg.generations` NSGA-II generations. Runs on the current rayon pool.
pub fn run_search<E: Evaluator + ?Sized>(
    cfg: &SearchConfig,
    evaluator: &E,
) -> Result<SearchReport> {
    cfg.validate()?;
    let mut pop = initial_population(cfg, evaluator)?;
    let mut logs = vec![GenerationLog::new(0, &pop)];
    log::info!("generation 0: best {}", logs[0].best.fitness);
    for generation in 1..=cfg.generations {
        pop = nsga2_generation(&pop, cfg, evaluator, generation)?;
        let entry = GenerationLog::new(generation, &pop);
        log::info!(
            "generation {generation}: best {} ({})",
            entry.best.fitness,
            entry.best.genome
        );
        logs.push(entry);
    }
    Ok(SearchReport::new(cfg.clone(), evaluator.describe(), logs))
}
