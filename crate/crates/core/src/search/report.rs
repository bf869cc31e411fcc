use serde::{Deserialize, Serialize};

use super::{Individual, SearchConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualRecord {
    /// Decoded architecture as a genome with an explicit terminator.
    pub genome: String,
    /// Full-length genome including inert genes.
    pub raw: String,
    pub fitness: f64,
    pub eval_seed: u64,
    pub episodes: usize,
}

impl From<&Individual> for IndividualRecord {
    fn from(ind: &Individual) -> Self {
        Self {
            genome: ind.genome.normalized().to_string(),
            raw: ind.genome.to_string(),
            fitness: ind.fitness_or_panic(),
            eval_seed: ind.eval_seed,
            episodes: ind.eval_episodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationLog {
    pub generation: usize,
    pub individuals: Vec<IndividualRecord>,
    pub best: IndividualRecord,
}

impl GenerationLog {
    pub(crate) fn new(generation: usize, pop: &[Individual]) -> Self {
        let individuals: Vec<IndividualRecord> = pop.iter().map(IndividualRecord::from).collect();
        let best = best_of(&individuals).clone();
        Self {
            generation,
            individuals,
            best,
        }
    }
}

/// Highest fitness; earliest slot wins ties.
fn best_of(records: &[IndividualRecord]) -> &IndividualRecord {
    records
        .iter()
        .reduce(|a, b| if b.fitness > a.fitness { b } else { a })
        .expect("non-empty population")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub evaluator: serde_json::Value,
    pub generations: Vec<GenerationLog>,
    pub best: IndividualRecord,
}

impl SearchReport {
    pub(crate) fn new(
        config: SearchConfig,
        evaluator: serde_json::Value,
        generations: Vec<GenerationLog>,
    ) -> Self {
        let bests: Vec<IndividualRecord> = generations.iter().map(|g| g.best.clone()).collect();
        let best = best_of(&bests).clone();
        Self {
            config,
            evaluator,
            generations,
            best,
        }
    }

    /// Every logged individual across all generations.
    pub fn all_individuals(&self) -> impl Iterator<Item = &IndividualRecord> {
        self.generations.iter().flat_map(|g| g.individuals.iter())
    }
}
