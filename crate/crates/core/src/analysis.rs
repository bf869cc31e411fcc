//! Post-search statistics: positional opcode frequencies over the best
//! architectures and trailing-window smoothing of curves.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::genome::{Genome, OpCode};
use crate::search::{IndividualRecord, SearchReport};

/// Row `i` is the empirical distribution over opcodes at position `i`,
/// columns ordered by opcode value.
#[derive(Debug, Clone, PartialEq)]
pub struct OpFrequencyMatrix {
    pub probs: Vec<[f64; 4]>,
}

impl OpFrequencyMatrix {
    pub fn positions(&self) -> usize {
        self.probs.len()
    }

    /// Smooth each opcode column along the position axis.
    pub fn smoothed(&self, window: usize) -> Result<OpFrequencyMatrix> {
        let mut probs = vec![[0.0; 4]; self.probs.len()];
        for c in 0..4 {
            let col: Vec<f64> = self.probs.iter().map(|r| r[c]).collect();
            for (row, v) in probs.iter_mut().zip(smooth(&col, window)?) {
                row[c] = v;
            }
        }
        Ok(OpFrequencyMatrix { probs })
    }
}

/// Position-wise opcode distribution over normalized genomes. A genome that
/// has already terminated counts as a measurement at later positions.
pub fn op_frequency(genomes: &[Genome]) -> Result<OpFrequencyMatrix> {
    if genomes.is_empty() {
        return Err(Error::Usage(
            "op_frequency needs at least one genome".into(),
        ));
    }
    let normalized: Vec<Genome> = genomes.iter().map(Genome::normalized).collect();
    let width = normalized.iter().map(Genome::len).max().unwrap_or(0);
    let mut counts = vec![[0usize; 4]; width];
    for g in &normalized {
        for (pos, row) in counts.iter_mut().enumerate() {
            let code = g.codes().get(pos).copied().unwrap_or(OpCode::Measurement);
            row[code.as_int() as usize] += 1;
        }
    }
    let n = normalized.len() as f64;
    let probs = counts
        .into_iter()
        .map(|row| row.map(|c| c as f64 / n))
        .collect();
    Ok(OpFrequencyMatrix { probs })
}

/// Trailing moving average: entry `t` is the mean of
/// `curve[max(0, t + 1 - window) ..= t]`.
pub fn smooth(curve: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::Usage("smoothing window must be at least 1".into()));
    }
    Ok((0..curve.len())
        .map(|t| {
            let lo = (t + 1).saturating_sub(window);
            let span = &curve[lo..=t];
            span.iter().sum::<f64>() / span.len() as f64
        })
        .collect())
}

/// The `k` best distinct architectures seen anywhere in a search, each with
/// its best recorded fitness. Ties keep first-seen order. Returns fewer than
/// `k` (with a warning) when the report holds fewer distinct architectures.
pub fn top_k(report: &SearchReport, k: usize) -> Vec<IndividualRecord> {
    let mut order: Vec<IndividualRecord> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for rec in report.all_individuals() {
        match index.get(&rec.genome) {
            Some(&i) => {
                if rec.fitness > order[i].fitness {
                    order[i] = rec.clone();
                }
            }
            None => {
                index.insert(rec.genome.clone(), order.len());
                order.push(rec.clone());
            }
        }
    }
    if order.len() < k {
        log::warn!(
            "requested top {k} architectures but the report holds only {}",
            order.len()
        );
    }
    // stable sort keeps first-seen order among equal fitness
    order.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
    order.truncate(k);
    order
}
