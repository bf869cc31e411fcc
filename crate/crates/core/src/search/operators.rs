//! Variation and duplicate elimination on fixed-length genomes.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::genome::{random_raw_genome, Architecture, Genome, OpCode};

/// Swap `a[i..j]` and `b[i..j]`.
pub fn crossover_at(a: &Genome, b: &Genome, i: usize, j: usize) -> Result<(Genome, Genome)> {
    if a.len() != b.len() {
        return Err(Error::Usage(format!(
            "two-point crossover needs equal-length parents, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if i > j || j > a.len() {
        return Err(Error::Index(format!(
            "bad cut points ({i}, {j}) for length {}",
            a.len()
        )));
    }
    let mut x = a.codes().to_vec();
    let mut y = b.codes().to_vec();
    x[i..j].swap_with_slice(&mut y[i..j]);
    Ok((Genome::new(x, a.max_len())?, Genome::new(y, b.max_len())?))
}

/// Two cut points `i < j` drawn uniformly from `0..=len`.
pub fn two_point_crossover<R: Rng + ?Sized>(
    a: &Genome,
    b: &Genome,
    rng: &mut R,
) -> Result<(Genome, Genome)> {
    let n = a.len();
    let i = rng.random_range(0..=n);
    let mut j = rng.random_range(0..n);
    if j >= i {
        j += 1;
    }
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    crossover_at(a, b, i, j)
}

const LOWER: f64 = 0.0;
const UPPER: f64 = 3.0;

/// Bounded polynomial perturbation of one value in `[LOWER, UPPER]` using
/// uniform `u`, distribution index `eta`.
fn polynomial_perturb(x: f64, eta: f64, u: f64) -> f64 {
    let span = UPPER - LOWER;
    let delta1 = (x - LOWER) / span;
    let delta2 = (UPPER - x) / span;
    let pow = 1.0 / (eta + 1.0);
    let deltaq = if u <= 0.5 {
        let xy = 1.0 - delta1;
        let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
        val.powf(pow) - 1.0
    } else {
        let xy = 1.0 - delta2;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
        1.0 - val.powf(pow)
    };
    (x + deltaq * span).clamp(LOWER, UPPER)
}

/// Polynomial mutation in integer space: each gene mutates with
/// probability `prob`, then is rounded and clamped to an opcode.
pub fn polynomial_mutation_int<R: Rng + ?Sized>(
    g: &Genome,
    eta: f64,
    prob: f64,
    rng: &mut R,
) -> Genome {
    let codes = g
        .codes()
        .iter()
        .map(|&c| {
            if rng.random::<f64>() >= prob {
                return c;
            }
            let y = polynomial_perturb(f64::from(c.as_int()), eta, rng.random::<f64>());
            OpCode::from_int(y.round().clamp(LOWER, UPPER) as i64).expect("clamped to opcode range")
        })
        .collect();
    Genome::new(codes, g.max_len()).expect("length unchanged")
}

const REFILL_ATTEMPTS: usize = 100_000;

/// Keep the first genome for each decoded architecture (also dropping any
/// already present in `existing`), then refill to the input size with fresh
/// random genomes of distinct architectures.
pub fn eliminate_duplicates<R: Rng + ?Sized>(
    pop: &[Genome],
    existing: &[Genome],
    max_len: usize,
    rng: &mut R,
) -> Result<Vec<Genome>> {
    let mut seen: HashSet<Architecture> = existing.iter().map(Genome::decode).collect();
    let mut out: Vec<Genome> = pop
        .iter()
        .filter(|g| seen.insert(g.decode()))
        .cloned()
        .collect();
    let mut attempts = 0;
    while out.len() < pop.len() {
        let g = random_raw_genome(rng, max_len);
        if seen.insert(g.decode()) {
            out.push(g);
        }
        attempts += 1;
        if attempts > REFILL_ATTEMPTS {
            return Err(Error::Config(format!(
                "could not find {} distinct architectures with max_len {max_len}",
                pop.len() + existing.len()
            )));
        }
    }
    Ok(out)
}
