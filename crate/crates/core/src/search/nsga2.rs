//! Non-dominated sorting and crowding distance (all objectives minimized).

use std::cmp::Ordering;

use rand::Rng;

/// `a` dominates `b`: no worse in every objective, better in at least one.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            better = true;
        }
    }
    better
}

/// Fronts of indices into `objs`, best front first. Indices within a front
/// are ascending.
pub fn non_dominated_sort(objs: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&objs[i], &objs[j]) {
                dominated_by[i].push(j);
                count[j] += 1;
            } else if dominates(&objs[j], &objs[i]) {
                dominated_by[j].push(i);
                count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of `front`, aligned with `front`.
#[allow(clippy::needless_range_loop)]
pub fn crowding_distances(objs: &[Vec<f64>], front: &[usize]) -> Vec<f64> {
    let k = front.len();
    let mut dist = vec![0.0; k];
    if k <= 2 {
        return vec![f64::INFINITY; k];
    }
    let n_obj = objs[front[0]].len();
    for m in 0..n_obj {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| {
            objs[front[a]][m]
                .partial_cmp(&objs[front[b]][m])
                .unwrap_or(Ordering::Equal)
                .then(front[a].cmp(&front[b]))
        });
        let lo = objs[front[order[0]]][m];
        let hi = objs[front[order[k - 1]]][m];
        dist[order[0]] = f64::INFINITY;
        dist[order[k - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..k - 1 {
            let prev = objs[front[order[w - 1]]][m];
            let next = objs[front[order[w + 1]]][m];
            dist[order[w]] += (next - prev) / range;
        }
    }
    dist
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub rank: Vec<usize>,
    pub crowding: Vec<f64>,
}

impl Ranking {
    /// Crowded-comparison order: lower rank, then larger crowding distance.
    pub fn compare(&self, a: usize, b: usize) -> Ordering {
        self.rank[a].cmp(&self.rank[b]).then_with(|| {
            self.crowding[b]
                .partial_cmp(&self.crowding[a])
                .unwrap_or(Ordering::Equal)
        })
    }
}

pub fn rank_and_crowding(objs: &[Vec<f64>]) -> Ranking {
    let mut rank = vec![0; objs.len()];
    let mut crowding = vec![0.0; objs.len()];
    for (r, front) in non_dominated_sort(objs).iter().enumerate() {
        for (&i, d) in front.iter().zip(crowding_distances(objs, front)) {
            rank[i] = r;
            crowding[i] = d;
        }
    }
    Ranking { rank, crowding }
}

/// Indices of the `n` survivors in crowded-comparison order (ties by index).
pub fn select_survivors(objs: &[Vec<f64>], n: usize) -> Vec<usize> {
    let ranking = rank_and_crowding(objs);
    let mut order: Vec<usize> = (0..objs.len()).collect();
    order.sort_by(|&a, &b| ranking.compare(a, b).then(a.cmp(&b)));
    order.truncate(n);
    order
}

/// Binary tournament under the crowded-comparison order; exact ties are
/// broken by a coin flip.
pub fn binary_tournament<R: Rng + ?Sized>(ranking: &Ranking, rng: &mut R) -> usize {
    let n = ranking.rank.len();
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    match ranking.compare(a, b) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if rng.random::<bool>() {
                a
            } else {
                b
            }
        }
    }
}
