//! Searching for refuting colorings.
//!
//! An arrow instance is reduced to a hypergraph: `m` colorable items and one
//! edge per witness (the items it composes to). A coloring refutes the arrow
//! when every edge sees more than `t` colors.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Refuted(Vec<usize>),
    NoRefutation,
    OutOfBudget,
}

struct State {
    member: Vec<Vec<usize>>,
    order: Vec<usize>,
    k: usize,
    t: usize,
    counts: Vec<usize>,
    distinct: Vec<usize>,
    open: Vec<usize>,
    color: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl State {
    fn assign(&mut self, item: usize, c: usize) -> bool {
        self.color[item] = c;
        let mut alive = true;
        for &j in &self.member[item] {
            let slot = &mut self.counts[j * self.k + c];
            *slot += 1;
            if *slot == 1 {
                self.distinct[j] += 1;
            }
            self.open[j] -= 1;
            let reachable = self.distinct[j] + self.open[j].min(self.k - self.distinct[j]);
            alive &= reachable > self.t;
        }
        alive
    }

    fn unassign(&mut self, item: usize) {
        let c = self.color[item];
        for &j in &self.member[item] {
            let slot = &mut self.counts[j * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.distinct[j] -= 1;
            }
            self.open[j] += 1;
        }
        self.color[item] = usize::MAX;
    }

    fn dfs(&mut self, pos: usize, used: usize) -> Outcome {
        if pos == self.order.len() {
            return Outcome::Refuted(self.color.clone());
        }
        let item = self.order[pos];
        // colors are introduced in order, so only one new color is tried
        for c in 0..(used + 1).min(self.k) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Outcome::OutOfBudget;
            }
            if self.assign(item, c) {
                match self.dfs(pos + 1, used.max(c + 1)) {
                    Outcome::NoRefutation => {}
                    other => {
                        self.unassign(item);
                        return other;
                    }
                }
            }
            self.unassign(item);
        }
        Outcome::NoRefutation
    }
}

/// Backtracking over colorings up to renaming of colors. Returns the outcome
/// and the number of nodes visited.
pub(crate) fn exhaustive(m: usize, sets: &[Vec<usize>], k: usize, t: usize, budget: u64) -> (Outcome, u64) {
    if sets.iter().any(|s| s.len().min(k) <= t) {
        return (Outcome::NoRefutation, 0);
    }
    let mut order = Vec::with_capacity(m);
    let mut seen = vec![false; m];
    let mut member = vec![Vec::new(); m];
    for (j, s) in sets.iter().enumerate() {
        for &i in s {
            member[i].push(j);
            if !seen[i] {
                seen[i] = true;
                order.push(i);
            }
        }
    }
    // items outside every edge never matter
    let mut state = State {
        member,
        order,
        k,
        t,
        counts: vec![0; sets.len() * k],
        distinct: vec![0; sets.len()],
        open: sets.iter().map(Vec::len).collect(),
        color: vec![usize::MAX; m],
        nodes: 0,
        budget,
    };
    let outcome = match state.dfs(0, 0) {
        Outcome::Refuted(mut c) => {
            c.iter_mut().filter(|x| **x == usize::MAX).for_each(|x| *x = 0);
            Outcome::Refuted(c)
        }
        other => other,
    };
    (outcome, state.nodes)
}

/// Min-conflicts local search for a refuting coloring.
pub(crate) fn randomized(m: usize, sets: &[Vec<usize>], k: usize, t: usize, steps: u64, seed: u64) -> (Option<Vec<usize>>, u64) {
    if m == 0 || sets.iter().any(|s| s.len().min(k) <= t) {
        return (None, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut member = vec![Vec::new(); m];
    for (j, s) in sets.iter().enumerate() {
        for &i in s {
            member[i].push(j);
        }
    }
    let mut color: Vec<usize> = (0..m).map(|_| rng.random_range(0..k)).collect();
    let mut counts = vec![0usize; sets.len() * k];
    let mut distinct = vec![0usize; sets.len()];
    for (j, s) in sets.iter().enumerate() {
        for &i in s {
            counts[j * k + color[i]] += 1;
            if counts[j * k + color[i]] == 1 {
                distinct[j] += 1;
            }
        }
    }
    let bad = |distinct: &[usize]| -> Vec<usize> { (0..sets.len()).filter(|&j| distinct[j] <= t).collect() };
    for step in 0..steps {
        let unsatisfied = bad(&distinct);
        if unsatisfied.is_empty() {
            return (Some(color), step);
        }
        let j = unsatisfied[rng.random_range(0..unsatisfied.len())];
        let item = sets[j][rng.random_range(0..sets[j].len())];
        let old = color[item];
        // edges around `item` left with at most t colors after recoloring to c
        let score = |c: usize| -> usize {
            member[item]
                .iter()
                .filter(|&&e| {
                    let d = if c == old {
                        distinct[e]
                    } else {
                        distinct[e] - usize::from(counts[e * k + old] == 1) + usize::from(counts[e * k + c] == 0)
                    };
                    d <= t
                })
                .count()
        };
        let new = if rng.random_bool(0.2) {
            rng.random_range(0..k)
        } else {
            (0..k).min_by_key(|&c| (score(c), c == old)).unwrap()
        };
        if new == old {
            continue;
        }
        for &e in &member[item] {
            counts[e * k + old] -= 1;
            if counts[e * k + old] == 0 {
                distinct[e] -= 1;
            }
            counts[e * k + new] += 1;
            if counts[e * k + new] == 1 {
                distinct[e] += 1;
            }
        }
        color[item] = new;
    }
    if bad(&distinct).is_empty() {
        return (Some(color), steps);
    }
    (None, steps)
}
