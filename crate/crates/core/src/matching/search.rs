//! Perfect-matching search: complete backtracking and a randomized
//! kick-out local search.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{verify_perfect_matching, Matching, RelatorHypergraph, Triple};
use crate::error::{Error, Result};

/// Largest part size accepted by the exact solver unless overridden.
pub const DEFAULT_EXACT_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchOptions {
    pub mode: MatchMode,
    pub exact_cap: usize,
    /// Search-node budget for the exact solver.
    pub node_budget: u64,
    pub restarts: usize,
    /// Kick-out steps per restart; `None` scales with the part size.
    pub steps_per_restart: Option<usize>,
    pub seed: u64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            mode: MatchMode::Heuristic,
            exact_cap: DEFAULT_EXACT_CAP,
            node_budget: 50_000_000,
            restarts: 200,
            steps_per_restart: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatchOutcome {
    Found(Matching),
    /// Heuristic search failed; nothing is proved.
    NotFound,
    /// Exhaustive search found no perfect matching.
    ProvedNone,
    /// The exact solver ran out of nodes before deciding.
    BudgetExhausted,
}

impl MatchOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            MatchOutcome::Found(_) => "found",
            MatchOutcome::NotFound => "not_found",
            MatchOutcome::ProvedNone => "proved_none",
            MatchOutcome::BudgetExhausted => "budget_exhausted",
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, MatchOutcome::Found(_))
    }
}

pub fn find_perfect_matching(h: &RelatorHypergraph, opts: &MatchOptions) -> Result<MatchOutcome> {
    let n = h.part_size();
    let outcome = match opts.mode {
        MatchMode::Exact => {
            if n > opts.exact_cap {
                return Err(Error::ExactCapExceeded {
                    part_size: n,
                    cap: opts.exact_cap,
                });
            }
            Exact::new(h).run(opts.node_budget)
        }
        MatchMode::Heuristic => heuristic(h, opts),
    };
    if let MatchOutcome::Found(mt) = &outcome {
        verify_perfect_matching(h, mt)
            .map_err(|e| Error::Internal(format!("search returned an invalid matching: {e}")))?;
    }
    Ok(outcome)
}

/// Edges incident to each vertex of each part.
fn incidence(h: &RelatorHypergraph) -> [Vec<Vec<usize>>; 3] {
    let n = h.part_size();
    let mut inc: [Vec<Vec<usize>>; 3] = std::array::from_fn(|_| vec![Vec::new(); n]);
    for (i, e) in h.edges().iter().enumerate() {
        for k in 0..3 {
            inc[k][e[k]].push(i);
        }
    }
    inc
}

struct Exact<'a> {
    h: &'a RelatorHypergraph,
    edges: &'a [Triple],
    n: usize,
    inc: [Vec<Vec<usize>>; 3],
    covered: [Vec<bool>; 3],
    /// Number of covered vertices on each edge; available iff zero.
    blocked: Vec<u8>,
    /// Available edges at each vertex.
    avail: [Vec<u32>; 3],
    chosen: Vec<usize>,
    nodes: u64,
}

enum Step {
    Done,
    Dead,
    OutOfBudget,
}

impl<'a> Exact<'a> {
    fn new(h: &'a RelatorHypergraph) -> Self {
        let n = h.part_size();
        let inc = incidence(h);
        let avail = std::array::from_fn(|k| inc[k].iter().map(|l| l.len() as u32).collect());
        Exact {
            h,
            edges: h.edges(),
            n,
            inc,
            covered: std::array::from_fn(|_| vec![false; n]),
            blocked: vec![0; h.edge_count()],
            avail,
            chosen: Vec::with_capacity(n),
            nodes: 0,
        }
    }

    fn run(mut self, budget: u64) -> MatchOutcome {
        if self.edges.len() < self.n {
            return MatchOutcome::ProvedNone;
        }
        match self.search(budget) {
            Step::Done => {
                let edges = self.chosen.iter().map(|&i| self.edges[i]).collect();
                MatchOutcome::Found(Matching::new(self.h, edges))
            }
            Step::Dead => MatchOutcome::ProvedNone,
            Step::OutOfBudget => MatchOutcome::BudgetExhausted,
        }
    }

    fn cover(&mut self, k: usize, v: usize) {
        self.covered[k][v] = true;
        for idx in 0..self.inc[k][v].len() {
            let e = self.inc[k][v][idx];
            self.blocked[e] += 1;
            if self.blocked[e] == 1 {
                let t = self.edges[e];
                for (avail, &x) in self.avail.iter_mut().zip(&t) {
                    avail[x] -= 1;
                }
            }
        }
    }

    fn uncover(&mut self, k: usize, v: usize) {
        self.covered[k][v] = false;
        for idx in 0..self.inc[k][v].len() {
            let e = self.inc[k][v][idx];
            self.blocked[e] -= 1;
            if self.blocked[e] == 0 {
                let t = self.edges[e];
                for (avail, &x) in self.avail.iter_mut().zip(&t) {
                    avail[x] += 1;
                }
            }
        }
    }

    /// Uncovered vertex with the fewest available edges, over all parts.
    fn pick(&self) -> Option<(usize, usize, u32)> {
        let mut best: Option<(usize, usize, u32)> = None;
        for k in 0..3 {
            for v in 0..self.n {
                if self.covered[k][v] {
                    continue;
                }
                let a = self.avail[k][v];
                if best.is_none_or(|b| a < b.2) {
                    best = Some((k, v, a));
                    if a == 0 {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn search(&mut self, budget: u64) -> Step {
        self.nodes += 1;
        if self.nodes > budget {
            return Step::OutOfBudget;
        }
        let Some((k, v, a)) = self.pick() else {
            return Step::Done;
        };
        if a == 0 {
            return Step::Dead;
        }
        let options: Vec<usize> = self.inc[k][v]
            .iter()
            .copied()
            .filter(|&e| self.blocked[e] == 0)
            .collect();
        for e in options {
            let t = self.edges[e];
            for (j, &x) in t.iter().enumerate() {
                self.cover(j, x);
            }
            self.chosen.push(e);
            match self.search(budget) {
                Step::Done => return Step::Done,
                Step::OutOfBudget => return Step::OutOfBudget,
                Step::Dead => {}
            }
            self.chosen.pop();
            for j in (0..3).rev() {
                self.uncover(j, t[j]);
            }
        }
        Step::Dead
    }
}

/// Randomized greedy followed by kick-out moves. Restarts run in parallel
/// with independent streams; the lowest successful restart wins.
fn heuristic(h: &RelatorHypergraph, opts: &MatchOptions) -> MatchOutcome {
    let n = h.part_size();
    if h.edge_count() < n {
        return MatchOutcome::NotFound;
    }
    let inc = incidence(h);
    if inc.iter().any(|part| part.iter().any(|l| l.is_empty())) {
        return MatchOutcome::NotFound;
    }
    let steps = opts.steps_per_restart.unwrap_or(200 * n + 1000);
    let found = (0..opts.restarts as u64)
        .into_par_iter()
        .find_map_first(|r| {
            let seed = crate::experiments::mix_seed(opts.seed, 0x6d61_7463_6869_6e67, r);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            kick_out_walk(h, &inc, steps, &mut rng)
        });
    match found {
        Some(edges) => MatchOutcome::Found(Matching::new(h, edges)),
        None => MatchOutcome::NotFound,
    }
}

const NONE: usize = usize::MAX;

fn kick_out_walk<R: Rng>(
    h: &RelatorHypergraph,
    inc: &[Vec<Vec<usize>>; 3],
    steps: usize,
    rng: &mut R,
) -> Option<Vec<Triple>> {
    let n = h.part_size();
    let edges = h.edges();
    // owner[k][v]: matched edge covering v in part k
    let mut owner = [vec![NONE; n], vec![NONE; n], vec![NONE; n]];
    let mut free = FreeSets::new(n);
    let mut size = 0usize;
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(rng);
    for e in order {
        let t = edges[e];
        if (0..3).all(|k| owner[k][t[k]] == NONE) {
            for k in 0..3 {
                owner[k][t[k]] = e;
                free.remove(k, t[k]);
            }
            size += 1;
        }
    }
    let mut conflicts: Vec<usize> = Vec::with_capacity(2);
    let mut singles: Vec<usize> = Vec::new();
    for _ in 0..steps {
        if size == n {
            break;
        }
        let part = rng.gen_range(0..3);
        let x = free.pick(part, rng);
        let cand = &inc[part][x];
        // an edge on free vertices, else a random single swap, else rarely a double kick
        singles.clear();
        let mut chosen = NONE;
        for &e in cand {
            let t = edges[e];
            let (a, b) = match part {
                0 => (owner[1][t[1]], owner[2][t[2]]),
                1 => (owner[0][t[0]], owner[2][t[2]]),
                _ => (owner[0][t[0]], owner[1][t[1]]),
            };
            let c = usize::from(a != NONE) + usize::from(b != NONE && b != a);
            if c == 0 {
                chosen = e;
                break;
            }
            if c == 1 {
                singles.push(e);
            }
        }
        if chosen == NONE {
            if !singles.is_empty() {
                chosen = singles[rng.gen_range(0..singles.len())];
            } else if n - size == 1 || rng.gen_bool(KICK_PROBABILITY) {
                // swaps alone rarely close the last gap
                chosen = cand[rng.gen_range(0..cand.len())];
            } else {
                continue;
            }
        }
        let t = edges[chosen];
        conflicts.clear();
        for k in 0..3 {
            let o = owner[k][t[k]];
            if o != NONE && !conflicts.contains(&o) {
                conflicts.push(o);
            }
        }
        for &o in &conflicts {
            let u = edges[o];
            for k in 0..3 {
                owner[k][u[k]] = NONE;
                free.insert(k, u[k]);
            }
            size -= 1;
        }
        for k in 0..3 {
            owner[k][t[k]] = chosen;
            free.remove(k, t[k]);
        }
        size += 1;
    }
    if size < n {
        return None;
    }
    Some((0..n).map(|v| edges[owner[0][v]]).collect())
}

/// Chance of a double kick when a free vertex admits no single swap.
const KICK_PROBABILITY: f64 = 0.002;

/// Uncovered vertices per part with O(1) insert, remove and sampling.
struct FreeSets {
    items: [Vec<usize>; 3],
    pos: [Vec<usize>; 3],
}

impl FreeSets {
    fn new(n: usize) -> Self {
        FreeSets {
            items: [(0..n).collect(), (0..n).collect(), (0..n).collect()],
            pos: [(0..n).collect(), (0..n).collect(), (0..n).collect()],
        }
    }

    fn insert(&mut self, k: usize, v: usize) {
        if self.pos[k][v] == NONE {
            self.pos[k][v] = self.items[k].len();
            self.items[k].push(v);
        }
    }

    fn remove(&mut self, k: usize, v: usize) {
        let i = self.pos[k][v];
        if i == NONE {
            return;
        }
        let last = *self.items[k].last().unwrap();
        self.items[k].swap_remove(i);
        if last != v {
            self.pos[k][last] = i;
        }
        self.pos[k][v] = NONE;
    }

    fn pick<R: Rng>(&self, k: usize, rng: &mut R) -> usize {
        self.items[k][rng.gen_range(0..self.items[k].len())]
    }
}

#[cfg(test)]
mod tests {
    use super::super::{sample_tripartite, Alphabet};
    use super::*;
    use rand::SeedableRng;

    fn plain(n: usize, edges: &[Triple]) -> RelatorHypergraph {
        RelatorHypergraph::new(Alphabet::Plain { part_size: n }, edges.iter().copied()).unwrap()
    }

    fn exact() -> MatchOptions {
        MatchOptions {
            mode: MatchMode::Exact,
            ..MatchOptions::default()
        }
    }

    #[test]
    fn small_cases() {
        let one = plain(1, &[[0, 0, 0]]);
        for opts in [exact(), MatchOptions::default()] {
            match find_perfect_matching(&one, &opts).unwrap() {
                MatchOutcome::Found(mt) => assert_eq!(mt.edges, vec![[0, 0, 0]]),
                other => panic!("{other:?}"),
            }
            let two = plain(2, &[[0, 0, 0], [1, 1, 1]]);
            match find_perfect_matching(&two, &opts).unwrap() {
                MatchOutcome::Found(mt) => assert_eq!(mt.edges, vec![[0, 0, 0], [1, 1, 1]]),
                other => panic!("{other:?}"),
            }
        }
        let none = plain(2, &[[0, 0, 0], [0, 1, 1], [1, 1, 0]]);
        assert_eq!(
            find_perfect_matching(&none, &exact()).unwrap(),
            MatchOutcome::ProvedNone
        );
        assert_eq!(
            find_perfect_matching(&none, &MatchOptions::default()).unwrap(),
            MatchOutcome::NotFound
        );
    }

    #[test]
    fn exact_cap_and_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let big =
            sample_tripartite(Alphabet::Plain { part_size: 70 }, 500, false, &mut rng).unwrap();
        assert!(matches!(
            find_perfect_matching(&big, &exact()),
            Err(Error::ExactCapExceeded { .. })
        ));
        let h = sample_tripartite(Alphabet::Plain { part_size: 30 }, 200, false, &mut rng).unwrap();
        let tight = MatchOptions {
            node_budget: 3,
            ..exact()
        };
        assert_eq!(
            find_perfect_matching(&h, &tight).unwrap(),
            MatchOutcome::BudgetExhausted
        );
    }

    #[test]
    fn planted_matching_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let n = 40;
            let p1 = crate::models::random_permutation(n, &mut rng);
            let p2 = crate::models::random_permutation(n, &mut rng);
            let mut edges: Vec<Triple> = (0..n).map(|i| [i, p1[i], p2[i]]).collect();
            for _ in 0..3 * n {
                edges.push([
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                ]);
            }
            let h = plain(n, &edges);
            assert!(find_perfect_matching(&h, &exact()).unwrap().is_found());
            assert!(find_perfect_matching(&h, &MatchOptions::default())
                .unwrap()
                .is_found());
        }
    }

    #[test]
    fn heuristic_is_deterministic_in_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = sample_tripartite(Alphabet::Signed { m: 30 }, 800, true, &mut rng).unwrap();
        let opts = MatchOptions {
            seed: 11,
            ..MatchOptions::default()
        };
        let a = find_perfect_matching(&h, &opts).unwrap();
        let b = find_perfect_matching(&h, &opts).unwrap();
        assert_eq!(a, b);
        if let MatchOutcome::Found(mt) = a {
            assert!(mt.reduced);
        }
    }
}
