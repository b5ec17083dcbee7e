//! 3-partite relator hypergraphs, perfect matchings, and permutation
//! extraction.
//!
//! Each part is a copy of the vertex alphabet. For a signed alphabet on `m`
//! generators the parts have `2m` vertices indexed as in
//! [`Letter::symbol_index`]; a positive alphabet has `m` vertices; a plain
//! alphabet carries no group structure.
//!
//! Text format: `parts=<int>` (signed labels `a1`/`A1`), `parts=<int>
//! positive` (labels `a1..`) or `parts=<int> plain` (0-based integers),
//! followed by one `x y z` triple per line.

mod derangements;
mod search;

pub use derangements::{
    count_avoiding, derangement_count, derangement_stats, menage_count, ForbiddenPattern, StatMode,
    EXACT_STAT_CAP,
};
pub use search::{find_perfect_matching, MatchMode, MatchOptions, MatchOutcome, DEFAULT_EXACT_CAP};

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample as index_sample;
use rand::Rng;

use crate::error::{invalid, parse_err, Error, Result};
use crate::models::{Permutation, PermutationPairSet, Presentation};
use crate::words::{Letter, Word};

/// Labelling of the vertices in each part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// `s_1..s_m, s_1^-1..s_m^-1`; part size `2m`.
    Signed { m: usize },
    /// `s_1..s_m`; part size `m`.
    Positive { m: usize },
    /// Unlabelled vertices `0..part_size`.
    Plain { part_size: usize },
}

impl Alphabet {
    pub fn part_size(self) -> usize {
        match self {
            Alphabet::Signed { m } => 2 * m,
            Alphabet::Positive { m } => m,
            Alphabet::Plain { part_size } => part_size,
        }
    }

    pub fn letter(self, v: usize) -> Option<Letter> {
        match self {
            Alphabet::Signed { m } => Some(Letter::from_symbol_index(v, m)),
            Alphabet::Positive { .. } => Some(Letter::pos(v as u32 + 1)),
            Alphabet::Plain { .. } => None,
        }
    }

    fn vertex(self, l: Letter) -> Option<usize> {
        match self {
            Alphabet::Signed { m } if (l.index() as usize) <= m => Some(l.symbol_index(m)),
            Alphabet::Positive { m } if l.is_positive() && (l.index() as usize) <= m => {
                Some(l.index() as usize - 1)
            }
            _ => None,
        }
    }

    fn format_vertex(self, v: usize) -> String {
        match self.letter(v) {
            Some(l) => l.to_string(),
            None => v.to_string(),
        }
    }

    fn parse_vertex(self, s: &str) -> Option<usize> {
        match self {
            Alphabet::Plain { part_size } => s.parse().ok().filter(|&v| v < part_size),
            _ => s.parse::<Letter>().ok().and_then(|l| self.vertex(l)),
        }
    }
}

pub type Triple = [usize; 3];

/// Whether `x y z` is cyclically reduced.
pub fn is_reduced_edge(x: Letter, y: Letter, z: Letter) -> bool {
    y != x.inverse() && z != y.inverse() && x != z.inverse()
}

/// Distinct triples `(x, y, z)` with `x` in `V1`, `y` in `V2`, `z` in `V3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorHypergraph {
    alphabet: Alphabet,
    edges: Vec<Triple>,
}

impl RelatorHypergraph {
    /// Deduplicates and sorts `edges`.
    pub fn new(alphabet: Alphabet, edges: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let n = alphabet.part_size();
        let set: BTreeSet<Triple> = edges.into_iter().collect();
        if let Some(e) = set.iter().find(|e| e.iter().any(|&v| v >= n)) {
            return Err(invalid(
                "edges",
                format!("triple {e:?} out of range for part size {n}"),
            ));
        }
        Ok(RelatorHypergraph {
            alphabet,
            edges: set.into_iter().collect(),
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn part_size(&self) -> usize {
        self.alphabet.part_size()
    }

    pub fn edges(&self) -> &[Triple] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `None` for a plain alphabet.
    pub fn edge_is_reduced(&self, e: Triple) -> Option<bool> {
        let a = self.alphabet;
        Some(is_reduced_edge(
            a.letter(e[0])?,
            a.letter(e[1])?,
            a.letter(e[2])?,
        ))
    }

    pub fn is_reduced(&self) -> bool {
        self.edges
            .iter()
            .all(|&e| self.edge_is_reduced(e) == Some(true))
    }

    pub fn contains(&self, e: &Triple) -> bool {
        self.edges.binary_search(e).is_ok()
    }
}

fn relator_triple(alphabet: Alphabet, index: usize, r: &Word) -> Result<Triple> {
    if r.len() != 3 {
        return Err(Error::WrongRelatorLength {
            index,
            len: r.len(),
        });
    }
    let mut t = [0; 3];
    for (slot, &l) in t.iter_mut().zip(r.letters()) {
        *slot = alphabet.vertex(l).ok_or_else(|| {
            invalid(
                "relators",
                format!("letter {l} of relator {index} is outside the alphabet"),
            )
        })?;
    }
    Ok(t)
}

/// `H(S)` over the signed alphabet: one triple per distinct relator.
pub fn build_hypergraph(p: &Presentation) -> Result<RelatorHypergraph> {
    build_with(
        p,
        Alphabet::Signed {
            m: p.generator_count,
        },
    )
}

/// `H(S)` over the positive alphabet, for positive presentations.
pub fn build_positive_hypergraph(p: &Presentation) -> Result<RelatorHypergraph> {
    build_with(
        p,
        Alphabet::Positive {
            m: p.generator_count,
        },
    )
}

fn build_with(p: &Presentation, alphabet: Alphabet) -> Result<RelatorHypergraph> {
    let edges = p
        .relators
        .iter()
        .enumerate()
        .map(|(i, r)| relator_triple(alphabet, i, r))
        .collect::<Result<Vec<_>>>()?;
    RelatorHypergraph::new(alphabet, edges)
}

/// A set of hyperedges, sorted by their `V1` vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<Triple>,
    /// Every edge spells a cyclically reduced word.
    pub reduced: bool,
}

impl Matching {
    pub fn new(h: &RelatorHypergraph, mut edges: Vec<Triple>) -> Self {
        edges.sort_unstable();
        let reduced = edges.iter().all(|&e| h.edge_is_reduced(e) == Some(true));
        Matching { edges, reduced }
    }

    pub fn is_perfect(&self, part_size: usize) -> bool {
        self.edges.len() == part_size && disjoint(&self.edges, part_size)
    }
}

fn disjoint(edges: &[Triple], part_size: usize) -> bool {
    let mut seen = vec![[false; 3]; part_size];
    for e in edges {
        for k in 0..3 {
            if e[k] >= part_size || seen[e[k]][k] {
                return false;
            }
            seen[e[k]][k] = true;
        }
    }
    true
}

/// Disjoint, covering, edges of `h`, and the reduced flag is truthful.
pub fn verify_perfect_matching(h: &RelatorHypergraph, mt: &Matching) -> Result<()> {
    let n = h.part_size();
    if let Some(e) = mt.edges.iter().find(|e| !h.contains(e)) {
        return Err(Error::NotPerfect(format!("{e:?} is not an edge")));
    }
    if !disjoint(&mt.edges, n) {
        return Err(Error::NotPerfect("edges overlap".into()));
    }
    if mt.edges.len() != n {
        return Err(Error::NotPerfect(format!(
            "{} edges for part size {n}",
            mt.edges.len()
        )));
    }
    let reduced = mt.edges.iter().all(|&e| h.edge_is_reduced(e) == Some(true));
    if mt.reduced && !reduced {
        return Err(Error::NotPerfect(
            "claimed reduced but an edge is not".into(),
        ));
    }
    Ok(())
}

/// `pi1(s) = y`, `pi2(s) = z` for each edge `(s, y, z)` of a perfect
/// matching over a signed alphabet. The flag reports whether the pair meets
/// the reduced constraints.
pub fn matching_to_permutations(
    h: &RelatorHypergraph,
    mt: &Matching,
) -> Result<(PermutationPairSet, bool)> {
    let Alphabet::Signed { m } = h.alphabet else {
        return Err(invalid("hypergraph", "permutations need a signed alphabet"));
    };
    let n = 2 * m;
    if mt.edges.len() != n {
        return Err(Error::NotPerfect(format!(
            "{} edges for part size {n}",
            mt.edges.len()
        )));
    }
    let mut p1 = vec![usize::MAX; n];
    let mut p2 = vec![usize::MAX; n];
    for e in &mt.edges {
        if e.iter().any(|&v| v >= n) {
            return Err(Error::NotPerfect(format!("{e:?} out of range")));
        }
        if p1[e[0]] != usize::MAX {
            return Err(Error::NotBijection(format!(
                "symbol {} matched twice",
                e[0]
            )));
        }
        p1[e[0]] = e[1];
        p2[e[0]] = e[2];
    }
    let pairs = PermutationPairSet {
        n: m,
        pairs: vec![(p1, p2)],
    };
    pairs.validate()?;
    let reduced = pairs.is_reduced();
    Ok((pairs, reduced))
}

/// Result of [`extract_permutation_subsets`].
#[derive(Clone, Debug, PartialEq)]
pub enum Extraction {
    /// The pairs and, per pair, the relator indices it uses.
    Found {
        pairs: PermutationPairSet,
        relator_indices: Vec<Vec<usize>>,
    },
    NotFound,
}

/// Splits the relators into `v` contiguous blocks of near-equal size and
/// looks for a perfect matching in each block's hypergraph.
pub fn extract_permutation_subsets(
    p: &Presentation,
    v: usize,
    opts: &MatchOptions,
) -> Result<Extraction> {
    if v == 0 {
        return Err(invalid("v", "must be >= 1"));
    }
    let m = p.generator_count;
    for (i, r) in p.relators.iter().enumerate() {
        if r.len() != 3 {
            return Err(Error::WrongRelatorLength {
                index: i,
                len: r.len(),
            });
        }
    }
    let k = p.relators.len();
    if k < 2 * m * v {
        return Ok(Extraction::NotFound);
    }
    let alphabet = Alphabet::Signed { m };
    let mut pairs = Vec::with_capacity(v);
    let mut used = Vec::with_capacity(v);
    for block in 0..v {
        let (lo, hi) = (block * k / v, (block + 1) * k / v);
        let triples = (lo..hi)
            .map(|i| relator_triple(alphabet, i, &p.relators[i]))
            .collect::<Result<Vec<_>>>()?;
        let h = RelatorHypergraph::new(alphabet, triples.iter().copied())?;
        let mut block_opts = opts.clone();
        block_opts.seed = crate::experiments::mix_seed(opts.seed, block as u64, 0);
        let mt = match find_perfect_matching(&h, &block_opts)? {
            MatchOutcome::Found(mt) => mt,
            _ => return Ok(Extraction::NotFound),
        };
        let (pp, _) = matching_to_permutations(&h, &mt)?;
        pairs.extend(pp.pairs);
        used.push(
            mt.edges
                .iter()
                .map(|e| {
                    lo + triples
                        .iter()
                        .position(|t| t == e)
                        .expect("edge came from block")
                })
                .collect(),
        );
    }
    Ok(Extraction::Found {
        pairs: PermutationPairSet { n: m, pairs },
        relator_indices: used,
    })
}

/// `G3(n, M)`: `edge_count` distinct triples drawn uniformly from a 3-partite
/// hypergraph with parts of size `alphabet.part_size()`. With `reduced`,
/// only triples spelling cyclically reduced words are eligible.
pub fn sample_tripartite<R: Rng + ?Sized>(
    alphabet: Alphabet,
    edge_count: usize,
    reduced: bool,
    rng: &mut R,
) -> Result<RelatorHypergraph> {
    let n = alphabet.part_size();
    if n == 0 {
        return Err(invalid("n", "part size must be >= 1"));
    }
    if reduced && matches!(alphabet, Alphabet::Plain { .. }) {
        return Err(invalid("reduced", "needs a labelled alphabet"));
    }
    let decode = |i: usize| [i / (n * n), (i / n) % n, i % n];
    let eligible = |t: Triple| {
        !reduced
            || is_reduced_edge(
                alphabet.letter(t[0]).unwrap(),
                alphabet.letter(t[1]).unwrap(),
                alphabet.letter(t[2]).unwrap(),
            )
    };
    let total = n
        .checked_pow(3)
        .ok_or_else(|| invalid("n", "part size too large"))?;
    // dense regime: enumerate the eligible triples and sample indices
    if edge_count.saturating_mul(2) > total || total <= 4096 {
        let pool: Vec<Triple> = (0..total).map(decode).filter(|&t| eligible(t)).collect();
        if edge_count > pool.len() {
            return Err(invalid(
                "M",
                format!("{edge_count} exceeds the {} eligible triples", pool.len()),
            ));
        }
        let mut picks = index_sample(rng, pool.len(), edge_count).into_vec();
        picks.sort_unstable();
        return RelatorHypergraph::new(alphabet, picks.into_iter().map(|i| pool[i]));
    }
    let mut seen = HashSet::with_capacity(edge_count);
    while seen.len() < edge_count {
        let t = decode(rng.gen_range(0..total));
        if eligible(t) {
            seen.insert(t);
        }
    }
    RelatorHypergraph::new(alphabet, seen)
}

/// Identity permutation of the `2m` symbols.
pub fn identity_permutation(m: usize) -> Permutation {
    (0..2 * m).collect()
}

impl fmt::Display for RelatorHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alphabet {
            Alphabet::Signed { m } => writeln!(f, "parts={}", 2 * m)?,
            Alphabet::Positive { m } => writeln!(f, "parts={m} positive")?,
            Alphabet::Plain { part_size } => writeln!(f, "parts={part_size} plain")?,
        }
        for e in &self.edges {
            let [x, y, z] = e.map(|v| self.alphabet.format_vertex(v));
            writeln!(f, "{x} {y} {z}")?;
        }
        Ok(())
    }
}

impl FromStr for RelatorHypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty hypergraph file"))?;
        let mut head = header.split_whitespace();
        let size: usize = head
            .next()
            .and_then(|h| h.strip_prefix("parts="))
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| parse_err(1, "expected `parts=<int>`"))?;
        let alphabet = match head.next() {
            None if size.is_multiple_of(2) => Alphabet::Signed { m: size / 2 },
            None => return Err(parse_err(1, "signed alphabet needs an even part size")),
            Some("positive") => Alphabet::Positive { m: size },
            Some("plain") => Alphabet::Plain { part_size: size },
            Some(other) => return Err(parse_err(1, format!("unknown alphabet `{other}`"))),
        };
        let mut edges = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(parse_err(i + 1, "expected `x y z`"));
            }
            let mut t = [0; 3];
            for (slot, tok) in t.iter_mut().zip(&toks) {
                *slot = alphabet
                    .parse_vertex(tok)
                    .ok_or_else(|| parse_err(i + 1, format!("bad vertex `{tok}`")))?;
            }
            edges.push(t);
        }
        RelatorHypergraph::new(alphabet, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{sample_permutation_model, sample_triangular};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pres(m: usize, rels: &[&str]) -> Presentation {
        Presentation::new(m, rels.iter().map(|r| r.parse().unwrap()).collect()).unwrap()
    }

    fn letter(s: &str) -> Letter {
        s.parse().unwrap()
    }

    #[test]
    fn duplicate_relators_collapse() {
        let h = build_hypergraph(&pres(3, &["a1 a2 a3", "a1 a2 a3"])).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edges()[0], [0, 1, 2]);
        let h = build_hypergraph(&pres(2, &["a1 a2 a1", "A1 a2 a2", "a2 a2 a2"])).unwrap();
        assert_eq!(h.edge_count(), 3);
        assert!(build_hypergraph(&pres(2, &["a1 a2"])).is_err());
    }

    #[test]
    fn triangular_sample_edge_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = sample_triangular(50, 0.45, &mut rng, false).unwrap();
        let h = build_hypergraph(&p).unwrap();
        assert!(h.edge_count() <= p.relators.len());
        assert!(h.is_reduced());
    }

    #[test]
    fn reduced_edge_predicate() {
        assert!(!is_reduced_edge(letter("a1"), letter("A1"), letter("a2")));
        assert!(!is_reduced_edge(letter("a1"), letter("a2"), letter("A1")));
        assert!(is_reduced_edge(letter("a1"), letter("a1"), letter("a1")));
        assert!(!is_reduced_edge(letter("a1"), letter("a2"), letter("A2")));
    }

    #[test]
    fn identity_matching_is_reduced() {
        let m = 3;
        let h =
            RelatorHypergraph::new(Alphabet::Signed { m }, (0..2 * m).map(|s| [s, s, s])).unwrap();
        let mt = Matching::new(&h, h.edges().to_vec());
        assert!(mt.reduced);
        verify_perfect_matching(&h, &mt).unwrap();
        let (pp, reduced) = matching_to_permutations(&h, &mt).unwrap();
        assert!(reduced);
        assert_eq!(pp.pairs[0].0, identity_permutation(m));
        assert_eq!(pp.pairs[0].1, identity_permutation(m));
    }

    #[test]
    fn unreduced_edge_flags_false() {
        // m = 1: a1 -> (A1, a1), A1 -> (a1, A1)
        let h = RelatorHypergraph::new(Alphabet::Signed { m: 1 }, [[0, 1, 0], [1, 0, 1]]).unwrap();
        let mt = Matching::new(&h, h.edges().to_vec());
        assert!(!mt.reduced);
        let (_, reduced) = matching_to_permutations(&h, &mt).unwrap();
        assert!(!reduced);
    }

    #[test]
    fn shared_part_rejected() {
        let h = RelatorHypergraph::new(Alphabet::Signed { m: 1 }, [[0, 0, 0], [1, 0, 1]]).unwrap();
        let mt = Matching::new(&h, h.edges().to_vec());
        assert!(verify_perfect_matching(&h, &mt).is_err());
        assert!(matches!(
            matching_to_permutations(&h, &mt),
            Err(Error::NotBijection(_))
        ));
    }

    #[test]
    fn sampled_pair_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let (p, pairs) = sample_permutation_model(5, 1, &mut rng, true).unwrap();
            let h = build_hypergraph(&p).unwrap();
            let mt = Matching::new(&h, h.edges().to_vec());
            verify_perfect_matching(&h, &mt).unwrap();
            let (back, reduced) = matching_to_permutations(&h, &mt).unwrap();
            assert!(reduced);
            assert_eq!(back, pairs);
        }
    }

    #[test]
    fn extraction_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let opts = MatchOptions::default();
        let (p, _) = sample_permutation_model(6, 3, &mut rng, true).unwrap();
        match extract_permutation_subsets(&p, 3, &opts).unwrap() {
            Extraction::Found {
                pairs,
                relator_indices,
            } => {
                assert_eq!(pairs.v(), 3);
                pairs.validate().unwrap();
                assert!(pairs.is_reduced());
                let all: BTreeSet<usize> = relator_indices.iter().flatten().copied().collect();
                assert_eq!(all.len(), 3 * 12);
                for (pair, idx) in pairs.relators().chunks(12).zip(&relator_indices) {
                    let mut from_p: Vec<Word> =
                        idx.iter().map(|&i| p.relators[i].clone()).collect();
                    let mut from_pair = pair.to_vec();
                    from_p.sort();
                    from_pair.sort();
                    assert_eq!(from_p, from_pair);
                }
            }
            Extraction::NotFound => panic!("expected a matching"),
        }
        let short = pres(2, &["a1 a2 a1", "a2 a1 a2"]);
        assert_eq!(
            extract_permutation_subsets(&short, 1, &opts).unwrap(),
            Extraction::NotFound
        );
    }

    #[test]
    fn extraction_v1_agrees_with_direct_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let opts = MatchOptions {
            mode: MatchMode::Exact,
            ..MatchOptions::default()
        };
        for _ in 0..20 {
            let p = sample_triangular(3, 0.6, &mut rng, false).unwrap();
            let h = build_hypergraph(&p).unwrap();
            let direct = matches!(
                find_perfect_matching(&h, &opts).unwrap(),
                MatchOutcome::Found(_)
            );
            let extracted = matches!(
                extract_permutation_subsets(&p, 1, &opts).unwrap(),
                Extraction::Found { .. }
            );
            assert_eq!(direct, extracted);
        }
    }

    #[test]
    fn tripartite_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = sample_tripartite(Alphabet::Signed { m: 10 }, 500, true, &mut rng).unwrap();
        assert_eq!(h.edge_count(), 500);
        assert!(h.is_reduced());
        let h = sample_tripartite(Alphabet::Plain { part_size: 3 }, 27, false, &mut rng).unwrap();
        assert_eq!(h.edge_count(), 27);
        assert!(sample_tripartite(Alphabet::Plain { part_size: 3 }, 28, false, &mut rng).is_err());
        let big = sample_tripartite(Alphabet::Signed { m: 150 }, 1000, false, &mut rng).unwrap();
        assert_eq!(big.edge_count(), 1000);
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for alphabet in [
            Alphabet::Signed { m: 3 },
            Alphabet::Positive { m: 4 },
            Alphabet::Plain { part_size: 5 },
        ] {
            let h = sample_tripartite(alphabet, 20, false, &mut rng).unwrap();
            let back: RelatorHypergraph = h.to_string().parse().unwrap();
            assert_eq!(back, h);
        }
        assert!("parts=3\na1 a1 a1\n".parse::<RelatorHypergraph>().is_err());
        assert!("parts=2\na1 a1 a9\n".parse::<RelatorHypergraph>().is_err());
    }
}
