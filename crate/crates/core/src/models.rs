//! Samplers for random group presentations and the random graph models
//! that appear alongside them.
//!
//! Relator counts are integer parts of the real-valued formulas. Samplers
//! draw with replacement; duplicate relators are kept.
//!
//! Presentation text format: first line `m=<int>`, then one relator per
//! line in the word text format.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, parse_err, Error, Result};
use crate::graph::Multigraph;
use crate::words::{sample_cyclically_reduced, Letter, Word, DEFAULT_MAX_ATTEMPTS};

/// Default cap on the number of relators a density sampler will produce.
pub const DEFAULT_COUNT_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelTag {
    Gromov,
    Triangular,
    PositiveTriangular,
    Permutation,
    ReducedPermutation,
    GromovRestricted,
    /// Read from a file or assembled by hand.
    Given,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Gromov => "gromov",
            ModelTag::Triangular => "triangular",
            ModelTag::PositiveTriangular => "positive-triangular",
            ModelTag::Permutation => "permutation",
            ModelTag::ReducedPermutation => "permutation-reduced",
            ModelTag::GromovRestricted => "gromov-restricted",
            ModelTag::Given => "given",
        }
    }
}

/// Generators plus relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generator_count: usize,
    pub relators: Vec<Word>,
    pub model_tag: ModelTag,
}

impl Presentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self> {
        if generator_count == 0 {
            return Err(invalid("m", "generator count must be >= 1"));
        }
        for r in &relators {
            if r.max_generator() as usize > generator_count {
                return Err(invalid(
                    "relators",
                    format!("relator `{r}` uses a generator beyond m = {generator_count}"),
                ));
            }
        }
        Ok(Presentation {
            generator_count,
            relators,
            model_tag: ModelTag::Given,
        })
    }

    pub fn with_tag(mut self, tag: ModelTag) -> Self {
        self.model_tag = tag;
        self
    }

    /// Relators of length 3, in order.
    pub fn triangular_relators(&self) -> impl Iterator<Item = &Word> {
        self.relators.iter().filter(|r| r.len() == 3)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m={}", self.generator_count)?;
        for r in &self.relators {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.split('\n');
        let header = lines.next().unwrap_or("");
        let m: usize = header
            .trim()
            .strip_prefix("m=")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| parse_err(1, "expected `m=<int>`"))?;
        let mut body: Vec<&str> = lines.collect();
        // a trailing newline terminates the last relator rather than adding an empty one
        if body.last() == Some(&"") {
            body.pop();
        }
        let mut relators = Vec::with_capacity(body.len());
        for (i, line) in body.iter().enumerate() {
            let w: Word = line
                .trim_end_matches('\r')
                .parse()
                .map_err(|e| parse_err(i + 2, format!("{e}")))?;
            relators.push(w);
        }
        Presentation::new(m, relators).map_err(|e| parse_err(1, e.to_string()))
    }
}

/// Integer part of `base^exponent`.
///
/// A relative nudge of 1e-9 guards against `powf` landing just below an
/// exact integer.
pub fn density_count(base: f64, exponent: f64, cap: usize) -> Result<usize> {
    let x = (exponent * base.ln()).exp();
    let nudged = x + 1e-9 * x.max(1.0);
    if !nudged.is_finite() || nudged > cap as f64 {
        return Err(Error::CountOverflow { count: x, cap });
    }
    Ok(nudged.floor() as usize)
}

fn check_density(d: f64) -> Result<()> {
    if !(d > 0.0 && d < 1.0) {
        return Err(invalid("d", format!("density must lie in (0,1), got {d}")));
    }
    Ok(())
}

/// Density and the relator count it induces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityParams {
    pub d: f64,
    /// `3d - 1` for triangular models, `l*d` for the Gromov model.
    pub exponent_excess: f64,
    pub relator_count: usize,
}

impl DensityParams {
    pub fn gromov(n: usize, l: usize, d: f64, cap: usize) -> Result<Self> {
        check_density(d)?;
        let relator_count = density_count((2 * n - 1) as f64, l as f64 * d, cap)?;
        Ok(DensityParams {
            d,
            exponent_excess: l as f64 * d,
            relator_count,
        })
    }

    pub fn triangular(m: usize, d: f64, cap: usize) -> Result<Self> {
        check_density(d)?;
        let relator_count = density_count((2 * m - 1) as f64, 3.0 * d, cap)?;
        Ok(DensityParams {
            d,
            exponent_excess: 3.0 * d - 1.0,
            relator_count,
        })
    }
}

/// Knobs shared by the density samplers.
#[derive(Clone, Copy, Debug)]
pub struct SamplerOptions {
    /// Use this many relators instead of the density formula.
    pub count_override: Option<usize>,
    pub count_cap: usize,
    pub max_attempts: usize,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            count_override: None,
            count_cap: DEFAULT_COUNT_CAP,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

/// Gromov density model: `floor((2n-1)^(l*d))` i.i.d. uniform cyclically
/// reduced relators of length `l` over `n` generators.
pub fn sample_gromov<R: Rng + ?Sized>(
    n: usize,
    l: usize,
    d: f64,
    rng: &mut R,
) -> Result<Presentation> {
    sample_gromov_with(n, l, d, &SamplerOptions::default(), rng)
}

pub fn sample_gromov_with<R: Rng + ?Sized>(
    n: usize,
    l: usize,
    d: f64,
    opts: &SamplerOptions,
    rng: &mut R,
) -> Result<Presentation> {
    if n < 1 {
        return Err(invalid("n", "need at least one generator"));
    }
    if l < 1 {
        return Err(invalid("l", "relator length must be >= 1"));
    }
    let count = match opts.count_override {
        Some(c) => c,
        None => DensityParams::gromov(n, l, d, opts.count_cap)?.relator_count,
    };
    let relators = (0..count)
        .map(|_| sample_cyclically_reduced(n, l, rng, opts.max_attempts))
        .collect::<Result<Vec<_>>>()?;
    Ok(Presentation::new(n, relators)?.with_tag(ModelTag::Gromov))
}

/// Triangular model, or its positive variant when `positive` is set.
pub fn sample_triangular<R: Rng + ?Sized>(
    m: usize,
    d: f64,
    rng: &mut R,
    positive: bool,
) -> Result<Presentation> {
    sample_triangular_with(m, d, positive, &SamplerOptions::default(), rng)
}

pub fn sample_triangular_with<R: Rng + ?Sized>(
    m: usize,
    d: f64,
    positive: bool,
    opts: &SamplerOptions,
    rng: &mut R,
) -> Result<Presentation> {
    if m < 1 {
        return Err(invalid("m", "need at least one generator"));
    }
    let count = match opts.count_override {
        Some(c) => c,
        None => DensityParams::triangular(m, d, opts.count_cap)?.relator_count,
    };
    let relators = if positive {
        (0..count)
            .map(|_| {
                Word::new(
                    (0..3)
                        .map(|_| Letter::pos(rng.gen_range(1..=m as u32)))
                        .collect(),
                )
            })
            .collect()
    } else {
        (0..count)
            .map(|_| sample_cyclically_reduced(m, 3, rng, opts.max_attempts))
            .collect::<Result<Vec<_>>>()?
    };
    let tag = if positive {
        ModelTag::PositiveTriangular
    } else {
        ModelTag::Triangular
    };
    Ok(Presentation::new(m, relators)?.with_tag(tag))
}

/// A permutation of `0..len`, stored as its image table.
pub type Permutation = Vec<usize>;

/// Uniform permutation of `0..len` by Fisher-Yates shuffle.
pub fn random_permutation<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Permutation {
    let mut p: Vec<usize> = (0..len).collect();
    p.shuffle(rng);
    p
}

pub fn is_bijection(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Index of `s^-1` for symbol index `s` among `2n` symbols.
pub fn inverse_symbol(s: usize, n: usize) -> usize {
    if s < n {
        s + n
    } else {
        s - n
    }
}

/// `v` pairs of permutations of the `2n` symbols `s_1..s_n, s_1^-1..s_n^-1`
/// (symbol indexing as in [`Letter::symbol_index`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationPairSet {
    pub n: usize,
    pub pairs: Vec<(Permutation, Permutation)>,
}

impl PermutationPairSet {
    pub fn v(&self) -> usize {
        self.pairs.len()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, (p1, p2)) in self.pairs.iter().enumerate() {
            for p in [p1, p2] {
                if p.len() != 2 * self.n || !is_bijection(p) {
                    return Err(Error::NotBijection(format!("pair {i}")));
                }
            }
        }
        Ok(())
    }

    /// The pair constraints under which every relator `s pi1(s) pi2(s)` is
    /// cyclically reduced.
    pub fn pair_is_reduced(n: usize, p1: &[usize], p2: &[usize]) -> bool {
        (0..2 * n).all(|s| {
            p1[s] != inverse_symbol(s, n)
                && p1[s] != inverse_symbol(p2[s], n)
                && p2[s] != inverse_symbol(s, n)
        })
    }

    pub fn is_reduced(&self) -> bool {
        self.pairs
            .iter()
            .all(|(p1, p2)| Self::pair_is_reduced(self.n, p1, p2))
    }

    /// The `2nv` relators `s pi1(s) pi2(s)`, pair by pair, symbols in index order.
    pub fn relators(&self) -> Vec<Word> {
        let n = self.n;
        let sym = |i: usize| Letter::from_symbol_index(i, n);
        self.pairs
            .iter()
            .flat_map(|(p1, p2)| {
                (0..2 * n).map(move |s| Word::new(vec![sym(s), sym(p1[s]), sym(p2[s])]))
            })
            .collect()
    }
}

/// Permutation model on `n` generators with `v` pairs. With `reduced`,
/// each pair is redrawn until all its relators are cyclically reduced.
pub fn sample_permutation_model<R: Rng + ?Sized>(
    n: usize,
    v: usize,
    rng: &mut R,
    reduced: bool,
) -> Result<(Presentation, PermutationPairSet)> {
    sample_permutation_model_with(n, v, reduced, DEFAULT_MAX_ATTEMPTS, rng)
}

pub fn sample_permutation_model_with<R: Rng + ?Sized>(
    n: usize,
    v: usize,
    reduced: bool,
    max_attempts: usize,
    rng: &mut R,
) -> Result<(Presentation, PermutationPairSet)> {
    if n < 1 {
        return Err(invalid("n", "need at least one generator"));
    }
    if v < 1 {
        return Err(invalid("v", "need at least one pair"));
    }
    let mut pairs = Vec::with_capacity(v);
    for _ in 0..v {
        let mut attempts = 0;
        let pair = loop {
            let p1 = random_permutation(2 * n, rng);
            let p2 = random_permutation(2 * n, rng);
            if !reduced || PermutationPairSet::pair_is_reduced(n, &p1, &p2) {
                break (p1, p2);
            }
            attempts += 1;
            if attempts >= max_attempts {
                return Err(Error::AttemptsExhausted {
                    what: "reduced permutation pair",
                    attempts,
                });
            }
        };
        pairs.push(pair);
    }
    let set = PermutationPairSet { n, pairs };
    let tag = if reduced {
        ModelTag::ReducedPermutation
    } else {
        ModelTag::Permutation
    };
    let pres = Presentation::new(n, set.relators())?.with_tag(tag);
    Ok((pres, set))
}

/// Random graph models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphKind {
    /// `n` vertices, edges `(i, pi_k(i))` for `v` uniform permutations.
    Configuration {
        n: usize,
        v: usize,
    },
    /// `2n` vertices labelled by generators and inverses; permutations with
    /// `pi_k(s) != s^-1`.
    ConfigurationReduced {
        n: usize,
        v: usize,
    },
    Gnp {
        n: usize,
        p: f64,
    },
    Gnm {
        n: usize,
        m: usize,
    },
    /// Two sides of `n` vertices, edges `(i, n + pi_j(i))`.
    BipartiteRegular {
        n: usize,
        v: usize,
    },
}

impl GraphKind {
    pub fn name(&self) -> &'static str {
        match self {
            GraphKind::Configuration { .. } => "configuration",
            GraphKind::ConfigurationReduced { .. } => "configuration-reduced",
            GraphKind::Gnp { .. } => "gnp",
            GraphKind::Gnm { .. } => "gnm",
            GraphKind::BipartiteRegular { .. } => "bipartite-regular",
        }
    }
}

pub fn sample_graph<R: Rng + ?Sized>(kind: GraphKind, rng: &mut R) -> Result<Multigraph> {
    sample_graph_with(kind, DEFAULT_MAX_ATTEMPTS, rng)
}

pub fn sample_graph_with<R: Rng + ?Sized>(
    kind: GraphKind,
    max_attempts: usize,
    rng: &mut R,
) -> Result<Multigraph> {
    match kind {
        GraphKind::Configuration { n, v } => {
            positive("n", n)?;
            positive("v", v)?;
            let mut g = Multigraph::new(n);
            for _ in 0..v {
                let p = random_permutation(n, rng);
                for (i, &j) in p.iter().enumerate() {
                    g.add_edge(i, j);
                }
            }
            Ok(g)
        }
        GraphKind::ConfigurationReduced { n, v } => {
            positive("n", n)?;
            positive("v", v)?;
            let labels = (0..2 * n)
                .map(|i| Letter::from_symbol_index(i, n))
                .collect();
            let mut g = Multigraph::with_labels(2 * n, labels);
            for _ in 0..v {
                let mut attempts = 0;
                let p = loop {
                    let p = random_permutation(2 * n, rng);
                    if p.iter()
                        .enumerate()
                        .all(|(s, &t)| t != inverse_symbol(s, n))
                    {
                        break p;
                    }
                    attempts += 1;
                    if attempts >= max_attempts {
                        return Err(Error::AttemptsExhausted {
                            what: "permutation avoiding inverses",
                            attempts,
                        });
                    }
                };
                for (i, &j) in p.iter().enumerate() {
                    g.add_edge(i, j);
                }
            }
            Ok(g)
        }
        GraphKind::Gnp { n, p } => {
            positive("n", n)?;
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(
                    "p",
                    format!("probability must lie in [0,1], got {p}"),
                ));
            }
            let mut g = Multigraph::new(n);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen::<f64>() < p {
                        g.add_edge(i, j);
                    }
                }
            }
            Ok(g)
        }
        GraphKind::Gnm { n, m } => {
            positive("n", n)?;
            let pairs = n * (n - 1) / 2;
            if m > pairs {
                return Err(invalid(
                    "M",
                    format!("{m} edges exceed the {pairs} vertex pairs"),
                ));
            }
            let mut chosen = rand::seq::index::sample(rng, pairs, m).into_vec();
            chosen.sort_unstable();
            let mut g = Multigraph::new(n);
            // decode pair indices row by row: row i holds pairs (i, i+1..n)
            let mut row = 0usize;
            let mut row_start = 0usize;
            for k in chosen {
                while k >= row_start + (n - 1 - row) {
                    row_start += n - 1 - row;
                    row += 1;
                }
                g.add_edge(row, row + 1 + (k - row_start));
            }
            Ok(g)
        }
        GraphKind::BipartiteRegular { n, v } => {
            positive("n", n)?;
            positive("v", v)?;
            let mut g = Multigraph::new(2 * n);
            for _ in 0..v {
                let p = random_permutation(n, rng);
                for (i, &j) in p.iter().enumerate() {
                    g.add_edge(i, n + j);
                }
            }
            Ok(g)
        }
    }
}

fn positive(name: &'static str, x: usize) -> Result<()> {
    if x == 0 {
        Err(invalid(name, "must be >= 1"))
    } else {
        Ok(())
    }
}

/// Number of relators occurring more than once, counted with excess
/// multiplicity.
pub fn duplicate_relator_count(p: &Presentation) -> usize {
    let mut seen = HashSet::with_capacity(p.relators.len());
    p.relators.iter().filter(|r| !seen.insert(*r)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn gromov_counts() {
        let p = sample_gromov(2, 3, 0.4, &mut rng(1)).unwrap();
        assert_eq!(p.relators.len(), 3);
        assert!(p
            .relators
            .iter()
            .all(|r| r.len() == 3 && r.is_cyclically_reduced()));
        assert_eq!(
            DensityParams::gromov(3, 12, 0.45, DEFAULT_COUNT_CAP)
                .unwrap()
                .relator_count,
            5948
        );
        let one = sample_gromov(2, 1, 0.1, &mut rng(2)).unwrap();
        assert_eq!(one.relators.len(), 1);
        assert_eq!(one.relators[0].len(), 1);
    }

    #[test]
    fn count_formula_matches_direct_evaluation() {
        let mut r = rng(9);
        for _ in 0..20 {
            let n = r.gen_range(2..6usize);
            let l = r.gen_range(1..10usize);
            let d = r.gen_range(0.05..0.5);
            let direct = ((2 * n - 1) as f64).powf(l as f64 * d).floor() as usize;
            let got = sample_gromov(n, l, d, &mut r).unwrap().relators.len();
            assert_eq!(got, direct, "n={n} l={l} d={d}");
        }
    }

    #[test]
    fn exact_integer_powers_are_not_truncated() {
        assert_eq!(density_count(3.0, 1.0, 100).unwrap(), 3);
        assert_eq!(density_count(9.0, 1.5, 100).unwrap(), 27);
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(
            sample_gromov_with(3, 40, 0.9, &SamplerOptions::default(), &mut rng(0)),
            Err(Error::CountOverflow { .. })
        ));
        assert!(sample_triangular(3, 1.5, &mut rng(0), false).is_err());
    }

    #[test]
    fn triangular_positive_support() {
        let p = sample_triangular(2, 0.9, &mut rng(3), true).unwrap();
        assert_eq!(p.model_tag, ModelTag::PositiveTriangular);
        assert!(p.relators.iter().all(|r| r.len() == 3 && r.is_positive()));
    }

    #[test]
    fn triangular_count_grows_past_linear() {
        let p = sample_triangular(5, 1.0 / 3.0 + 0.05, &mut rng(4), false).unwrap();
        assert!(p.relators.len() > 9);
    }

    #[test]
    fn permutation_model_counts() {
        let (p, set) = sample_permutation_model(1, 1, &mut rng(5), false).unwrap();
        assert_eq!(p.relators.len(), 2);
        set.validate().unwrap();
        let (p, _) = sample_permutation_model(3, 2, &mut rng(6), false).unwrap();
        assert_eq!(p.relators.len(), 12);
    }

    #[test]
    fn reduced_permutation_relators_are_cyclically_reduced() {
        for seed in 0..20 {
            let (p, set) = sample_permutation_model(4, 3, &mut rng(seed), true).unwrap();
            set.validate().unwrap();
            assert!(set.is_reduced());
            assert!(p.relators.iter().all(|r| r.is_cyclically_reduced()));
            for (p1, p2) in &set.pairs {
                for s in 0..8 {
                    assert_ne!(p1[s], inverse_symbol(s, 4));
                    assert_ne!(p1[s], inverse_symbol(p2[s], 4));
                    assert_ne!(p2[s], inverse_symbol(s, 4));
                }
            }
        }
    }

    #[test]
    fn configuration_identity_gives_loops() {
        let mut g = Multigraph::new(4);
        for i in 0..4 {
            g.add_edge(i, i);
        }
        assert_eq!(g.degrees(), vec![2; 4]);
        assert_eq!(g.loop_count(), 4);
    }

    #[test]
    fn configuration_is_regular() {
        for seed in 0..5 {
            let g = sample_graph(GraphKind::Configuration { n: 30, v: 3 }, &mut rng(seed)).unwrap();
            assert!(g.degrees().iter().all(|&d| d == 6));
            let g = sample_graph(
                GraphKind::ConfigurationReduced { n: 10, v: 3 },
                &mut rng(seed),
            )
            .unwrap();
            assert_eq!(g.vertex_count(), 20);
            assert!(g.degrees().iter().all(|&d| d == 6));
            for &(u, v) in g.edges() {
                assert_ne!(v, inverse_symbol(u, 10));
            }
        }
    }

    #[test]
    fn gnm_complete_graph() {
        let g = sample_graph(GraphKind::Gnm { n: 5, m: 10 }, &mut rng(7)).unwrap();
        let mut e = g.sorted_edges();
        e.dedup();
        assert_eq!(e.len(), 10);
        assert!(sample_graph(GraphKind::Gnm { n: 5, m: 11 }, &mut rng(7)).is_err());
    }

    #[test]
    fn gnm_edges_are_distinct_pairs() {
        let g = sample_graph(GraphKind::Gnm { n: 50, m: 300 }, &mut rng(8)).unwrap();
        let mut e = g.sorted_edges();
        e.dedup();
        assert_eq!(e.len(), 300);
        assert!(e.iter().all(|&(u, v)| u < v && v < 50));
    }

    #[test]
    fn gnp_extremes() {
        let g = sample_graph(GraphKind::Gnp { n: 6, p: 1.0 }, &mut rng(1)).unwrap();
        assert_eq!(g.edge_count(), 15);
        let g = sample_graph(GraphKind::Gnp { n: 6, p: 0.0 }, &mut rng(1)).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn bipartite_regular_shape() {
        let g = sample_graph(GraphKind::BipartiteRegular { n: 3, v: 2 }, &mut rng(2)).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 2));
        let side: Vec<bool> = (0..6).map(|i| i < 3).collect();
        assert!(g.is_bipartite_between(&side));
    }

    #[test]
    fn presentation_text_round_trip() {
        let p = sample_gromov(3, 5, 0.3, &mut rng(11)).unwrap();
        let q: Presentation = p.to_string().parse().unwrap();
        assert_eq!(q.generator_count, p.generator_count);
        assert_eq!(q.relators, p.relators);
        assert!("m=2\na3\n".parse::<Presentation>().is_err());
        assert!("x=2\n".parse::<Presentation>().is_err());
        let empty: Presentation = "m=4\n".parse().unwrap();
        assert!(empty.relators.is_empty());
    }

    #[test]
    fn duplicates_fall_with_alphabet_size() {
        // duplicate frequency at d < 1/2, measured on a few sizes
        let mut last = f64::INFINITY;
        for m in [4usize, 16, 64] {
            let mut dup = 0usize;
            let mut total = 0usize;
            for seed in 0..30 {
                let p = sample_triangular(m, 0.4, &mut rng(seed), false).unwrap();
                dup += duplicate_relator_count(&p);
                total += p.relators.len();
            }
            let frac = dup as f64 / total as f64;
            assert!(frac <= last + 1e-12, "m={m}: {frac} > {last}");
            last = frac;
        }
    }
}
