//! The link graph of a presentation, its three parts, and duplicate-edge
//! collapse.
//!
//! Vertices are `s_1..s_m, s_1^-1..s_m^-1` with `s_i -> i-1` and
//! `s_i^-1 -> m+i-1`. A relator `s_x s_y s_z` contributes the edges
//! `(s_x, s_y^-1)`, `(s_y, s_z^-1)` and `(s_z, s_x^-1)`, one to each part.
//! Relators whose length is not 3 play no role.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::models::Presentation;
use crate::words::{Letter, Word};

fn empty_link(m: usize) -> Multigraph {
    let labels = (0..2 * m)
        .map(|i| Letter::from_symbol_index(i, m))
        .collect();
    Multigraph::with_labels(2 * m, labels)
}

fn check_relator(index: usize, r: &Word) -> Result<[Letter; 3]> {
    if !r.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced {
            index,
            word: r.to_string(),
        });
    }
    let l = r.letters();
    Ok([l[0], l[1], l[2]])
}

/// Length-3 relators mapped to their three edges, checked for cyclic
/// reduction (a failure would produce a loop).
fn link_edges(p: &Presentation) -> Result<Vec<[(usize, usize); 3]>> {
    let m = p.generator_count;
    p.relators
        .iter()
        .enumerate()
        .filter(|(_, r)| r.len() == 3)
        .map(|(i, r)| {
            let [x, y, z] = check_relator(i, r)?;
            let v = |l: Letter| l.symbol_index(m);
            Ok([
                (v(x), v(y.inverse())),
                (v(y), v(z.inverse())),
                (v(z), v(x.inverse())),
            ])
        })
        .collect()
}

pub fn build_link_graph(p: &Presentation) -> Result<Multigraph> {
    let mut g = empty_link(p.generator_count);
    for triple in link_edges(p)? {
        for (u, v) in triple {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// `(L1, L2, L3)` on the same vertex set as the link graph.
pub fn split_link_parts(p: &Presentation) -> Result<[Multigraph; 3]> {
    let m = p.generator_count;
    let mut parts = [empty_link(m), empty_link(m), empty_link(m)];
    for triple in link_edges(p)? {
        for (part, (u, v)) in parts.iter_mut().zip(triple) {
            part.add_edge(u, v);
        }
    }
    Ok(parts)
}

/// Number of relators skipped because their length is not 3.
pub fn ignored_relator_count(p: &Presentation) -> usize {
    p.relators.iter().filter(|r| r.len() != 3).count()
}

/// Split `g` into its simple support and the excess multiplicity, so that
/// `simple` plus `removed` is `g` as an edge multiset.
pub fn collapse_duplicates(g: &Multigraph) -> (Multigraph, Multigraph) {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &e in g.edges() {
        *counts.entry(e).or_insert(0) += 1;
    }
    let (mut simple, mut removed) = match g.labels() {
        Some(l) => (
            Multigraph::with_labels(g.vertex_count(), l.to_vec()),
            Multigraph::with_labels(g.vertex_count(), l.to_vec()),
        ),
        None => (
            Multigraph::new(g.vertex_count()),
            Multigraph::new(g.vertex_count()),
        ),
    };
    for ((u, v), c) in counts {
        simple.add_edge(u, v);
        for _ in 1..c {
            removed.add_edge(u, v);
        }
    }
    (simple, removed)
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

    #[test]
    fn single_relator_edges() {
        let g = build_link_graph(&pres(3, &["a1 a2 a3"])).unwrap();
        assert_eq!(g.vertex_count(), 6);
        // (s1, s2^-1), (s2, s3^-1), (s3, s1^-1)
        assert_eq!(g.sorted_edges(), vec![(0, 4), (1, 5), (2, 3)]);
        let parts = split_link_parts(&pres(3, &["a1 a2 a3"])).unwrap();
        assert!(parts.iter().all(|p| p.edge_count() == 1));
    }

    #[test]
    fn z2_presentation_is_a_six_cycle() {
        let g = build_link_graph(&pres(3, &["a1 a2 A3", "a2 a1 A3"])).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(g.degrees().iter().all(|&d| d == 2));
        assert!(g.is_connected());
        // s1 - s2^-1 - s3^-1 - s1^-1 - s2 - s3 - s1
        let cycle = [0usize, 4, 5, 3, 1, 2];
        let mut expected: Vec<(usize, usize)> = (0..6)
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % 6]);
                (a.min(b), a.max(b))
            })
            .collect();
        expected.sort();
        assert_eq!(g.sorted_edges(), expected);
    }

    #[test]
    fn empty_presentation_is_isolated_vertices() {
        let g = build_link_graph(&pres(4, &[])).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 0);
        assert!(!g.is_connected());
    }

    #[test]
    fn non_triangular_relators_ignored_and_bad_ones_rejected() {
        let p = pres(2, &["a1 a2", "a1 a2 a1 a2", "a1 a1 a2"]);
        assert_eq!(build_link_graph(&p).unwrap().edge_count(), 3);
        assert_eq!(ignored_relator_count(&p), 2);
        let bad = pres(2, &["a1 a2 A1"]);
        assert!(matches!(
            build_link_graph(&bad),
            Err(Error::NotCyclicallyReduced { .. })
        ));
    }

    #[test]
    fn parts_reassemble_and_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = sample_triangular(20, 0.4, &mut rng, false).unwrap();
        let k = p.relators.len();
        let g = build_link_graph(&p).unwrap();
        assert_eq!(g.edge_count(), 3 * k);
        assert_eq!(g.loop_count(), 0);
        let parts = split_link_parts(&p).unwrap();
        let mut union: Vec<_> = parts.iter().flat_map(|x| x.edges().to_vec()).collect();
        union.sort();
        assert_eq!(union, g.sorted_edges());
        assert!(parts.iter().all(|x| x.edge_count() == k));
    }

    #[test]
    fn reduced_permutation_parts_are_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let (p, _) = sample_permutation_model(6, 3, &mut rng, true).unwrap();
            for part in split_link_parts(&p).unwrap() {
                assert_eq!(part.vertex_count(), 12);
                assert!(
                    part.degrees().iter().all(|&d| d == 6),
                    "{:?}",
                    part.degrees()
                );
            }
        }
    }

    #[test]
    fn positive_triangular_link_is_bipartite() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let p = sample_triangular(10, 0.45, &mut rng, true).unwrap();
            let g = build_link_graph(&p).unwrap();
            let side: Vec<bool> = (0..20).map(|i| i < 10).collect();
            assert!(g.is_bipartite_between(&side));
        }
    }

    #[test]
    fn collapse_examples() {
        let g = Multigraph::from_edges(2, [(0, 1), (0, 1), (1, 0)]);
        let (s, r) = collapse_duplicates(&g);
        assert_eq!(s.edge_count(), 1);
        assert_eq!(r.edge_count(), 2);
        let simple = Multigraph::from_edges(3, [(0, 1), (1, 2)]);
        let (s, r) = collapse_duplicates(&simple);
        assert_eq!(s.sorted_edges(), simple.sorted_edges());
        assert_eq!(r.edge_count(), 0);
    }

    #[test]
    fn collapse_conserves_multiset() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = sample_triangular(6, 0.6, &mut rng, false).unwrap();
        let g = build_link_graph(&p).unwrap();
        let (s, r) = collapse_duplicates(&g);
        let mut all: Vec<_> = s.edges().iter().chain(r.edges()).copied().collect();
        all.sort();
        assert_eq!(all, g.sorted_edges());
    }
}
