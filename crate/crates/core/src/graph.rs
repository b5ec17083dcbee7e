//! Undirected multigraphs with loops.
//!
//! A loop contributes 2 to its vertex's degree and 2 to the adjacency
//! diagonal, so adjacency row sums always equal degrees.
//!
//! Text format: first line `vertices=<int>`, then one `u v` edge per line,
//! 0-indexed, loops written as `u u`.

use std::fmt;
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};
use crate::words::Letter;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    /// Edge multiset; each pair stored with `u <= v`.
    edges: Vec<(usize, usize)>,
    /// Optional symbol labels (link graphs label vertices by generators).
    labels: Option<Vec<Letter>>,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Multigraph {
            vertex_count,
            edges: Vec::new(),
            labels: None,
        }
    }

    pub fn with_labels(vertex_count: usize, labels: Vec<Letter>) -> Self {
        assert_eq!(labels.len(), vertex_count);
        Multigraph {
            vertex_count,
            edges: Vec::new(),
            labels: Some(labels),
        }
    }

    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut g = Multigraph::new(vertex_count);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(
            u < self.vertex_count && v < self.vertex_count,
            "edge ({u}, {v}) out of range for {} vertices",
            self.vertex_count
        );
        self.edges.push((u.min(v), u.max(v)));
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> Option<&[Letter]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<Letter> {
        self.labels.as_ref().map(|l| l[v])
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Dense row-major adjacency with multiplicities; loops add 2.
    pub fn adjacency(&self) -> Vec<f64> {
        let n = self.vertex_count;
        let mut a = vec![0.0; n * n];
        for &(u, v) in &self.edges {
            if u == v {
                a[u * n + u] += 2.0;
            } else {
                a[u * n + v] += 1.0;
                a[v * n + u] += 1.0;
            }
        }
        a
    }

    /// Edge multiset in canonical (sorted) order.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    /// Number of connected components; isolated vertices count.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        (0..self.vertex_count).filter(|&v| uf.find(v) == v).count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// 2-colouring check by breadth-first search. Loops make a graph
    /// non-bipartite.
    pub fn is_bipartite(&self) -> bool {
        let n = self.vertex_count;
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            if u == v {
                return false;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut color = vec![u8::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Bipartite with every edge joining `side_a` to its complement.
    pub fn is_bipartite_between(&self, side_a: &[bool]) -> bool {
        self.edges.iter().all(|&(u, v)| side_a[u] != side_a[v])
    }
}

pub fn is_connected(g: &Multigraph) -> bool {
    g.is_connected()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices={}", self.vertex_count)?;
        for &(u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Multigraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty graph file"))?;
        let n: usize = header
            .trim()
            .strip_prefix("vertices=")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| parse_err(1, "expected `vertices=<int>`"))?;
        let mut g = Multigraph::new(n);
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(parse_err(i + 1, "expected `u v`"));
            }
            let u: usize = parts[0]
                .parse()
                .map_err(|_| parse_err(i + 1, "bad vertex"))?;
            let v: usize = parts[1]
                .parse()
                .map_err(|_| parse_err(i + 1, "bad vertex"))?;
            if u >= n || v >= n {
                return Err(parse_err(i + 1, format!("vertex out of range 0..{n}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loops_count_twice() {
        let g = Multigraph::from_edges(2, [(0, 0), (0, 1)]);
        assert_eq!(g.degrees(), vec![3, 1]);
        let a = g.adjacency();
        assert_eq!(a, vec![2.0, 1.0, 1.0, 0.0]);
        assert!(!g.is_bipartite());
    }

    #[test]
    fn connectivity_examples() {
        let cycle = Multigraph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)));
        assert!(cycle.is_connected());
        assert!(cycle.is_bipartite());
        let two = Multigraph::from_edges(4, [(0, 1), (2, 3)]);
        assert!(!two.is_connected());
        assert_eq!(two.component_count(), 2);
        assert!(Multigraph::new(1).is_connected());
        assert!(!Multigraph::new(0).is_connected());
        let triangle = Multigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        assert!(!triangle.is_bipartite());
    }

    #[test]
    fn text_format() {
        let g = Multigraph::from_edges(3, [(2, 0), (1, 1), (0, 2)]);
        let s = g.to_string();
        assert_eq!(s, "vertices=3\n0 2\n1 1\n0 2\n");
        assert_eq!(s.parse::<Multigraph>().unwrap(), g);
        assert!("vertices=2\n0 5\n".parse::<Multigraph>().is_err());
        assert!("v=2\n".parse::<Multigraph>().is_err());
    }
}
