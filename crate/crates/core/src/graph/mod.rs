//! Undirected simple graphs with bitset adjacency rows.
//!
//! A [`Graph`] is immutable once built. Every row is a fixed-width bitset, so
//! common neighbourhoods and clique extensions reduce to word-wise `AND`s.

mod bitset;
mod clique;
pub mod io;

pub use bitset::{Ones, VertexSet};
pub use clique::{contains_clique, enumerate_cliques, find_clique_in, Cliques};
pub(crate) use clique::has_clique_words;

pub(crate) use bitset::{
    clear_bit, clear_through, first_bit, intersection_len, popcount,
    test_bit, words_for,
};

use thiserror::Error;

/// Largest vertex count accepted unless a caller asks for a different cap.
pub const DEFAULT_VERTEX_CAP: usize = 8192;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("graph on {n} vertices exceeds the vertex cap {cap}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("vertex sets overlap")]
    OverlappingSets,
    #[error("vertex set universe {got} does not match graph order {expected}")]
    UniverseMismatch { expected: usize, got: usize },
    #[error("malformed graph6 input: {0}")]
    Graph6(String),
    #[error("malformed edge list: {0}")]
    EdgeList(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an edge list, deduplicating repeated and reversed
    /// pairs. Uses [`DEFAULT_VERTEX_CAP`].
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::from_edges_capped(n, edges, DEFAULT_VERTEX_CAP)
    }

    pub fn from_edges_capped(
        n: usize,
        edges: &[(usize, usize)],
        cap: usize,
    ) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::with_cap(n, cap)?;
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Ok(GraphBuilder::new(n)?.build())
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n)?;
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge(u, v)?;
            }
        }
        Ok(b.build())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// e(G).
    pub fn size(&self) -> usize {
        popcount(&self.adj) / 2
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn word_len(&self) -> usize {
        self.words
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    pub fn degree(&self, v: usize) -> usize {
        popcount(self.row(v))
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && test_bit(self.row(u), v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for u in 0..self.n {
            let mut row = self.row(u).to_vec();
            clear_through(&mut row, u);
            out.extend(bitset::Ones::new(&row).map(|v| (u, v)));
        }
        out
    }

    /// Non-edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// N_G(U): vertices adjacent to every member of `set`.
    pub fn common_neighborhood(&self, set: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_universe(set)?;
        let mut it = set.iter();
        let first = it.next().ok_or(GraphError::EmptySet)?;
        let mut out = self.neighbors(first);
        for v in it {
            out.intersect_with(self.row(v));
        }
        Ok(out)
    }

    /// e_G(U, W) for disjoint `U`, `W`.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> Result<usize, GraphError> {
        self.check_universe(a)?;
        self.check_universe(b)?;
        if !a.is_disjoint(b) {
            return Err(GraphError::OverlappingSets);
        }
        Ok(a.iter().map(|v| intersection_len(self.row(v), b.as_words())).sum())
    }

    /// Number of edges with both endpoints in `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        set.iter()
            .map(|v| intersection_len(self.row(v), set.as_words()))
            .sum::<usize>()
            / 2
    }

    /// Whether `vertices` are pairwise adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            u < self.n && vertices[i + 1..].iter().all(|&v| self.has_edge(u, v))
        })
    }

    /// G[set], relabelled in increasing vertex order.
    pub fn induced(&self, set: &VertexSet) -> Graph {
        let verts = set.to_vec();
        let mut b = GraphBuilder::new(verts.len()).expect("induced subgraph is smaller than host");
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    b.add_edge(i, j).expect("indices in range");
                }
            }
        }
        b.build()
    }

    /// Copy with the edge `uv` removed (no-op if absent).
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        if u < self.n && v < self.n {
            let w = self.words;
            clear_bit(&mut g.adj[u * w..(u + 1) * w], v);
            clear_bit(&mut g.adj[v * w..(v + 1) * w], u);
        }
        g
    }

    /// Copy with the edge `uv` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        let mut g = self.clone();
        let w = self.words;
        g.adj[u * w + v / 64] |= 1 << (v % 64);
        g.adj[v * w + u / 64] |= 1 << (u % 64);
        Ok(g)
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut b = GraphBuilder::new(self.n).expect("same order");
        for (u, v) in self.edges() {
            b.add_edge(perm[u], perm[v]).expect("permutation in range");
        }
        b.build()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub(crate) fn check_universe(&self, set: &VertexSet) -> Result<(), GraphError> {
        if set.universe() == self.n {
            Ok(())
        } else {
            Err(GraphError::UniverseMismatch {
                expected: self.n,
                got: set.universe(),
            })
        }
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Incremental builder; the only way to mutate adjacency.
pub struct GraphBuilder {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        Self::with_cap(n, DEFAULT_VERTEX_CAP)
    }

    pub fn with_cap(n: usize, cap: usize) -> Result<Self, GraphError> {
        if n > cap {
            return Err(GraphError::TooManyVertices { n, cap });
        }
        let words = words_for(n).max(1);
        Ok(Self {
            n,
            words,
            adj: vec![0; n * words],
        })
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
        Ok(())
    }

    /// Joins every vertex of `a` to every vertex of `b` (ranges must be disjoint).
    pub(crate) fn join_ranges(&mut self, a: std::ops::Range<usize>, b: std::ops::Range<usize>) {
        for u in a {
            for v in b.clone() {
                self.add_edge(u, v).expect("join ranges in bounds and disjoint");
            }
        }
    }

    pub fn build(self) -> Graph {
        Graph {
            n: self.n,
            words: self.words,
            adj: self.adj,
        }
    }
}

/// C(n, 2) in `u64`.
#[inline]
pub fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn build_triangle_cycle_and_dedup() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.size(), 3);
        assert_eq!(cycle(5).size(), 5);
        let e = Graph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(e.size(), 1);
    }

    #[test]
    fn build_rejects_bad_pairs() {
        assert_eq!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            Graph::from_edges_capped(10, &[], 9),
            Err(GraphError::TooManyVertices { n: 10, cap: 9 })
        );
    }

    #[test]
    fn common_neighborhood_examples() {
        let c5 = cycle(5);
        let u = VertexSet::from_vertices(5, [0, 2]);
        assert_eq!(c5.common_neighborhood(&u).unwrap().to_vec(), vec![1]);

        let k4 = Graph::complete(4).unwrap();
        let u = VertexSet::from_vertices(4, [0, 1]);
        assert_eq!(k4.common_neighborhood(&u).unwrap().to_vec(), vec![2, 3]);

        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let u = VertexSet::from_vertices(3, [0, 2]);
        assert_eq!(path.common_neighborhood(&u).unwrap().to_vec(), vec![1]);

        assert_eq!(
            path.common_neighborhood(&VertexSet::new(3)),
            Err(GraphError::EmptySet)
        );
    }

    #[test]
    fn edges_between_examples() {
        let k33 = complete_bipartite(3, 3);
        let a = VertexSet::from_range(6, 0..3);
        let b = VertexSet::from_range(6, 3..6);
        assert_eq!(k33.edges_between(&a, &b).unwrap(), 9);

        let c5 = cycle(5);
        let s = |v: &[usize]| VertexSet::from_vertices(5, v.iter().copied());
        assert_eq!(c5.edges_between(&s(&[0]), &s(&[2, 3])).unwrap(), 0);
        assert_eq!(c5.edges_between(&s(&[0, 1]), &s(&[2, 4])).unwrap(), 2);
        assert_eq!(
            c5.edges_between(&s(&[0, 1]), &s(&[1, 4])),
            Err(GraphError::OverlappingSets)
        );
    }

    #[test]
    fn common_neighborhood_of_pairs_is_row_intersection() {
        // exhaustive over all graphs on 5 vertices
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edges(5, &edges).unwrap();
            for &(u, v) in &pairs {
                let got = g
                    .common_neighborhood(&VertexSet::from_vertices(5, [u, v]))
                    .unwrap();
                let want: Vec<usize> = (0..5)
                    .filter(|&w| g.has_edge(u, w) && g.has_edge(v, w))
                    .collect();
                assert_eq!(got.to_vec(), want);
            }
        }
    }

    #[test]
    fn edge_mutation_copies() {
        let c5 = cycle(5);
        let g = c5.without_edge(0, 1);
        assert_eq!(g.size(), 4);
        assert!(!g.has_edge(1, 0));
        assert_eq!(g.with_edge(0, 1).unwrap(), c5);
    }
}
