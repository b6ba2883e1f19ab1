//! Immutable simple undirected graphs on vertex ids `1..=n`.

mod generate;
mod oracle;

use std::collections::VecDeque;
use std::sync::Arc;

pub use generate::{generate_graph, GeneratedGraph, GraphKind, GraphSpec};
pub use oracle::{
    chromatic_number, degeneracy, degeneracy_ordering, exact_arboricity, small_graph_oracles, OracleReport,
    EXACT_ORACLE_LIMIT,
};

use crate::error::{Error, Result};

/// Vertex ids are 1-based.
pub type VertexId = usize;
/// Position of an edge in [`Graph::edges`].
pub type EdgeId = usize;

#[derive(Debug, PartialEq, Eq)]
struct GraphData {
    n: usize,
    /// Canonical `(u, v)` with `u < v`, sorted lexicographically.
    edges: Vec<(VertexId, VertexId)>,
    /// Sorted neighbor ids, index `v - 1`.
    neighbors: Vec<Vec<VertexId>>,
    /// Edge id of `(v, neighbors[v-1][i])`, parallel to `neighbors`.
    incident: Vec<Vec<EdgeId>>,
}

/// Simple undirected graph. Cloning is cheap; the data is shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    data: Arc<GraphData>,
}

impl Graph {
    /// Graph on `n` vertices without edges.
    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    /// Builds a graph, rejecting out-of-range ids, self-loops and parallel edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut canonical = Vec::new();
        for (u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 1..={n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "parallel edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_canonical(n, canonical))
    }

    /// Like [`Graph::from_edges`] but silently drops duplicate edges.
    pub(crate) fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut canonical: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        canonical.sort_unstable();
        canonical.dedup();
        Self::from_canonical(n, canonical)
    }

    fn from_canonical(n: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut neighbors: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            neighbors[u - 1].push((v, id));
            neighbors[v - 1].push((u, id));
        }
        let mut adj = Vec::with_capacity(n);
        let mut incident = Vec::with_capacity(n);
        for mut list in neighbors {
            list.sort_unstable();
            adj.push(list.iter().map(|&(w, _)| w).collect());
            incident.push(list.iter().map(|&(_, e)| e).collect());
        }
        Self {
            data: Arc::new(GraphData {
                n,
                edges,
                neighbors: adj,
                incident,
            }),
        }
    }

    pub fn n(&self) -> usize {
        self.data.n
    }

    pub fn m(&self) -> usize {
        self.data.edges.len()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<VertexId> {
        1..=self.data.n
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.data.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.data.edges[e]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.data.neighbors[v - 1]
    }

    /// Edge ids parallel to [`Graph::neighbors`].
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.data.incident[v - 1]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.data.neighbors[v - 1].len()
    }

    pub fn max_degree(&self) -> usize {
        self.data.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if u == 0 || u > self.n() {
            return None;
        }
        let nbrs = self.neighbors(u);
        nbrs.binary_search(&v).ok().map(|i| self.data.incident[u - 1][i])
    }

    /// Same vertex set, keeping only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(VertexId, VertexId) -> bool) -> Graph {
        let edges = self
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| keep(u, v))
            .collect();
        Self::from_canonical(self.n(), edges)
    }

    /// Subgraph induced by `vertices`, relabelled to `1..=k` in the given order.
    /// Returns the subgraph and the original id of each new vertex.
    pub fn induced(&self, vertices: &[VertexId]) -> (Graph, Vec<VertexId>) {
        let mut new_id = vec![0usize; self.n() + 1];
        for (i, &v) in vertices.iter().enumerate() {
            new_id[v] = i + 1;
        }
        let mut edges = Vec::new();
        for &v in vertices {
            for &w in self.neighbors(v) {
                if v < w && new_id[w] != 0 {
                    let (a, b) = (new_id[v], new_id[w]);
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
        edges.sort_unstable();
        (Self::from_canonical(vertices.len(), edges), vertices.to_vec())
    }

    /// Vertices within hop distance `radius` of `source` (inclusive), sorted.
    pub fn ball(&self, source: VertexId, radius: usize) -> Vec<VertexId> {
        let mut dist = vec![usize::MAX; self.n() + 1];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        let mut out = vec![source];
        while let Some(v) = queue.pop_front() {
            if dist[v] == radius {
                continue;
            }
            for &w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::from_edges(3, [(1, 1)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(Graph::from_edges(3, [(1, 4)]).is_err());
        assert!(Graph::from_edges(3, [(0, 2)]).is_err());
        assert!(Graph::from_edges(3, [(1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn adjacency_matches_edges() {
        let g = Graph::from_edges(4, [(3, 1), (1, 2), (4, 3)]).unwrap();
        assert_eq!(g.edges(), &[(1, 2), (1, 3), (3, 4)]);
        assert_eq!(g.neighbors(1), &[2, 3]);
        assert_eq!(g.neighbors(3), &[1, 4]);
        for v in g.vertices() {
            for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
                let (a, b) = g.edge(e);
                assert!((a, b) == (v.min(w), v.max(w)));
            }
        }
        assert_eq!(g.edge_id(4, 3), Some(2));
        assert_eq!(g.edge_id(2, 4), None);
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn induced_relabels() {
        let g = Graph::from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        let (h, ids) = g.induced(&[2, 3, 5]);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edges(), &[(1, 2)]);
        assert_eq!(ids, vec![2, 3, 5]);
    }

    #[test]
    fn ball_radius() {
        let g = Graph::from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert_eq!(g.ball(1, 0), vec![1]);
        assert_eq!(g.ball(3, 1), vec![2, 3, 4]);
        assert_eq!(g.ball(1, 10), vec![1, 2, 3, 4, 5]);
    }
}
