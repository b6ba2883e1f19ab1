use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, VertexId};
use crate::error::{Error, Result};

/// Generator family. Serialized with an inline `kind` tag, e.g.
/// `{"kind": "forest_union", "a": 3, "n": 100, "seed": 7}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    /// Union of `a` random spanning trees on the same vertex set.
    ForestUnion {
        a: usize,
    },
    /// Union of `a` complete `branching`-ary trees sharing one depth profile;
    /// peeling needs one phase per tree level.
    LayeredForests {
        a: usize,
        branching: usize,
    },
    /// Random recursive tree.
    Tree,
    Path,
    Cycle,
    Clique,
    /// Row-major grid with `⌈√n⌉` columns; the last row may be partial.
    Grid,
    /// Random `d`-regular simple graph.
    RandomBoundedDegree {
        d: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphSpec {
    #[serde(flatten)]
    pub kind: GraphKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl GraphSpec {
    pub fn new(kind: GraphKind, n: usize, seed: u64) -> Self {
        Self { kind, n, seed }
    }

    /// Arboricity upper bound known from the construction.
    pub fn arboricity_bound(&self) -> usize {
        let n = self.n;
        match self.kind {
            _ if n < 2 => 0,
            GraphKind::ForestUnion { a } | GraphKind::LayeredForests { a, .. } => a,
            GraphKind::Tree | GraphKind::Path => 1,
            GraphKind::Cycle | GraphKind::Grid => 2,
            GraphKind::Clique => n.div_ceil(2),
            GraphKind::RandomBoundedDegree { d } => (d + 1).div_ceil(2),
        }
    }

    /// Short file-name friendly label.
    pub fn label(&self) -> String {
        let kind = match self.kind {
            GraphKind::ForestUnion { a } => format!("forest_union_a{a}"),
            GraphKind::LayeredForests { a, branching } => format!("layered_a{a}_b{branching}"),
            GraphKind::Tree => "tree".into(),
            GraphKind::Path => "path".into(),
            GraphKind::Cycle => "cycle".into(),
            GraphKind::Clique => "clique".into(),
            GraphKind::Grid => "grid".into(),
            GraphKind::RandomBoundedDegree { d } => format!("regular_d{d}"),
        };
        format!("{kind}_n{}_s{}", self.n, self.seed)
    }
}

/// A generated graph plus, for forest unions, the forest index of every edge.
#[derive(Debug, Clone)]
pub struct GeneratedGraph {
    pub graph: Graph,
    /// `forest_certificate[e]` is the 1-based forest containing edge `e`.
    pub forest_certificate: Option<Vec<usize>>,
}

pub fn generate_graph(spec: &GraphSpec) -> Result<GeneratedGraph> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let plain = |graph| GeneratedGraph {
        graph,
        forest_certificate: None,
    };
    match spec.kind {
        GraphKind::Path => Ok(plain(Graph::from_canonical(
            n,
            (1..n).map(|i| (i, i + 1)).collect(),
        ))),
        GraphKind::Cycle => {
            if n < 3 {
                return Err(Error::InvalidParameter(format!("a cycle needs n >= 3, got {n}")));
            }
            let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            edges.push((1, n));
            Ok(plain(Graph::from_edges_dedup(n, edges)))
        }
        GraphKind::Clique => {
            let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
            Ok(plain(Graph::from_canonical(n, edges)))
        }
        GraphKind::Grid => {
            let cols = (1..=n).find(|c| c * c >= n).unwrap_or(1);
            let mut edges = Vec::new();
            for i in 0..n {
                if (i + 1) % cols != 0 && i + 1 < n {
                    edges.push((i + 1, i + 2));
                }
                if i + cols < n {
                    edges.push((i + 1, i + cols + 1));
                }
            }
            Ok(plain(Graph::from_edges_dedup(n, edges)))
        }
        GraphKind::Tree => Ok(plain(Graph::from_edges_dedup(n, random_tree(n, &mut rng)))),
        GraphKind::ForestUnion { a } => {
            if a == 0 {
                return Err(Error::InvalidParameter("forest_union needs a >= 1".into()));
            }
            let forests = (0..a).map(|_| random_tree(n, &mut rng)).collect();
            Ok(union_with_certificate(n, forests))
        }
        GraphKind::LayeredForests { a, branching } => {
            if a == 0 || branching < 2 {
                return Err(Error::InvalidParameter(
                    "layered_forests needs a >= 1 and branching >= 2".into(),
                ));
            }
            Ok(layered_forests(n, a, branching, &mut rng))
        }
        GraphKind::RandomBoundedDegree { d } => {
            if d >= n && n > 1 || (d > 0 && n == 1) {
                return Err(Error::InvalidParameter(format!(
                    "a {d}-regular graph needs d < n = {n}"
                )));
            }
            if d * n % 2 == 1 {
                return Err(Error::InvalidParameter(format!(
                    "no {d}-regular graph on {n} vertices: d*n is odd"
                )));
            }
            random_regular(n, d, &mut rng).map(plain)
        }
    }
}

/// Random recursive tree over a shuffled labelling.
fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(VertexId, VertexId)> {
    let mut order: Vec<VertexId> = (1..=n).collect();
    order.shuffle(rng);
    (1..n)
        .map(|i| {
            let parent = order[rng.gen_range(0..i)];
            (order[i], parent)
        })
        .collect()
}

fn union_with_certificate(n: usize, forests: Vec<Vec<(VertexId, VertexId)>>) -> GeneratedGraph {
    let all = forests.iter().flatten().copied();
    let graph = Graph::from_edges_dedup(n, all);
    let mut certificate = vec![0usize; graph.m()];
    for (f, forest) in forests.iter().enumerate() {
        for &(u, v) in forest {
            let e = graph.edge_id(u, v).expect("edge present in union");
            if certificate[e] == 0 {
                certificate[e] = f + 1;
            }
        }
    }
    GeneratedGraph {
        graph,
        forest_certificate: Some(certificate),
    }
}

fn layered_forests(n: usize, a: usize, branching: usize, rng: &mut ChaCha8Rng) -> GeneratedGraph {
    // Heap layout: position p > 0 has parent (p - 1) / branching.
    let mut level_start = vec![0usize];
    let mut width = 1usize;
    while *level_start.last().unwrap() < n {
        let next = level_start.last().unwrap() + width;
        level_start.push(next.min(n));
        width = width.saturating_mul(branching);
    }
    let mut labels: Vec<VertexId> = (1..=n).collect();
    labels.shuffle(rng);

    let mut forests = Vec::with_capacity(a);
    for _ in 0..a {
        // Depth-preserving permutation of positions.
        let mut perm: Vec<usize> = (0..n).collect();
        for w in level_start.windows(2) {
            perm[w[0]..w[1]].shuffle(rng);
        }
        let forest = (1..n)
            .map(|p| {
                let parent = (p - 1) / branching;
                (labels[perm[p]], labels[perm[parent]])
            })
            .collect();
        forests.push(forest);
    }
    union_with_certificate(n, forests)
}

fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    const ATTEMPTS: usize = 200;
    for _ in 0..ATTEMPTS {
        if let Some(edges) = try_pairing(n, d, rng) {
            return Ok(Graph::from_canonical(n, {
                let mut e = edges;
                e.sort_unstable();
                e
            }));
        }
    }
    Err(Error::InvalidParameter(format!(
        "failed to sample a simple {d}-regular graph on {n} vertices"
    )))
}

/// Random stub pairing that only accepts simple edges; `None` when stuck.
fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(VertexId, VertexId)>> {
    let mut stubs: Vec<VertexId> = (1..=n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut adjacent = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(n * d / 2);
    while !stubs.is_empty() {
        let len = stubs.len();
        let mut placed = false;
        for _ in 0..(50 * len).max(100) {
            let i = rng.gen_range(0..len);
            let j = rng.gen_range(0..len);
            let (u, v) = (stubs[i], stubs[j]);
            if u != v && !adjacent.contains(&(u.min(v), u.max(v))) {
                adjacent.insert((u.min(v), u.max(v)));
                edges.push((u.min(v), u.max(v)));
                let (hi, lo) = (i.max(j), i.min(j));
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(edges)
}
