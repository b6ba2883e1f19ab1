//! Partial acyclic orientations and the procedures that build and consume them.
//!
//! An edge `(u, v)` oriented from `u` to `v` makes `v` a parent of `u`.
//! Directions are stored relative to the canonical form `u < v`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::decomposition::{h_partition, level_coloring, HPartition, LevelMode};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::recolor::defective_coloring_with_defect;
use crate::sim::{exchange, run_sync, NodeContext, NodeProgram, RoundTrace, SimOptions, Step};
use crate::vertex_map::VertexMap;
use crate::{check_epsilon, degree_bound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// From the smaller endpoint to the larger.
    Forward,
    /// From the larger endpoint to the smaller.
    Backward,
    Unoriented,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrientation {
    graph: Graph,
    dirs: Vec<Direction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationMetrics {
    pub out_degree: usize,
    pub deficit: usize,
    /// Longest directed path, in edges.
    pub length: usize,
}

impl PartialOrientation {
    pub fn new(graph: &Graph, dirs: Vec<Direction>) -> Result<Self> {
        if dirs.len() != graph.m() {
            return Err(Error::InvalidParameter(format!(
                "{} directions for {} edges",
                dirs.len(),
                graph.m()
            )));
        }
        Ok(Self {
            graph: graph.clone(),
            dirs,
        })
    }

    /// No edge oriented.
    pub fn unoriented(graph: &Graph) -> Self {
        Self {
            graph: graph.clone(),
            dirs: vec![Direction::Unoriented; graph.m()],
        }
    }

    /// Direction of each canonical edge `(u, v)`, `u < v`.
    pub fn from_fn(graph: &Graph, mut f: impl FnMut(VertexId, VertexId) -> Direction) -> Self {
        Self {
            graph: graph.clone(),
            dirs: graph.edges().iter().map(|&(u, v)| f(u, v)).collect(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn directions(&self) -> &[Direction] {
        &self.dirs
    }

    pub fn direction(&self, e: EdgeId) -> Direction {
        self.dirs[e]
    }

    /// `(tail, head)` of an oriented edge.
    pub fn arc(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        let (u, v) = self.graph.edge(e);
        match self.dirs[e] {
            Direction::Forward => Some((u, v)),
            Direction::Backward => Some((v, u)),
            Direction::Unoriented => None,
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.dirs.len()).filter_map(|e| self.arc(e))
    }

    /// Orients `from → to`. The edge must exist.
    pub fn orient(&mut self, from: VertexId, to: VertexId) {
        let e = self.graph.edge_id(from, to).expect("edge exists");
        self.dirs[e] = if from < to {
            Direction::Forward
        } else {
            Direction::Backward
        };
    }

    pub fn is_complete(&self) -> bool {
        !self.dirs.contains(&Direction::Unoriented)
    }

    fn incident(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Direction)> + '_ {
        self.graph
            .neighbors(v)
            .iter()
            .zip(self.graph.incident_edges(v))
            .map(move |(&w, &e)| {
                let dir = match (self.dirs[e], v < w) {
                    (Direction::Unoriented, _) => Direction::Unoriented,
                    // Out of v.
                    (Direction::Forward, true) | (Direction::Backward, false) => Direction::Forward,
                    _ => Direction::Backward,
                };
                (w, dir)
            })
    }

    /// Heads of the edges leaving `v`, ascending.
    pub fn parents(&self, v: VertexId) -> Vec<VertexId> {
        self.incident(v)
            .filter(|&(_, d)| d == Direction::Forward)
            .map(|(w, _)| w)
            .collect()
    }

    pub fn children(&self, v: VertexId) -> Vec<VertexId> {
        self.incident(v)
            .filter(|&(_, d)| d == Direction::Backward)
            .map(|(w, _)| w)
            .collect()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.incident(v).filter(|&(_, d)| d == Direction::Forward).count()
    }

    /// Unoriented edges at `v`.
    pub fn deficit(&self, v: VertexId) -> usize {
        self.incident(v)
            .filter(|&(_, d)| d == Direction::Unoriented)
            .count()
    }

    pub fn max_out_degree(&self) -> usize {
        self.graph
            .vertices()
            .map(|v| self.out_degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn max_deficit(&self) -> usize {
        self.graph.vertices().map(|v| self.deficit(v)).max().unwrap_or(0)
    }

    /// A directed cycle, listed along its arcs, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<VertexId>> {
        let n = self.graph.n();
        let out: Vec<Vec<VertexId>> = std::iter::once(Vec::new())
            .chain(self.graph.vertices().map(|v| self.parents(v)))
            .collect();
        // 0 = new, 1 = on stack, 2 = done
        let mut state = vec![0u8; n + 1];
        let mut parent = vec![0usize; n + 1];
        for root in self.graph.vertices() {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if let Some(&w) = out[v].get(*i) {
                    *i += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            parent[w] = v;
                            stack.push((w, 0));
                        }
                        1 => {
                            let mut cycle = vec![v];
                            let mut x = v;
                            while x != w {
                                x = parent[x];
                                cycle.push(x);
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Topological order of the oriented sub-digraph, tails before heads,
    /// smallest id first among ready vertices.
    pub fn topological_order(&self) -> Result<Vec<VertexId>> {
        let n = self.graph.n();
        let mut indeg = vec![0usize; n + 1];
        for (_, head) in self.arcs() {
            indeg[head] += 1;
        }
        let mut ready: BinaryHeap<Reverse<VertexId>> = self
            .graph
            .vertices()
            .filter(|&v| indeg[v] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for w in self.parents(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        if order.len() < n {
            let cycle = self.find_cycle().expect("unordered vertices imply a cycle");
            return Err(Error::Cycle { cycle });
        }
        Ok(order)
    }

    /// Per-vertex length: the longest directed path leaving the vertex.
    pub fn lengths(&self) -> Result<VertexMap<usize>> {
        let order = self.topological_order()?;
        let mut len = VertexMap::filled(self.graph.n(), 0usize);
        for &v in order.iter().rev() {
            len[v] = self.parents(v).iter().map(|&u| len[u] + 1).max().unwrap_or(0);
        }
        Ok(len)
    }

    pub fn metrics(&self) -> Result<OrientationMetrics> {
        orientation_metrics(self)
    }

    /// Restriction to the edges accepted by `keep`, on a filtered copy of the graph.
    pub fn restrict(&self, mut keep: impl FnMut(VertexId, VertexId) -> bool) -> PartialOrientation {
        let sub = self.graph.filter_edges(&mut keep);
        let dirs = self
            .graph
            .edges()
            .iter()
            .zip(&self.dirs)
            .filter(|(&(u, v), _)| keep(u, v))
            .map(|(_, &d)| d)
            .collect();
        PartialOrientation { graph: sub, dirs }
    }
}

pub fn orientation_metrics(sigma: &PartialOrientation) -> Result<OrientationMetrics> {
    let length = sigma.lengths()?.values().iter().copied().max().unwrap_or(0);
    Ok(OrientationMetrics {
        out_degree: sigma.max_out_degree(),
        deficit: sigma.max_deficit(),
        length,
    })
}

/// Orients every unoriented edge toward the endpoint later in the topological
/// order. Offline; charges no rounds.
pub fn acyclic_extension(sigma: &PartialOrientation) -> Result<PartialOrientation> {
    let order = sigma.topological_order()?;
    let mut pos = vec![0usize; sigma.graph.n() + 1];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut out = sigma.clone();
    for (e, &(u, v)) in sigma.graph.edges().iter().enumerate() {
        if out.dirs[e] == Direction::Unoriented {
            out.dirs[e] = if pos[u] < pos[v] {
                Direction::Forward
            } else {
                Direction::Backward
            };
        }
    }
    Ok(out)
}

/// Output of the orientation procedures, with the intermediate structure kept
/// for inspection.
#[derive(Debug, Clone)]
pub struct OrientationRun {
    pub orientation: PartialOrientation,
    pub partition: HPartition,
    /// Color of each vertex within its H-set.
    pub level_colors: VertexMap<u32>,
    pub trace: RoundTrace,
}

/// Orients `u → w` when `w` has the higher level, or the same level and the
/// higher color; equal level and color stays unoriented.
fn orient_by_level_and_color(
    g: &Graph,
    partition: &HPartition,
    colors: &VertexMap<u32>,
) -> PartialOrientation {
    PartialOrientation::from_fn(g, |u, v| {
        let ku = (partition.level[u], colors[u]);
        let kv = (partition.level[v], colors[v]);
        match ku.cmp(&kv) {
            std::cmp::Ordering::Less => Direction::Forward,
            std::cmp::Ordering::Greater => Direction::Backward,
            std::cmp::Ordering::Equal => Direction::Unoriented,
        }
    })
}

/// Complete acyclic orientation with out-degree at most `⌊(2+ε)a⌋`.
pub fn complete_orientation(g: &Graph, a: usize, epsilon: f64) -> Result<OrientationRun> {
    let (partition, trace) = h_partition(g, a, epsilon)?;
    let (level_colors, color_trace) = level_coloring(g, &partition, LevelMode::WithinLevel)?;
    let (_, announce) = exchange(g, |v| level_colors[v] as u64, "announce-colors")?;
    let orientation = orient_by_level_and_color(g, &partition, &level_colors);
    debug_assert!(orientation.is_complete());
    Ok(OrientationRun {
        orientation,
        partition,
        level_colors,
        trace: trace.then(color_trace).then(announce),
    })
}

/// Partial acyclic orientation with out-degree at most `⌊(2+ε)a⌋` and deficit
/// at most `⌊a/t⌋`: H-sets get a `⌊a/t⌋`-defective coloring instead of a
/// legal one.
pub fn partial_orientation(g: &Graph, a: usize, t: usize, epsilon: f64) -> Result<OrientationRun> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    check_epsilon(epsilon)?;
    let (partition, trace) = h_partition(g, a, epsilon)?;
    let (levels, level_trace) = exchange(g, |v| partition.level[v] as u64, "announce-levels")?;
    let same_level = g.filter_edges(|u, v| partition.level[u] == partition.level[v]);
    // Each vertex knows which incident edges stay inside its level from the exchange.
    debug_assert!(g.vertices().all(|v| levels[v]
        .iter()
        .filter(|&&(_, l)| l as usize == partition.level[v])
        .count()
        == same_level.degree(v)));
    let bound = degree_bound(a, epsilon);
    let defective = defective_coloring_with_defect(&same_level, bound, a / t)?;
    let level_colors = defective.coloring.colors().clone();
    let (_, announce) = exchange(g, |v| level_colors[v] as u64, "announce-colors")?;
    let orientation = orient_by_level_and_color(g, &partition, &level_colors);
    Ok(OrientationRun {
        orientation,
        partition,
        level_colors,
        trace: trace.then(level_trace).then(defective.trace).then(announce),
    })
}

struct LengthColoring;

struct LengthState {
    parents: Vec<VertexId>,
    heard: Vec<usize>,
    done: Option<usize>,
}

impl NodeProgram for LengthColoring {
    type Input = Vec<VertexId>;
    type State = LengthState;
    type Message = usize;
    type Decision = usize;

    fn init(&self, _ctx: &NodeContext<'_>, parents: &Vec<VertexId>) -> Step<LengthState, usize, usize> {
        let state = LengthState {
            parents: parents.clone(),
            heard: Vec::new(),
            done: None,
        };
        settle(state)
    }

    fn step(
        &self,
        _ctx: &NodeContext<'_>,
        mut state: LengthState,
        _round: usize,
        inbox: &[(VertexId, usize)],
    ) -> Step<LengthState, usize, usize> {
        if let Some(len) = state.done {
            return Step::silent(state).decide(len);
        }
        for &(from, len) in inbox {
            if state.parents.binary_search(&from).is_ok() {
                state.heard.push(len);
            }
        }
        settle(state)
    }
}

fn settle(mut state: LengthState) -> Step<LengthState, usize, usize> {
    if state.heard.len() < state.parents.len() {
        return Step::silent(state);
    }
    let len = state.heard.iter().map(|l| l + 1).max().unwrap_or(0);
    state.done = Some(len);
    Step::broadcast(state, len).decide(len)
}

/// Every vertex waits for its parents and takes color `len + 1`. A vertex of
/// length `i` decides in round `i`.
pub fn color_from_orientation(sigma: &PartialOrientation) -> Result<(Coloring, RoundTrace)> {
    if !sigma.is_complete() {
        return Err(Error::Precondition(format!(
            "orientation leaves {} edges unoriented",
            sigma.dirs.iter().filter(|&&d| d == Direction::Unoriented).count()
        )));
    }
    if let Some(cycle) = sigma.find_cycle() {
        return Err(Error::Cycle { cycle });
    }
    let g = sigma.graph();
    let cap = g.n() + 1;
    let run = run_sync(
        g,
        &LengthColoring,
        |v| sigma.parents(v),
        &SimOptions::with_cap(cap),
    )?;
    let colors = run.decisions.map(|_, &len| len as u32 + 1);
    let coloring = Coloring::from_colors(colors)?;
    Ok((coloring, run.trace.labelled("length-coloring")))
}
