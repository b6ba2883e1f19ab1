//! H-partitions, forests decompositions and the baseline legal coloring.

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::orientation::{complete_orientation, PartialOrientation};
use crate::recolor::defective_coloring_with_defect;
use crate::sim::{
    default_round_cap, exchange, run_sync, NodeContext, NodeProgram, RoundTrace, SimOptions, Step,
};
use crate::vertex_map::VertexMap;
use crate::{check_epsilon, degree_bound};

/// Vertex partition into levels `1..=levels`; a vertex of level `i` has at most
/// `⌊(2+ε)a⌋` neighbours at levels `≥ i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPartition {
    pub level: VertexMap<usize>,
    pub levels: usize,
    pub a: usize,
    pub epsilon: f64,
}

impl HPartition {
    pub fn degree_bound(&self) -> usize {
        degree_bound(self.a, self.epsilon)
    }

    /// `⌈log n / log((2+ε)/2)⌉ + 1`.
    pub fn level_bound(n: usize, epsilon: f64) -> usize {
        if n <= 1 {
            return 1;
        }
        ((n as f64).ln() / ((2.0 + epsilon) / 2.0).ln() - 1e-9).ceil() as usize + 1
    }

    pub fn members(&self, level: usize) -> Vec<VertexId> {
        self.level
            .iter()
            .filter(|&(_, &l)| l == level)
            .map(|(v, _)| v)
            .collect()
    }

    /// Neighbours of `v` at its own level or above.
    pub fn upward_degree(&self, g: &Graph, v: VertexId) -> usize {
        g.neighbors(v)
            .iter()
            .filter(|&&w| self.level[w] >= self.level[v])
            .count()
    }
}

struct Peeling {
    bound: usize,
}

enum PeelState {
    Active(usize),
    Removed(usize),
}

impl NodeProgram for Peeling {
    type Input = ();
    type State = PeelState;
    type Message = ();
    type Decision = usize;

    fn init(&self, ctx: &NodeContext<'_>, _: &()) -> Step<PeelState, (), usize> {
        self.phase(ctx.degree(), 1)
    }

    fn step(
        &self,
        _ctx: &NodeContext<'_>,
        state: PeelState,
        round: usize,
        inbox: &[(VertexId, ())],
    ) -> Step<PeelState, (), usize> {
        match state {
            PeelState::Removed(level) => Step::silent(state).decide(level),
            PeelState::Active(residual) => self.phase(residual - inbox.len(), round + 1),
        }
    }
}

impl Peeling {
    fn phase(&self, residual: usize, level: usize) -> Step<PeelState, (), usize> {
        if residual <= self.bound {
            Step::broadcast(PeelState::Removed(level), ()).decide(level)
        } else {
            Step::silent(PeelState::Active(residual))
        }
    }
}

/// Synchronous peeling: in every phase, each remaining vertex with at most
/// `⌊(2+ε)a⌋` remaining neighbours joins the current level and tells its
/// neighbours. Phase `i` takes place in round `i - 1`.
pub fn h_partition(g: &Graph, a: usize, epsilon: f64) -> Result<(HPartition, RoundTrace)> {
    check_epsilon(epsilon)?;
    if a == 0 {
        return Err(Error::InvalidParameter(
            "arboricity bound must be positive".into(),
        ));
    }
    let bound = degree_bound(a, epsilon);
    let options = SimOptions {
        round_cap: default_round_cap(g.n(), 1.0),
        halt_on_quiescence: true,
    };
    let run = match run_sync(g, &Peeling { bound }, |_| (), &options) {
        Ok(run) => run,
        Err(Error::Quiescent { undecided, .. } | Error::Nontermination { undecided, .. }) => {
            return Err(Error::ArboricityUnderestimate {
                a,
                residual: undecided,
            })
        }
        Err(e) => return Err(e),
    };
    let levels = run.decisions.values().iter().copied().max().unwrap_or(1);
    // A graph of arboricity at most `a` loses a constant fraction per phase,
    // so needing more levels than that proves `a` too small.
    let cap = HPartition::level_bound(g.n(), epsilon);
    if levels > cap {
        return Err(Error::ArboricityUnderestimate {
            a,
            residual: run
                .decisions
                .iter()
                .filter(|&(_, &l)| l > cap)
                .map(|(v, _)| v)
                .collect(),
        });
    }
    Ok((
        HPartition {
            level: run.decisions,
            levels,
            a,
            epsilon,
        },
        run.trace.labelled("h-partition"),
    ))
}

/// Which neighbours constrain a vertex's color in [`level_coloring`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelMode {
    /// Legal within every H-set; levels are colored in parallel.
    WithinLevel,
    /// Legal on the whole graph; levels are colored from the top down.
    Descending,
}

#[derive(Debug, Clone)]
struct GreedyInput {
    level: usize,
    priority: (u32, VertexId),
    /// `(id, level, priority color)` of each neighbour.
    neighbors: Vec<(VertexId, usize, u32)>,
}

#[derive(Debug, Clone, Copy)]
enum Greedy {
    Propose(u32),
    Fixed(u32),
}

#[derive(Debug)]
struct GreedyState {
    input: GreedyInput,
    taken: Vec<u32>,
    /// Same-level neighbours that have not fixed a color yet.
    rivals: Vec<VertexId>,
    /// Higher-level neighbours still to fix (descending mode only).
    waiting: Vec<VertexId>,
    proposal: Option<u32>,
    fixed: Option<u32>,
}

struct GreedyColoring {
    mode: LevelMode,
}

impl GreedyColoring {
    fn relevant(&self, own: usize, other: usize) -> bool {
        match self.mode {
            LevelMode::WithinLevel => other == own,
            LevelMode::Descending => other >= own,
        }
    }

    fn advance(&self, mut s: GreedyState) -> Step<GreedyState, Greedy, u32> {
        if !s.waiting.is_empty() {
            return Step::silent(s);
        }
        let c = (1..).find(|c| !s.taken.contains(c)).expect("unbounded");
        if s.rivals.is_empty() {
            s.fixed = Some(c);
            return Step::broadcast(s, Greedy::Fixed(c)).decide(c);
        }
        s.proposal = Some(c);
        Step::broadcast(s, Greedy::Propose(c))
    }
}

impl NodeProgram for GreedyColoring {
    type Input = GreedyInput;
    type State = GreedyState;
    type Message = Greedy;
    type Decision = u32;

    fn init(&self, _ctx: &NodeContext<'_>, input: &GreedyInput) -> Step<GreedyState, Greedy, u32> {
        let rivals = input
            .neighbors
            .iter()
            .filter(|&&(_, l, _)| l == input.level)
            .map(|&(w, _, _)| w)
            .collect();
        let waiting = match self.mode {
            LevelMode::WithinLevel => Vec::new(),
            LevelMode::Descending => input
                .neighbors
                .iter()
                .filter(|&&(_, l, _)| l > input.level)
                .map(|&(w, _, _)| w)
                .collect(),
        };
        self.advance(GreedyState {
            input: input.clone(),
            taken: Vec::new(),
            rivals,
            waiting,
            proposal: None,
            fixed: None,
        })
    }

    fn step(
        &self,
        _ctx: &NodeContext<'_>,
        mut s: GreedyState,
        _round: usize,
        inbox: &[(VertexId, Greedy)],
    ) -> Step<GreedyState, Greedy, u32> {
        if let Some(c) = s.fixed {
            return Step::silent(s).decide(c);
        }
        let mut blocked = false;
        for &(w, msg) in inbox {
            let &(_, level, prio) = s
                .input
                .neighbors
                .iter()
                .find(|&&(x, _, _)| x == w)
                .expect("messages come from neighbours");
            if !self.relevant(s.input.level, level) {
                continue;
            }
            match msg {
                Greedy::Fixed(c) => {
                    s.taken.push(c);
                    s.rivals.retain(|&x| x != w);
                    s.waiting.retain(|&x| x != w);
                    blocked |= s.proposal == Some(c);
                }
                Greedy::Propose(c) => {
                    blocked |=
                        level == s.input.level && s.proposal == Some(c) && (prio, w) > s.input.priority;
                }
            }
        }
        if let Some(c) = s.proposal.take() {
            if !blocked {
                s.fixed = Some(c);
                return Step::broadcast(s, Greedy::Fixed(c)).decide(c);
            }
        }
        self.advance(s)
    }
}

/// Colors H-sets with at most `⌊(2+ε)a⌋ + 1` colors.
///
/// Neighbours' levels are exchanged first; then a legal coloring of the
/// within-level subgraph from recoloring serves as the priority in a greedy
/// phase where a vertex proposes its smallest free color and keeps it unless a
/// higher-priority rival proposed the same color or it was just taken.
pub fn level_coloring(
    g: &Graph,
    partition: &HPartition,
    mode: LevelMode,
) -> Result<(VertexMap<u32>, RoundTrace)> {
    let bound = partition.degree_bound();
    let (levels, level_trace) = exchange(g, |v| partition.level[v] as u64, "announce-levels")?;
    let same_level = g.filter_edges(|u, v| partition.level[u] == partition.level[v]);
    let priority = defective_coloring_with_defect(&same_level, bound, 0)?;
    let (prio_heard, prio_trace) = exchange(g, |v| priority.coloring.color(v) as u64, "announce-priority")?;

    let input = |v: VertexId| GreedyInput {
        level: partition.level[v],
        priority: (priority.coloring.color(v), v),
        neighbors: levels[v]
            .iter()
            .zip(&prio_heard[v])
            .map(|(&(w, l), &(_, p))| (w, l as usize, p as u32))
            .collect(),
    };
    let cap = 4 * g.n() + default_round_cap(g.n(), 1.0);
    let run = run_sync(g, &GreedyColoring { mode }, input, &SimOptions::with_cap(cap))?;
    if let Some((v, &c)) = run.decisions.iter().find(|&(_, &c)| c as usize > bound + 1) {
        return Err(Error::InvariantViolation(format!(
            "vertex {v} took color {c} beyond the palette {}",
            bound + 1
        )));
    }
    let trace = level_trace
        .then(priority.trace)
        .then(prio_trace)
        .then(run.trace.labelled("greedy-level-coloring"));
    Ok((run.decisions, trace))
}

/// Legal `(⌊(2+ε)a⌋ + 1)`-coloring: H-partition, then levels from the top
/// down, each vertex avoiding the colors of neighbours at its level or above.
pub fn be08_legal_coloring(g: &Graph, a: usize, epsilon: f64) -> Result<(Coloring, RoundTrace)> {
    let (partition, trace) = h_partition(g, a, epsilon)?;
    let (colors, color_trace) = level_coloring(g, &partition, LevelMode::Descending)?;
    let coloring = Coloring::new(colors, partition.degree_bound() as u32 + 1)?;
    Ok((coloring, trace.then(color_trace)))
}

#[derive(Debug, Clone)]
pub struct ForestsDecomposition {
    /// 1-based forest of each edge, indexed by edge id.
    pub forest_index: Vec<usize>,
    pub forests: usize,
    pub orientation: PartialOrientation,
}

impl ForestsDecomposition {
    pub fn forest_edges(&self, f: usize) -> Vec<(VertexId, VertexId)> {
        self.orientation
            .graph()
            .edges()
            .iter()
            .zip(&self.forest_index)
            .filter(|&(_, &i)| i == f)
            .map(|(&e, _)| e)
            .collect()
    }
}

/// Numbers each vertex's outgoing edges of a complete acyclic orientation;
/// edge number `f` goes to forest `f`.
pub fn forests_decomposition(
    g: &Graph,
    a: usize,
    epsilon: f64,
) -> Result<(ForestsDecomposition, RoundTrace)> {
    let run = complete_orientation(g, a, epsilon)?;
    let sigma = run.orientation;
    let mut forest_index = vec![0; g.m()];
    for v in g.vertices() {
        for (i, u) in sigma.parents(v).into_iter().enumerate() {
            forest_index[g.edge_id(v, u).expect("edge")] = i + 1;
        }
    }
    let forests = forest_index.iter().copied().max().unwrap_or(0);
    Ok((
        ForestsDecomposition {
            forest_index,
            forests,
            orientation: sigma,
        },
        run.trace,
    ))
}
