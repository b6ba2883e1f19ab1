//! Synchronous message-passing engine.
//!
//! Round 0 is initialisation: every vertex computes from its own input and may
//! already decide and send. A message sent in round `r` is delivered into the
//! inbox of round `r + 1`. A run ends in the first round after which every
//! vertex has decided; that round's index is the reported running time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::vertex_map::VertexMap;

/// What a vertex sees about itself: its id and its neighbours' ids.
#[derive(Debug, Clone, Copy)]
pub struct NodeContext<'a> {
    pub id: VertexId,
    pub neighbors: &'a [VertexId],
    /// Number of vertices in the network, known to every processor.
    pub n: usize,
}

impl NodeContext<'_> {
    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }
}

#[derive(Debug, Clone)]
pub enum Outbox<M> {
    Silent,
    Broadcast(M),
    /// At most one message per neighbour.
    Send(Vec<(VertexId, M)>),
}

/// Result of one `init` or `step` call.
#[derive(Debug, Clone)]
pub struct Step<S, M, D> {
    pub state: S,
    pub outbox: Outbox<M>,
    pub decision: Option<D>,
}

impl<S, M, D> Step<S, M, D> {
    pub fn silent(state: S) -> Self {
        Self {
            state,
            outbox: Outbox::Silent,
            decision: None,
        }
    }

    pub fn broadcast(state: S, msg: M) -> Self {
        Self {
            state,
            outbox: Outbox::Broadcast(msg),
            decision: None,
        }
    }

    pub fn decide(mut self, decision: D) -> Self {
        self.decision = Some(decision);
        self
    }
}

/// A per-vertex automaton. `init` and `step` must be pure functions of their
/// arguments; the engine relies on that for reproducibility.
pub trait NodeProgram {
    type Input;
    type State;
    type Message: Clone;
    type Decision: Clone + PartialEq;

    fn init(
        &self,
        ctx: &NodeContext<'_>,
        input: &Self::Input,
    ) -> Step<Self::State, Self::Message, Self::Decision>;

    /// `inbox` holds the messages sent to this vertex in round `round - 1`,
    /// sorted by sender id.
    fn step(
        &self,
        ctx: &NodeContext<'_>,
        state: Self::State,
        round: usize,
        inbox: &[(VertexId, Self::Message)],
    ) -> Step<Self::State, Self::Message, Self::Decision>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub round_cap: usize,
    /// Fail with [`Error::Quiescent`] when a round delivers no message and
    /// produces no decision. Only sound for purely message-driven programs.
    pub halt_on_quiescence: bool,
}

impl SimOptions {
    pub fn with_cap(round_cap: usize) -> Self {
        Self {
            round_cap,
            halt_on_quiescence: false,
        }
    }

    /// `64 · (log₂ n + 1) · factor`, rounded up.
    pub fn default_for(n: usize, factor: f64) -> Self {
        Self::with_cap(default_round_cap(n, factor))
    }
}

pub fn default_round_cap(n: usize, factor: f64) -> usize {
    let log_n = (n.max(1) as f64).log2();
    (64.0 * (log_n + 1.0) * factor.max(1.0)).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePhase {
    pub label: String,
    pub rounds: usize,
    pub messages: u64,
}

/// Round and message accounting of one run or of a chain of runs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub rounds: usize,
    pub messages_sent: u64,
    /// Undecided vertices at the start of each round, round 0 included.
    pub per_round_active: Vec<usize>,
    /// Breakdown of chained runs.
    pub phases: Vec<TracePhase>,
}

impl RoundTrace {
    /// A trace with no communication.
    pub fn local(label: &str) -> Self {
        Self {
            phases: vec![TracePhase {
                label: label.to_owned(),
                rounds: 0,
                messages: 0,
            }],
            ..Self::default()
        }
    }

    /// Names a single-run trace.
    pub fn labelled(mut self, label: &str) -> Self {
        self.phases = vec![TracePhase {
            label: label.to_owned(),
            rounds: self.rounds,
            messages: self.messages_sent,
        }];
        self
    }

    /// Sequential composition: `other` starts after `self` ends.
    pub fn then(mut self, other: RoundTrace) -> Self {
        self.rounds += other.rounds;
        self.messages_sent += other.messages_sent;
        self.per_round_active.extend(other.per_round_active);
        self.phases.extend(other.phases);
        self
    }
}

#[derive(Debug, Clone)]
pub struct SyncRun<D> {
    pub decisions: VertexMap<D>,
    pub trace: RoundTrace,
}

/// Runs `program` on `g` until every vertex has decided.
pub fn run_sync<P: NodeProgram>(
    g: &Graph,
    program: &P,
    input: impl Fn(VertexId) -> P::Input,
    options: &SimOptions,
) -> Result<SyncRun<P::Decision>> {
    let n = g.n();
    let ctx = |v: VertexId| NodeContext {
        id: v,
        neighbors: g.neighbors(v),
        n,
    };

    let mut states: Vec<Option<P::State>> = Vec::with_capacity(n);
    let mut decisions: Vec<Option<P::Decision>> = vec![None; n];
    let mut pending: Vec<Vec<(VertexId, P::Message)>> = vec![Vec::new(); n];
    let mut messages = 0u64;
    let mut per_round_active = vec![n];

    for v in g.vertices() {
        let step = program.init(&ctx(v), &input(v));
        messages += deliver(g, v, 0, step.outbox, &mut pending)?;
        decisions[v - 1] = step.decision;
        states.push(Some(step.state));
    }
    let mut undecided = decisions.iter().filter(|d| d.is_none()).count();
    let mut round = 0;

    while undecided > 0 {
        round += 1;
        if round > options.round_cap {
            return Err(Error::Nontermination {
                cap: options.round_cap,
                undecided: undecided_ids(&decisions),
            });
        }
        per_round_active.push(undecided);
        let inboxes = std::mem::replace(&mut pending, vec![Vec::new(); n]);
        let delivered: usize = inboxes.iter().map(Vec::len).sum();
        let mut newly_decided = 0;

        for (v, mut inbox) in g.vertices().zip(inboxes) {
            inbox.sort_by_key(|&(from, _)| from);
            let state = states[v - 1].take().expect("state present between rounds");
            let step = program.step(&ctx(v), state, round, &inbox);
            messages += deliver(g, v, round, step.outbox, &mut pending)?;
            states[v - 1] = Some(step.state);
            match (&decisions[v - 1], step.decision) {
                (None, Some(d)) => {
                    decisions[v - 1] = Some(d);
                    newly_decided += 1;
                }
                (Some(old), Some(new)) if *old != new => {
                    return Err(Error::ModelViolation {
                        vertex: v,
                        round,
                        reason: "changed an already emitted decision".into(),
                    });
                }
                _ => {}
            }
        }
        undecided -= newly_decided;
        if options.halt_on_quiescence && undecided > 0 && delivered == 0 && newly_decided == 0 {
            return Err(Error::Quiescent {
                round,
                undecided: undecided_ids(&decisions),
            });
        }
    }

    let decisions = VertexMap::from_vec(decisions.into_iter().map(|d| d.expect("all decided")).collect());
    Ok(SyncRun {
        decisions,
        trace: RoundTrace {
            rounds: round,
            messages_sent: messages,
            per_round_active,
            phases: Vec::new(),
        },
    })
}

fn undecided_ids<D>(decisions: &[Option<D>]) -> Vec<VertexId> {
    decisions
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_none())
        .map(|(i, _)| i + 1)
        .collect()
}

fn deliver<M: Clone>(
    g: &Graph,
    from: VertexId,
    round: usize,
    outbox: Outbox<M>,
    pending: &mut [Vec<(VertexId, M)>],
) -> Result<u64> {
    match outbox {
        Outbox::Silent => Ok(0),
        Outbox::Broadcast(msg) => {
            for &w in g.neighbors(from) {
                pending[w - 1].push((from, msg.clone()));
            }
            Ok(g.degree(from) as u64)
        }
        Outbox::Send(list) => {
            let count = list.len() as u64;
            let mut seen = Vec::with_capacity(list.len());
            for (to, msg) in list {
                if g.neighbors(from).binary_search(&to).is_err() {
                    return Err(Error::ModelViolation {
                        vertex: from,
                        round,
                        reason: format!("sent a message to non-neighbour {to}"),
                    });
                }
                if seen.contains(&to) {
                    return Err(Error::ModelViolation {
                        vertex: from,
                        round,
                        reason: format!("sent two messages to {to} in one round"),
                    });
                }
                seen.push(to);
                pending[to - 1].push((from, msg));
            }
            Ok(count)
        }
    }
}

/// One round in which every vertex tells its neighbours a value.
/// Vertices without neighbours decide immediately.
pub struct Exchange;

impl NodeProgram for Exchange {
    type Input = u64;
    type State = ();
    type Message = u64;
    type Decision = Vec<(VertexId, u64)>;

    fn init(&self, ctx: &NodeContext<'_>, input: &u64) -> Step<(), u64, Self::Decision> {
        let step = Step::broadcast((), *input);
        if ctx.degree() == 0 {
            step.decide(Vec::new())
        } else {
            step
        }
    }

    fn step(
        &self,
        _ctx: &NodeContext<'_>,
        _state: (),
        _round: usize,
        inbox: &[(VertexId, u64)],
    ) -> Step<(), u64, Self::Decision> {
        Step::silent(()).decide(inbox.to_vec())
    }
}

/// Runs [`Exchange`] and returns, per vertex, the neighbours' values.
pub fn exchange(
    g: &Graph,
    values: impl Fn(VertexId) -> u64,
    label: &str,
) -> Result<(VertexMap<Vec<(VertexId, u64)>>, RoundTrace)> {
    let run = run_sync(g, &Exchange, values, &SimOptions::with_cap(1))?;
    Ok((run.decisions, run.trace.labelled(label)))
}
