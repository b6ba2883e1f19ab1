//! Legal coloring drivers built from arbdefective decompositions, and the
//! coloring to MIS reduction.

use serde::{Deserialize, Serialize};

use crate::arbdefective::arbdefective_coloring;
use crate::coloring::Coloring;
use crate::decomposition::be08_legal_coloring;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::orientation::complete_orientation;
use crate::recolor::{arb_kuhn, StepLog};
use crate::sim::{run_sync, NodeContext, NodeProgram, RoundTrace, SimOptions, Step};
use crate::vertex_map::VertexMap;
use crate::{check_epsilon, degree_bound, floor_tolerant};

/// State of the subgraph collection after one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iteration: usize,
    /// Size of the index space `|𝒢_i| = p^i`.
    pub members: usize,
    /// Members that received at least one vertex.
    pub nonempty_members: usize,
    pub alpha: usize,
    pub rounds: usize,
}

#[derive(Debug, Clone)]
pub struct LegalRun {
    pub coloring: Coloring,
    pub trace: RoundTrace,
    pub iterations: Vec<IterationLog>,
    /// Colors reserved for each member in the final step.
    pub palette_per_member: usize,
    /// Member index of each vertex when the loop ended.
    pub member: VertexMap<usize>,
}

/// Repeatedly splits every member into `p` parts of smaller arboricity bound,
/// then colors all members in parallel with disjoint palettes.
///
/// The loop stops early when the bound `⌊α/p + (2+ε)α/p⌋` would not drop
/// below `α`, which happens whenever `p ≤ 3 + ε`.
pub fn legal_coloring(g: &Graph, a: usize, p: usize, epsilon: f64) -> Result<LegalRun> {
    check_epsilon(epsilon)?;
    if p < 2 {
        return Err(Error::InvalidParameter(format!("p must be at least 2, got {p}")));
    }
    if a == 0 {
        return Err(Error::InvalidParameter(
            "arboricity bound must be positive".into(),
        ));
    }
    let mut member = VertexMap::filled(g.n(), 1usize);
    let mut members = 1usize;
    let mut alpha = a;
    let mut trace = RoundTrace::default();
    let mut iterations = Vec::new();

    while alpha > p {
        let next = floor_tolerant(alpha as f64 / p as f64 + (2.0 + epsilon) * alpha as f64 / p as f64);
        if next >= alpha {
            break;
        }
        // Members are vertex-disjoint, so running on their union is running
        // on all of them in parallel.
        let union = g.filter_edges(|u, v| member[u] == member[v]);
        let (split, step_trace) = arbdefective_coloring(&union, alpha, p, p, epsilon)?;
        let witness = &split.witness;
        if witness.max_out_degree() > next || witness.find_cycle().is_some() || !witness.is_complete() {
            return Err(Error::InvariantViolation(format!(
                "class witness out-degree {} exceeds the bound {next}",
                witness.max_out_degree()
            )));
        }
        for v in g.vertices() {
            member[v] = (member[v] - 1) * p + split.coloring.color(v) as usize;
        }
        members *= p;
        alpha = next;
        let mut used: Vec<usize> = member.values().to_vec();
        used.sort_unstable();
        used.dedup();
        iterations.push(IterationLog {
            iteration: iterations.len() + 1,
            members,
            nonempty_members: used.len(),
            alpha,
            rounds: step_trace.rounds,
        });
        trace = trace.then(step_trace);
    }

    let union = g.filter_edges(|u, v| member[u] == member[v]);
    let (inner, final_trace) = be08_legal_coloring(&union, alpha, epsilon)?;
    let palette = degree_bound(alpha, epsilon) + 1;
    let colors = VertexMap::from_fn(g.n(), |v| ((member[v] - 1) * palette) as u32 + inner.color(v));
    let coloring = Coloring::new(colors, (members * palette) as u32)?;
    Ok(LegalRun {
        coloring,
        trace: trace.then(final_trace),
        iterations,
        palette_per_member: palette,
        member,
    })
}

/// Monotone integer functions of the arboricity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthFn {
    /// `⌈log₂ log₂ (a + 3)⌉²`.
    LogLogSquared,
    /// `⌈log₂ a⌉³`.
    LogCubed,
    Identity,
    /// `values[a - 1]`, clamped to the last entry.
    Table {
        values: Vec<usize>,
    },
}

impl GrowthFn {
    pub fn eval(&self, a: usize) -> usize {
        match self {
            GrowthFn::LogLogSquared => {
                let x = ((a as f64 + 3.0).log2().log2() - 1e-9).ceil().max(0.0) as usize;
                x * x
            }
            GrowthFn::LogCubed => {
                let x = ((a.max(1) as f64).log2() - 1e-9).ceil().max(0.0) as usize;
                x * x * x
            }
            GrowthFn::Identity => a,
            GrowthFn::Table { values } => {
                let i = a.max(1).min(values.len()) - 1;
                values[i]
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let GrowthFn::Table { values } = self {
            if values.is_empty() || values.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::InvalidParameter(
                    "growth table must be non-empty and nondecreasing".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DriverMode {
    /// `p = ⌈a^{μ/2}⌉`; goes straight to the baseline when `a ≤ 17^{2/μ}`.
    LegalOA { mu: f64 },
    /// `p = ⌊a^{μ'} / log₂ n⌋`, baseline when that is below 2.
    Superlog { mu_prime: f64 },
    /// `p = ⌈f(a)^{1/2}⌉`, baseline when that is below 2.
    TradeoffF { f: GrowthFn },
    /// `p = 2^{⌈1/η⌉}`.
    Eta { eta: f64 },
    /// Arbdefective split into classes of arboricity `d = ⌈g(a)^{1/(1-η)}⌉`,
    /// then the `eta` driver on every class.
    FastG { eta: f64, g: GrowthFn },
    /// Arbdefective split into classes of arboricity `⌈A/t⌉`, then the
    /// `legal_o_a` driver on every class.
    Scaled { t: usize, mu: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverConfig {
    #[serde(flatten)]
    pub mode: DriverMode,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_epsilon() -> f64 {
    1.0
}

impl DriverConfig {
    pub fn new(mode: DriverMode) -> Self {
        Self { mode, epsilon: 1.0 }
    }

    pub fn validate(&self, a: usize) -> Result<()> {
        check_epsilon(self.epsilon)?;
        let unit = |name: &str, x: f64| {
            if x > 0.0 && x < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must lie in (0, 1), got {x}"
                )))
            }
        };
        match &self.mode {
            DriverMode::LegalOA { mu } => unit("mu", *mu),
            DriverMode::Superlog { mu_prime } => unit("mu'", *mu_prime),
            DriverMode::TradeoffF { f } => f.validate(),
            DriverMode::Eta { eta } if !(eta.is_finite() && *eta > 0.0) => Err(Error::InvalidParameter(
                format!("eta must be positive, got {eta}"),
            )),
            DriverMode::Eta { .. } => Ok(()),
            DriverMode::FastG { eta, g } => {
                unit("eta", *eta)?;
                g.validate()
            }
            DriverMode::Scaled { t, mu } => {
                unit("mu", *mu)?;
                if *t == 0 || *t > a {
                    return Err(Error::InvalidParameter(format!("t must lie in 1..={a}, got {t}")));
                }
                Ok(())
            }
        }
    }
}

/// What a driver did, for reporting.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DriverLog {
    /// Parameter `p` of the legal-coloring loop, if it ran.
    pub p: Option<usize>,
    pub iterations: Vec<IterationLog>,
    /// Arbdefect target of the class split, if any.
    pub class_arboricity: Option<usize>,
    pub classes: Option<usize>,
    pub recolor_steps: Vec<StepLog>,
    /// True when the driver fell back to the baseline coloring.
    pub baseline: bool,
}

#[derive(Debug, Clone)]
pub struct DriverRun {
    pub coloring: Coloring,
    pub trace: RoundTrace,
    pub log: DriverLog,
}

fn baseline(g: &Graph, a: usize, epsilon: f64) -> Result<DriverRun> {
    let (coloring, trace) = be08_legal_coloring(g, a, epsilon)?;
    Ok(DriverRun {
        coloring,
        trace,
        log: DriverLog {
            baseline: true,
            ..DriverLog::default()
        },
    })
}

fn with_p(g: &Graph, a: usize, p: usize, epsilon: f64) -> Result<DriverRun> {
    if p < 2 {
        return baseline(g, a, epsilon);
    }
    let run = legal_coloring(g, a, p, epsilon)?;
    Ok(DriverRun {
        coloring: run.coloring,
        trace: run.trace,
        log: DriverLog {
            p: Some(p),
            iterations: run.iterations,
            ..DriverLog::default()
        },
    })
}

/// Legal coloring of `g` with the strategy in `config`.
pub fn coloring_driver(g: &Graph, a: usize, config: &DriverConfig) -> Result<DriverRun> {
    config.validate(a)?;
    let eps = config.epsilon;
    match &config.mode {
        DriverMode::LegalOA { mu } => {
            if a as f64 <= 17f64.powf(2.0 / mu) {
                return baseline(g, a, eps);
            }
            with_p(g, a, (a as f64).powf(mu / 2.0).ceil() as usize, eps)
        }
        DriverMode::Superlog { mu_prime } => {
            let log_n = (g.n().max(2) as f64).log2();
            with_p(g, a, ((a as f64).powf(*mu_prime) / log_n).floor() as usize, eps)
        }
        DriverMode::TradeoffF { f } => with_p(g, a, (f.eval(a) as f64).sqrt().ceil() as usize, eps),
        DriverMode::Eta { eta } => with_p(g, a, eta_p(*eta)?, eps),
        DriverMode::FastG { eta, g: growth } => {
            let cap = degree_bound(a, eps);
            let d = ((growth.eval(a) as f64).powf(1.0 / (1.0 - eta)).ceil() as usize).clamp(1, cap);
            let inner = DriverConfig {
                mode: DriverMode::Eta { eta: *eta },
                epsilon: eps,
            };
            split_and_color(g, a, d, &inner, eps)
        }
        DriverMode::Scaled { t, mu } => {
            let d = degree_bound(a, eps).div_ceil(*t).max(1);
            let inner = DriverConfig {
                mode: DriverMode::LegalOA { mu: *mu },
                epsilon: eps,
            };
            split_and_color(g, a, d, &inner, eps)
        }
    }
}

fn eta_p(eta: f64) -> Result<usize> {
    let exp = (1.0 / eta - 1e-9).ceil();
    if exp >= 32.0 {
        return Err(Error::InvalidParameter(format!("eta = {eta} is too small")));
    }
    Ok(1usize << exp as u32)
}

/// Complete orientation, arbdefective split into classes of arboricity at most
/// `d`, then `inner` on all classes in parallel with disjoint palettes.
fn split_and_color(g: &Graph, a: usize, d: usize, inner: &DriverConfig, epsilon: f64) -> Result<DriverRun> {
    let orient = complete_orientation(g, a, epsilon)?;
    let cap = degree_bound(a, epsilon);
    let split = arb_kuhn(g, &orient.orientation, cap, d)?;
    let class = split.coloring.clone();
    let union = g.filter_edges(|u, v| class.color(u) == class.color(v));
    let run = coloring_driver(&union, d, inner)?;
    let palette = run.coloring.palette_size();
    let colors = VertexMap::from_fn(g.n(), |v| (class.color(v) - 1) * palette + run.coloring.color(v));
    let coloring = Coloring::new(colors, class.palette_size() * palette)?;
    let mut log = run.log;
    log.class_arboricity = Some(d);
    log.classes = Some(class.distinct_colors());
    log.recolor_steps = split.steps;
    Ok(DriverRun {
        coloring,
        trace: orient.trace.then(split.trace).then(run.trace),
        log,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum MisMsg {
    Joined,
    Out,
}

struct ColorSweep;

struct SweepState {
    /// Neighbours with a smaller color that have not decided yet.
    pending: Vec<VertexId>,
    done: Option<bool>,
}

impl ColorSweep {
    fn settle(mut s: SweepState) -> Step<SweepState, MisMsg, bool> {
        if s.pending.is_empty() {
            s.done = Some(true);
            return Step::broadcast(s, MisMsg::Joined).decide(true);
        }
        Step::silent(s)
    }
}

impl NodeProgram for ColorSweep {
    type Input = Vec<VertexId>;
    type State = SweepState;
    type Message = MisMsg;
    type Decision = bool;

    fn init(&self, _ctx: &NodeContext<'_>, lower: &Vec<VertexId>) -> Step<SweepState, MisMsg, bool> {
        Self::settle(SweepState {
            pending: lower.clone(),
            done: None,
        })
    }

    fn step(
        &self,
        _ctx: &NodeContext<'_>,
        mut s: SweepState,
        _round: usize,
        inbox: &[(VertexId, MisMsg)],
    ) -> Step<SweepState, MisMsg, bool> {
        if let Some(d) = s.done {
            return Step::silent(s).decide(d);
        }
        if inbox.iter().any(|&(_, m)| m == MisMsg::Joined) {
            s.done = Some(false);
            return Step::broadcast(s, MisMsg::Out).decide(false);
        }
        for &(w, _) in inbox {
            s.pending.retain(|&x| x != w);
        }
        Self::settle(s)
    }
}

/// Color-class sweep: a vertex joins once every smaller-colored neighbour has
/// declined, and declines as soon as a neighbour joins.
pub fn mis_from_coloring(g: &Graph, coloring: &Coloring) -> Result<(Vec<VertexId>, RoundTrace)> {
    if coloring.n() != g.n() {
        return Err(Error::Precondition(
            "coloring size does not match the graph".into(),
        ));
    }
    if let Some(&(u, v)) = g
        .edges()
        .iter()
        .find(|&&(u, v)| coloring.color(u) == coloring.color(v))
    {
        return Err(Error::Precondition(format!(
            "coloring is not legal on edge ({u}, {v})"
        )));
    }
    let lower = |v: VertexId| -> Vec<VertexId> {
        g.neighbors(v)
            .iter()
            .copied()
            .filter(|&w| coloring.color(w) < coloring.color(v))
            .collect()
    };
    let cap = 2 * coloring.palette_size() as usize + 1;
    let run = run_sync(g, &ColorSweep, lower, &SimOptions::with_cap(cap))?;
    let set = run
        .decisions
        .iter()
        .filter(|&(_, &joined)| joined)
        .map(|(v, _)| v)
        .collect();
    Ok((set, run.trace.labelled("mis")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind, GraphSpec};

    fn spec(kind: GraphKind, n: usize, seed: u64) -> Graph {
        generate_graph(&GraphSpec::new(kind, n, seed)).unwrap().graph
    }

    fn assert_legal(g: &Graph, c: &Coloring) {
        for &(u, v) in g.edges() {
            assert_ne!(c.color(u), c.color(v));
        }
    }

    fn assert_mis(g: &Graph, set: &[VertexId]) {
        let mut inside = vec![false; g.n() + 1];
        for &v in set {
            inside[v] = true;
        }
        for &(u, v) in g.edges() {
            assert!(!(inside[u] && inside[v]));
        }
        for v in g.vertices() {
            assert!(inside[v] || g.neighbors(v).iter().any(|&w| inside[w]));
        }
    }

    #[test]
    fn loop_skipped_when_a_le_p() {
        let g = spec(GraphKind::ForestUnion { a: 2 }, 300, 1);
        let run = legal_coloring(&g, 2, 4, 1.0).unwrap();
        assert!(run.iterations.is_empty());
        assert!(run.coloring.palette_size() <= 7);
        assert_legal(&g, &run.coloring);
        assert!(legal_coloring(&g, 2, 1, 1.0).is_err());
    }

    #[test]
    fn product_invariant_when_loop_runs() {
        let g = spec(GraphKind::ForestUnion { a: 16 }, 1000, 2);
        let run = legal_coloring(&g, 16, 8, 1.0).unwrap();
        assert!(!run.iterations.is_empty());
        for it in &run.iterations {
            let rhs = 4f64.powi(it.iteration as i32) * 16.0;
            assert!((it.alpha * it.members) as f64 <= rhs + 1e-9);
        }
        assert_legal(&g, &run.coloring);
    }

    #[test]
    fn small_p_stops_without_progress() {
        let g = spec(GraphKind::ForestUnion { a: 16 }, 500, 3);
        let run = legal_coloring(&g, 16, 4, 1.0).unwrap();
        assert!(run.iterations.is_empty());
        assert_legal(&g, &run.coloring);
    }

    #[test]
    fn growth_functions() {
        assert_eq!(GrowthFn::LogLogSquared.eval(16), 9);
        assert_eq!(GrowthFn::LogLogSquared.eval(1), 1);
        assert_eq!(GrowthFn::LogCubed.eval(8), 27);
        assert_eq!(GrowthFn::LogCubed.eval(9), 64);
        let t = GrowthFn::Table {
            values: vec![1, 2, 2, 5],
        };
        assert_eq!((t.eval(1), t.eval(4), t.eval(100)), (1, 5, 5));
        assert!(GrowthFn::Table { values: vec![3, 1] }.validate().is_err());
        assert_eq!(eta_p(1.0).unwrap(), 2);
        assert_eq!(eta_p(0.3).unwrap(), 16);
    }

    #[test]
    fn config_json_shape() {
        let c: DriverConfig = serde_json::from_str(r#"{"mode":"scaled","t":2,"mu":0.5}"#).unwrap();
        assert_eq!(c.mode, DriverMode::Scaled { t: 2, mu: 0.5 });
        assert_eq!(c.epsilon, 1.0);
        let c: DriverConfig =
            serde_json::from_str(r#"{"mode":"fast_g","eta":0.5,"g":{"kind":"identity"},"epsilon":0.5}"#)
                .unwrap();
        assert_eq!(c.epsilon, 0.5);
    }

    #[test]
    fn every_mode_is_legal() {
        let g = spec(GraphKind::ForestUnion { a: 8 }, 600, 4);
        let modes = [
            DriverMode::LegalOA { mu: 0.5 },
            DriverMode::Superlog { mu_prime: 0.9 },
            DriverMode::TradeoffF {
                f: GrowthFn::LogLogSquared,
            },
            DriverMode::Eta { eta: 1.0 },
            DriverMode::FastG {
                eta: 0.5,
                g: GrowthFn::LogCubed,
            },
            DriverMode::FastG {
                eta: 0.5,
                g: GrowthFn::Identity,
            },
            DriverMode::Scaled { t: 2, mu: 0.5 },
        ];
        for mode in modes {
            let run = coloring_driver(&g, 8, &DriverConfig::new(mode.clone())).unwrap();
            assert_legal(&g, &run.coloring);
        }
        assert!(coloring_driver(&g, 8, &DriverConfig::new(DriverMode::Scaled { t: 9, mu: 0.5 })).is_err());
    }

    #[test]
    fn scaled_classes() {
        let g = spec(GraphKind::ForestUnion { a: 8 }, 1000, 5);
        let run = coloring_driver(&g, 8, &DriverConfig::new(DriverMode::Scaled { t: 2, mu: 0.5 })).unwrap();
        assert_eq!(run.log.class_arboricity, Some(12));
        assert_legal(&g, &run.coloring);
    }

    #[test]
    fn mis_examples() {
        let (set, trace) = mis_from_coloring(&Graph::empty(1), &Coloring::constant(1)).unwrap();
        assert_eq!(set, vec![1]);
        assert_eq!(trace.rounds, 0);
        let p3 = spec(GraphKind::Path, 3, 0);
        let c = Coloring::new(VertexMap::from_vec(vec![1, 2, 1]), 2).unwrap();
        let (set, _) = mis_from_coloring(&p3, &c).unwrap();
        assert_eq!(set, vec![1, 3]);
        assert!(mis_from_coloring(&p3, &Coloring::constant(3)).is_err());

        let g = spec(GraphKind::ForestUnion { a: 4 }, 1000, 6);
        let run = coloring_driver(&g, 4, &DriverConfig::new(DriverMode::LegalOA { mu: 0.5 })).unwrap();
        let (set, trace) = mis_from_coloring(&g, &run.coloring).unwrap();
        assert_mis(&g, &set);
        assert!(trace.rounds <= 2 * run.coloring.palette_size() as usize);
    }
}
