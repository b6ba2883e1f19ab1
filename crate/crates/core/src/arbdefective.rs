//! Colorings whose classes induce subgraphs of bounded arboricity.

use crate::coloring::Coloring;
use crate::degree_bound;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::orientation::{acyclic_extension, partial_orientation, PartialOrientation};
use crate::sim::{run_sync, NodeContext, NodeProgram, RoundTrace, SimOptions, Step};

/// A coloring together with a certificate that every color class has
/// arboricity at most `bound`.
#[derive(Debug, Clone)]
pub struct ArbdefectiveColoring {
    pub coloring: Coloring,
    pub bound: usize,
    /// Complete acyclic orientation of the intra-class edges with out-degree
    /// at most `bound`.
    pub witness: PartialOrientation,
    /// The orientation the coloring was computed along.
    pub orientation: PartialOrientation,
}

impl ArbdefectiveColoring {
    /// Parents of `v` under the source orientation that share its color.
    pub fn same_colored_parents(&self, v: VertexId) -> usize {
        self.orientation
            .parents(v)
            .iter()
            .filter(|&&u| self.coloring.color(u) == self.coloring.color(v))
            .count()
    }
}

struct FewestParents {
    k: u32,
}

struct WaitState {
    parents: Vec<VertexId>,
    heard: Vec<u32>,
    done: Option<u32>,
}

impl FewestParents {
    fn settle(&self, mut s: WaitState) -> Step<WaitState, u32, u32> {
        if s.heard.len() < s.parents.len() {
            return Step::silent(s);
        }
        let mut load = vec![0usize; self.k as usize + 1];
        for &c in &s.heard {
            load[c as usize] += 1;
        }
        // Smallest color among those used by the fewest parents.
        let c = (1..=self.k).min_by_key(|&c| load[c as usize]).expect("k >= 1");
        s.done = Some(c);
        Step::broadcast(s, c).decide(c)
    }
}

impl NodeProgram for FewestParents {
    type Input = Vec<VertexId>;
    type State = WaitState;
    type Message = u32;
    type Decision = u32;

    fn init(&self, _ctx: &NodeContext<'_>, parents: &Vec<VertexId>) -> Step<WaitState, u32, u32> {
        self.settle(WaitState {
            parents: parents.clone(),
            heard: Vec::new(),
            done: None,
        })
    }

    fn step(
        &self,
        _ctx: &NodeContext<'_>,
        mut s: WaitState,
        _round: usize,
        inbox: &[(VertexId, u32)],
    ) -> Step<WaitState, u32, u32> {
        if let Some(c) = s.done {
            return Step::silent(s).decide(c);
        }
        for &(from, c) in inbox {
            if s.parents.binary_search(&from).is_ok() {
                s.heard.push(c);
            }
        }
        self.settle(s)
    }
}

/// Every vertex waits for its parents' colors and takes the color in `1..=k`
/// used by the fewest of them. The result has arbdefect at most
/// `deficit + ⌊out-degree / k⌋`.
pub fn simple_arbdefective(
    sigma: &PartialOrientation,
    k: usize,
) -> Result<(ArbdefectiveColoring, RoundTrace)> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let g = sigma.graph();
    let options = SimOptions::with_cap(g.n() + 1);
    let run = match run_sync(g, &FewestParents { k: k as u32 }, |v| sigma.parents(v), &options) {
        Ok(run) => run,
        Err(Error::Nontermination { .. }) => {
            let cycle = sigma
                .find_cycle()
                .expect("parent waiting only stalls on a directed cycle");
            return Err(Error::Cycle { cycle });
        }
        Err(e) => return Err(e),
    };
    let coloring = Coloring::new(run.decisions, k as u32)?;
    let bound = sigma.max_deficit() + sigma.max_out_degree() / k;
    let witness = class_witness(g, &coloring, sigma)?;
    Ok((
        ArbdefectiveColoring {
            coloring,
            bound,
            witness,
            orientation: sigma.clone(),
        },
        run.trace.labelled("simple-arbdefective"),
    ))
}

/// `σ` restricted to intra-class edges, completed by acyclic extension.
pub(crate) fn class_witness(
    g: &Graph,
    coloring: &Coloring,
    sigma: &PartialOrientation,
) -> Result<PartialOrientation> {
    debug_assert!(sigma.graph() == g);
    acyclic_extension(&sigma.restrict(|u, v| coloring.color(u) == coloring.color(v)))
}

/// Partial orientation with parameter `t`, then the fewest-parents rule with
/// `k` colors. Arbdefect at most `⌊a/t⌋ + ⌊⌊(2+ε)a⌋/k⌋`.
pub fn arbdefective_coloring(
    g: &Graph,
    a: usize,
    k: usize,
    t: usize,
    epsilon: f64,
) -> Result<(ArbdefectiveColoring, RoundTrace)> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let run = partial_orientation(g, a, t, epsilon)?;
    let (mut result, trace) = simple_arbdefective(&run.orientation, k)?;
    // The a-priori bound; the measured one from the orientation is never larger.
    let claimed = a / t + degree_bound(a, epsilon) / k;
    debug_assert!(result.bound <= claimed);
    result.bound = claimed;
    Ok((result, run.trace.then(trace)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degeneracy, generate_graph, GraphKind, GraphSpec};
    use crate::orientation::Direction;

    fn spec(kind: GraphKind, n: usize, seed: u64) -> Graph {
        generate_graph(&GraphSpec::new(kind, n, seed)).unwrap().graph
    }

    fn check_witness(r: &ArbdefectiveColoring) {
        let w = &r.witness;
        assert!(w.is_complete());
        assert!(w.find_cycle().is_none());
        assert!(w.max_out_degree() <= r.bound);
        for &(u, v) in w.graph().edges() {
            assert_eq!(r.coloring.color(u), r.coloring.color(v));
        }
    }

    #[test]
    fn directed_path_trace() {
        let g = spec(GraphKind::Path, 3, 0);
        let sigma = PartialOrientation::from_fn(&g, |_, _| Direction::Forward);
        let (r, trace) = simple_arbdefective(&sigma, 2).unwrap();
        assert_eq!(r.coloring.colors().values(), &[1, 2, 1]);
        assert_eq!(r.bound, 0);
        assert_eq!(r.witness.graph().m(), 0);
        assert_eq!(trace.rounds, 2);
    }

    #[test]
    fn k4_id_orientation() {
        let g = spec(GraphKind::Clique, 4, 0);
        let sigma = PartialOrientation::from_fn(&g, |_, _| Direction::Forward);
        let (r, trace) = simple_arbdefective(&sigma, 2).unwrap();
        // 4 has no parents: 1. 3 sees {1}: 2. 2 sees {1,2}: 1. 1 sees {1,2,1}: 2.
        assert_eq!(r.coloring.colors().values(), &[2, 1, 2, 1]);
        for v in g.vertices() {
            assert!(r.same_colored_parents(v) <= 1);
        }
        assert_eq!(r.bound, 1);
        check_witness(&r);
        assert_eq!(trace.rounds, 3);
    }

    #[test]
    fn one_color() {
        let g = spec(GraphKind::ForestUnion { a: 2 }, 100, 1);
        let mut sigma = PartialOrientation::unoriented(&g);
        for &(u, v) in g.edges().iter().step_by(2) {
            sigma.orient(u, v);
        }
        let (r, _) = simple_arbdefective(&sigma, 1).unwrap();
        assert_eq!(r.coloring.distinct_colors(), 1);
        assert_eq!(r.bound, sigma.max_deficit() + sigma.max_out_degree());
        check_witness(&r);
        assert_eq!(r.witness, acyclic_extension(&sigma).unwrap());
    }

    #[test]
    fn cyclic_input_reports_cycle() {
        let g = spec(GraphKind::Cycle, 4, 0);
        let mut sigma = PartialOrientation::unoriented(&g);
        for (u, v) in [(1, 2), (2, 3), (3, 4), (4, 1)] {
            sigma.orient(u, v);
        }
        assert!(matches!(simple_arbdefective(&sigma, 2), Err(Error::Cycle { .. })));
    }

    #[test]
    fn corollary_bounds() {
        let g = spec(GraphKind::Tree, 200, 3);
        let (r, _) = arbdefective_coloring(&g, 1, 1, 1, 1.0).unwrap();
        assert!(r.bound <= 4);
        check_witness(&r);

        let g = spec(GraphKind::ForestUnion { a: 9 }, 1000, 2);
        let (r, _) = arbdefective_coloring(&g, 9, 3, 3, 1.0).unwrap();
        assert_eq!(r.bound, 12);
        check_witness(&r);
        for (_, members) in r.coloring.classes() {
            let (h, _) = g.induced(&members);
            assert!(degeneracy(&h) <= 12);
        }
        for v in g.vertices() {
            assert!(
                r.same_colored_parents(v) <= r.orientation.parents(v).len() / 3 + r.orientation.deficit(v)
            );
        }
    }
}
