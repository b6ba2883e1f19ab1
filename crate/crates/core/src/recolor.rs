//! Polynomial-family recoloring.
//!
//! A color `x ∈ [M]` is mapped to the polynomial over `GF(q)` whose
//! coefficients are the base-`q` digits of `x - 1`. Two distinct polynomials of
//! degree at most `D` agree on at most `D` field points, which is the agreement
//! bound the recoloring step needs. A vertex picks the first point `α` where
//! its polynomial collides with at most `d` relevant neighbours and adopts the
//! pair `(α, φ(α))` as its new color.

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orientation::PartialOrientation;
use crate::sim::{exchange, RoundTrace};
use crate::vertex_map::VertexMap;

/// Hard cap on recoloring iterations in the drivers.
pub const MAX_ITERATIONS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionFamily {
    /// Number of source colors.
    pub m: u64,
    /// Prime field size.
    pub q: u64,
    /// Polynomial degree bound, also the pairwise agreement bound.
    pub degree: u32,
    /// Number of field points `0..domain` a vertex may choose from.
    pub domain: u64,
}

impl FunctionFamily {
    /// Base-`q` digits of `x - 1`, least significant first.
    pub fn coefficients(&self, x: u64) -> Vec<u64> {
        let mut rest = x - 1;
        (0..=self.degree)
            .map(|_| {
                let digit = rest % self.q;
                rest /= self.q;
                digit
            })
            .collect()
    }

    pub fn eval(&self, x: u64, alpha: u64) -> u64 {
        eval_poly(&self.coefficients(x), alpha, self.q)
    }

    /// Number of field points in `0..q` where the encodings of `x` and `y` agree.
    pub fn agreements(&self, x: u64, y: u64) -> usize {
        let (cx, cy) = (self.coefficients(x), self.coefficients(y));
        (0..self.q)
            .filter(|&a| eval_poly(&cx, a, self.q) == eval_poly(&cy, a, self.q))
            .count()
    }

    /// Size of the output color space.
    pub fn palette(&self) -> u64 {
        self.domain * self.q
    }

    pub fn encode(&self, alpha: u64, beta: u64) -> u32 {
        (alpha * self.q + beta + 1) as u32
    }
}

fn eval_poly(coeffs: &[u64], alpha: u64, q: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| (acc * alpha + c) % q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecolorParams {
    /// Bound on the number of relevant neighbours of any vertex.
    pub a_out: usize,
    /// Defect (or arbdefect) of the input coloring.
    pub d_prime: usize,
    /// Target defect (or arbdefect).
    pub d: usize,
}

impl RecolorParams {
    fn validate(&self) -> Result<()> {
        if self.d_prime > self.d {
            return Err(Error::InvalidParameter(format!(
                "input defect {} exceeds target {}",
                self.d_prime, self.d
            )));
        }
        Ok(())
    }
}

/// Which neighbours a vertex compares against.
#[derive(Debug, Clone, Copy)]
pub enum Selector<'a> {
    AllNeighbors,
    ParentsOnly(&'a PartialOrientation),
}

fn is_prime(x: u64) -> bool {
    x >= 2 && (2..).take_while(|p| p * p <= x).all(|p| !x.is_multiple_of(p))
}

/// Smallest `D` with `q^(D+1) >= m`.
fn degree_for(m: u64, q: u64) -> u32 {
    let mut d = 0;
    let mut reach = q;
    while reach < m {
        reach = reach.saturating_mul(q);
        d += 1;
    }
    d
}

/// Smallest prime `q` whose degree-`D` family covers `m` colors and satisfies
/// `q·(d - d' + 1) > D·(A - d')`. The domain is cut to the fewest points that
/// still satisfy the inequality.
pub fn build_family(m: u64, params: RecolorParams) -> Result<FunctionFamily> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 source colors, got {m}"
        )));
    }
    params.validate()?;
    let slack = (params.d - params.d_prime + 1) as u64;
    let load = params.a_out.saturating_sub(params.d_prime) as u64;
    let mut q = 2;
    loop {
        if is_prime(q) {
            let degree = degree_for(m, q);
            let need = degree as u64 * load;
            if q * slack > need {
                return Ok(FunctionFamily {
                    m,
                    q,
                    degree,
                    domain: need / slack + 1,
                });
            }
        }
        q += 1;
    }
}

/// Diagnostics of one recoloring step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepLog {
    pub family: FunctionFamily,
    pub params: RecolorParams,
    pub colors_before: u32,
    pub colors_after: u32,
}

/// One round of Arb-Recolor: every vertex learns its neighbours' colors and
/// picks a new one locally.
pub fn recolor_step(
    g: &Graph,
    current: &Coloring,
    params: RecolorParams,
    selector: Selector<'_>,
) -> Result<(Coloring, StepLog, RoundTrace)> {
    let family = build_family(current.palette_size() as u64, params)?;
    let (heard, trace) = exchange(g, |v| current.color(v) as u64, "recolor")?;

    let mut colors = VertexMap::filled(g.n(), 0u32);
    for v in g.vertices() {
        let x = current.color(v) as u64;
        let relevant: Vec<u64> = match selector {
            Selector::AllNeighbors => heard[v].iter().map(|&(_, c)| c).collect(),
            Selector::ParentsOnly(sigma) => {
                let parents = sigma.parents(v);
                heard[v]
                    .iter()
                    .filter(|(u, _)| parents.contains(u))
                    .map(|&(_, c)| c)
                    .collect()
            }
        };
        let mine = family.coefficients(x);
        let theirs: Vec<Vec<u64>> = relevant.iter().map(|&y| family.coefficients(y)).collect();
        let alpha = (0..family.domain)
            .find(|&alpha| {
                let beta = eval_poly(&mine, alpha, family.q);
                let clashes = theirs
                    .iter()
                    .filter(|c| eval_poly(c, alpha, family.q) == beta)
                    .count();
                clashes <= params.d
            })
            .ok_or(Error::Infeasible { vertex: v })?;
        colors[v] = family.encode(alpha, eval_poly(&mine, alpha, family.q));
    }
    let out = Coloring::new(colors, family.palette() as u32)?;
    let log = StepLog {
        family,
        params,
        colors_before: current.palette_size(),
        colors_after: out.palette_size(),
    };
    Ok((out, log, trace))
}

/// Result of an iterated recoloring run.
#[derive(Debug, Clone)]
pub struct RecolorRun {
    pub coloring: Coloring,
    pub trace: RoundTrace,
    pub steps: Vec<StepLog>,
    /// Coloring after each step, parallel to `steps`.
    pub history: Vec<Coloring>,
}

/// `⌈d·(1 - 2^-i)⌉`.
fn scheduled_target(d: usize, i: usize) -> usize {
    let shift = i.min(usize::BITS as usize - 1);
    d - (d >> shift)
}

/// Iterates recoloring from the id coloring until the palette stops shrinking.
fn iterate(g: &Graph, a_out: usize, d: usize, selector: Selector<'_>, label: &str) -> Result<RecolorRun> {
    if d >= a_out {
        return Ok(RecolorRun {
            coloring: Coloring::constant(g.n()),
            trace: RoundTrace::local(label),
            steps: Vec::new(),
            history: Vec::new(),
        });
    }
    let mut current = Coloring::identity(g.n());
    let mut trace = RoundTrace::default();
    let mut steps = Vec::new();
    let mut history = Vec::new();
    let mut d_prev = 0;
    for i in 1..=MAX_ITERATIONS + 1 {
        let m = current.palette_size() as u64;
        if m < 2 {
            break;
        }
        let shrinks = |target| -> Result<bool> {
            let params = RecolorParams {
                a_out,
                d_prime: d_prev,
                d: target,
            };
            Ok(build_family(m, params)?.palette() < m)
        };
        let target = scheduled_target(d, i).max(d_prev);
        let target = if shrinks(target)? {
            target
        } else if target < d && shrinks(d)? {
            d
        } else {
            break;
        };
        if i > MAX_ITERATIONS {
            return Err(Error::Convergence(format!(
                "palette still shrinking after {MAX_ITERATIONS} iterations ({m} colors)"
            )));
        }
        let params = RecolorParams {
            a_out,
            d_prime: d_prev,
            d: target,
        };
        let (next, log, step_trace) = recolor_step(g, &current, params, selector)?;
        trace = trace.then(step_trace);
        steps.push(log);
        history.push(next.clone());
        current = next;
        d_prev = target;
    }
    Ok(RecolorRun {
        coloring: current,
        trace: trace.labelled(label),
        steps,
        history,
    })
}

/// A coloring in which every vertex has at most `d` same-colored neighbours.
/// `delta_bound` must bound the maximum degree of `g`.
pub fn defective_coloring_with_defect(g: &Graph, delta_bound: usize, d: usize) -> Result<RecolorRun> {
    if g.max_degree() > delta_bound {
        return Err(Error::Precondition(format!(
            "max degree {} exceeds the bound {delta_bound}",
            g.max_degree()
        )));
    }
    iterate(g, delta_bound, d, Selector::AllNeighbors, "defective-coloring")
}

/// `⌊Δ/p⌋`-defective `O(p²)`-coloring.
pub fn defective_coloring(g: &Graph, delta_bound: usize, p: usize) -> Result<RecolorRun> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be positive".into()));
    }
    defective_coloring_with_defect(g, delta_bound, delta_bound / p)
}

/// Arbdefective coloring along a complete acyclic orientation of out-degree
/// at most `a_out`: every vertex ends with at most `d` parents of its color.
pub fn arb_kuhn(g: &Graph, sigma: &PartialOrientation, a_out: usize, d: usize) -> Result<RecolorRun> {
    if !sigma.is_complete() {
        return Err(Error::Precondition("orientation must be complete".into()));
    }
    if let Some(cycle) = sigma.find_cycle() {
        return Err(Error::Cycle { cycle });
    }
    let out = sigma.max_out_degree();
    if out > a_out {
        return Err(Error::Precondition(format!(
            "orientation out-degree {out} exceeds {a_out}"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidParameter(
            "arbdefect target must be positive".into(),
        ));
    }
    iterate(g, a_out, d, Selector::ParentsOnly(sigma), "arb-kuhn")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_graph, GraphKind, GraphSpec};
    use crate::orientation::Direction;

    fn same_colored(g: &Graph, coloring: &Coloring, v: crate::graph::VertexId) -> usize {
        g.neighbors(v)
            .iter()
            .filter(|&&w| coloring.color(w) == coloring.color(v))
            .count()
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&x| is_prime(x)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn degree_zero_family() {
        let f = build_family(
            2,
            RecolorParams {
                a_out: 1,
                d_prime: 0,
                d: 0,
            },
        )
        .unwrap();
        assert_eq!((f.q, f.degree, f.domain), (2, 0, 1));
        assert_ne!(f.eval(1, 0), f.eval(2, 0));
    }

    #[test]
    fn exhaustive_agreement_for_125_colors() {
        let f = FunctionFamily {
            m: 125,
            q: 5,
            degree: 2,
            domain: 5,
        };
        assert_eq!(degree_for(125, 5), 2);
        for x in 1..=125 {
            for y in x + 1..=125 {
                assert!(f.agreements(x, y) <= 2, "{x} {y}");
            }
        }
    }

    #[test]
    fn family_inequalities_hold() {
        let params = RecolorParams {
            a_out: 12,
            d_prime: 0,
            d: 3,
        };
        let f = build_family(1000, params).unwrap();
        assert!(f.q.pow(f.degree + 1) >= 1000);
        assert!(f.q * 4 > f.degree as u64 * 12);
        assert!(f.domain <= f.q);
        assert!(f.domain * 4 > f.degree as u64 * 12);
        // Nothing smaller works.
        for q in (2..f.q).filter(|&q| is_prime(q)) {
            assert!(q * 4 <= degree_for(1000, q) as u64 * 12);
        }
    }

    #[test]
    fn schedule() {
        let got: Vec<usize> = (1..6).map(|i| scheduled_target(4, i)).collect();
        assert_eq!(got, vec![2, 3, 4, 4, 4]);
        assert_eq!(scheduled_target(0, 3), 0);
        assert_eq!(scheduled_target(7, 1), 4);
    }

    #[test]
    fn defective_bound_and_progress() {
        let g = generate_graph(&GraphSpec::new(GraphKind::RandomBoundedDegree { d: 16 }, 1000, 3))
            .unwrap()
            .graph;
        let run = defective_coloring(&g, 16, 4).unwrap();
        for v in g.vertices() {
            assert!(same_colored(&g, &run.coloring, v) <= 4);
        }
        for w in run.steps.windows(2) {
            assert!(w[1].colors_after < w[0].colors_after);
        }
        assert_eq!(run.trace.rounds, run.steps.len());
    }

    #[test]
    fn legal_when_p_exceeds_delta() {
        let g = generate_graph(&GraphSpec::new(GraphKind::ForestUnion { a: 3 }, 300, 4))
            .unwrap()
            .graph;
        let delta = g.max_degree();
        let run = defective_coloring(&g, delta, delta + 1).unwrap();
        assert!(g.vertices().all(|v| same_colored(&g, &run.coloring, v) == 0));
    }

    #[test]
    fn schedule_never_lowers_the_target() {
        let g = generate_graph(&GraphSpec::new(GraphKind::Clique, 12, 0))
            .unwrap()
            .graph;
        for p in 1..=12 {
            let run = defective_coloring(&g, 11, p).unwrap();
            for w in run.steps.windows(2) {
                assert!(w[1].params.d >= w[0].params.d);
            }
            assert!(g.vertices().all(|v| same_colored(&g, &run.coloring, v) <= 11 / p));
        }
    }

    #[test]
    fn p_one_is_constant() {
        let g = generate_graph(&GraphSpec::new(GraphKind::Cycle, 10, 0))
            .unwrap()
            .graph;
        let run = defective_coloring(&g, 2, 1).unwrap();
        assert_eq!(run.coloring.palette_size(), 1);
        assert_eq!(run.trace.rounds, 0);
        assert!(defective_coloring(&g, 2, 0).is_err());
        assert!(defective_coloring(&g, 1, 1).is_err());
    }

    #[test]
    fn k4_parents_only_step() {
        let g = generate_graph(&GraphSpec::new(GraphKind::Clique, 4, 0))
            .unwrap()
            .graph;
        let sigma = PartialOrientation::from_fn(&g, |_, _| Direction::Forward);
        let start = Coloring::identity(4);
        let params = RecolorParams {
            a_out: 3,
            d_prime: 0,
            d: 1,
        };
        let (out, log, _) = recolor_step(&g, &start, params, Selector::ParentsOnly(&sigma)).unwrap();
        assert!(out.palette_size() as u64 <= log.family.q * log.family.q);
        for v in g.vertices() {
            let same = sigma
                .parents(v)
                .iter()
                .filter(|&&u| out.color(u) == out.color(v))
                .count();
            assert!(same <= 1);
            // The chosen point is the first one satisfying the collision bound.
            let f = log.family;
            let alpha = (out.color(v) as u64 - 1) / f.q;
            for earlier in 0..alpha {
                let beta = f.eval(v as u64, earlier);
                let clashes = sigma
                    .parents(v)
                    .iter()
                    .filter(|&&u| f.eval(u as u64, earlier) == beta)
                    .count();
                assert!(clashes > 1);
            }
        }
    }

    #[test]
    fn single_vertex() {
        let g = Graph::empty(1);
        let run = defective_coloring(&g, 0, 1).unwrap();
        assert_eq!(run.coloring.distinct_colors(), 1);
    }
}
