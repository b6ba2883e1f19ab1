//! Certification of colorings and orientations from `(graph, artifact)` alone.
//!
//! Nothing here calls back into the algorithms; cycle search, out-degrees and
//! lengths are recomputed from the raw arcs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::{degeneracy, exact_arboricity, Graph, VertexId, EXACT_ORACLE_LIMIT};
use crate::orientation::PartialOrientation;

#[derive(Debug, Clone, Copy)]
pub enum Claim<'a> {
    Legal,
    Defect(usize),
    /// Every class has arboricity at most `bound`, certified by a complete
    /// acyclic orientation of the intra-class edges.
    Arbdefect {
        bound: usize,
        witness: Option<&'a PartialOrientation>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCertificate {
    pub color: u32,
    pub size: usize,
    pub witness_valid: bool,
    pub witness_out_degree: usize,
    pub degeneracy: usize,
    /// Only for classes of at most 12 vertices.
    pub exact_arboricity: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationCertificate {
    pub acyclic: bool,
    pub cycle: Option<Vec<VertexId>>,
    pub complete: bool,
    pub out_degree: usize,
    pub deficit: usize,
    /// `None` when the orientation has a cycle.
    pub length: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub legal: bool,
    pub violating_edge: Option<(VertexId, VertexId)>,
    pub colors_used: usize,
    pub defect: usize,
    pub defect_vertex: Option<VertexId>,
    pub classes: Vec<ClassCertificate>,
    pub orientation: Option<OrientationCertificate>,
    /// Claims that did not hold.
    pub failures: Vec<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Largest number of same-colored neighbours and a vertex attaining it.
pub fn defect_of(g: &Graph, c: &Coloring) -> (usize, Option<VertexId>) {
    g.vertices()
        .map(|v| {
            let same = g
                .neighbors(v)
                .iter()
                .filter(|&&w| c.color(w) == c.color(v))
                .count();
            (same, Some(v))
        })
        .max_by_key(|&(same, v)| (same, std::cmp::Reverse(v)))
        .filter(|&(same, _)| same > 0)
        .unwrap_or((0, None))
}

pub fn check_coloring(g: &Graph, c: &Coloring, claims: &[Claim<'_>]) -> Result<CertificateReport> {
    if c.n() != g.n() {
        return Err(Error::Precondition(format!(
            "coloring covers {} vertices, graph has {}",
            c.n(),
            g.n()
        )));
    }
    let violating_edge = g.edges().iter().copied().find(|&(u, v)| c.color(u) == c.color(v));
    let (defect, defect_vertex) = defect_of(g, c);
    let mut report = CertificateReport {
        legal: violating_edge.is_none(),
        violating_edge,
        colors_used: c.distinct_colors(),
        defect,
        defect_vertex,
        ..CertificateReport::default()
    };
    for claim in claims {
        match *claim {
            Claim::Legal => {
                if let Some((u, v)) = violating_edge {
                    report.failures.push(format!("edge ({u}, {v}) is monochromatic"));
                }
            }
            Claim::Defect(m) => {
                if defect > m {
                    report.failures.push(format!(
                        "vertex {} has {defect} same-colored neighbours, claimed at most {m}",
                        defect_vertex.unwrap_or(0)
                    ));
                }
            }
            Claim::Arbdefect { bound, witness } => {
                let witness = witness.ok_or_else(|| {
                    Error::IncompleteCertificate("arbdefect claimed without witness orientation".into())
                })?;
                check_arbdefect(g, c, bound, witness, &mut report);
            }
        }
    }
    Ok(report)
}

fn check_arbdefect(
    g: &Graph,
    c: &Coloring,
    bound: usize,
    witness: &PartialOrientation,
    report: &mut CertificateReport,
) {
    let wg = witness.graph();
    let n = g.n();
    let mut structural = Vec::new();
    if wg.n() != n {
        structural.push(format!("witness has {} vertices, graph has {n}", wg.n()));
    } else {
        for &(u, v) in wg.edges() {
            if !g.has_edge(u, v) || c.color(u) != c.color(v) {
                structural.push(format!("witness edge ({u}, {v}) is not an intra-class edge"));
            }
        }
        for &(u, v) in g.edges() {
            if c.color(u) == c.color(v) && !wg.has_edge(u, v) {
                structural.push(format!("intra-class edge ({u}, {v}) missing from witness"));
            }
        }
    }
    let arcs: Vec<(VertexId, VertexId)> = witness.arcs().collect();
    let complete = arcs.len() == wg.m();
    if !complete {
        structural.push(format!("witness leaves {} edges unoriented", wg.m() - arcs.len()));
    }
    let cycle = if wg.n() == n { find_cycle(n, &arcs) } else { None };
    if let Some(cyc) = &cycle {
        structural.push(format!("witness has a directed cycle through {cyc:?}"));
    }
    let mut out = vec![0usize; n + 1];
    for &(tail, _) in &arcs {
        if tail <= n {
            out[tail] += 1;
        }
    }
    let valid = structural.is_empty();
    report.failures.extend(structural);

    for (color, members) in c.classes() {
        let (h, _) = g.induced(&members);
        let witness_out = members.iter().map(|&v| out[v]).max().unwrap_or(0);
        let degen = degeneracy(&h);
        let exact = (members.len() <= EXACT_ORACLE_LIMIT).then(|| exact_arboricity(&h).expect("small"));
        let ok = valid && witness_out <= bound;
        if witness_out > bound {
            report.failures.push(format!(
                "class {color}: witness out-degree {witness_out} exceeds {bound}"
            ));
        }
        // An acyclic orientation of out-degree r exists iff degeneracy <= r.
        if degen > bound {
            report
                .failures
                .push(format!("class {color}: degeneracy {degen} exceeds {bound}"));
        }
        if let Some(x) = exact {
            if x > bound {
                report
                    .failures
                    .push(format!("class {color}: exact arboricity {x} exceeds {bound}"));
            }
        }
        report.classes.push(ClassCertificate {
            color,
            size: members.len(),
            witness_valid: ok,
            witness_out_degree: witness_out,
            degeneracy: degen,
            exact_arboricity: exact,
        });
    }
}

/// Directed cycle among `arcs` on vertices `1..=n`, by Kahn elimination and a
/// walk inside the leftover core.
pub fn find_cycle(n: usize, arcs: &[(VertexId, VertexId)]) -> Option<Vec<VertexId>> {
    let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); n + 1];
    let mut indeg = vec![0usize; n + 1];
    for &(u, v) in arcs {
        out[u].push(v);
        indeg[v] += 1;
    }
    let mut queue: Vec<VertexId> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = vec![false; n + 1];
    while let Some(v) = queue.pop() {
        removed[v] = true;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    // Every leftover vertex has a leftover in-neighbour; walk backwards until a repeat.
    let start = (1..=n).find(|&v| !removed[v])?;
    let mut pred = vec![0usize; n + 1];
    for &(u, v) in arcs {
        if !removed[u] && !removed[v] {
            pred[v] = u;
        }
    }
    let mut seen = vec![usize::MAX; n + 1];
    let mut walk = Vec::new();
    let mut x = start;
    while seen[x] == usize::MAX {
        seen[x] = walk.len();
        walk.push(x);
        x = pred[x];
    }
    let mut cycle = walk[seen[x]..].to_vec();
    cycle.reverse();
    Some(cycle)
}

/// Longest directed path in an acyclic arc set, in edges.
fn longest_path(n: usize, arcs: &[(VertexId, VertexId)]) -> usize {
    let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); n + 1];
    let mut indeg = vec![0usize; n + 1];
    for &(u, v) in arcs {
        out[u].push(v);
        indeg[v] += 1;
    }
    let mut depth = vec![0usize; n + 1];
    let mut queue: Vec<VertexId> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    let mut best = 0;
    while let Some(v) = queue.pop() {
        best = best.max(depth[v]);
        for &w in &out[v] {
            depth[w] = depth[w].max(depth[v] + 1);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationClaims {
    pub acyclic: bool,
    pub complete: bool,
    pub out_degree: Option<usize>,
    pub deficit: Option<usize>,
    pub length: Option<usize>,
}

pub fn validate_orientation(
    g: &Graph,
    sigma: &PartialOrientation,
    claims: &OrientationClaims,
) -> CertificateReport {
    let mut failures = Vec::new();
    if sigma.graph().edges() != g.edges() || sigma.graph().n() != g.n() {
        failures.push("orientation is defined on a different graph".to_owned());
    }
    let n = g.n();
    let arcs: Vec<(VertexId, VertexId)> = sigma.arcs().collect();
    let mut out = vec![0usize; n + 1];
    let mut unoriented = vec![0usize; n + 1];
    for e in 0..sigma.graph().m() {
        match sigma.arc(e) {
            Some((tail, _)) => out[tail] += 1,
            None => {
                let (u, v) = sigma.graph().edge(e);
                unoriented[u] += 1;
                unoriented[v] += 1;
            }
        }
    }
    let cycle = find_cycle(n, &arcs);
    let cert = OrientationCertificate {
        acyclic: cycle.is_none(),
        complete: arcs.len() == sigma.graph().m(),
        out_degree: out.iter().copied().max().unwrap_or(0),
        deficit: unoriented.iter().copied().max().unwrap_or(0),
        length: cycle.is_none().then(|| longest_path(n, &arcs)),
        cycle,
    };
    if claims.acyclic && !cert.acyclic {
        failures.push(format!(
            "directed cycle {:?}",
            cert.cycle.as_deref().unwrap_or(&[])
        ));
    }
    if claims.complete && !cert.complete {
        failures.push(format!("{} edges unoriented", sigma.graph().m() - arcs.len()));
    }
    let mut bound = |name: &str, got: Option<usize>, claim: Option<usize>| {
        if let (Some(limit), Some(x)) = (claim, got) {
            if x > limit {
                failures.push(format!("{name} {x} exceeds claimed {limit}"));
            }
        }
    };
    bound("out-degree", Some(cert.out_degree), claims.out_degree);
    bound("deficit", Some(cert.deficit), claims.deficit);
    bound("length", cert.length, claims.length);
    if claims.length.is_some() && cert.length.is_none() {
        failures.push("length undefined on a cyclic orientation".to_owned());
    }
    CertificateReport {
        legal: true,
        orientation: Some(cert),
        failures,
        ..CertificateReport::default()
    }
}

/// Per-class vertex counts, for reports.
pub fn class_sizes(c: &Coloring) -> BTreeMap<u32, usize> {
    c.classes().into_iter().map(|(k, v)| (k, v.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arbdefective::arbdefective_coloring;
    use crate::graph::{generate_graph, GraphKind, GraphSpec};
    use crate::orientation::{partial_orientation, Direction};
    use crate::vertex_map::VertexMap;

    fn spec(kind: GraphKind, n: usize, seed: u64) -> Graph {
        generate_graph(&GraphSpec::new(kind, n, seed)).unwrap().graph
    }

    #[test]
    fn alternating_path() {
        let g = spec(GraphKind::Path, 4, 0);
        let c = Coloring::new(VertexMap::from_vec(vec![1, 2, 1, 2]), 2).unwrap();
        let r = check_coloring(&g, &c, &[Claim::Legal, Claim::Defect(0)]).unwrap();
        assert!(r.legal && r.passed());
        assert_eq!(r.defect, 0);
    }

    #[test]
    fn constant_triangle() {
        let g = spec(GraphKind::Clique, 3, 0);
        let r = check_coloring(&g, &Coloring::constant(3), &[Claim::Legal, Claim::Defect(1)]).unwrap();
        assert!(!r.legal);
        assert_eq!(r.defect, 2);
        assert_eq!(r.failures.len(), 2);
    }

    #[test]
    fn missing_witness_is_an_error() {
        let g = spec(GraphKind::Path, 3, 0);
        let claim = Claim::Arbdefect {
            bound: 1,
            witness: None,
        };
        assert!(matches!(
            check_coloring(&g, &Coloring::constant(3), &[claim]),
            Err(Error::IncompleteCertificate(_))
        ));
    }

    #[test]
    fn cycle_witness() {
        let g = spec(GraphKind::Cycle, 3, 0);
        let sigma = PartialOrientation::new(
            &g,
            vec![Direction::Forward, Direction::Backward, Direction::Forward],
        )
        .unwrap();
        let claims = OrientationClaims {
            acyclic: true,
            ..Default::default()
        };
        let r = validate_orientation(&g, &sigma, &claims);
        assert!(!r.passed());
        let cyc = r.orientation.unwrap().cycle.unwrap();
        assert_eq!(cyc.len(), 3);
        for i in 0..3 {
            let (u, v) = (cyc[i], cyc[(i + 1) % 3]);
            assert!(sigma.arcs().any(|a| a == (u, v)));
        }
    }

    #[test]
    fn empty_orientation() {
        let g = spec(GraphKind::ForestUnion { a: 2 }, 50, 1);
        let r = validate_orientation(
            &g,
            &PartialOrientation::unoriented(&g),
            &OrientationClaims::default(),
        );
        let cert = r.orientation.unwrap();
        assert_eq!(cert.deficit, g.max_degree());
        assert_eq!(cert.length, Some(0));
    }

    #[test]
    fn partial_orientation_certificate() {
        let g = spec(GraphKind::ForestUnion { a: 6 }, 1000, 2);
        let run = partial_orientation(&g, 6, 2, 1.0).unwrap();
        let claims = OrientationClaims {
            acyclic: true,
            complete: false,
            out_degree: Some(18),
            deficit: Some(3),
            length: None,
        };
        let r = validate_orientation(&g, &run.orientation, &claims);
        assert!(r.passed(), "{:?}", r.failures);
        let cert = r.orientation.unwrap();
        let m = run.orientation.metrics().unwrap();
        assert_eq!(
            (cert.out_degree, cert.deficit, cert.length),
            (m.out_degree, m.deficit, Some(m.length))
        );
    }

    #[test]
    fn arbdefective_certificate() {
        let g = spec(GraphKind::ForestUnion { a: 9 }, 1000, 3);
        let (r, _) = arbdefective_coloring(&g, 9, 3, 3, 1.0).unwrap();
        let claim = Claim::Arbdefect {
            bound: r.bound,
            witness: Some(&r.witness),
        };
        let rep = check_coloring(&g, &r.coloring, &[claim]).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep
            .classes
            .iter()
            .all(|c| c.witness_valid && c.degeneracy <= r.bound));
    }

    #[test]
    fn tampered_witness_fails() {
        let g = spec(GraphKind::Clique, 4, 0);
        let c = Coloring::constant(4);
        let w = PartialOrientation::from_fn(&g, |_, _| Direction::Forward);
        let rep = check_coloring(
            &g,
            &c,
            &[Claim::Arbdefect {
                bound: 2,
                witness: Some(&w),
            }],
        )
        .unwrap();
        assert!(!rep.passed());
        let rep = check_coloring(
            &g,
            &c,
            &[Claim::Arbdefect {
                bound: 3,
                witness: Some(&w),
            }],
        )
        .unwrap();
        assert!(rep.passed());
        assert_eq!(rep.classes[0].exact_arboricity, Some(2));
    }
}
