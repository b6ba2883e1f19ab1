//! Ground-truth graph parameters: degeneracy for any size, exact arboricity and
//! chromatic number for tiny graphs.

use serde::{Deserialize, Serialize};

use super::{Graph, VertexId};
use crate::error::{Error, Result};

/// Largest vertex count accepted by the exhaustive oracles.
pub const EXACT_ORACLE_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    /// 0 for edgeless graphs.
    pub arboricity: usize,
    pub degeneracy: usize,
    pub chromatic_number: usize,
}

pub fn small_graph_oracles(g: &Graph) -> Result<OracleReport> {
    Ok(OracleReport {
        arboricity: exact_arboricity(g)?,
        degeneracy: degeneracy(g),
        chromatic_number: chromatic_number(g)?,
    })
}

/// Minimum-degree peeling order and the resulting degeneracy.
pub fn degeneracy_ordering(g: &Graph) -> (Vec<VertexId>, usize) {
    let n = g.n();
    let mut deg: Vec<usize> = std::iter::once(0)
        .chain(g.vertices().map(|v| g.degree(v)))
        .collect();
    let max_deg = g.max_degree();
    let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); max_deg + 1];
    for v in g.vertices() {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    let mut result = 0;
    let mut low = 0;
    while order.len() < n {
        // Buckets hold stale entries; skip them lazily.
        let v = loop {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().unwrap();
            if !removed[v] && deg[v] == low {
                break v;
            }
        };
        result = result.max(deg[v]);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
                low = low.min(deg[w]);
            }
        }
    }
    (order, result)
}

/// Largest minimum degree over all subgraphs.
pub fn degeneracy(g: &Graph) -> usize {
    degeneracy_ordering(g).1
}

fn adjacency_masks(g: &Graph) -> Result<Vec<u32>> {
    if g.n() > EXACT_ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            n: g.n(),
            limit: EXACT_ORACLE_LIMIT,
        });
    }
    let mut masks = vec![0u32; g.n()];
    for &(u, v) in g.edges() {
        masks[u - 1] |= 1 << (v - 1);
        masks[v - 1] |= 1 << (u - 1);
    }
    Ok(masks)
}

fn is_connected(mask: u32, adj: &[u32]) -> bool {
    let start = mask.trailing_zeros();
    let mut seen = 1u32 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v] & mask;
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == mask
}

/// Nash-Williams arboricity `max ⌈|E(H)| / (|V(H)| - 1)⌉`, maximised over
/// connected induced subgraphs with at least two vertices.
pub fn exact_arboricity(g: &Graph) -> Result<usize> {
    let adj = adjacency_masks(g)?;
    let n = g.n();
    let mut best = 0;
    for mask in 1u32..(1u32 << n) {
        let k = mask.count_ones() as usize;
        if k < 2 || !is_connected(mask, &adj) {
            continue;
        }
        let doubled: u32 = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| (adj[v] & mask).count_ones())
            .sum();
        let edges = doubled as usize / 2;
        best = best.max(edges.div_ceil(k - 1));
    }
    Ok(best)
}

/// Exact chromatic number by backtracking.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    let adj = adjacency_masks(g)?;
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    // Largest-degree-first order tightens the search.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count_ones()));

    fn colorable(i: usize, k: usize, order: &[usize], adj: &[u32], colors: &mut [usize]) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        let used = colors.iter().copied().max().unwrap_or(0);
        // Symmetry: a fresh color is only ever the next unused one.
        for c in 1..=k.min(used + 1) {
            let clash = (0..adj.len()).any(|w| adj[v] >> w & 1 == 1 && colors[w] == c);
            if !clash {
                colors[v] = c;
                if colorable(i + 1, k, order, adj, colors) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }

    for k in 1..=n {
        let mut colors = vec![0usize; n];
        if colorable(0, k, &order, &adj, &mut colors) {
            return Ok(k);
        }
    }
    unreachable!("every graph is n-colorable")
}
