#![allow(dead_code)]

use arbcolor::graph::{generate_graph, GeneratedGraph};
use arbcolor::{Graph, GraphKind, GraphSpec};

pub const EPSILON: f64 = 1.0;

pub struct Case {
    pub spec: GraphSpec,
    pub generated: GeneratedGraph,
    /// Arboricity bound handed to the algorithms.
    pub a: usize,
}

impl Case {
    pub fn graph(&self) -> &Graph {
        &self.generated.graph
    }

    pub fn label(&self) -> String {
        self.spec.label()
    }
}

pub fn case(kind: GraphKind, n: usize, seed: u64) -> Case {
    let spec = GraphSpec::new(kind, n, seed);
    let generated = generate_graph(&spec).expect("corpus spec is valid");
    Case {
        a: spec.arboricity_bound(),
        spec,
        generated,
    }
}

/// Thirty graphs: trees, paths, cycles, cliques, grids, regular graphs and
/// forest unions with a in {1, 2, 4, 8, 16}, up to 4096 vertices.
pub fn corpus() -> Vec<Case> {
    use GraphKind::*;
    let specs: Vec<(GraphKind, usize, u64)> = vec![
        (Tree, 10, 1),
        (Tree, 100, 2),
        (Tree, 1000, 3),
        (Tree, 4096, 4),
        (Path, 4, 0),
        (Path, 12, 0),
        (Path, 2048, 0),
        (Cycle, 5, 0),
        (Cycle, 11, 0),
        (Clique, 4, 0),
        (Clique, 8, 0),
        (Clique, 12, 0),
        (Clique, 20, 0),
        (Grid, 9, 0),
        (Grid, 100, 0),
        (Grid, 1024, 0),
        (ForestUnion { a: 1 }, 12, 5),
        (ForestUnion { a: 1 }, 500, 6),
        (ForestUnion { a: 2 }, 10, 7),
        (ForestUnion { a: 2 }, 1000, 8),
        (ForestUnion { a: 2 }, 4096, 9),
        (ForestUnion { a: 4 }, 12, 10),
        (ForestUnion { a: 4 }, 1000, 11),
        (ForestUnion { a: 4 }, 4096, 12),
        (ForestUnion { a: 8 }, 1000, 13),
        (ForestUnion { a: 8 }, 4096, 14),
        (ForestUnion { a: 16 }, 2000, 15),
        (ForestUnion { a: 16 }, 4096, 16),
        (RandomBoundedDegree { d: 4 }, 12, 17),
        (RandomBoundedDegree { d: 6 }, 1000, 18),
    ];
    specs.into_iter().map(|(k, n, s)| case(k, n, s)).collect()
}

pub fn small_corpus() -> Vec<Case> {
    corpus().into_iter().filter(|c| c.graph().n() <= 12).collect()
}
