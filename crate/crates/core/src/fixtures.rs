//! Small named φ⁴ graphs used in examples, tests and the CLI.

use crate::graph::{AssignedGraph, FeynmanGraph, Scale, ScaleAssignment, VertexKind};

fn build(vertices: usize, edges: Vec<[usize; 2]>, legs: Vec<usize>, scales: Vec<Scale>) -> AssignedGraph {
    let rho = scales.iter().copied().max().unwrap_or(0);
    FeynmanGraph::phi4(vertices, edges, legs)
        .expect("fixture is well formed")
        .assign(&ScaleAssignment::new(scales, rho).expect("fixture scales"))
        .expect("fixture is 1PI")
}

/// One-loop four-point graph: two vertices joined by two propagators.
pub fn bubble(s1: Scale, s2: Scale) -> AssignedGraph {
    build(2, vec![[0, 1], [0, 1]], vec![0, 0, 1, 1], vec![s1, s2])
}

/// Two-loop two-point graph: two vertices joined by three propagators.
pub fn sunset(s1: Scale, s2: Scale, s3: Scale) -> AssignedGraph {
    build(2, vec![[0, 1], [0, 1], [0, 1]], vec![0, 1], vec![s1, s2, s3])
}

/// Two bubbles in a row, all scales 0.
pub fn chain() -> AssignedGraph {
    chain_with_scales([0; 4])
}

/// Two bubbles in a row (`0=1=2`). Edges 0,1 form the left bubble.
pub fn chain_with_scales(s: [Scale; 4]) -> AssignedGraph {
    build(3, vec![[0, 1], [0, 1], [1, 2], [1, 2]], vec![0, 0, 2, 2], s.to_vec())
}

/// The other two-loop four-point graph: a bubble on `0,1` closed through a
/// third vertex carrying two legs. All scales 0.
pub fn eye() -> AssignedGraph {
    eye_with_scales([0; 4])
}

/// Edges 0,1 are the bubble, edges 2,3 join it to vertex 2.
pub fn eye_with_scales(s: [Scale; 4]) -> AssignedGraph {
    build(3, vec![[0, 1], [0, 1], [0, 2], [1, 2]], vec![0, 1, 2, 2], s.to_vec())
}

/// One vertex with a self-loop and two legs.
pub fn tadpole(s: Scale) -> AssignedGraph {
    build(1, vec![[0, 0]], vec![0, 0], vec![s])
}

/// Bubble with a biped vertex sitting on one of its lines.
pub fn bubble_with_biped(s: [Scale; 3]) -> AssignedGraph {
    let g = FeynmanGraph::new(
        4,
        vec![VertexKind::Interaction, VertexKind::Interaction, VertexKind::Biped],
        vec![[0, 1], [0, 2], [2, 1]],
        vec![0, 0, 1, 1],
    )
    .expect("fixture is well formed");
    let rho = s.iter().copied().max().unwrap_or(0);
    g.assign(&ScaleAssignment::new(s.to_vec(), rho).expect("fixture scales")).expect("fixture is 1PI")
}

/// Three-loop four-point chain of three bubbles.
pub fn triple_chain(s: [Scale; 6]) -> AssignedGraph {
    build(
        4,
        vec![[0, 1], [0, 1], [1, 2], [1, 2], [2, 3], [2, 3]],
        vec![0, 0, 3, 3],
        s.to_vec(),
    )
}

/// A mixed bag for property-style unit tests.
pub fn zoo() -> Vec<AssignedGraph> {
    vec![
        AssignedGraph::bare_vertex(4, false),
        bubble(0, 0),
        bubble(1, 2),
        sunset(0, 0, 0),
        sunset(0, 1, 2),
        sunset(1, 1, 2),
        chain(),
        chain_with_scales([2, 2, 1, 1]),
        chain_with_scales([1, 2, 2, 1]),
        eye(),
        eye_with_scales([2, 2, 1, 1]),
        eye_with_scales([1, 1, 2, 2]),
        tadpole(1),
        bubble_with_biped([0, 1, 1]),
        triple_chain([0, 0, 1, 1, 2, 2]),
        bubble(1, 2).labeled(),
        eye().labeled(),
    ]
}
