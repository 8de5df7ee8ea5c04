//! Exception detection and the closed-form base-case colourings:
//! cycles, complete graphs, and complete bipartite graphs.

use crate::colouring::{Colour, EdgeColouring};
use crate::engine::EngineError;
use crate::families;
use crate::graph::{Edge, Graph};
use crate::oracle;
use crate::symmetry::{is_asymmetric, nontrivial_colour_preserver};

/// The small regular graphs with no distinguishing 2-colouring.
/// `None` for every other connected regular graph.
pub fn exception_name(g: &Graph) -> Option<&'static str> {
    let n = g.n();
    let d = g.regular_degree()?;
    if !g.is_connected() {
        return None;
    }
    match (n, d) {
        (2, 1) => Some("K2"),
        (3, 2) => Some("K3"),
        (4, 3) => Some("K4"),
        (5, 4) => Some("K5"),
        (4, 2) => Some("C4"),
        (5, 2) => Some("C5"),
        (6, 3) if is_complete_bipartite(g).is_some() => Some("K3,3"),
        _ => None,
    }
}

/// Bipartition (sorted part lists) if `g` is a complete bipartite
/// graph with equal parts, else `None`.
pub fn is_complete_bipartite(g: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    if n < 2 || !n.is_multiple_of(2) || !g.is_connected() {
        return None;
    }
    let half = n / 2;
    if g.regular_degree() != Some(half) {
        return None;
    }
    let dist = g.bfs_distances(0).ok()?;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (v, d) in dist.iter().enumerate() {
        match d % 2 {
            0 => a.push(v),
            _ => b.push(v),
        }
    }
    if a.len() != half || b.len() != half {
        return None;
    }
    let cross_complete = a
        .iter()
        .all(|&u| b.iter().all(|&v| g.has_edge(u, v)));
    let parts_independent = a.iter().all(|&u| a.iter().all(|&v| u == v || !g.has_edge(u, v)));
    (cross_complete && parts_independent).then_some((a, b))
}

/// Distinguishing colouring of the canonical cycle C_n for n >= 6:
/// with edges e_i = (i, i+1 mod n), the blue set is {e0, e2, e3}.
///
/// The blue runs have lengths 1 and 2 and the red gaps lengths 1 and
/// n-4, all four pairwise distinct for n >= 6, so no rotation or
/// reflection survives.
pub fn cycle_colouring(n: usize) -> Result<EdgeColouring, EngineError> {
    if n < 6 {
        return Err(EngineError::Unsupported(format!(
            "no distinguishing 2-colouring of a cycle below C6 (got C{n})"
        )));
    }
    let g = families::cycle(n);
    let mut c = EdgeColouring::uniform(&g, Colour::Red);
    for i in [0usize, 2, 3] {
        c = c.with_recoloured(Edge::new(i, (i + 1) % n), Colour::Blue);
    }
    Ok(c)
}

/// The cycle pattern transported onto an arbitrary labelled cycle.
pub fn cycle_colouring_on(g: &Graph) -> Result<EdgeColouring, EngineError> {
    let n = g.n();
    if g.regular_degree() != Some(2) || !g.is_connected() {
        return Err(EngineError::Unsupported("not a connected cycle".into()));
    }
    if n < 6 {
        return Err(EngineError::Unsupported(format!(
            "no distinguishing 2-colouring of a cycle below C6 (got C{n})"
        )));
    }
    // Walk the cycle from vertex 0 towards its smaller neighbour.
    let mut order = vec![0usize];
    let mut prev = 0usize;
    let mut cur = g.neighbours(0).next().expect("2-regular");
    while cur != 0 {
        order.push(cur);
        let next = g
            .neighbours(cur)
            .find(|&w| w != prev)
            .expect("2-regular vertices have two neighbours");
        prev = cur;
        cur = next;
    }
    let mut c = EdgeColouring::uniform(g, Colour::Red);
    for i in [0usize, 2, 3] {
        c = c.with_recoloured(Edge::new(order[i], order[(i + 1) % n]), Colour::Blue);
    }
    Ok(c)
}

/// Red spanning subgraph used for complete graphs: the path
/// 0-1-...-(n-1) plus the chord (1, 3). Asymmetric for n >= 6.
fn path_plus_chord(n: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((1, 3));
    Graph::new(n, &edges).expect("path plus chord is simple for n >= 5")
}

/// Distinguishing colouring of K_n, n >= 6: colour an asymmetric
/// spanning subgraph red and everything else blue. Any automorphism
/// preserving the colours is an automorphism of the red graph, hence
/// trivial.
pub fn complete_graph_colouring(n: usize) -> Result<EdgeColouring, EngineError> {
    if n < 6 {
        return Err(EngineError::Unsupported(format!(
            "no distinguishing 2-colouring of a complete graph below K6 (got K{n})"
        )));
    }
    let red = path_plus_chord(n);
    let red = if is_asymmetric(&red) {
        red
    } else {
        // The fixed pattern is asymmetric for every n >= 6; this is a
        // guarded fallback, not an expected path.
        let edges = oracle::asymmetric_spanning_search(n)
            .ok_or_else(|| EngineError::Internal("no asymmetric spanning subgraph".into()))?;
        Graph::new(n, &edges.iter().map(|e| e.endpoints()).collect::<Vec<_>>())
            .expect("search returns a simple graph")
    };
    let g = families::complete(n);
    let colours = g
        .edges()
        .iter()
        .map(|e| {
            if red.has_edge(e.u(), e.v()) {
                Colour::Red
            } else {
                Colour::Blue
            }
        })
        .collect();
    Ok(EdgeColouring::from_colours(&g, colours))
}

/// Distinguishing colouring of the canonical K_{n,n} for n >= 4.
pub fn complete_bipartite_colouring(
    n: usize,
    budget: u64,
    aut_cap: usize,
) -> Result<EdgeColouring, EngineError> {
    if n < 4 {
        return Err(EngineError::Unsupported(format!(
            "no distinguishing 2-colouring of K_{{n,n}} below K_{{4,4}} (got n={n})"
        )));
    }
    let g = families::complete_bipartite(n);
    complete_bipartite_colouring_on(&g, budget, aut_cap)
}

/// Complete-bipartite recipe on an arbitrary labelling: colour a
/// Hamiltonian path blue; should the path colouring leave a symmetry
/// (it always leaves the path reversal on K_{n,n}), fall back to the
/// exhaustive search for the lexicographically first colouring.
pub fn complete_bipartite_colouring_on(
    g: &Graph,
    budget: u64,
    aut_cap: usize,
) -> Result<EdgeColouring, EngineError> {
    let (a, b) = is_complete_bipartite(g)
        .ok_or_else(|| EngineError::Unsupported("not a complete bipartite graph".into()))?;
    if a.len() < 4 {
        return Err(EngineError::Unsupported(format!(
            "no distinguishing 2-colouring of K_{{n,n}} below K_{{4,4}} (got n={})",
            a.len()
        )));
    }
    // Alternate the sorted parts: a Hamiltonian path without search.
    let mut path = Vec::with_capacity(g.n());
    for i in 0..a.len() {
        path.push(a[i]);
        path.push(b[i]);
    }
    let mut c = EdgeColouring::uniform(g, Colour::Red);
    for w in path.windows(2) {
        c = c.with_recoloured(Edge::new(w[0], w[1]), Colour::Blue);
    }
    if nontrivial_colour_preserver(g, &c).is_none() {
        return Ok(c);
    }
    let found = oracle::find_distinguishing_colouring_capped(g, 2, budget, aut_cap)
        .map_err(EngineError::from)?
        .ok_or_else(|| {
            EngineError::Internal("complete bipartite graph with no 2-colouring above K3,3".into())
        })?;
    Ok(oracle::indices_to_two_colouring(g, &found))
}
