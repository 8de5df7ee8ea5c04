//! Brute-force ground truth.
//!
//! Everything here is exhaustive and deterministic: the pruned search
//! returns the lexicographically first distinguishing colouring (edges
//! in canonical order, colours ordered red < blue < ...), the naive
//! reference search enumerates assignments outright, and the two are
//! required to agree. The engine uses this module both as its
//! certification oracle and as its fallback constructor.

mod corpus;

pub use corpus::{
    connected_classes_with_max_edges, connected_regular_classes,
    connected_regular_classes_unpruned, is_canonical_labelling, regular_corpus,
};

use crate::colouring::{Colour, EdgeColouring};
use crate::error::SymmetryError;
use crate::graph::{Edge, Graph};
use crate::perm::PermGroup;
use crate::symmetry::{automorphisms, DEFAULT_AUT_CAP};
use thiserror::Error;

/// Default node budget for exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("distinguishing index is undefined for K2")]
    UndefinedForK2,
    #[error("no distinguishing colouring with at most {max_k} colours")]
    MaxKExceeded { max_k: usize },
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// Lexicographically first distinguishing `k`-colouring of `g`, or
/// `None` once the whole space is exhausted. Budget exhaustion is an
/// error, never a silent `None`.
///
/// Colours are indices `0..k`; index 0 is red and 1 is blue when the
/// result feeds a two-colour context.
pub fn find_distinguishing_colouring(
    g: &Graph,
    k: usize,
    budget: u64,
) -> Result<Option<Vec<u8>>, OracleError> {
    find_distinguishing_colouring_capped(g, k, budget, DEFAULT_AUT_CAP)
}

pub fn find_distinguishing_colouring_capped(
    g: &Graph,
    k: usize,
    budget: u64,
    aut_cap: usize,
) -> Result<Option<Vec<u8>>, OracleError> {
    assert!(k >= 1, "need at least one colour");
    let grp = automorphisms(g, aut_cap)?;
    let mut search = PrunedSearch::new(g, &grp, k as u8, budget);
    search.run()
}

/// Two-colour convenience wrapper around the pruned search.
pub fn find_distinguishing_two_colouring(
    g: &Graph,
    budget: u64,
    aut_cap: usize,
) -> Result<Option<EdgeColouring>, OracleError> {
    let found = find_distinguishing_colouring_capped(g, 2, budget, aut_cap)?;
    Ok(found.map(|indices| indices_to_two_colouring(g, &indices)))
}

pub fn indices_to_two_colouring(g: &Graph, indices: &[u8]) -> EdgeColouring {
    let colours = indices
        .iter()
        .map(|&i| if i == 0 { Colour::Red } else { Colour::Blue })
        .collect();
    EdgeColouring::from_colours(g, colours)
}

/// Unpruned reference search: enumerates every assignment in the same
/// lexicographic order and tests each against the full group. Exists
/// so the pruned search has an independent path to agree with.
pub fn reference_search(g: &Graph, k: usize, budget: u64) -> Result<Option<Vec<u8>>, OracleError> {
    assert!(k >= 1);
    let grp = automorphisms(g, DEFAULT_AUT_CAP)?;
    let edges = g.edges();
    let m = edges.len();
    let edge_maps = edge_permutations(&grp, &edges);
    let mut colours = vec![0u8; m];
    let mut tried: u64 = 0;
    loop {
        tried += 1;
        if tried > budget {
            return Err(OracleError::BudgetExceeded { budget });
        }
        let preserved = edge_maps.iter().any(|map| {
            (0..m).all(|j| colours[map[j] as usize] == colours[j])
        });
        if !preserved {
            return Ok(Some(colours));
        }
        // Odometer increment, last edge least significant.
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            colours[pos] += 1;
            if colours[pos] < k as u8 {
                break;
            }
            colours[pos] = 0;
        }
    }
}

/// Least `k <= max_k` admitting a distinguishing `k`-colouring.
pub fn distinguishing_index(g: &Graph, max_k: usize, budget: u64) -> Result<usize, OracleError> {
    if g.n() == 2 && g.edge_count() == 1 {
        return Err(OracleError::UndefinedForK2);
    }
    for k in 1..=max_k {
        if find_distinguishing_colouring(g, k, budget)?.is_some() {
            return Ok(k);
        }
    }
    Err(OracleError::MaxKExceeded { max_k })
}

/// Smallest asymmetric graph on `n` labelled vertices, as an edge set
/// minimizing (edge count, lexicographic order). `None` when every
/// graph on `n` vertices has a symmetry (true exactly for 2 <= n <= 5).
pub fn asymmetric_spanning_search(n: usize) -> Option<Vec<Edge>> {
    assert!(n >= 1, "need at least one vertex");
    if n == 1 {
        return Some(Vec::new());
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    for m in 0..=pairs.len() {
        let mut picked = Vec::with_capacity(m);
        if let Some(edges) = asymmetric_subset(n, &pairs, m, 0, &mut picked) {
            return Some(edges);
        }
    }
    None
}

fn asymmetric_subset(
    n: usize,
    pairs: &[(usize, usize)],
    want: usize,
    from: usize,
    picked: &mut Vec<(usize, usize)>,
) -> Option<Vec<Edge>> {
    if picked.len() == want {
        let g = Graph::new(n, picked).expect("distinct pairs");
        if crate::symmetry::is_asymmetric(&g) {
            return Some(picked.iter().map(|&(u, v)| Edge::new(u, v)).collect());
        }
        return None;
    }
    let still_needed = want - picked.len();
    for i in from..=pairs.len().saturating_sub(still_needed) {
        picked.push(pairs[i]);
        if let Some(found) = asymmetric_subset(n, pairs, want, i + 1, picked) {
            return Some(found);
        }
        picked.pop();
    }
    None
}

/// Edge-index permutation of every non-identity group element.
fn edge_permutations(grp: &PermGroup, edges: &[Edge]) -> Vec<Vec<u32>> {
    grp.elements()
        .iter()
        .filter(|p| !p.is_identity())
        .map(|p| {
            let images = p.images();
            edges
                .iter()
                .map(|e| {
                    edges
                        .binary_search(&e.map(&images))
                        .expect("automorphisms permute the edge set") as u32
                })
                .collect()
        })
        .collect()
}

/// Depth-first search over colour assignments in canonical edge order.
///
/// Each non-identity automorphism is tracked down the tree: an element
/// stays "alive" at a node while it maps every assigned edge to an
/// assigned edge of equal colour or to a still-unassigned edge. A node
/// is cut when some alive element fixes every unassigned edge — such
/// an element survives all extensions, so no leaf below can be
/// distinguishing. At a leaf the alive set is exactly the set of
/// non-trivial colour preservers.
struct PrunedSearch {
    m: usize,
    k: u8,
    budget: u64,
    nodes: u64,
    edge_maps: Vec<Vec<u32>>,
    inv_edge_maps: Vec<Vec<u32>>,
    /// Per element: least edge index s with all edges >= s fixed.
    fixed_suffix_from: Vec<u32>,
    colours: Vec<u8>,
}

impl PrunedSearch {
    fn new(g: &Graph, grp: &PermGroup, k: u8, budget: u64) -> PrunedSearch {
        let edges = g.edges();
        let m = edges.len();
        let edge_maps = edge_permutations(grp, &edges);
        let inv_edge_maps = edge_maps
            .iter()
            .map(|map| {
                let mut inv = vec![0u32; m];
                for (i, &j) in map.iter().enumerate() {
                    inv[j as usize] = i as u32;
                }
                inv
            })
            .collect();
        let fixed_suffix_from = edge_maps
            .iter()
            .map(|map| {
                let mut s = m;
                while s > 0 && map[s - 1] as usize == s - 1 {
                    s -= 1;
                }
                s as u32
            })
            .collect();
        PrunedSearch {
            m,
            k,
            budget,
            nodes: 0,
            edge_maps,
            inv_edge_maps,
            fixed_suffix_from,
            colours: vec![0; m],
        }
    }

    fn run(&mut self) -> Result<Option<Vec<u8>>, OracleError> {
        let alive: Vec<u32> = (0..self.edge_maps.len() as u32).collect();
        self.assign(0, &alive)
    }

    fn assign(&mut self, j: usize, alive: &[u32]) -> Result<Option<Vec<u8>>, OracleError> {
        if alive
            .iter()
            .any(|&t| self.fixed_suffix_from[t as usize] as usize <= j)
        {
            // Some surviving automorphism fixes every unassigned edge.
            return Ok(None);
        }
        if j == self.m {
            return Ok(if alive.is_empty() {
                Some(self.colours.clone())
            } else {
                None
            });
        }
        let mut next_alive = Vec::with_capacity(alive.len());
        for colour in 0..self.k {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(OracleError::BudgetExceeded { budget: self.budget });
            }
            self.colours[j] = colour;
            next_alive.clear();
            for &t in alive {
                let ti = t as usize;
                let image = self.edge_maps[ti][j] as usize;
                if image < j && self.colours[image] != colour {
                    continue;
                }
                let preimage = self.inv_edge_maps[ti][j] as usize;
                if preimage < j && self.colours[preimage] != colour {
                    continue;
                }
                next_alive.push(t);
            }
            if let Some(found) = self.assign(j + 1, &next_alive)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}
