//! Simple undirected graphs on at most 62 vertices.
//!
//! Vertices are `0..n-1`. Adjacency is stored as one `u64` bitset per
//! vertex, which keeps neighbour iteration sorted and membership tests
//! O(1). Edges are canonically oriented with `u < v` and ordered
//! lexicographically; every colouring and serialization in this crate
//! relies on that order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub const MAX_VERTICES: usize = 62;

/// An undirected edge with canonical orientation `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Builds the canonical edge for an unordered vertex pair.
    ///
    /// Panics on a loop; the crate never constructs loops.
    pub fn new(a: usize, b: usize) -> Edge {
        assert!(a != b, "loops are not edges");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    /// The image of this edge under a vertex mapping.
    pub fn map(&self, images: &[usize]) -> Edge {
        Edge::new(images[self.u], images[self.v])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

/// Immutable simple undirected graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    /// Graph on `n` vertices with the given edges. Duplicate pairs are
    /// rejected, as are loops and out-of-range endpoints. `n = 0` is
    /// the empty graph (it arises as an induced subgraph on ∅).
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::BadOrder(n));
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { vertex: a.max(b), n });
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            if adj[a] >> b & 1 == 1 {
                return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Graph { n, adj })
    }

    /// Single vertex, no edges.
    pub fn trivial() -> Graph {
        Graph { n: 1, adj: vec![0] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n && b < self.n && self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.count_ones() as usize).sum::<usize>() / 2
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.adj[v])
    }

    pub fn neighbour_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    /// All edges in canonical lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in BitIter(self.adj[u] & !((1u64 << (u + 1)) - 1)) {
                out.push(Edge { u, v });
            }
        }
        out
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Relabels the graph through `images` (a bijection on `0..n`).
    pub fn permuted(&self, images: &[usize]) -> Graph {
        debug_assert_eq!(images.len(), self.n);
        let mut adj = vec![0u64; self.n];
        for u in 0..self.n {
            for v in self.neighbours(u) {
                adj[images[u]] |= 1 << images[v];
            }
        }
        Graph { n: self.n, adj }
    }

    /// True iff a BFS from vertex 0 reaches every vertex.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            for v in BitIter(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == self.full_mask()
    }

    /// `Some(d)` iff every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return Some(0);
        }
        let d = self.degree(0);
        if (1..self.n).all(|v| self.degree(v) == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Shortest-path distances from `root`. Errors if some vertex is
    /// unreachable.
    pub fn bfs_distances(&self, root: usize) -> Result<Vec<usize>, GraphError> {
        let mut dist = vec![usize::MAX; self.n];
        dist[root] = 0;
        let mut seen = 1u64 << root;
        let mut frontier = seen;
        let mut d = 0;
        while frontier != 0 {
            d += 1;
            let mut next = 0u64;
            for v in BitIter(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
            for v in BitIter(frontier) {
                dist[v] = d;
            }
        }
        if seen != self.full_mask() {
            return Err(GraphError::Disconnected);
        }
        Ok(dist)
    }

    /// Subgraph induced by `vs`, with vertices renumbered to
    /// `0..vs.len()` preserving ascending order. The returned mapping
    /// lists the old index of each new vertex.
    pub fn induced_subgraph(&self, vs: &[usize]) -> (Graph, Vec<usize>) {
        let mut old_of_new: Vec<usize> = vs.to_vec();
        old_of_new.sort_unstable();
        old_of_new.dedup();
        let k = old_of_new.len();
        let mut new_of_old = vec![usize::MAX; self.n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut adj = vec![0u64; k];
        for (new_u, &old_u) in old_of_new.iter().enumerate() {
            for old_v in self.neighbours(old_u) {
                let new_v = new_of_old[old_v];
                if new_v != usize::MAX {
                    adj[new_u] |= 1 << new_v;
                }
            }
        }
        (Graph { n: k, adj }, old_of_new)
    }

    /// Connected components as sorted vertex lists, ordered by minimum
    /// vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u64;
                for v in BitIter(frontier) {
                    next |= self.adj[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(BitIter(comp).collect());
        }
        out
    }

    /// Lexicographically least Hamiltonian path, or `None`.
    ///
    /// Backtracking over start vertex then successive neighbour
    /// choices in ascending order; the first completed path is the
    /// least one. Exhaustive, so only intended for small graphs.
    pub fn hamiltonian_path(&self) -> Option<Vec<usize>> {
        if self.n <= 1 {
            return Some((0..self.n).collect());
        }
        let mut path = Vec::with_capacity(self.n);
        for start in 0..self.n {
            path.clear();
            path.push(start);
            if self.extend_ham_path(&mut path, 1u64 << start) {
                return Some(path);
            }
        }
        None
    }

    fn extend_ham_path(&self, path: &mut Vec<usize>, used: u64) -> bool {
        if path.len() == self.n {
            return true;
        }
        let last = *path.last().unwrap();
        for v in BitIter(self.adj[last] & !used) {
            path.push(v);
            if self.extend_ham_path(path, used | 1 << v) {
                return true;
            }
            path.pop();
        }
        false
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Complement within the complete graph on the same vertices.
    pub fn complement(&self) -> Graph {
        let full = self.full_mask();
        let adj = (0..self.n)
            .map(|v| full & !self.adj[v] & !(1u64 << v))
            .collect();
        Graph { n: self.n, adj }
    }
}

/// Iterates the set bits of a word in ascending order.
#[derive(Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}
