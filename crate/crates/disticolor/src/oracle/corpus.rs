//! Enumeration of connected regular graphs up to isomorphism.
//!
//! Graphs are generated vertex by vertex: adding vertex `i` chooses its
//! back-neighbourhood in `0..i`. One labelled representative per
//! isomorphism class is kept — the one whose column-major upper
//! triangle bitstring is lexicographically maximal — and the search is
//! pruned so that only candidates compatible with that representative
//! survive:
//! - degree feasibility: every vertex can still reach degree d using
//!   one edge per future vertex;
//! - tied consecutive vertices (equal adjacency outside the pair) must
//!   not diverge with the later vertex picking up the edge first,
//!   since swapping them would produce a larger string.
//!
//! Each completed graph still passes through the full canonicity
//! check, so the prunes only ever reduce work.

use crate::graph::{BitIter, Graph};

/// All connected regular graphs on 1..=max_n vertices, one per
/// isomorphism class, in deterministic order (by vertex count, then
/// degree, then generation order).
///
/// Intended for desk-scale census work; practical up to about
/// `max_n = 10`.
pub fn regular_corpus(max_n: usize) -> Vec<Graph> {
    assert!((3..=12).contains(&max_n), "corpus supports 3 <= max_n <= 12");
    let mut out = vec![Graph::trivial()];
    for n in 2..=max_n {
        for d in 1..n {
            if !(n * d).is_multiple_of(2) {
                continue;
            }
            out.extend(connected_regular_classes(n, d));
        }
    }
    out
}

/// Connected d-regular graphs on n labelled-canonical vertices, one
/// per isomorphism class.
pub fn connected_regular_classes(n: usize, d: usize) -> Vec<Graph> {
    let mut gen = Generator {
        n,
        degree_target: Some(d),
        max_edges: n * d / 2,
        require_connected: true,
        prune_ties: true,
        out: Vec::new(),
    };
    gen.run();
    gen.out
}

/// Cross-check path: same leaf acceptance, but no symmetry pruning, so
/// every labelled graph with the right degrees is visited.
pub fn connected_regular_classes_unpruned(n: usize, d: usize) -> Vec<Graph> {
    let mut gen = Generator {
        n,
        degree_target: Some(d),
        max_edges: n * d / 2,
        require_connected: true,
        prune_ties: false,
        out: Vec::new(),
    };
    gen.run();
    gen.out
}

/// All connected graphs on `n` vertices with at most `max_edges`
/// edges, one per isomorphism class.
pub fn connected_classes_with_max_edges(n: usize, max_edges: usize) -> Vec<Graph> {
    let mut gen = Generator {
        n,
        degree_target: None,
        max_edges,
        require_connected: true,
        prune_ties: true,
        out: Vec::new(),
    };
    gen.run();
    gen.out
}

struct Generator {
    n: usize,
    degree_target: Option<usize>,
    max_edges: usize,
    require_connected: bool,
    prune_ties: bool,
    out: Vec<Graph>,
}

impl Generator {
    fn run(&mut self) {
        if self.n == 0 {
            return;
        }
        if let Some(d) = self.degree_target {
            if d >= self.n || !(self.n * d).is_multiple_of(2) {
                return;
            }
        }
        let mut adj = vec![0u64; self.n];
        self.place_vertex(1, &mut adj, 0);
    }

    fn place_vertex(&mut self, i: usize, adj: &mut [u64], edges_so_far: usize) {
        let n = self.n;
        if i == n {
            self.finish(adj);
            return;
        }
        // Candidate back-neighbour sets for vertex i.
        let (lo, hi) = match self.degree_target {
            Some(d) => {
                // Vertex i ends with exactly d edges; the future can
                // supply at most n - 1 - i of them.
                let future = n - 1 - i;
                (d.saturating_sub(future), d.min(i))
            }
            None => (0, i),
        };
        let candidates: Vec<usize> = (0..i)
            .filter(|&v| match self.degree_target {
                Some(d) => (adj[v].count_ones() as usize) < d,
                None => true,
            })
            .collect();
        let mut subset = Vec::new();
        self.choose_subset(i, &candidates, 0, lo, hi, &mut subset, adj, edges_so_far);
    }

    #[allow(clippy::too_many_arguments)]
    fn choose_subset(
        &mut self,
        i: usize,
        candidates: &[usize],
        from: usize,
        lo: usize,
        hi: usize,
        subset: &mut Vec<usize>,
        adj: &mut [u64],
        edges_so_far: usize,
    ) {
        if subset.len() >= lo {
            self.try_column(i, subset, adj, edges_so_far);
        }
        if subset.len() == hi {
            return;
        }
        for idx in from..candidates.len() {
            subset.push(candidates[idx]);
            self.choose_subset(i, candidates, idx + 1, lo, hi, subset, adj, edges_so_far);
            subset.pop();
        }
    }

    fn try_column(&mut self, i: usize, subset: &[usize], adj: &mut [u64], edges_so_far: usize) {
        let n = self.n;
        let edges = edges_so_far + subset.len();
        if edges > self.max_edges {
            return;
        }
        let mut col = 0u64;
        for &v in subset {
            col |= 1 << v;
        }
        if self.prune_ties {
            // For each tied consecutive pair (a, a+1) the larger-string
            // representative has the earlier vertex pick up a diverging
            // edge first. Cheap special case of the weak-canonicity
            // prune below; checked first because it is almost free.
            for a in 0..i.saturating_sub(1) {
                let pair_mask = !(1u64 << a) & !(1u64 << (a + 1));
                let seen = (1u64 << i) - 1;
                let tied = (adj[a] & pair_mask & seen) == (adj[a + 1] & pair_mask & seen);
                if tied && col >> (a + 1) & 1 == 1 && col >> a & 1 == 0 {
                    return;
                }
            }
        }
        // Degree-completion feasibility for every placed vertex.
        if let Some(d) = self.degree_target {
            let future = n - 1 - i;
            for (v, row) in adj.iter().enumerate().take(i + 1) {
                let deg = if v == i {
                    subset.len()
                } else {
                    (row.count_ones() as usize) + ((col >> v & 1) as usize)
                };
                if deg > d || d - deg > future {
                    return;
                }
            }
        }
        for &v in subset {
            adj[v] |= 1 << i;
            adj[i] |= 1 << v;
        }
        // Weak canonicity: the canonical representative's prefixes are
        // lexicographically maximal among relabelings of the placed
        // vertices, so anything that is not can be cut wholesale.
        if !self.prune_ties || !partial_beats(adj, i + 1) {
            self.place_vertex(i + 1, adj, edges);
        }
        for &v in subset {
            adj[v] &= !(1u64 << i);
            adj[i] &= !(1u64 << v);
        }
    }

    fn finish(&mut self, adj: &[u64]) {
        let edges: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|u| BitIter(adj[u] & !((1u64 << (u + 1)) - 1)).map(move |v| (u, v)))
            .collect();
        let g = Graph::new(self.n, &edges).expect("generator builds simple graphs");
        if let Some(d) = self.degree_target {
            if g.regular_degree() != Some(d) {
                return;
            }
        }
        if self.require_connected && !g.is_connected() {
            return;
        }
        if is_canonical_labelling(&g) {
            self.out.push(g);
        }
    }
}

/// True iff the column-major upper-triangle bitstring of `g` is
/// lexicographically maximal over all vertex relabelings — i.e. `g`
/// is the chosen representative of its isomorphism class.
///
/// Branch and bound over partial relabelings: placing a vertex at
/// position `i` appends exactly column `i` to the candidate string, so
/// candidates are compared against the current string column by
/// column, abandoning any branch that falls strictly below and
/// accepting defeat on the first branch that rises strictly above.
pub fn is_canonical_labelling(g: &Graph) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    let mut placed = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for first in 0..n {
        placed.push(first);
        used[first] = true;
        if beats_original(g, &mut placed, &mut used) {
            return false;
        }
        used[first] = false;
        placed.pop();
    }
    true
}

/// True iff relabeling the first `k` placed vertices can produce a
/// lexicographically larger partial string. Mask-based twin of
/// [`is_canonical_labelling`] for the generator's hot path.
fn partial_beats(adj: &[u64], k: usize) -> bool {
    if k <= 1 {
        return false;
    }
    let mut placed: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; k];
    for first in 0..k {
        placed.push(first);
        used[first] = true;
        if partial_beats_extend(adj, k, &mut placed, &mut used) {
            return true;
        }
        used[first] = false;
        placed.pop();
    }
    false
}

fn partial_beats_extend(adj: &[u64], k: usize, placed: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = placed.len();
    if i == k {
        return false;
    }
    for cand in 0..k {
        if used[cand] {
            continue;
        }
        let mut verdict = std::cmp::Ordering::Equal;
        for (j, &old) in placed.iter().enumerate() {
            let candidate_bit = adj[old] >> cand & 1 == 1;
            let original_bit = adj[j] >> i & 1 == 1;
            if candidate_bit != original_bit {
                verdict = if candidate_bit {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Less
                };
                break;
            }
        }
        match verdict {
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Less => continue,
            std::cmp::Ordering::Equal => {
                placed.push(cand);
                used[cand] = true;
                let beaten = partial_beats_extend(adj, k, placed, used);
                used[cand] = false;
                placed.pop();
                if beaten {
                    return true;
                }
            }
        }
    }
    false
}

/// Extends the partial relabeling; true iff some completion produces
/// a strictly larger string. The partial string so far is equal to the
/// original over all completed columns.
fn beats_original(g: &Graph, placed: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let n = g.n();
    let i = placed.len();
    if i == n {
        return false;
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        // Column i of the candidate string vs column i of the original.
        let mut verdict = std::cmp::Ordering::Equal;
        for (j, &old) in placed.iter().enumerate() {
            let candidate_bit = g.has_edge(old, cand);
            let original_bit = g.has_edge(j, i);
            if candidate_bit != original_bit {
                verdict = if candidate_bit {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Less
                };
                break;
            }
        }
        match verdict {
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Less => continue,
            std::cmp::Ordering::Equal => {
                placed.push(cand);
                used[cand] = true;
                let beaten = beats_original(g, placed, used);
                used[cand] = false;
                placed.pop();
                if beaten {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete, complete_bipartite, cycle, petersen, prism};

    #[test]
    fn canonicity_picks_one_representative() {
        // All 4-cycles on 4 labelled vertices are isomorphic; exactly
        // one labelling may be canonical.
        let cycles = [
            Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap(),
            Graph::new(4, &[(0, 2), (2, 1), (1, 3), (0, 3)]).unwrap(),
            Graph::new(4, &[(0, 1), (1, 3), (3, 2), (0, 2)]).unwrap(),
        ];
        let canonical: Vec<bool> = cycles.iter().map(is_canonical_labelling).collect();
        assert_eq!(canonical.iter().filter(|&&b| b).count(), 1);
    }

    #[test]
    fn canonicity_is_permutation_invariant_for_symmetric_graphs() {
        // Complete graphs and their labellings: every labelling is the
        // same graph, hence canonical.
        assert!(is_canonical_labelling(&complete(5)));
        assert!(is_canonical_labelling(&Graph::trivial()));
    }

    #[test]
    fn small_regular_class_counts() {
        // (n, d) -> classes of connected d-regular graphs on n vertices.
        let expected: &[(usize, usize, usize)] = &[
            (3, 2, 1),
            (4, 2, 1),
            (4, 3, 1),
            (5, 2, 1),
            (5, 4, 1),
            (6, 2, 1),
            (6, 3, 2),
            (6, 4, 1),
            (6, 5, 1),
            (7, 2, 1),
            (7, 4, 2),
            (7, 6, 1),
            (8, 2, 1),
            (8, 3, 5),
            (8, 4, 6),
            (8, 5, 3),
            (8, 6, 1),
            (8, 7, 1),
        ];
        for &(n, d, want) in expected {
            let got = connected_regular_classes(n, d).len();
            assert_eq!(got, want, "classes for n={n} d={d}");
        }
    }

    #[test]
    fn general_enumeration_matches_known_connected_counts() {
        // Connected graphs up to isomorphism: 1, 2, 6, 21, 112.
        for (n, want) in [(2, 1), (3, 2), (4, 6), (5, 21), (6, 112)] {
            let max_edges = n * (n - 1) / 2;
            let got = connected_classes_with_max_edges(n, max_edges).len();
            assert_eq!(got, want, "connected graphs on {n} vertices");
        }
    }

    #[test]
    fn pruned_and_unpruned_generation_agree() {
        for n in 3usize..=7 {
            for d in 1..n {
                if !(n * d).is_multiple_of(2) {
                    continue;
                }
                let pruned = connected_regular_classes(n, d);
                let unpruned = connected_regular_classes_unpruned(n, d);
                assert_eq!(pruned, unpruned, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn corpus_contains_the_named_small_graphs() {
        let corpus = regular_corpus(5);
        let find = |g: &Graph| corpus.iter().any(|h| classes_equal(g, h));
        assert!(find(&complete(3)));
        assert!(find(&cycle(4)));
        assert!(find(&complete(4)));
        assert!(find(&cycle(5)));
        assert!(find(&complete(5)));
        // n = 3..=5 hold exactly 5 connected regular graphs, plus K1, K2.
        assert_eq!(corpus.len(), 2 + 5);
    }

    #[test]
    fn corpus_members_are_connected_regular_and_distinct() {
        let corpus = regular_corpus(6);
        for g in &corpus {
            assert!(g.is_connected());
            assert!(g.regular_degree().is_some());
            assert!(is_canonical_labelling(g));
        }
        for (i, g) in corpus.iter().enumerate() {
            for h in &corpus[i + 1..] {
                assert!(!classes_equal(g, h), "{g:?} ~ {h:?}");
            }
        }
        // Cubic graphs on 6 vertices: exactly K3,3 and the prism.
        assert!(corpus.iter().any(|g| classes_equal(g, &complete_bipartite(3))));
        assert!(corpus.iter().any(|g| classes_equal(g, &prism(3))));
    }

    #[test]
    fn petersen_is_one_of_nineteen_cubic_graphs_on_ten_vertices() {
        let classes = connected_regular_classes(10, 3);
        assert_eq!(classes.len(), 19);
        assert!(classes.iter().any(|g| classes_equal(g, &petersen())));
    }

    /// Isomorphism via the canonical form: relabel both to canonical
    /// and compare. Only used on small graphs in tests.
    fn classes_equal(a: &Graph, b: &Graph) -> bool {
        if a.n() != b.n() || a.edge_count() != b.edge_count() {
            return false;
        }
        canonical_string(a) == canonical_string(b)
    }

    fn canonical_string(g: &Graph) -> Vec<bool> {
        let n = g.n();
        let mut best: Option<Vec<bool>> = None;
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut bits = Vec::with_capacity(n * (n - 1) / 2);
            for j in 1..n {
                for i in 0..j {
                    bits.push(g.has_edge(perm[i], perm[j]));
                }
            }
            if best.as_ref().is_none_or(|b| bits > *b) {
                best = Some(bits);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap()
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let n = p.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }
}
