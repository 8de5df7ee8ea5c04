//! The rooted orbit procedure.
//!
//! Given a connected Δ-regular graph (Δ >= 4, not complete, not
//! K_{Δ,Δ}) and a root r, produce a red/blue colouring such that
//! (i) no non-trivial automorphism fixing r preserves it,
//! (ii) the vertices with all incident edges red are r alone, or r and
//! one neighbour of r,
//! (iii) in the two-vertex case every count 1..Δ occurs as the red
//! degree of some neighbour of r.
//!
//! All edges at r start red. Vertex orbits of the colour-preserving
//! subgroup of Aut(G, r) are kept in a well-ordering that refines BFS
//! distance from r and is stable as the group shrinks: a refined block
//! inherits its parent's position, ties broken by minimum vertex. Each
//! step takes the least orbit S with an uncoloured incident edge and
//! colours everything at S:
//! - components of the horizontal subgraph G[S] get a distinguishing
//!   colouring recursively, except the seven special family members,
//!   which get a blue Hamiltonian path;
//! - every vertex x of S is assigned a label i(x), its number of red
//!   forward edges, chosen to break the surviving symmetries of G[S]
//!   subject to the label conditions (B1)-(B5);
//! - red forward edges are placed to split forward orbits, largest
//!   first, so orbit sizes stay under the assumption (A3) bound, with
//!   leftover blue preferring vertices that have no blue edge yet.
//!
//! Assumptions (A1)-(A4) are re-checked after every step, never
//! assumed. Any failure aborts the run; the caller retries other roots
//! or falls back to exhaustive search.

use crate::colouring::{Colour, EdgeColouring};
use crate::engine::bases::exception_name;
use crate::engine::{EngineConfig, EngineError};
use crate::graph::{Edge, Graph};
use crate::perm::PermGroup;
use crate::symmetry::{automorphisms, vertex_orbits};

/// Edge counts per vertex of an orbit, relative to the well-ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitProfile {
    pub back: usize,
    pub forward: usize,
    pub horizontal: usize,
}

/// One orbit block of the current group, in procedure order.
#[derive(Debug, Clone)]
pub struct OrbitBlock {
    pub vertices: Vec<usize>,
    pub profile: OrbitProfile,
}

/// Labels i(x) for the vertices of one orbit: x gets exactly i(x) red
/// forward edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<(usize, usize)>,
}

impl Labeling {
    fn new(mut labels: Vec<(usize, usize)>) -> Labeling {
        labels.sort_unstable();
        Labeling { labels }
    }

    pub fn get(&self, v: usize) -> usize {
        self.labels
            .binary_search_by_key(&v, |&(vertex, _)| vertex)
            .map(|i| self.labels[i].1)
            .expect("vertex belongs to the labelled orbit")
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.labels
    }
}

/// Record of one splitting round: the non-trivial forward orbits seen
/// from a vertex class, with their S-neighbour counts and previously
/// coloured back edges.
#[derive(Debug, Clone)]
pub struct SplitPlan {
    /// Vertex class whose forward edges the round colours.
    pub class: Vec<usize>,
    /// Non-trivial forward orbits, dangerous pairs first, then larger
    /// orbits in descending size.
    pub orbits: Vec<Vec<usize>>,
    /// a_k: number of S-vertices adjacent to orbit X_k.
    pub common_neighbours: Vec<usize>,
    /// d_k: back edges of X_k coloured before this round. Logged only;
    /// no decision depends on it.
    pub prior_back_edges: Vec<usize>,
    /// Orbits of exactly two vertices with a_k >= Δ-1; these must be
    /// split or they will break the (A3) bound.
    pub dangerous: usize,
}

/// A vertex bijection between two components, as (source, image)
/// pairs.
type VertexMap = Vec<(usize, usize)>;

/// Per-component view of the horizontal subgraph G[S].
#[derive(Debug, Clone)]
struct Component {
    vertices: Vec<usize>,
    /// Set when the component is one of the seven special graphs and
    /// is coloured with a blue Hamiltonian path.
    path_endpoints: Option<(usize, usize)>,
}

/// The geometry of one orbit step: which vertices lie before S, in S,
/// and after S. Stored as masks so it survives S splitting into
/// sub-blocks once the horizontal colouring refines the group.
#[derive(Clone, Copy)]
struct OrbitView {
    prefix: u64,
    s_mask: u64,
}

impl OrbitView {
    fn is_forward(&self, v: usize) -> bool {
        self.prefix >> v & 1 == 0 && self.s_mask >> v & 1 == 0
    }
}

/// Working state of the procedure.
pub struct ProcedureState<'g> {
    g: &'g Graph,
    root: usize,
    delta: usize,
    edges: Vec<Edge>,
    colours: Vec<Option<Colour>>,
    /// Aut(G, root); never changes.
    rooted_group: PermGroup,
    /// Colour-preserving subgroup of the rooted group for the current
    /// partial colouring.
    group: PermGroup,
    /// Orbit blocks of `group` in the compatible well-ordering.
    blocks: Vec<OrbitBlock>,
    /// The least non-root orbit of the original rooted group; exempt
    /// from the (A3) size bound.
    s1: Vec<usize>,
    check_invariants: bool,
    config: EngineConfig,
    pub trace: Vec<String>,
}

/// Outcome metadata of a successful run.
#[derive(Debug, Clone)]
pub struct ClaimMetadata {
    pub root: usize,
    /// Vertices with every incident edge red: [root] or [root, x].
    pub all_red: Vec<usize>,
    pub trace: Vec<String>,
    /// Assumption checks passed during the run.
    pub checks_passed: usize,
}

impl<'g> ProcedureState<'g> {
    pub fn new(g: &'g Graph, root: usize, config: &EngineConfig) -> Result<Self, EngineError> {
        let delta = g.regular_degree().ok_or(EngineError::NotRegular)?;
        if !g.is_connected() {
            return Err(EngineError::NotConnected);
        }
        if delta < 4 {
            return Err(EngineError::Unsupported(
                "rooted procedure needs degree at least 4".into(),
            ));
        }
        if delta == g.n() - 1 {
            return Err(EngineError::Unsupported(
                "complete graphs take the asymmetric-subgraph colouring".into(),
            ));
        }
        if crate::engine::bases::is_complete_bipartite(g).is_some() {
            return Err(EngineError::Unsupported(
                "complete bipartite graphs take the Hamiltonian-path colouring".into(),
            ));
        }
        if root >= g.n() {
            return Err(EngineError::Internal(format!("root {root} out of range")));
        }
        let aut = automorphisms(g, config.aut_cap)?;
        let rooted_group = aut.stabilizer(root);
        let edges = g.edges();
        let mut colours = vec![None; edges.len()];
        let root_edge_indices: Vec<usize> = g
            .neighbours(root)
            .map(|w| edges.binary_search(&Edge::new(root, w)).expect("edge exists"))
            .collect();
        // Every edge at the root is red.
        for idx in root_edge_indices {
            colours[idx] = Some(Colour::Red);
        }
        let dist = g.bfs_distances(root).map_err(|_| EngineError::NotConnected)?;
        let initial = vertex_orbits(&rooted_group, &dist);
        if initial.blocks.first().map(|b| b.vertices.as_slice()) != Some(&[root]) {
            return Err(EngineError::Internal("root is not the first orbit".into()));
        }
        let s1 = initial.blocks[1].vertices.clone();
        let trace = vec![format!(
            "root {root}: |Aut(G,r)| = {}, S1 = {:?}",
            rooted_group.order(),
            s1
        )];
        let mut state = ProcedureState {
            g,
            root,
            delta,
            edges,
            colours,
            rooted_group,
            group: PermGroup::trivial(g.n()),
            blocks: Vec::new(),
            s1,
            check_invariants: config.check_invariants,
            config: config.clone(),
            trace,
        };
        state.refresh();
        Ok(state)
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn blocks(&self) -> &[OrbitBlock] {
        &self.blocks
    }

    pub fn s1(&self) -> &[usize] {
        &self.s1
    }

    pub fn colour_of(&self, e: Edge) -> Option<Colour> {
        self.colours[self.edge_index(e)]
    }

    fn edge_index(&self, e: Edge) -> usize {
        self.edges.binary_search(&e).expect("edge belongs to the graph")
    }

    fn set_colour(&mut self, e: Edge, colour: Colour) -> Result<(), EngineError> {
        let idx = self.edge_index(e);
        if self.colours[idx].is_some() {
            return Err(EngineError::Internal(format!("edge {e} coloured twice")));
        }
        self.colours[idx] = Some(colour);
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.colours.iter().all(Option::is_some)
    }

    /// The orbit the next step will process: least block with an
    /// uncoloured incident edge.
    pub fn next_orbit(&self) -> Option<Vec<usize>> {
        self.blocks
            .iter()
            .find(|b| b.vertices.iter().any(|&v| self.has_uncoloured_edge(v)))
            .map(|b| b.vertices.clone())
    }

    fn has_uncoloured_edge(&self, v: usize) -> bool {
        self.g
            .neighbours(v)
            .any(|w| self.colour_of(Edge::new(v, w)).is_none())
    }

    /// Vertices outside the processed prefix carrying at least one
    /// coloured (back) edge.
    pub fn pinned_vertices(&self) -> Vec<usize> {
        (0..self.g.n())
            .filter(|&v| {
                self.has_uncoloured_edge(v)
                    && self
                        .g
                        .neighbours(v)
                        .any(|w| self.colour_of(Edge::new(v, w)).is_some())
            })
            .collect()
    }

    /// Masks describing the step geometry for orbit set `s`: vertices
    /// of blocks strictly before the first block meeting `s`, and `s`
    /// itself.
    fn view_of(&self, s: &[usize]) -> OrbitView {
        let mut s_mask = 0u64;
        for &v in s {
            s_mask |= 1 << v;
        }
        let mut prefix = 0u64;
        for b in &self.blocks {
            if b.vertices.iter().any(|&v| s_mask >> v & 1 == 1) {
                break;
            }
            for &v in &b.vertices {
                prefix |= 1 << v;
            }
        }
        OrbitView { prefix, s_mask }
    }

    /// Forward-edge count of `v` with respect to the step geometry.
    fn forward_count(&self, view: OrbitView, v: usize) -> usize {
        self.g.neighbours(v).filter(|&w| view.is_forward(w)).count()
    }

    /// Recomputes the colour-preserving group and re-derives the orbit
    /// blocks, each refined block inheriting its parent's position.
    fn refresh(&mut self) {
        let old_blocks: Vec<Vec<usize>> =
            self.blocks.iter().map(|b| b.vertices.clone()).collect();
        self.group = self.colour_preserving_subgroup(&self.rooted_group);
        let parent_rank = |v: usize| -> usize {
            old_blocks
                .iter()
                .position(|b| b.contains(&v))
                .unwrap_or(usize::MAX)
        };
        let dist = self
            .g
            .bfs_distances(self.root)
            .expect("graph stays connected");
        let mut vertex_lists: Vec<Vec<usize>> = self.group.orbits();
        vertex_lists.sort_by_key(|b| (parent_rank(b[0]), dist[b[0]], b[0]));
        let block_index_of = |v: usize, lists: &[Vec<usize>]| {
            lists
                .iter()
                .position(|b| b.contains(&v))
                .expect("blocks cover the vertex set")
        };
        self.blocks = vertex_lists
            .iter()
            .enumerate()
            .map(|(position, vertices)| {
                let v = vertices[0];
                let mut profile = OrbitProfile { back: 0, forward: 0, horizontal: 0 };
                for w in self.g.neighbours(v) {
                    let wi = block_index_of(w, &vertex_lists);
                    if wi < position {
                        profile.back += 1;
                    } else if wi == position {
                        profile.horizontal += 1;
                    } else {
                        profile.forward += 1;
                    }
                }
                OrbitBlock { vertices: vertices.clone(), profile }
            })
            .collect();
    }

    fn colour_preserving_subgroup(&self, base: &PermGroup) -> PermGroup {
        base.filter(|p| {
            let images = p.images();
            self.edges.iter().enumerate().all(|(j, e)| match self.colours[j] {
                None => true,
                Some(col) => {
                    let idx = self
                        .edges
                        .binary_search(&e.map(&images))
                        .expect("automorphism permutes edges");
                    self.colours[idx] == Some(col)
                }
            })
        })
    }

    /// Checks assumptions (A1)-(A4) for the current state, returning a
    /// description of the first failure.
    pub fn check_assumptions(&self) -> Result<(), String> {
        // Position of the least block with an uncoloured edge.
        let cursor = self
            .blocks
            .iter()
            .position(|b| b.vertices.iter().any(|&v| self.has_uncoloured_edge(v)))
            .unwrap_or(self.blocks.len());

        // (A1) prefix blocks fully coloured (holds by choice of
        // cursor); every coloured edge touches the prefix.
        let mut prefix = 0u64;
        for b in &self.blocks[..cursor] {
            for &v in &b.vertices {
                prefix |= 1 << v;
            }
        }
        for (j, e) in self.edges.iter().enumerate() {
            if self.colours[j].is_some() && prefix >> e.u() & 1 == 0 && prefix >> e.v() & 1 == 0 {
                return Err(format!(
                    "(A1): coloured edge {e} not incident to a processed orbit"
                ));
            }
        }

        // (A2) processed orbits are fixed pointwise by the group.
        for p in self.group.elements() {
            for v in 0..self.g.n() {
                if prefix >> v & 1 == 1 && p.apply(v) != v {
                    return Err(format!(
                        "(A2): processed vertex {v} moved by {}",
                        p.cycle_string()
                    ));
                }
            }
        }

        // (A3) size bound per pinned orbit, S1 exempt. Orbits with no
        // coloured back edge yet are unconstrained: the bound is
        // established by splitting at the moment their first back
        // edges are coloured.
        for b in &self.blocks {
            let counts: Vec<usize> = b
                .vertices
                .iter()
                .map(|&v| self.coloured_edge_count(v))
                .collect();
            let b0 = counts[0];
            if counts.iter().any(|&c| c != b0) {
                return Err(format!(
                    "(A3): unequal coloured back degrees {counts:?} on orbit {:?}",
                    b.vertices
                ));
            }
            if b.vertices == self.s1 || b0 == 0 {
                continue;
            }
            // Fully processed vertices sit in singleton orbits ((A2)),
            // so the bound is only binding on partially coloured ones.
            if prefix >> b.vertices[0] & 1 == 1 {
                continue;
            }
            let bound = 1.max(self.delta.saturating_sub(b0));
            if b.vertices.len() > bound {
                return Err(format!(
                    "(A3): orbit {:?} has {} vertices with {} coloured back edges (bound {})",
                    b.vertices,
                    b.vertices.len(),
                    b0,
                    bound
                ));
            }
        }

        // (A4) fully red vertices: the root plus at most one of its
        // neighbours.
        let all_red = self.all_red_vertices();
        let extra: Vec<usize> = all_red.iter().copied().filter(|&v| v != self.root).collect();
        if extra.len() > 1 {
            return Err(format!("(A4): fully red vertices {all_red:?}"));
        }
        if let Some(&x) = extra.first() {
            if !self.g.has_edge(self.root, x) {
                return Err(format!(
                    "(A4): fully red vertex {x} is not a neighbour of the root"
                ));
            }
        }
        Ok(())
    }

    /// Coloured incident edges of a vertex. For vertices outside the
    /// processed prefix these are exactly its coloured back edges.
    fn coloured_edge_count(&self, v: usize) -> usize {
        self.g
            .neighbours(v)
            .filter(|&w| self.colour_of(Edge::new(v, w)).is_some())
            .count()
    }

    /// Vertices with every incident edge coloured red.
    pub fn all_red_vertices(&self) -> Vec<usize> {
        (0..self.g.n())
            .filter(|&v| {
                self.g
                    .neighbours(v)
                    .all(|w| self.colour_of(Edge::new(v, w)) == Some(Colour::Red))
            })
            .collect()
    }

    /// Finished colouring; requires completeness.
    pub fn into_colouring(self) -> EdgeColouring {
        let colours = self
            .colours
            .iter()
            .map(|c| c.expect("procedure coloured every edge"))
            .collect();
        EdgeColouring::from_colours(self.g, colours)
    }
}

/// Components of the horizontal subgraph on `s`, each classified and,
/// for members of the special family, carrying the endpoints of the
/// deterministic Hamiltonian path used to colour it.
fn horizontal_components(g: &Graph, s: &[usize]) -> Vec<Component> {
    let (sub, old_of_new) = g.induced_subgraph(s);
    sub.components()
        .into_iter()
        .map(|comp_new| {
            let vertices: Vec<usize> = comp_new.iter().map(|&v| old_of_new[v]).collect();
            let (comp_graph, comp_map) = g.induced_subgraph(&vertices);
            let path_endpoints = if exception_name(&comp_graph).is_some() {
                let path = comp_graph
                    .hamiltonian_path()
                    .expect("the special family members are traceable");
                let a = comp_map[*path.first().unwrap()];
                let b = comp_map[*path.last().unwrap()];
                Some((a.min(b), a.max(b)))
            } else {
                None
            };
            Component { vertices, path_endpoints }
        })
        .collect()
}

/// Colours all edges incident to the least unfinished orbit, leaving
/// it fixed pointwise, then re-checks the assumptions.
pub fn process_orbit(state: &mut ProcedureState<'_>) -> Result<(), EngineError> {
    let s = state
        .next_orbit()
        .ok_or_else(|| EngineError::Internal("no orbit left to process".into()))?;
    let view = state.view_of(&s);
    let f = state.forward_count(view, s[0]);
    let h = state
        .g
        .neighbours(s[0])
        .filter(|&w| view.s_mask >> w & 1 == 1)
        .count();
    let b = state.delta - f - h;
    state.trace.push(format!("orbit {s:?}: b={b} f={f} h={h}"));
    for &v in &s {
        if state.forward_count(view, v) != f {
            return Err(EngineError::InvariantViolated(format!(
                "orbit {s:?} has unequal forward degrees"
            )));
        }
    }

    // Horizontal edges first.
    if h > 0 {
        colour_horizontal(state, &s)?;
        state.refresh();
    }

    if f == 0 {
        // Outside the first orbit this can only be a singleton — a
        // larger orbit would already have broken the (A3) bound — and
        // for S1 it would mean a complete graph, which the procedure
        // does not accept.
        if s.len() > 1 {
            return Err(EngineError::InvariantViolated(format!(
                "orbit {s:?} has no forward edges but {} vertices",
                s.len()
            )));
        }
    } else {
        let labels = assign_labels(state, &s)?;
        state.trace.push(format!("labels {:?}", labels.entries()));
        colour_forward_edges(state, &s, &labels)?;
    }

    state.refresh();
    if state.check_invariants {
        state
            .check_assumptions()
            .map_err(EngineError::InvariantViolated)?;
        // The processed orbit must now be fixed pointwise.
        for p in state.group.elements() {
            if s.iter().any(|&v| p.apply(v) != v) {
                return Err(EngineError::InvariantViolated(format!(
                    "orbit {s:?} not fixed pointwise after processing"
                )));
            }
        }
    }
    Ok(())
}

/// Colours the edges within each component of G[S]: a blue Hamiltonian
/// path for the special family, a recursive distinguishing colouring
/// otherwise.
fn colour_horizontal(state: &mut ProcedureState<'_>, s: &[usize]) -> Result<(), EngineError> {
    let components = horizontal_components(state.g, s);
    for comp in &components {
        let (comp_graph, comp_map) = state.g.induced_subgraph(&comp.vertices);
        if comp.path_endpoints.is_some() {
            let path = comp_graph
                .hamiltonian_path()
                .expect("special family members are traceable");
            let mut blue = Vec::new();
            for w in path.windows(2) {
                blue.push(Edge::new(comp_map[w[0]], comp_map[w[1]]));
            }
            for u_new in comp_graph.vertices() {
                for v_new in comp_graph.neighbours(u_new) {
                    if u_new < v_new {
                        let e = Edge::new(comp_map[u_new], comp_map[v_new]);
                        let colour = if blue.contains(&e) { Colour::Blue } else { Colour::Red };
                        state.set_colour(e, colour)?;
                    }
                }
            }
            state
                .trace
                .push(format!("component {:?}: blue Hamiltonian path", comp.vertices));
        } else if comp_graph.edge_count() > 0 {
            // Strictly smaller regular degree: recurse.
            let report = crate::engine::distinguishing_two_colouring_with(
                &comp_graph,
                &sub_config(state),
            )?;
            for (e, &col) in report.colouring.edges().iter().zip(report.colouring.colours()) {
                state.set_colour(Edge::new(comp_map[e.u()], comp_map[e.v()]), col)?;
            }
            state.trace.push(format!(
                "component {:?}: recursive colouring ({})",
                comp.vertices, report.method
            ));
        }
    }
    Ok(())
}

fn sub_config(state: &ProcedureState<'_>) -> EngineConfig {
    EngineConfig {
        preferred_root: None,
        ..state.config.clone()
    }
}

/// Chooses the labels i(x) for the vertices of `s`.
///
/// Preconditions: the horizontal edges of `s` are coloured and `s` has
/// forward edges. The result satisfies, literally:
/// (B1) every group element mapping a component of G[S] to a different
/// component sees a label mismatch inside it;
/// (B2) the endvertices of a blue Hamiltonian path get distinct
/// labels;
/// (B3) for f > 1 at most one label 0, and only when |S| >= Δ-1 or
/// |S| = 1;
/// (B4) for f > 1 at most one label f, and only when |S| = Δ and the
/// components are single vertices, or single edges with Δ = 4;
/// (B5) for f > 1, if two vertices of S have different forward
/// neighbourhoods then so must the label-0 and label-f vertices;
/// plus breakage of every residual colour-preserving component
/// isomorphism, which is what actually pins S pointwise.
///
/// Construction: the base component takes i0 = ceil(f/2) everywhere
/// (one path endvertex at i0 - 1 when it carries a blue path); every
/// other component is perturbed in one vertex, labels nearest i0
/// first. A bounded exhaustive search over label vectors backs up the
/// greedy pass.
pub fn assign_labels(state: &ProcedureState<'_>, s: &[usize]) -> Result<Labeling, EngineError> {
    let view = state.view_of(s);
    let f = state.forward_count(view, s[0]);
    assert!(f >= 1, "labels are only assigned when forward edges exist");
    let components = horizontal_components(state.g, s);
    let ctx = LabelContext::build(state, s, view, f, &components);

    if f == 1 {
        if components.len() != 1 {
            return Err(EngineError::InvariantViolated(format!(
                "f=1 orbit {s:?} with {} horizontal components",
                components.len()
            )));
        }
        let comp = &components[0];
        let labels: Vec<(usize, usize)> = match comp.path_endpoints {
            Some((a, _)) => comp
                .vertices
                .iter()
                .map(|&v| (v, usize::from(v == a)))
                .collect(),
            None => comp.vertices.iter().map(|&v| (v, 0)).collect(),
        };
        let labeling = Labeling::new(labels);
        return if ctx.check(&labeling).is_ok() {
            Ok(labeling)
        } else {
            exhaustive_labels(&ctx)
        };
    }

    if let Some(labeling) = greedy_labels(&ctx) {
        return Ok(labeling);
    }
    exhaustive_labels(&ctx)
}

/// Everything the label checks need, precomputed once per orbit.
struct LabelContext<'a> {
    s: Vec<usize>,
    f: usize,
    i0: usize,
    delta: usize,
    components: &'a [Component],
    /// Colour-preserving isomorphisms between distinct components and
    /// non-trivial self-isomorphisms, as (source, image) vertex pairs.
    /// Candidates respect the already-coloured back edges, so this is
    /// a superset of the maps group elements can induce.
    isos: Vec<(usize, usize, VertexMap)>,
    /// Group elements (as image tables) moving a component, paired
    /// with the index of a component they move.
    moving_elements: Vec<(Vec<usize>, usize)>,
    forward_neighbourhoods: Vec<(usize, u64)>,
    all_k1: bool,
    all_k2: bool,
    /// Endvertices of the blue Hamiltonian paths. For f = 2 the
    /// construction may place i0 - 1 = 0 on one of these even on a
    /// small orbit; the (B3) size condition does not apply there.
    path_endvertices: Vec<usize>,
}

impl<'a> LabelContext<'a> {
    fn build(
        state: &ProcedureState<'_>,
        s: &[usize],
        view: OrbitView,
        f: usize,
        components: &'a [Component],
    ) -> LabelContext<'a> {
        let forward_neighbourhoods: Vec<(usize, u64)> = s
            .iter()
            .map(|&v| {
                let mask = state
                    .g
                    .neighbours(v)
                    .filter(|&w| view.is_forward(w))
                    .fold(0u64, |m, w| m | 1 << w);
                (v, mask)
            })
            .collect();
        let mut isos = Vec::new();
        for (i, a) in components.iter().enumerate() {
            for (j, b) in components.iter().enumerate().skip(i) {
                for iso in coloured_isomorphisms(state, &a.vertices, &b.vertices) {
                    let nontrivial = iso.iter().any(|&(x, y)| x != y);
                    if i != j || nontrivial {
                        isos.push((i, j, iso));
                    }
                }
            }
        }
        let moving_elements = state
            .group
            .elements()
            .iter()
            .filter(|p| !p.is_identity())
            .flat_map(|p| {
                let images = p.images();
                components
                    .iter()
                    .enumerate()
                    .filter(|(_, comp)| {
                        comp.vertices.iter().any(|&v| !comp.vertices.contains(&images[v]))
                    })
                    .map(|(ci, _)| (images.clone(), ci))
                    .collect::<Vec<_>>()
            })
            .collect();
        let path_endvertices = components
            .iter()
            .filter_map(|c| c.path_endpoints)
            .flat_map(|(a, b)| [a, b])
            .collect();
        LabelContext {
            s: s.to_vec(),
            f,
            i0: f.div_ceil(2),
            delta: state.delta,
            components,
            isos,
            moving_elements,
            forward_neighbourhoods,
            all_k1: components.iter().all(|c| c.vertices.len() == 1),
            all_k2: components.iter().all(|c| c.vertices.len() == 2),
            path_endvertices,
        }
    }

    /// A zero label at `v` is acceptable when the orbit is large or a
    /// singleton, or when it is the i0 - 1 = 0 perturbation that the
    /// f = 2 construction places on a path endvertex.
    fn zero_allowed_at(&self, v: usize) -> bool {
        self.s.len() >= self.delta - 1
            || self.s.len() == 1
            || (self.f == 2 && self.path_endvertices.contains(&v))
    }

    fn fwd_mask(&self, v: usize) -> u64 {
        self.forward_neighbourhoods
            .iter()
            .find(|&&(u, _)| u == v)
            .map(|&(_, m)| m)
            .expect("vertex belongs to the orbit")
    }

    fn check(&self, labeling: &Labeling) -> Result<(), String> {
        // Component isomorphisms, including the blue-path reversals.
        for (i, j, iso) in &self.isos {
            if iso.iter().all(|&(x, y)| labeling.get(x) == labeling.get(y)) {
                return Err(format!("isomorphism {i}->{j} not broken"));
            }
        }
        // (B1) literally.
        for (images, ci) in &self.moving_elements {
            let comp = &self.components[*ci];
            if comp
                .vertices
                .iter()
                .all(|&x| labeling.get(images[x]) == labeling.get(x))
            {
                return Err(format!("(B1): moved component {ci} labels preserved"));
            }
        }
        // (B2)
        for comp in self.components {
            if let Some((a, b)) = comp.path_endpoints {
                if labeling.get(a) == labeling.get(b) {
                    return Err("(B2): path endvertices share a label".into());
                }
            }
        }
        if self.f > 1 {
            let zeros: Vec<usize> = self
                .s
                .iter()
                .copied()
                .filter(|&v| labeling.get(v) == 0)
                .collect();
            let fulls: Vec<usize> = self
                .s
                .iter()
                .copied()
                .filter(|&v| labeling.get(v) == self.f)
                .collect();
            if zeros.len() > 1 {
                return Err("(B3): two labels 0".into());
            }
            if let Some(&t) = zeros.first() {
                if !self.zero_allowed_at(t) {
                    return Err("(B3): label 0 on a small orbit".into());
                }
            }
            if fulls.len() > 1 {
                return Err("(B4): two labels f".into());
            }
            if !fulls.is_empty() {
                let shape_ok = self.s.len() == self.delta
                    && (self.all_k1 || (self.all_k2 && self.delta == 4));
                if !shape_ok {
                    return Err("(B4): label f outside the allowed shape".into());
                }
            }
            if let (Some(&z), Some(&t)) = (fulls.first(), zeros.first()) {
                let mixed = self
                    .s
                    .iter()
                    .any(|&x| self.s.iter().any(|&y| self.fwd_mask(x) != self.fwd_mask(y)));
                if mixed && self.fwd_mask(z) == self.fwd_mask(t) {
                    return Err("(B5): extreme labels on twin forward neighbourhoods".into());
                }
            }
        }
        Ok(())
    }

    /// Candidate labels nearest to i0 first, ties to the smaller
    /// label, extremes filtered by the (B3)/(B4) shape conditions.
    /// Zero stays in the list whenever some position could legally
    /// carry it; per-position legality is settled by `check`.
    fn candidate_labels(&self) -> Vec<usize> {
        let mut labels: Vec<usize> = (0..=self.f).collect();
        labels.sort_by_key(|&l| (self.i0.abs_diff(l), l));
        labels.retain(|&l| {
            if l == 0 && self.f > 1 {
                self.s.iter().any(|&v| self.zero_allowed_at(v))
            } else if l == self.f && self.f > 1 {
                self.s.len() == self.delta && (self.all_k1 || (self.all_k2 && self.delta == 4))
            } else {
                true
            }
        });
        labels
    }
}

/// Greedy assignment: base component constant at i0 (one path
/// endvertex at the next label down), other components perturbed at a
/// single vertex each.
fn greedy_labels(ctx: &LabelContext<'_>) -> Option<Labeling> {
    let candidate_labels = ctx.candidate_labels();
    let mut choices: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
    for (ci, comp) in ctx.components.iter().enumerate() {
        let base_labels = |perturbed: Option<(usize, usize)>| -> Vec<(usize, usize)> {
            comp.vertices
                .iter()
                .map(|&v| match perturbed {
                    Some((p, l)) if p == v => (v, l),
                    _ => (v, ctx.i0),
                })
                .collect()
        };
        let mut options: Vec<Vec<(usize, usize)>> = Vec::new();
        let perturb_positions: Vec<usize> = match comp.path_endpoints {
            Some((a, b)) => vec![a, b],
            None => comp.vertices.clone(),
        };
        if ci == 0 && comp.path_endpoints.is_none() {
            options.push(base_labels(None));
        }
        if ci > 0 && comp.path_endpoints.is_none() {
            options.push(base_labels(None));
        }
        for &l in &candidate_labels {
            if l == ctx.i0 {
                continue;
            }
            for &p in &perturb_positions {
                if l == 0 && ctx.f > 1 && !ctx.zero_allowed_at(p) {
                    continue;
                }
                options.push(base_labels(Some((p, l))));
            }
        }
        choices.push(options);
    }

    fn descend(
        ctx: &LabelContext<'_>,
        choices: &[Vec<Vec<(usize, usize)>>],
        ci: usize,
        acc: &mut Vec<(usize, usize)>,
        zero_used: bool,
        full_used: bool,
    ) -> Option<Labeling> {
        if ci == choices.len() {
            let labeling = Labeling::new(acc.clone());
            return ctx.check(&labeling).ok().map(|_| labeling);
        }
        for option in &choices[ci] {
            let zeros = option.iter().filter(|&&(_, l)| l == 0 && ctx.f > 1).count();
            let fulls = option
                .iter()
                .filter(|&&(_, l)| l == ctx.f && ctx.f > 1)
                .count();
            if (zero_used && zeros > 0) || (full_used && fulls > 0) || zeros > 1 || fulls > 1 {
                continue;
            }
            let len_before = acc.len();
            acc.extend_from_slice(option);
            if let Some(found) = descend(
                ctx,
                choices,
                ci + 1,
                acc,
                zero_used || zeros > 0,
                full_used || fulls > 0,
            ) {
                return Some(found);
            }
            acc.truncate(len_before);
        }
        None
    }

    let mut acc = Vec::new();
    descend(ctx, &choices, 0, &mut acc, false, false)
}

const LABEL_SEARCH_CAP: usize = 500_000;

/// Last resort: bounded exhaustive search over label vectors in the
/// same nearest-to-i0-first order.
fn exhaustive_labels(ctx: &LabelContext<'_>) -> Result<Labeling, EngineError> {
    let order = ctx.candidate_labels();
    let mut nodes = 0usize;
    let mut acc: Vec<(usize, usize)> = Vec::new();

    fn descend(
        ctx: &LabelContext<'_>,
        order: &[usize],
        vi: usize,
        acc: &mut Vec<(usize, usize)>,
        nodes: &mut usize,
    ) -> Result<Option<Labeling>, EngineError> {
        if vi == ctx.s.len() {
            let labeling = Labeling::new(acc.clone());
            return Ok(ctx.check(&labeling).ok().map(|_| labeling));
        }
        for &l in order {
            *nodes += 1;
            if *nodes > LABEL_SEARCH_CAP {
                return Err(EngineError::InvariantViolated(
                    "no valid labeling within the search cap".into(),
                ));
            }
            if ctx.f > 1 {
                let zeros = acc.iter().filter(|&&(_, x)| x == 0).count() + usize::from(l == 0);
                let fulls =
                    acc.iter().filter(|&&(_, x)| x == ctx.f).count() + usize::from(l == ctx.f);
                if zeros > 1 || fulls > 1 {
                    continue;
                }
            }
            acc.push((ctx.s[vi], l));
            if let Some(found) = descend(ctx, order, vi + 1, acc, nodes)? {
                return Ok(Some(found));
            }
            acc.pop();
        }
        Ok(None)
    }

    descend(ctx, &order, 0, &mut acc, &mut nodes)?
        .ok_or_else(|| EngineError::InvariantViolated("no valid labeling exists".into()))
}

/// All isomorphisms between two coloured components: bijections
/// preserving adjacency, the colours of horizontal edges, and —
/// because group elements fix processed vertices pointwise — the
/// adjacency and colours towards every fixed coloured neighbour.
fn coloured_isomorphisms(
    state: &ProcedureState<'_>,
    a: &[usize],
    b: &[usize],
) -> Vec<VertexMap> {
    if a.len() != b.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut images: Vec<Option<usize>> = vec![None; a.len()];
    let mut used = vec![false; b.len()];
    extend_iso(state, a, b, 0, &mut images, &mut used, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    state: &ProcedureState<'_>,
    a: &[usize],
    b: &[usize],
    k: usize,
    images: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    out: &mut Vec<VertexMap>,
) {
    if k == a.len() {
        out.push(
            a.iter()
                .zip(images.iter())
                .map(|(&x, y)| (x, y.unwrap()))
                .collect(),
        );
        return;
    }
    'candidates: for bi in 0..b.len() {
        if used[bi] {
            continue;
        }
        let x = a[k];
        let y = b[bi];
        // Back-edge signatures must match: a group element fixes the
        // coloured prefix pointwise.
        for u in 0..state.g.n() {
            if a.contains(&u) || b.contains(&u) {
                continue;
            }
            let xu = state
                .g
                .has_edge(x, u)
                .then(|| state.colour_of(Edge::new(x, u)))
                .flatten();
            let yu = state
                .g
                .has_edge(y, u)
                .then(|| state.colour_of(Edge::new(y, u)))
                .flatten();
            if xu != yu {
                continue 'candidates;
            }
        }
        for (j, &prev) in a.iter().enumerate().take(k) {
            let img = images[j].unwrap();
            let adj_a = state.g.has_edge(x, prev);
            let adj_b = state.g.has_edge(y, img);
            if adj_a != adj_b {
                continue 'candidates;
            }
            if adj_a && state.colour_of(Edge::new(x, prev)) != state.colour_of(Edge::new(y, img)) {
                continue 'candidates;
            }
        }
        images[k] = Some(y);
        used[bi] = true;
        extend_iso(state, a, b, k + 1, images, used, out);
        images[k] = None;
        used[bi] = false;
    }
}

/// Colours the forward edges of the orbit so every vertex x ends with
/// exactly i(x) red forward edges, splitting forward orbits to keep
/// them under the (A3) bound.
pub fn colour_forward_edges(
    state: &mut ProcedureState<'_>,
    s: &[usize],
    labels: &Labeling,
) -> Result<(), EngineError> {
    let view = state.view_of(s);
    let f = state.forward_count(view, s[0]);

    // Forced vertices first: all red for i(x) = f, all blue for 0.
    for &v in s {
        let l = labels.get(v);
        if l == 0 || l == f {
            let colour = if l == 0 { Colour::Blue } else { Colour::Red };
            for w in uncoloured_forward_targets(state, view, v) {
                state.set_colour(Edge::new(v, w), colour)?;
            }
        }
    }

    // Rounds over vertex classes sharing a forward orbit.
    loop {
        let unfinished: Vec<usize> = s
            .iter()
            .copied()
            .filter(|&v| !uncoloured_forward_targets(state, view, v).is_empty())
            .collect();
        let Some(&anchor) = unfinished.first() else {
            break;
        };
        let plan = build_split_plan(state, s, view, anchor)?;
        state.trace.push(format!(
            "split plan for class {:?}: orbits {:?} a={:?} d={:?} m={}",
            plan.class, plan.orbits, plan.common_neighbours, plan.prior_back_edges, plan.dangerous
        ));
        let mut class_order: Vec<usize> = plan
            .class
            .iter()
            .copied()
            .filter(|v| unfinished.contains(v))
            .collect();
        if plan.dangerous >= 2 {
            // Vertices whose label leaves little splitting slack go
            // first, so their scarce minority colour lands on the
            // dangerous pairs.
            let l = plan.orbits.len();
            class_order.sort_by_key(|&v| {
                let i = labels.get(v);
                (usize::from(!(i < l || i > f - l)), v)
            });
        }
        for v in class_order {
            colour_vertex_forward(state, s, view, v, labels.get(v))?;
        }
    }
    Ok(())
}

fn uncoloured_forward_targets(
    state: &ProcedureState<'_>,
    view: OrbitView,
    v: usize,
) -> Vec<usize> {
    state
        .g
        .neighbours(v)
        .filter(|&w| view.is_forward(w) && state.colour_of(Edge::new(v, w)).is_none())
        .collect()
}

/// The splitting context seen from `anchor`: its vertex class S_X and
/// the non-trivial forward orbits, dangerous pairs first, then larger
/// orbits in descending size.
fn build_split_plan(
    state: &ProcedureState<'_>,
    s: &[usize],
    view: OrbitView,
    anchor: usize,
) -> Result<SplitPlan, EngineError> {
    let orbits_all = forward_orbits(state, s, view)?;
    let anchor_first_target = uncoloured_forward_targets(state, view, anchor)
        .first()
        .copied()
        .ok_or_else(|| EngineError::Internal("anchor has no uncoloured forward edge".into()))?;
    let anchor_orbit = orbits_all
        .iter()
        .position(|o| o.contains(&anchor_first_target))
        .expect("forward vertex lies in some orbit");
    // S_X: the common neighbourhood of the anchor orbit inside S.
    let class: Vec<usize> = s
        .iter()
        .copied()
        .filter(|&v| state.g.has_edge(v, orbits_all[anchor_orbit][0]))
        .collect();

    let mut dangerous: Vec<usize> = Vec::new();
    let mut rest: Vec<usize> = Vec::new();
    for (oi, orbit) in orbits_all.iter().enumerate() {
        if orbit.len() < 2 {
            continue;
        }
        let common = s.iter().filter(|&&v| state.g.has_edge(v, orbit[0])).count();
        if orbit.len() == 2 && common + 1 >= state.delta {
            dangerous.push(oi);
        } else if orbit.len() >= 3 {
            rest.push(oi);
        }
    }
    rest.sort_by_key(|&oi| (usize::MAX - orbits_all[oi].len(), orbits_all[oi][0]));
    let ordered: Vec<usize> = dangerous.iter().chain(rest.iter()).copied().collect();
    let orbits: Vec<Vec<usize>> = ordered.iter().map(|&oi| orbits_all[oi].clone()).collect();
    let common_neighbours: Vec<usize> = orbits
        .iter()
        .map(|o| s.iter().filter(|&&v| state.g.has_edge(v, o[0])).count())
        .collect();
    let prior_back_edges: Vec<usize> = orbits
        .iter()
        .map(|o| state.coloured_edge_count(o[0]))
        .collect();
    Ok(SplitPlan {
        class,
        orbits,
        common_neighbours,
        prior_back_edges,
        dangerous: dangerous.len(),
    })
}

/// Orbits of the forward vertices of `s` under the subgroup that fixes
/// `s` pointwise and preserves the current partial colouring. Members
/// of one orbit share their neighbourhood in S.
fn forward_orbits(
    state: &ProcedureState<'_>,
    s: &[usize],
    view: OrbitView,
) -> Result<Vec<Vec<usize>>, EngineError> {
    let pointwise = state
        .colour_preserving_subgroup(&state.rooted_group)
        .filter(|p| s.iter().all(|&v| p.apply(v) == v));
    let forward_mask: u64 = s
        .iter()
        .flat_map(|&v| state.g.neighbours(v))
        .filter(|&w| view.is_forward(w))
        .fold(0u64, |m, w| m | 1 << w);
    let orbits: Vec<Vec<usize>> = pointwise
        .orbits()
        .into_iter()
        .filter(|o| o.iter().any(|&v| forward_mask >> v & 1 == 1))
        .collect();
    for orbit in &orbits {
        let first: Vec<bool> = s.iter().map(|&v| state.g.has_edge(v, orbit[0])).collect();
        for &w in &orbit[1..] {
            let nb: Vec<bool> = s.iter().map(|&v| state.g.has_edge(v, w)).collect();
            if nb != first {
                return Err(EngineError::Internal(
                    "forward orbit with unequal neighbourhoods in S".into(),
                ));
            }
        }
    }
    Ok(orbits)
}

/// Colours all forward edges of one vertex: one red and one blue unit
/// into each splittable orbit while both budgets last, then the
/// remainder, blue aimed at vertices that still lack a blue edge.
fn colour_vertex_forward(
    state: &mut ProcedureState<'_>,
    s: &[usize],
    view: OrbitView,
    v: usize,
    label: usize,
) -> Result<(), EngineError> {
    let targets = uncoloured_forward_targets(state, view, v);
    if targets.is_empty() {
        return Ok(());
    }
    if label > targets.len() {
        return Err(EngineError::Internal(format!(
            "vertex {v}: label {label} exceeds {} uncoloured forward edges",
            targets.len()
        )));
    }
    let mut red_left = label;
    let mut blue_left = targets.len() - label;

    let orbits_all = forward_orbits(state, s, view)?;
    let mut splittable: Vec<&Vec<usize>> = orbits_all
        .iter()
        .filter(|o| o.len() >= 2 && o.iter().all(|w| targets.contains(w)))
        .collect();
    // Dangerous pairs first, then larger orbits.
    splittable.sort_by_key(|o| {
        let common = s.iter().filter(|&&x| state.g.has_edge(x, o[0])).count();
        let dangerous = o.len() == 2 && common + 1 >= state.delta;
        (usize::from(!dangerous), usize::MAX - o.len(), o[0])
    });

    let mut assigned: Vec<(usize, Colour)> = Vec::new();
    let mut taken = 0u64;
    for orbit in splittable {
        if red_left == 0 || blue_left == 0 {
            break;
        }
        let mut members: Vec<usize> = orbit
            .iter()
            .copied()
            .filter(|&w| taken >> w & 1 == 0)
            .collect();
        if members.len() < 2 {
            continue;
        }
        // Blue to the member most at risk of ending fully red.
        members.sort_by_key(|&w| blue_need(state, w));
        let blue_to = members[0];
        let red_to = members[1];
        assigned.push((blue_to, Colour::Blue));
        assigned.push((red_to, Colour::Red));
        taken |= 1 << blue_to | 1 << red_to;
        red_left -= 1;
        blue_left -= 1;
    }
    let mut rest: Vec<usize> = targets
        .iter()
        .copied()
        .filter(|&w| taken >> w & 1 == 0)
        .collect();
    rest.sort_by_key(|&w| blue_need(state, w));
    for w in rest {
        let colour = if blue_left > 0 {
            blue_left -= 1;
            Colour::Blue
        } else {
            red_left -= 1;
            Colour::Red
        };
        assigned.push((w, colour));
    }
    debug_assert_eq!(red_left + blue_left, 0);
    for (w, colour) in assigned {
        state.set_colour(Edge::new(v, w), colour)?;
    }
    Ok(())
}

fn has_blue_edge(state: &ProcedureState<'_>, v: usize) -> bool {
    state
        .g
        .neighbours(v)
        .any(|w| state.colour_of(Edge::new(v, w)) == Some(Colour::Blue))
}

/// Priority key for sending blue to target `w`: a target whose very
/// last uncoloured edge is the one being assigned and that still lacks
/// a blue edge would turn fully red on a red assignment, so it comes
/// first; then any target without a blue edge, those with fewer
/// uncoloured edges left earlier; ties by vertex id.
fn blue_need(state: &ProcedureState<'_>, w: usize) -> (usize, usize, usize) {
    if has_blue_edge(state, w) {
        return (2, 0, w);
    }
    let uncoloured = state
        .g
        .neighbours(w)
        .filter(|&u| state.colour_of(Edge::new(w, u)).is_none())
        .count();
    if uncoloured <= 1 {
        (0, 0, w)
    } else {
        (1, uncoloured, w)
    }
}

/// Runs the whole procedure at the given root.
pub fn rooted_claim_colouring(
    g: &Graph,
    root: usize,
    config: &EngineConfig,
) -> Result<(EdgeColouring, ClaimMetadata), EngineError> {
    let mut state = ProcedureState::new(g, root, config)?;
    let mut checks_passed = 0usize;
    if state.check_invariants {
        state
            .check_assumptions()
            .map_err(EngineError::InvariantViolated)?;
        checks_passed += 1;
    }
    let mut steps = 0usize;
    while !state.is_complete() {
        process_orbit(&mut state)?;
        if state.check_invariants {
            checks_passed += 1;
        }
        steps += 1;
        if steps > g.n() {
            return Err(EngineError::Internal("procedure failed to terminate".into()));
        }
    }

    // Claim property (i): the rooted colour-preserving group must be
    // trivial.
    state.refresh();
    if !state.group.is_trivial() {
        return Err(EngineError::InvariantViolated(format!(
            "colour-preserving rooted group has order {}",
            state.group.order()
        )));
    }
    // (ii) all-red vertices: root alone or root plus one neighbour.
    let all_red = state.all_red_vertices();
    if !all_red.contains(&root) {
        return Err(EngineError::InvariantViolated("root is not fully red".into()));
    }
    let extra: Vec<usize> = all_red.iter().copied().filter(|&v| v != root).collect();
    match extra.as_slice() {
        [] => {}
        [x] if g.has_edge(root, *x) => {
            // (iii) every red degree 1..Δ occurs on N(root).
            let delta = state.delta;
            let mut seen = vec![false; delta + 1];
            for w in g.neighbours(root) {
                let red = g
                    .neighbours(w)
                    .filter(|&u| state.colour_of(Edge::new(w, u)) == Some(Colour::Red))
                    .count();
                if red <= delta {
                    seen[red] = true;
                }
            }
            if !(1..=delta).all(|k| seen[k]) {
                return Err(EngineError::InvariantViolated(
                    "red degrees of the root neighbourhood miss a value".into(),
                ));
            }
        }
        _ => {
            return Err(EngineError::InvariantViolated(format!(
                "all-red vertices {all_red:?} violate the claim"
            )));
        }
    }

    let trace = state.trace.clone();
    let colouring = state.into_colouring();
    Ok((colouring, ClaimMetadata { root, all_red, trace, checks_passed }))
}
