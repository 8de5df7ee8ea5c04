//! The constructive colouring engine.
//!
//! Dispatch for a connected regular graph: exception check, then
//! degree-2 cycles, degree-3 search, complete graphs, complete
//! bipartite graphs, and finally the general rooted orbit procedure
//! with its closing recolouring. Every colouring the engine returns
//! has been verified; on any internal failure the engine falls back to
//! the exhaustive oracle and says so in the report.

mod bases;
mod claim;
mod finalize;

pub use bases::{
    complete_bipartite_colouring, complete_graph_colouring, cycle_colouring, exception_name,
    is_complete_bipartite,
};
pub use claim::{
    assign_labels, colour_forward_edges, process_orbit, rooted_claim_colouring, ClaimMetadata,
    Labeling, OrbitProfile, ProcedureState, SplitPlan,
};
pub use finalize::finalize_recolouring;

use serde::Serialize;
use std::fmt;

use crate::colouring::EdgeColouring;
use crate::error::SymmetryError;
use crate::graph::Graph;
use crate::oracle::{self, OracleError};
use crate::symmetry::{automorphisms, nontrivial_colour_preserver, DEFAULT_AUT_CAP};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exception,
    BaseCycle,
    BaseCubicSearch,
    CompleteGraph,
    CompleteBipartite,
    ClaimProcedure,
    SearchFallback,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Method::Exception => "exception",
            Method::BaseCycle => "base-cycle",
            Method::BaseCubicSearch => "base-cubic-search",
            Method::CompleteGraph => "complete-graph",
            Method::CompleteBipartite => "complete-bipartite",
            Method::ClaimProcedure => "claim-procedure",
            Method::SearchFallback => "search-fallback",
        };
        f.write_str(name)
    }
}

/// What the engine produced and how.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColouringReport {
    pub method: Method,
    pub colouring: EdgeColouring,
    /// Always true for emitted reports; recorded for the file format.
    pub verified: bool,
    /// |Aut(G)|, when it fits under the cap.
    pub group_order: Option<u64>,
    /// Per-step decisions, deterministic for a given input.
    pub trace: Vec<String>,
    pub fallback_reason: Option<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not regular")]
    NotRegular,
    #[error("exception graph {0}: no distinguishing 2-colouring exists")]
    Exception(&'static str),
    #[error("{0}")]
    Unsupported(String),
    #[error("procedure invariant violated: {0}")]
    InvariantViolated(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error("oracle failure: {0}")]
    Oracle(#[from] OracleError),
}

/// Tunables threaded through the engine.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Bound on explicitly enumerated automorphism groups.
    pub aut_cap: usize,
    /// Node budget for oracle searches (fallback and base cases).
    pub search_budget: u64,
    /// Re-check the procedure assumptions after every orbit step.
    pub check_invariants: bool,
    /// Root tried first by the claim procedure.
    pub preferred_root: Option<usize>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            aut_cap: DEFAULT_AUT_CAP,
            search_budget: oracle::DEFAULT_BUDGET,
            check_invariants: true,
            preferred_root: None,
        }
    }
}

/// Constructs a verified distinguishing 2-colouring of a connected
/// regular graph, or reports why none can be produced.
pub fn distinguishing_two_colouring(g: &Graph) -> Result<ColouringReport, EngineError> {
    distinguishing_two_colouring_with(g, &EngineConfig::default())
}

pub fn distinguishing_two_colouring_with(
    g: &Graph,
    config: &EngineConfig,
) -> Result<ColouringReport, EngineError> {
    if !g.is_connected() {
        return Err(EngineError::NotConnected);
    }
    let degree = g.regular_degree().ok_or(EngineError::NotRegular)?;
    let n = g.n();
    if n == 1 {
        // K1: the empty colouring breaks the trivial group.
        return finish(
            g,
            Method::CompleteGraph,
            EdgeColouring::uniform(g, crate::colouring::Colour::Red),
            vec!["trivial graph: empty colouring".into()],
            None,
            config,
        );
    }
    if let Some(name) = exception_name(g) {
        return Err(EngineError::Exception(name));
    }

    match degree {
        2 => {
            let c = bases::cycle_colouring_on(g)?;
            finish(g, Method::BaseCycle, c, vec![format!("cycle C{n}")], None, config)
        }
        3 => {
            // Cubic non-exception graphs always admit a 2-colouring;
            // take the lexicographically first.
            let found =
                oracle::find_distinguishing_colouring_capped(g, 2, config.search_budget, config.aut_cap)?
                    .ok_or_else(|| {
                        EngineError::Internal("cubic non-exception graph with no 2-colouring".into())
                    })?;
            let c = oracle::indices_to_two_colouring(g, &found);
            finish(
                g,
                Method::BaseCubicSearch,
                c,
                vec!["cubic base case: lexicographically first colouring".into()],
                None,
                config,
            )
        }
        _ if degree == n - 1 => {
            let c = bases::complete_graph_colouring(n)?;
            finish(
                g,
                Method::CompleteGraph,
                c,
                vec![format!("complete graph K{n}: red asymmetric spanning subgraph")],
                None,
                config,
            )
        }
        _ if bases::is_complete_bipartite(g).is_some() => {
            let c = bases::complete_bipartite_colouring_on(g, config.search_budget, config.aut_cap)?;
            finish(
                g,
                Method::CompleteBipartite,
                c,
                vec![format!("complete bipartite K_{{{0},{0}}}", n / 2)],
                None,
                config,
            )
        }
        _ => claim_route(g, config),
    }
}

/// The general case: run the rooted procedure, retrying every root on
/// an invariant violation, and fall back to the oracle search if no
/// root succeeds.
fn claim_route(g: &Graph, config: &EngineConfig) -> Result<ColouringReport, EngineError> {
    let mut failures: Vec<String> = Vec::new();
    let mut roots: Vec<usize> = g.vertices().collect();
    if let Some(r) = config.preferred_root {
        if r < g.n() {
            roots.retain(|&v| v != r);
            roots.insert(0, r);
        }
    }
    for root in roots {
        match try_root(g, root, config) {
            Ok((c, mut trace)) => {
                if nontrivial_colour_preserver(g, &c).is_none() {
                    trace.insert(0, format!("claim procedure at root {root}"));
                    return finish(g, Method::ClaimProcedure, c, trace, None, config);
                }
                failures.push(format!("root {root}: output failed verification"));
            }
            Err(e) => failures.push(format!("root {root}: {e}")),
        }
    }
    // Every root failed: exhaustive fallback, reason logged.
    let reason = failures.join("; ");
    let found = oracle::find_distinguishing_colouring_capped(g, 2, config.search_budget, config.aut_cap)?
        .ok_or_else(|| {
            EngineError::Internal(format!(
                "no 2-colouring found by exhaustive search; procedure failures: {reason}"
            ))
        })?;
    let c = oracle::indices_to_two_colouring(g, &found);
    finish(
        g,
        Method::SearchFallback,
        c,
        vec!["exhaustive fallback".into()],
        Some(reason),
        config,
    )
}

fn try_root(
    g: &Graph,
    root: usize,
    config: &EngineConfig,
) -> Result<(EdgeColouring, Vec<String>), EngineError> {
    let (c, meta) = rooted_claim_colouring(g, root, config)?;
    let mut trace = meta.trace.clone();
    trace.push(format!("all-red vertices {:?}", meta.all_red));
    let finalized = finalize_recolouring(g, &c, &meta, config)?;
    if finalized == c {
        trace.push("finalize: claim colouring kept".into());
    } else {
        let changed: Vec<String> = c
            .edges()
            .iter()
            .zip(c.colours().iter().zip(finalized.colours()))
            .filter(|(_, (a, b))| a != b)
            .map(|(e, _)| e.to_string())
            .collect();
        trace.push(format!("finalize: recoloured edge(s) {changed:?} blue"));
    }
    Ok((finalized, trace))
}

/// Verifies and packages a colouring. The engine never emits an
/// unverified colouring: verification failure here is an error.
fn finish(
    g: &Graph,
    method: Method,
    colouring: EdgeColouring,
    trace: Vec<String>,
    fallback_reason: Option<String>,
    config: &EngineConfig,
) -> Result<ColouringReport, EngineError> {
    if let Some(witness) = nontrivial_colour_preserver(g, &colouring) {
        return Err(EngineError::Internal(format!(
            "produced colouring preserved by {}",
            witness.cycle_string()
        )));
    }
    let group_order = match automorphisms(g, config.aut_cap) {
        Ok(grp) => Some(grp.order() as u64),
        Err(SymmetryError::GroupTooLarge { .. }) => None,
    };
    Ok(ColouringReport {
        method,
        colouring,
        verified: true,
        group_order,
        trace,
        fallback_reason,
    })
}

impl ColouringReport {
    /// Key/value report plus trace, deterministic for a given input.
    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = String::new();
        out.push_str(&format!("graph6: {}\n", crate::graph6::write_graph6(g)));
        out.push_str(&format!("n: {}\n", g.n()));
        out.push_str(&format!(
            "degree: {}\n",
            g.regular_degree().map_or("-".into(), |d| d.to_string())
        ));
        out.push_str(&format!("method: {}\n", self.method));
        out.push_str(&format!("verified: {}\n", self.verified));
        out.push_str(&format!(
            "group-order: {}\n",
            self.group_order.map_or("over-cap".into(), |o| o.to_string())
        ));
        out.push_str(&format!(
            "fallback-reason: {}\n",
            self.fallback_reason.as_deref().unwrap_or("-")
        ));
        out.push_str("trace:\n");
        for line in &self.trace {
            out.push_str(&format!("  - {line}\n"));
        }
        out.push_str("colouring:\n");
        for line in self.colouring.to_file_string(g).lines() {
            out.push_str(&format!("  {line}\n"));
        }
        out
    }
}
