//! Distinguishing 2-edge-colourings of finite connected regular
//! graphs.
//!
//! A colouring is *distinguishing* if the identity is the only
//! automorphism mapping every edge to an edge of the same colour. For
//! connected regular graphs a red/blue colouring always suffices,
//! except for a short list of small graphs (K2..K5, K2,2, K3,3, C5),
//! and this crate both constructs such colourings and certifies every
//! output against a brute-force oracle.
//!
//! Layout:
//! - [`graph`], [`graph6`], [`families`]: graphs, serialization,
//!   generators.
//! - [`perm`], [`symmetry`]: explicit permutation groups,
//!   automorphism search, orbits, the verifier.
//! - [`engine`]: the constructive colouring engine (base cases, the
//!   rooted orbit procedure, final recolouring).
//! - [`oracle`]: exhaustive search ground truth — distinguishing
//!   colourings, the distinguishing index, asymmetric spanning
//!   subgraphs, and the connected-regular-graph corpus.

pub mod colouring;
pub mod engine;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod oracle;
pub mod perm;
pub mod symmetry;

pub use colouring::{Colour, EdgeColouring};
pub use graph::{Edge, Graph};
