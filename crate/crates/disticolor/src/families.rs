//! Generators for the named graph families.
//!
//! Vertex numbering conventions, fixed so that colourings and reports
//! are reproducible:
//! - `complete(n)`: vertices 0..n-1.
//! - `complete_bipartite(n)`: parts {0..n-1} and {n..2n-1}.
//! - `cycle(n)`: edges (i, i+1 mod n).
//! - `circulant(n, offsets)`: i ~ i±k mod n for each offset k.
//! - `petersen`: outer 5-cycle 0..4, inner 5-cycle 5..9 with step 2,
//!   spokes i — i+5 (the Kneser(5,2) graph).
//! - `hypercube(d)`: vertices are d-bit words, edges flip one bit.
//! - `prism(n)`: two n-cycles 0..n-1 and n..2n-1 joined by rungs.
//! - `random_regular(n, d; seed)`: pairing model, rejecting loops,
//!   multi-edges and disconnected outcomes; deterministic per seed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::FamilyError;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Complete,
    CompleteBipartite,
    Cycle,
    Circulant,
    Petersen,
    Hypercube,
    Prism,
    RandomRegular,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Complete => "complete",
            Family::CompleteBipartite => "complete_bipartite",
            Family::Cycle => "cycle",
            Family::Circulant => "circulant",
            Family::Petersen => "petersen",
            Family::Hypercube => "hypercube",
            Family::Prism => "prism",
            Family::RandomRegular => "random_regular",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub params: Vec<usize>,
    pub seed: Option<u64>,
}

impl FamilySpec {
    pub fn new(family: Family, params: Vec<usize>) -> FamilySpec {
        FamilySpec { family, params, seed: None }
    }

    pub fn seeded(family: Family, params: Vec<usize>, seed: u64) -> FamilySpec {
        FamilySpec { family, params, seed: Some(seed) }
    }
}

fn invalid(family: Family, reason: impl Into<String>) -> FamilyError {
    FamilyError::InvalidParams { family: family.to_string(), reason: reason.into() }
}

pub fn generate(spec: &FamilySpec) -> Result<Graph, FamilyError> {
    let p = &spec.params;
    match spec.family {
        Family::Complete => {
            let [n] = expect_params(spec, p)?;
            if !(1..=62).contains(&n) {
                return Err(invalid(spec.family, "need 1 <= n <= 62"));
            }
            Ok(complete(n))
        }
        Family::CompleteBipartite => {
            let [n] = expect_params(spec, p)?;
            if n < 1 || 2 * n > 62 {
                return Err(invalid(spec.family, "need 1 <= n <= 31"));
            }
            Ok(complete_bipartite(n))
        }
        Family::Cycle => {
            let [n] = expect_params(spec, p)?;
            if !(3..=62).contains(&n) {
                return Err(invalid(spec.family, "need 3 <= n <= 62"));
            }
            Ok(cycle(n))
        }
        Family::Circulant => {
            if p.len() < 2 {
                return Err(invalid(spec.family, "need n and at least one offset"));
            }
            let n = p[0];
            let offsets = &p[1..];
            if !(3..=62).contains(&n) {
                return Err(invalid(spec.family, "need 3 <= n <= 62"));
            }
            if offsets.iter().any(|&k| k == 0 || k > n / 2) {
                return Err(invalid(spec.family, "offsets must lie in 1..=n/2"));
            }
            let mut sorted = offsets.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != offsets.len() {
                return Err(invalid(spec.family, "offsets must be distinct"));
            }
            Ok(circulant(n, &sorted))
        }
        Family::Petersen => {
            if !p.is_empty() {
                return Err(invalid(spec.family, "takes no parameters"));
            }
            Ok(petersen())
        }
        Family::Hypercube => {
            let [d] = expect_params(spec, p)?;
            if d < 1 || (1usize << d) > 62 {
                return Err(invalid(spec.family, "need 1 <= d <= 5"));
            }
            Ok(hypercube(d))
        }
        Family::Prism => {
            let [n] = expect_params(spec, p)?;
            if n < 3 || 2 * n > 62 {
                return Err(invalid(spec.family, "need 3 <= n <= 31"));
            }
            Ok(prism(n))
        }
        Family::RandomRegular => {
            let [n, d] = expect_params(spec, p)?;
            let seed = spec.seed.unwrap_or(0);
            random_regular(n, d, seed)
        }
    }
}

fn expect_params<const K: usize>(spec: &FamilySpec, p: &[usize]) -> Result<[usize; K], FamilyError> {
    p.to_vec()
        .try_into()
        .map_err(|_| invalid(spec.family, format!("expected {K} parameter(s), got {}", p.len())))
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges).expect("complete graph is simple")
}

pub fn complete_bipartite(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in n..2 * n {
            edges.push((u, v));
        }
    }
    Graph::new(2 * n, &edges).expect("complete bipartite graph is simple")
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).expect("cycle is simple for n >= 3")
}

pub fn circulant(n: usize, offsets: &[usize]) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for &k in offsets {
            let j = (i + k) % n;
            if i < j {
                edges.push((i, j));
            } else if j < i && !edges.contains(&(j, i)) {
                edges.push((j, i));
            }
        }
    }
    Graph::new(n, &edges).expect("circulant is simple for valid offsets")
}

pub fn petersen() -> Graph {
    let mut edges = vec![];
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    Graph::new(10, &edges).expect("petersen is simple")
}

pub fn hypercube(d: usize) -> Graph {
    let n = 1usize << d;
    let mut edges = Vec::new();
    for v in 0..n {
        for bit in 0..d {
            let w = v ^ (1 << bit);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    Graph::new(n, &edges).expect("hypercube is simple")
}

pub fn prism(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((n + i, n + (i + 1) % n));
        edges.push((i, n + i));
    }
    Graph::new(2 * n, &edges).expect("prism is simple")
}

// The pairing model only keeps simple outcomes, which for d = 5 is
// roughly one attempt in four hundred; the bound leaves generous room
// before giving up.
const PAIRING_ATTEMPTS: usize = 50_000;

/// Connected d-regular graph on n vertices via the pairing model.
///
/// Each attempt shuffles n·d half-edge stubs and pairs them up; the
/// attempt is rejected if it creates a loop, a multi-edge, or a
/// disconnected graph. Deterministic for a given seed. Never returns
/// a non-regular graph: if every attempt fails the error says so.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, FamilyError> {
    if !(1..=62).contains(&n) || d >= n || !(n * d).is_multiple_of(2) {
        return Err(invalid(
            Family::RandomRegular,
            "need 1 <= n <= 62, d < n, and n*d even",
        ));
    }
    if d == 0 {
        return if n == 1 {
            Ok(Graph::trivial())
        } else {
            Err(invalid(Family::RandomRegular, "d = 0 is disconnected for n > 1"))
        };
    }
    let mut rng = SplitMix64::new(seed);
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        let mut stubs: Vec<usize> = (0..n * d).map(|s| s / d).collect();
        // Fisher-Yates with the seeded generator.
        for i in (1..stubs.len()).rev() {
            let j = (rng.next() % (i as u64 + 1)) as usize;
            stubs.swap(i, j);
        }
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || edges.contains(&(a.min(b), a.max(b))) {
                continue 'attempt;
            }
            edges.push((a.min(b), a.max(b)));
        }
        let g = Graph::new(n, &edges).expect("pairing produced a simple graph");
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(FamilyError::GenerationFailed { n, d, seed, attempts: PAIRING_ATTEMPTS })
}

/// splitmix64: tiny, stable PRNG so seeded generation never changes
/// behind a dependency upgrade.
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub(crate) fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}
