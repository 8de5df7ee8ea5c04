//! Vertex permutations and explicit permutation groups.
//!
//! Groups are stored as full sorted element sets rather than generator
//! sets. At desk scale this keeps subgroup filtering (stabilizers,
//! colour-preserving subsets) and orbit computation trivially correct.

use std::fmt;

/// A bijection on 0..n-1. `images[v]` is the image of `v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n as u16).collect() }
    }

    /// Builds a permutation from an image list, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Option<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in images {
            if im >= n || seen[im] {
                return None;
            }
            seen[im] = true;
        }
        Some(Permutation { images: images.iter().map(|&v| v as u16).collect() })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.images[v] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(v, &im)| v as u16 == im)
    }

    /// `self` after `other`: (self ∘ other)(v) = self(other(v)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&v| self.images[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.images.len()];
        for (v, &im) in self.images.iter().enumerate() {
            images[im as usize] = v as u16;
        }
        Permutation { images }
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    /// Cycle notation, with fixed points omitted; `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut v = start;
            loop {
                seen[v] = true;
                out.push_str(&v.to_string());
                v = self.apply(v);
                if v == start {
                    break;
                }
                out.push(' ');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}

/// An explicit finite permutation group: sorted, duplicate-free element
/// set containing the identity and closed under composition/inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup { degree, elements: vec![Permutation::identity(degree)] }
    }

    /// Wraps an element list believed to form a group. Sorts and
    /// deduplicates; group axioms are the caller's responsibility and
    /// can be audited with [`PermGroup::verify_axioms`].
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> PermGroup {
        elements.sort_unstable();
        elements.dedup();
        debug_assert!(elements.iter().any(Permutation::is_identity));
        PermGroup { degree, elements }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Subgroup of elements satisfying `keep`. The predicate must be
    /// closed under composition and inverse for the result to be a
    /// group; all callers in this crate filter by properties that are.
    pub fn filter(&self, keep: impl Fn(&Permutation) -> bool) -> PermGroup {
        PermGroup {
            degree: self.degree,
            elements: self.elements.iter().filter(|p| keep(p)).cloned().collect(),
        }
    }

    /// Subgroup fixing vertex `v`.
    pub fn stabilizer(&self, v: usize) -> PermGroup {
        self.filter(|p| p.apply(v) == v)
    }

    /// Checks identity membership, closure and inverses by pairwise
    /// composition. Quadratic in the order; meant for tests.
    pub fn verify_axioms(&self) -> bool {
        if !self.elements.iter().any(Permutation::is_identity) {
            return false;
        }
        for p in &self.elements {
            if !self.contains(&p.inverse()) {
                return false;
            }
            for q in &self.elements {
                if !self.contains(&p.compose(q)) {
                    return false;
                }
            }
        }
        true
    }

    /// Orbit partition on 0..degree-1; blocks sorted internally, listed
    /// by minimum element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if assigned[start] {
                continue;
            }
            let mut block: Vec<usize> = self
                .elements
                .iter()
                .map(|p| p.apply(start))
                .collect();
            block.sort_unstable();
            block.dedup();
            for &v in &block {
                assigned[v] = true;
            }
            out.push(block);
        }
        out
    }

    /// Orbit of a single vertex.
    pub fn orbit_of(&self, v: usize) -> Vec<usize> {
        let mut block: Vec<usize> = self.elements.iter().map(|p| p.apply(v)).collect();
        block.sort_unstable();
        block.dedup();
        block
    }
}
