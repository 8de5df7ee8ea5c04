//! graph6 text format for graphs on up to 62 vertices.
//!
//! Layout: one header byte `n + 63`, then the upper triangle of the
//! adjacency matrix in column-major order — bit (i, j) for j = 1..n-1,
//! i = 0..j-1 — packed big-endian into 6-bit groups, each stored as a
//! printable byte offset by 63. Unused bits in the last group must be
//! zero. Multi-byte headers (n > 62) are out of scope.

use crate::error::Graph6Error;
use crate::graph::Graph;

const OFFSET: u8 = 63;

/// Decodes one graph6 line.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let (&header, payload) = bytes.split_first().ok_or(Graph6Error::Empty)?;
    if header == 126 {
        return Err(Graph6Error::UnsupportedOrder);
    }
    if !(OFFSET..126).contains(&header) {
        return Err(Graph6Error::ByteOutOfRange(header));
    }
    let n = (header - OFFSET) as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if payload.len() != expected {
        return Err(Graph6Error::WrongLength { expected, got: payload.len() });
    }

    let mut edges = Vec::new();
    let mut bit_index = 0usize;
    let pairs = ColumnMajorPairs::new(n);
    for &byte in payload {
        if !(OFFSET..=126).contains(&byte) {
            return Err(Graph6Error::ByteOutOfRange(byte));
        }
        let group = byte - OFFSET;
        for k in (0..6).rev() {
            let bit = group >> k & 1;
            if bit_index >= nbits {
                if bit != 0 {
                    return Err(Graph6Error::TrailingBits);
                }
            } else if bit == 1 {
                edges.push(pairs.nth_pair(bit_index));
            }
            bit_index += 1;
        }
    }
    Ok(Graph::new(n, &edges).expect("decoded pairs are in range and distinct"))
}

/// Encodes a graph as one graph6 line.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    assert!(n <= 62, "graph6 single-byte header supports n <= 62");
    let mut out = vec![OFFSET + n as u8];
    let mut group = 0u8;
    let mut filled = 0u8;
    for j in 1..n {
        for i in 0..j {
            group = group << 1 | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(OFFSET + group);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(OFFSET + (group << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Maps a column-major bit index back to its vertex pair.
struct ColumnMajorPairs {
    n: usize,
}

impl ColumnMajorPairs {
    fn new(n: usize) -> Self {
        ColumnMajorPairs { n }
    }

    fn nth_pair(&self, index: usize) -> (usize, usize) {
        // Column j holds j bits; index within the triangle.
        let mut rem = index;
        for j in 1..self.n {
            if rem < j {
                return (rem, j);
            }
            rem -= j;
        }
        unreachable!("bit index {index} beyond triangle for n={}", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, Family, FamilySpec};

    #[test]
    fn decodes_hand_built_strings() {
        // 'A' = 65 -> n = 2; '_' = 95 -> bits 100000: the single edge.
        let k2 = parse_graph6("A_").unwrap();
        assert_eq!(k2.n(), 2);
        assert!(k2.has_edge(0, 1));

        // 'B' -> n = 3; 'w' = 119 -> bits 111000: all three pairs.
        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!((k3.n(), k3.edge_count()), (3, 3));

        // 'C' -> n = 4; 'l' = 108 -> bits 101101 over pair order
        // (01)(02)(12)(03)(13)(23): edges 01, 12, 03, 23 = C4.
        let c4 = parse_graph6("Cl").unwrap();
        assert_eq!(c4.n(), 4);
        for (a, b) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            assert!(c4.has_edge(a, b), "missing edge ({a},{b})");
        }
        assert_eq!(c4.edge_count(), 4);

        // '@' = 64 -> n = 1, no payload.
        let k1 = parse_graph6("@").unwrap();
        assert_eq!((k1.n(), k1.edge_count()), (1, 0));

        // '?' = 63 -> the empty graph.
        let empty = parse_graph6("?").unwrap();
        assert_eq!(empty.n(), 0);
        assert_eq!(write_graph6(&empty), "?");
    }

    #[test]
    fn encodes_to_known_strings() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(write_graph6(&k2), "A_");
        let k3 = Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(write_graph6(&k3), "Bw");
        assert_eq!(write_graph6(&Graph::trivial()), "@");
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(parse_graph6("~??"), Err(Graph6Error::UnsupportedOrder));
        assert!(matches!(parse_graph6("A"), Err(Graph6Error::WrongLength { .. })));
        assert!(matches!(parse_graph6("A_\u{7f}"), Err(Graph6Error::WrongLength { .. })));
        // n = 2 with the unused 5 trailing bits set.
        assert_eq!(parse_graph6("A~"), Err(Graph6Error::TrailingBits));
        assert_eq!(parse_graph6("B\x20"), Err(Graph6Error::ByteOutOfRange(0x20)));
    }

    #[test]
    fn round_trips_families() {
        let specs = [
            FamilySpec::new(Family::Petersen, vec![]),
            FamilySpec::new(Family::Cycle, vec![7]),
            FamilySpec::new(Family::Complete, vec![6]),
            FamilySpec::new(Family::Hypercube, vec![4]),
            FamilySpec::new(Family::CompleteBipartite, vec![4]),
        ];
        for spec in &specs {
            let g = generate(spec).unwrap();
            let encoded = write_graph6(&g);
            assert_eq!(parse_graph6(&encoded).unwrap(), g, "{encoded}");
        }
    }
}
