//! Two-colourings of edge sets and the colouring file format.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ColouringError;
use crate::graph::{Edge, Graph};
use crate::graph6::{parse_graph6, write_graph6};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn flipped(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Colour::Red => 'R',
            Colour::Blue => 'B',
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A total red/blue colouring of a graph's edge set.
///
/// Stores the host's canonical edge list alongside the colour of each
/// edge, so lookups by edge and by index are both cheap and the
/// serialized form is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColouring {
    edges: Vec<Edge>,
    colours: Vec<Colour>,
}

impl EdgeColouring {
    /// Monochromatic colouring of `g`.
    pub fn uniform(g: &Graph, colour: Colour) -> EdgeColouring {
        let edges = g.edges();
        let colours = vec![colour; edges.len()];
        EdgeColouring { edges, colours }
    }

    /// Builds a colouring from the host graph and one colour per edge
    /// in canonical edge order.
    pub fn from_colours(g: &Graph, colours: Vec<Colour>) -> EdgeColouring {
        let edges = g.edges();
        assert_eq!(edges.len(), colours.len(), "one colour per edge");
        EdgeColouring { edges, colours }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn colour_of(&self, e: Edge) -> Colour {
        let idx = self.edge_index(e).expect("edge belongs to the host graph");
        self.colours[idx]
    }

    pub fn count(&self, colour: Colour) -> usize {
        self.colours.iter().filter(|&&c| c == colour).count()
    }

    /// Number of `colour` edges incident to `v`.
    pub fn incident_count(&self, v: usize, colour: Colour) -> usize {
        self.edges
            .iter()
            .zip(&self.colours)
            .filter(|(e, &c)| c == colour && (e.u() == v || e.v() == v))
            .count()
    }

    /// New colouring with one edge recoloured.
    pub fn with_recoloured(&self, e: Edge, colour: Colour) -> EdgeColouring {
        let mut out = self.clone();
        let idx = out.edge_index(e).expect("edge belongs to the host graph");
        out.colours[idx] = colour;
        out
    }

    /// Red and blue swapped everywhere.
    pub fn flipped(&self) -> EdgeColouring {
        EdgeColouring {
            edges: self.edges.clone(),
            colours: self.colours.iter().map(|c| c.flipped()).collect(),
        }
    }

    /// Serializes to the colouring file format: a `graph6 <string>`
    /// header line, then one `u v R|B` line per edge in canonical
    /// order.
    pub fn to_file_string(&self, g: &Graph) -> String {
        let mut out = format!("graph6 {}\n", write_graph6(g));
        for (e, c) in self.edges.iter().zip(&self.colours) {
            out.push_str(&format!("{} {} {}\n", e.u(), e.v(), c));
        }
        out
    }

    /// Parses a colouring file, returning the host graph and the
    /// colouring. Every edge of the graph must be coloured exactly
    /// once; edge lines may appear in any order.
    pub fn from_file_string(text: &str) -> Result<(Graph, EdgeColouring), ColouringError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(ColouringError::EmptyFile)?;
        let g6 = header
            .strip_prefix("graph6 ")
            .ok_or(ColouringError::MissingHeader)?
            .trim();
        let g = parse_graph6(g6)?;
        let edges = g.edges();
        let mut colours: Vec<Option<Colour>> = vec![None; edges.len()];
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (u, v, c) = match (it.next(), it.next(), it.next(), it.next()) {
                (Some(u), Some(v), Some(c), None) => (u, v, c),
                _ => return Err(ColouringError::BadEdgeLine(line.to_string())),
            };
            let u: usize = u.parse().map_err(|_| ColouringError::BadEdgeLine(line.to_string()))?;
            let v: usize = v.parse().map_err(|_| ColouringError::BadEdgeLine(line.to_string()))?;
            let colour = match c {
                "R" => Colour::Red,
                "B" => Colour::Blue,
                _ => return Err(ColouringError::BadEdgeLine(line.to_string())),
            };
            if u == v || u >= g.n() || v >= g.n() || !g.has_edge(u, v) {
                return Err(ColouringError::UnknownEdge(u, v));
            }
            let e = Edge::new(u, v);
            let idx = edges.binary_search(&e).expect("edge exists");
            if colours[idx].is_some() {
                return Err(ColouringError::DuplicateEdge(e.u(), e.v()));
            }
            colours[idx] = Some(colour);
        }
        let missing = colours.iter().filter(|c| c.is_none()).count();
        if missing > 0 {
            return Err(ColouringError::Incomplete { missing });
        }
        let colouring = EdgeColouring {
            edges,
            colours: colours.into_iter().map(Option::unwrap).collect(),
        };
        Ok((g, colouring))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::cycle;

    #[test]
    fn colour_lookups() {
        let g = cycle(4);
        let mut colours = vec![Colour::Red; 4];
        colours[0] = Colour::Blue; // edge (0,1)
        let c = EdgeColouring::from_colours(&g, colours);
        assert_eq!(c.colour_of(Edge::new(0, 1)), Colour::Blue);
        assert_eq!(c.colour_of(Edge::new(2, 3)), Colour::Red);
        assert_eq!(c.count(Colour::Blue), 1);
        assert_eq!(c.incident_count(0, Colour::Blue), 1);
        assert_eq!(c.incident_count(2, Colour::Blue), 0);
        assert_eq!(c.flipped().count(Colour::Blue), 3);
    }

    #[test]
    fn file_round_trip() {
        let g = cycle(5);
        let mut colours = vec![Colour::Red; 5];
        colours[1] = Colour::Blue;
        let c = EdgeColouring::from_colours(&g, colours);
        let text = c.to_file_string(&g);
        let (g2, c2) = EdgeColouring::from_file_string(&text).unwrap();
        assert_eq!(g2, g);
        assert_eq!(c2, c);
    }

    #[test]
    fn file_parse_errors() {
        let g = cycle(4);
        let c = EdgeColouring::uniform(&g, Colour::Red);
        let text = c.to_file_string(&g);

        // Drop one edge line: incomplete.
        let mut lines: Vec<&str> = text.lines().collect();
        lines.remove(2);
        let short = lines.join("\n");
        assert!(matches!(
            EdgeColouring::from_file_string(&short),
            Err(ColouringError::Incomplete { missing: 1 })
        ));

        // Colour a non-edge.
        let bad = format!("{}0 2 R\n", text);
        assert!(matches!(
            EdgeColouring::from_file_string(&bad),
            Err(ColouringError::UnknownEdge(0, 2))
        ));

        assert!(EdgeColouring::from_file_string("").is_err());
        assert!(EdgeColouring::from_file_string("nonsense\n").is_err());
    }
}
