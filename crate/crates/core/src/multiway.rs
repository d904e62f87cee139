//! Vertex multiway cuts: exhaustive minimum search and the trivial fallback.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{is_multiway_cut, Graph, TerminalSet, Vertex, VertexSet};

/// A vertex set whose removal leaves at most one terminal per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiwayCut {
    pub vertices: VertexSet,
    /// Set when the search proved no smaller cut exists.
    pub certified_minimum: bool,
}

impl MultiwayCut {
    /// Wraps a user-supplied set after checking that it is a multiway cut.
    pub fn checked(g: &Graph, k: &TerminalSet, vertices: VertexSet) -> Result<MultiwayCut> {
        if let Some(&v) = vertices.iter().find(|v| !g.contains(**v)) {
            return Err(Error::UnknownVertex(v));
        }
        if !is_multiway_cut(g, k, &vertices) {
            return Err(Error::invalid("vertex set is not a multiway cut for the terminals"));
        }
        Ok(MultiwayCut {
            vertices,
            certified_minimum: false,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// `K` minus its largest terminal.
pub fn default_multiway_cut(_g: &Graph, k: &TerminalSet) -> MultiwayCut {
    let mut vertices = k.clone();
    vertices.pop_last();
    MultiwayCut {
        vertices,
        certified_minimum: false,
    }
}

struct Search<'a> {
    g: &'a Graph,
    pos: HashMap<Vertex, usize>,
    is_terminal: Vec<bool>,
    removed: Vec<bool>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    /// A path between two terminals in `g - removed`, or `None` if cut.
    fn uncut_path(&self) -> Option<Vec<usize>> {
        let n = self.g.num_vertices();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        for s in 0..n {
            if !self.is_terminal[s] || self.removed[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                if v != s && self.is_terminal[v] {
                    let mut path = vec![v];
                    let mut at = v;
                    while let Some(p) = parent[at] {
                        path.push(p);
                        at = p;
                    }
                    return Some(path);
                }
                for (u, _) in self.g.neighbors(self.g.vertices()[v]) {
                    let j = self.pos[&u];
                    if !self.removed[j] && !seen[j] {
                        seen[j] = true;
                        parent[j] = Some(v);
                        queue.push_back(j);
                    }
                }
            }
        }
        None
    }

    /// Depth-first over index-increasing combinations of exactly `size`.
    fn extend(&mut self, size: usize, next: usize) -> bool {
        let Some(path) = self.uncut_path() else {
            return self.chosen.len() == size;
        };
        if self.chosen.len() == size || !path.iter().any(|&v| v >= next) {
            return false;
        }
        let n = self.g.num_vertices();
        for v in next..n {
            if n - v < size - self.chosen.len() {
                break;
            }
            self.removed[v] = true;
            self.chosen.push(v);
            if self.extend(size, v + 1) {
                return true;
            }
            self.chosen.pop();
            self.removed[v] = false;
        }
        false
    }
}

/// Lexicographically least cut of minimum size, found by iterative deepening
/// up to `budget` vertices. Branches whose remaining choices cannot hit some
/// still-connected terminal pair are pruned.
pub fn minimum_multiway_cut(g: &Graph, k: &TerminalSet, budget: usize) -> Option<MultiwayCut> {
    let pos: HashMap<Vertex, usize> = g.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut search = Search {
        g,
        is_terminal: g.vertices().iter().map(|v| k.contains(v)).collect(),
        pos,
        removed: vec![false; g.num_vertices()],
        chosen: Vec::new(),
    };
    for size in 0..=budget.min(g.num_vertices()) {
        if search.extend(size, 0) {
            let vertices = search.chosen.iter().map(|&i| g.vertices()[i]).collect();
            return Some(MultiwayCut {
                vertices,
                certified_minimum: true,
            });
        }
    }
    None
}

/// Parses the `CUT s` file format: a header then one vertex id per line.
/// Blank lines and `#` comments are ignored.
pub fn parse_cut(text: &str) -> Result<VertexSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing CUT header"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("CUT") {
        return Err(Error::parse(hl, "expected `CUT <size>`"));
    }
    let size: usize = tok
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(hl, "expected `CUT <size>`"))?;
    if tok.next().is_some() {
        return Err(Error::parse(hl, "trailing tokens after cut size"));
    }
    let mut out = VertexSet::new();
    let mut count = 0;
    for (ln, line) in lines {
        let v: Vertex = line
            .parse()
            .map_err(|_| Error::parse(ln, format!("expected a vertex id, got `{line}`")))?;
        out.insert(v);
        count += 1;
    }
    if count != size {
        return Err(Error::Validation(format!(
            "cut header announces {size} vertices but {count} are listed"
        )));
    }
    Ok(out)
}

pub fn format_cut(cut: &VertexSet) -> String {
    let mut s = format!("CUT {}\n", cut.len());
    for v in cut {
        s.push_str(&format!("{v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{path3, set};

    fn star() -> Graph {
        Graph::new([1, 2, 3, 4], [(1, 2, 1), (1, 3, 1), (1, 4, 1)]).unwrap()
    }

    #[test]
    fn minimum_examples() {
        let cut = minimum_multiway_cut(&path3(), &set(&[1, 3]), 3).unwrap();
        assert_eq!(cut.vertices, set(&[1]));
        assert!(cut.certified_minimum);
        let cut = minimum_multiway_cut(&star(), &set(&[2, 3, 4]), 3).unwrap();
        assert_eq!(cut.vertices, set(&[1]));
        let cut = minimum_multiway_cut(&path3(), &set(&[2]), 0).unwrap();
        assert!(cut.is_empty());
    }

    #[test]
    fn budget_too_small() {
        assert_eq!(minimum_multiway_cut(&path3(), &set(&[1, 3]), 0), None);
    }

    #[test]
    fn default_examples() {
        let g = path3();
        assert_eq!(default_multiway_cut(&g, &set(&[1, 3])).vertices, set(&[1]));
        assert!(default_multiway_cut(&g, &set(&[])).is_empty());
        let single = Graph::new([7], []).unwrap();
        assert!(default_multiway_cut(&single, &set(&[7])).is_empty());
    }

    #[test]
    fn checked_rejects_non_cuts() {
        let g = path3();
        assert!(MultiwayCut::checked(&g, &set(&[1, 3]), set(&[])).is_err());
        assert!(MultiwayCut::checked(&g, &set(&[1, 3]), set(&[2])).is_ok());
        assert_eq!(
            MultiwayCut::checked(&g, &set(&[1, 3]), set(&[8])),
            Err(Error::UnknownVertex(8))
        );
    }

    #[test]
    fn cut_file_round_trip() {
        let cut = set(&[2, 5]);
        assert_eq!(parse_cut(&format_cut(&cut)).unwrap(), cut);
        assert!(matches!(parse_cut("CUT 2\n1\n"), Err(Error::Validation(_))));
        assert!(matches!(parse_cut("CUT x\n"), Err(Error::Parse { line: 1, .. })));
        assert_eq!(parse_cut("# c\nCUT 0\n").unwrap(), set(&[]));
    }
}
