//! Simple undirected graphs with dense, stable edge ids.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A simple undirected graph. Edge `i` is the `i`-th pair handed to the
/// constructor; its orientation is kept as given but carries no meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
    max_degree: usize,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut neighbors = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {id} = ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
            incident[u].push(id);
            incident[v].push(id);
        }
        let max_degree = neighbors.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self { n, edges, neighbors, incident, max_degree })
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("edgeless graph is valid")
    }

    /// `K_n` with edges in lexicographic order of `(u, v)`, `u < v`.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// Parses the edge-list text format: one `u v` pair per line, an optional
    /// `n <count>` header for trailing isolated vertices, `#` comments.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let parse = |tok: &str| -> Result<usize> {
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("expected a nonnegative integer, found `{tok}`"),
                })
            };
            match tokens.as_slice() {
                ["n", count] => {
                    if declared.is_some() || !edges.is_empty() {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: "the `n <count>` header must come first and only once".into(),
                        });
                    }
                    declared = Some(parse(count)?);
                }
                [u, v] => edges.push((parse(u)?, parse(v)?)),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected `u v`, found `{line}`"),
                    })
                }
            }
        }
        let implied = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = match declared {
            Some(d) if d < implied => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("header declares n = {d} but edges use vertex {}", implied - 1),
                })
            }
            Some(d) => d,
            None => implied,
        };
        Self::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn shares_endpoint(&self, e: usize, f: usize) -> bool {
        let (a, b) = self.edges[e];
        let (c, d) = self.edges[f];
        a == c || a == d || b == c || b == d
    }

    /// `Δ n / 2m`, the ratio of maximum to average degree.
    pub fn alpha(&self) -> Option<f64> {
        if self.edges.is_empty() {
            return None;
        }
        Some(self.max_degree as f64 * self.n as f64 / (2.0 * self.m() as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = Graph::from_edge_list("0 1\n1 2\n2 0").unwrap();
        assert_eq!((g.n(), g.m(), g.max_degree()), (3, 3, 2));
    }

    #[test]
    fn duplicate_edge_rejected() {
        assert!(matches!(Graph::from_edge_list("0 1\n0 1"), Err(Error::DuplicateEdge(0, 1))));
        assert!(matches!(Graph::from_edge_list("0 1\n1 0"), Err(Error::DuplicateEdge(0, 1))));
    }

    #[test]
    fn self_loop_rejected() {
        assert!(matches!(Graph::from_edge_list("2 2"), Err(Error::SelfLoop(2))));
    }

    #[test]
    fn parse_errors_carry_line() {
        match Graph::from_edge_list("0 1\n\n1 x") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Graph::from_edge_list("0 1 2").is_err());
        assert!(Graph::from_edge_list("0 1\nn 5").is_err());
    }

    #[test]
    fn k5_counts() {
        let text: String = (0..5)
            .flat_map(|u| (u + 1..5).map(move |v| format!("{u} {v}\n")))
            .collect();
        let g = Graph::from_edge_list(&text).unwrap();
        assert_eq!((g.n(), g.m(), g.max_degree()), (5, 10, 4));
        assert_eq!(g, Graph::complete(5));
    }

    #[test]
    fn header_allows_isolated_vertices() {
        let g = Graph::from_edge_list("# comment\nn 6\n0 1\n").unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.degree(5), 0);
        assert!(Graph::from_edge_list("n 1\n0 1").is_err());
        let round = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(round, g);
    }

    #[test]
    fn degree_sum_is_twice_m() {
        let g = Graph::complete(7);
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.m());
        assert_eq!(g.max_degree(), *g.degrees().iter().max().unwrap());
        assert_eq!(g.alpha(), Some(1.0));
    }
}
