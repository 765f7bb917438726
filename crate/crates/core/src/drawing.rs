//! Drawings: a graph together with its crossing multiset.
//!
//! Two representations are supported. Geometric drawings place vertices at
//! integer points and draw edges as straight segments; their crossings are
//! extracted with exact predicates. Combinatorial drawings list crossing
//! pairs directly, with multiplicities.

use std::collections::HashMap;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Degeneracy, Error, Result};
use crate::geometry::{self, Point, SegmentParam, SegmentRelation, MAX_COORD};
use crate::graph::Graph;

/// A crossing pair of edge ids, `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Crossing {
    pub first: usize,
    pub second: usize,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representation {
    /// Integer coordinates; `scale` is the power of ten the input was
    /// multiplied by to make every coordinate integral.
    Geometric { coords: Vec<Point>, scale: i64 },
    Combinatorial,
}

#[derive(Debug, Clone)]
pub struct Drawing {
    graph: Graph,
    representation: Representation,
    crossings: Vec<Crossing>,
    partners: Vec<Vec<(usize, u64)>>,
    load: Vec<u64>,
    total: u64,
    local: u64,
    adjacent_crossings: bool,
}

impl Drawing {
    /// Extracts the crossings of a straight-line drawing.
    ///
    /// Rejects any input that breaks general position: coincident vertices,
    /// a vertex in the interior of a non-incident edge, collinear overlapping
    /// edges, or three edges through one crossing point.
    pub fn from_geometry(graph: Graph, coords: Vec<Point>) -> Result<Self> {
        if coords.len() != graph.n() {
            return Err(Error::InvalidDrawing(format!(
                "{} coordinates given for {} vertices",
                coords.len(),
                graph.n()
            )));
        }
        if let Some(v) = coords.iter().position(|p| p.iter().any(|c| c.abs() > MAX_COORD)) {
            return Err(Error::InvalidDrawing(format!(
                "coordinate of vertex {v} exceeds the supported magnitude 2^60"
            )));
        }
        check_vertices(&graph, &coords)?;

        let edges = graph.edges();
        let per_edge: Vec<Vec<Hit>> = (0..edges.len())
            .into_par_iter()
            .map(|e| {
                let (a, b) = edges[e];
                let mut out = Vec::new();
                for f in e + 1..edges.len() {
                    if graph.shares_endpoint(e, f) {
                        continue;
                    }
                    let (c, d) = edges[f];
                    match geometry::classify(coords[a], coords[b], coords[c], coords[d]) {
                        SegmentRelation::Proper { on_first, on_second } => {
                            out.push(Hit::Cross(f, on_first, on_second))
                        }
                        SegmentRelation::Disjoint => {}
                        // Touching is already excluded by `check_vertices`.
                        SegmentRelation::CollinearOverlap | SegmentRelation::Touching => {
                            out.push(Hit::Overlap(f))
                        }
                    }
                }
                out
            })
            .collect();

        let mut positions: Vec<HashMap<SegmentParam, usize>> = vec![HashMap::new(); edges.len()];
        let mut crossings = Vec::new();
        for (e, list) in per_edge.into_iter().enumerate() {
            for hit in list {
                let (f, on_e, on_f) = match hit {
                    Hit::Cross(f, on_e, on_f) => (f, on_e, on_f),
                    Hit::Overlap(f) => {
                        return Err(Error::Degenerate(Degeneracy::CollinearOverlap { first: e, second: f }))
                    }
                };
                for (edge, other, at) in [(e, f, on_e), (f, e, on_f)] {
                    if let Some(&prev) = positions[edge].get(&at) {
                        let mut trio = [edge, prev, other];
                        trio.sort_unstable();
                        return Err(Error::Degenerate(Degeneracy::ConcurrentCrossing { edges: trio }));
                    }
                    positions[edge].insert(at, other);
                }
                crossings.push(Crossing { first: e, second: f, multiplicity: 1 });
            }
        }
        Ok(Self::assemble(graph, Representation::Geometric { coords, scale: 1 }, crossings, false))
    }

    /// Builds a drawing from an explicit crossing list `(e, f, multiplicity)`.
    /// Repeated pairs accumulate multiplicity.
    pub fn from_combinatorial(graph: Graph, list: &[(usize, usize, u64)]) -> Result<Self> {
        let m = graph.m();
        let mut acc: HashMap<(usize, usize), u64> = HashMap::new();
        for (idx, &(e, f, mult)) in list.iter().enumerate() {
            if e >= m || f >= m {
                return Err(Error::InvalidDrawing(format!(
                    "crossings[{idx}] references edge {} but only {m} edges exist",
                    e.max(f)
                )));
            }
            if e == f {
                return Err(Error::InvalidDrawing(format!(
                    "crossings[{idx}] pairs edge {e} with itself"
                )));
            }
            if mult == 0 {
                return Err(Error::InvalidDrawing(format!(
                    "crossings[{idx}] has multiplicity 0"
                )));
            }
            *acc.entry((e.min(f), e.max(f))).or_insert(0) += mult;
        }
        let mut crossings: Vec<Crossing> = acc
            .into_iter()
            .map(|((first, second), multiplicity)| Crossing { first, second, multiplicity })
            .collect();
        crossings.sort_unstable();
        let adjacent = crossings.iter().any(|c| graph.shares_endpoint(c.first, c.second));
        if adjacent {
            warn!("combinatorial drawing contains crossings between adjacent edges");
        }
        Ok(Self::assemble(graph, Representation::Combinatorial, crossings, adjacent))
    }

    fn assemble(
        graph: Graph,
        representation: Representation,
        crossings: Vec<Crossing>,
        adjacent_crossings: bool,
    ) -> Self {
        let m = graph.m();
        let mut partners = vec![Vec::new(); m];
        let mut load = vec![0u64; m];
        for c in &crossings {
            partners[c.first].push((c.second, c.multiplicity));
            partners[c.second].push((c.first, c.multiplicity));
            load[c.first] += c.multiplicity;
            load[c.second] += c.multiplicity;
        }
        for p in &mut partners {
            p.sort_unstable();
        }
        let total = crossings.iter().map(|c| c.multiplicity).sum();
        let local = load.iter().copied().max().unwrap_or(0);
        Self { graph, representation, crossings, partners, load, total, local, adjacent_crossings }
    }

    /// Parses either format of the drawing JSON. A versioned command
    /// envelope whose `outputs.drawing` holds a drawing is accepted too.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let value = match value.get("format") {
            Some(_) => value,
            None => match value.pointer("/outputs/drawing") {
                Some(inner) => inner.clone(),
                None => {
                    return Err(Error::InvalidDrawing(
                        "missing field `format` (expected \"geometric\" or \"combinatorial\")".into(),
                    ))
                }
            },
        };
        let file: DrawingFile = serde_json::from_value(value)?;
        file.into_drawing()
    }

    pub fn to_file(&self) -> DrawingFile {
        let edges = self.graph.edges().iter().map(|&(u, v)| [u, v]).collect();
        match &self.representation {
            Representation::Geometric { coords, scale } => DrawingFile::Geometric {
                coords: coords
                    .iter()
                    .map(|p| p.map(|c| Coordinate::from_scaled(c, *scale)))
                    .collect(),
                edges,
            },
            Representation::Combinatorial => DrawingFile::Combinatorial {
                n: Some(self.graph.n()),
                edges,
                crossings: self
                    .crossings
                    .iter()
                    .map(|c| vec![c.first as u64, c.second as u64, c.multiplicity])
                    .collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("drawing serializes")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    pub fn coords(&self) -> Option<&[Point]> {
        match &self.representation {
            Representation::Geometric { coords, .. } => Some(coords),
            Representation::Combinatorial => None,
        }
    }

    /// Crossing pairs sorted by `(first, second)`.
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Crossing partners of `edge` with multiplicities, sorted by edge id.
    pub fn partners(&self, edge: usize) -> &[(usize, u64)] {
        &self.partners[edge]
    }

    pub fn load(&self, edge: usize) -> u64 {
        self.load[edge]
    }

    pub fn loads(&self) -> &[u64] {
        &self.load
    }

    /// Total number of crossings `C`, multiplicity-weighted.
    pub fn total_crossings(&self) -> u64 {
        self.total
    }

    /// Largest number of crossings on one edge, `L`.
    pub fn local_crossing_number(&self) -> u64 {
        self.local
    }

    /// Set when a combinatorial input crosses two edges sharing an endpoint.
    pub fn has_adjacent_crossings(&self) -> bool {
        self.adjacent_crossings
    }

    pub fn all_simple(&self) -> bool {
        self.crossings.iter().all(|c| c.multiplicity == 1)
    }

    pub fn intersection_graph(&self) -> IntersectionGraph {
        let pairs = self.crossings.iter().map(|c| (c.first, c.second)).collect();
        IntersectionGraph(Graph::new(self.graph.m(), pairs).expect("crossing pairs are distinct"))
    }
}

enum Hit {
    Cross(usize, SegmentParam, SegmentParam),
    Overlap(usize),
}

fn check_vertices(graph: &Graph, coords: &[Point]) -> Result<()> {
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by_key(|&v| (coords[v], v));
    for w in order.windows(2) {
        if coords[w[0]] == coords[w[1]] {
            return Err(Error::Degenerate(Degeneracy::CoincidentVertices {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
            }));
        }
    }
    let hit = graph
        .edges()
        .par_iter()
        .enumerate()
        .find_map_first(|(e, &(a, b))| {
            (0..coords.len())
                .find(|&v| v != a && v != b && geometry::in_open_segment(coords[a], coords[b], coords[v]))
                .map(|v| (v, e))
        });
    match hit {
        Some((vertex, edge)) => Err(Error::Degenerate(Degeneracy::VertexOnEdge { vertex, edge })),
        None => Ok(()),
    }
}

/// Edges of the source drawing as vertices, adjacent when they cross.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph(pub Graph);

impl IntersectionGraph {
    pub fn graph(&self) -> &Graph {
        &self.0
    }

    pub fn max_degree(&self) -> usize {
        self.0.max_degree()
    }
}

/// A coordinate as written in drawing JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Int(i64),
    Float(f64),
}

impl Coordinate {
    fn from_scaled(value: i64, scale: i64) -> Self {
        if scale == 1 {
            Coordinate::Int(value)
        } else {
            Coordinate::Float(value as f64 / scale as f64)
        }
    }

    /// Number of decimal digits after the point in the shortest
    /// round-tripping representation.
    fn decimals(self) -> Result<u32> {
        match self {
            Coordinate::Int(_) => Ok(0),
            Coordinate::Float(x) if !x.is_finite() => {
                Err(Error::InvalidDrawing(format!("coordinate {x} is not finite")))
            }
            Coordinate::Float(x) => {
                let s = format!("{x}");
                Ok(s.split_once('.').map_or(0, |(_, frac)| frac.len() as u32))
            }
        }
    }

    fn scaled(self, digits: u32) -> Result<i64> {
        let too_large = || Error::InvalidDrawing(format!("coordinate {self:?} too large after scaling"));
        let value: i128 = match self {
            Coordinate::Int(v) => (v as i128).checked_mul(10i128.pow(digits)).ok_or_else(too_large)?,
            Coordinate::Float(x) => {
                let s = format!("{x}");
                let (int, frac) = s.split_once('.').unwrap_or((&s, ""));
                let padded = format!("{int}{frac}{}", "0".repeat(digits as usize - frac.len()));
                padded.parse::<i128>().map_err(|_| too_large())?
            }
        };
        if value.abs() > MAX_COORD as i128 {
            return Err(too_large());
        }
        Ok(value as i64)
    }
}

/// Serialized drawing formats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase", deny_unknown_fields)]
pub enum DrawingFile {
    Geometric {
        coords: Vec<[Coordinate; 2]>,
        edges: Vec<[usize; 2]>,
    },
    Combinatorial {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        edges: Vec<[usize; 2]>,
        /// `[e, f]` or `[e, f, multiplicity]`.
        crossings: Vec<Vec<u64>>,
    },
}

const MAX_DECIMALS: u32 = 12;

impl DrawingFile {
    pub fn into_drawing(self) -> Result<Drawing> {
        match self {
            DrawingFile::Geometric { coords, edges } => {
                let digits = coords
                    .iter()
                    .flatten()
                    .map(|c| c.decimals())
                    .try_fold(0, |acc, d| d.map(|d| acc.max(d)))?;
                if digits > MAX_DECIMALS {
                    return Err(Error::InvalidDrawing(format!(
                        "coordinates need {digits} decimal digits; at most {MAX_DECIMALS} are supported"
                    )));
                }
                let points = coords
                    .iter()
                    .map(|[x, y]| Ok([x.scaled(digits)?, y.scaled(digits)?]))
                    .collect::<Result<Vec<Point>>>()?;
                let graph = Graph::new(points.len(), edges.iter().map(|&[u, v]| (u, v)).collect())?;
                let mut drawing = Drawing::from_geometry(graph, points)?;
                if let Representation::Geometric { scale, .. } = &mut drawing.representation {
                    *scale = 10i64.pow(digits);
                }
                Ok(drawing)
            }
            DrawingFile::Combinatorial { n, edges, crossings } => {
                let implied = edges.iter().map(|&[u, v]| u.max(v) + 1).max().unwrap_or(0);
                let n = n.unwrap_or(implied);
                let graph = Graph::new(n, edges.iter().map(|&[u, v]| (u, v)).collect())?;
                let list = crossings
                    .iter()
                    .enumerate()
                    .map(|(idx, c)| match c.as_slice() {
                        [e, f] => Ok((*e as usize, *f as usize, 1)),
                        [e, f, mult] => Ok((*e as usize, *f as usize, *mult)),
                        _ => Err(Error::InvalidDrawing(format!(
                            "crossings[{idx}] must be [e, f] or [e, f, multiplicity]"
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Drawing::from_combinatorial(graph, &list)
            }
        }
    }
}
