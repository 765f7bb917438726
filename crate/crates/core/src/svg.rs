//! SVG export of a decomposition, one panel per plane.
//!
//! Inside a panel, groups of edges are translated apart by integer offsets
//! onto disjoint, padded bounding boxes (shelf packing), so edges of
//! different groups cannot cross. The exported coordinates can be read back
//! with [`parse_rendered`] and recounted.

use std::collections::{BTreeMap, HashMap};

use regex::Regex;
use serde::Serialize;

use crate::decompose::{LoadSemantics, PlaneAssignment};
use crate::drawing::Drawing;
use crate::error::{invalid_arg, Error, Result};
use crate::geometry::{Point, MAX_COORD};
use crate::graph::Graph;

/// Which edges move together.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grouping {
    /// All edges of one type within a plane, or the whole plane under
    /// co-plane loads. Exactly the reported crossings remain.
    #[default]
    Surviving,
    /// Each connected component of a plane's subgraph. Crossings between
    /// components of one type disappear as well.
    Components,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub plane: usize,
    pub min: Point,
    pub max: Point,
    pub vertices: Vec<(usize, Point)>,
    /// `(edge, u, v)`.
    pub edges: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub k: usize,
    pub grouping: Grouping,
    pub panels: Vec<Panel>,
}

struct Unit {
    edges: Vec<usize>,
    vertices: Vec<usize>,
    min: Point,
    max: Point,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn plane_units(graph: &Graph, coords: &[Point], assignment: &PlaneAssignment, plane: usize, grouping: Grouping) -> Vec<Unit> {
    let edges = assignment.plane_edges(plane);
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    match (grouping, assignment.semantics()) {
        (Grouping::Surviving, LoadSemantics::SameType) => {
            let types = assignment.types().expect("same-type assignments carry types");
            let mut first_of_type = HashMap::new();
            for &e in &edges {
                let key = *first_of_type.entry(types[e]).or_insert(e);
                groups.entry(key).or_default().push(e);
            }
        }
        (Grouping::Surviving, LoadSemantics::CoPlane) => {
            if let Some(&first) = edges.first() {
                groups.insert(first, edges.clone());
            }
        }
        (Grouping::Components, _) => {
            let mut parent: Vec<usize> = (0..graph.n()).collect();
            for &e in &edges {
                let (u, v) = graph.edge(e);
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
            let mut first_of_root = HashMap::new();
            for &e in &edges {
                let root = find(&mut parent, graph.edge(e).0);
                let key = *first_of_root.entry(root).or_insert(e);
                groups.entry(key).or_default().push(e);
            }
        }
    }
    groups
        .into_values()
        .map(|edges| {
            let mut vertices: Vec<usize> = edges
                .iter()
                .flat_map(|&e| {
                    let (u, v) = graph.edge(e);
                    [u, v]
                })
                .collect();
            vertices.sort_unstable();
            vertices.dedup();
            bounded(edges, vertices, coords)
        })
        .collect()
}

fn bounded(edges: Vec<usize>, vertices: Vec<usize>, coords: &[Point]) -> Unit {
    let mut min = [i64::MAX; 2];
    let mut max = [i64::MIN; 2];
    for &v in &vertices {
        for a in 0..2 {
            min[a] = min[a].min(coords[v][a]);
            max[a] = max[a].max(coords[v][a]);
        }
    }
    Unit { edges, vertices, min, max }
}

fn checked(x: i128) -> Result<i64> {
    if x.abs() > MAX_COORD as i128 {
        return Err(invalid_arg("rendered coordinates exceed the supported range"));
    }
    Ok(x as i64)
}

/// Shelf packing of padded unit boxes; returns per-unit translations.
fn pack(units: &[Unit]) -> Result<Vec<[i64; 2]>> {
    if units.len() == 1 {
        return Ok(vec![[0, 0]]);
    }
    let dims: Vec<(i128, i128, i128)> = units
        .iter()
        .map(|u| {
            let w = (u.max[0] - u.min[0]) as i128;
            let h = (u.max[1] - u.min[1]) as i128;
            let pad = ((w.max(h) + 9) / 10).max(1);
            (w, h, pad)
        })
        .collect();
    let area: f64 = dims.iter().map(|&(w, h, p)| ((w + 2 * p) * (h + 2 * p)) as f64).sum();
    let widest = dims.iter().map(|&(w, _, p)| w + 2 * p).max().unwrap_or(0);
    let row = widest.max(area.sqrt().ceil() as i128);
    let mut order: Vec<usize> = (0..units.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(dims[i].1 + 2 * dims[i].2), i));
    let mut offsets = vec![[0i64; 2]; units.len()];
    let (mut x, mut y, mut shelf) = (0i128, 0i128, 0i128);
    for i in order {
        let (w, h, p) = dims[i];
        if x > 0 && x + w + 2 * p > row {
            y += shelf;
            x = 0;
            shelf = 0;
        }
        offsets[i] = [
            checked(x + p - units[i].min[0] as i128)?,
            checked(y + p - units[i].min[1] as i128)?,
        ];
        x += w + 2 * p;
        shelf = shelf.max(h + 2 * p);
    }
    Ok(offsets)
}

/// Places every plane's groups; a plane with a single group keeps the
/// input coordinates.
pub fn layout(drawing: &Drawing, assignment: &PlaneAssignment, grouping: Grouping) -> Result<Layout> {
    let coords = drawing
        .coords()
        .ok_or_else(|| invalid_arg("combinatorial drawings have no coordinates to render"))?;
    let graph = drawing.graph();
    if assignment.planes().len() != graph.m() {
        return Err(invalid_arg("assignment does not match the drawing"));
    }
    let k = assignment.k();
    let mut panels = Vec::with_capacity(k);
    for plane in 0..k {
        let mut units = plane_units(graph, coords, assignment, plane, grouping);
        if k == 1 {
            let all: Vec<usize> = (0..graph.n()).collect();
            let edges = units.into_iter().flat_map(|u| u.edges).collect::<Vec<_>>();
            units = vec![bounded(edges, all, coords)];
        }
        let offsets = pack(&units)?;
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut min = [i64::MAX; 2];
        let mut max = [i64::MIN; 2];
        for (unit, off) in units.iter().zip(&offsets) {
            for &v in &unit.vertices {
                let p = [
                    checked(coords[v][0] as i128 + off[0] as i128)?,
                    checked(coords[v][1] as i128 + off[1] as i128)?,
                ];
                for a in 0..2 {
                    min[a] = min[a].min(p[a]);
                    max[a] = max[a].max(p[a]);
                }
                vertices.push((v, p));
            }
            edges.extend(unit.edges.iter().map(|&e| {
                let (u, v) = graph.edge(e);
                (e, u, v)
            }));
        }
        if vertices.is_empty() {
            min = [0, 0];
            max = [0, 0];
        }
        vertices.sort_unstable();
        edges.sort_unstable();
        panels.push(Panel { plane, min, max, vertices, edges });
    }
    Ok(Layout { k, grouping, panels })
}

pub fn render_svg(layout: &Layout) -> String {
    let extent = layout
        .panels
        .iter()
        .map(|p| (p.max[0] - p.min[0]).max(p.max[1] - p.min[1]))
        .max()
        .unwrap_or(0)
        .max(10);
    let margin = extent / 10 + 1;
    let stroke = (extent / 400).max(1);
    let label = (extent / 25).max(4);
    let mut x = 0i64;
    let mut height = 0i64;
    let mut body = String::new();
    for p in &layout.panels {
        let w = p.max[0] - p.min[0];
        let h = p.max[1] - p.min[1];
        let (tx, ty) = (x + margin - p.min[0], margin + label + p.max[1]);
        body.push_str(&format!(
            "<rect x=\"{x}\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#bbb\" stroke-width=\"{stroke}\"/>\n",
            w + 2 * margin,
            h + 2 * margin + label
        ));
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"{label}\" font-family=\"sans-serif\">plane {}</text>\n",
            x + margin,
            label,
            p.plane
        ));
        body.push_str(&format!(
            "<g data-plane=\"{}\" transform=\"translate({tx},{ty}) scale(1,-1)\" stroke=\"#246\" stroke-width=\"{stroke}\">\n",
            p.plane
        ));
        let pos: HashMap<usize, Point> = p.vertices.iter().copied().collect();
        for &(e, u, v) in &p.edges {
            let (a, b) = (pos[&u], pos[&v]);
            body.push_str(&format!(
                "<line data-edge=\"{e}\" data-plane=\"{}\" data-u=\"{u}\" data-v=\"{v}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                p.plane, a[0], a[1], b[0], b[1]
            ));
        }
        for &(v, q) in &p.vertices {
            body.push_str(&format!(
                "<circle data-vertex=\"{v}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#c33\" stroke=\"none\"/>\n",
                q[0],
                q[1],
                2 * stroke
            ));
        }
        body.push_str("</g>\n");
        x += w + 3 * margin;
        height = height.max(h + 2 * margin + label);
    }
    let width = (x - margin).max(1);
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width} {height}\" data-k=\"{}\" data-grouping=\"{}\">\n{body}</svg>\n",
        layout.k,
        match layout.grouping {
            Grouping::Surviving => "surviving",
            Grouping::Components => "components",
        }
    )
}

/// One `<line>` of a rendered SVG, in panel coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedEdge {
    pub edge: usize,
    pub plane: usize,
    pub u: usize,
    pub v: usize,
    pub from: Point,
    pub to: Point,
}

pub fn parse_rendered(svg: &str) -> Result<Vec<RenderedEdge>> {
    let line = Regex::new(r"<line\b([^>]*)/?>").expect("valid pattern");
    let attr = Regex::new(r#"([\w-]+)="([^"]*)""#).expect("valid pattern");
    let mut out = Vec::new();
    for (i, cap) in line.captures_iter(svg).enumerate() {
        let attrs: HashMap<&str, &str> = attr
            .captures_iter(cap.get(1).map_or("", |m| m.as_str()))
            .map(|a| (a.get(1).unwrap().as_str(), a.get(2).unwrap().as_str()))
            .collect();
        let bad = |name: &str| Error::InvalidDrawing(format!("line element {i}: missing or invalid `{name}`"));
        let int = |name: &str| attrs.get(name).and_then(|s| s.parse::<i64>().ok()).ok_or_else(|| bad(name));
        let id = |name: &str| attrs.get(name).and_then(|s| s.parse::<usize>().ok()).ok_or_else(|| bad(name));
        out.push(RenderedEdge {
            edge: id("data-edge")?,
            plane: id("data-plane")?,
            u: id("data-u")?,
            v: id("data-v")?,
            from: [int("x1")?, int("y1")?],
            to: [int("x2")?, int("y2")?],
        });
    }
    Ok(out)
}

/// Crossings per plane among rendered edges, from the coordinates alone.
pub fn recount(edges: &[RenderedEdge], k: usize) -> Result<Vec<u64>> {
    let mut totals = vec![0u64; k];
    let mut by_plane: BTreeMap<usize, Vec<&RenderedEdge>> = BTreeMap::new();
    for e in edges {
        if e.plane >= k {
            return Err(Error::InvalidDrawing(format!("edge {} drawn in plane {} >= k = {k}", e.edge, e.plane)));
        }
        by_plane.entry(e.plane).or_default().push(e);
    }
    for (plane, list) in by_plane {
        let mut local: HashMap<usize, usize> = HashMap::new();
        let mut coords: Vec<Point> = Vec::new();
        let mut place = |v: usize, p: Point| -> Result<usize> {
            match local.get(&v) {
                Some(&i) if coords[i] == p => Ok(i),
                Some(_) => Err(Error::InvalidDrawing(format!("vertex {v} drawn at two positions in plane {plane}"))),
                None => {
                    local.insert(v, coords.len());
                    coords.push(p);
                    Ok(coords.len() - 1)
                }
            }
        };
        let mut pairs = Vec::with_capacity(list.len());
        for e in list {
            pairs.push((place(e.u, e.from)?, place(e.v, e.to)?));
        }
        let g = Graph::new(coords.len(), pairs)?;
        totals[plane] = Drawing::from_geometry(g, coords)?.total_crossings();
    }
    Ok(totals)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderCheck {
    pub recounted: Vec<u64>,
    pub reported: Vec<u64>,
    /// Recounted equals reported in every plane.
    pub exact: bool,
    /// Recounted is at most reported in every plane.
    pub within: bool,
}

/// Parses `svg`, recounts each plane and compares with `reported`.
pub fn check_rendering(svg: &str, k: usize, reported: &[u64]) -> Result<RenderCheck> {
    let recounted = recount(&parse_rendered(svg)?, k)?;
    Ok(RenderCheck {
        exact: recounted == reported,
        within: recounted.iter().zip(reported).all(|(a, b)| a <= b),
        recounted,
        reported: reported.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{assign_planes, decompose_by_coloring, sample_labeling, surviving_report, VertexLabeling};
    use crate::generators::convex_kn;
    use crate::weights::WeightVector;

    #[test]
    fn single_plane_is_the_input() {
        let d = convex_kn(6).unwrap();
        let l = VertexLabeling::new(1, vec![0; 6]).unwrap();
        let a = assign_planes(d.graph(), &l).unwrap();
        let lay = layout(&d, &a, Grouping::Surviving).unwrap();
        assert_eq!(lay.panels.len(), 1);
        let pos: Vec<Point> = lay.panels[0].vertices.iter().map(|&(_, p)| p).collect();
        assert_eq!(pos, d.coords().unwrap());
        let svg = render_svg(&lay);
        assert_eq!(recount(&parse_rendered(&svg).unwrap(), 1).unwrap(), vec![15]);
    }

    #[test]
    fn surviving_crossings_are_recounted_exactly() {
        let d = convex_kn(9).unwrap();
        for k in 2..=4 {
            let w = WeightVector::uniform(k).unwrap();
            for seed in 0..10 {
                let a = assign_planes(d.graph(), &sample_labeling(d.graph(), &w, seed)).unwrap();
                let r = surviving_report(&d, &a).unwrap();
                let svg = render_svg(&layout(&d, &a, Grouping::Surviving).unwrap());
                let check = check_rendering(&svg, k, &r.plane_totals).unwrap();
                assert!(check.exact, "k={k} seed={seed}: {check:?}");
                let svg = render_svg(&layout(&d, &a, Grouping::Components).unwrap());
                assert!(check_rendering(&svg, k, &r.plane_totals).unwrap().within);
            }
        }
    }

    #[test]
    fn coloring_panels_are_crossing_free() {
        let d = convex_kn(6).unwrap();
        let out = decompose_by_coloring(&d).unwrap();
        let svg = render_svg(&layout(&d, &out.assignment, Grouping::Components).unwrap());
        let check = check_rendering(&svg, out.assignment.k(), &out.report.plane_totals).unwrap();
        assert!(check.exact && check.recounted.iter().all(|&c| c == 0));
        assert_eq!(svg.matches("<g data-plane").count(), out.assignment.k());
    }

    #[test]
    fn combinatorial_drawings_cannot_be_rendered() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let d = Drawing::from_combinatorial(g, &[(0, 1, 1)]).unwrap();
        let a = PlaneAssignment::from_planes(1, vec![0, 0]).unwrap();
        assert!(layout(&d, &a, Grouping::Surviving).is_err());
    }

    #[test]
    fn malformed_lines_are_reported() {
        assert!(parse_rendered("<line data-edge=\"0\" x1=\"1\"/>").is_err());
        assert!(parse_rendered("<svg></svg>").unwrap().is_empty());
    }
}
