//! Reproducible instances: straight-line drawings of `K_n` and random
//! near-regular graphs.

use std::collections::HashSet;
use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::drawing::Drawing;
use crate::error::{invalid_arg, Error, Result};
use crate::geometry::Point;
use crate::graph::Graph;
use crate::rng;

// Irrational offsets break the central and mirror symmetries of regular
// polygons, which would otherwise survive rounding as exact concurrencies.
const CENTER_OFFSET: [f64; 2] = [std::f64::consts::FRAC_1_PI, std::f64::consts::E / 10.0];
const PHASE: f64 = 0.104_719_755_119_659_8;
// Antipodal points of a rounded even polygon have midpoints on a handful of
// lattice points, making diameters concurrent; a per-vertex angular jitter
// (a fraction of the spacing, so cyclic order is kept) breaks this.
const JITTER: f64 = 0.05;

fn jitter(i: usize) -> f64 {
    (i as f64 * 0.618_033_988_749_894_9).fract() - 0.5
}

fn binomial(n: u64, r: u64) -> u64 {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn round_point(radius: f64, angle: f64) -> Point {
    [
        (CENTER_OFFSET[0] + radius * angle.cos()).round() as i64,
        (CENTER_OFFSET[1] + radius * angle.sin()).round() as i64,
    ]
}

/// `K_n` with vertices near a rounded regular `n`-gon, in counterclockwise
/// order. The radius doubles until the rounded drawing is in general
/// position with exactly `C(n, 4)` crossings.
pub fn convex_kn(n: usize) -> Result<Drawing> {
    if n < 3 {
        return Err(invalid_arg("convex K_n needs n >= 3"));
    }
    let expected = binomial(n as u64, 4);
    let mut radius = 4096.0f64;
    while radius < 1e15 {
        let coords = (0..n)
            .map(|i| round_point(radius, PHASE + TAU * (i as f64 + JITTER * jitter(i)) / n as f64))
            .collect();
        if let Ok(d) = Drawing::from_geometry(Graph::complete(n), coords) {
            if d.total_crossings() == expected {
                return Ok(d);
            }
        }
        radius *= 2.0;
    }
    Err(Error::RetriesExhausted(format!("no non-degenerate rounding of the regular {n}-gon")))
}

/// `K_n` on two concentric circles of `n/2` vertices each, the inner one
/// at half the radius and rotated. Vertices `0..n/2` are on the outer circle.
pub fn cylindrical_kn(n: usize) -> Result<Drawing> {
    if n < 6 || n % 2 == 1 {
        return Err(invalid_arg("cylindrical K_n needs an even n >= 6"));
    }
    let half = n / 2;
    let step = TAU / half as f64;
    for attempt in 0..64 {
        let radius = 4096.0 * f64::powi(2.0, attempt / 8);
        let twist = step * (0.5 + 0.013 * attempt as f64);
        let coords: Vec<Point> = (0..half)
            .map(|i| round_point(radius, PHASE + step * i as f64))
            .chain((0..half).map(|i| round_point(radius / 2.0, PHASE + twist + step * i as f64)))
            .collect();
        if let Ok(d) = Drawing::from_geometry(Graph::complete(n), coords) {
            return Ok(d);
        }
    }
    Err(Error::RetriesExhausted(format!("no non-degenerate cylindrical drawing of K_{n}")))
}

const PAIRING_RETRIES: usize = 100;

/// A random graph with degrees close to `d` from the pairing model.
///
/// Loops and repeated pairs are dropped, then deficient vertices are joined
/// greedily at random. The result is accepted once `Δ n / 2m <= 1 + 3/d`.
pub fn random_regularish(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d > 0 && d >= n {
        return Err(invalid_arg(format!("degree {d} needs more than {n} vertices")));
    }
    if (n * d) % 2 == 1 {
        return Err(invalid_arg("n * d must be even"));
    }
    if d == 0 {
        return Ok(Graph::empty(n));
    }
    let alpha_cap = 1.0 + 3.0 / d as f64;
    for attempt in 0..PAIRING_RETRIES {
        let mut rng = rng::stream(seed, attempt as u64);
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(&mut rng);
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        let mut degree = vec![0usize; n];
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u != v && seen.insert((u, v)) {
                edges.push((u, v));
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        // Repair: join deficient vertices that are not yet adjacent.
        for _ in 0..4 * n {
            let deficient: Vec<usize> = (0..n).filter(|&v| degree[v] < d).collect();
            if deficient.len() < 2 {
                break;
            }
            let u = deficient[rng.gen_range(0..deficient.len())];
            let v = deficient[rng.gen_range(0..deficient.len())];
            let key = (u.min(v), u.max(v));
            if u != v && seen.insert(key) {
                edges.push(key);
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        let graph = Graph::new(n, edges)?;
        if graph.alpha().is_some_and(|a| a <= alpha_cap) {
            return Ok(graph);
        }
    }
    Err(Error::RetriesExhausted(format!(
        "no pairing of n = {n}, d = {d} met alpha <= {alpha_cap}"
    )))
}

const PLACEMENT_RETRIES: u64 = 1000;

/// Places the vertices at distinct random integer points of a box of side
/// `10 n`, redrawing until the straight-line drawing is in general position.
pub fn random_geometric_drawing(graph: &Graph, seed: u64) -> Result<Drawing> {
    let n = graph.n();
    let side = (10 * n).max(1) as i64;
    for attempt in 0..PLACEMENT_RETRIES {
        let mut rng = rng::stream(seed, attempt);
        let mut used = HashSet::with_capacity(n);
        let mut coords = Vec::with_capacity(n);
        while coords.len() < n {
            let p: Point = [rng.gen_range(0..side), rng.gen_range(0..side)];
            if used.insert(p) {
                coords.push(p);
            }
        }
        match Drawing::from_geometry(graph.clone(), coords) {
            Ok(d) => return Ok(d),
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted(format!(
        "no general-position placement found in {PLACEMENT_RETRIES} attempts"
    )))
}

/// A named instance family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    ConvexKn { n: usize },
    CylindricalKn { n: usize },
    /// Random near-regular graph, placed by [`random_geometric_drawing`]
    /// with the same seed.
    Regularish { n: usize, d: usize, seed: u64 },
    Geometric { graph: Graph, seed: u64 },
}

impl GeneratorSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::ConvexKn { .. } => "convex-kn",
            GeneratorSpec::CylindricalKn { .. } => "cyl-kn",
            GeneratorSpec::Regularish { .. } => "regularish",
            GeneratorSpec::Geometric { .. } => "geometric",
        }
    }

    pub fn generate(&self) -> Result<Drawing> {
        match self {
            GeneratorSpec::ConvexKn { n } => convex_kn(*n),
            GeneratorSpec::CylindricalKn { n } => cylindrical_kn(*n),
            GeneratorSpec::Regularish { n, d, seed } => {
                random_geometric_drawing(&random_regularish(*n, *d, *seed)?, *seed)
            }
            GeneratorSpec::Geometric { graph, seed } => random_geometric_drawing(graph, *seed),
        }
    }
}
