//! Shared fixtures for the benchmarks.

use kplanar_core::generators::{convex_kn, random_geometric_drawing, random_regularish};
use kplanar_core::geometry::Point;
use kplanar_core::{Drawing, Graph};

/// Straight-line convex `K_n`.
pub fn convex(n: usize) -> Drawing {
    convex_kn(n).expect("convex K_n for n >= 3")
}

/// Near-regular random graph at random lattice positions.
pub fn regular_geometric(n: usize, d: usize, seed: u64) -> Drawing {
    let g = random_regularish(n, d, seed).expect("valid degree");
    random_geometric_drawing(&g, seed).expect("general position found")
}

/// Vertices and coordinates of a drawing, for timing the crossing finder.
pub fn geometry(d: &Drawing) -> (Graph, Vec<Point>) {
    (d.graph().clone(), d.coords().expect("geometric drawing").to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_rebuild_the_same_crossings() {
        let d = convex(9);
        let (g, coords) = geometry(&d);
        assert_eq!(Drawing::from_geometry(g, coords).unwrap().total_crossings(), 126);
        assert_eq!(regular_geometric(30, 4, 1).graph().n(), 30);
    }
}
