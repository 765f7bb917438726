//! Exact orientation and segment predicates on integer coordinates.
//!
//! Coordinates are bounded by [`MAX_COORD`] in absolute value so every
//! determinant below fits in an `i128` without overflow.

use std::cmp::Ordering;

use num_integer::Integer;

pub type Point = [i64; 2];

/// Largest admissible absolute coordinate (2^60).
pub const MAX_COORD: i64 = 1 << 60;

/// Twice the signed area of `(a, b, c)`; positive for a left turn.
pub fn orient(a: Point, b: Point, c: Point) -> i128 {
    let abx = b[0] as i128 - a[0] as i128;
    let aby = b[1] as i128 - a[1] as i128;
    let acx = c[0] as i128 - a[0] as i128;
    let acy = c[1] as i128 - a[1] as i128;
    abx * acy - aby * acx
}

/// `p` is collinear with `ab` and inside its closed bounding box.
fn within_box(a: Point, b: Point, p: Point) -> bool {
    a[0].min(b[0]) <= p[0]
        && p[0] <= a[0].max(b[0])
        && a[1].min(b[1]) <= p[1]
        && p[1] <= a[1].max(b[1])
}

/// True when `p` lies on the open segment `ab` (excluding the endpoints).
pub fn in_open_segment(a: Point, b: Point, p: Point) -> bool {
    p != a && p != b && orient(a, b, p) == 0 && within_box(a, b, p)
}

/// A point on a segment `a + t (b - a)` with `t` kept as a reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SegmentParam {
    num: i128,
    den: i128,
}

impl SegmentParam {
    fn new(num: i128, den: i128) -> Self {
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        Self { num: num / g, den: den / g }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentRelation {
    Disjoint,
    /// A single shared point interior to both segments, with its position
    /// along each of them.
    Proper { on_first: SegmentParam, on_second: SegmentParam },
    /// The segments are collinear and share more than one point.
    CollinearOverlap,
    /// An endpoint of one segment touches the other somewhere else.
    Touching,
}

/// Classifies two segments whose four endpoints are pairwise distinct.
pub fn classify(a: Point, b: Point, c: Point, d: Point) -> SegmentRelation {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 == 0 && o2 == 0 {
        // Same supporting line: overlap iff the projections intersect.
        let key = |p: Point| if a[0] != b[0] { p[0] } else { p[1] };
        let (lo1, hi1) = (key(a).min(key(b)), key(a).max(key(b)));
        let (lo2, hi2) = (key(c).min(key(d)), key(c).max(key(d)));
        return match hi1.min(hi2).cmp(&lo1.max(lo2)) {
            Ordering::Less => SegmentRelation::Disjoint,
            // Distinct endpoints make a single shared point impossible here.
            _ => SegmentRelation::CollinearOverlap,
        };
    }
    if (o1 == 0 && within_box(a, b, c))
        || (o2 == 0 && within_box(a, b, d))
        || (o3 == 0 && within_box(c, d, a))
        || (o4 == 0 && within_box(c, d, b))
    {
        return SegmentRelation::Touching;
    }
    if o1.signum() * o2.signum() < 0 && o3.signum() * o4.signum() < 0 {
        return SegmentRelation::Proper {
            on_first: SegmentParam::new(o3, o3 - o4),
            on_second: SegmentParam::new(o1, o1 - o2),
        };
    }
    SegmentRelation::Disjoint
}
