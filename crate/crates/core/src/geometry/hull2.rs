//! Planar convex hull (monotone chain) and small polygon helpers.

use robust::{orient2d, Coord};

use super::point::Point;

fn coord(p: &Point) -> Coord<f64> {
    Coord { x: p.x(), y: p.y() }
}

/// Twice the signed area of triangle `o, a, b`.
fn orient(o: &Point, a: &Point, b: &Point) -> f64 {
    (*a - *o).det2(&(*b - *o))
}

/// Extreme points of a planar set, counterclockwise from the lexicographic
/// minimum. The chain itself uses exact orientation tests, which keeps it
/// consistent when coordinates tie up to rounding; afterwards vertices within
/// `eps` of the chord through their neighbours are dropped. Returns fewer
/// than three points if the set is flat.
pub fn monotone_chain(points: &[Point], eps: f64) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup_by(|a, b| a.dist(b) <= eps);
    if pts.len() < 3 {
        return pts;
    }
    let left_turn = |o: &Point, a: &Point, b: &Point| orient2d(coord(o), coord(a), coord(b)) > 0.0;
    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for p in &pts {
        while lower.len() >= 2 && !left_turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !left_turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let mut hull = lower;

    let mut changed = true;
    while changed && hull.len() >= 3 {
        changed = false;
        let mut i = 0;
        while i < hull.len() && hull.len() >= 3 {
            let n = hull.len();
            let (prev, next) = (hull[(i + n - 1) % n], hull[(i + 1) % n]);
            let chord = prev.dist(&next);
            if orient(&prev, &hull[i], &next).abs() <= eps * chord {
                hull.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
    }
    if let Some(first) = (0..hull.len()).min_by(|&i, &j| hull[i].lex_cmp(&hull[j])) {
        hull.rotate_left(first);
    }
    hull
}

/// Signed shoelace area of a closed polygon given in order.
pub fn shoelace(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let o = poly[0];
    (1..n - 1).map(|i| orient(&o, &poly[i], &poly[i + 1])).sum::<f64>() * 0.5
}

/// Sutherland–Hodgman clip of a convex polygon by `normal·x <= offset`.
pub fn clip(poly: &[Point], normal: &Point, offset: f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let da = normal.dot(&a) - offset;
        let db = normal.dot(&b) - offset;
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push(a + (b - a) * t);
        }
    }
    out
}
