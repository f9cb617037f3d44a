//! Spatial convex hull by incremental insertion (quickhull point order).
//!
//! Faces are triangles oriented outward with respect to a fixed interior
//! point. Visibility uses exact orientation predicates, so the visible region
//! of every inserted point is a topological disk. After the
//! triangulated surface is complete, coplanar triangles are merged into facet
//! planes and vertices that do not lie on three independent facets (points in
//! the middle of an edge or a flat face) are discarded.

use robust::{orient3d, Coord3D};
use smallvec::SmallVec;

use super::point::{triple, Point};

#[derive(Debug, Clone)]
pub struct Hull3 {
    /// Extreme points, lexicographically sorted.
    pub vertices: Vec<Point>,
    /// Facet planes `normal·x <= offset` with unit normals.
    pub facets: Vec<(Point, f64)>,
    pub volume: f64,
}

struct Face {
    v: [usize; 3],
    normal: Point,
    offset: f64,
    /// Bound on the rounding error of `normal·p - offset` inside the hull's box.
    slack: f64,
    outside: Vec<usize>,
    alive: bool,
}

fn dedup(points: &[Point], eps: f64) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    let mut kept: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        let dup = kept.iter().rev().take_while(|q| q.x() >= p.x() - eps).any(|q| q.dist(&p) <= eps);
        if !dup {
            kept.push(p);
        }
    }
    kept
}

fn coord(p: &Point) -> Coord3D<f64> {
    Coord3D { x: p.0[0], y: p.0[1], z: p.0[2] }
}

/// Exact test for `p` strictly on the outer side of the oriented triangle.
fn sees_exact(pts: &[Point], v: [usize; 3], p: &Point) -> bool {
    orient3d(coord(&pts[v[0]]), coord(&pts[v[1]]), coord(&pts[v[2]]), coord(p)) < 0.0
}

/// Plane distance when its sign is certain, the exact predicate otherwise.
fn sees(pts: &[Point], f: &Face, p: &Point) -> bool {
    let d = f.normal.dot(p) - f.offset;
    if d > f.slack {
        true
    } else if d < -f.slack {
        false
    } else {
        sees_exact(pts, f.v, p)
    }
}

fn face(pts: &[Point], v: [usize; 3], scale: f64) -> Face {
    let n = (pts[v[1]] - pts[v[0]]).cross(&(pts[v[2]] - pts[v[0]]));
    let len = n.norm();
    let slack = if len > 0.0 { 256.0 * f64::EPSILON * scale * (1.0 + scale * scale / len) } else { f64::INFINITY };
    let normal = if len > 0.0 { n / len } else { n };
    Face { v, normal, offset: normal.dot(&pts[v[0]]), slack, outside: Vec::new(), alive: true }
}

fn make_face(pts: &[Point], a: usize, b: usize, c: usize, interior: &Point, scale: f64) -> Face {
    let v = if sees_exact(pts, [a, b, c], interior) { [a, c, b] } else { [a, b, c] };
    face(pts, v, scale)
}

/// Directed edge `a → b` to the face on its left, stored per tail vertex;
/// vertex degrees are small, so a linear scan beats hashing.
struct EdgeMap(Vec<SmallVec<[(usize, usize); 8]>>);

impl EdgeMap {
    fn new(n: usize) -> Self {
        EdgeMap(vec![SmallVec::new(); n])
    }

    fn insert(&mut self, a: usize, b: usize, face: usize) {
        let list = &mut self.0[a];
        match list.iter_mut().find(|e| e.0 == b) {
            Some(e) => e.1 = face,
            None => list.push((b, face)),
        }
    }

    fn remove(&mut self, a: usize, b: usize) {
        let list = &mut self.0[a];
        if let Some(k) = list.iter().position(|e| e.0 == b) {
            list.swap_remove(k);
        }
    }

    fn get(&self, a: usize, b: usize) -> usize {
        self.0[a].iter().find(|e| e.0 == b).expect("closed surface").1
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Returns `None` when the point set does not span three dimensions.
pub fn quickhull(points: &[Point], eps: f64) -> Option<Hull3> {
    let pts = dedup(points, eps);
    if pts.len() < 4 {
        return None;
    }

    // Initial simplex from the most distant pair of axis extremes.
    let mut extremes = Vec::with_capacity(6);
    for axis in 0..3 {
        let lo = (0..pts.len()).min_by(|&i, &j| pts[i][axis].total_cmp(&pts[j][axis]))?;
        let hi = (0..pts.len()).max_by(|&i, &j| pts[i][axis].total_cmp(&pts[j][axis]))?;
        extremes.push(lo);
        extremes.push(hi);
    }
    let mut best = (0, 0, -1.0);
    for (k, &i) in extremes.iter().enumerate() {
        for &j in &extremes[k + 1..] {
            let d = pts[i].dist(&pts[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let (i0, i1, d01) = best;
    if d01 <= eps {
        return None;
    }
    let dir = (pts[i1] - pts[i0]) / d01;
    let line_dist = |p: &Point| {
        let w = *p - pts[i0];
        (w - dir * w.dot(&dir)).norm()
    };
    let i2 = (0..pts.len()).max_by(|&i, &j| line_dist(&pts[i]).total_cmp(&line_dist(&pts[j])))?;
    if line_dist(&pts[i2]) <= eps {
        return None;
    }
    let pn = (pts[i1] - pts[i0]).cross(&(pts[i2] - pts[i0])).normalized();
    let plane_dist = |p: &Point| pn.dot(&(*p - pts[i0])).abs();
    let i3 = (0..pts.len()).max_by(|&i, &j| plane_dist(&pts[i]).total_cmp(&plane_dist(&pts[j])))?;
    if plane_dist(&pts[i3]) <= eps {
        return None;
    }
    let interior = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) * 0.25;
    let scale = pts.iter().flat_map(|p| p.0).fold(0.0f64, |m, c| m.max(c.abs())).max(f64::MIN_POSITIVE);

    let mut faces: Vec<Face> = vec![
        make_face(&pts, i0, i1, i2, &interior, scale),
        make_face(&pts, i0, i1, i3, &interior, scale),
        make_face(&pts, i0, i2, i3, &interior, scale),
        make_face(&pts, i1, i2, i3, &interior, scale),
    ];
    let mut edges = EdgeMap::new(pts.len());
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            edges.insert(f.v[k], f.v[(k + 1) % 3], fi);
        }
    }
    for (pi, p) in pts.iter().enumerate() {
        if [i0, i1, i2, i3].contains(&pi) {
            continue;
        }
        if let Some(f) = faces.iter_mut().find(|f| sees(&pts, f, p)) {
            f.outside.push(pi);
        }
    }

    let mut pending: Vec<usize> = (0..faces.len()).collect();
    let mut stamp: Vec<u32> = vec![0; faces.len()];
    let mut round: u32 = 0;
    let mut visible: Vec<usize> = Vec::new();
    let mut horizon: Vec<(usize, usize)> = Vec::new();
    let mut orphans: Vec<usize> = Vec::new();
    while let Some(fi) = pending.pop() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let eye = {
            let f = &faces[fi];
            *f.outside
                .iter()
                .max_by(|&&a, &&b| (f.normal.dot(&pts[a]) - f.offset).total_cmp(&(f.normal.dot(&pts[b]) - f.offset)))
                .expect("non-empty")
        };
        let p = pts[eye];

        // Connected visible region around fi, and its horizon.
        round += 1;
        const VISIBLE: u32 = 1 << 31;
        visible.clear();
        visible.push(fi);
        stamp[fi] = round | VISIBLE;
        horizon.clear();
        let mut k = 0;
        while k < visible.len() {
            let f = visible[k];
            k += 1;
            let v = faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let g = edges.get(b, a);
                if stamp[g] == round | VISIBLE {
                    continue;
                }
                let seen_hidden = stamp[g] == round;
                if !seen_hidden && sees(&pts, &faces[g], &p) {
                    stamp[g] = round | VISIBLE;
                    visible.push(g);
                } else {
                    stamp[g] = round;
                    horizon.push((a, b));
                }
            }
        }

        orphans.clear();
        for &f in &visible {
            let face = &mut faces[f];
            face.alive = false;
            orphans.extend(face.outside.drain(..).filter(|&q| q != eye));
            let v = face.v;
            for e in 0..3 {
                edges.remove(v[e], v[(e + 1) % 3]);
            }
        }

        let first_new = faces.len();
        for &(a, b) in &horizon {
            let id = faces.len();
            faces.push(face(&pts, [a, b, eye], scale));
            stamp.push(0);
            edges.insert(a, b, id);
            edges.insert(b, eye, id);
            edges.insert(eye, a, id);
        }
        for &q in &orphans {
            let qp = pts[q];
            if let Some(f) = faces[first_new..].iter_mut().find(|f| sees(&pts, f, &qp)) {
                f.outside.push(q);
            }
        }
        pending.extend(first_new..faces.len());
    }

    let alive: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].alive).collect();
    let volume: f64 = alive
        .iter()
        .map(|&i| {
            let [a, b, c] = faces[i].v;
            triple(&(pts[a] - interior), &(pts[b] - interior), &(pts[c] - interior))
        })
        .sum::<f64>()
        / 6.0;

    // Merge coplanar neighbours into facet planes. Chains of slivers can
    // glue distinct faces together, so every cluster is checked against its
    // own plane; a failing cluster is re-merged with a strict normal test and,
    // failing that, kept as separate triangles.
    let merge_eps = 4.0 * eps;
    // Triangles on collinear points have no meaningful normal; they join any
    // neighbour whose plane holds them and never form a facet of their own.
    let flat: Vec<bool> = faces
        .iter()
        .map(|f| {
            let [a, b, c] = f.v.map(|i| pts[i]);
            let longest = a.dist(&b).max(b.dist(&c)).max(c.dist(&a));
            (b - a).cross(&(c - a)).norm() <= eps * longest
        })
        .collect();
    let coplanar = |i: usize, j: usize, a: usize, b: usize, strict: bool| {
        let fi = &faces[i];
        let fj = &faces[j];
        let far_i = fi.v.iter().copied().find(|&x| x != a && x != b).expect("triangle");
        let far_j = fj.v.iter().copied().find(|&x| x != a && x != b).expect("triangle");
        let holds_i = (fj.normal.dot(&pts[far_i]) - fj.offset).abs() <= merge_eps;
        let holds_j = (fi.normal.dot(&pts[far_j]) - fi.offset).abs() <= merge_eps;
        match (flat[i], flat[j]) {
            (true, true) => false,
            (true, false) => !strict && holds_i,
            (false, true) => !strict && holds_j,
            (false, false) => {
                let min_dot = if strict { 1.0 - 1e-9 } else { 0.0 };
                fi.normal.dot(&fj.normal) > min_dot && holds_i && holds_j
            }
        }
    };
    let group = |subset: &[usize], strict: bool| -> Vec<Vec<usize>> {
        let mut uf = UnionFind((0..faces.len()).collect());
        let mut inside = vec![false; faces.len()];
        for &i in subset {
            inside[i] = true;
        }
        for &i in subset {
            let v = faces[i].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let j = edges.get(b, a);
                if j > i && inside[j] && coplanar(i, j, a, b, strict) {
                    uf.union(i, j);
                }
            }
        }
        let mut slot = vec![usize::MAX; faces.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for &i in subset {
            let r = uf.find(i);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(i);
        }
        out
    };
    let plane_of = |cluster: &[usize]| -> Option<(Point, f64)> {
        let mut sum = Point::ORIGIN;
        for &i in cluster.iter().filter(|&&i| !flat[i]) {
            let [a, b, c] = faces[i].v;
            sum += (pts[b] - pts[a]).cross(&(pts[c] - pts[a]));
        }
        let len = sum.norm();
        if !(len > 0.0) {
            return None;
        }
        let n = sum / len;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &i in cluster {
            for &v in &faces[i].v {
                let d = n.dot(&pts[v]);
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
        (hi - lo <= merge_eps).then_some((n, hi))
    };

    let mut facets: Vec<(Point, f64)> = Vec::new();
    let mut face_cluster = vec![usize::MAX; faces.len()];
    let mut emit = |cluster: &[usize], plane: (Point, f64), facets: &mut Vec<(Point, f64)>| {
        for &i in cluster {
            face_cluster[i] = facets.len();
        }
        facets.push(plane);
    };
    for cluster in group(&alive, false) {
        if let Some(plane) = plane_of(&cluster) {
            emit(&cluster, plane, &mut facets);
            continue;
        }
        for sub in group(&cluster, true) {
            match plane_of(&sub) {
                Some(plane) => emit(&sub, plane, &mut facets),
                None => {
                    for &i in sub.iter().filter(|&&i| !flat[i]) {
                        let f = &faces[i];
                        let off = f.v.iter().map(|&v| f.normal.dot(&pts[v])).fold(f64::NEG_INFINITY, f64::max);
                        emit(&[i], (f.normal, off), &mut facets);
                    }
                }
            }
        }
    }

    // A vertex is extreme iff its incident facet normals span R³.
    let mut incident: Vec<SmallVec<[usize; 8]>> = vec![SmallVec::new(); pts.len()];
    for &i in &alive {
        let c = face_cluster[i];
        if c == usize::MAX {
            continue;
        }
        for &v in &faces[i].v {
            let list = &mut incident[v];
            if !list.contains(&c) {
                list.push(c);
            }
        }
    }
    let spans = |cl: &[usize]| -> bool {
        for (x, &a) in cl.iter().enumerate() {
            for (y, &b) in cl.iter().enumerate().skip(x + 1) {
                let ab = facets[a].0.cross(&facets[b].0);
                if ab.norm() <= 1e-10 {
                    continue;
                }
                if cl.iter().skip(y + 1).any(|&c| ab.dot(&facets[c].0).abs() > 1e-10) {
                    return true;
                }
            }
        }
        false
    };
    let mut vertices: Vec<Point> =
        incident.iter().enumerate().filter(|(_, cl)| spans(cl)).map(|(v, _)| pts[v]).collect();
    vertices.sort_by(|a, b| a.lex_cmp(b));

    Some(Hull3 { vertices, facets, volume })
}
