//! Bowyer–Watson Delaunay triangulation on integer coordinates.
//!
//! Hull edges are handled with ghost triangles sharing one vertex at
//! infinity, so no bounding super-triangle is needed and the output always
//! covers the convex hull. Predicates are exact for coordinates below 2^30.

use std::collections::HashMap;

use crate::{Error, Result};

const INF: u32 = u32::MAX;

/// Largest allowed absolute coordinate.
pub const MAX_COORD: i64 = 1 << 30;

#[derive(Debug, Clone, Default)]
pub struct Triangulation {
    /// Counter-clockwise real triangles.
    pub triangles: Vec<[u32; 3]>,
    /// Undirected edges, each once, smaller endpoint first.
    pub edges: Vec<(u32, u32)>,
}

#[inline]
fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i128 {
    (b.0 - a.0) as i128 * (c.1 - a.1) as i128 - (b.1 - a.1) as i128 * (c.0 - a.0) as i128
}

/// Positive iff `d` lies strictly inside the circle through the
/// counter-clockwise triangle `a b c`.
pub fn incircle(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> i128 {
    let row = |p: (i64, i64)| {
        let x = (p.0 - d.0) as i128;
        let y = (p.1 - d.1) as i128;
        (x, y, x * x + y * y)
    };
    let (ax, ay, a2) = row(a);
    let (bx, by, b2) = row(b);
    let (cx, cy, c2) = row(c);
    ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx)
}

struct Mesh<'a> {
    pts: &'a [(i64, i64)],
    v: Vec<[u32; 3]>,
    nb: Vec<[u32; 3]>,
    dead: Vec<bool>,
    free: Vec<u32>,
    stamp: Vec<u32>,
    gen: u32,
    last: u32,
}

impl<'a> Mesh<'a> {
    fn pt(&self, i: u32) -> (i64, i64) {
        self.pts[i as usize]
    }

    fn is_ghost(&self, t: u32) -> bool {
        self.v[t as usize].contains(&INF)
    }

    fn alloc(&mut self, v: [u32; 3]) -> u32 {
        if let Some(t) = self.free.pop() {
            self.v[t as usize] = v;
            self.nb[t as usize] = [INF; 3];
            self.dead[t as usize] = false;
            t
        } else {
            self.v.push(v);
            self.nb.push([INF; 3]);
            self.dead.push(false);
            self.stamp.push(0);
            (self.v.len() - 1) as u32
        }
    }

    fn conflict(&self, t: u32, p: (i64, i64)) -> bool {
        let [a, b, c] = self.v[t as usize];
        if a != INF && b != INF && c != INF {
            return incircle(self.pt(a), self.pt(b), self.pt(c), p) > 0;
        }
        // Ghost (x, y, INF): the outside region lies left of x -> y.
        let (x, y) = if a == INF {
            (b, c)
        } else if b == INF {
            (c, a)
        } else {
            (a, b)
        };
        let (x, y) = (self.pt(x), self.pt(y));
        let o = orient(x, y, p);
        if o != 0 {
            return o > 0;
        }
        let dot = |u: (i64, i64), w: (i64, i64)| {
            (p.0 - u.0) as i128 * (w.0 - u.0) as i128 + (p.1 - u.1) as i128 * (w.1 - u.1) as i128
        };
        dot(x, y) > 0 && dot(y, x) > 0
    }

    /// Visibility walk from the last created triangle.
    fn locate(&self, p: (i64, i64)) -> u32 {
        let mut t = self.last;
        let mut turn = 0usize;
        loop {
            let vs = self.v[t as usize];
            let mut moved = false;
            for k in 0..3 {
                let i = (k + turn) % 3;
                let (u, w) = (vs[(i + 1) % 3], vs[(i + 2) % 3]);
                if orient(self.pt(u), self.pt(w), p) < 0 {
                    t = self.nb[t as usize][i];
                    moved = true;
                    break;
                }
            }
            turn += 1;
            if !moved || self.is_ghost(t) {
                return t;
            }
        }
    }

    fn insert(&mut self, p_id: u32) {
        let p = self.pt(p_id);
        let start = self.locate(p);
        debug_assert!(self.conflict(start, p));
        self.gen += 1;
        let gen = self.gen;
        let mut cavity = vec![start];
        self.stamp[start as usize] = gen;
        let mut i = 0;
        while i < cavity.len() {
            let t = cavity[i];
            i += 1;
            for k in 0..3 {
                let o = self.nb[t as usize][k];
                if self.stamp[o as usize] != gen && self.conflict(o, p) {
                    self.stamp[o as usize] = gen;
                    cavity.push(o);
                }
            }
        }
        let mut boundary = Vec::new();
        for &t in &cavity {
            for k in 0..3 {
                let o = self.nb[t as usize][k];
                if self.stamp[o as usize] != gen {
                    let vs = self.v[t as usize];
                    boundary.push((vs[(k + 1) % 3], vs[(k + 2) % 3], o, t));
                }
            }
        }
        for &t in &cavity {
            self.dead[t as usize] = true;
        }
        let mut by_start: HashMap<u32, u32> = HashMap::with_capacity(boundary.len());
        let mut created = Vec::with_capacity(boundary.len());
        for &(u, w, o, old) in &boundary {
            let n = self.alloc([u, w, p_id]);
            self.nb[n as usize][2] = o;
            let slot = self.nb[o as usize].iter().position(|&x| x == old).unwrap();
            self.nb[o as usize][slot] = n;
            by_start.insert(u, n);
            created.push((n, w));
        }
        // Freed only now so that new ids never alias `old` above.
        self.free.extend_from_slice(&cavity);
        for &(n, w) in &created {
            let m = by_start[&w];
            self.nb[n as usize][0] = m;
            self.nb[m as usize][1] = n;
            if !self.is_ghost(n) {
                self.last = n;
            }
        }
    }
}

/// Hilbert-curve index of a point on a 2^16 grid.
pub(crate) fn hilbert(mut x: u32, mut y: u32) -> u64 {
    let mut d = 0u64;
    let mut s = 1u32 << 15;
    while s > 0 {
        let rx = (x & s > 0) as u32;
        let ry = (y & s > 0) as u32;
        d += s as u64 * s as u64 * ((3 * rx) ^ ry) as u64;
        if ry == 0 {
            if rx == 1 {
                x = 0xffff - x;
                y = 0xffff - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

/// Triangulates distinct points. Fails when fewer than three points are
/// given or all points are collinear.
pub fn triangulate(pts: &[(i64, i64)]) -> Result<Triangulation> {
    if pts.len() < 3 {
        return Err(Error::Generator("triangulation needs at least 3 points".into()));
    }
    if pts.iter().any(|p| p.0.abs() > MAX_COORD || p.1.abs() > MAX_COORD) {
        return Err(Error::Generator("coordinates out of range".into()));
    }
    let (minx, miny) = pts.iter().fold((i64::MAX, i64::MAX), |m, p| (m.0.min(p.0), m.1.min(p.1)));
    let (maxx, maxy) = pts.iter().fold((i64::MIN, i64::MIN), |m, p| (m.0.max(p.0), m.1.max(p.1)));
    let span = (maxx - minx).max(maxy - miny).max(1) as i128;
    let scaled = |c: i64, lo: i64| ((c - lo) as i128 * 0xffff / span) as u32;
    let mut order: Vec<u32> = (0..pts.len() as u32).collect();
    let keys: Vec<u64> = pts.iter().map(|p| hilbert(scaled(p.0, minx), scaled(p.1, miny))).collect();
    order.sort_by_key(|&i| (keys[i as usize], i));
    {
        let mut seen = std::collections::HashSet::with_capacity(pts.len());
        if let Some(p) = pts.iter().find(|p| !seen.insert(**p)) {
            return Err(Error::Generator(format!("duplicate point {p:?}")));
        }
    }
    let (a, b) = (order[0], order[1]);
    let Some(k) = (2..order.len()).find(|&k| orient(pts[a as usize], pts[b as usize], pts[order[k] as usize]) != 0) else {
        return Err(Error::Generator("all points are collinear".into()));
    };
    let c = order.remove(k);
    let (b, c) = if orient(pts[a as usize], pts[b as usize], pts[c as usize]) > 0 { (b, c) } else { (c, b) };
    let mut mesh =
        Mesh { pts, v: Vec::new(), nb: Vec::new(), dead: Vec::new(), free: Vec::new(), stamp: Vec::new(), gen: 0, last: 0 };
    let t0 = mesh.alloc([a, b, c]);
    let gab = mesh.alloc([b, a, INF]);
    let gbc = mesh.alloc([c, b, INF]);
    let gca = mesh.alloc([a, c, INF]);
    mesh.nb[t0 as usize] = [gbc, gca, gab];
    mesh.nb[gab as usize] = [gca, gbc, t0];
    mesh.nb[gbc as usize] = [gab, gca, t0];
    mesh.nb[gca as usize] = [gbc, gab, t0];
    mesh.last = t0;
    for &p in &order[2..] {
        if p != a && p != b && p != c {
            mesh.insert(p);
        }
    }
    let mut out = Triangulation::default();
    for t in 0..mesh.v.len() as u32 {
        if mesh.dead[t as usize] || mesh.is_ghost(t) {
            continue;
        }
        let vs = mesh.v[t as usize];
        out.triangles.push(vs);
        for i in 0..3 {
            let o = mesh.nb[t as usize][i];
            if mesh.is_ghost(o) || o > t {
                let (u, w) = (vs[(i + 1) % 3], vs[(i + 2) % 3]);
                out.edges.push((u.min(w), u.max(w)));
            }
        }
    }
    out.edges.sort_unstable();
    Ok(out)
}

/// Number of (triangle, point) pairs where the point lies strictly inside
/// the triangle's circumcircle. Quadratic; meant for checks on small inputs.
pub fn empty_circle_violations(pts: &[(i64, i64)], triangles: &[[u32; 3]]) -> usize {
    let mut bad = 0;
    for t in triangles {
        let [a, b, c] = t.map(|i| pts[i as usize]);
        for (i, &p) in pts.iter().enumerate() {
            if t.contains(&(i as u32)) {
                continue;
            }
            if incircle(a, b, c, p) > 0 {
                bad += 1;
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn square_has_five_edges() {
        let t = triangulate(&[(0, 0), (10, 0), (10, 10), (0, 10)]).unwrap();
        assert_eq!(t.edges.len(), 5);
        assert_eq!(t.triangles.len(), 2);
    }

    #[test]
    fn random_points_are_delaunay_and_planar() {
        let mut rng = SplitMix64::new(3);
        for n in [3usize, 4, 10, 57, 200] {
            let mut pts = std::collections::BTreeSet::new();
            while pts.len() < n {
                pts.insert((rng.range_i64(0, 1000), rng.range_i64(0, 1000)));
            }
            let pts: Vec<_> = pts.into_iter().collect();
            let t = triangulate(&pts).unwrap();
            assert_eq!(empty_circle_violations(&pts, &t.triangles), 0);
            // Euler: e = 3n - 3 - h, f = 2n - 2 - h
            let h = 3 * n - 3 - t.edges.len();
            assert_eq!(t.triangles.len(), 2 * n - 2 - h);
            for tri in &t.triangles {
                let [a, b, c] = tri.map(|i| pts[i as usize]);
                assert!(orient(a, b, c) > 0);
            }
        }
    }

    #[test]
    fn grid_with_collinear_and_cocircular_points() {
        let mut pts = Vec::new();
        for x in 0..12 {
            for y in 0..9 {
                pts.push((x * 5, y * 5));
            }
        }
        let t = triangulate(&pts).unwrap();
        assert_eq!(empty_circle_violations(&pts, &t.triangles), 0);
        let n = pts.len();
        let h = 2 * (12 + 9) - 4;
        assert_eq!(t.edges.len(), 3 * n - 3 - h);
    }

    #[test]
    fn collinear_input_is_rejected() {
        assert!(triangulate(&[(0, 0), (1, 1), (2, 2), (3, 3)]).is_err());
    }
}
