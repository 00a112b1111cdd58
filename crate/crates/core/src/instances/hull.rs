//! Incremental convex hull of points on a sphere.

use std::collections::HashMap;

use super::delaunay::hilbert;

#[inline]
fn orient3d(a: [i64; 3], b: [i64; 3], c: [i64; 3], d: [i64; 3]) -> i128 {
    let u = [0, 1, 2].map(|i| (b[i] - a[i]) as i128);
    let v = [0, 1, 2].map(|i| (c[i] - a[i]) as i128);
    let w = [0, 1, 2].map(|i| (d[i] - a[i]) as i128);
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0])
}

/// Triangular faces of the hull, counter-clockwise seen from outside.
/// Returns `None` if the points are degenerate or some point is not a hull
/// vertex. Coordinates must stay below 2^40 in absolute value.
pub fn sphere_hull(pts: &[[i64; 3]]) -> Option<Vec<[u32; 3]>> {
    if pts.len() < 4 {
        return None;
    }
    let span = pts.iter().flat_map(|p| p.iter()).map(|c| c.unsigned_abs()).max().unwrap_or(1).max(1) as f64;
    let key = |p: &[i64; 3]| {
        let lon = (p[1] as f64).atan2(p[0] as f64) / std::f64::consts::TAU + 0.5;
        let z = p[2] as f64 / span * 0.5 + 0.5;
        hilbert((lon * 65535.0) as u32 & 0xffff, (z * 65535.0) as u32 & 0xffff)
    };
    let mut order: Vec<u32> = (0..pts.len() as u32).collect();
    order.sort_by_key(|&i| (key(&pts[i as usize]), i));
    let p = |i: u32| pts[i as usize];
    // First simplex.
    let a = order[0];
    let b = *order.iter().find(|&&i| p(i) != p(a))?;
    let cross_zero = |c: u32| {
        let (u, v) = ([0, 1, 2].map(|k| p(b)[k] - p(a)[k]), [0, 1, 2].map(|k| p(c)[k] - p(a)[k]));
        let x = [
            u[1] as i128 * v[2] as i128 - u[2] as i128 * v[1] as i128,
            u[2] as i128 * v[0] as i128 - u[0] as i128 * v[2] as i128,
            u[0] as i128 * v[1] as i128 - u[1] as i128 * v[0] as i128,
        ];
        x == [0, 0, 0]
    };
    let c = *order.iter().find(|&&i| !cross_zero(i))?;
    let d = *order.iter().find(|&&i| orient3d(p(a), p(b), p(c), p(i)) != 0)?;
    let mut faces: Vec<[u32; 3]> = Vec::new();
    for (f, other) in [([a, b, c], d), ([a, b, d], c), ([a, c, d], b), ([b, c, d], a)] {
        if orient3d(p(f[0]), p(f[1]), p(f[2]), p(other)) > 0 {
            faces.push([f[0], f[2], f[1]]);
        } else {
            faces.push(f);
        }
    }
    let mut nb: Vec<[u32; 3]> = vec![[u32::MAX; 3]; 4];
    let link = |faces: &[[u32; 3]], nb: &mut Vec<[u32; 3]>, ids: &[u32]| {
        let mut map = HashMap::new();
        for &f in ids {
            for i in 0..3 {
                let v = faces[f as usize];
                map.insert((v[(i + 1) % 3], v[(i + 2) % 3]), (f, i));
            }
        }
        for &f in ids {
            for i in 0..3 {
                let v = faces[f as usize];
                if let Some(&(g, _)) = map.get(&(v[(i + 2) % 3], v[(i + 1) % 3])) {
                    nb[f as usize][i] = g;
                }
            }
        }
    };
    link(&faces, &mut nb, &[0, 1, 2, 3]);
    let mut dead = vec![false; 4];
    let mut stamp = vec![0u32; 4];
    let mut free: Vec<u32> = Vec::new();
    let mut gen = 0u32;
    let mut recent: Vec<u32> = vec![0, 1, 2, 3];
    for &q in &order {
        if q == a || q == b || q == c || q == d {
            continue;
        }
        let pq = p(q);
        let visible = |f: u32, faces: &[[u32; 3]]| {
            let v = faces[f as usize];
            orient3d(p(v[0]), p(v[1]), p(v[2]), pq) > 0
        };
        // Recently created faces are closest in the spatial order.
        let start = recent.iter().rev().copied().find(|&f| !dead[f as usize] && visible(f, &faces)).or_else(|| {
            (0..faces.len() as u32).find(|&f| !dead[f as usize] && visible(f, &faces))
        })?;
        gen += 1;
        let mut region = vec![start];
        stamp[start as usize] = gen;
        let mut i = 0;
        while i < region.len() {
            let f = region[i];
            i += 1;
            for k in 0..3 {
                let g = nb[f as usize][k];
                if stamp[g as usize] != gen && visible(g, &faces) {
                    stamp[g as usize] = gen;
                    region.push(g);
                }
            }
        }
        let mut horizon = Vec::new();
        for &f in &region {
            for k in 0..3 {
                let g = nb[f as usize][k];
                if stamp[g as usize] != gen {
                    let v = faces[f as usize];
                    horizon.push((v[(k + 1) % 3], v[(k + 2) % 3], g, f));
                }
            }
        }
        for &f in &region {
            dead[f as usize] = true;
        }
        recent.clear();
        let mut by_start = HashMap::with_capacity(horizon.len());
        let mut created = Vec::with_capacity(horizon.len());
        for &(u, w, g, old) in &horizon {
            let n = match free.pop() {
                Some(n) => {
                    faces[n as usize] = [u, w, q];
                    dead[n as usize] = false;
                    n
                }
                None => {
                    faces.push([u, w, q]);
                    nb.push([u32::MAX; 3]);
                    dead.push(false);
                    stamp.push(0);
                    (faces.len() - 1) as u32
                }
            };
            nb[n as usize][2] = g;
            let slot = nb[g as usize].iter().position(|&x| x == old).unwrap();
            nb[g as usize][slot] = n;
            by_start.insert(u, n);
            created.push((n, w));
            recent.push(n);
        }
        free.extend_from_slice(&region);
        for &(n, w) in &created {
            let m = by_start[&w];
            nb[n as usize][0] = m;
            nb[m as usize][1] = n;
        }
    }
    let out: Vec<[u32; 3]> = (0..faces.len()).filter(|&f| !dead[f]).map(|f| faces[f]).collect();
    // Every point must be a hull vertex: Euler gives F = 2V - 4.
    (out.len() == 2 * pts.len() - 4).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron() {
        let pts = [[0, 0, 0], [10, 0, 0], [0, 10, 0], [0, 0, 10]];
        let faces = sphere_hull(&pts).unwrap();
        assert_eq!(faces.len(), 4);
        for f in &faces {
            let other = (0..4u32).find(|i| !f.contains(i)).unwrap();
            assert!(orient3d(pts[f[0] as usize], pts[f[1] as usize], pts[f[2] as usize], pts[other as usize]) < 0);
        }
    }

    #[test]
    fn octahedron_with_interior_point_is_rejected() {
        let mut pts = vec![[9, 0, 0], [-9, 0, 0], [0, 9, 0], [0, -9, 0], [0, 0, 9], [0, 0, -9]];
        let faces = sphere_hull(&pts).unwrap();
        assert_eq!(faces.len(), 8);
        pts.push([0, 0, 1]);
        assert!(sphere_hull(&pts).is_none());
    }
}
