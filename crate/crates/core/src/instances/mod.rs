//! Instance generators.

pub mod delaunay;
pub mod hull;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::rng::SplitMix64;
use crate::{Error, Instance, Result};

/// Integer grid used for exact geometric predicates.
pub const GRID: i64 = 1 << 26;

/// Weight range of the random families.
pub const RANDOM_WEIGHT: i64 = 1_000_000;

/// Box side of the big-weight geometric families.
pub const BIG_BOX: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    RandomDense,
    RandomSparse,
    DelaunayBw,
    DelaunaySw,
    GeometricBw,
    GeometricSw,
    MaxcutBw,
    MaxcutSw,
    PointsFile,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::RandomDense,
        Family::RandomSparse,
        Family::DelaunayBw,
        Family::DelaunaySw,
        Family::GeometricBw,
        Family::GeometricSw,
        Family::MaxcutBw,
        Family::MaxcutSw,
        Family::PointsFile,
    ];

    /// Families that can be generated from `(n, seed)` alone.
    pub const SYNTHETIC: [Family; 8] = [
        Family::RandomDense,
        Family::RandomSparse,
        Family::DelaunayBw,
        Family::DelaunaySw,
        Family::GeometricBw,
        Family::GeometricSw,
        Family::MaxcutBw,
        Family::MaxcutSw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomDense => "random-dense",
            Family::RandomSparse => "random-sparse",
            Family::DelaunayBw => "delaunay-bw",
            Family::DelaunaySw => "delaunay-sw",
            Family::GeometricBw => "geometric-bw",
            Family::GeometricSw => "geometric-sw",
            Family::MaxcutBw => "maxcut-bw",
            Family::MaxcutSw => "maxcut-sw",
            Family::PointsFile => "points-file",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Generator(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Uniform integers in `[0, 10^6]`.
    Big,
    /// Uniform over `{0, 1}`.
    Small,
}

/// Generates an instance of a synthetic family. For the max-cut families
/// the node count is `6k - 12` for the sphere point count `k` closest to
/// the request, so the result may differ from `n`.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    let GenSpec { family, n, seed } = *spec;
    if n == 0 || n % 2 == 1 {
        return Err(Error::Generator(format!("n must be even and positive, got {n}")));
    }
    let mut rng = SplitMix64::new(seed);
    match family {
        Family::RandomDense => Ok(gen_random(n, n as f64 / 10.0, RANDOM_WEIGHT, &mut rng)),
        Family::RandomSparse => Ok(gen_random(n, 10.0, RANDOM_WEIGHT, &mut rng)),
        Family::DelaunayBw => gen_delaunay(n, BIG_BOX, &mut rng),
        Family::DelaunaySw => gen_delaunay(n, (n as f64).sqrt(), &mut rng),
        Family::GeometricBw => Ok(gen_geometric(n, BIG_BOX, &mut rng)),
        Family::GeometricSw => Ok(gen_geometric(n, (n as f64).sqrt(), &mut rng)),
        Family::MaxcutBw => gen_maxcut(sphere_points_for(n), WeightMode::Big, &mut rng),
        Family::MaxcutSw => gen_maxcut(sphere_points_for(n), WeightMode::Small, &mut rng),
        Family::PointsFile => Err(Error::Generator("points-file instances are read with points_to_instance".into())),
    }
}

/// Sphere point count whose gadget graph has about `n` nodes.
pub fn sphere_points_for(n: usize) -> usize {
    ((n as f64 + 12.0) / 6.0).round().max(4.0) as usize
}

fn random_matching(n: usize, rng: &mut SplitMix64) -> Vec<(u32, u32)> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    rng.shuffle(&mut perm);
    perm.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect()
}

/// Random perfect matching plus uniform random pairs up to the target
/// average degree; weights uniform in `[-range, range]`.
pub fn gen_random(n: usize, avg_degree: f64, range: i64, rng: &mut SplitMix64) -> Instance {
    let total = n as u64 * (n as u64 - 1) / 2;
    let target = ((n as f64 * avg_degree / 2.0).round() as u64).clamp(n as u64 / 2, total);
    let mut seen: HashSet<(u32, u32)> = HashSet::with_capacity(target as usize);
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(target as usize);
    for p in random_matching(n, rng) {
        seen.insert(p);
        pairs.push(p);
    }
    while (pairs.len() as u64) < target {
        let u = rng.below(n as u64) as u32;
        let v = rng.below(n as u64) as u32;
        if u == v {
            continue;
        }
        let p = (u.min(v), u.max(v));
        if seen.insert(p) {
            pairs.push(p);
        }
    }
    rng.shuffle(&mut pairs);
    let triples: Vec<(u32, u32, i64)> = pairs.into_iter().map(|(u, v)| (u, v, rng.range_i64(-range, range))).collect();
    Instance::from_triples(n, &triples).expect("generated instance is valid")
}

fn rounded_length(a: (f64, f64), b: (f64, f64)) -> i64 {
    (a.0 - b.0).hypot(a.1 - b.1).round() as i64
}

/// Delaunay triangulation of `n` distinct random grid points in a square of
/// side `box_size`; weights are rounded Euclidean lengths.
pub fn gen_delaunay(n: usize, box_size: f64, rng: &mut SplitMix64) -> Result<Instance> {
    if n < 4 {
        return Err(Error::Generator(format!("triangulation families need n >= 4, got {n}")));
    }
    for _ in 0..100 {
        let mut seen = HashSet::with_capacity(n);
        let mut grid = Vec::with_capacity(n);
        while grid.len() < n {
            let p = (rng.below(GRID as u64) as i64, rng.below(GRID as u64) as i64);
            if seen.insert(p) {
                grid.push(p);
            }
        }
        let Ok(tri) = delaunay::triangulate(&grid) else { continue };
        let scale = box_size / GRID as f64;
        let real: Vec<(f64, f64)> = grid.iter().map(|&(x, y)| (x as f64 * scale, y as f64 * scale)).collect();
        return Ok(from_edges(n, &tri.edges, &real));
    }
    Err(Error::Generator("could not sample a non-degenerate point set".into()))
}

fn from_edges(n: usize, edges: &[(u32, u32)], pts: &[(f64, f64)]) -> Instance {
    let triples: Vec<(u32, u32, i64)> =
        edges.iter().map(|&(u, v)| (u, v, rounded_length(pts[u as usize], pts[v as usize]))).collect();
    Instance::from_triples(n, &triples).expect("generated instance is valid")
}

/// Random points in an `a x a` box joined when closer than
/// `a * sqrt(10 / (pi n))`, united with a random perfect matching.
pub fn gen_geometric(n: usize, a: f64, rng: &mut SplitMix64) -> Instance {
    let r = geometric_radius(n, a);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.unit_f64() * a, rng.unit_f64() * a)).collect();
    let cells = ((a / r).floor() as i64).max(1);
    let cell_of = |p: (f64, f64)| {
        let cx = ((p.0 / a * cells as f64) as i64).min(cells - 1);
        let cy = ((p.1 / a * cells as f64) as i64).min(cells - 1);
        (cx, cy)
    };
    let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for (i, &p) in pts.iter().enumerate() {
        buckets.entry(cell_of(p)).or_default().push(i as u32);
    }
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut pairs = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        let (cx, cy) = cell_of(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(list) = buckets.get(&(cx + dx, cy + dy)) else { continue };
                for &j in list {
                    if j as usize > i {
                        let q = pts[j as usize];
                        if (p.0 - q.0).hypot(p.1 - q.1) <= r {
                            seen.insert((i as u32, j));
                            pairs.push((i as u32, j));
                        }
                    }
                }
            }
        }
    }
    for p in random_matching(n, rng) {
        if seen.insert(p) {
            pairs.push(p);
        }
    }
    pairs.sort_unstable();
    from_edges(n, &pairs, &pts)
}

pub fn geometric_radius(n: usize, a: f64) -> f64 {
    a * (10.0 / (std::f64::consts::PI * n as f64)).sqrt()
}

/// Planar max-cut gadget: the dual of the hull of random sphere points with
/// every dual node replaced by a zero-weight triangle.
pub fn gen_maxcut(sphere_points: usize, mode: WeightMode, rng: &mut SplitMix64) -> Result<Instance> {
    if sphere_points < 4 {
        return Err(Error::Generator(format!("need at least 4 sphere points, got {sphere_points}")));
    }
    const SCALE: f64 = (1u64 << 20) as f64;
    for _ in 0..100 {
        let mut seen = HashSet::new();
        let mut pts = Vec::with_capacity(sphere_points);
        while pts.len() < sphere_points {
            let z = rng.unit_f64() * 2.0 - 1.0;
            let phi = rng.unit_f64() * std::f64::consts::TAU;
            let s = (1.0 - z * z).sqrt();
            let p = [s * phi.cos(), s * phi.sin(), z].map(|c| (c * SCALE).round() as i64);
            if seen.insert(p) {
                pts.push(p);
            }
        }
        let Some(faces) = hull::sphere_hull(&pts) else { continue };
        return Ok(gadget(&faces, mode, rng));
    }
    Err(Error::Generator("could not sample a non-degenerate sphere point set".into()))
}

fn gadget(faces: &[[u32; 3]], mode: WeightMode, rng: &mut SplitMix64) -> Instance {
    let f = faces.len();
    let mut slot: HashMap<(u32, u32), u32> = HashMap::with_capacity(3 * f);
    for (k, face) in faces.iter().enumerate() {
        for i in 0..3 {
            slot.insert((face[(i + 1) % 3], face[(i + 2) % 3]), (3 * k + i) as u32);
        }
    }
    let mut triples = Vec::with_capacity(3 * f + 3 * f / 2);
    for k in 0..f as u32 {
        triples.push((3 * k, 3 * k + 1, 0));
        triples.push((3 * k + 1, 3 * k + 2, 0));
        triples.push((3 * k, 3 * k + 2, 0));
    }
    for (k, face) in faces.iter().enumerate() {
        for i in 0..3 {
            let (u, w) = (face[(i + 1) % 3], face[(i + 2) % 3]);
            let here = (3 * k + i) as u32;
            let there = slot[&(w, u)];
            if here < there {
                let weight = match mode {
                    WeightMode::Big => rng.range_i64(0, RANDOM_WEIGHT),
                    WeightMode::Small => rng.range_i64(0, 1),
                };
                triples.push((here, there, weight));
            }
        }
    }
    Instance::from_triples(3 * f, &triples).expect("generated instance is valid")
}

/// Parses whitespace-separated `x y` pairs and triangulates them, dropping
/// the last point when the count is odd.
pub fn points_to_instance(text: &str) -> Result<Instance> {
    let mut coords = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("c ") {
            continue;
        }
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Parse { line: lineno + 1, msg: format!("bad coordinate `{tok}`") })?;
            if !v.is_finite() {
                return Err(Error::Parse { line: lineno + 1, msg: format!("bad coordinate `{tok}`") });
            }
            coords.push(v);
        }
    }
    if coords.len() % 2 == 1 {
        return Err(Error::Parse { line: text.lines().count(), msg: "odd number of coordinates".into() });
    }
    let mut pts: Vec<(f64, f64)> = coords.chunks(2).map(|c| (c[0], c[1])).collect();
    if pts.len() % 2 == 1 {
        pts.pop();
    }
    if pts.len() < 4 {
        return Err(Error::Generator(format!("need at least 4 points, got {}", pts.len())));
    }
    let (minx, miny) = pts.iter().fold((f64::MAX, f64::MAX), |m, p| (m.0.min(p.0), m.1.min(p.1)));
    let (maxx, maxy) = pts.iter().fold((f64::MIN, f64::MIN), |m, p| (m.0.max(p.0), m.1.max(p.1)));
    let span = (maxx - minx).max(maxy - miny);
    let scale = if span > 0.0 { (GRID - 1) as f64 / span } else { 1.0 };
    // Coinciding grid points are nudged to a free neighbour cell.
    let mut rng = SplitMix64::new(0);
    let mut seen = HashSet::with_capacity(pts.len());
    let mut grid = Vec::with_capacity(pts.len());
    for p in &pts {
        let mut g = (((p.0 - minx) * scale).round() as i64, ((p.1 - miny) * scale).round() as i64);
        while !seen.insert(g) {
            g = (g.0 + rng.range_i64(-1, 1), g.1 + rng.range_i64(-1, 1));
        }
        grid.push(g);
    }
    let tri = delaunay::triangulate(&grid)?;
    Ok(from_edges(pts.len(), &tri.edges, &pts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_roundtrip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("delaunay".parse::<Family>().is_err());
    }

    #[test]
    fn small_random_instance_contains_a_matching() {
        let inst = gen_random(4, 3.0, 10, &mut SplitMix64::new(1));
        assert!(inst.m() <= 6 && inst.m() >= 2);
    }

    #[test]
    fn radius_for_ten_points() {
        assert_eq!(geometric_radius(10, 1e6).floor(), 564189.0);
    }

    #[test]
    fn tetrahedron_gadget_counts() {
        let inst = gen_maxcut(4, WeightMode::Big, &mut SplitMix64::new(5)).unwrap();
        assert_eq!((inst.n, inst.m()), (12, 18));
        let mut deg = vec![0; inst.n];
        for e in &inst.edges {
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        assert!(deg.iter().all(|&d| d == 3));
    }

    #[test]
    fn points_file_drops_the_last_odd_point() {
        let inst = points_to_instance("0 0\n1 0.1\n2 -0.1\n3 0.2\n4 0\n").unwrap();
        assert_eq!(inst.n, 4);
        let square = points_to_instance("0 0\n1 0\n1 1\n0 1\n").unwrap();
        assert_eq!(square.m(), 5);
        assert!(points_to_instance("0 0\n1 1\n2 2\n").is_err());
    }
}
