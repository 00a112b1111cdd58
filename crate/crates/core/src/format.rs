//! DIMACS-style text formats for instances and solutions.
//!
//! Instance: `p edge <n> <m>` followed by `m` lines `e <u> <v> <w>` with
//! 1-based endpoints. Lines starting with `c` are comments.
//!
//! Solution: `s <total_weight>` then one `m <u> <v>` line per matched edge, or
//! the single line `s INFEASIBLE`. A certificate may follow: `scale <k>`, then
//! `y <v> <val>` per vertex and `Y <k> <v1> .. <vk> <val>` per odd set, where
//! every dual value is `k` times the real dual.

use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};

/// Largest accepted absolute input weight.
pub const MAX_ABS_WEIGHT: i64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputEdge {
    pub u: u32,
    pub v: u32,
    pub w: i64,
}

/// An immutable weighted graph. Vertices are `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Instance {
    pub n: usize,
    pub edges: Vec<InputEdge>,
}

impl Instance {
    pub fn new(n: usize, edges: Vec<InputEdge>) -> Result<Self> {
        let inst = Instance { n, edges };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_triples(n: usize, triples: &[(u32, u32, i64)]) -> Result<Self> {
        Self::new(
            n,
            triples.iter().map(|&(u, v, w)| InputEdge { u, v, w }).collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n > u32::MAX as usize / 2 {
            return Err(Error::Instance(format!("too many vertices: {}", self.n)));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.u as usize >= self.n || e.v as usize >= self.n {
                return Err(Error::Instance(format!("edge {i} has an endpoint out of range")));
            }
            if e.u == e.v {
                return Err(Error::Instance(format!("edge {i} is a self-loop")));
            }
            if e.w.abs() > MAX_ABS_WEIGHT {
                return Err(Error::Instance(format!("edge {i} weight exceeds 2^40")));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::read(text.as_bytes())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let mut tok = line.split_whitespace();
            let Some(kind) = tok.next() else { continue };
            let err = |msg: &str| Error::Parse { line: lineno, msg: msg.to_string() };
            match kind {
                "c" => continue,
                "p" => {
                    if header.is_some() {
                        return Err(err("duplicate problem line"));
                    }
                    if tok.next() != Some("edge") {
                        return Err(err("expected `p edge <n> <m>`"));
                    }
                    let n = parse_num::<usize>(tok.next(), lineno, "vertex count")?;
                    let m = parse_num::<usize>(tok.next(), lineno, "edge count")?;
                    edges.reserve(m);
                    header = Some((n, m));
                }
                "e" => {
                    let Some((n, _)) = header else {
                        return Err(err("edge before problem line"));
                    };
                    let u = parse_num::<u64>(tok.next(), lineno, "endpoint")?;
                    let v = parse_num::<u64>(tok.next(), lineno, "endpoint")?;
                    let w = parse_num::<i64>(tok.next(), lineno, "weight")?;
                    if u == 0 || v == 0 || u as usize > n || v as usize > n {
                        return Err(err("endpoint out of range"));
                    }
                    if u == v {
                        return Err(err("self-loop"));
                    }
                    if w.abs() > MAX_ABS_WEIGHT {
                        return Err(err("weight exceeds 2^40 in absolute value"));
                    }
                    edges.push(InputEdge { u: (u - 1) as u32, v: (v - 1) as u32, w });
                }
                _ => return Err(err(&format!("unknown line type `{kind}`"))),
            }
        }
        let Some((n, m)) = header else {
            return Err(Error::Parse { line: 0, msg: "missing problem line".into() });
        };
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Self::new(n, edges)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read(std::io::BufReader::new(file))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::with_capacity(16 * self.edges.len() + 32);
        let _ = writeln!(out, "p edge {} {}", self.n, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.w);
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_dimacs())?;
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse::<T>()
        .map_err(|_| Error::Parse { line, msg: format!("bad {what} `{tok}`") })
}

/// Odd vertex set with its dual value, as written in a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetDual {
    pub vertices: Vec<u32>,
    pub value: i64,
}

/// Duals scaled by `scale`: the real dual of a vertex is `vertex[v] / scale`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub scale: i64,
    pub vertex: Vec<i64>,
    pub sets: Vec<SetDual>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionFile {
    Infeasible,
    Matched {
        weight: i64,
        /// 0-based vertex pairs.
        pairs: Vec<(u32, u32)>,
        certificate: Option<Certificate>,
    },
}

impl SolutionFile {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            SolutionFile::Infeasible => out.push_str("s INFEASIBLE\n"),
            SolutionFile::Matched { weight, pairs, certificate } => {
                let _ = writeln!(out, "s {weight}");
                for &(u, v) in pairs {
                    let _ = writeln!(out, "m {} {}", u + 1, v + 1);
                }
                if let Some(cert) = certificate {
                    let _ = writeln!(out, "scale {}", cert.scale);
                    for (v, y) in cert.vertex.iter().enumerate() {
                        let _ = writeln!(out, "y {} {}", v + 1, y);
                    }
                    for set in &cert.sets {
                        let _ = write!(out, "Y {}", set.vertices.len());
                        for v in &set.vertices {
                            let _ = write!(out, " {}", v + 1);
                        }
                        let _ = writeln!(out, " {}", set.value);
                    }
                }
            }
        }
        out
    }

    /// Parses a solution for an instance with `n` vertices.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut weight: Option<i64> = None;
        let mut infeasible = false;
        let mut pairs = Vec::new();
        let mut scale: Option<i64> = None;
        let mut vertex: Vec<Option<i64>> = Vec::new();
        let mut sets = Vec::new();
        let vertex_id = |tok: Option<&str>, line: usize| -> Result<u32> {
            let v = parse_num::<u64>(tok, line, "vertex")?;
            if v == 0 || v as usize > n {
                return Err(Error::Parse { line, msg: format!("vertex {v} out of range") });
            }
            Ok((v - 1) as u32)
        };
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let mut tok = line.split_whitespace();
            let Some(kind) = tok.next() else { continue };
            match kind {
                "c" => {}
                "s" => {
                    let t = tok.next();
                    if t == Some("INFEASIBLE") {
                        infeasible = true;
                    } else {
                        weight = Some(parse_num(t, lineno, "weight")?);
                    }
                }
                "m" => {
                    let u = vertex_id(tok.next(), lineno)?;
                    let v = vertex_id(tok.next(), lineno)?;
                    pairs.push((u, v));
                }
                "scale" => {
                    let k: i64 = parse_num(tok.next(), lineno, "scale")?;
                    if k <= 0 {
                        return Err(Error::Parse { line: lineno, msg: "scale must be positive".into() });
                    }
                    scale = Some(k);
                    vertex = vec![None; n];
                }
                "y" => {
                    if scale.is_none() {
                        vertex = vec![None; n];
                        scale = Some(1);
                    }
                    let v = vertex_id(tok.next(), lineno)?;
                    vertex[v as usize] = Some(parse_num(tok.next(), lineno, "dual")?);
                }
                "Y" => {
                    let k: usize = parse_num(tok.next(), lineno, "set size")?;
                    let mut vs = Vec::with_capacity(k);
                    for _ in 0..k {
                        vs.push(vertex_id(tok.next(), lineno)?);
                    }
                    let value = parse_num(tok.next(), lineno, "set dual")?;
                    sets.push(SetDual { vertices: vs, value });
                }
                _ => {
                    return Err(Error::Parse { line: lineno, msg: format!("unknown line type `{kind}`") })
                }
            }
        }
        if infeasible {
            return Ok(SolutionFile::Infeasible);
        }
        let weight = weight.ok_or(Error::Parse { line: 0, msg: "missing `s` line".into() })?;
        let certificate = match scale {
            None => {
                if !sets.is_empty() {
                    return Err(Error::Parse { line: 0, msg: "set duals without vertex duals".into() });
                }
                None
            }
            Some(scale) => {
                let vertex = vertex
                    .into_iter()
                    .enumerate()
                    .map(|(v, y)| {
                        y.ok_or(Error::Parse { line: 0, msg: format!("missing dual for vertex {}", v + 1) })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(Certificate { scale, vertex, sets })
            }
        };
        Ok(SolutionFile::Matched { weight, pairs, certificate })
    }
}
