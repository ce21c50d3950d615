//! Small simple graphs with bitmask adjacency (at most 64 vertices).

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A simple undirected graph on vertices 0..n, n <= 64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    edges: Vec<(usize, usize)>, // u < v, sorted
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Capacity(format!(
                "graphs are limited to {} vertices, got {}",
                MAX_VERTICES, n
            )));
        }
        let mut adj = vec![0u64; n];
        let mut canon = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Argument(format!(
                    "edge ({}, {}) out of range for {} vertices",
                    a, b, n
                )));
            }
            if a == b {
                return Err(Error::Argument(format!("loop at vertex {}", a)));
            }
            let (u, v) = (a.min(b), a.max(b));
            if adj[u] >> v & 1 == 1 {
                continue; // repeated edge
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            canon.push((u, v));
        }
        canon.sort_unstable();
        Ok(Self { n, adj, edges: canon })
    }

    /// Parse 1-based vertex pairs (the graph file convention).
    pub fn from_pairs_1based(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let shifted: Result<Vec<(usize, usize)>> = pairs
            .iter()
            .map(|&(a, b)| {
                if a == 0 || b == 0 {
                    Err(Error::Argument("vertices are 1-indexed".into()))
                } else {
                    Ok((a - 1, b - 1))
                }
            })
            .collect();
        Self::new(n, &shifted?)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Subgraph induced by deleting the vertices in `mask`, relabeled to
    /// 0..n' preserving the order of the survivors. Returns the graph and the
    /// old-to-new vertex map.
    pub fn delete_vertices(&self, mask: u64) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if mask >> v & 1 == 0 {
                map[v] = Some(next);
                next += 1;
            }
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((map[u]?, map[v]?)))
            .collect();
        let g = Graph::new(next, &edges).expect("subgraph of a valid graph");
        (g, map)
    }

    /// Parse the graph file format: first line "n", then one edge per line
    /// "u v" (1-indexed); '#' lines are comments.
    pub fn from_reader(reader: impl std::io::BufRead) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut pairs = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match n {
                None => {
                    if fields.len() != 1 {
                        return Err(Error::Parse(format!("expected header \"n\", got {:?}", line)));
                    }
                    n = Some(
                        fields[0]
                            .parse()
                            .map_err(|e| Error::Parse(format!("bad n: {}", e)))?,
                    );
                }
                Some(_) => {
                    if fields.len() != 2 {
                        return Err(Error::Parse(format!("expected \"u v\", got {:?}", line)));
                    }
                    let u = fields[0]
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad vertex: {}", e)))?;
                    let v = fields[1]
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad vertex: {}", e)))?;
                    pairs.push((u, v));
                }
            }
        }
        let n = n.ok_or_else(|| Error::Parse("empty graph file".into()))?;
        Self::from_pairs_1based(n, &pairs)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }
}
