//! Standard rooted-graph families and their closed-form expressions for
//! M_{R,G}, used as oracles against the exhaustive subgraph minimization.

use crate::error::{Error, Result};

use super::graph::Graph;
use super::RootedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// K_k rooted at a single vertex, k >= 2.
    RootedClique { k: usize },
    /// K_{roots, others} rooted at the whole `roots` side.
    BipartiteOneSide { roots: usize, others: usize },
    /// P_k (path on k vertices) rooted at both endpoints, k >= 3.
    RootedPath { k: usize },
    /// C_{k-1} (cycle on k - 1 vertices) rooted at one vertex, k >= 4.
    RootedCycle { k: usize },
}

impl Family {
    /// Build the rooted graph of the family.
    pub fn build(&self) -> Result<RootedGraph> {
        match *self {
            Family::RootedClique { k } => {
                if k < 2 {
                    return Err(Error::Argument("rooted clique needs k >= 2".into()));
                }
                RootedGraph::new(Graph::complete(k)?, 0b1)
            }
            Family::BipartiteOneSide { roots, others } => {
                if roots == 0 || others == 0 {
                    return Err(Error::Argument("bipartite sides must be nonempty".into()));
                }
                let mut edges = Vec::new();
                for a in 0..roots {
                    for b in 0..others {
                        edges.push((a, roots + b));
                    }
                }
                let mask = (1u64 << roots) - 1;
                RootedGraph::new(Graph::new(roots + others, &edges)?, mask)
            }
            Family::RootedPath { k } => {
                if k < 3 {
                    return Err(Error::Argument("rooted path needs k >= 3".into()));
                }
                let edges: Vec<(usize, usize)> = (0..k - 1).map(|i| (i, i + 1)).collect();
                RootedGraph::new(Graph::new(k, &edges)?, 1 | 1 << (k - 1))
            }
            Family::RootedCycle { k } => {
                if k < 4 {
                    return Err(Error::Argument("rooted cycle needs k >= 4".into()));
                }
                let len = k - 1;
                let mut edges: Vec<(usize, usize)> = (0..len - 1).map(|i| (i, i + 1)).collect();
                edges.push((len - 1, 0));
                RootedGraph::new(Graph::new(len, &edges)?, 0b1)
            }
        }
    }
}

/// Closed-form M_{R,G} for the family at (n, p).
pub fn closed_form_m(family: Family, n: u64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Argument(format!("p = {} must lie strictly in (0, 1)", p)));
    }
    let nf = n as f64;
    match family {
        Family::RootedClique { k } => {
            if k < 2 {
                return Err(Error::Argument("rooted clique needs k >= 2".into()));
            }
            Ok((nf * p).min(nf * nf * p.powi(k as i32)))
        }
        Family::BipartiteOneSide { roots, others } => {
            if roots == 0 || others == 0 {
                return Err(Error::Argument("bipartite sides must be nonempty".into()));
            }
            // Δ_S(G): every non-root vertex sees all `roots` roots
            Ok(nf * p.powi(roots as i32))
        }
        Family::RootedPath { k } => {
            if k < 3 {
                return Err(Error::Argument("rooted path needs k >= 3".into()));
            }
            path_m(k, nf, p)
        }
        Family::RootedCycle { k } => {
            if k < 4 {
                return Err(Error::Argument("rooted cycle needs k >= 4".into()));
            }
            // M_{R', C_{k-1}} = M_{R, P_k}
            path_m(k, nf, p)
        }
    }
}

/// min( min_{1<=l<=k-3} (n^l p^l)^{1/⌈l/2⌉}, (n^{k-2} p^{k-1})^{1/⌈(k-2)/2⌉} )
fn path_m(k: usize, n: f64, p: f64) -> Result<f64> {
    let mut best = f64::INFINITY;
    for l in 1..=k.saturating_sub(3) {
        let exp = 1.0 / (l as f64 / 2.0).ceil();
        best = best.min((n.powi(l as i32) * p.powi(l as i32)).powf(exp));
    }
    let exp = 1.0 / ((k as f64 - 2.0) / 2.0).ceil();
    best = best.min((n.powi(k as i32 - 2) * p.powi(k as i32 - 1)).powf(exp));
    Ok(best)
}
