//! Rooted graphs (G, R): fractional independence, the exponent base M_{R,G},
//! rooted density m_R(G), copy counting, tail-regime classification, and
//! blow-up lower-bound certificates.

pub mod alpha;
pub mod copies;
pub mod families;
pub mod graph;

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

pub use alpha::{alpha_star, AlphaStar};
pub use copies::{count_copies, count_embeddings, count_rooted_copies, rooted_automorphisms};
pub use families::{closed_form_m, Family};
pub use graph::Graph;

/// Default cap on e(G) for exhaustive subgraph enumeration (2^e subsets).
pub const DEFAULT_SUBGRAPH_GUARD: usize = 20;

/// A simple graph with a distinguished independent root set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    graph: Graph,
    roots: u64,
}

impl RootedGraph {
    pub fn new(graph: Graph, roots: u64) -> Result<Self> {
        let n = graph.vertex_count();
        let all: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
        if roots & !all != 0 {
            return Err(Error::Argument("root set mentions nonexistent vertices".into()));
        }
        let offending: Vec<(usize, usize)> = graph
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| roots >> u & 1 == 1 && roots >> v & 1 == 1)
            .collect();
        if !offending.is_empty() {
            return Err(Error::Validation(format!(
                "root set is not independent; offending edges (1-indexed): {:?}",
                offending
                    .iter()
                    .map(|&(u, v)| (u + 1, v + 1))
                    .collect::<Vec<_>>()
            )));
        }
        Ok(Self { graph, roots })
    }

    /// Roots given as 1-based vertex indices (the CLI convention).
    pub fn from_roots_1based(graph: Graph, roots: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &r in roots {
            if r == 0 || r > graph.vertex_count() {
                return Err(Error::Argument(format!(
                    "root {} outside [1, {}]",
                    r,
                    graph.vertex_count()
                )));
            }
            mask |= 1 << (r - 1);
        }
        Self::new(graph, mask)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn roots(&self) -> u64 {
        self.roots
    }

    pub fn root_count(&self) -> usize {
        self.roots.count_ones() as usize
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// e(G - R).
    pub fn edge_count_minus_roots(&self) -> usize {
        self.graph
            .edges()
            .iter()
            .filter(|&&(u, v)| self.roots >> u & 1 == 0 && self.roots >> v & 1 == 0)
            .count()
    }

    /// e_R(G) = e(G) - e(G - R), the edges incident with the root set.
    pub fn root_incident_edges(&self) -> usize {
        self.edge_count() - self.edge_count_minus_roots()
    }

    /// G - R, relabeled to 0..(v - r) preserving vertex order.
    pub fn minus_roots(&self) -> Graph {
        self.graph.delete_vertices(self.roots).0
    }

    /// The subgraph spanned by an edge subset (vertex set = endpoint set).
    pub fn subgraph(&self, edge_mask: u32) -> Subgraph {
        let mut vertex_mask = 0u64;
        let mut e = 0usize;
        for (i, &(u, v)) in self.graph.edges().iter().enumerate() {
            if edge_mask >> i & 1 == 1 {
                vertex_mask |= 1 << u | 1 << v;
                e += 1;
            }
        }
        Subgraph {
            edge_mask,
            edges: e,
            vertex_mask,
            vertices_minus_roots: (vertex_mask & !self.roots).count_ones() as usize,
        }
    }

    /// H - R for an edge-subset subgraph, relabeled to 0..v(H-R).
    /// Vertices of H whose neighbors all lie in R survive as isolated vertices.
    fn subgraph_minus_roots(&self, h: &Subgraph) -> Graph {
        let verts = h.vertex_mask & !self.roots;
        let mut map = vec![usize::MAX; self.graph.vertex_count()];
        let mut next = 0usize;
        for v in 0..self.graph.vertex_count() {
            if verts >> v & 1 == 1 {
                map[v] = next;
                next += 1;
            }
        }
        let edges: Vec<(usize, usize)> = self
            .graph
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, &(u, v))| {
                h.edge_mask >> i & 1 == 1
                    && self.roots >> u & 1 == 0
                    && self.roots >> v & 1 == 0
            })
            .map(|(_, &(u, v))| (map[u], map[v]))
            .collect();
        Graph::new(next, &edges).expect("subgraph of a valid graph")
    }

    /// Ψ_H^R = n^{v(H-R)} p^{e(H)}.
    pub fn psi(&self, h: &Subgraph, n: u64, p: f64) -> Result<f64> {
        if h.edge_mask >> self.edge_count() != 0 {
            return Err(Error::Argument("edge mask outside G".into()));
        }
        if (n as usize) < self.vertex_count() {
            return Err(Error::Argument(format!(
                "n = {} below v(G) = {}",
                n,
                self.vertex_count()
            )));
        }
        crate::hypergraph::check_probability(p)?;
        Ok((n as f64).powi(h.vertices_minus_roots as i32) * p.powi(h.edges as i32))
    }

    /// m_R(G) = max over subgraphs H with e(H) > 0 of e(H) / v(H-R).
    pub fn rooted_density(&self) -> Result<Ratio<i64>> {
        if self.edge_count() == 0 {
            return Err(Error::Argument("m_R(G) undefined for edgeless G".into()));
        }
        let mut best: Option<Ratio<i64>> = None;
        self.for_each_subgraph(|_, h| {
            let ratio = Ratio::new(h.edges as i64, h.vertices_minus_roots as i64);
            best = Some(match best {
                None => ratio,
                Some(b) => b.max(ratio),
            });
        })?;
        Ok(best.expect("at least one nonempty subgraph"))
    }

    /// M_{R,G} = min over subgraphs H with e(H) > 0 of (Ψ_H^R)^{1/α*(H-R)},
    /// with the minimizing edge subset (smallest mask on ties).
    pub fn min_exponent_base(&self, n: u64, p: f64) -> Result<MinExponent> {
        if self.edge_count() == 0 {
            return Err(Error::Argument("M_{R,G} undefined for edgeless G".into()));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Argument(format!("p = {} must lie strictly in (0, 1)", p)));
        }
        if (n as usize) < self.vertex_count() {
            return Err(Error::Argument(format!(
                "n = {} below v(G) = {}",
                n,
                self.vertex_count()
            )));
        }
        let ln_n = (n as f64).ln();
        let ln_p = p.ln();
        let mut best: Option<(f64, u32)> = None;
        self.for_each_subgraph(|rg, h| {
            let a = alpha_star(&rg.subgraph_minus_roots(h)).value;
            let log_psi = h.vertices_minus_roots as f64 * ln_n + h.edges as f64 * ln_p;
            let log_val = log_psi / a.to_f64().expect("small rational");
            match best {
                Some((b, _)) if log_val >= b => {}
                _ => best = Some((log_val, h.edge_mask)),
            }
        })?;
        let (log_value, edge_mask) = best.expect("at least one nonempty subgraph");
        Ok(MinExponent {
            value: log_value.exp(),
            log_value,
            edge_mask,
        })
    }

    /// Visit every nonempty edge subset in increasing mask order.
    fn for_each_subgraph(&self, mut f: impl FnMut(&Self, &Subgraph)) -> Result<()> {
        let e = self.edge_count();
        if e > DEFAULT_SUBGRAPH_GUARD {
            return Err(Error::Capacity(format!(
                "subgraph enumeration needs 2^{} subsets; guard is e(G) <= {}",
                e, DEFAULT_SUBGRAPH_GUARD
            )));
        }
        for mask in 1u32..(1u32 << e) {
            let h = self.subgraph(mask);
            f(self, &h);
        }
        Ok(())
    }

    /// N^R(F, G) with F rooted at its first `host_root_count` vertices.
    pub fn count_in(&self, host: &Graph, host_root_count: usize) -> Result<u128> {
        count_rooted_copies(host, host_root_count, &self.graph, self.roots)
    }

    /// μ = N^R(K_n, G) p^{e(G)}; zero when n < v(G).
    pub fn rooted_mean(&self, n: u64, p: f64) -> Result<f64> {
        crate::hypergraph::check_probability(p)?;
        if (n as usize) < self.vertex_count() {
            return Ok(0.0);
        }
        let kn = Graph::complete(n as usize)?;
        let copies = self.count_in(&kn, self.root_count())?;
        Ok(copies as f64 * p.powi(self.edge_count() as i32))
    }

    /// g with N^R(K_n, G) = g · N(K_{n-r}, G-R); checked for divisibility and
    /// for independence of n (at n and n + 1).
    pub fn extension_multiplicity(&self, n: u64) -> Result<u128> {
        if self.root_incident_edges() == 0 {
            return Err(Error::Unsupported(
                "e_R(G) = 0: the rooted count reduces to the unrooted one".into(),
            ));
        }
        if (n as usize) < self.vertex_count() {
            return Err(Error::Argument(format!(
                "n = {} below v(G) = {}",
                n,
                self.vertex_count()
            )));
        }
        let g_at = |n: u64| -> Result<u128> {
            let r = self.root_count();
            let rooted = self.count_in(&Graph::complete(n as usize)?, r)?;
            let unrooted = count_copies(
                &Graph::complete(n as usize - r)?,
                &self.minus_roots(),
            )?;
            if unrooted == 0 || rooted % unrooted != 0 {
                return Err(Error::Inconsistency(format!(
                    "N^R = {} not divisible by N(G-R) = {} at n = {}",
                    rooted, unrooted, n
                )));
            }
            Ok(rooted / unrooted)
        };
        let g = g_at(n)?;
        let g_next = g_at(n + 1)?;
        if g != g_next {
            return Err(Error::Inconsistency(format!(
                "extension multiplicity differs between n = {} ({}) and n + 1 ({})",
                n, g, g_next
            )));
        }
        Ok(g)
    }

    /// Theorem-3 regime of (n, p, t) with its exponent scales.
    pub fn classify_regime(&self, n: u64, p: f64, t: f64) -> Result<RegimeReport> {
        let e_r = self.root_incident_edges();
        if e_r == 0 {
            return Err(Error::Unsupported(
                "e_R(G) = 0: analyze the unrooted graph G - R instead".into(),
            ));
        }
        if t <= 1.0 {
            return Err(Error::Argument(format!("t = {} must exceed 1", t)));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Argument(format!("p = {} outside (0, 1]", p)));
        }
        let m_r = self.rooted_density()?;
        let threshold = (n as f64).powf(-1.0 / m_r.to_f64().expect("small rational"));
        let p1 = t.powf(-1.0 / e_r as f64);
        let p2 = t.powf(-1.0 / self.edge_count() as f64);
        let mu = self.rooted_mean(n, p)?;
        let m_value = if p < 1.0 {
            Some(self.min_exponent_base(n, p)?.value)
        } else {
            None
        };
        let nf = n as f64;
        // interval boundaries: a [0, thr), b [thr, p1], c (p1, p2], d (p2, 1]
        let (regime, lower_scale, upper_scale) = if p > p2 {
            (Regime::D, f64::INFINITY, f64::INFINITY)
        } else if p > p1 {
            let s = nf + (p - p1).powi(2) * nf * nf;
            (Regime::C, s, s)
        } else if p >= threshold {
            let m = m_value.expect("p <= p1 < 1");
            (Regime::B, m * (1.0 / p).ln(), m)
        } else {
            (Regime::A, (1.0 / p).ln(), 1.0)
        };
        Ok(RegimeReport {
            regime,
            threshold,
            p1,
            p2,
            m_value,
            mu,
            lower_exponent_scale: lower_scale,
            upper_exponent_scale: upper_scale,
        })
    }

    /// Blow-up lower-bound certificate from the argmin subgraph of M:
    /// vertex i of H-R becomes ⌈2 t M^{x_i}⌉ clones, H-R edges become
    /// complete bipartite joins.
    pub fn blowup_certificate(&self, h_edge_mask: u32, t: f64, m_value: f64) -> Result<Blowup> {
        if m_value < 1.0 {
            return Err(Error::Argument(format!(
                "M = {} below 1: the blow-up construction needs M >= 1 (regime a)",
                m_value
            )));
        }
        if t <= 1.0 {
            return Err(Error::Argument(format!("t = {} must exceed 1", t)));
        }
        let h = self.subgraph(h_edge_mask);
        let base = self.subgraph_minus_roots(&h);
        let assignment = alpha_star(&base).assignment;
        let class_sizes: Vec<u64> = assignment
            .iter()
            .map(|&halves| {
                let power = match halves {
                    0 => 1.0,
                    1 => m_value.sqrt(),
                    _ => m_value,
                };
                (2.0 * t * power).ceil() as u64
            })
            .collect();
        let vertex_count: u64 = class_sizes.iter().sum();
        let cap = 3.0 * (self.vertex_count() - self.root_count()) as f64 * t * m_value;
        if vertex_count as f64 > cap {
            return Err(Error::Inconsistency(format!(
                "blow-up has {} vertices, above the 3(v-r)tM cap {}",
                vertex_count, cap
            )));
        }
        let f_edge_count: u64 = base
            .edges()
            .iter()
            .map(|&(u, v)| class_sizes[u] * class_sizes[v])
            .sum();
        Ok(Blowup {
            base,
            class_sizes,
            root_count: self.root_count(),
            vertex_count,
            f_edge_count,
        })
    }

    /// Smallest s with N^R(K_s, G) >= t·μ(n, p): planting K_s on the roots
    /// plus s - r further vertices forces the tail event, so the event has
    /// probability at least p^{C(s,2)}. None when even K_n falls short.
    pub fn complete_prefix_certificate(&self, n: u64, p: f64, t: f64) -> Result<Option<u64>> {
        if t <= 1.0 {
            return Err(Error::Argument(format!("t = {} must exceed 1", t)));
        }
        let target = t * self.rooted_mean(n, p)?;
        let count_at = |s: u64| -> Result<u128> {
            self.count_in(&Graph::complete(s as usize)?, self.root_count())
        };
        if (count_at(n)? as f64) < target {
            return Ok(None);
        }
        let mut lo = self.vertex_count() as u64; // count is 0 below v(G)
        let mut hi = n;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if (count_at(mid)? as f64) >= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(Some(lo))
    }
}

/// An edge-subset subgraph of a rooted graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subgraph {
    pub edge_mask: u32,
    pub edges: usize,
    pub vertex_mask: u64,
    pub vertices_minus_roots: usize,
}

/// Minimizer record for M_{R,G}.
#[derive(Debug, Clone, Copy)]
pub struct MinExponent {
    pub value: f64,
    pub log_value: f64,
    pub edge_mask: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    A,
    B,
    C,
    D,
}

impl Regime {
    pub fn letter(&self) -> &'static str {
        match self {
            Regime::A => "a",
            Regime::B => "b",
            Regime::C => "c",
            Regime::D => "d",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegimeReport {
    pub regime: Regime,
    /// Appearance threshold n^{-1/m_R(G)}.
    pub threshold: f64,
    /// t^{-1/e_R(G)}.
    pub p1: f64,
    /// t^{-1/e(G)}.
    pub p2: f64,
    /// M_{R,G}; absent at p = 1.
    pub m_value: Option<f64>,
    pub mu: f64,
    pub lower_exponent_scale: f64,
    pub upper_exponent_scale: f64,
}

/// The blow-up certificate graph F (and its root-enlarged form F2).
#[derive(Debug, Clone)]
pub struct Blowup {
    /// H - R, the pattern being blown up.
    pub base: Graph,
    /// Clone-class size per vertex of H - R.
    pub class_sizes: Vec<u64>,
    pub root_count: usize,
    pub vertex_count: u64,
    pub f_edge_count: u64,
}

impl Blowup {
    /// Materialize F, and F2 = F plus `root_count` roots joined to all of F.
    /// Only possible within the 64-vertex graph budget.
    pub fn materialize(&self) -> Result<(Graph, Graph)> {
        let r = self.root_count;
        let total = self.vertex_count as usize;
        // F vertices: classes laid out consecutively
        let mut start = Vec::with_capacity(self.class_sizes.len());
        let mut acc = 0usize;
        for &s in &self.class_sizes {
            start.push(acc);
            acc += s as usize;
        }
        let mut f_edges = Vec::new();
        for &(u, v) in self.base.edges() {
            for i in 0..self.class_sizes[u] as usize {
                for j in 0..self.class_sizes[v] as usize {
                    f_edges.push((start[u] + i, start[v] + j));
                }
            }
        }
        let f = Graph::new(total, &f_edges)?;
        // F2: roots first, all joined to every class vertex
        let mut f2_edges: Vec<(usize, usize)> = f_edges
            .iter()
            .map(|&(u, v)| (u + r, v + r))
            .collect();
        for root in 0..r {
            for v in 0..total {
                f2_edges.push((root, v + r));
            }
        }
        let f2 = Graph::new(total + r, &f2_edges)?;
        Ok((f, f2))
    }
}
