//! k-uniform hypergraphs over [N]: degree bounds, induced counts, binomial
//! subset sampling, and exact enumeration oracles for tails and moments.

use std::collections::HashMap;
use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::util::{for_each_combination, KahanSum};

/// Default ground-set guard for [`Hypergraph::exact_tail`] (2^N enumeration).
pub const DEFAULT_EXACT_TAIL_GUARD: u32 = 24;
/// Default guard on the number of edge tuples in [`Hypergraph::exact_moment`].
pub const DEFAULT_EXACT_MOMENT_GUARD: u64 = 10_000_000;

/// A k-uniform hypergraph on ground set {1..N}. Edges are stored as sorted
/// vertex lists, the edge set itself sorted lexicographically, so all reports
/// derived from it are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    ground_size: u32,
    uniformity: usize,
    edges: Vec<Vec<u32>>,
}

impl Hypergraph {
    pub fn new(ground_size: u32, uniformity: usize, edges: Vec<Vec<u32>>) -> Result<Self> {
        if uniformity == 0 {
            return Err(Error::Argument("uniformity k must be positive".into()));
        }
        if !edges.is_empty() && uniformity as u32 > ground_size {
            return Err(Error::Argument(format!(
                "k = {} exceeds ground size N = {} but edges are present",
                uniformity, ground_size
            )));
        }
        let mut canon: Vec<Vec<u32>> = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() != uniformity {
                return Err(Error::Argument(format!(
                    "edge {:?} does not have {} vertices",
                    e, uniformity
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Argument(format!("edge {:?} has repeated vertices", e)));
            }
            if e[0] < 1 || e[uniformity - 1] > ground_size {
                return Err(Error::Argument(format!(
                    "edge {:?} out of ground range [1, {}]",
                    e, ground_size
                )));
            }
            canon.push(e);
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self {
            ground_size,
            uniformity,
            edges: canon,
        })
    }

    pub fn ground_size(&self) -> u32 {
        self.ground_size
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn edge_count(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    /// Δ_j: the maximum number of edges containing some fixed j-set.
    /// Tallies the j-subsets of every edge; only those can achieve the max.
    pub fn degree_bound(&self, j: usize) -> Result<u64> {
        if j > self.uniformity {
            return Err(Error::Argument(format!(
                "j = {} outside [0, k = {}]",
                j, self.uniformity
            )));
        }
        if self.edges.is_empty() {
            return Ok(0);
        }
        if j == 0 {
            return Ok(self.edge_count());
        }
        let mut tally: HashMap<Vec<u32>, u64> = HashMap::new();
        for e in &self.edges {
            for_each_combination(e, j, |s| {
                *tally.entry(s.to_vec()).or_insert(0) += 1;
            });
        }
        Ok(tally.values().copied().max().unwrap_or(0))
    }

    /// μ = |H| p^k.
    pub fn expected_count(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        Ok(self.edge_count() as f64 * p.powi(self.uniformity as i32))
    }

    /// Number of edges entirely contained in `members`.
    pub fn induced_count(&self, members: &[u32]) -> Result<u64> {
        for &v in members {
            if v < 1 || v > self.ground_size {
                return Err(Error::Argument(format!(
                    "member {} outside ground range [1, {}]",
                    v, self.ground_size
                )));
            }
        }
        let mut present = vec![false; self.ground_size as usize + 1];
        for &v in members {
            present[v as usize] = true;
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| present[v as usize]))
            .count() as u64)
    }

    /// P(X >= threshold) by full 2^N enumeration of Γ_p outcomes.
    pub fn exact_tail(&self, p: f64, threshold: f64) -> Result<f64> {
        self.exact_tail_with_guard(p, threshold, DEFAULT_EXACT_TAIL_GUARD)
    }

    pub fn exact_tail_with_guard(&self, p: f64, threshold: f64, guard: u32) -> Result<f64> {
        check_probability(p)?;
        let n = self.ground_size;
        if n > guard {
            return Err(Error::Capacity(format!(
                "exact_tail needs 2^{} subsets; guard is N <= {}",
                n, guard
            )));
        }
        if n > 63 {
            return Err(Error::Capacity("exact_tail limited to N <= 63".into()));
        }
        if threshold <= 0.0 {
            return Ok(1.0);
        }
        let masks = self.edge_masks_u64();
        // hits[s] = number of subsets of size s with induced count >= threshold
        let mut hits = vec![0u64; n as usize + 1];
        for subset in 0u64..(1u64 << n) {
            let count = masks.iter().filter(|&&m| subset & m == m).count() as f64;
            if count >= threshold {
                hits[subset.count_ones() as usize] += 1;
            }
        }
        let mut sum = KahanSum::new();
        for (s, &h) in hits.iter().enumerate() {
            if h > 0 {
                let w = p.powi(s as i32) * (1.0 - p).powi(n as i32 - s as i32);
                sum.add(h as f64 * w);
            }
        }
        Ok(sum.value().clamp(0.0, 1.0))
    }

    /// E X^m as the exact tuple expansion Σ over edge m-tuples of p^{|E1 ∪ … ∪ Em|}.
    pub fn exact_moment(&self, p: f64, m: u32) -> Result<f64> {
        self.exact_moment_with_guard(p, m, DEFAULT_EXACT_MOMENT_GUARD)
    }

    pub fn exact_moment_with_guard(&self, p: f64, m: u32, guard: u64) -> Result<f64> {
        check_probability(p)?;
        if m == 0 {
            return Err(Error::Argument("moment order m must be positive".into()));
        }
        let tuples = (self.edge_count() as f64).powi(m as i32);
        if tuples > guard as f64 {
            return Err(Error::Capacity(format!(
                "exact_moment needs |H|^m = {:.3e} tuples; guard is {}",
                tuples, guard
            )));
        }
        if self.edges.is_empty() {
            return Ok(0.0);
        }
        if m == 1 {
            // the sum is |H| equal terms p^k; take the closed form so the
            // first moment is bit-identical to expected_count
            return self.expected_count(p);
        }
        let masks = self.edge_masks_blocks();
        let mut powers = vec![1.0f64; self.uniformity * m as usize + 1];
        for i in 1..powers.len() {
            powers[i] = powers[i - 1] * p;
        }
        let mut sum = KahanSum::new();
        let mut union_stack: Vec<Vec<u64>> = Vec::with_capacity(m as usize);
        self.moment_rec(&masks, &powers, m, &mut union_stack, &mut sum);
        Ok(sum.value())
    }

    fn moment_rec(
        &self,
        masks: &[Vec<u64>],
        powers: &[f64],
        remaining: u32,
        stack: &mut Vec<Vec<u64>>,
        sum: &mut KahanSum,
    ) {
        if remaining == 0 {
            let union = stack.last().expect("nonempty stack");
            let bits: u32 = union.iter().map(|b| b.count_ones()).sum();
            sum.add(powers[bits as usize]);
            return;
        }
        for mask in masks {
            let next = match stack.last() {
                Some(top) => top.iter().zip(mask).map(|(a, b)| a | b).collect(),
                None => mask.clone(),
            };
            stack.push(next);
            self.moment_rec(masks, powers, remaining - 1, stack, sum);
            stack.pop();
        }
    }

    fn edge_masks_u64(&self) -> Vec<u64> {
        self.edges
            .iter()
            .map(|e| e.iter().fold(0u64, |m, &v| m | 1u64 << (v - 1)))
            .collect()
    }

    fn edge_masks_blocks(&self) -> Vec<Vec<u64>> {
        let blocks = (self.ground_size as usize).div_ceil(64);
        self.edges
            .iter()
            .map(|e| {
                let mut m = vec![0u64; blocks.max(1)];
                for &v in e {
                    let b = (v - 1) as usize;
                    m[b / 64] |= 1u64 << (b % 64);
                }
                m
            })
            .collect()
    }

    /// Parse the hypergraph file format: first line "N k", then one edge per
    /// line as k space-separated integers; '#' lines are comments.
    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        let mut header: Option<(u32, usize)> = None;
        let mut edges = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(Error::Parse(format!("expected header \"N k\", got {:?}", line)));
                    }
                    let n = fields[0]
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad N: {}", e)))?;
                    let k = fields[1]
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad k: {}", e)))?;
                    header = Some((n, k));
                }
                Some((_, k)) => {
                    if fields.len() != k {
                        return Err(Error::Parse(format!(
                            "edge line {:?} does not have {} vertices",
                            line, k
                        )));
                    }
                    let edge: std::result::Result<Vec<u32>, _> =
                        fields.iter().map(|f| f.parse()).collect();
                    edges.push(edge.map_err(|e| Error::Parse(format!("bad vertex: {}", e)))?);
                }
            }
        }
        let (n, k) = header.ok_or_else(|| Error::Parse("empty hypergraph file".into()))?;
        Self::new(n, k, edges)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }
}

/// A realization of the binomial subset Γ_p, reproducible from its key.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSample {
    pub members: Vec<u32>,
    pub p: f64,
    pub seed: u64,
    pub trial_index: u64,
}

/// Draw Γ_p ⊆ [1, N]. The stream is keyed on (seed, trial_index), so trials
/// can run in any order or in parallel and still reproduce exactly.
pub fn sample_subset(n: u32, p: f64, seed: u64, trial_index: u64) -> Result<SubsetSample> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index.wrapping_add(1));
    let members = (1..=n).filter(|_| rng.random::<f64>() < p).collect();
    Ok(SubsetSample {
        members,
        p,
        seed,
        trial_index,
    })
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument(format!("probability {} outside [0, 1]", p)));
    }
    Ok(())
}
