//! Integer linear systems Ax = 0: rank-condition validation, enumeration of
//! distinct-valued solution sets in [N], the solution hypergraph H_A, prefix
//! certificates, and degree-bound formulas. All linear algebra is exact.

use std::collections::BTreeSet;
use std::io::BufRead;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::util::{binomial_u128, for_each_combination};

/// Default cap on free-coordinate grid iterations (N^q) during enumeration.
pub const DEFAULT_ENUMERATION_GUARD: u64 = 100_000_000;

/// An l×k integer matrix with l < k and full row rank, row-major entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl LinearSystem {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows >= cols {
            return Err(Error::Argument(format!(
                "need 0 < l < k, got l = {}, k = {}",
                rows, cols
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::Argument(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let sys = Self { rows, cols, entries };
        if sys.rank() != rows {
            return Err(Error::Validation(format!(
                "matrix does not have full row rank {}",
                rows
            )));
        }
        Ok(sys)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// q = k - l, the number of free coordinates.
    pub fn free_dim(&self) -> usize {
        self.cols - self.rows
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    /// Rank over the rationals by fraction-free elimination in i128.
    fn rank(&self) -> usize {
        let mut m: Vec<Vec<i128>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.entry(r, c) as i128).collect())
            .collect();
        rank_i128(&mut m)
    }

    fn submatrix_det(&self, cols: &[usize]) -> i128 {
        let mut m: Vec<Vec<i128>> = (0..self.rows)
            .map(|r| cols.iter().map(|&c| self.entry(r, c) as i128).collect())
            .collect();
        det_i128(&mut m)
    }

    /// True iff every l×l column-selection of A is nonsingular.
    pub fn check_full_rank_condition(&self) -> bool {
        let cols: Vec<usize> = (0..self.cols).collect();
        let mut ok = true;
        for_each_combination(&cols, self.rows, |sel| {
            if ok && self.submatrix_det(sel) == 0 {
                ok = false;
            }
        });
        ok
    }

    /// All k-sets that are value sets of distinct-coordinate solutions of
    /// Ax = 0 in [1, N]. The last q coordinates range freely over [N]^q and
    /// the first l are solved exactly over the rationals.
    pub fn enumerate_solution_sets(&self, n: u32) -> Result<BTreeSet<Vec<u32>>> {
        self.enumerate_solution_sets_with_guard(n, DEFAULT_ENUMERATION_GUARD)
    }

    pub fn enumerate_solution_sets_with_guard(
        &self,
        n: u32,
        guard: u64,
    ) -> Result<BTreeSet<Vec<u32>>> {
        if !self.check_full_rank_condition() {
            return Err(Error::Validation(
                "some l×l submatrix of A is singular".into(),
            ));
        }
        let l = self.rows;
        let k = self.cols;
        let q = self.free_dim();
        let iterations = (n as f64).powi(q as i32);
        if iterations > guard as f64 {
            return Err(Error::Capacity(format!(
                "enumeration needs N^q = {:.3e} iterations; guard is {}",
                iterations, guard
            )));
        }
        let mut out = BTreeSet::new();
        if (n as usize) < k {
            return Ok(out);
        }
        // basis B = first l columns; denominators via Cramer's rule
        let basis: Vec<usize> = (0..l).collect();
        let det_b = self.submatrix_det(&basis);
        debug_assert!(det_b != 0);
        let mut free = vec![1u32; q];
        let mut x = vec![0i128; k];
        loop {
            // rhs c = -Σ free-column contributions
            let mut c = vec![0i128; l];
            for (i, row_c) in c.iter_mut().enumerate() {
                for (fj, &val) in free.iter().enumerate() {
                    *row_c -= self.entry(i, l + fj) as i128 * val as i128;
                }
            }
            // Cramer: x_i = det(B with column i replaced by c) / det(B)
            let mut valid = true;
            for i in 0..l {
                let mut m: Vec<Vec<i128>> = (0..l)
                    .map(|r| {
                        (0..l)
                            .map(|cc| {
                                if cc == i {
                                    c[r]
                                } else {
                                    self.entry(r, cc) as i128
                                }
                            })
                            .collect()
                    })
                    .collect();
                let d = det_i128(&mut m);
                if d % det_b != 0 {
                    valid = false;
                    break;
                }
                let xi = d / det_b;
                if xi < 1 || xi > n as i128 {
                    valid = false;
                    break;
                }
                x[i] = xi;
            }
            if valid {
                for (fj, &val) in free.iter().enumerate() {
                    x[l + fj] = val as i128;
                }
                let mut set: Vec<u32> = x.iter().map(|&v| v as u32).collect();
                set.sort_unstable();
                if set.windows(2).all(|w| w[0] != w[1]) {
                    out.insert(set);
                }
            }
            // advance the free-coordinate odometer
            let mut pos = q;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                if free[pos] < n {
                    free[pos] += 1;
                    for f in free.iter_mut().skip(pos + 1) {
                        *f = 1;
                    }
                    break;
                }
            }
        }
    }

    /// The k-uniform hypergraph H_A(N) of distinct-valued solution sets.
    pub fn solution_hypergraph(&self, n: u32) -> Result<Hypergraph> {
        let sets = self.enumerate_solution_sets(n)?;
        Hypergraph::new(n, self.cols, sets.into_iter().collect())
    }

    /// Density a(N) = |H_A(N)| / N^q.
    pub fn density(&self, n: u32) -> Result<f64> {
        let h = self.solution_hypergraph(n)?;
        Ok(h.edge_count() as f64 / (n as f64).powi(self.free_dim() as i32))
    }

    /// Smallest prefix [1..m] with |H_A(m)| >= t·μ, found by binary search
    /// (the prefix count is nondecreasing in m).
    pub fn prefix_certificate(&self, n: u32, p: f64, t: f64) -> Result<Vec<u32>> {
        let h = self.solution_hypergraph(n)?;
        let mu = h.expected_count(p)?;
        let target = t * mu;
        if target > h.edge_count() as f64 {
            return Err(Error::Infeasible(format!(
                "t·μ = {} exceeds |H_A(N)| = {}",
                target,
                h.edge_count()
            )));
        }
        let count_at = |m: u32| -> Result<f64> {
            Ok(self.enumerate_solution_sets(m)?.len() as f64)
        };
        let mut lo = self.cols as u32; // fewer than k integers host no solution
        let mut hi = n;
        if count_at(lo)? >= target {
            return Ok((1..=lo).collect());
        }
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if count_at(mid)? >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((1..=hi).collect())
    }

    /// Analytic prefix size ⌈(t a₀⁻¹ μ)^{1/q}⌉ for a measured density floor a₀,
    /// reported alongside the exact binary-search certificate.
    pub fn analytic_prefix_size(&self, n: u32, p: f64, t: f64, a0: f64) -> Result<u32> {
        let h = self.solution_hypergraph(n)?;
        let mu = h.expected_count(p)?;
        let q = self.free_dim() as f64;
        let m = (t * mu / a0).powf(1.0 / q).ceil();
        Ok((m as u32).min(n))
    }

    /// Σ over j-element column sets J of N^{k-j-r(A_J)}: r(A_J) = l for
    /// j <= q and k - j for j > q, so the bound is C(k,j) · N^{max(q-j, 0)}.
    pub fn theoretical_delta_bound(&self, j: usize, n: u32) -> Result<BigUint> {
        if j > self.cols {
            return Err(Error::Argument(format!(
                "j = {} outside [0, k = {}]",
                j, self.cols
            )));
        }
        let q = self.free_dim();
        let subsets = BigUint::from(binomial_u128(self.cols as u64, j as u64));
        let exp = q.saturating_sub(j) as u32;
        Ok(subsets * BigUint::from(n).pow(exp))
    }

    /// Parse the matrix file format: first line "l k", then l rows of k integers.
    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut entries = Vec::new();
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
                        return Err(Error::Parse(format!("expected header \"l k\", got {:?}", line)));
                    }
                    let l = fields[0]
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad l: {}", e)))?;
                    let k = fields[1]
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad k: {}", e)))?;
                    header = Some((l, k));
                }
                Some((_, k)) => {
                    if fields.len() != k {
                        return Err(Error::Parse(format!(
                            "matrix row {:?} does not have {} entries",
                            line, k
                        )));
                    }
                    for f in fields {
                        entries.push(
                            f.parse()
                                .map_err(|e| Error::Parse(format!("bad entry: {}", e)))?,
                        );
                    }
                }
            }
        }
        let (l, k) = header.ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        Self::new(l, k, entries)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }
}

/// The paper's example generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardSystem {
    /// Arithmetic progressions of length k: x_i - 2x_{i+1} + x_{i+2} = 0.
    Ap,
    /// Schur triples x + y = z (k = 3 fixed).
    Schur,
}

pub fn standard_system(name: StandardSystem, k: usize) -> Result<LinearSystem> {
    match name {
        StandardSystem::Ap => {
            if k < 3 {
                return Err(Error::Argument("AP system needs k >= 3".into()));
            }
            let l = k - 2;
            let mut entries = vec![0i64; l * k];
            for i in 0..l {
                entries[i * k + i] = 1;
                entries[i * k + i + 1] = -2;
                entries[i * k + i + 2] = 1;
            }
            LinearSystem::new(l, k, entries)
        }
        StandardSystem::Schur => LinearSystem::new(1, 3, vec![1, 1, -1]),
    }
}

/// Determinant by fraction-free (Bareiss) elimination; consumes the matrix.
fn det_i128(m: &mut [Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for i in 0..n {
        if m[i][i] == 0 {
            let swap = (i + 1..n).find(|&r| m[r][i] != 0);
            match swap {
                Some(r) => {
                    m.swap(i, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for r in i + 1..n {
            for c in i + 1..n {
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev;
            }
            m[r][i] = 0;
        }
        prev = m[i][i];
    }
    sign * m[n - 1][n - 1]
}

/// Row rank by fraction-free elimination with column pivoting.
fn rank_i128(m: &mut [Vec<i128>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| m[r][col] != 0);
        let Some(pr) = pivot else { continue };
        m.swap(rank, pr);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                m[r][c] = (m[r][c] * m[rank][col] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
    }
    rank
}
