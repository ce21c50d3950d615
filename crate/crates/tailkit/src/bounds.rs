//! Explicit finite-n moment bounds, Markov tail bounds, exponent scales, and
//! certificate lower bounds for P(X >= t·μ).

use crate::error::{Error, Result};
use crate::hypergraph::{check_probability, Hypergraph};
use crate::util::binomial_f64;

/// Hard cap on the moment-order search.
pub const M_MAX_CAP: u64 = 10_000;

/// Two-sided bound record for one (H, p, t, q) instance.
#[derive(Debug, Clone)]
pub struct BoundEnvelope {
    pub mu: f64,
    pub t: f64,
    pub q: f64,
    /// ln P of the certificate lower bound, when a certificate was found.
    pub lower_log_prob: Option<f64>,
    pub upper_tail_bound: f64,
    pub optimal_m: u64,
    /// μ^{1/q} · ln(1/p)
    pub lower_exponent_scale: f64,
    /// μ^{1/q} for integer q, otherwise the non-integer-q max formula.
    pub upper_exponent_scale: f64,
    /// μ >= 1 and t <= p^{-k}: the range in which the bounds are informative.
    pub condition_int: bool,
    /// The certificate set, when found.
    pub certificate: Option<Vec<u32>>,
}

/// Explicit finite-n upper bound on E X^m:
///   μ · (|H| p^k + Σ_{j=1}^{k} C((m-1)k, j) Δ_j p^{k-j})^{m-1}.
/// Any j-subset A of the union of m-1 edges is one of at most C((m-1)k, j)
/// sets, and each extends to at most Δ_j further edges. Equals μ at m = 1.
pub fn moment_upper_bound(h: &Hypergraph, p: f64, m: u64) -> Result<f64> {
    if m == 1 {
        // E X = μ exactly; skip the log round trip so the first moment is
        // bit-identical to expected_count
        check_probability(p)?;
        return h.expected_count(p);
    }
    Ok(log_moment_upper_bound(h, p, m)?.exp())
}

/// Same bound in log space (the power (m-1) overflows f64 quickly).
/// Returns -inf when the bound is 0 (empty hypergraph or p = 0).
pub fn log_moment_upper_bound(h: &Hypergraph, p: f64, m: u64) -> Result<f64> {
    check_probability(p)?;
    if m == 0 {
        return Err(Error::Argument("moment order m must be positive".into()));
    }
    let mu = h.expected_count(p)?;
    if mu == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if m == 1 {
        return Ok(mu.ln());
    }
    let k = h.uniformity();
    let mut base = h.edge_count() as f64 * p.powi(k as i32);
    for j in 1..=k {
        let b_j = binomial_f64((m - 1) * k as u64, j as u64) * h.degree_bound(j)? as f64;
        base += b_j * p.powi((k - j) as i32);
    }
    Ok(mu.ln() + (m - 1) as f64 * base.ln())
}

/// Markov bound min_m E X^m / (tμ)^m optimized over m in [1, m_max],
/// clipped to 1; returns the bound and the minimizing m (smallest on ties).
pub fn markov_tail_upper(h: &Hypergraph, p: f64, t: f64, m_max: u64) -> Result<(f64, u64)> {
    if t <= 1.0 {
        return Err(Error::Argument(format!("t = {} must exceed 1", t)));
    }
    let mu = h.expected_count(p)?;
    if mu == 0.0 {
        return Err(Error::Argument("μ = 0: tail bound undefined".into()));
    }
    let log_tmu = (t * mu).ln();
    let mut best = f64::INFINITY;
    let mut best_m = 1;
    for m in 1..=m_max.max(1) {
        let log_bound = log_moment_upper_bound(h, p, m)? - m as f64 * log_tmu;
        if log_bound < best {
            best = log_bound;
            best_m = m;
        }
    }
    Ok((best.exp().min(1.0), best_m))
}

/// Plain first-moment Markov bound P(X >= t·μ) <= 1/t, for counts whose
/// higher moments are out of reach.
pub fn first_moment_upper(t: f64) -> Result<f64> {
    if t <= 1.0 {
        return Err(Error::Argument(format!("t = {} must exceed 1", t)));
    }
    Ok(1.0 / t)
}

/// Default moment-order cap: the optimum sits near μ^{1/q}.
pub fn default_m_max(mu: f64, q: f64) -> u64 {
    let scale = (2.0 * mu.powf(1.0 / q)).ceil();
    (scale.max(1.0) as u64).min(M_MAX_CAP)
}

/// Exponent scales of the two-sided tail bounds:
/// lower μ^{1/q}·ln(1/p); upper μ^{1/q} for integer q, else
/// max(μ^{1/q} p^{k(1/⌊q⌋ - 1/q)}, μ^{1/⌈q⌉}).
pub fn exponent_scales(mu: f64, q: f64, k: usize, p: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Argument(format!("p = {} must lie strictly in (0, 1)", p)));
    }
    if !(q > 0.0 && q <= k as f64) {
        return Err(Error::Argument(format!("q = {} outside (0, k = {}]", q, k)));
    }
    if mu < 0.0 {
        return Err(Error::Argument("μ must be nonnegative".into()));
    }
    let lower = mu.powf(1.0 / q) * (1.0 / p).ln();
    let upper = if q.fract() == 0.0 {
        mu.powf(1.0 / q)
    } else {
        let a = mu.powf(1.0 / q) * p.powf(k as f64 * (1.0 / q.floor() - 1.0 / q));
        let b = mu.powf(1.0 / q.ceil());
        a.max(b)
    };
    Ok((lower, upper))
}

/// ln P(Γ_p ⊇ Γ₀) = |Γ₀| ln p, valid only when Γ₀ witnesses at least t·μ edges.
pub fn certificate_tail_lower(h: &Hypergraph, gamma0: &[u32], p: f64, t: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Argument(format!("p = {} must lie strictly in (0, 1)", p)));
    }
    let mu = h.expected_count(p)?;
    let achieved = h.induced_count(gamma0)?;
    let required = t * mu;
    if (achieved as f64) < required {
        return Err(Error::Certificate { required, achieved });
    }
    Ok(gamma0.len() as f64 * p.ln())
}

/// Greedy search for a certificate set: repeatedly add the vertex completing
/// the most new edges (lowest index on ties) until the induced count reaches
/// t·μ or the budget runs out. Returns None when the budget is exhausted.
pub fn greedy_certificate(
    h: &Hypergraph,
    p: f64,
    t: f64,
    budget: usize,
) -> Result<Option<Vec<u32>>> {
    let mu = h.expected_count(p)?;
    let target = t * mu;
    if target > h.edge_count() as f64 {
        return Err(Error::Infeasible(format!(
            "t·μ = {} exceeds |H| = {}",
            target,
            h.edge_count()
        )));
    }
    let n = h.ground_size();
    let mut chosen = vec![false; n as usize + 1];
    let mut set: Vec<u32> = Vec::new();
    let mut count = 0u64;
    while (count as f64) < target {
        if set.len() >= budget || set.len() == n as usize {
            return Ok(None);
        }
        let mut best_v = 0u32;
        let mut best_key = (0u64, 0u64);
        let mut found = false;
        for v in 1..=n {
            if chosen[v as usize] {
                continue;
            }
            // primary: edges completed by v; secondary: partial progress,
            // weighting an edge with c chosen vertices as 4^c so near-complete
            // edges dominate (otherwise ties at gain 0 pick useless vertices)
            let mut gain = 0u64;
            let mut weight = 0u64;
            for e in h.edges() {
                if !e.iter().any(|&w| w == v) {
                    continue;
                }
                let overlap = e.iter().filter(|&&w| w != v && chosen[w as usize]).count();
                if overlap == e.len() - 1 {
                    gain += 1;
                }
                weight = weight.saturating_add(1u64 << (2 * overlap.min(31)));
            }
            let key = (gain, weight);
            if !found || key > best_key {
                best_key = key;
                best_v = v;
                found = true;
            }
        }
        chosen[best_v as usize] = true;
        set.push(best_v);
        count += best_key.0;
    }
    set.sort_unstable();
    Ok(Some(set))
}

/// Assemble the full two-sided envelope for one instance.
pub fn envelope(
    h: &Hypergraph,
    p: f64,
    t: f64,
    q: f64,
    m_max: Option<u64>,
    certificate_budget: usize,
) -> Result<BoundEnvelope> {
    let mu = h.expected_count(p)?;
    let k = h.uniformity();
    let m_max = m_max.unwrap_or_else(|| default_m_max(mu, q));
    let (upper_tail_bound, optimal_m) = markov_tail_upper(h, p, t, m_max)?;
    let (lower_exponent_scale, upper_exponent_scale) = exponent_scales(mu, q, k, p)?;
    let condition_int = mu >= 1.0 && t <= p.powi(-(k as i32));
    let certificate = if t * mu <= h.edge_count() as f64 {
        greedy_certificate(h, p, t, certificate_budget)?
    } else {
        None
    };
    let lower_log_prob = match &certificate {
        Some(set) => Some(certificate_tail_lower(h, set, p, t)?),
        None => None,
    };
    Ok(BoundEnvelope {
        mu,
        t,
        q,
        lower_log_prob,
        upper_tail_bound,
        optimal_m,
        lower_exponent_scale,
        upper_exponent_scale,
        condition_int,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn ap3(n: u32) -> Hypergraph {
        let mut edges = Vec::new();
        for a in 1..=n {
            for d in 1..=n {
                if a + 2 * d <= n {
                    edges.push(vec![a, a + d, a + 2 * d]);
                }
            }
        }
        Hypergraph::new(n, 3, edges).unwrap()
    }

    fn one_edge_k2() -> Hypergraph {
        Hypergraph::new(2, 2, vec![vec![1, 2]]).unwrap()
    }

    #[test]
    fn moment_upper_bound_m1_is_mu() {
        let h = ap3(8);
        for p in [0.2, 0.5, 0.9] {
            let mub = moment_upper_bound(&h, p, 1).unwrap();
            assert!((mub - h.expected_count(p).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn moment_upper_bound_one_edge_m2() {
        // μ = 1/4; B0 p^2 = 1/4, B1 = C(2,1)·Δ1 = 2, term 2·(1/2); B2 = C(2,2)·Δ2 = 1.
        let b = moment_upper_bound(&one_edge_k2(), 0.5, 2).unwrap();
        assert!((b - 0.25 * (0.25 + 2.0 * 0.5 + 1.0)).abs() < 1e-14);
        assert!((b - 0.5625).abs() < 1e-14);
        // dominates the exact E X^2 = p^2 = 0.25
        assert!(b >= one_edge_k2().exact_moment(0.5, 2).unwrap());
    }

    #[test]
    fn moment_upper_bound_dominates_exact() {
        for n in [5u32, 8, 10] {
            let h = ap3(n);
            for p in [0.1, 0.3, 0.5, 0.9] {
                for m in 1..=4u64 {
                    let exact = h.exact_moment(p, m as u32).unwrap();
                    let bound = moment_upper_bound(&h, p, m).unwrap();
                    assert!(
                        bound >= exact,
                        "n={} p={} m={} bound={} exact={}",
                        n,
                        p,
                        m,
                        bound,
                        exact
                    );
                }
            }
        }
    }

    #[test]
    fn markov_plain_at_m1() {
        let h = one_edge_k2();
        let (b, m) = markov_tail_upper(&h, 0.5, 2.0, 1).unwrap();
        assert!((b - 0.5).abs() < 1e-14);
        assert_eq!(m, 1);
        let (b4, _) = markov_tail_upper(&h, 0.5, 4.0, 1).unwrap();
        assert!((b4 - 0.25).abs() < 1e-14);
    }

    #[test]
    fn markov_never_worse_than_plain() {
        let h = ap3(10);
        for t in [1.5, 2.0, 4.0] {
            for p in [0.3, 0.5, 0.7] {
                let (b, _) = markov_tail_upper(&h, p, t, 16).unwrap();
                assert!(b <= 1.0 / t + 1e-14);
            }
        }
    }

    #[test]
    fn markov_sandwiches_exact_tail() {
        let h = ap3(5);
        let p = 0.5;
        let mu = h.expected_count(p).unwrap();
        let (bound, _) = markov_tail_upper(&h, p, 2.0, 8).unwrap();
        let exact = h.exact_tail(p, 2.0 * mu).unwrap();
        assert!(bound >= exact);
    }

    #[test]
    fn markov_nonincreasing_in_t() {
        let h = ap3(10);
        let mut prev = f64::INFINITY;
        for t in [1.2, 1.5, 2.0, 3.0, 5.0] {
            let (b, _) = markov_tail_upper(&h, 0.5, t, 12).unwrap();
            assert!(b <= prev + 1e-14);
            prev = b;
        }
    }

    #[test]
    fn markov_argument_errors() {
        let h = ap3(5);
        assert!(markov_tail_upper(&h, 0.5, 1.0, 4).is_err());
        let empty = Hypergraph::new(5, 3, vec![]).unwrap();
        assert!(markov_tail_upper(&empty, 0.5, 2.0, 4).is_err());
    }

    #[test]
    fn exponent_scales_integer_q() {
        let e = std::f64::consts::E;
        let (lo, hi) = exponent_scales(25.0, 2.0, 3, 1.0 / e).unwrap();
        assert!((lo - 5.0).abs() < 1e-12);
        assert!((hi - 5.0).abs() < 1e-12);
    }

    #[test]
    fn exponent_scales_triangle_q_three_halves() {
        // μ = 64, q = 3/2, k = 3, p = 1/4: max(16 · 1/4, 8) = 8.
        let (_, hi) = exponent_scales(64.0, 1.5, 3, 0.25).unwrap();
        assert!((hi - 8.0).abs() < 1e-9);
    }

    #[test]
    fn exponent_scales_theorem2_collapses_for_integer_q() {
        for q in [1.0f64, 2.0, 3.0] {
            for mu in [0.5f64, 4.0, 100.0] {
                for p in [0.2f64, 0.5, 0.8] {
                    let mu_q = mu.powf(1.0 / q);
                    // both branches of the non-integer formula equal μ^{1/q}
                    let a = mu.powf(1.0 / q) * p.powf(3.0 * (1.0 / q.floor() - 1.0 / q));
                    let b = mu.powf(1.0 / q.ceil());
                    assert!((a - mu_q).abs() < 1e-12 * mu_q.max(1.0));
                    assert!((b - mu_q).abs() < 1e-12 * mu_q.max(1.0));
                }
            }
        }
    }

    #[test]
    fn exponent_scales_rejects_degenerate_p() {
        assert!(exponent_scales(4.0, 2.0, 3, 0.0).is_err());
        assert!(exponent_scales(4.0, 2.0, 3, 1.0).is_err());
    }

    #[test]
    fn certificate_full_ground_set() {
        let h = ap3(5);
        let all: Vec<u32> = (1..=5).collect();
        let lp = certificate_tail_lower(&h, &all, 0.5, 2.0).unwrap();
        assert!((lp - 5.0 * 0.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn certificate_prefix_123() {
        // {1,2,3} holds one edge; μ = 4/8 at p = 1/2, choose t with tμ <= 1.
        let h = ap3(5);
        let lp = certificate_tail_lower(&h, &[1, 2, 3], 0.5, 1.5).unwrap();
        assert!((lp - 3.0 * 0.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn certificate_empty_set_fails() {
        let h = ap3(5);
        assert!(matches!(
            certificate_tail_lower(&h, &[], 0.5, 2.0),
            Err(Error::Certificate { .. })
        ));
    }

    #[test]
    fn greedy_finds_single_edge() {
        let h = Hypergraph::new(6, 3, vec![vec![2, 4, 6]]).unwrap();
        // t·μ = 2 · 1/8 = 0.25 <= 1, one edge suffices
        let set = greedy_certificate(&h, 0.5, 2.0, 10).unwrap().unwrap();
        assert_eq!(set, vec![2, 4, 6]);
    }

    #[test]
    fn greedy_ap3_n10() {
        // μ = 20/8 = 2.5, tμ = 5; the prefix [6] holds 6 >= 5 three-term APs,
        // so greedy must succeed with at most 6 vertices.
        let h = ap3(10);
        let set = greedy_certificate(&h, 0.5, 2.0, 10).unwrap().unwrap();
        assert!(set.len() <= 6, "greedy set {:?}", set);
        assert!(certificate_tail_lower(&h, &set, 0.5, 2.0).is_ok());
    }

    #[test]
    fn greedy_infeasible() {
        let h = ap3(5);
        assert!(matches!(
            greedy_certificate(&h, 1.0 - 1e-9, 2.0, 10),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn envelope_sandwich_small_instance() {
        let h = ap3(8);
        let p = 0.5;
        let t = 1.5;
        let env = envelope(&h, p, t, 2.0, None, 64).unwrap();
        let exact = h.exact_tail(p, t * env.mu).unwrap();
        assert!(env.upper_tail_bound >= exact);
        let lower = env.lower_log_prob.expect("certificate exists").exp();
        assert!(lower <= exact);
    }
}
