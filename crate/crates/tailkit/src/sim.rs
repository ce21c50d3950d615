//! Monte Carlo and exact verification: G(n,p) sampling, tail estimation with
//! Wilson intervals, exact rooted tails on tiny instances, and the sandwich
//! verdict for bound envelopes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::BoundEnvelope;
use crate::error::{Error, Result};
use crate::hypergraph::check_probability;
use crate::rooted::{Graph, RootedGraph};
use crate::util::KahanSum;

/// Default guard on the number of vertex pairs for exact rooted tails.
pub const DEFAULT_EXACT_ROOTED_GUARD: usize = 24;

const WILSON_Z: f64 = 1.959963984540054; // 95%

/// Empirical tail probability with a 95% Wilson interval.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub exact: Option<f64>,
}

/// Sample the edge list of G(n, p), keyed on (seed, trial_index). Not
/// limited by the 64-vertex graph budget.
pub fn sample_gnp_edges(n: usize, p: f64, seed: u64, trial_index: u64) -> Result<Vec<(usize, usize)>> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index.wrapping_add(1));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(edges)
}

/// Sample G(n, p) as a graph (n <= 64).
pub fn sample_gnp(n: usize, p: f64, seed: u64, trial_index: u64) -> Result<Graph> {
    Graph::new(n, &sample_gnp_edges(n, p, seed, trial_index)?)
}

/// Estimate P(count >= threshold) over `trials` independent trials of the
/// counting closure. Trials run in parallel; the hit count is an
/// order-independent reduction, so the result is reproducible.
pub fn monte_carlo_tail(
    model: impl Fn(u64) -> f64 + Sync,
    threshold: f64,
    trials: u64,
    seed: u64,
) -> Result<TailEstimate> {
    if trials == 0 {
        return Err(Error::Argument("at least one trial required".into()));
    }
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&i| model(i) >= threshold)
        .count() as u64;
    let (ci_low, ci_high) = wilson_interval(hits, trials);
    Ok(TailEstimate {
        hits,
        trials,
        estimate: hits as f64 / trials as f64,
        ci_low,
        ci_high,
        seed,
        exact: None,
    })
}

/// 95% Wilson score interval; nondegenerate at 0 and at `trials` hits.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let phat = hits as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the clamps keep ci_low <= estimate <= ci_high at 0 and `trials` hits,
    // where center - half is 0 up to rounding
    (
        (center - half).clamp(0.0, phat),
        (center + half).clamp(phat, 1.0),
    )
}

/// P(X_G^R >= threshold) by enumerating all 2^{C(n,2)} graphs on [n].
pub fn exact_tail_rooted(rg: &RootedGraph, n: usize, p: f64, threshold: f64) -> Result<f64> {
    exact_tail_rooted_with_guard(rg, n, p, threshold, DEFAULT_EXACT_ROOTED_GUARD)
}

pub fn exact_tail_rooted_with_guard(
    rg: &RootedGraph,
    n: usize,
    p: f64,
    threshold: f64,
    guard: usize,
) -> Result<f64> {
    check_probability(p)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let np = pairs.len();
    if np > guard {
        return Err(Error::Capacity(format!(
            "exact rooted tail needs 2^{} graphs; guard is C(n,2) <= {}",
            np, guard
        )));
    }
    if threshold <= 0.0 {
        return Ok(1.0);
    }
    let r = rg.root_count();
    let mut hits = vec![0u64; np + 1];
    for mask in 0u64..(1u64 << np) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let f = Graph::new(n, &edges)?;
        let count = rg.count_in(&f, r)? as f64;
        if count >= threshold {
            hits[mask.count_ones() as usize] += 1;
        }
    }
    let mut sum = KahanSum::new();
    for (e, &h) in hits.iter().enumerate() {
        if h > 0 {
            sum.add(h as f64 * p.powi(e as i32) * (1.0 - p).powi((np - e) as i32));
        }
    }
    Ok(sum.value().clamp(0.0, 1.0))
}

/// Ground truth against which an envelope is judged.
#[derive(Debug, Clone)]
pub enum Truth {
    Exact(f64),
    Estimate(TailEstimate),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

/// Check exp(lower) <= truth <= upper. With Monte Carlo truth the check only
/// fails when a bound is outside the interval in the violating direction.
pub fn envelope_check(envelope: &BoundEnvelope, truth: &Truth) -> Verdict {
    let lower = envelope.lower_log_prob.map(|l| l.exp());
    let upper = envelope.upper_tail_bound;
    match truth {
        Truth::Exact(value) => {
            if let Some(lo) = lower {
                if lo > *value {
                    return Verdict {
                        pass: false,
                        detail: format!(
                            "lower bound {:e} exceeds exact tail {:e} (margin {:e})",
                            lo,
                            value,
                            lo - value
                        ),
                    };
                }
            }
            if upper < *value {
                return Verdict {
                    pass: false,
                    detail: format!(
                        "upper bound {:e} below exact tail {:e} (margin {:e})",
                        upper,
                        value,
                        value - upper
                    ),
                };
            }
            Verdict {
                pass: true,
                detail: "sandwich holds against exact tail".into(),
            }
        }
        Truth::Estimate(est) => {
            if let Some(lo) = lower {
                if lo > est.ci_high {
                    return Verdict {
                        pass: false,
                        detail: format!(
                            "lower bound {:e} above CI high {:e}",
                            lo, est.ci_high
                        ),
                    };
                }
            }
            if upper < est.ci_low {
                return Verdict {
                    pass: false,
                    detail: format!("upper bound {:e} below CI low {:e}", upper, est.ci_low),
                };
            }
            Verdict {
                pass: true,
                detail: "bounds consistent with Monte Carlo interval".into(),
            }
        }
    }
}
