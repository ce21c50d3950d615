//! Fractional independence number α* as an exact rational, with an optimal
//! half-integral assignment.
//!
//! The LP relaxation is solved combinatorially through the bipartite double
//! cover B(G): an independent set of size s in B(G) maps to a feasible
//! half-integral assignment of weight s/2 and vice versa, so
//! α*(G) = (2 v(G) - ν(B(G))) / 2 with ν a maximum matching (König).

use num_rational::Ratio;

use super::graph::Graph;

/// One vertex weight in half units: 0, 1, or 2 (i.e. 0, 1/2, 1).
pub type Halves = u8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaStar {
    pub value: Ratio<i64>,
    /// x_v in half units, so value = Σ assignment[v] / 2.
    pub assignment: Vec<Halves>,
}

/// Compute α*(G) and an optimal assignment.
pub fn alpha_star(g: &Graph) -> AlphaStar {
    let n = g.vertex_count();
    if n == 0 {
        return AlphaStar {
            value: Ratio::new(0, 1),
            assignment: vec![],
        };
    }
    // Bipartite double cover: left copies 0..n, right copies 0..n,
    // an edge (u, v') and (v, u') for every uv in G.
    let right_adj: Vec<u64> = (0..n).map(|v| g.neighbors(v)).collect();

    // Kuhn's augmenting-path maximum matching.
    let mut match_left: Vec<Option<usize>> = vec![None; n];
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        let mut visited = 0u64;
        try_augment(u, &right_adj, &mut match_left, &mut match_right, &mut visited);
    }
    let nu = match_left.iter().filter(|m| m.is_some()).count();

    // König: Z = unmatched left vertices plus everything reachable along
    // alternating paths; the independent set is (L ∩ Z) ∪ (R \ Z).
    let mut z_left = 0u64;
    let mut z_right = 0u64;
    let mut queue: Vec<usize> = (0..n).filter(|&u| match_left[u].is_none()).collect();
    for &u in &queue {
        z_left |= 1 << u;
    }
    while let Some(u) = queue.pop() {
        let mut reach = right_adj[u] & !z_right;
        while reach != 0 {
            let v = reach.trailing_zeros() as usize;
            reach &= reach - 1;
            z_right |= 1 << v;
            if let Some(w) = match_right[v] {
                if z_left >> w & 1 == 0 {
                    z_left |= 1 << w;
                    queue.push(w);
                }
            }
        }
    }
    let in_left = z_left;
    let in_right = !z_right;

    let assignment: Vec<Halves> = (0..n)
        .map(|v| (in_left >> v & 1) as u8 + (in_right >> v & 1) as u8)
        .collect();
    let value = Ratio::new(2 * n as i64 - nu as i64, 2);
    debug_assert_eq!(
        assignment.iter().map(|&h| h as i64).sum::<i64>(),
        2 * n as i64 - nu as i64
    );
    debug_assert!(g
        .edges()
        .iter()
        .all(|&(u, v)| assignment[u] + assignment[v] <= 2));
    AlphaStar { value, assignment }
}

fn try_augment(
    u: usize,
    right_adj: &[u64],
    match_left: &mut Vec<Option<usize>>,
    match_right: &mut Vec<Option<usize>>,
    visited: &mut u64,
) -> bool {
    let mut cands = right_adj[u] & !*visited;
    while cands != 0 {
        let v = cands.trailing_zeros() as usize;
        cands &= cands - 1;
        *visited |= 1 << v;
        let free = match match_right[v] {
            None => true,
            Some(w) => try_augment(w, right_adj, match_left, match_right, visited),
        };
        if free {
            match_left[u] = Some(v);
            match_right[v] = Some(u);
            return true;
        }
    }
    false
}
