//! Counting rooted copies of a pattern graph inside a host graph by
//! backtracking over embeddings with root-class pinning.

use crate::error::{Error, Result};

use super::graph::Graph;

/// Number of embeddings of `pattern` into `host` such that pattern root
/// vertices land in the host root class and non-roots land outside it, with
/// every pattern edge mapped onto a host edge. Embeddings, not copies.
pub fn count_embeddings(host: &Graph, host_roots: u64, pattern: &Graph, pattern_roots: u64) -> u128 {
    let pn = pattern.vertex_count();
    // roots first: constrain the smallest candidate classes early
    let order: Vec<usize> = (0..pn)
        .filter(|&v| pattern_roots >> v & 1 == 1)
        .chain((0..pn).filter(|&v| pattern_roots >> v & 1 == 0))
        .collect();
    let mut image = vec![usize::MAX; pn];
    let mut used = 0u64;
    backtrack(host, host_roots, pattern, pattern_roots, &order, 0, &mut image, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    host: &Graph,
    host_roots: u64,
    pattern: &Graph,
    pattern_roots: u64,
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut u64,
) -> u128 {
    if depth == order.len() {
        return 1;
    }
    let v = order[depth];
    let is_root = pattern_roots >> v & 1 == 1;
    let hn = host.vertex_count();
    let mut class: u64 = if hn == 64 { !0 } else { (1u64 << hn) - 1 };
    class &= if is_root { host_roots } else { !host_roots };
    // candidates must be adjacent to the images of all assigned neighbors
    let mut pat_nbrs = pattern.neighbors(v);
    while pat_nbrs != 0 {
        let w = pat_nbrs.trailing_zeros() as usize;
        pat_nbrs &= pat_nbrs - 1;
        if image[w] != usize::MAX {
            class &= host.neighbors(image[w]);
        }
    }
    class &= !*used;
    let mut total = 0u128;
    while class != 0 {
        let cand = class.trailing_zeros() as usize;
        class &= class - 1;
        image[v] = cand;
        *used |= 1 << cand;
        total += backtrack(host, host_roots, pattern, pattern_roots, order, depth + 1, image, used);
        *used &= !(1 << cand);
        image[v] = usize::MAX;
    }
    total
}

/// Order of the automorphism group of (R, G) (stabilizing R setwise).
pub fn rooted_automorphisms(pattern: &Graph, pattern_roots: u64) -> u128 {
    count_embeddings(pattern, pattern_roots, pattern, pattern_roots)
}

/// N^R(F, G): rooted copies of (R, G) in F rooted at [r] = {0..r-1}.
/// Copies are counted as subgraphs, so embeddings are divided by the rooted
/// automorphism count.
pub fn count_rooted_copies(
    host: &Graph,
    host_root_count: usize,
    pattern: &Graph,
    pattern_roots: u64,
) -> Result<u128> {
    if host_root_count > host.vertex_count() {
        return Err(Error::Argument(format!(
            "root count {} exceeds host order {}",
            host_root_count,
            host.vertex_count()
        )));
    }
    let host_roots = if host_root_count == 64 {
        !0
    } else {
        (1u64 << host_root_count) - 1
    };
    let embeddings = count_embeddings(host, host_roots, pattern, pattern_roots);
    let aut = rooted_automorphisms(pattern, pattern_roots);
    if embeddings % aut != 0 {
        return Err(Error::Inconsistency(format!(
            "{} embeddings not divisible by {} automorphisms",
            embeddings, aut
        )));
    }
    Ok(embeddings / aut)
}

/// N(F, H): unrooted copies of H in F.
pub fn count_copies(host: &Graph, pattern: &Graph) -> Result<u128> {
    count_rooted_copies(host, 0, pattern, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rooted_edge() -> (Graph, u64) {
        (Graph::new(2, &[(0, 1)]).unwrap(), 0b01)
    }

    fn rooted_triangle() -> (Graph, u64) {
        (Graph::complete(3).unwrap(), 0b001)
    }

    #[test]
    fn edges_at_a_root() {
        let (g, roots) = rooted_edge();
        for n in [2usize, 5, 9] {
            let kn = Graph::complete(n).unwrap();
            assert_eq!(count_rooted_copies(&kn, 1, &g, roots).unwrap(), (n - 1) as u128);
        }
    }

    #[test]
    fn rooted_triangles_in_k4() {
        let (g, roots) = rooted_triangle();
        let k4 = Graph::complete(4).unwrap();
        // choose 2 of the 3 non-root vertices
        assert_eq!(count_rooted_copies(&k4, 1, &g, roots).unwrap(), 3);
    }

    #[test]
    fn path_rooted_both_endpoints() {
        // P3 a-b-c rooted at {a, c} in K_n with r = 2: choose the middle vertex
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let roots = 0b101;
        for n in [3usize, 6, 10] {
            let kn = Graph::complete(n).unwrap();
            assert_eq!(count_rooted_copies(&kn, 2, &p3, roots).unwrap(), (n - 2) as u128);
        }
    }

    #[test]
    fn unrooted_triangles_in_kn() {
        let k3 = Graph::complete(3).unwrap();
        let k5 = Graph::complete(5).unwrap();
        assert_eq!(count_copies(&k5, &k3).unwrap(), 10);
    }

    #[test]
    fn automorphism_counts() {
        let (tri, tri_roots) = rooted_triangle();
        assert_eq!(rooted_automorphisms(&tri, tri_roots), 2); // swap the two non-roots
        assert_eq!(rooted_automorphisms(&tri, 0), 6);
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(rooted_automorphisms(&p3, 0b101), 2);
        assert_eq!(rooted_automorphisms(&p3, 0b001), 1);
    }

    #[test]
    fn copies_are_subgraphs_not_embeddings() {
        // unrooted P3 in K3: 3 copies (each pair of edges), not 6 embeddings
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(count_copies(&k3, &p3).unwrap(), 3);
    }

    #[test]
    fn empty_host_root_class() {
        let (g, roots) = rooted_edge();
        let kn = Graph::complete(4).unwrap();
        assert_eq!(count_rooted_copies(&kn, 0, &g, roots).unwrap(), 0);
    }
}
