//! Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
//!
//! Instances here are small (tuple sets of size `d-1`, posets of a few
//! hundred agents), so the `O(V·E)` bound is plenty.

/// Size of a maximum matching between `left` and `right` vertices, where
/// `adj[u]` lists the right neighbours of left vertex `u`.
pub fn max_matching(adj: &[Vec<usize>], right: usize) -> usize {
    let mut match_right: Vec<Option<usize>> = vec![None; right];
    let mut size = 0;
    let mut seen = vec![false; right];
    for u in 0..adj.len() {
        seen.iter_mut().for_each(|s| *s = false);
        if augment(u, adj, &mut match_right, &mut seen) {
            size += 1;
        }
    }
    size
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_right: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        let free = match match_right[v] {
            None => true,
            Some(w) => augment(w, adj, match_right, seen),
        };
        if free {
            match_right[v] = Some(u);
            return true;
        }
    }
    false
}

/// True iff the bipartite graph on `k + k` vertices with edges given by
/// `edge(i, j)` has a perfect matching.
pub fn has_perfect_matching(k: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    let adj: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..k).filter(|&j| edge(i, j)).collect())
        .collect();
    if adj.iter().any(|a| a.is_empty()) {
        return false;
    }
    max_matching(&adj, k) == k
}
