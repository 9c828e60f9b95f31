//! Reverse Cuthill-McKee ordering to shrink the envelope of mesh matrices.

use super::csr::Csr;

/// Returns `perm` with `perm[new] = old`, deterministic for a given pattern.
pub fn reverse_cuthill_mckee(a: &Csr) -> Vec<usize> {
    let n = a.n;
    let degree = |i: usize| a.row_ptr[i + 1] - a.row_ptr[i];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut component = Vec::new();
    while order.len() < n {
        let start = pseudo_peripheral(a, &visited);
        component.clear();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        visited[start] = true;
        while let Some(u) = queue.pop_front() {
            component.push(u);
            let mut nbrs: Vec<usize> = (a.row_ptr[u]..a.row_ptr[u + 1])
                .map(|k| a.col_idx[k])
                .filter(|&v| v != u && !visited[v])
                .collect();
            nbrs.sort_unstable_by_key(|&v| (degree(v), v));
            for v in nbrs {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
        order.extend_from_slice(&component);
    }
    order.reverse();
    order
}

/// Double-BFS heuristic for a low-eccentricity start node.
fn pseudo_peripheral(a: &Csr, visited: &[bool]) -> usize {
    let n = a.n;
    let mut start = (0..n)
        .filter(|&i| !visited[i])
        .min_by_key(|&i| (a.row_ptr[i + 1] - a.row_ptr[i], i))
        .expect("no unvisited node");
    for _ in 0..2 {
        let far = bfs_farthest(a, start, visited);
        if far == start {
            break;
        }
        start = far;
    }
    start
}

fn bfs_farthest(a: &Csr, start: usize, visited: &[bool]) -> usize {
    let n = a.n;
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    dist[start] = 0;
    queue.push_back(start);
    let mut last = start;
    while let Some(u) = queue.pop_front() {
        last = u;
        for k in a.row_ptr[u]..a.row_ptr[u + 1] {
            let v = a.col_idx[k];
            if v != u && !visited[v] && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    last
}

/// Applies a permutation to a symmetric CSR matrix: B = P A P^T with
/// `perm[new] = old`.
pub fn permute_symmetric(a: &Csr, perm: &[usize]) -> Csr {
    let n = a.n;
    let mut inv = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let mut b = super::csr::TripletBuilder::new(n);
    for i in 0..n {
        for k in a.row_ptr[i]..a.row_ptr[i + 1] {
            b.add(inv[i], inv[a.col_idx[k]], a.values[k]);
        }
    }
    b.build()
}
