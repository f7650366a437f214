//! Backtracking isomorphism search for incidence structures.
//!
//! Two 0/1 matrices are isomorphic as incidence structures when some row
//! permutation and column permutation carry one onto the other. Vertices
//! are matched in breadth-first order so that every new vertex (after the
//! first of its component) has an already-matched neighbour, which keeps the
//! candidate lists short. Candidate pairs must agree on a refinement
//! invariant (side, degree, sorted neighbour degrees and the number of
//! vertices at each breadth-first distance), and a partial map must preserve
//! graph distance between every pair of matched vertices.

use std::collections::VecDeque;

use crate::gf2::BitMatrix;

/// Row and column maps with `a[r][c] == b[rows[r]][cols[c]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceIsomorphism {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(IncidenceIsomorphism),
    /// The search space was exhausted; the structures are not isomorphic.
    NotIsomorphic,
    /// The node budget ran out first.
    BudgetExhausted,
}

struct Bipartite {
    n_rows: usize,
    adj: Vec<Vec<usize>>,
    /// All-pairs distances, `u32::MAX` between components.
    dist: Vec<Vec<u32>>,
}

impl Bipartite {
    fn new(m: &BitMatrix) -> Self {
        let (r, c) = (m.n_rows(), m.n_cols());
        let mut adj = vec![Vec::new(); r + c];
        for i in 0..r {
            for j in m.row_support(i) {
                adj[i].push(r + j);
                adj[r + j].push(i);
            }
        }
        let mut g = Bipartite { n_rows: r, adj, dist: Vec::new() };
        g.dist = (0..r + c).map(|s| g.distances_from(s)).collect();
        g
    }

    fn distances_from(&self, s: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.len()];
        let mut queue = VecDeque::from([s]);
        dist[s] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn distance_profile(&self, s: usize) -> Vec<usize> {
        let mut counts = Vec::new();
        for &d in self.dist[s].iter().filter(|&&d| d != u32::MAX) {
            if counts.len() <= d as usize {
                counts.resize(d as usize + 1, 0);
            }
            counts[d as usize] += 1;
        }
        counts
    }

    fn invariants(&self) -> Vec<(bool, usize, Vec<usize>, Vec<usize>)> {
        (0..self.len())
            .map(|v| {
                let mut nd: Vec<usize> = self.adj[v].iter().map(|&u| self.adj[u].len()).collect();
                nd.sort_unstable();
                (v < self.n_rows, self.adj[v].len(), nd, self.distance_profile(v))
            })
            .collect()
    }

    fn bfs_order(&self) -> Vec<(usize, Option<usize>)> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::with_capacity(self.len());
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([(s, None)]);
            while let Some((u, parent)) = queue.pop_front() {
                order.push((u, parent));
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back((v, Some(u)));
                    }
                }
            }
        }
        order
    }
}

struct Search<'a> {
    a: &'a Bipartite,
    b: &'a Bipartite,
    class_a: Vec<usize>,
    class_b: Vec<usize>,
    order: Vec<(usize, Option<usize>)>,
    map: Vec<usize>,
    used: Vec<bool>,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn consistent(&self, k: usize, c: usize) -> bool {
        let v = self.order[k].0;
        self.order[..k].iter().all(|&(x, _)| self.a.dist[v][x] == self.b.dist[c][self.map[x]])
    }

    fn extend(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        if self.budget == 0 {
            self.exhausted = true;
            return false;
        }
        self.budget -= 1;
        let (v, parent) = self.order[k];
        let candidates: Vec<usize> = match parent {
            Some(u) => self.b.adj[self.map[u]].clone(),
            None => (0..self.b.len()).collect(),
        };
        for c in candidates {
            if self.used[c] || self.class_a[v] != self.class_b[c] || !self.consistent(k, c) {
                continue;
            }
            self.map[v] = c;
            self.used[c] = true;
            if self.extend(k + 1) {
                return true;
            }
            self.map[v] = usize::MAX;
            self.used[c] = false;
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

/// Searches for row/column permutations carrying `a` onto `b`, visiting at
/// most `budget` search nodes.
pub fn find_incidence_isomorphism(a: &BitMatrix, b: &BitMatrix, budget: u64) -> SearchOutcome {
    if a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols() {
        return SearchOutcome::NotIsomorphic;
    }
    let ga = Bipartite::new(a);
    let gb = Bipartite::new(b);
    // Class ids shared between both graphs.
    let inv_a = ga.invariants();
    let inv_b = gb.invariants();
    let mut classes: Vec<&(bool, usize, Vec<usize>, Vec<usize>)> = inv_a.iter().chain(inv_b.iter()).collect();
    classes.sort();
    classes.dedup();
    let class_of = |x: &(bool, usize, Vec<usize>, Vec<usize>)| classes.binary_search(&x).expect("present");
    let class_a: Vec<usize> = inv_a.iter().map(class_of).collect();
    let class_b: Vec<usize> = inv_b.iter().map(class_of).collect();
    let mut ca = class_a.clone();
    let mut cb = class_b.clone();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return SearchOutcome::NotIsomorphic;
    }

    let mut search = Search {
        order: ga.bfs_order(),
        a: &ga,
        b: &gb,
        class_a,
        class_b,
        map: vec![usize::MAX; ga.len()],
        used: vec![false; gb.len()],
        budget,
        exhausted: false,
    };
    if search.extend(0) {
        let r = a.n_rows();
        let rows = search.map[..r].to_vec();
        let cols = search.map[r..].iter().map(|&x| x - r).collect();
        SearchOutcome::Found(IncidenceIsomorphism { rows, cols })
    } else if search.exhausted {
        SearchOutcome::BudgetExhausted
    } else {
        SearchOutcome::NotIsomorphic
    }
}

impl IncidenceIsomorphism {
    /// Checks `a[r][c] == b[rows[r]][cols[c]]` everywhere.
    pub fn verify(&self, a: &BitMatrix, b: &BitMatrix) -> bool {
        (0..a.n_rows()).all(|r| (0..a.n_cols()).all(|c| a.get(r, c) == b.get(self.rows[r], self.cols[c])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_permutation_of_small_matrix() {
        let a = BitMatrix::from_row_indices(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]);
        let b = a.permuted(&[2, 0, 3, 1], &[1, 3, 0, 2]);
        match find_incidence_isomorphism(&a, &b, 1_000_000) {
            SearchOutcome::Found(iso) => assert!(iso.verify(&a, &b)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_non_isomorphic() {
        // an 8-cycle versus two 4-cycles, both 2-regular
        let a = BitMatrix::from_row_indices(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]);
        let b = BitMatrix::from_row_indices(4, &[vec![0, 1], vec![0, 1], vec![2, 3], vec![2, 3]]);
        assert_eq!(find_incidence_isomorphism(&a, &b, 1_000_000), SearchOutcome::NotIsomorphic);
    }
}
