//! Exact maximum clique search: branch and bound with greedy colouring
//! bounds over bitset adjacency, vertices processed by descending degree.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn intersect_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

/// Simple undirected graph on `0..len` with bitset rows.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Bitset>,
}

impl Graph {
    pub fn new(len: usize) -> Self {
        Self { adj: vec![Bitset::new(len); len] }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bitset::count).sum::<usize>() / 2
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_nodes: u64,
    pub max_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCliqueOutcome {
    /// Largest clique size found (the optimum when `complete`).
    pub size: usize,
    /// A clique of that size, vertex indices ascending.
    pub witness: Vec<usize>,
    /// Colouring bound at the root; an upper bound on the optimum.
    pub upper_bound: usize,
    pub nodes: u64,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationOutcome {
    /// All cliques of the requested size, each ascending, sorted.
    pub cliques: Vec<Vec<usize>>,
    pub nodes: u64,
    pub complete: bool,
}

/// Search state shared across worker branches.
struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    best: AtomicUsize,
    started: Instant,
    limits: Limits,
}

impl Shared {
    fn new(limits: Limits, best: usize) -> Self {
        Self {
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            best: AtomicUsize::new(best),
            started: Instant::now(),
            limits,
        }
    }

    /// Counts a node; returns false once a limit is hit.
    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let k = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if k > self.limits.max_nodes || (k.is_multiple_of(1024) && self.started.elapsed() > self.limits.max_time) {
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// The graph relabelled so that index order is descending degree.
struct Ordered {
    graph: Graph,
    original: Vec<usize>,
}

impl Ordered {
    fn new(g: &Graph) -> Self {
        let mut order: Vec<usize> = (0..g.len()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let mut position = vec![0; g.len()];
        for (k, &v) in order.iter().enumerate() {
            position[v] = k;
        }
        let mut graph = Graph::new(g.len());
        for a in 0..g.len() {
            for b in g.adj[a].iter() {
                graph.add_edge(position[a], position[b]);
            }
        }
        Self { graph, original: order }
    }

    fn restore(&self, clique: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = clique.iter().map(|&k| self.original[k]).collect();
        out.sort_unstable();
        out
    }
}

/// Greedy sequential colouring of `p`; returns vertices with their colour,
/// colours nondecreasing.
fn colour(g: &Graph, p: &Bitset) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(p.count());
    let mut uncoloured = p.clone();
    let mut c = 0;
    while !uncoloured.is_empty() {
        c += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            uncoloured.remove(v);
            q.difference_with(&g.adj[v]);
            out.push((v, c));
        }
    }
    out
}

fn expand_max(g: &Graph, shared: &Shared, r: &mut Vec<usize>, mut p: Bitset, best: &mut Vec<usize>) {
    if !shared.tick() {
        return;
    }
    for (v, c) in colour(g, &p).into_iter().rev() {
        if r.len() + c <= shared.best.load(Ordering::Relaxed) {
            return;
        }
        r.push(v);
        let mut next = p.clone();
        next.intersect_with(&g.adj[v]);
        if next.is_empty() {
            if shared.best.fetch_max(r.len(), Ordering::Relaxed) < r.len() {
                *best = r.clone();
            }
        } else {
            expand_max(g, shared, r, next, best);
        }
        r.pop();
        p.remove(v);
        if shared.stop.load(Ordering::Relaxed) {
            return;
        }
    }
}

fn expand_exact(g: &Graph, shared: &Shared, k: usize, r: &mut Vec<usize>, mut p: Bitset, out: &mut Vec<Vec<usize>>) {
    if !shared.tick() {
        return;
    }
    for (v, c) in colour(g, &p).into_iter().rev() {
        if r.len() + c < k {
            return;
        }
        r.push(v);
        if r.len() == k {
            out.push(r.clone());
        } else {
            let mut next = p.clone();
            next.intersect_with(&g.adj[v]);
            if !next.is_empty() {
                expand_exact(g, shared, k, r, next, out);
            }
        }
        r.pop();
        p.remove(v);
        if shared.stop.load(Ordering::Relaxed) {
            return;
        }
    }
}

/// Root branches: vertex `v` with candidate set restricted to vertices that
/// precede it in the root colouring order.
fn root_branches(g: &Graph) -> (Vec<(usize, usize, Bitset)>, usize) {
    let mut all = Bitset::new(g.len());
    (0..g.len()).for_each(|v| all.insert(v));
    let coloured = colour(g, &all);
    let upper = coloured.last().map_or(0, |&(_, c)| c);
    let mut before = Bitset::new(g.len());
    let mut branches = Vec::with_capacity(coloured.len());
    for &(v, c) in &coloured {
        let mut p = before.clone();
        p.intersect_with(&g.adj[v]);
        branches.push((v, c, p));
        before.insert(v);
    }
    branches.reverse();
    (branches, upper)
}

/// Finds a maximum clique, starting from the clique `seed` as incumbent.
pub fn max_clique(graph: &Graph, seed: &[usize], limits: Limits, exec: Execution) -> MaxCliqueOutcome {
    debug_assert!(graph.is_clique(seed));
    let ordered = Ordered::new(graph);
    let g = &ordered.graph;
    let shared = Shared::new(limits, seed.len());
    let (branches, upper_bound) = root_branches(g);
    let found = par::map_collect(&branches, exec, |(v, c, p)| {
        let mut best = Vec::new();
        if 1 + c > shared.best.load(Ordering::Relaxed) && shared.tick() {
            let mut r = vec![*v];
            if p.is_empty() {
                if shared.best.fetch_max(1, Ordering::Relaxed) < 1 {
                    best = r.clone();
                }
            } else {
                expand_max(g, &shared, &mut r, p.clone(), &mut best);
            }
        }
        best
    });
    let complete = !shared.stop.load(Ordering::Relaxed);
    let size = shared.best.load(Ordering::Relaxed);
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let mut witness = if size == seed.len() {
        let mut s = seed.to_vec();
        s.sort_unstable();
        s
    } else {
        // Deterministic witness regardless of which worker improved first.
        let mut candidates: Vec<Vec<usize>> =
            found.into_iter().filter(|c| c.len() == size).map(|c| ordered.restore(&c)).collect();
        candidates.sort();
        candidates.into_iter().next().unwrap_or_default()
    };
    if witness.len() != size {
        witness.clear();
    }
    MaxCliqueOutcome { size, witness, upper_bound: upper_bound.max(size), nodes, complete }
}

/// Every clique of exactly `k` vertices. Meant for `k` equal to the clique
/// number, where each such clique is maximal.
pub fn cliques_of_size(graph: &Graph, k: usize, limits: Limits, exec: Execution) -> EnumerationOutcome {
    let ordered = Ordered::new(graph);
    let g = &ordered.graph;
    let shared = Shared::new(limits, 0);
    let (branches, _) = root_branches(g);
    let found = par::map_collect(&branches, exec, |(v, c, p)| {
        let mut out = Vec::new();
        if *c >= k && shared.tick() {
            let mut r = vec![*v];
            if k == 1 {
                out.push(r);
            } else if !p.is_empty() {
                expand_exact(g, &shared, k, &mut r, p.clone(), &mut out);
            }
        }
        out
    });
    let mut cliques: Vec<Vec<usize>> = found.into_iter().flatten().map(|c| ordered.restore(&c)).collect();
    cliques.sort();
    EnumerationOutcome {
        cliques,
        nodes: shared.nodes.load(Ordering::Relaxed),
        complete: !shared.stop.load(Ordering::Relaxed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn limits() -> Limits {
        Limits { max_nodes: u64::MAX, max_time: Duration::from_secs(60) }
    }

    fn brute_force_clique_number(g: &Graph) -> (usize, usize) {
        let n = g.len();
        let mut best = 0;
        let mut count = 0;
        for mask in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if g.is_clique(&vs) {
                match vs.len().cmp(&best) {
                    std::cmp::Ordering::Greater => {
                        best = vs.len();
                        count = 1;
                    }
                    std::cmp::Ordering::Equal => count += 1,
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        (best, count)
    }

    #[test]
    fn bitset_basics() {
        let mut b = Bitset::new(130);
        b.insert(3);
        b.insert(64);
        b.insert(129);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![3, 64, 129]);
        assert_eq!(b.first(), Some(3));
        b.remove(3);
        assert_eq!(b.count(), 2);
        assert!(b.contains(129) && !b.contains(128));
    }

    #[test]
    fn complete_graph_and_cycle() {
        let mut k5 = Graph::new(5);
        for a in 0..5 {
            for b in a + 1..5 {
                k5.add_edge(a, b);
            }
        }
        let out = max_clique(&k5, &[], limits(), Execution::Sequential);
        assert_eq!((out.size, out.witness.clone(), out.complete), (5, vec![0, 1, 2, 3, 4], true));
        let mut c5 = Graph::new(5);
        for a in 0..5 {
            c5.add_edge(a, (a + 1) % 5);
        }
        assert_eq!(max_clique(&c5, &[0], limits(), Execution::default()).size, 2);
        assert_eq!(cliques_of_size(&c5, 2, limits(), Execution::default()).cliques.len(), 5);
    }

    #[test]
    fn node_budget_stops_search() {
        let mut g = Graph::new(40);
        for a in 0..40 {
            for b in a + 1..40 {
                if (a * 7 + b * 3) % 5 != 0 {
                    g.add_edge(a, b);
                }
            }
        }
        let out = max_clique(&g, &[], Limits { max_nodes: 3, max_time: Duration::from_secs(60) }, Execution::Sequential);
        assert!(!out.complete);
        assert!(out.upper_bound >= out.size);
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(edges in proptest::collection::vec((0usize..12, 0usize..12), 0..50)) {
            let mut g = Graph::new(12);
            for (a, b) in edges {
                g.add_edge(a, b);
            }
            let (omega, count) = brute_force_clique_number(&g);
            let out = max_clique(&g, &[], limits(), Execution::default());
            prop_assert_eq!(out.size, omega);
            prop_assert!(g.is_clique(&out.witness) && out.witness.len() == omega);
            let all = cliques_of_size(&g, omega, limits(), Execution::default());
            prop_assert_eq!(all.cliques.len(), count);
        }
    }
}
