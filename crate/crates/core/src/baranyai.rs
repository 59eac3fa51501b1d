//! Rooted Baranyai orders of K_{2n} built from a permutation, and the cyclic
//! edge order obtained by concatenating their ordered parts.
//!
//! Part indices live in `[2n-1]` and cyclic positions in `[n(2n-1)]`, both
//! 1-based. All modular index arithmetic goes through [`wrap`].

use std::collections::HashSet;

use serde::Serialize;

use crate::count::edge_count;
use crate::error::{Error, Result};
use crate::matching::{Edge, Matching, Vertex};
use crate::par::{self, check_limit, Execution};
use crate::perm::Permutation;

/// Reduces `x` to its representative in `1..=modulus`.
#[inline]
pub fn wrap(x: i64, modulus: usize) -> usize {
    let m = modulus as i64;
    ((x - 1).rem_euclid(m) + 1) as usize
}

fn half_of(sigma: &Permutation) -> Result<usize> {
    let m = sigma.len();
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::InvalidPermutation(format!("length {m} is not a positive even number")));
    }
    Ok(m / 2)
}

fn check_index(index: usize, lo: usize, hi: usize) -> Result<()> {
    if index < lo || index > hi {
        return Err(Error::IndexOutOfRange { index, lo, hi });
    }
    Ok(())
}

#[inline]
fn edge_unchecked(sigma: &Permutation, n: usize, i: usize, j: usize) -> Edge {
    let parts = 2 * n - 1;
    if j == 0 {
        Edge::from_vertices(sigma.at(i), sigma.at(2 * n))
    } else {
        let a = wrap((i + j) as i64, parts);
        let b = wrap(i as i64 - j as i64 + parts as i64, parts);
        Edge::from_vertices(sigma.at(a), sigma.at(b))
    }
}

/// The edge `e^j_sigma(i)` for `i` in `[2n-1]` and `j` in `0..n`.
pub fn baranyai_edge(sigma: &Permutation, i: usize, j: usize) -> Result<Edge> {
    let n = half_of(sigma)?;
    check_index(i, 1, 2 * n - 1)?;
    check_index(j, 0, n - 1)?;
    Ok(edge_unchecked(sigma, n, i, j))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootedOrder {
    pub n: usize,
    pub root: Vertex,
    /// `parts[i - 1]` is `(e^{n-1}(i), ..., e^1(i), e^0(i))`.
    pub parts: Vec<Vec<Edge>>,
}

impl RootedOrder {
    /// Ordered part `i` (1-based).
    pub fn part(&self, i: usize) -> &[Edge] {
        &self.parts[i - 1]
    }

    /// True iff every part is a perfect matching and together they cover
    /// each edge of K_{2n} exactly once.
    pub fn is_partition(&self) -> bool {
        let total = edge_count(self.n);
        let mut seen = vec![false; total];
        for part in &self.parts {
            if part.len() != self.n || Matching::new(part.clone()).is_err() {
                return false;
            }
            for e in part {
                let k = e.index(self.n);
                if seen[k] {
                    return false;
                }
                seen[k] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub fn rooted_order(sigma: &Permutation) -> Result<RootedOrder> {
    let n = half_of(sigma)?;
    let parts = (1..=2 * n - 1)
        .map(|i| (0..n).rev().map(|j| edge_unchecked(sigma, n, i, j)).collect())
        .collect();
    Ok(RootedOrder { n, root: sigma.at(2 * n), parts })
}

/// The cyclic order: position `(i-1)n + j` holds `e^{n-j}(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicOrder {
    pub n: usize,
    pub sequence: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub start: usize,
    pub edges: Vec<Edge>,
}

impl Interval {
    pub fn is_matching(&self) -> bool {
        edges_disjoint(&self.edges)
    }

    pub fn to_matching(&self) -> Option<Matching> {
        Matching::new(self.edges.clone()).ok()
    }
}

pub(crate) fn edges_disjoint(edges: &[Edge]) -> bool {
    let mut used = [0u64; 4];
    for e in edges {
        for x in e.endpoints() {
            let (w, b) = (x as usize / 64, x as usize % 64);
            if used[w] >> b & 1 == 1 {
                return false;
            }
            used[w] |= 1 << b;
        }
    }
    true
}

impl CyclicOrder {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// Edge at 1-based position `pos`, wrapping modulo the length.
    #[inline]
    pub fn at(&self, pos: usize) -> Edge {
        self.sequence[wrap(pos as i64, self.len()) - 1]
    }

    /// The `r` consecutive edges starting at `start`.
    pub fn interval(&self, start: usize, r: usize) -> Result<Interval> {
        check_index(start, 1, self.len())?;
        check_index(r, 1, self.len())?;
        let edges = (0..r).map(|k| self.at(start + k)).collect();
        Ok(Interval { start, edges })
    }

    /// Are the `r`-intervals pairwise distinct as edge sets?
    pub fn intervals_distinct(&self, r: usize) -> bool {
        let mut seen = HashSet::with_capacity(self.len());
        (1..=self.len()).all(|s| {
            let mut edges: Vec<Edge> = (0..r).map(|k| self.at(s + k)).collect();
            edges.sort_unstable();
            seen.insert(edges)
        })
    }
}

pub fn cyclic_order(sigma: &Permutation) -> Result<CyclicOrder> {
    let order = rooted_order(sigma)?;
    Ok(CyclicOrder { n: order.n, sequence: order.parts.concat() })
}

/// Position of `edge` in the cyclic order of the permutation whose inverse
/// is `inv` (as returned by [`Permutation::inverse`]), computed in O(1).
///
/// Uses that 2 is invertible modulo 2n-1 with inverse n: the edge with
/// endpoints at positions p, q (both < 2n) is `e^j(i)` with i = n(p+q).
#[inline]
pub fn edge_position(n: usize, inv: &[usize], edge: Edge) -> usize {
    let parts = 2 * n - 1;
    let p = inv[edge.u() as usize];
    let q = inv[edge.v() as usize];
    let (i, j) = if p == 2 * n {
        (q, 0)
    } else if q == 2 * n {
        (p, 0)
    } else {
        let i = wrap(((p + q) * n) as i64, parts);
        let d = wrap(p as i64 - i as i64, parts);
        (i, if d < n { d } else { parts - d })
    };
    (i - 1) * n + (n - j)
}

/// The permutation `pi_c` with `pi_c(i) = pi(i + c)` on `[2n-1]` and the
/// last position fixed.
pub fn shift(pi: &Permutation, c: usize) -> Result<Permutation> {
    let n = half_of(pi)?;
    let parts = 2 * n - 1;
    check_index(c, 1, parts)?;
    let mut images: Vec<usize> = (1..=parts).map(|i| pi.at(wrap((i + c) as i64, parts)) as usize).collect();
    images.push(pi.at(2 * n) as usize);
    Permutation::from_images(images)
}

/// Checks that ordered part `i` of `pi_c` equals ordered part `i + c` of `pi`
/// for every `i`.
pub fn shift_preserves_parts(pi: &Permutation, c: usize) -> Result<bool> {
    let shifted = rooted_order(&shift(pi, c)?)?;
    let base = rooted_order(pi)?;
    let parts = 2 * base.n - 1;
    Ok((1..=parts).all(|i| shifted.part(i) == base.part(wrap((i + c) as i64, parts))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalCounterexample {
    pub sigma: Permutation,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodnessReport {
    pub n: usize,
    pub interval_len: usize,
    pub permutations_checked: usize,
    pub intervals_checked: usize,
    pub failures: usize,
    /// At most [`MAX_LISTED`] of the failing positions.
    pub counterexamples: Vec<IntervalCounterexample>,
    pub passed: bool,
}

pub const MAX_LISTED: usize = 32;

/// Scans every `len`-interval of every given cyclic order for a repeated vertex.
pub fn scan_intervals(n: usize, sigmas: &[Permutation], len: usize) -> Result<GoodnessReport> {
    let total = edge_count(n);
    check_index(len, 1, total)?;
    let mut failures = 0;
    let mut counterexamples = Vec::new();
    for sigma in sigmas {
        if sigma.len() != 2 * n {
            return Err(Error::InvalidPermutation(format!("expected length {}, got {}", 2 * n, sigma.len())));
        }
        let psi = cyclic_order(sigma)?;
        for start in 1..=total {
            let edges: Vec<Edge> = (0..len).map(|k| psi.at(start + k)).collect();
            if !edges_disjoint(&edges) {
                failures += 1;
                if counterexamples.len() < MAX_LISTED {
                    counterexamples.push(IntervalCounterexample { sigma: sigma.clone(), position: start });
                }
            }
        }
    }
    Ok(GoodnessReport {
        n,
        interval_len: len,
        permutations_checked: sigmas.len(),
        intervals_checked: sigmas.len() * total,
        failures,
        counterexamples,
        passed: failures == 0,
    })
}

/// Every (n-1)-interval of each sampled cyclic order must be a matching.
pub fn verify_goodness(n: usize, sigmas: &[Permutation]) -> Result<GoodnessReport> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("n = {n} must be at least 2")));
    }
    scan_intervals(n, sigmas, n - 1)
}

/// [`scan_intervals`] over all of `S_2n`, swept in rank order.
pub fn scan_intervals_exhaustive(n: usize, len: usize, limit: usize, exec: Execution) -> Result<GoodnessReport> {
    check_limit(2 * n, limit)?;
    let total = edge_count(n);
    check_index(len, 1, total)?;
    let (checked, failures, listed) = par::sweep(
        2 * n,
        exec,
        || (0usize, 0usize, Vec::new()),
        |(checked, mut failures, mut listed), _, sigma| {
            let psi = cyclic_order(sigma).expect("even length");
            let mut edges = Vec::with_capacity(len);
            for start in 1..=total {
                edges.clear();
                edges.extend((0..len).map(|k| psi.at(start + k)));
                if !edges_disjoint(&edges) {
                    failures += 1;
                    if listed.len() < MAX_LISTED {
                        listed.push(IntervalCounterexample { sigma: sigma.clone(), position: start });
                    }
                }
            }
            (checked + 1, failures, listed)
        },
        |a, mut b| {
            let mut listed = a.2;
            listed.append(&mut b.2);
            listed.truncate(MAX_LISTED);
            (a.0 + b.0, a.1 + b.1, listed)
        },
    )?;
    Ok(GoodnessReport {
        n,
        interval_len: len,
        permutations_checked: checked,
        intervals_checked: checked * total,
        failures,
        counterexamples: listed,
        passed: failures == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn wrap_uses_one_based_representatives() {
        assert_eq!(wrap(7, 7), 7);
        assert_eq!(wrap(8, 7), 1);
        assert_eq!(wrap(0, 7), 7);
        assert_eq!(wrap(-1, 7), 6);
        assert_eq!(wrap(14, 7), 7);
    }

    #[test]
    fn edge_formula_examples() {
        let id = Permutation::identity(8);
        assert_eq!(baranyai_edge(&id, 1, 0).unwrap(), e(1, 8));
        assert_eq!(baranyai_edge(&id, 1, 2).unwrap(), e(3, 6));
        // 3 - 2 + 7 = 8, which reduces to 1
        assert_eq!(baranyai_edge(&id, 3, 2).unwrap(), e(5, 1));
        assert!(baranyai_edge(&id, 0, 1).is_err());
        assert!(baranyai_edge(&id, 8, 1).is_err());
        assert!(baranyai_edge(&id, 1, 4).is_err());
    }

    #[test]
    fn identity_parts() {
        let order = rooted_order(&Permutation::identity(8)).unwrap();
        assert_eq!(order.root, 8);
        assert_eq!(order.part(1), &[e(4, 5), e(3, 6), e(2, 7), e(1, 8)]);
        let k4 = rooted_order(&Permutation::identity(4)).unwrap();
        assert_eq!(k4.parts.len(), 3);
        assert!(k4.is_partition());
    }

    #[test]
    fn every_part_ends_at_root() {
        for sigma in all_permutations(6) {
            let order = rooted_order(&sigma).unwrap();
            assert!(order.is_partition());
            assert!(order.parts.iter().all(|p| p.last().unwrap().contains(order.root)));
        }
    }

    #[test]
    fn cyclic_layout() {
        let psi = cyclic_order(&Permutation::identity(4)).unwrap();
        assert_eq!(psi.at(1), e(2, 3));
        assert_eq!(psi.at(2), e(1, 4));
        assert_eq!(psi.len(), 6);
        let psi = cyclic_order(&Permutation::identity(8)).unwrap();
        assert_eq!(&psi.sequence[..4], &[e(4, 5), e(3, 6), e(2, 7), e(1, 8)]);
    }

    #[test]
    fn interval_wraps() {
        let psi = cyclic_order(&Permutation::identity(4)).unwrap();
        let iv = psi.interval(6, 2).unwrap();
        assert_eq!(iv.edges, vec![psi.at(6), psi.at(1)]);
        assert_eq!(psi.interval(3, 1).unwrap().edges, vec![psi.at(3)]);
        assert!(psi.interval(1, 0).is_err());
        assert!(psi.interval(1, 7).is_err());
        assert!(psi.interval(7, 1).is_err());
    }

    #[test]
    fn shift_examples() {
        let id = Permutation::identity(4);
        assert_eq!(shift(&id, 1).unwrap().images(), &[2, 3, 1, 4]);
        assert_eq!(shift(&id, 3).unwrap(), id);
        assert!(shift(&id, 0).is_err());
        assert!(shift(&id, 4).is_err());
    }

    #[test]
    fn shift_preserves_parts_exhaustive_k6() {
        for pi in all_permutations(6) {
            for c in 1..=5 {
                assert!(shift_preserves_parts(&pi, c).unwrap());
            }
        }
    }

    #[test]
    fn edge_position_matches_scan() {
        for n in 1..=4 {
            for sigma in all_permutations(2 * n).step_by(7) {
                let psi = cyclic_order(&sigma).unwrap();
                let inv = sigma.inverse();
                for (k, &edge) in psi.sequence.iter().enumerate() {
                    assert_eq!(edge_position(n, &inv, edge), k + 1);
                }
            }
        }
    }

    #[test]
    fn goodness_holds_for_k6_and_identity_k16() {
        let all: Vec<_> = all_permutations(6).collect();
        assert!(verify_goodness(3, &all).unwrap().passed);
        assert!(verify_goodness(8, &[Permutation::identity(16)]).unwrap().passed);
    }

    #[test]
    fn exhaustive_scan_matches_listed_scan() {
        let all: Vec<_> = all_permutations(6).collect();
        for len in 1..=3 {
            let listed = scan_intervals(3, &all, len).unwrap();
            let swept = scan_intervals_exhaustive(3, len, 10, Execution::default()).unwrap();
            assert_eq!(listed, swept);
        }
        assert!(scan_intervals_exhaustive(6, 5, 10, Execution::default()).is_err());
    }

    #[test]
    fn length_n_intervals_can_fail() {
        let report = scan_intervals(3, &[Permutation::identity(6)], 3).unwrap();
        assert!(!report.passed);
        assert!(report.failures >= 1);
    }

    #[test]
    fn intervals_are_distinct_below_n() {
        for n in 2..=4 {
            for sigma in all_permutations(2 * n) {
                let psi = cyclic_order(&sigma).unwrap();
                for r in 1..n {
                    assert!(psi.intervals_distinct(r), "n={n} r={r} sigma={sigma}");
                }
            }
        }
    }

    #[test]
    fn rooted_order_is_injective_on_s6() {
        let orders: HashSet<_> = all_permutations(6)
            .map(|s| {
                let o = rooted_order(&s).unwrap();
                (o.root, o.parts)
            })
            .collect();
        assert_eq!(orders.len(), 720);
    }
}
