//! Vertices, edges, matchings and families of matchings of K_{2n}.
//!
//! Vertices are 1-based (`1..=2n`) everywhere in the public surface.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported `n`; vertex labels are stored as `u8`.
pub const MAX_N: usize = 100;

pub type Vertex = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    n: usize,
    r: usize,
}

impl Params {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidParameters(format!("n = {n} must lie in 1..={MAX_N}")));
        }
        if r == 0 || r > n {
            return Err(Error::InvalidParameters(format!("r = {r} must lie in 1..={n}")));
        }
        Ok(Self { n, r })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn r(self) -> usize {
        self.r
    }

    pub fn vertex_count(self) -> usize {
        2 * self.n
    }

    /// Errors unless `r <= n - 1`, the range the cycle-method results cover.
    pub fn require_proper(self) -> Result<Self> {
        if self.r >= self.n {
            return Err(Error::InvalidParameters(format!(
                "r = {} must be at most n - 1 = {}",
                self.r,
                self.n - 1
            )));
        }
        Ok(self)
    }
}

/// An unordered pair of distinct vertices, stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[Vertex; 2]", try_from = "[Vertex; 2]")]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b || a == 0 || b == 0 || a > 2 * MAX_N || b > 2 * MAX_N {
            return Err(Error::InvalidEdge(a, b));
        }
        Ok(Self::from_vertices(a as Vertex, b as Vertex))
    }

    /// Caller guarantees `a != b`.
    pub(crate) fn from_vertices(a: Vertex, b: Vertex) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            Self { u: a, v: b }
        } else {
            Self { u: b, v: a }
        }
    }

    pub fn u(self) -> Vertex {
        self.u
    }

    pub fn v(self) -> Vertex {
        self.v
    }

    pub fn endpoints(self) -> [Vertex; 2] {
        [self.u, self.v]
    }

    pub fn touches(self, other: Edge) -> bool {
        self.u == other.u || self.u == other.v || self.v == other.u || self.v == other.v
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    /// Checks both endpoints lie in `[2n]`.
    pub fn check_in(self, n: usize) -> Result<Self> {
        if self.v as usize > 2 * n {
            return Err(Error::InvalidEdge(self.u as usize, self.v as usize));
        }
        Ok(self)
    }

    /// Lexicographic index of the edge among all edges of K_{2n}, in `0..n(2n-1)`.
    pub fn index(self, n: usize) -> usize {
        let m = 2 * n;
        let u = self.u as usize - 1;
        let v = self.v as usize - 1;
        // edges {a, *} with a < u come first
        u * (2 * m - u - 1) / 2 + (v - u - 1)
    }
}

impl From<Edge> for [Vertex; 2] {
    fn from(e: Edge) -> Self {
        e.endpoints()
    }
}

impl TryFrom<[Vertex; 2]> for Edge {
    type Error = Error;

    fn try_from(value: [Vertex; 2]) -> Result<Self> {
        Edge::new(value[0] as usize, value[1] as usize)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

/// All edges of K_{2n} in lexicographic order.
pub fn all_edges(n: usize) -> Vec<Edge> {
    let m = (2 * n) as Vertex;
    (1..=m)
        .flat_map(|u| (u + 1..=m).map(move |v| Edge { u, v }))
        .collect()
}

/// A set of pairwise vertex-disjoint edges, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn new(mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_unstable();
        for (i, a) in edges.iter().enumerate() {
            for b in &edges[i + 1..] {
                if a.touches(*b) {
                    return Err(Error::NotAMatching(format!("{a} and {b} share a vertex")));
                }
            }
        }
        Ok(Self { edges })
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(a, b)| Edge::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(edges)
    }

    /// Accepts any edge list that is already known to be disjoint.
    pub(crate) fn from_disjoint(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        debug_assert!(Self::new(edges.clone()).is_ok());
        Self { edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// The vertices covered by the matching, ascending.
    pub fn support(&self) -> Vec<Vertex> {
        let mut s: Vec<Vertex> = self.edges.iter().flat_map(|e| e.endpoints()).collect();
        s.sort_unstable();
        s
    }

    pub fn canonicalize(&self) -> Self {
        Self::from_disjoint(self.edges.clone())
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.edges.iter()).finish()
    }
}

/// True iff the matchings share an edge. Shared vertices alone do not count.
pub fn intersects(a: &Matching, b: &Matching) -> bool {
    let (mut i, mut j) = (0, 0);
    let (x, y) = (a.edges(), b.edges());
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// A deduplicated, sorted set of matchings of a common size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingFamily {
    r: usize,
    members: Vec<Matching>,
}

impl MatchingFamily {
    /// An empty family of r-matchings.
    pub fn empty(r: usize) -> Self {
        Self { r, members: Vec::new() }
    }

    pub fn new(r: usize, members: impl IntoIterator<Item = Matching>) -> Result<Self> {
        let mut members: Vec<Matching> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| m.len() != r) {
            return Err(Error::InvalidParameters(format!(
                "family member {bad:?} has size {} instead of {r}",
                bad.len()
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { r, members })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn members(&self) -> &[Matching] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: &Matching) -> bool {
        self.members.binary_search(m).is_ok()
    }

    pub fn is_intersecting(&self) -> bool {
        self.members
            .iter()
            .enumerate()
            .all(|(i, a)| self.members[i + 1..].iter().all(|b| intersects(a, b)))
    }

    /// Edges contained in every member. Empty for the empty family.
    pub fn common_edges(&self) -> Vec<Edge> {
        let Some((first, rest)) = self.members.split_first() else {
            return Vec::new();
        };
        first
            .edges()
            .iter()
            .copied()
            .filter(|&e| rest.iter().all(|m| m.contains(e)))
            .collect()
    }
}

/// All r-matchings of K_{2n} in lexicographic order of their sorted edge lists.
pub fn enumerate_matchings(params: Params) -> Vec<Matching> {
    let edges = all_edges(params.n());
    let mut used = vec![false; params.vertex_count() + 1];
    let mut stack = Vec::with_capacity(params.r());
    let mut out = Vec::new();
    extend_matchings(&edges, 0, params.r(), &mut used, &mut stack, &mut out);
    out
}

fn extend_matchings(
    edges: &[Edge],
    from: usize,
    r: usize,
    used: &mut [bool],
    stack: &mut Vec<Edge>,
    out: &mut Vec<Matching>,
) {
    if stack.len() == r {
        out.push(Matching { edges: stack.clone() });
        return;
    }
    for (i, &e) in edges.iter().enumerate().skip(from) {
        if used[e.u as usize] || used[e.v as usize] {
            continue;
        }
        used[e.u as usize] = true;
        used[e.v as usize] = true;
        stack.push(e);
        extend_matchings(edges, i + 1, r, used, stack, out);
        stack.pop();
        used[e.u as usize] = false;
        used[e.v as usize] = false;
    }
}

/// The star of r-matchings containing `center`.
pub fn star_family(params: Params, center: Edge) -> Result<MatchingFamily> {
    center.check_in(params.n())?;
    let members = enumerate_matchings(params)
        .into_iter()
        .filter(|m| m.contains(center));
    MatchingFamily::new(params.r(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{chi, phi};

    fn p(n: usize, r: usize) -> Params {
        Params::new(n, r).unwrap()
    }

    fn m(pairs: &[(usize, usize)]) -> Matching {
        Matching::from_pairs(pairs).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(2, 3).is_err());
        assert!(Params::new(0, 0).is_err());
        assert!(Params::new(3, 0).is_err());
        assert!(Params::new(3, 3).unwrap().require_proper().is_err());
        assert!(Params::new(3, 2).unwrap().require_proper().is_ok());
    }

    #[test]
    fn edge_canonical_and_index() {
        let e = Edge::new(5, 2).unwrap();
        assert_eq!((e.u(), e.v()), (2, 5));
        assert!(Edge::new(3, 3).is_err());
        for n in 1..6 {
            for (i, e) in all_edges(n).into_iter().enumerate() {
                assert_eq!(e.index(n), i);
            }
        }
    }

    #[test]
    fn small_enumerations() {
        let k4_edges = enumerate_matchings(p(2, 1));
        assert_eq!(k4_edges.len(), 6);
        let perfect = enumerate_matchings(p(2, 2));
        assert_eq!(
            perfect,
            vec![m(&[(1, 2), (3, 4)]), m(&[(1, 3), (2, 4)]), m(&[(1, 4), (2, 3)])]
        );
        assert_eq!(enumerate_matchings(p(3, 2)).len(), 45);
    }

    #[test]
    fn enumeration_is_sorted_and_matches_chi() {
        for n in 1..=4 {
            for r in 1..=n {
                let all = enumerate_matchings(p(n, r));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(all.len() as u128, chi(p(n, r)).unwrap());
            }
        }
    }

    #[test]
    fn intersects_is_edge_equality() {
        assert!(intersects(&m(&[(1, 2), (3, 4)]), &m(&[(1, 2), (5, 6)])));
        assert!(!intersects(&m(&[(1, 2), (3, 4)]), &m(&[(1, 3), (2, 4)])));
        let a = m(&[(1, 6), (2, 5)]);
        assert!(intersects(&a, &a));
    }

    #[test]
    fn matching_rejects_shared_vertex() {
        assert!(Matching::from_pairs(&[(1, 2), (2, 3)]).is_err());
    }

    #[test]
    fn stars() {
        let s = star_family(p(2, 1), Edge::new(1, 2).unwrap()).unwrap();
        assert_eq!(s.members(), &[m(&[(1, 2)])]);
        let s = star_family(p(3, 2), Edge::new(1, 2).unwrap()).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.is_intersecting());
        let s = star_family(p(4, 3), Edge::new(7, 8).unwrap()).unwrap();
        assert_eq!(s.len() as u128, phi(p(4, 3)).unwrap());
        assert_eq!(s.common_edges(), vec![Edge::new(7, 8).unwrap()]);
        assert!(star_family(p(2, 1), Edge::new(1, 5).unwrap()).is_err());
    }

    #[test]
    fn family_rejects_mixed_sizes() {
        assert!(MatchingFamily::new(1, [m(&[(1, 2)]), m(&[(1, 2), (3, 4)])]).is_err());
        let f = MatchingFamily::new(1, [m(&[(1, 2)]), m(&[(1, 2)])]).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn edge_json_is_pair() {
        let e = Edge::new(3, 1).unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), "[1,3]");
        let back: Edge = serde_json::from_str("[4,2]").unwrap();
        assert_eq!(back, Edge::new(2, 4).unwrap());
    }
}
