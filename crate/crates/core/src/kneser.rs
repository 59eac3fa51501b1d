//! The Kneser graph K(m, 2) and certificates for powers of Hamiltonian
//! cycles read off the cyclic edge order.

use serde::{Deserialize, Serialize};

use crate::baranyai::cyclic_order;
use crate::clique::Graph;
use crate::error::{Error, Result};
use crate::matching::{all_edges, Edge};
use crate::perm::Permutation;

/// Vertices are the 2-subsets of `[m]` in lexicographic order; two are
/// adjacent iff disjoint.
#[derive(Debug, Clone)]
pub struct KneserGraph {
    m: usize,
    vertices: Vec<Edge>,
    adjacency: Graph,
}

impl KneserGraph {
    pub fn new(m: usize) -> Result<Self> {
        if !(2..=2 * crate::matching::MAX_N).contains(&m) {
            return Err(Error::InvalidParameters(format!("ground set size m = {m} unsupported")));
        }
        let vertices = two_subsets(m);
        let mut adjacency = Graph::new(vertices.len());
        for (a, x) in vertices.iter().enumerate() {
            for (b, y) in vertices.iter().enumerate().skip(a + 1) {
                if !x.touches(*y) {
                    adjacency.add_edge(a, b);
                }
            }
        }
        Ok(Self { m, vertices, adjacency })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> &[Edge] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.edge_count()
    }

    pub fn degree(&self, v: Edge) -> usize {
        self.adjacency.degree(self.index_of(v))
    }

    pub fn index_of(&self, v: Edge) -> usize {
        self.vertices.binary_search(&v).expect("vertex of the graph")
    }

    pub fn adjacent(&self, a: Edge, b: Edge) -> bool {
        self.adjacency.adjacent(self.index_of(a), self.index_of(b))
    }
}

fn two_subsets(m: usize) -> Vec<Edge> {
    if m.is_multiple_of(2) {
        return all_edges(m / 2);
    }
    let mut out = all_edges(m.div_ceil(2));
    out.retain(|e| (e.v() as usize) <= m);
    out
}

/// A cyclic vertex order claimed to be the `k`-th power of a Hamiltonian cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamPowerCertificate {
    pub m: usize,
    pub k: usize,
    pub order: Vec<Edge>,
}

/// The cyclic order of `sigma` as a certificate for power `k` on K(2n, 2).
pub fn certificate_from(sigma: &Permutation, k: usize) -> Result<HamPowerCertificate> {
    let psi = cyclic_order(sigma)?;
    Ok(HamPowerCertificate { m: sigma.len(), k, order: psi.sequence })
}

/// The identity cyclic order on K(2n, 2) with `k = n - 2`.
pub fn ham_power_certificate(n: usize) -> Result<HamPowerCertificate> {
    if n < 3 {
        return Err(Error::InvalidParameters(format!("n = {n} must be at least 3")));
    }
    certificate_from(&Permutation::identity(2 * n), n - 2)
}

/// True iff every two vertices at cyclic distance `1..=k` in the order are
/// adjacent. Errors if the order is not a permutation of the vertex set.
pub fn verify_ham_power(graph: &KneserGraph, cert: &HamPowerCertificate) -> Result<bool> {
    if cert.m != graph.m() {
        return Err(Error::MalformedCertificate(format!("certificate is for m = {}, graph has m = {}", cert.m, graph.m())));
    }
    let len = graph.vertex_count();
    if cert.order.len() != len {
        return Err(Error::MalformedCertificate(format!("order has {} vertices, graph has {len}", cert.order.len())));
    }
    let mut seen = vec![false; len];
    let mut idx = Vec::with_capacity(len);
    for &v in &cert.order {
        let i = graph
            .vertices
            .binary_search(&v)
            .map_err(|_| Error::MalformedCertificate(format!("{v} is not a vertex")))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::MalformedCertificate(format!("{v} appears twice")));
        }
        idx.push(i);
    }
    let reach = cert.k.min(len / 2);
    Ok((0..len).all(|a| (1..=reach).all(|d| graph.adjacency.adjacent(idx[a], idx[(a + d) % len]))))
}
