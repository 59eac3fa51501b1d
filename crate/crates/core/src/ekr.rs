//! Exact maximum intersecting families of r-matchings via maximum clique
//! search on the intersection graph, plus star recognition.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::clique::{cliques_of_size, max_clique, Graph, Limits};
use crate::count::{binomial, chi, phi};
use crate::error::{Error, Result};
use crate::kneser::KneserGraph;
use crate::matching::{enumerate_matchings, Edge, Matching, MatchingFamily, Params};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: f64,
    pub enumerate_all_maximum: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_nodes: 50_000_000, max_seconds: 300.0, enumerate_all_maximum: false }
    }
}

impl SearchBudget {
    pub fn validate(self) -> Result<Self> {
        if self.max_nodes == 0 || self.max_seconds.is_nan() || self.max_seconds <= 0.0 {
            return Err(Error::InvalidParameters("search budget limits must be positive".into()));
        }
        Ok(self)
    }

    fn limits(self) -> Limits {
        Limits { max_nodes: self.max_nodes, max_time: Duration::from_secs_f64(self.max_seconds) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Proven,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub center: Option<Edge>,
    pub members: Vec<Matching>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EkrReport {
    pub n: usize,
    pub r: usize,
    pub matchings: usize,
    pub max_size: usize,
    pub upper_bound: usize,
    pub phi_value: u128,
    /// One maximum family, or all of them after enumeration; sorted.
    pub witnesses: Vec<Witness>,
    pub maximum_families: Option<usize>,
    pub all_maximum_are_stars: Option<bool>,
    /// Whether the maximum families are exactly the stars, one per edge.
    pub equals_star_set: Option<bool>,
    pub nodes: u64,
    pub status: SearchStatus,
}

impl EkrReport {
    /// Bound and (when enumerated) uniqueness both confirmed.
    pub fn confirms_theorem(&self) -> bool {
        self.status == SearchStatus::Proven
            && self.max_size as u128 == self.phi_value
            && self.all_maximum_are_stars.unwrap_or(true)
            && self.equals_star_set.unwrap_or(true)
    }
}

/// The intersection graph of all r-matchings, vertices in lexicographic order.
pub fn intersection_graph(params: Params) -> (Vec<Matching>, Graph) {
    let all = enumerate_matchings(params);
    let n = params.n();
    let mut by_edge: Vec<Vec<usize>> = vec![Vec::new(); crate::count::edge_count(n)];
    for (i, m) in all.iter().enumerate() {
        for e in m.edges() {
            by_edge[e.index(n)].push(i);
        }
    }
    let mut g = Graph::new(all.len());
    for holders in &by_edge {
        for (k, &a) in holders.iter().enumerate() {
            for &b in &holders[k + 1..] {
                g.add_edge(a, b);
            }
        }
    }
    (all, g)
}

/// The smallest edge common to every member, if any.
pub fn is_star(family: &MatchingFamily) -> Result<Option<Edge>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(family.common_edges().first().copied())
}

fn witness(all: &[Matching], clique: &[usize], r: usize) -> Result<Witness> {
    let members: Vec<Matching> = clique.iter().map(|&i| all[i].clone()).collect();
    let family = MatchingFamily::new(r, members)?;
    // every reported family is rechecked independently of the graph
    if !family.is_intersecting() {
        return Err(Error::InvalidParameters("search produced a non-intersecting family".into()));
    }
    let center = if family.is_empty() { None } else { is_star(&family)? };
    Ok(Witness { center, members: family.members().to_vec() })
}

pub fn max_intersecting_with(params: Params, budget: SearchBudget, exec: Execution) -> Result<EkrReport> {
    let budget = budget.validate()?;
    let (n, r) = (params.n(), params.r());
    let (all, graph) = intersection_graph(params);
    let seed_edge = Edge::new(1, 2)?;
    let seed: Vec<usize> = (0..all.len()).filter(|&i| all[i].contains(seed_edge)).collect();
    let phi_value = phi(params)?;
    debug_assert_eq!(seed.len() as u128, phi_value);

    let best = max_clique(&graph, &seed, budget.limits(), exec);
    let mut nodes = best.nodes;
    let mut status = if best.complete { SearchStatus::Proven } else { SearchStatus::BudgetExhausted };
    let mut report = EkrReport {
        n,
        r,
        matchings: all.len(),
        max_size: best.size,
        upper_bound: if best.complete { best.size } else { best.upper_bound },
        phi_value,
        witnesses: vec![witness(&all, &best.witness, r)?],
        maximum_families: None,
        all_maximum_are_stars: None,
        equals_star_set: None,
        nodes,
        status,
    };
    if budget.enumerate_all_maximum && status == SearchStatus::Proven {
        let found = cliques_of_size(&graph, best.size, budget.limits(), exec);
        nodes += found.nodes;
        if !found.complete {
            status = SearchStatus::BudgetExhausted;
        } else {
            let witnesses = found
                .cliques
                .iter()
                .map(|c| witness(&all, c, r))
                .collect::<Result<Vec<_>>>()?;
            let all_stars = witnesses.iter().all(|w| w.center.is_some());
            let mut centers: Vec<Edge> = witnesses.iter().filter_map(|w| w.center).collect();
            centers.sort_unstable();
            centers.dedup();
            let edge_total = binomial(2 * n as u64, 2)? as usize;
            let stars_match = all_stars
                && witnesses.len() == edge_total
                && centers.len() == edge_total
                && witnesses.iter().all(|w| w.members.len() as u128 == phi_value);
            report.maximum_families = Some(witnesses.len());
            report.all_maximum_are_stars = Some(all_stars);
            report.equals_star_set = Some(stars_match);
            report.witnesses = witnesses;
        }
    }
    report.nodes = nodes;
    report.status = status;
    Ok(report)
}

/// Size of the largest intersecting family of r-matchings.
pub fn max_intersecting(params: Params, budget: SearchBudget) -> Result<EkrReport> {
    max_intersecting_with(params, budget, Execution::default())
}

/// Bound and uniqueness for `r <= n - 1`, enumerating every maximum family
/// when the budget asks for it.
pub fn verify_theorem(params: Params, budget: SearchBudget) -> Result<EkrReport> {
    max_intersecting(params.require_proper()?, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    pub n: usize,
    pub r: usize,
    pub graph_vertices: usize,
    pub graph_edges: usize,
    pub independent_sets: usize,
    pub matchings: u128,
    /// Independent r-sets of the complement of K(2n,2), read as edge sets,
    /// are exactly the r-matchings.
    pub bijection: bool,
    /// Largest number of independent r-sets through one vertex.
    pub max_vertex_star: usize,
    pub theorem: EkrReport,
    pub strictly_ekr: bool,
}

/// Restates the matching result for independent sets of the complement of
/// the Kneser graph K(2n, 2).
pub fn kneser_complement_bridge(params: Params, budget: SearchBudget) -> Result<BridgeReport> {
    let params = params.require_proper()?;
    let (n, r) = (params.n(), params.r());
    let kneser = KneserGraph::new(2 * n)?;
    let verts = kneser.vertices();
    let k = verts.len();
    // complement: two 2-sets are adjacent iff they meet
    let mut complement = Graph::new(k);
    for a in 0..k {
        for b in a + 1..k {
            if !kneser.adjacent(verts[a], verts[b]) {
                complement.add_edge(a, b);
            }
        }
    }
    let mut sets = Vec::new();
    independent_sets(&complement, r, 0, &mut Vec::new(), &mut sets);
    let as_matchings: Vec<Matching> = sets
        .iter()
        .map(|s| Matching::new(s.iter().map(|&i| verts[i]).collect()))
        .collect::<Result<_>>()?;
    let bijection = as_matchings == enumerate_matchings(params);
    let mut through = vec![0usize; k];
    for s in &sets {
        for &v in s {
            through[v] += 1;
        }
    }
    let theorem = verify_theorem(params, SearchBudget { enumerate_all_maximum: true, ..budget })?;
    let max_vertex_star = through.into_iter().max().unwrap_or(0);
    let strictly_ekr = bijection
        && max_vertex_star as u128 == theorem.phi_value
        && theorem.confirms_theorem()
        && theorem.equals_star_set == Some(true);
    Ok(BridgeReport {
        n,
        r,
        graph_vertices: k,
        graph_edges: complement.edge_count(),
        independent_sets: sets.len(),
        matchings: chi(params)?,
        bijection,
        max_vertex_star,
        theorem,
        strictly_ekr,
    })
}

fn independent_sets(g: &Graph, size: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for v in from..g.len() {
        if cur.iter().all(|&u| !g.adjacent(u, v)) {
            cur.push(v);
            independent_sets(g, size, v + 1, cur, out);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::star_family;

    fn p(n: usize, r: usize) -> Params {
        Params::new(n, r).unwrap()
    }

    fn enumerate() -> SearchBudget {
        SearchBudget { enumerate_all_maximum: true, ..SearchBudget::default() }
    }

    #[test]
    fn trivial_instances() {
        let rep = max_intersecting(p(2, 1), SearchBudget::default()).unwrap();
        assert_eq!((rep.max_size, rep.phi_value, rep.status), (1, 1, SearchStatus::Proven));
        let rep = verify_theorem(p(4, 1), enumerate()).unwrap();
        assert_eq!(rep.max_size, 1);
        assert_eq!(rep.maximum_families, Some(28));
        assert!(rep.confirms_theorem());
    }

    #[test]
    fn k6_two_matchings() {
        let rep = verify_theorem(p(3, 2), enumerate()).unwrap();
        assert_eq!(rep.max_size, 6);
        assert_eq!(rep.maximum_families, Some(15));
        assert_eq!(rep.all_maximum_are_stars, Some(true));
        assert_eq!(rep.equals_star_set, Some(true));
        for w in &rep.witnesses {
            assert!(MatchingFamily::new(2, w.members.clone()).unwrap().is_intersecting());
            let star = star_family(p(3, 2), w.center.unwrap()).unwrap();
            assert_eq!(star.members(), w.members.as_slice());
        }
    }

    #[test]
    fn is_star_cases() {
        let star = star_family(p(3, 2), Edge::new(1, 2).unwrap()).unwrap();
        assert_eq!(is_star(&star).unwrap(), Some(Edge::new(1, 2).unwrap()));
        let f = MatchingFamily::new(
            2,
            [Matching::from_pairs(&[(1, 2), (3, 4)]).unwrap(), Matching::from_pairs(&[(1, 3), (2, 4)]).unwrap()],
        )
        .unwrap();
        assert_eq!(is_star(&f).unwrap(), None);
        assert_eq!(is_star(&MatchingFamily::empty(2)), Err(Error::EmptyFamily));
    }

    #[test]
    fn perfect_matchings_allowed_in_search_but_not_theorem() {
        assert!(verify_theorem(p(3, 3), SearchBudget::default()).is_err());
        let rep = max_intersecting(p(3, 3), SearchBudget::default()).unwrap();
        assert_eq!(rep.status, SearchStatus::Proven);
        assert!(rep.max_size as u128 >= rep.phi_value);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let tiny = SearchBudget { max_nodes: 2, ..SearchBudget::default() };
        let rep = max_intersecting(p(4, 2), tiny).unwrap();
        assert_eq!(rep.status, SearchStatus::BudgetExhausted);
        assert!(rep.max_size as u128 >= rep.phi_value);
        assert!(rep.upper_bound >= rep.max_size);
        assert!(SearchBudget { max_nodes: 0, ..SearchBudget::default() }.validate().is_err());
    }

    #[test]
    fn bridge_k6() {
        let rep = kneser_complement_bridge(p(3, 2), SearchBudget::default()).unwrap();
        assert_eq!(rep.independent_sets, 45);
        assert_eq!(rep.matchings, 45);
        assert!(rep.bijection && rep.strictly_ekr);
        assert_eq!(rep.max_vertex_star, 6);
        let rep = kneser_complement_bridge(p(4, 1), SearchBudget::default()).unwrap();
        assert_eq!((rep.max_vertex_star, rep.theorem.max_size), (1, 1));
        assert!(rep.strictly_ekr);
    }
}
