//! Position swaps on permutations and the exhaustive check that every
//! permutation of a maximum family is saturated and centered at one edge.

use serde::Serialize;

use crate::baranyai::{baranyai_edge, cyclic_order, edges_disjoint, wrap};
use crate::count::phi;
use crate::error::{Error, Result};
use crate::katona::Tracer;
use crate::matching::{star_family, Edge, MatchingFamily, Params};
use crate::par::{self, check_limit, Execution};
use crate::perm::Permutation;

fn half(sigma: &Permutation) -> Result<usize> {
    if sigma.len() < 2 || !sigma.len().is_multiple_of(2) {
        return Err(Error::InvalidPermutation(format!("length {} is not a positive even number", sigma.len())));
    }
    Ok(sigma.len() / 2)
}

fn in_range(j: usize, lo: usize, hi: usize) -> Result<()> {
    if j < lo || j > hi {
        return Err(Error::IndexOutOfRange { index: j, lo, hi });
    }
    Ok(())
}

/// `T_j`: swap positions `j` and `j + 1`, for `1 <= j <= 2n - 1`.
pub fn transpose_adjacent(sigma: &Permutation, j: usize) -> Result<Permutation> {
    let n = half(sigma)?;
    in_range(j, 1, 2 * n - 1)?;
    Ok(sigma.swapped(j, j + 1))
}

/// `R_j`: swap positions `j` and `2n - 1 - j`, for `1 <= j <= n - 1`.
pub fn reflect_swap(sigma: &Permutation, j: usize) -> Result<Permutation> {
    let n = half(sigma)?;
    in_range(j, 1, n.saturating_sub(1))?;
    Ok(sigma.swapped(j, 2 * n - 1 - j))
}

/// For `n + 1 <= j <= 2n - 3` and `j' = 2n - 2 - j`, checks
/// `T_j(sigma) = R_j'(R_{j'+1}(T_j'(R_j'(R_{j'+1}(sigma)))))`.
pub fn composition_identity(sigma: &Permutation, j: usize) -> Result<bool> {
    let n = half(sigma)?;
    if n < 4 {
        return Err(Error::InvalidParameters(format!("n = {n} leaves no j in n+1..=2n-3")));
    }
    in_range(j, n + 1, 2 * n - 3)?;
    let jp = 2 * n - 2 - j;
    let mut mu = reflect_swap(sigma, jp + 1)?;
    mu = reflect_swap(&mu, jp)?;
    mu = transpose_adjacent(&mu, jp)?;
    mu = reflect_swap(&mu, jp + 1)?;
    mu = reflect_swap(&mu, jp)?;
    Ok(mu == transpose_adjacent(sigma, j)?)
}

/// Does `R_j` leave every edge `e^k(2n-1)` of the last part unchanged?
pub fn last_part_preserved(sigma: &Permutation, j: usize) -> Result<bool> {
    let n = half(sigma)?;
    let mu = reflect_swap(sigma, j)?;
    for k in 0..n {
        if baranyai_edge(&mu, 2 * n - 1, k)? != baranyai_edge(sigma, 2 * n - 1, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Failure counts for the swap identities over a set of permutations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LemmaTally {
    pub permutations: u64,
    pub involution_failures: u64,
    pub middle_swap_failures: u64,
    pub last_part_failures: u64,
    pub composition_failures: u64,
    pub composition_checks: u64,
}

impl LemmaTally {
    pub fn passed(&self) -> bool {
        self.involution_failures == 0
            && self.middle_swap_failures == 0
            && self.last_part_failures == 0
            && self.composition_failures == 0
    }

    fn merge(mut self, o: Self) -> Self {
        self.permutations += o.permutations;
        self.involution_failures += o.involution_failures;
        self.middle_swap_failures += o.middle_swap_failures;
        self.last_part_failures += o.last_part_failures;
        self.composition_failures += o.composition_failures;
        self.composition_checks += o.composition_checks;
        self
    }
}

/// Checks every swap identity on one permutation of `[2n]`, `n >= 2`.
pub fn lemma_tally(sigma: &Permutation) -> Result<LemmaTally> {
    let n = half(sigma)?;
    if n < 2 {
        return Err(Error::InvalidParameters("need n >= 2".into()));
    }
    let mut t = LemmaTally { permutations: 1, ..LemmaTally::default() };
    for j in 1..2 * n {
        t.involution_failures += (transpose_adjacent(&transpose_adjacent(sigma, j)?, j)? != *sigma) as u64;
    }
    for j in 1..n {
        t.involution_failures += (reflect_swap(&reflect_swap(sigma, j)?, j)? != *sigma) as u64;
        t.last_part_failures += !last_part_preserved(sigma, j)? as u64;
    }
    t.middle_swap_failures += (transpose_adjacent(sigma, n - 1)? != reflect_swap(sigma, n - 1)?) as u64;
    if n >= 4 {
        for j in n + 1..=2 * n - 3 {
            t.composition_checks += 1;
            t.composition_failures += !composition_identity(sigma, j)? as u64;
        }
    }
    Ok(t)
}

/// [`lemma_tally`] summed over all of `S_2n`.
pub fn lemma_tally_exhaustive(n: usize, limit: usize, exec: Execution) -> Result<LemmaTally> {
    check_limit(2 * n, limit)?;
    if n < 2 {
        return Err(Error::InvalidParameters("need n >= 2".into()));
    }
    par::sweep(
        2 * n,
        exec,
        LemmaTally::default,
        |acc, _, sigma| acc.merge(lemma_tally(sigma).expect("n >= 2")),
        LemmaTally::merge,
    )
}

/// [`lemma_tally`] summed over the given permutations.
pub fn lemma_tally_over(sigmas: &[Permutation]) -> Result<LemmaTally> {
    sigmas.iter().try_fold(LemmaTally::default(), |acc, s| Ok(acc.merge(lemma_tally(s)?)))
}

/// Builds a permutation whose last part ends with the given edges.
///
/// `edges` is `(e_r, ..., e_0)`, pairwise disjoint, with `r <= n - 2`. The
/// result satisfies `e^k(2n-1) = e_k` for `0 <= k <= r`; the unused
/// positions receive the unused vertices in increasing order.
pub fn construct_interval_permutation(edges: &[Edge], params: Params) -> Result<Permutation> {
    let n = params.n();
    let r = params.r();
    if n < 2 || r + 2 > n {
        return Err(Error::InvalidParameters(format!("need r <= n - 2, got n = {n}, r = {r}")));
    }
    if edges.len() != r + 1 {
        return Err(Error::InvalidParameters(format!("expected {} edges, got {}", r + 1, edges.len())));
    }
    for e in edges {
        e.check_in(n)?;
    }
    if !edges_disjoint(edges) {
        return Err(Error::NotAMatching(format!("{edges:?}")));
    }
    let m = 2 * n;
    let mut images = vec![0usize; m + 1];
    let mut used = vec![false; m + 1];
    let mut place = |pos: usize, v: u8, images: &mut Vec<usize>| {
        images[pos] = v as usize;
        used[v as usize] = true;
    };
    for (k, e) in edges.iter().rev().enumerate() {
        if k == 0 {
            place(m - 1, e.u(), &mut images);
            place(m, e.v(), &mut images);
        } else {
            place(k, e.u(), &mut images);
            place(m - 1 - k, e.v(), &mut images);
        }
    }
    let mut spare = (1..=m).filter(|&v| !used[v]);
    for slot in images.iter_mut().skip(1) {
        if *slot == 0 {
            *slot = spare.next().expect("counts agree");
        }
    }
    Permutation::from_images(images[1..].to_vec())
}

/// For `pi` saturated with respect to `family` and centered at `e_0`, the
/// permutation built from the (r+1)-interval ending at `e_0`; it should be
/// centered at `{sigma(2n-1), sigma(2n)}`. `None` when `pi` is not saturated.
pub fn recenter_at_last_part(family: &MatchingFamily, pi: &Permutation, params: Params) -> Result<Option<Permutation>> {
    let t = Tracer::new(family).trace(pi)?;
    let Some(center) = t.center else {
        return Ok(None);
    };
    let psi = cyclic_order(pi)?;
    let pos = psi.sequence.iter().position(|&e| e == center).expect("every edge occurs") + 1;
    let r = params.r();
    let edges: Vec<Edge> = (0..=r).map(|k| psi.at(wrap((pos + psi.len() - r + k) as i64, psi.len()))).collect();
    construct_interval_permutation(&edges, params).map(Some)
}

/// Centers of all permutations, indexed by lexicographic rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterMap {
    m: usize,
    entries: Vec<Option<Edge>>,
}

impl CenterMap {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn center_of(&self, sigma: &Permutation) -> Option<Edge> {
        debug_assert_eq!(sigma.len(), self.m);
        self.entries[sigma.rank() as usize]
    }

    /// Some(e) iff every permutation is saturated and centered at `e`.
    pub fn constant(&self) -> Option<Edge> {
        let first = (*self.entries.first()?)?;
        self.entries.iter().all(|&c| c == Some(first)).then_some(first)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterMapReport {
    pub n: usize,
    pub r: usize,
    pub permutations: u64,
    pub saturated: u64,
    pub first_unsaturated: Option<Permutation>,
    /// First permutation (lexicographically) whose center differs from that
    /// of the identity.
    pub first_mismatch: Option<Permutation>,
    pub constant_center: Option<Edge>,
    pub equals_star: Option<bool>,
    pub contradictions: u64,
    pub passed: bool,
}

#[derive(Default)]
struct Acc {
    entries: Vec<Option<Edge>>,
    saturated: u64,
    contradictions: u64,
    first_unsaturated: Option<u64>,
}

pub fn center_map_with(
    family: &MatchingFamily,
    params: Params,
    limit: usize,
    exec: Execution,
) -> Result<(CenterMap, CenterMapReport)> {
    let params = params.require_proper()?;
    let (n, r) = (params.n(), params.r());
    check_limit(2 * n, limit)?;
    if family.r() != r || family.len() as u128 != phi(params)? {
        return Err(Error::InvalidParameters(format!(
            "family must have {} members of size {r}",
            phi(params)?
        )));
    }
    let tracer = Tracer::new(family);
    if !tracer.family_is_intersecting() {
        return Err(Error::InvalidParameters("family is not intersecting".into()));
    }
    let acc = par::sweep(
        2 * n,
        exec,
        Acc::default,
        |mut acc, rank, sigma| {
            let t = tracer.trace(sigma).expect("validated parameters");
            acc.contradictions += t.contradiction as u64;
            if t.is_saturated(r) {
                acc.saturated += 1;
            } else if acc.first_unsaturated.is_none() {
                acc.first_unsaturated = Some(rank);
            }
            acc.entries.push(t.center);
            acc
        },
        |mut a, b| {
            a.entries.extend(b.entries);
            a.saturated += b.saturated;
            a.contradictions += b.contradictions;
            a.first_unsaturated = a.first_unsaturated.or(b.first_unsaturated);
            a
        },
    )?;
    let m = 2 * n;
    let map = CenterMap { m, entries: acc.entries };
    let reference = map.entries[0];
    let first_mismatch = map
        .entries
        .iter()
        .position(|&c| c != reference)
        .map(|k| Permutation::unrank(m, k as u64))
        .transpose()?;
    let first_unsaturated = acc.first_unsaturated.map(|k| Permutation::unrank(m, k)).transpose()?;
    let constant_center = map.constant();
    let equals_star = constant_center
        .map(|e| star_family(params, e).map(|s| &s == family))
        .transpose()?;
    let report = CenterMapReport {
        n,
        r,
        permutations: map.len() as u64,
        saturated: acc.saturated,
        first_unsaturated,
        first_mismatch,
        constant_center,
        equals_star,
        contradictions: acc.contradictions,
        passed: constant_center.is_some() && equals_star == Some(true) && acc.contradictions == 0,
    };
    Ok((map, report))
}

/// Exhaustive saturation and center-constancy check for a maximum family.
pub fn center_map(family: &MatchingFamily, params: Params, limit: usize) -> Result<(CenterMap, CenterMapReport)> {
    center_map_with(family, params, limit, Execution::default())
}

/// Number of pairs `(sigma, j)` where `T_j(sigma)` has a different center
/// from `sigma`. Zero is the expected outcome for a maximum family.
pub fn adjacent_center_mismatches(map: &CenterMap, exec: Execution) -> Result<u64> {
    let m = map.m;
    par::sweep(
        m,
        exec,
        || 0u64,
        |bad, rank, sigma| {
            let here = map.entries[rank as usize];
            bad + (1..m).filter(|&j| map.center_of(&sigma.swapped(j, j + 1)) != here).count() as u64
        },
        |a, b| a + b,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::DEFAULT_PERM_LIMIT;
    use crate::perm::all_permutations;

    fn p(n: usize, r: usize) -> Params {
        Params::new(n, r).unwrap()
    }

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn swap_examples() {
        let id4 = Permutation::identity(4);
        assert_eq!(transpose_adjacent(&id4, 1).unwrap().images(), &[2, 1, 3, 4]);
        let id8 = Permutation::identity(8);
        assert_eq!(reflect_swap(&id8, 1).unwrap().images(), &[6, 2, 3, 4, 5, 1, 7, 8]);
        assert!(transpose_adjacent(&id4, 4).is_err());
        assert!(transpose_adjacent(&id4, 0).is_err());
        assert!(reflect_swap(&id8, 4).is_err());
    }

    #[test]
    fn involutions_and_middle_swap() {
        for sigma in all_permutations(6) {
            for j in 1..=5 {
                assert_eq!(transpose_adjacent(&transpose_adjacent(&sigma, j).unwrap(), j).unwrap(), sigma);
            }
            for j in 1..=2 {
                assert_eq!(reflect_swap(&reflect_swap(&sigma, j).unwrap(), j).unwrap(), sigma);
                assert!(last_part_preserved(&sigma, j).unwrap());
            }
            assert_eq!(transpose_adjacent(&sigma, 2).unwrap(), reflect_swap(&sigma, 2).unwrap());
        }
    }

    #[test]
    fn lemma_tally_sweep_k8() {
        let t = lemma_tally_exhaustive(4, DEFAULT_PERM_LIMIT, Execution::default()).unwrap();
        assert_eq!(t.permutations, 40320);
        assert_eq!(t.composition_checks, 40320);
        assert!(t.passed());
        let seq = lemma_tally_exhaustive(4, DEFAULT_PERM_LIMIT, Execution::Sequential).unwrap();
        assert_eq!(t, seq);
    }

    #[test]
    fn composition_identity_small() {
        for sigma in all_permutations(8).step_by(13) {
            assert!(composition_identity(&sigma, 5).unwrap());
        }
        let id10 = Permutation::identity(10);
        assert!(composition_identity(&id10, 6).unwrap());
        assert!(composition_identity(&id10, 7).unwrap());
        assert!(composition_identity(&id10, 5).is_err());
        assert!(composition_identity(&id10, 8).is_err());
        assert!(composition_identity(&Permutation::identity(6), 4).is_err());
    }

    #[test]
    fn interval_permutation_example() {
        let edges = [e(3, 6), e(2, 7), e(1, 8)];
        let sigma = construct_interval_permutation(&edges, p(4, 2)).unwrap();
        assert_eq!(sigma.images(), &[2, 3, 4, 5, 6, 7, 1, 8]);
        assert_eq!(baranyai_edge(&sigma, 7, 0).unwrap(), e(1, 8));
        assert_eq!(baranyai_edge(&sigma, 7, 1).unwrap(), e(2, 7));
        assert_eq!(baranyai_edge(&sigma, 7, 2).unwrap(), e(3, 6));
        let psi = cyclic_order(&sigma).unwrap();
        assert_eq!(psi.interval(psi.len() - 2, 3).unwrap().edges, edges.to_vec());
    }

    #[test]
    fn interval_permutation_rejects_bad_input() {
        assert!(construct_interval_permutation(&[e(1, 2), e(2, 3), e(4, 5)], p(4, 2)).is_err());
        assert!(construct_interval_permutation(&[e(1, 2), e(3, 4)], p(4, 2)).is_err());
        assert!(construct_interval_permutation(&[e(1, 2), e(3, 4), e(5, 6), e(7, 8)], p(4, 3)).is_err());
    }

    #[test]
    fn center_map_k6() {
        let star = star_family(p(3, 2), e(5, 6)).unwrap();
        let (map, report) = center_map(&star, p(3, 2), DEFAULT_PERM_LIMIT).unwrap();
        assert_eq!(report.permutations, 720);
        assert_eq!(report.saturated, 720);
        assert_eq!(report.constant_center, Some(e(5, 6)));
        assert!(report.passed);
        assert_eq!(adjacent_center_mismatches(&map, Execution::default()).unwrap(), 0);
    }

    #[test]
    fn center_map_rejects_small_family() {
        let star = star_family(p(3, 2), e(5, 6)).unwrap();
        let sub = MatchingFamily::new(2, star.members()[..3].to_vec()).unwrap();
        assert!(center_map(&sub, p(3, 2), DEFAULT_PERM_LIMIT).is_err());
        assert!(center_map(&star, p(3, 2), 5).is_err());
    }

    #[test]
    fn recentering_lands_on_last_part() {
        let params = p(4, 2);
        let star = star_family(params, e(2, 5)).unwrap();
        for pi in all_permutations(8).step_by(331) {
            let sigma = recenter_at_last_part(&star, &pi, params).unwrap().unwrap();
            let t = Tracer::new(&star).trace(&sigma).unwrap();
            assert_eq!(t.center, Some(Edge::new(sigma.at(7) as usize, sigma.at(8) as usize).unwrap()));
        }
    }
}
