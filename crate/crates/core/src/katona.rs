//! Compatibility of matchings with cyclic orders, trace families and the
//! double count behind the intersecting-family bound.

use serde::Serialize;

use crate::baranyai::{edge_position, CyclicOrder};
use crate::count::{edge_count, factorial, phi};
use crate::error::{Error, Result};
use crate::matching::{Edge, Matching, MatchingFamily, Params};
use crate::par::{self, check_limit, Execution};
use crate::perm::Permutation;

fn check_matching_size(a: &Matching, n: usize) -> Result<()> {
    if a.is_empty() || a.len() >= n {
        return Err(Error::InvalidParameters(format!(
            "matching size {} must lie in 1..={}",
            a.len(),
            n.saturating_sub(1)
        )));
    }
    for e in a.edges() {
        e.check_in(n)?;
    }
    Ok(())
}

/// Start of the cyclic block formed by `positions`, if they are consecutive.
/// `positions` must be distinct and fewer than `len`.
fn consecutive_start(positions: &mut [usize], len: usize) -> Option<usize> {
    positions.sort_unstable();
    let r = positions.len();
    let mut start = None;
    for k in 0..r {
        let next = if k + 1 < r { positions[k + 1] } else { positions[0] + len };
        if next - positions[k] != 1 {
            if start.is_some() {
                return None;
            }
            start = Some(positions[(k + 1) % r]);
        }
    }
    start
}

/// Position of `a` among the intervals of the cyclic order with inverse `inv`.
#[inline]
fn interval_start(n: usize, inv: &[usize], a: &Matching, scratch: &mut Vec<usize>) -> Option<usize> {
    scratch.clear();
    scratch.extend(a.edges().iter().map(|&e| edge_position(n, inv, e)));
    consecutive_start(scratch, edge_count(n))
}

/// The start of the interval of the cyclic order of `sigma` equal to `a`, if
/// any. For `|a| <= n - 1` such an interval is unique when it exists.
pub fn is_compatible(a: &Matching, sigma: &Permutation) -> Result<Option<usize>> {
    let n = sigma.len() / 2;
    check_matching_size(a, n)?;
    if sigma.len() != 2 * n {
        return Err(Error::InvalidPermutation("odd length".into()));
    }
    Ok(interval_start(n, &sigma.inverse(), a, &mut Vec::new()))
}

/// Every start position whose `|a|`-interval equals `a` as a set, by direct scan.
pub fn compatible_positions(a: &Matching, psi: &CyclicOrder) -> Vec<usize> {
    let r = a.len();
    (1..=psi.len())
        .filter(|&s| {
            let mut edges: Vec<Edge> = (0..r).map(|k| psi.at(s + k)).collect();
            edges.sort_unstable();
            edges == a.edges()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceResult {
    pub members: Vec<Matching>,
    pub size: usize,
    pub center: Option<Edge>,
    /// Set when an intersecting family exceeds `r` compatible members, or
    /// reaches `r` without a common edge.
    pub contradiction: bool,
}

impl TraceResult {
    pub fn is_saturated(&self, r: usize) -> bool {
        self.size == r
    }
}

/// A family prepared for repeated traces against many permutations.
#[derive(Debug, Clone)]
pub struct Tracer<'a> {
    family: &'a MatchingFamily,
    intersecting: bool,
}

impl<'a> Tracer<'a> {
    pub fn new(family: &'a MatchingFamily) -> Self {
        Self { family, intersecting: family.is_intersecting() }
    }

    pub fn family_is_intersecting(&self) -> bool {
        self.intersecting
    }

    /// Number of members compatible with the permutation whose inverse is `inv`.
    pub fn count(&self, n: usize, inv: &[usize], scratch: &mut Vec<usize>) -> usize {
        self.family
            .members()
            .iter()
            .filter(|a| interval_start(n, inv, a, scratch).is_some())
            .count()
    }

    pub fn trace(&self, sigma: &Permutation) -> Result<TraceResult> {
        let n = sigma.len() / 2;
        let r = self.family.r();
        if self.family.is_empty() {
            return Ok(TraceResult { members: vec![], size: 0, center: None, contradiction: false });
        }
        if !sigma.len().is_multiple_of(2) || r >= n {
            return Err(Error::InvalidParameters(format!("family size r = {r} needs r <= n - 1 for 2n = {}", sigma.len())));
        }
        let inv = sigma.inverse();
        let mut scratch = Vec::with_capacity(r);
        let members: Vec<Matching> = self
            .family
            .members()
            .iter()
            .filter(|a| interval_start(n, &inv, a, &mut scratch).is_some())
            .cloned()
            .collect();
        Ok(self.classify(members))
    }

    fn classify(&self, members: Vec<Matching>) -> TraceResult {
        let r = self.family.r();
        let size = members.len();
        let mut center = None;
        let mut contradiction = false;
        if self.intersecting {
            if size > r {
                contradiction = true;
            } else if size == r {
                let sub = MatchingFamily::new(r, members.iter().cloned()).expect("uniform");
                match sub.common_edges().as_slice() {
                    [e] => center = Some(*e),
                    _ => contradiction = true,
                }
            }
        }
        TraceResult { members, size, center, contradiction }
    }
}

/// The members of `family` compatible with `sigma`.
pub fn trace(family: &MatchingFamily, sigma: &Permutation) -> Result<TraceResult> {
    Tracer::new(family).trace(sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompatibilityCount {
    pub formula_value: u128,
    pub oracle_value: Option<u128>,
    /// `(q1, q2)`: permutations whose root is outside / inside the matching's support.
    pub split: Option<(u128, u128)>,
}

/// Closed form for the number of permutations compatible with any fixed r-matching.
pub fn q_formula(params: Params) -> Result<CompatibilityCount> {
    let params = params.require_proper()?;
    let (n, r) = (params.n() as u128, params.r() as u128);
    let per_position = factorial(r as u64)?
        .checked_mul(1u128 << r)
        .and_then(|x| x.checked_mul(factorial((2 * n - 2 * r) as u64).ok()?))
        .ok_or(Error::Overflow("q formula"))?;
    let parts = 2 * n - 1;
    let q1 = (n - r) * parts * per_position;
    let q2 = r * parts * per_position;
    Ok(CompatibilityCount { formula_value: q1 + q2, oracle_value: None, split: Some((q1, q2)) })
}

/// Exhaustive count of compatible permutations, split by whether the root
/// lies in the matching's support.
pub fn q_bruteforce_with(a: &Matching, params: Params, limit: usize, exec: Execution) -> Result<CompatibilityCount> {
    let params = params.require_proper()?;
    let n = params.n();
    check_matching_size(a, n)?;
    if a.len() != params.r() {
        return Err(Error::InvalidParameters(format!("matching has size {}, expected {}", a.len(), params.r())));
    }
    check_limit(2 * n, limit)?;
    let support = a.support();
    let (q1, q2) = par::sweep(
        2 * n,
        exec,
        || (0u128, 0u128, Vec::with_capacity(n)),
        |(q1, q2, mut scratch), _, sigma| {
            let inv = sigma.inverse();
            if interval_start(n, &inv, a, &mut scratch).is_some() {
                if support.binary_search(&sigma.at(2 * n)).is_ok() {
                    return (q1, q2 + 1, scratch);
                }
                return (q1 + 1, q2, scratch);
            }
            (q1, q2, scratch)
        },
        |x, y| (x.0 + y.0, x.1 + y.1, x.2),
    )
    .map(|(q1, q2, _)| (q1, q2))?;
    Ok(CompatibilityCount { formula_value: q_formula(params)?.formula_value, oracle_value: Some(q1 + q2), split: Some((q1, q2)) })
}

/// Number of permutations of `[2n]` with which `a` is compatible.
pub fn q_bruteforce(a: &Matching, params: Params, limit: usize) -> Result<u128> {
    Ok(q_bruteforce_with(a, params, limit, Execution::default())?.oracle_value.unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCountReport {
    pub n: usize,
    pub r: usize,
    pub family_size: usize,
    pub q_a: u128,
    /// `q_A * |family|`
    pub lhs: u128,
    /// `r * (2n)!`
    pub rhs: u128,
    pub phi: u128,
    pub holds: bool,
    pub tight: bool,
    /// Exhaustive part, present when 2n is within the permutation limit.
    pub trace_sum: Option<u128>,
    pub max_trace: Option<usize>,
    pub saturated_permutations: Option<u64>,
    pub sums_agree: Option<bool>,
}

impl DoubleCountReport {
    pub fn passed(&self) -> bool {
        self.holds && self.sums_agree.unwrap_or(true) && self.max_trace.is_none_or(|m| m <= self.r)
    }
}

/// Compares `q_A |family|` with `r (2n)!` and, when `2n <= limit`, checks
/// that the traces over all permutations sum to `q_A |family|` with every
/// trace of size at most `r`.
pub fn verify_double_count_with(
    family: &MatchingFamily,
    params: Params,
    limit: usize,
    exec: Execution,
) -> Result<DoubleCountReport> {
    let params = params.require_proper()?;
    let (n, r) = (params.n(), params.r());
    if family.r() != r {
        return Err(Error::InvalidParameters(format!("family has r = {}, expected {r}", family.r())));
    }
    let tracer = Tracer::new(family);
    if !tracer.family_is_intersecting() {
        return Err(Error::InvalidParameters("family is not intersecting".into()));
    }
    let q_a = q_formula(params)?.formula_value;
    let lhs = q_a * family.len() as u128;
    let rhs = r as u128 * factorial(2 * n as u64)?;
    let mut report = DoubleCountReport {
        n,
        r,
        family_size: family.len(),
        q_a,
        lhs,
        rhs,
        phi: phi(params)?,
        holds: lhs <= rhs,
        tight: lhs == rhs,
        trace_sum: None,
        max_trace: None,
        saturated_permutations: None,
        sums_agree: None,
    };
    if 2 * n <= limit {
        let (sum, max, saturated) = par::sweep(
            2 * n,
            exec,
            || (0u128, 0usize, 0u64, Vec::new()),
            |(sum, max, sat, mut scratch), _, sigma| {
                let k = tracer.count(n, &sigma.inverse(), &mut scratch);
                (sum + k as u128, max.max(k), sat + (k == r) as u64, scratch)
            },
            |a, b| (a.0 + b.0, a.1.max(b.1), a.2 + b.2, a.3),
        )
        .map(|(s, m, k, _)| (s, m, k))?;
        report.trace_sum = Some(sum);
        report.max_trace = Some(max);
        report.saturated_permutations = Some(saturated);
        report.sums_agree = Some(sum == lhs);
    }
    Ok(report)
}

pub fn verify_double_count(family: &MatchingFamily, params: Params, limit: usize) -> Result<DoubleCountReport> {
    verify_double_count_with(family, params, limit, Execution::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baranyai::cyclic_order;
    use crate::matching::{enumerate_matchings, star_family};
    use crate::par::DEFAULT_PERM_LIMIT;
    use crate::perm::all_permutations;

    fn p(n: usize, r: usize) -> Params {
        Params::new(n, r).unwrap()
    }

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn consecutive_blocks() {
        assert_eq!(consecutive_start(&mut [3, 4, 5], 10), Some(3));
        assert_eq!(consecutive_start(&mut [10, 1, 2], 10), Some(10));
        assert_eq!(consecutive_start(&mut [9, 10], 10), Some(9));
        assert_eq!(consecutive_start(&mut [1, 3], 10), None);
        assert_eq!(consecutive_start(&mut [7], 10), Some(7));
    }

    #[test]
    fn every_edge_compatible_when_r_is_one() {
        for sigma in all_permutations(4) {
            for a in enumerate_matchings(p(2, 1)) {
                assert!(is_compatible(&a, &sigma).unwrap().is_some());
            }
        }
    }

    #[test]
    fn first_interval_of_identity() {
        let id = Permutation::identity(6);
        let psi = cyclic_order(&id).unwrap();
        let a = psi.interval(1, 2).unwrap().to_matching().unwrap();
        assert_eq!(a, Matching::from_pairs(&[(3, 4), (2, 5)]).unwrap());
        assert_eq!(is_compatible(&a, &id).unwrap(), Some(1));
        let wrapped = psi.interval(15, 2).unwrap().to_matching().unwrap();
        assert_eq!(is_compatible(&wrapped, &id).unwrap(), Some(15));
    }

    #[test]
    fn compatibility_agrees_with_scan() {
        for n in 2..=4 {
            for r in 1..n {
                let all = enumerate_matchings(p(n, r));
                for sigma in all_permutations(2 * n).step_by(97) {
                    let psi = cyclic_order(&sigma).unwrap();
                    let mut compatible = 0;
                    for a in &all {
                        let scan = compatible_positions(a, &psi);
                        assert!(scan.len() <= 1);
                        assert_eq!(is_compatible(a, &sigma).unwrap(), scan.first().copied());
                        compatible += scan.len();
                    }
                    assert_eq!(compatible, edge_count(n));
                }
            }
        }
    }

    #[test]
    fn compatibility_rejects_bad_size() {
        let a = Matching::from_pairs(&[(1, 2), (3, 4)]).unwrap();
        assert!(is_compatible(&a, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn trace_of_star_on_identity() {
        let star = star_family(p(4, 2), e(7, 8)).unwrap();
        let t = trace(&star, &Permutation::identity(8)).unwrap();
        assert_eq!(t.size, 2);
        assert_eq!(t.center, Some(e(7, 8)));
        assert!(!t.contradiction);
    }

    #[test]
    fn trace_of_empty_and_full_families() {
        let t = trace(&MatchingFamily::empty(2), &Permutation::identity(6)).unwrap();
        assert_eq!((t.size, t.center), (0, None));
        let all = MatchingFamily::new(2, enumerate_matchings(p(3, 2))).unwrap();
        let t = trace(&all, &Permutation::identity(6)).unwrap();
        assert_eq!(t.size, 15);
        assert_eq!(t.center, None);
        assert!(!t.contradiction);
    }

    #[test]
    fn q_formula_values() {
        let q = q_formula(p(2, 1)).unwrap();
        assert_eq!(q.formula_value, 24);
        assert_eq!(q.formula_value, factorial(4).unwrap());
        assert_eq!(q_formula(p(3, 2)).unwrap().formula_value, 240);
        assert!(q_formula(p(3, 3)).is_err());
        for (n, r) in [(2, 1), (3, 1), (3, 2)] {
            let q = q_formula(p(n, r)).unwrap();
            let (q1, q2) = q.split.unwrap();
            assert_eq!(q1 + q2, q.formula_value);
            let lhs = crate::count::chi(p(n, r)).unwrap() * q.formula_value;
            assert_eq!(lhs, factorial(2 * n as u64).unwrap() * edge_count(n) as u128);
        }
    }

    #[test]
    fn q_oracle_small() {
        let a = Matching::from_pairs(&[(1, 2)]).unwrap();
        assert_eq!(q_bruteforce(&a, p(2, 1), DEFAULT_PERM_LIMIT).unwrap(), 24);
        for a in enumerate_matchings(p(3, 2)).iter().step_by(5) {
            let q = q_bruteforce_with(a, p(3, 2), DEFAULT_PERM_LIMIT, Execution::Sequential).unwrap();
            assert_eq!(q.oracle_value, Some(240));
            assert_eq!(q.split, q_formula(p(3, 2)).unwrap().split);
        }
        assert!(matches!(
            q_bruteforce(&a, p(2, 1), 3),
            Err(Error::LimitExceeded { size: 4, limit: 3 })
        ));
    }

    #[test]
    fn double_count_star_is_tight() {
        let star = star_family(p(3, 2), e(1, 2)).unwrap();
        let report = verify_double_count(&star, p(3, 2), DEFAULT_PERM_LIMIT).unwrap();
        assert_eq!((report.lhs, report.rhs), (1440, 1440));
        assert!(report.tight && report.passed());
        assert_eq!(report.saturated_permutations, Some(720));
        assert_eq!(report.trace_sum, Some(1440));
    }

    #[test]
    fn double_count_single_matching() {
        let f = MatchingFamily::new(2, [Matching::from_pairs(&[(1, 2), (3, 4)]).unwrap()]).unwrap();
        let report = verify_double_count(&f, p(3, 2), DEFAULT_PERM_LIMIT).unwrap();
        assert_eq!((report.lhs, report.rhs), (240, 1440));
        assert!(report.holds && !report.tight && report.passed());
    }

    #[test]
    fn double_count_rejects_non_intersecting() {
        let f = MatchingFamily::new(1, [Matching::from_pairs(&[(1, 2)]).unwrap(), Matching::from_pairs(&[(3, 4)]).unwrap()]).unwrap();
        assert!(verify_double_count(&f, p(3, 1), DEFAULT_PERM_LIMIT).is_err());
    }
}
