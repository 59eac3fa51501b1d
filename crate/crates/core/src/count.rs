//! Exact counting formulas. Everything is `u128` with checked arithmetic.

use crate::error::{Error, Result};
use crate::matching::Params;

pub fn factorial(k: u64) -> Result<u128> {
    (1..=k as u128).try_fold(1u128, |acc, x| acc.checked_mul(x).ok_or(Error::Overflow("factorial")))
}

pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc
            .checked_mul(n as u128 - i)
            .ok_or(Error::Overflow("binomial"))?
            / (i + 1);
    }
    Ok(acc)
}

/// Product of C(2n - 2k, 2) for k in `from..r`.
fn pair_product(params: Params, from: usize) -> Result<u128> {
    let two_n = 2 * params.n() as u64;
    (from..params.r()).try_fold(1u128, |acc, k| {
        let b = binomial(two_n - 2 * k as u64, 2)?;
        acc.checked_mul(b).ok_or(Error::Overflow("pair product"))
    })
}

/// Number of r-matchings of K_{2n}.
pub fn chi(params: Params) -> Result<u128> {
    Ok(pair_product(params, 0)? / factorial(params.r() as u64)?)
}

/// Number of r-matchings of K_{2n} that contain a fixed edge.
pub fn phi(params: Params) -> Result<u128> {
    Ok(pair_product(params, 1)? / factorial(params.r() as u64 - 1)?)
}

/// Number of edges of K_{2n}, i.e. the length of every cyclic order.
pub fn edge_count(n: usize) -> usize {
    n * (2 * n - 1)
}
