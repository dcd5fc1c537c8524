//! Exhaustive enumerators for small sizes. Each one lists every object of the
//! given size and tests connectivity or irreducibility directly, so the counts
//! are independent of the generating-function machinery.

mod perm;
mod union_find;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

pub use perm::{all_permutations, closed_prefix_mask, next_permutation, perfect_matchings};
pub use union_find::UnionFind;

/// Default cap on the number of enumerated objects.
pub const BUDGET: u128 = 100_000_000;
/// Cap for perfect matchings of `[2k]`.
pub const MATCHING_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} at size {size} needs {required} objects, over the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        size: usize,
        required: String,
        budget: u128,
    },
    #[error("combinatorial maps need an even number of darts, got {0}")]
    OddDarts(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumResult {
    pub n: usize,
    #[serde(serialize_with = "big_string")]
    pub total: BigInt,
    #[serde(serialize_with = "big_string")]
    pub connected_or_irreducible: BigInt,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn big_string<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn finish(n: usize, total: u64, good: u64, start: Instant) -> EnumResult {
    debug_assert!(good <= total);
    EnumResult {
        n,
        total: BigInt::from(total),
        connected_or_irreducible: BigInt::from(good),
        elapsed: start.elapsed(),
    }
}

/// `base^exp` saturating at `u128::MAX`.
fn sat_pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

fn sat_fact(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

fn check_budget(what: &'static str, size: usize, required: u128, budget: u128) -> Result<(), OracleError> {
    if required > budget {
        return Err(OracleError::BudgetExceeded {
            what,
            size,
            required: if required == u128::MAX {
                "more than 2^128".into()
            } else {
                required.to_string()
            },
            budget,
        });
    }
    Ok(())
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Advances a mixed-radix counter with digits in `0..=max`; `false` on wrap-around.
fn bump(digits: &mut [u8], max: u8) -> bool {
    for d in digits.iter_mut() {
        if *d < max {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// `d`-multigraphs on `n` vertices: every multiplicity assignment, connected by union-find.
pub fn count_connected_graphs(n: usize, d: u32) -> Result<EnumResult, OracleError> {
    if d == 0 || d > 255 {
        return Err(OracleError::InvalidArgument("edge multiplicity must be in 1..=255"));
    }
    let edges = pairs(n);
    check_budget("multigraphs", n, sat_pow(u128::from(d) + 1, edges.len()), BUDGET)?;
    let start = Instant::now();
    let mut digits = vec![0u8; edges.len()];
    let (mut total, mut good) = (0u64, 0u64);
    loop {
        total += 1;
        let mut uf = UnionFind::new(n);
        for (&(a, b), &m) in edges.iter().zip(&digits) {
            if m > 0 {
                uf.union(a, b);
            }
        }
        if uf.is_connected() {
            good += 1;
        }
        if !bump(&mut digits, d as u8) {
            break;
        }
    }
    Ok(finish(n, total, good, start))
}

/// `d`-multitournaments on `k` vertices. The digit of pair `i < j` is the number
/// of edges `i → j`; reducibility is tested over every proper nonempty subset.
pub fn count_irreducible_tournaments(k: usize, d: u32) -> Result<EnumResult, OracleError> {
    if d == 0 || d > 255 {
        return Err(OracleError::InvalidArgument("edge multiplicity must be in 1..=255"));
    }
    if k > 20 {
        return Err(OracleError::InvalidArgument("too many vertices"));
    }
    let edges = pairs(k);
    let required = sat_pow(u128::from(d) + 1, edges.len()).saturating_mul(1u128 << k);
    check_budget("multitournaments", k, required, BUDGET)?;
    let start = Instant::now();
    let full = d as u8;
    let mut digits = vec![0u8; edges.len()];
    let (mut total, mut good) = (0u64, 0u64);
    loop {
        total += 1;
        let reducible = (1u32..(1u32 << k) - 1).any(|a_set| {
            edges.iter().zip(&digits).all(|(&(i, j), &s)| {
                let (ia, ja) = (a_set >> i & 1 == 1, a_set >> j & 1 == 1);
                match (ia, ja) {
                    (true, false) => s == full,
                    (false, true) => s == 0,
                    _ => true,
                }
            })
        });
        if k > 0 && !reducible {
            good += 1;
        }
        if !bump(&mut digits, full) {
            break;
        }
    }
    Ok(finish(k, total, good, start))
}

/// Permutations of `[k]` with no proper prefix `[j]` mapped onto itself.
pub fn count_indecomposable_permutations(k: usize) -> Result<EnumResult, OracleError> {
    if k > 9 {
        return Err(OracleError::BudgetExceeded {
            what: "permutations",
            size: k,
            required: sat_fact(k).to_string(),
            budget: sat_fact(9),
        });
    }
    let start = Instant::now();
    let mut p: Vec<u8> = (0..k as u8).collect();
    let (mut total, mut good) = (0u64, 0u64);
    loop {
        total += 1;
        let mut max_seen = 0usize;
        let decomposable = p
            .iter()
            .enumerate()
            .take(k.saturating_sub(1))
            .any(|(j, &x)| {
                max_seen = max_seen.max(x as usize);
                max_seen == j
            });
        if k > 0 && !decomposable {
            good += 1;
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    Ok(finish(k, total, good, start))
}

/// `d`-tuples of permutations of `[k]` with no proper prefix `[j]` fixed by all of them.
pub fn count_indecomposable_multipermutations(k: usize, d: u32) -> Result<EnumResult, OracleError> {
    if d == 0 {
        return Err(OracleError::InvalidArgument("arity must be at least 1"));
    }
    check_budget("multipermutations", k, sat_pow(sat_fact(k), d as usize), BUDGET)?;
    let start = Instant::now();
    let perms = all_permutations(k);
    let masks: Vec<u64> = perms.iter().map(|p| closed_prefix_mask(p)).collect();
    let (mut total, mut good) = (0u64, 0u64);
    for_each_tuple(perms.len(), d as usize, |idx| {
        total += 1;
        if k > 0 && idx.iter().fold(u64::MAX, |acc, &i| acc & masks[i]) == 0 {
            good += 1;
        }
    });
    Ok(finish(k, total, good, start))
}

fn for_each_tuple(len: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    if len == 0 {
        return;
    }
    let mut idx = vec![0usize; arity];
    loop {
        f(&idx);
        let mut pos = 0;
        loop {
            if pos == arity {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < len {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Perfect matchings of `[2k]` with no proper prefix `[2j]` closed under the matching.
pub fn count_indecomposable_matchings(k_pairs: usize) -> Result<EnumResult, OracleError> {
    let n = 2 * k_pairs;
    let required = (1..n as u128).step_by(2).fold(1u128, |a, x| a.saturating_mul(x));
    check_budget("perfect matchings", k_pairs, required, MATCHING_BUDGET)?;
    let start = Instant::now();
    let (mut total, mut good) = (0u64, 0u64);
    for m in perfect_matchings(n) {
        total += 1;
        let closed = (1..k_pairs).any(|j| m[..2 * j].iter().all(|&x| (x as usize) < 2 * j));
        if k_pairs > 0 && !closed {
            good += 1;
        }
    }
    Ok(finish(k_pairs, total, good, start))
}

/// `d`-tuples of permutations of `[n]` whose generated group acts transitively.
pub fn count_transitive_tuples(n: usize, d: u32) -> Result<EnumResult, OracleError> {
    if d == 0 {
        return Err(OracleError::InvalidArgument("arity must be at least 1"));
    }
    check_budget("permutation tuples", n, sat_pow(sat_fact(n), d as usize), BUDGET)?;
    let start = Instant::now();
    let perms = all_permutations(n);
    let (mut total, mut good) = (0u64, 0u64);
    for_each_tuple(perms.len(), d as usize, |idx| {
        total += 1;
        let mut uf = UnionFind::new(n);
        for &t in idx {
            for (i, &x) in perms[t].iter().enumerate() {
                uf.union(i, x as usize);
            }
        }
        if uf.is_connected() {
            good += 1;
        }
    });
    Ok(finish(n, total, good, start))
}

/// Pairs `(σ, α)` on `n_darts` darts with `α` a perfect matching, connected when
/// the orbits of `σ` and `α` together cover every dart in one class.
pub fn count_connected_maps(n_darts: usize) -> Result<EnumResult, OracleError> {
    if n_darts % 2 == 1 {
        return Err(OracleError::OddDarts(n_darts));
    }
    let matchings = (1..n_darts as u128).step_by(2).fold(1u128, |a, x| a.saturating_mul(x));
    check_budget("maps", n_darts, sat_fact(n_darts).saturating_mul(matchings), BUDGET)?;
    let start = Instant::now();
    let alphas = perfect_matchings(n_darts);
    let (mut total, mut good) = (0u64, 0u64);
    let mut sigma: Vec<u8> = (0..n_darts as u8).collect();
    loop {
        for alpha in &alphas {
            total += 1;
            let mut uf = UnionFind::new(n_darts);
            for i in 0..n_darts {
                uf.union(i, sigma[i] as usize);
                uf.union(i, alpha[i] as usize);
            }
            if uf.is_connected() {
                good += 1;
            }
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    Ok(finish(n_darts, total, good, start))
}

/// Prefix sets (as bitmasks) of a linear order listed by `order[position] = element`.
fn prefix_sets(order: &[u8]) -> Vec<u32> {
    let mut acc = 0u32;
    order[..order.len().saturating_sub(1)]
        .iter()
        .map(|&x| {
            acc |= 1 << x;
            acc
        })
        .collect()
}

/// `d`-tuples of linear orders of `[k]` admitting no split `A ⊔ B` with `A`
/// below `B` in every order.
pub fn count_irreducible_linear_orders(k: usize, d: u32) -> Result<EnumResult, OracleError> {
    if d == 0 {
        return Err(OracleError::InvalidArgument("arity must be at least 1"));
    }
    check_budget("linear order tuples", k, sat_pow(sat_fact(k), d as usize), BUDGET)?;
    let start = Instant::now();
    let orders = all_permutations(k);
    let prefixes: Vec<Vec<u32>> = orders.iter().map(|o| prefix_sets(o)).collect();
    let (mut total, mut good) = (0u64, 0u64);
    for_each_tuple(orders.len(), d as usize, |idx| {
        total += 1;
        let split = (0..k.saturating_sub(1)).any(|j| idx.iter().all(|&t| prefixes[t][j] == prefixes[idx[0]][j]));
        if k > 0 && !split {
            good += 1;
        }
    });
    Ok(finish(k, total, good, start))
}

/// Pairs of linear orders `(<_1, <_2)` of `[n]` such that swapping them is a
/// relabeling by a fixed-point-free involution, and that admit no split.
pub fn count_irreducible_linear_matchings(n: usize) -> Result<EnumResult, OracleError> {
    check_budget("linear order pairs", n, sat_pow(sat_fact(n), 2), BUDGET)?;
    let start = Instant::now();
    let orders = all_permutations(n);
    let prefixes: Vec<Vec<u32>> = orders.iter().map(|o| prefix_sets(o)).collect();
    let (mut total, mut good) = (0u64, 0u64);
    for (a, first) in orders.iter().enumerate() {
        for (b, second) in orders.iter().enumerate() {
            // relabeling ρ with ρ(first[i]) = second[i]
            let mut rho = vec![0u8; n];
            for i in 0..n {
                rho[first[i] as usize] = second[i];
            }
            let fpf_involution = (0..n).all(|x| rho[x] as usize != x && rho[rho[x] as usize] as usize == x);
            if !fpf_involution {
                continue;
            }
            total += 1;
            let split = (0..n.saturating_sub(1)).any(|j| prefixes[a][j] == prefixes[b][j]);
            if n > 0 && !split {
                good += 1;
            }
        }
    }
    Ok(finish(n, total, good, start))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(r: &EnumResult) -> (u64, u64) {
        (
            u64::try_from(&r.total).unwrap(),
            u64::try_from(&r.connected_or_irreducible).unwrap(),
        )
    }

    #[test]
    fn graphs() {
        assert_eq!(pair(&count_connected_graphs(3, 1).unwrap()), (8, 4));
        assert_eq!(pair(&count_connected_graphs(1, 1).unwrap()), (1, 1));
        assert_eq!(pair(&count_connected_graphs(4, 1).unwrap()).1, 38);
        assert_eq!(pair(&count_connected_graphs(5, 1).unwrap()).1, 728);
        let d2: Vec<u64> = (1..=4).map(|n| pair(&count_connected_graphs(n, 2).unwrap()).1).collect();
        assert_eq!(d2, vec![1, 2, 20, 624]);
        assert!(matches!(count_connected_graphs(9, 1), Err(OracleError::BudgetExceeded { .. })));
    }

    #[test]
    fn tournaments() {
        let it: Vec<u64> = (1..=5).map(|k| pair(&count_irreducible_tournaments(k, 1).unwrap()).1).collect();
        assert_eq!(it, vec![1, 0, 2, 24, 544]);
        assert_eq!(pair(&count_irreducible_tournaments(3, 2).unwrap()).0, 27);
    }

    #[test]
    fn permutations() {
        let ip: Vec<u64> = (1..=6).map(|k| pair(&count_indecomposable_permutations(k).unwrap()).1).collect();
        assert_eq!(ip, vec![1, 1, 3, 13, 71, 461]);
        assert!(count_indecomposable_permutations(10).is_err());
        let single: Vec<u64> = (1..=5)
            .map(|k| pair(&count_indecomposable_multipermutations(k, 1).unwrap()).1)
            .collect();
        assert_eq!(single, vec![1, 1, 3, 13, 71]);
    }

    #[test]
    fn matchings() {
        let im: Vec<(u64, u64)> = (1..=5).map(|k| pair(&count_indecomposable_matchings(k).unwrap())).collect();
        assert_eq!(im, vec![(1, 1), (3, 2), (15, 10), (105, 74), (945, 706)]);
    }

    #[test]
    fn transitive() {
        assert_eq!(pair(&count_transitive_tuples(2, 2).unwrap()), (4, 3));
        assert_eq!(pair(&count_transitive_tuples(1, 2).unwrap()), (1, 1));
        let o: Vec<u64> = (1..=4).map(|n| pair(&count_transitive_tuples(n, 2).unwrap()).1).collect();
        assert_eq!(o, vec![1, 3, 26, 426]);
        let t: Vec<u64> = (1..=3).map(|n| pair(&count_transitive_tuples(n, 3).unwrap()).1).collect();
        assert_eq!(t, vec![1, 7, 194]);
    }

    #[test]
    fn maps() {
        assert_eq!(pair(&count_connected_maps(2).unwrap()), (2, 2));
        assert_eq!(pair(&count_connected_maps(4).unwrap()), (72, 60));
        assert_eq!(pair(&count_connected_maps(6).unwrap()).1, 8880);
        assert_eq!(count_connected_maps(3), Err(OracleError::OddDarts(3)));
    }

    #[test]
    fn relabeling_lift() {
        let fact = [1u64, 1, 2, 6, 24, 120];
        for k in 1..=5 {
            let ip = pair(&count_indecomposable_permutations(k).unwrap()).1;
            let il = pair(&count_irreducible_linear_orders(k, 2).unwrap()).1;
            assert_eq!(fact[k] * ip, il, "k={k}");
        }
        for k in 1..=3 {
            let im = pair(&count_indecomposable_matchings(k).unwrap()).1;
            let ilm = pair(&count_irreducible_linear_matchings(2 * k).unwrap());
            assert_eq!([2u64, 24, 720][k - 1] * im, ilm.1, "size {}", 2 * k);
        }
        assert_eq!(pair(&count_irreducible_linear_matchings(3).unwrap()), (0, 0));
    }

    #[test]
    fn deterministic() {
        let a = count_transitive_tuples(3, 2).unwrap();
        let b = count_transitive_tuples(3, 2).unwrap();
        assert_eq!(pair(&a), pair(&b));
    }
}
