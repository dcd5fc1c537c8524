//! Finite-window sanity checks of the gargantuan conditions
//! `a_{n−1}/a_n → 0` and `Σ_{k=r}^{n−r} |a_k a_{n−k}| = O(a_{n−r})`.
//!
//! A window can only make the hypothesis plausible, so the verdict is
//! `CONSISTENT` or `INCONSISTENT`, never "proved".

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bigseries::{factorial, CountingSequence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

/// Which values the conditions are applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `a_{pm}/(pm)!` on the lattice; what the class-level definition uses.
    #[default]
    Egf,
    /// `a_{pm}` as given.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Indexed {
    pub n: usize,
    #[serde(serialize_with = "crate::rational_object")]
    pub value: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumRow {
    pub r: usize,
    /// `Σ_{k=r}^{n−r} |a_k a_{n−k}| / |a_{n−r}|` for each `n` in the window with `n ≥ 2r`.
    pub values: Vec<Indexed>,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotoneRow {
    pub n: usize,
    /// `x_k = |a_k a_{n−k}|` decreases for `1 ≤ k < n/2`.
    pub decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GargantuanReport {
    pub label: String,
    pub normalization: Normalization,
    /// Lattice indices `m` (sizes `p·m`).
    pub window: (usize, usize),
    pub period: usize,
    /// `a_{n−1}/a_n`.
    pub ratios: Vec<Indexed>,
    pub ratios_decreasing: bool,
    pub sums: Vec<SumRow>,
    /// `n·a_{n−1}/a_n`, informational.
    pub scaled_ratios: Vec<Indexed>,
    /// Monotonicity of `x_k`, informational.
    pub monotone: Vec<MonotoneRow>,
    pub verdict: Verdict,
}

/// Growth allowed for the normalized sums across the upper half of the window.
pub const SUM_GROWTH_BOUND: i64 = 2;

fn lattice_values(seq: &CountingSequence, end: usize, normalization: Normalization) -> Result<Vec<BigRational>> {
    let p = seq.period();
    if seq.max_index() < p * end {
        return Err(crate::bigseries::SeriesError::InsufficientData {
            order: p * end,
            required: p * end + 1,
            available: seq.max_index() + 1,
        }
        .into());
    }
    Ok((0..=end)
        .map(|m| {
            let a = BigRational::from_integer(seq.terms()[p * m].clone());
            match normalization {
                Normalization::Raw => a,
                Normalization::Egf => a / BigRational::from_integer(factorial(p * m)),
            }
        })
        .collect())
}

fn check_values(
    label: String,
    period: usize,
    values: &[BigRational],
    window: RangeInclusive<usize>,
    r_max: usize,
    normalization: Normalization,
) -> Result<GargantuanReport> {
    let (start, end) = (*window.start(), *window.end());
    if end < start || end - start + 1 < 4 || start == 0 {
        return Err(Error::WindowTooShort { start, end });
    }
    let mid = start + (end - start) / 2;
    for n in start - 1..=end {
        if values[n].is_zero() {
            return Err(Error::NonPositive { index: n * period });
        }
    }

    let ratios: Vec<Indexed> = window
        .clone()
        .map(|n| Indexed {
            n,
            value: (&values[n - 1] / &values[n]).abs(),
        })
        .collect();
    let ratios_decreasing = ratios[mid - start..]
        .windows(2)
        .all(|w| w[1].value < w[0].value);

    let scaled_ratios = ratios
        .iter()
        .map(|x| Indexed {
            n: x.n,
            value: &x.value * BigRational::from_integer(BigInt::from(x.n)),
        })
        .collect();

    let mut sums = Vec::with_capacity(r_max);
    for r in 1..=r_max {
        let mut rows = Vec::new();
        for n in window.clone().filter(|&n| n >= 2 * r) {
            let lead = values[n - r].abs();
            if lead.is_zero() {
                return Err(Error::NonPositive { index: (n - r) * period });
            }
            let total = (r..=n - r).fold(BigRational::zero(), |acc, k| acc + (&values[k] * &values[n - k]).abs());
            rows.push(Indexed { n, value: total / lead });
        }
        let limit = rows
            .iter()
            .find(|x| x.n >= mid)
            .map(|x| &x.value * BigRational::from_integer(SUM_GROWTH_BOUND.into()));
        let bounded = match limit {
            Some(limit) => rows.iter().filter(|x| x.n >= mid).all(|x| x.value <= limit),
            None => true,
        };
        sums.push(SumRow { r, values: rows, bounded });
    }

    let monotone = window
        .clone()
        .map(|n| {
            let xs: Vec<BigRational> = (1..n.div_ceil(2)).map(|k| (&values[k] * &values[n - k]).abs()).collect();
            MonotoneRow {
                n,
                decreasing: xs.windows(2).all(|w| w[1] < w[0]),
            }
        })
        .collect();

    let verdict = if ratios_decreasing && sums.iter().all(|s| s.bounded) {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    Ok(GargantuanReport {
        label,
        normalization,
        window: (start, end),
        period,
        ratios,
        ratios_decreasing,
        sums,
        scaled_ratios,
        monotone,
        verdict,
    })
}

/// Checks the two conditions over `window` (lattice indices).
///
/// `INCONSISTENT` when `a_{n−1}/a_n` fails to decrease strictly over the upper
/// half of the window, or when some normalized sum grows by more than
/// [`SUM_GROWTH_BOUND`] over that half.
pub fn gargantuan_check(
    seq: &CountingSequence,
    window: RangeInclusive<usize>,
    r_max: usize,
    normalization: Normalization,
) -> Result<GargantuanReport> {
    let values = lattice_values(seq, *window.end(), normalization)?;
    check_values(seq.label().to_string(), seq.period(), &values, window, r_max, normalization)
}

/// Runs [`gargantuan_check`] on the pointwise product `a_n·b_n`.
pub fn product_check(
    a: &CountingSequence,
    b: &CountingSequence,
    window: RangeInclusive<usize>,
    r_max: usize,
    normalization: Normalization,
) -> Result<GargantuanReport> {
    if a.period() != b.period() {
        return Err(Error::LatticeMismatch {
            left: a.period(),
            right: b.period(),
        });
    }
    let end = *window.end();
    let x = lattice_values(a, end, normalization)?;
    let y = lattice_values(b, end, normalization)?;
    let values: Vec<BigRational> = x.iter().zip(&y).map(|(u, v)| u * v).collect();
    let label = format!("{} × {}", a.label(), b.label());
    check_values(label, a.period(), &values, window, r_max, normalization)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigseries::double_factorial;
    use crate::models::{builtin, default_builtins, Params};

    fn seq(label: &str, f: impl Fn(usize) -> BigInt, n: usize) -> CountingSequence {
        CountingSequence::new(label, 1, (0..=n).map(f).collect()).unwrap()
    }

    #[test]
    fn graph_window() {
        let g = builtin("graph", &Params::new()).unwrap().counts(20).unwrap();
        let rep = gargantuan_check(&g, 5..=20, 3, Normalization::Egf).unwrap();
        assert_eq!(rep.verdict, Verdict::Consistent);
        // a_{n-1}/a_n = n/2^{n-1} after dividing by n!
        assert_eq!(rep.ratios[0].value, BigRational::new(5.into(), 16.into()));
        assert!(rep.ratios.windows(2).all(|w| w[1].value < w[0].value));
    }

    #[test]
    fn factorial_raw() {
        let s = seq("n!", factorial, 20);
        let rep = gargantuan_check(&s, 5..=20, 3, Normalization::Raw).unwrap();
        assert_eq!(rep.verdict, Verdict::Consistent);
        assert!(rep.monotone.iter().all(|m| m.decreasing));
        assert!(rep.scaled_ratios.iter().all(|x| x.value == BigRational::from_integer(1.into())));
    }

    #[test]
    fn constant_sequence() {
        let s = seq("ones", |_| BigInt::from(1), 24);
        for norm in [Normalization::Raw, Normalization::Egf] {
            let rep = gargantuan_check(&s, 5..=24, 3, norm).unwrap();
            assert_eq!(rep.verdict, Verdict::Inconsistent);
        }
        let raw = gargantuan_check(&s, 5..=24, 3, Normalization::Raw).unwrap();
        assert!(!raw.ratios_decreasing);
    }

    #[test]
    fn products() {
        let f = seq("n!", factorial, 15);
        let ones = seq("ones", |_| BigInt::from(1), 15);
        let rep = product_check(&f, &f, 5..=15, 3, Normalization::Raw).unwrap();
        assert_eq!(rep.verdict, Verdict::Consistent);
        let alone = gargantuan_check(&f, 5..=15, 3, Normalization::Raw).unwrap();
        let with_ones = product_check(&f, &ones, 5..=15, 3, Normalization::Raw).unwrap();
        assert_eq!(alone.verdict, with_ones.verdict);
        assert_eq!(alone.ratios, with_ones.ratios);
        let df = seq("(2n-1)!!", |n| double_factorial(2 * n as i64 - 1), 15);
        let rep = product_check(&df, &df, 5..=15, 3, Normalization::Raw).unwrap();
        assert_eq!(rep.verdict, Verdict::Consistent);
    }

    #[test]
    fn lattice_mismatch_and_short_window() {
        let f = seq("n!", factorial, 15);
        let cm = builtin("comb_map", &Params::new()).unwrap().counts(30).unwrap();
        assert!(matches!(
            product_check(&f, &cm, 5..=15, 2, Normalization::Raw),
            Err(Error::LatticeMismatch { left: 1, right: 2 })
        ));
        assert!(matches!(
            gargantuan_check(&f, 5..=7, 2, Normalization::Raw),
            Err(Error::WindowTooShort { .. })
        ));
    }

    #[test]
    fn every_builtin_consistent() {
        for model in default_builtins() {
            let counts = model.counts(24 * model.period()).unwrap();
            let rep = gargantuan_check(&counts, 5..=24, 3, Normalization::Egf).unwrap();
            assert_eq!(rep.verdict, Verdict::Consistent, "{}", model.id());
        }
    }

    #[test]
    fn reproducible_json() {
        let g = builtin("origami", &Params::new()).unwrap().counts(12).unwrap();
        let a = serde_json::to_string(&gargantuan_check(&g, 5..=12, 2, Normalization::Egf).unwrap()).unwrap();
        let b = serde_json::to_string(&gargantuan_check(&g, 5..=12, 2, Normalization::Egf).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"verdict\":\"CONSISTENT\""));
    }
}
