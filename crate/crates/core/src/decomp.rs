//! SET/SEQ calculus: connected counts through `log A`, derivative counts
//! through `1 − 1/A`, the partition (inclusion–exclusion) formula for `d_k`,
//! and a finite-window check of the log-composition asymptotics.
//!
//! Periodic models are handled on the compressed lattice `w = z^p`, where the
//! coefficient of `w^m` is `a_{pm}/(pm)!`; results are spread back to sizes.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bigseries::{factorial, CountingSequence, Series};
use crate::error::Result;
use crate::models::{DerivativeClass, DerivativeReading, ModelSpec};

/// An integer partition stored as multiplicities: `multiplicities[i - 1]` parts equal to `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    multiplicities: Vec<usize>,
}

impl Partition {
    pub fn from_multiplicities(multiplicities: Vec<usize>) -> Self {
        Self { multiplicities }
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `|λ| = Σ i·p_i`.
    pub fn size(&self) -> usize {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) * p)
            .sum()
    }

    /// Number of parts `l(λ) = Σ p_i`.
    pub fn length(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Parts in non-increasing order.
    pub fn parts(&self) -> Vec<usize> {
        let mut parts = Vec::with_capacity(self.length());
        for (i, &p) in self.multiplicities.iter().enumerate().rev() {
            parts.extend(std::iter::repeat(i + 1).take(p));
        }
        parts
    }
}

/// All partitions of `k`, as multiplicity vectors `(p_1, …, p_k)` in increasing
/// lexicographic order.
pub fn partitions(k: usize) -> Vec<Partition> {
    fn fill(i: usize, k: usize, remaining: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == k {
            if remaining % k == 0 {
                current.push(remaining / k);
                out.push(Partition::from_multiplicities(current.clone()));
                current.pop();
            }
            return;
        }
        for p in 0..=remaining / i {
            current.push(p);
            fill(i + 1, k, remaining - p * i, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(Partition::from_multiplicities(Vec::new()));
    } else {
        fill(1, k, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Base, connected and derivative sequences of one model, indexed by size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedSequences {
    pub base: CountingSequence,
    pub connected: CountingSequence,
    /// `δ_n = [z^n](1 − 1/A(z))`, `δ_0 = 0`.
    pub delta: Vec<BigRational>,
    /// `d_n = n!·δ_n`, present when every one of them is an integer.
    pub derivative: Option<Vec<BigInt>>,
    /// The class counted by the derivative sequence, if one is known.
    pub interpretation: Option<DerivativeClass>,
}

impl DerivedSequences {
    pub fn period(&self) -> usize {
        self.base.period()
    }

    pub fn order(&self) -> usize {
        self.delta.len() - 1
    }

    /// The number that counts the derivative class at size `n`, following the
    /// model's reading (`d_n` or the unlifted `δ_n`). `None` without a known class.
    pub fn interpreted(&self, n: usize) -> Option<BigRational> {
        let class = self.interpretation.as_ref()?;
        Some(match class.reading {
            DerivativeReading::Integer => BigRational::from_integer(self.derivative.as_ref()?[n].clone()),
            DerivativeReading::Lattice => self.delta[n].clone(),
        })
    }

    /// Whether every interpreted value is a non-negative integer.
    pub fn interpretation_is_integral(&self) -> bool {
        (1..=self.order()).all(|n| {
            self.interpreted(n)
                .is_some_and(|v| v.is_integer() && !v.is_negative())
        })
    }
}

fn lattice_order(model: &ModelSpec, order: usize) -> usize {
    order / model.period()
}

fn spread_counts(label: &str, period: usize, order: usize, lattice: &Series) -> Result<CountingSequence> {
    let mut terms = vec![BigInt::zero(); order + 1];
    for (m, c) in lattice.coeffs().iter().enumerate() {
        let n = m * period;
        let scaled = c * BigRational::from_integer(factorial(n));
        if !scaled.is_integer() {
            return Err(crate::bigseries::SeriesError::NotIntegral { index: n }.into());
        }
        terms[n] = scaled.to_integer();
    }
    Ok(CountingSequence::new(label, period, terms)?)
}

/// `c_n = n!·[z^n] log A(z)` for `n ≤ order`.
pub fn connected_counts(model: &ModelSpec, order: usize) -> Result<CountingSequence> {
    let lattice = model.lattice_egf(lattice_order(model, order))?;
    let log = (&lattice - &Series::one(lattice.order())).log1p()?;
    spread_counts(&format!("connected {}", model.id()), model.period(), order, &log)
}

/// `δ_n = [z^n](1 − 1/A(z))` and `d_n = n!·δ_n` for `n ≤ order`.
pub fn derivative_coeffs(model: &ModelSpec, order: usize) -> Result<DerivedSequences> {
    let m_max = lattice_order(model, order);
    let lattice = model.lattice_egf(m_max)?;
    let base = model.counts(order)?;
    let log = (&lattice - &Series::one(m_max)).log1p()?;
    let connected = spread_counts(&format!("connected {}", model.id()), model.period(), order, &log)?;
    let seq_part = &Series::one(m_max) - &lattice.reciprocal()?;

    let p = model.period();
    let mut delta = vec![BigRational::zero(); order + 1];
    for (m, c) in seq_part.coeffs().iter().enumerate() {
        delta[m * p] = c.clone();
    }
    let derivative = delta
        .iter()
        .enumerate()
        .map(|(n, dl)| {
            let v = dl * BigRational::from_integer(factorial(n));
            v.is_integer().then(|| v.to_integer())
        })
        .collect::<Option<Vec<_>>>();
    Ok(DerivedSequences {
        base,
        connected,
        delta,
        derivative,
        interpretation: model.derivative_class().cloned(),
    })
}

/// `d_k` by summing `(−1)^{l−1}·k!/Π((i!)^{p_i} p_i!)·Π c_i^{p_i}` over all partitions of `k`.
///
/// `connected` must hold `c_1 ..= c_k`.
pub fn derivative_from_partitions(connected: &CountingSequence, k: usize) -> BigRational {
    assert!(k >= 1, "derivative index starts at 1");
    assert!(connected.max_index() >= k, "connected counts needed up to {k}");
    let c = connected.terms();
    let k_fact = factorial(k);
    let mut total = BigRational::zero();
    for lambda in partitions(k) {
        let mut denom = BigInt::one();
        let mut prod = BigInt::one();
        for (i, &p) in lambda.multiplicities().iter().enumerate() {
            if p == 0 {
                continue;
            }
            let part = i + 1;
            denom *= num_traits::pow(factorial(part), p) * factorial(p);
            prod *= num_traits::pow(c[part].clone(), p);
        }
        let term = BigRational::new(&k_fact * prod, denom);
        if lambda.length() % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `derivative_coeffs_by_partitions`: the same `d_k` as [`derivative_coeffs`], by inclusion–exclusion.
pub fn derivative_coeffs_by_partitions(model: &ModelSpec, k: usize) -> Result<BigRational> {
    let connected = connected_counts(model, k)?;
    Ok(derivative_from_partitions(&connected, k))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenderPoint {
    pub n: usize,
    /// `v_n − Σ_{k≤r} w_k u_{n−k}`.
    #[serde(serialize_with = "crate::rational_object")]
    pub residual: BigRational,
    /// `|residual| / |u_{n−r}|`.
    #[serde(serialize_with = "crate::rational_object")]
    pub ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenderRow {
    pub r: usize,
    pub points: Vec<BenderPoint>,
    /// The ratio never increases across the window.
    pub decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenderReport {
    pub rows: Vec<BenderRow>,
    pub pass: bool,
}

/// Checks on a finite window that, for `F = log(1 + y)`, `V = F(U)` and
/// `W = F'(U)`, the residual `v_n − Σ_{k=0}^{r} w_k u_{n−k}` shrinks relative to
/// `u_{n−r}` for each `r ≤ r_max`. Points where `u_{n−r} = 0` are skipped.
pub fn bender_compose_check(u: &Series, r_max: usize, window: RangeInclusive<usize>) -> Result<BenderReport> {
    let order = u.order();
    assert!(
        *window.end() <= order,
        "window end {} beyond series order {order}",
        window.end()
    );
    let v = u.log1p()?;
    let w = (&Series::one(order) + u).reciprocal()?;
    let mut rows = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max {
        let mut points = Vec::new();
        for n in window.clone() {
            if n < r {
                continue;
            }
            let lead = u.coeff(n - r);
            if lead.is_zero() {
                continue;
            }
            let mut residual = v.coeff(n).clone();
            for k in 0..=r {
                residual -= w.coeff(k) * u.coeff(n - k);
            }
            let ratio = residual.abs() / lead.abs();
            points.push(BenderPoint { n, residual, ratio });
        }
        let decreasing = points.windows(2).all(|p| p[1].ratio <= p[0].ratio);
        rows.push(BenderRow { r, points, decreasing });
    }
    let pass = rows.iter().all(|r| r.decreasing);
    Ok(BenderReport { rows, pass })
}
