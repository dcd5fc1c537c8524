//! Truncated power series with exact rational coefficients.
//!
//! A [`Series`] of order `N` stores the coefficients of `z^0 .. z^N`; anything
//! above `z^N` is unknown. Binary operations on series of different orders
//! truncate to the smaller order. Used as an exponential generating function,
//! `coeffs[n] = a_n / n!` (see [`Egf`]).

mod newton;

pub use newton::{exp_by_newton, log1p_by_integration};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("insufficient data: order {order} needs {required} terms, only {available} available")]
    InsufficientData {
        order: usize,
        required: usize,
        available: usize,
    },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("coefficient of z^{index} times {index}! is not an integer")]
    NotIntegral { index: usize },
    #[error("sequence `{label}` has nonzero term at n = {index}, which is not a multiple of period {period}")]
    Periodicity {
        label: String,
        index: usize,
        period: usize,
    },
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("a counting sequence needs at least one term")]
    Empty,
}

/// Integer counts `a_0 .. a_N` of a labeled class, nonzero only on multiples of `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingSequence {
    label: String,
    period: usize,
    terms: Vec<BigInt>,
}

impl CountingSequence {
    pub fn new(
        label: impl Into<String>,
        period: usize,
        terms: Vec<BigInt>,
    ) -> Result<Self, SeriesError> {
        let label = label.into();
        if period == 0 {
            return Err(SeriesError::ZeroPeriod);
        }
        if terms.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(index) = (0..terms.len()).find(|&n| n % period != 0 && !terms[n].is_zero()) {
            return Err(SeriesError::Periodicity {
                label,
                index,
                period,
            });
        }
        Ok(Self {
            label,
            period,
            terms,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    /// Highest index present.
    pub fn max_index(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.terms.get(n)
    }

    /// Values `a_{pm}` for `m = 0, 1, ..`.
    pub fn lattice_terms(&self) -> Vec<BigInt> {
        self.terms.iter().step_by(self.period).cloned().collect()
    }
}

/// Exact truncated power series `Σ_{n ≤ N} c_n z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<BigRational>,
}

/// An exponential generating function is stored as the series of `a_n / n!`.
pub type Egf = Series;

impl Series {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the constant term");
        Self { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::new(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![BigRational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// `egf_from_counts`: the EGF `Σ a_n z^n / n!` truncated at `order`.
    pub fn from_counts(seq: &CountingSequence, order: usize) -> Result<Self, SeriesError> {
        if order > seq.max_index() {
            return Err(SeriesError::InsufficientData {
                order,
                required: order + 1,
                available: seq.terms.len(),
            });
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut fact = BigInt::one();
        for (n, a) in seq.terms[..=order].iter().enumerate() {
            if n > 0 {
                fact *= n;
            }
            coeffs.push(BigRational::new(a.clone(), fact.clone()));
        }
        Ok(Self { coeffs })
    }

    /// The counts `n! · [z^n]`, failing if any of them is not an integer.
    pub fn to_counts(&self, label: &str, period: usize) -> Result<CountingSequence, SeriesError> {
        let mut fact = BigInt::one();
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                fact *= n;
            }
            let scaled = c * BigRational::from_integer(fact.clone());
            if !scaled.is_integer() {
                return Err(SeriesError::NotIntegral { index: n });
            }
            terms.push(scaled.to_integer());
        }
        CountingSequence::new(label, period, terms)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero above the order is *not* implied, so this panics there.
    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self::new(self.coeffs[..=order].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| {
                let mut acc = BigRational::zero();
                for i in 0..=n {
                    let (a, b) = (&self.coeffs[i], &other.coeffs[n - i]);
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect();
        Self::new(coeffs)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let f0 = &self.coeffs[0];
        if f0.is_zero() {
            return Err(SeriesError::Domain("reciprocal of a series with zero constant term"));
        }
        let inv0 = f0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                let f = &self.coeffs[k];
                if !f.is_zero() && !out[n - k].is_zero() {
                    acc += f * &out[n - k];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::new(out))
    }

    /// `log(1 + u)` for `u(0) = 0`, by the recurrence `n L_n = n u_n - Σ_{k<n} k L_k u_{n-k}`.
    pub fn log1p(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::Domain("log1p of a series with nonzero constant term"));
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        for n in 1..self.coeffs.len() {
            let mut acc = &self.coeffs[n] * BigInt::from(n);
            for k in 1..n {
                let (l, u) = (&out[k], &self.coeffs[n - k]);
                if !l.is_zero() && !u.is_zero() {
                    acc -= l * u * BigInt::from(k);
                }
            }
            out[n] = acc / BigInt::from(n);
        }
        Ok(Self::new(out))
    }

    /// `exp(u)` for `u(0) = 0`, by the recurrence `n g_n = Σ_{k=1}^{n} k u_k g_{n-k}`.
    /// The result has constant term 1; `result - 1` is the inverse of [`Series::log1p`].
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::Domain("exp of a series with nonzero constant term"));
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        out[0] = BigRational::one();
        for n in 1..self.coeffs.len() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                let (u, g) = (&self.coeffs[k], &out[n - k]);
                if !u.is_zero() && !g.is_zero() {
                    acc += u * g * BigInt::from(k);
                }
            }
            out[n] = acc / BigInt::from(n);
        }
        Ok(Self::new(out))
    }

    /// `f(z^p)`: coefficient `n` moves to `p·n`; the order becomes `p·order`.
    pub fn substitute_power(&self, p: usize) -> Self {
        assert!(p >= 1, "substitution power must be positive");
        if p == 1 {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); p * self.order() + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[p * n] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Every `p`-th coefficient, i.e. `g` with `g(z^p) = f(z)` when `f` lives on the `z^p` lattice.
    pub fn stride(&self, p: usize) -> Self {
        assert!(p >= 1, "stride must be positive");
        Self::new(self.coeffs.iter().step_by(p).cloned().collect())
    }

    /// Derivative; the order drops by one (order-0 series map to the zero series of order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c * BigInt::from(n))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c / BigInt::from(n + 1)),
        );
        Self::new(coeffs)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series::new((0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect())
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series::new((0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect())
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        Series::mul(self, rhs)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match n {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*z")?,
                _ => write!(f, "{a}*z^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `(2m-1)!! = 1·3·…·(2m-1)` for odd arguments, with `(-1)!! = 1`.
///
/// Takes the odd number `2m - 1` as a signed integer so that `(-1)!!` is expressible.
pub fn double_factorial(odd: i64) -> BigInt {
    assert!(odd >= -1, "double factorial is only defined here for arguments ≥ -1");
    let mut acc = BigInt::one();
    let mut k = odd;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Binomial coefficient `C(n, k)` (zero when `k > n`).
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `true` if every `n!·coeff(n)` is an integer.
pub fn has_integral_counts(s: &Series) -> bool {
    let mut fact = BigInt::one();
    for (n, c) in s.coeffs().iter().enumerate() {
        if n > 0 {
            fact *= n;
        }
        if !(c * BigRational::from_integer(fact.clone())).is_integer() {
            return false;
        }
    }
    true
}

/// Whether a rational is a non-negative integer.
pub fn is_nonnegative_integer(r: &BigRational) -> bool {
    r.is_integer() && !r.is_negative()
}

#[cfg(test)]
mod tests;
