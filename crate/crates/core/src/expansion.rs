//! The expansion `P(connected) ≈ 1 − Σ_k d_{pk}·C(pm, pk)·a_{p(m−k)}/a_{pm}`:
//! exact term lists, truncated evaluation at finite size, and the collected
//! `1/m` power series for models whose term ratios are rational in `m`.
//!
//! Sizes are `n = p·m`; series coefficients use the lattice index `m`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bigseries::{binomial, Series};
use crate::decomp::connected_counts;
use crate::error::{Error, Result};
use crate::models::{pow_signed, LinearFactor, ModelSpec, RatioKind, StepRatio, TermShape};

/// How the `k`-th factor `C(n,k)·a_{n−k}/a_n` is evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FactorForm {
    /// `Π_{j<k} step(m − j)`, multiplying `δ_{pk}`.
    LatticeProduct { step: String },
    /// `C(n,k)·base^{k(k+1)/2 − kn}`, multiplying `d_k`.
    PowerOfBase { base: u32 },
    /// `C(n,k)·a_{n−k}/a_n` read off the counting sequence, multiplying `d_k`.
    Tabulated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    /// Lattice index `k`; the term involves objects of size `p·k`.
    pub k: usize,
    pub size: usize,
    #[serde(serialize_with = "crate::rational_object")]
    pub delta: BigRational,
    #[serde(serialize_with = "option_integer")]
    pub derivative: Option<BigInt>,
    pub factor: FactorForm,
    /// Human-readable form of `coefficient · factor`.
    pub expression: String,
}

fn option_integer<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl Term {
    /// The number multiplying the factor: `δ_{pk}` for lattice products, `d_k` otherwise.
    pub fn coefficient(&self) -> BigRational {
        match self.factor {
            FactorForm::LatticeProduct { .. } => self.delta.clone(),
            _ => BigRational::from_integer(self.derivative.clone().expect("integral derivative")),
        }
    }
}

/// First `r` terms of the expansion for one model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionTermList {
    #[serde(rename = "model", serialize_with = "model_id")]
    pub model: ModelSpec,
    pub r: usize,
    pub period: usize,
    pub terms: Vec<Term>,
}

fn model_id<S: serde::Serializer>(m: &ModelSpec, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(m.id())
}

fn check_lattice(model: &ModelSpec, n: usize) -> Result<usize> {
    let p = model.period();
    if n % p != 0 {
        return Err(Error::OffLattice { n, period: p });
    }
    Ok(n / p)
}

/// `δ_{pk}` for `k ≤ k_max` on the compressed lattice, index 0 included.
fn lattice_deltas(model: &ModelSpec, k_max: usize) -> Result<Vec<BigRational>> {
    let b = model.lattice_egf(k_max)?;
    let inv = b.reciprocal()?;
    Ok((&Series::one(k_max) - &inv).into_coeffs())
}

fn step_of(model: &ModelSpec) -> Option<&StepRatio> {
    match model.shape() {
        TermShape::Rational(step) => Some(step),
        _ => None,
    }
}

/// The first `r` terms (lattice indices `1..=r`).
pub fn term_list(model: &ModelSpec, r: usize) -> Result<ExpansionTermList> {
    if r < 1 {
        return Err(Error::BadTruncation { min: 1 });
    }
    let p = model.period();
    let delta = lattice_deltas(model, r)?;
    let mut terms = Vec::with_capacity(r);
    for (k, dk) in delta.iter().enumerate().skip(1) {
        let size = p * k;
        let lifted = dk * BigRational::from_integer(crate::bigseries::factorial(size));
        let derivative = lifted.is_integer().then(|| lifted.to_integer());
        let (factor, expression) = match model.shape() {
            TermShape::Rational(step) => {
                let expr = if k == 1 {
                    format!("{dk}·R(m), R(m) = {step}")
                } else {
                    format!("{dk}·Π_{{j<{k}}} R(m−j), R(m) = {step}")
                };
                (FactorForm::LatticeProduct { step: step.to_string() }, expr)
            }
            TermShape::PowerOfBase { base } => {
                let tri = k * (k + 1) / 2;
                let d = derivative.clone().unwrap_or_default();
                let kn = if k == 1 { "n".to_string() } else { format!("{k}n") };
                (
                    FactorForm::PowerOfBase { base: *base },
                    format!("{d}·C(n,{k})·{base}^({tri}−{kn})"),
                )
            }
            TermShape::Tabulated => {
                let d = derivative.clone().unwrap_or_default();
                let expr = if p == 1 {
                    format!("{d}·C(n,{k})·a(n−{k})/a(n)")
                } else {
                    format!("{d}·C(n,{size})·a(n−{size})/a(n)")
                };
                (FactorForm::Tabulated, expr)
            }
        };
        if derivative.is_none() && !matches!(factor, FactorForm::LatticeProduct { .. }) {
            return Err(crate::bigseries::SeriesError::NotIntegral { index: size }.into());
        }
        terms.push(Term {
            k,
            size,
            delta: dk.clone(),
            derivative,
            factor,
            expression,
        });
    }
    Ok(ExpansionTermList {
        model: model.clone(),
        r,
        period: p,
        terms,
    })
}

impl ExpansionTermList {
    /// Value of term `k` at size `n`; `n` must lie on the lattice and exceed `p·k`.
    pub fn term_at(&self, term: &Term, n: usize) -> Result<BigRational> {
        let m = check_lattice(&self.model, n)?;
        if m <= term.k {
            return Err(Error::TooSmall { n, r: term.k, min: self.period * term.k });
        }
        let factor = match (&term.factor, self.model.shape()) {
            (FactorForm::LatticeProduct { .. }, TermShape::Rational(step)) => {
                step.lattice_ratio(m as i64, term.k)
            }
            (FactorForm::PowerOfBase { base }, _) => {
                let k = term.k as i64;
                let exp = k * (k + 1) / 2 - k * n as i64;
                let b = BigRational::from_integer(BigInt::from(*base));
                let e = i32::try_from(exp).map_err(|_| Error::TooSmall { n, r: term.k, min: n })?;
                BigRational::from_integer(binomial(n, term.k)) * pow_signed(&b, e)
            }
            _ => {
                let num = self.model.count(n - term.size)?;
                let den = self.model.count(n)?;
                BigRational::from_integer(binomial(n, term.size)) * BigRational::new(num, den)
            }
        };
        Ok(term.coefficient() * factor)
    }

    /// `1 − Σ_{k≤r} term_k(n)`. This is a truncation; the full sum at a fixed
    /// `n` does not converge to the probability.
    pub fn evaluate_at(&self, n: usize) -> Result<BigRational> {
        let min = self.r * self.period;
        if n <= min {
            return Err(Error::TooSmall { n, r: self.r, min });
        }
        let mut value = BigRational::one();
        for t in &self.terms {
            value -= self.term_at(t, n)?;
        }
        Ok(value)
    }

    /// Keeps the first `r` terms.
    pub fn truncated(&self, r: usize) -> Self {
        let mut out = self.clone();
        out.r = r.min(self.r);
        out.terms.truncate(out.r);
        out
    }
}

/// `c_n/a_n` in lowest terms.
pub fn exact_probability(model: &ModelSpec, n: usize) -> Result<BigRational> {
    check_lattice(model, n)?;
    let a = model.count(n)?;
    if a.is_zero() {
        return Err(Error::OffLattice { n, period: model.period() });
    }
    let c = connected_counts(model, n)?;
    Ok(BigRational::new(c.terms()[n].clone(), a))
}

/// `P ≈ 1 − Σ_j e_j/m^j` with `m = n/p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvNSeries {
    pub model: String,
    pub r: usize,
    pub period: usize,
    /// `e_1 ..= e_r`.
    #[serde(serialize_with = "crate::rational_objects")]
    pub coefficients: Vec<BigRational>,
}

impl InvNSeries {
    pub fn convention(&self) -> String {
        if self.period == 1 {
            "coefficients of 1/n^j, n = size".to_string()
        } else {
            format!("coefficients of 1/m^j, m = n/{} (lattice steps)", self.period)
        }
    }

    /// `e_j` (1-based), zero past the stored order.
    pub fn coeff(&self, j: usize) -> BigRational {
        assert!(j >= 1);
        self.coefficients.get(j - 1).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `1 − Σ_{j≤r} e_j/m^j` at lattice index `m`.
    pub fn evaluate(&self, m: usize) -> BigRational {
        let x = BigRational::new(BigInt::one(), BigInt::from(m));
        let mut acc = BigRational::zero();
        for e in self.coefficients.iter().rev() {
            acc = (acc + e) * &x;
        }
        BigRational::one() - acc
    }

    pub fn truncated(&self, r: usize) -> Self {
        let mut out = self.clone();
        out.r = r.min(self.r);
        out.coefficients.truncate(out.r);
        out
    }

    /// Coefficients in the size variable `n = p·m`: `e_j·p^j`.
    pub fn size_coefficients(&self) -> Vec<BigRational> {
        let p = BigRational::from_integer(BigInt::from(self.period));
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, e)| e * num_traits::pow(p.clone(), i + 1))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coefficients: Vec<serde_json::Value> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, e)| {
                serde_json::json!({
                    "order": i + 1,
                    "numerator": e.numer().to_string(),
                    "denominator": e.denom().to_string(),
                })
            })
            .collect();
        serde_json::json!({
            "model": self.model,
            "r": self.r,
            "convention": self.convention(),
            "coefficients": coefficients,
        })
    }
}

impl fmt::Display for InvNSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.period == 1 { "n" } else { "m" };
        f.write_str("1")?;
        for (i, e) in self.coefficients.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let sign = if e.is_negative() { "+" } else { "−" };
            let pow = if i == 0 { var.to_string() } else { format!("{var}^{}", i + 1) };
            write!(f, " {sign} {}/{pow}", e.abs())?;
        }
        write!(f, " + O(1/{var}^{})", self.r + 1)
    }
}

fn rational_decay(model: &ModelSpec) -> Result<(&StepRatio, usize)> {
    let step = match (model.ratio_kind(), step_of(model)) {
        (RatioKind::RationalInN, Some(step)) => step,
        (kind, _) => {
            return Err(Error::Classification {
                model: model.id().to_string(),
                kind,
            })
        }
    };
    let g = step.decay_order();
    assert!(g >= 1, "step ratio of {} does not decay", model.id());
    Ok((step, g as usize))
}

fn series_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().min(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(1 + t·x)^e` to `len` coefficients by the generalized binomial series.
fn binomial_series(t: &BigRational, e: i32, len: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(len);
    let mut c = BigRational::one();
    let mut tp = BigRational::one();
    for i in 0..len {
        out.push(&c * &tp);
        c = c * BigRational::from_integer(BigInt::from(i64::from(e) - i as i64))
            / BigRational::from_integer(BigInt::from(i as i64 + 1));
        tp *= t;
    }
    out
}

/// Expansion of `Π_{j<k} step(m − j)` as `x^{g k}·Σ s_i x^i` with `x = 1/m`, `len` terms.
fn lattice_ratio_in_x(step: &StepRatio, k: usize, len: usize) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); len];
    acc[0] = BigRational::one();
    for j in 0..k as i64 {
        for LinearFactor { slope, offset, exponent } in &step.factors {
            let alpha = BigRational::from_integer(BigInt::from(*slope));
            let shifted = BigRational::from_integer(BigInt::from(offset - slope * j));
            let t = shifted / &alpha;
            let lead = pow_signed(&alpha, *exponent);
            let factor: Vec<BigRational> = binomial_series(&t, *exponent, len)
                .into_iter()
                .map(|c| c * &lead)
                .collect();
            acc = series_mul(&acc, &factor);
        }
    }
    acc
}

/// Collects the term list into `e_1 ..= e_r`, expanding every linear factor
/// binomially in `1/m`. Only terms with `g·k ≤ r` reach order `r`.
pub fn inv_n_series(model: &ModelSpec, r: usize) -> Result<InvNSeries> {
    let (step, g) = rational_decay(model)?;
    if r < 1 {
        return Err(Error::BadTruncation { min: 1 });
    }
    let k_max = r / g;
    debug_assert!(g * (k_max + 1) > r);
    let delta = lattice_deltas(model, k_max.max(1))?;
    let mut e = vec![BigRational::zero(); r + 1];
    for (k, dk) in delta.iter().enumerate().take(k_max + 1).skip(1) {
        let shift = g * k;
        let body = lattice_ratio_in_x(step, k, r + 1 - shift);
        for (i, c) in body.into_iter().enumerate() {
            e[shift + i] += dk * c;
        }
    }
    e.remove(0);
    Ok(InvNSeries {
        model: model.id().to_string(),
        r,
        period: model.period(),
        coefficients: e,
    })
}

type Poly = Vec<BigRational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Second route: each term of `list` is written as a quotient of polynomials in
/// `m`, and the quotient is expanded at infinity by long division.
pub fn series_from_terms(list: &ExpansionTermList, r: usize) -> Result<InvNSeries> {
    let step = match list.model.shape() {
        TermShape::Rational(step) if list.model.ratio_kind() == RatioKind::RationalInN => step,
        _ => {
            return Err(Error::Classification {
                model: list.model.id().to_string(),
                kind: list.model.ratio_kind(),
            })
        }
    };
    let mut e = vec![BigRational::zero(); r + 1];
    for term in &list.terms {
        let mut num: Poly = vec![term.coefficient()];
        let mut den: Poly = vec![BigRational::one()];
        for j in 0..term.k as i64 {
            for f in &step.factors {
                let lin: Poly = vec![
                    BigRational::from_integer(BigInt::from(f.offset - f.slope * j)),
                    BigRational::from_integer(BigInt::from(f.slope)),
                ];
                for _ in 0..f.exponent.unsigned_abs() {
                    if f.exponent > 0 {
                        num = poly_mul(&num, &lin);
                    } else {
                        den = poly_mul(&den, &lin);
                    }
                }
            }
        }
        // N(m)/D(m) = x^{deg D − deg N} · rev(N)(x)/rev(D)(x), x = 1/m
        let shift = den.len() - num.len();
        if shift > r {
            continue;
        }
        let rn: Poly = num.into_iter().rev().collect();
        let rd: Poly = den.into_iter().rev().collect();
        let len = r + 1 - shift;
        let mut q = vec![BigRational::zero(); len];
        for i in 0..len {
            let mut acc = rn.get(i).cloned().unwrap_or_else(BigRational::zero);
            for j in 1..=i.min(rd.len() - 1) {
                acc -= &rd[j] * &q[i - j];
            }
            q[i] = acc / &rd[0];
        }
        for (i, c) in q.into_iter().enumerate() {
            e[shift + i] += c;
        }
    }
    e.remove(0);
    Ok(InvNSeries {
        model: list.model.id().to_string(),
        r,
        period: list.period,
        coefficients: e,
    })
}

/// First nonzero correction, for comparison with known leading terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeadingTerm {
    pub model: String,
    pub ratio_kind: RatioKind,
    /// Order `j` of the leading `1/m^j` term (rational models only).
    pub lattice_order: Option<usize>,
    #[serde(serialize_with = "option_rational")]
    pub lattice_coefficient: Option<BigRational>,
    /// The same term in the size variable `n = p·m`: `e_j·p^j / n^j`.
    #[serde(serialize_with = "option_rational")]
    pub size_coefficient: Option<BigRational>,
    pub expression: String,
}

fn option_rational<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Wrap<'a>(#[serde(serialize_with = "crate::rational_object")] &'a BigRational);
    match v {
        Some(x) => s.serialize_some(&Wrap(x)),
        None => s.serialize_none(),
    }
}

const LEADING_SEARCH_ORDER: usize = 16;

pub fn leading_term_report(model: &ModelSpec) -> Result<LeadingTerm> {
    if model.ratio_kind() == RatioKind::RationalInN {
        let series = inv_n_series(model, LEADING_SEARCH_ORDER)?;
        let sizes = series.size_coefficients();
        let j = series
            .coefficients
            .iter()
            .position(|e| !e.is_zero())
            .expect("a nonzero correction below the search order");
        let lat = series.coefficients[j].clone();
        let size = sizes[j].clone();
        let order = j + 1;
        let pow = |v: &str| if order == 1 { v.to_string() } else { format!("{v}^{order}") };
        let expression = if model.period() == 1 {
            format!("{lat}/{}", pow("n"))
        } else {
            format!("{lat}/{} = {size}/{}", pow("m"), pow("n"))
        };
        return Ok(LeadingTerm {
            model: model.id().to_string(),
            ratio_kind: model.ratio_kind(),
            lattice_order: Some(order),
            lattice_coefficient: Some(lat),
            size_coefficient: Some(size),
            expression,
        });
    }
    let mut r = 1;
    loop {
        let list = term_list(model, r)?;
        if let Some(t) = list.terms.iter().find(|t| !t.delta.is_zero()) {
            let expression = match (&t.factor, t.k) {
                (FactorForm::PowerOfBase { base }, 1) if t.coefficient().is_one() => {
                    format!("n·{base}^(1−n)")
                }
                _ => t.expression.clone(),
            };
            return Ok(LeadingTerm {
                model: model.id().to_string(),
                ratio_kind: model.ratio_kind(),
                lattice_order: None,
                lattice_coefficient: None,
                size_coefficient: None,
                expression,
            });
        }
        r += 1;
    }
}
