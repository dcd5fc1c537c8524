//! Registry of labeled classes given by closed-form counting sequences,
//! plus user-supplied sequences loaded from JSON.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bigseries::{double_factorial, factorial, CountingSequence, Series, SeriesError};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("invalid parameters for `{model}`: {reason}")]
    InvalidParams { model: String, reason: String },
    #[error("custom sequence: malformed JSON: {0}")]
    MalformedJson(String),
    #[error("custom sequence: field `{field}` {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error("custom sequence: terms[0] must be 1, found {0}")]
    FirstTermNotOne(BigInt),
    #[error("custom sequence: terms[{index}] is nonzero but {index} is not a multiple of period {period}")]
    PeriodicityViolation { index: usize, period: usize },
    #[error("custom sequence: cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("model `{model}` only has terms up to n = {available}, n = {requested} requested")]
    OutOfRange {
        model: String,
        requested: usize,
        available: usize,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// How `C(n,k)·a_{n-k}/a_n` behaves for fixed `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RatioKind {
    /// A rational function of `n` (factorial and double-factorial growth).
    RationalInN,
    /// Exponential decay in `n`, e.g. `2^{-kn}` for graphs.
    ExponentialInN,
}

impl fmt::Display for RatioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatioKind::RationalInN => "RATIONAL_IN_N",
            RatioKind::ExponentialInN => "EXPONENTIAL_IN_N",
        })
    }
}

/// `(slope·m + offset)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearFactor {
    pub slope: i64,
    pub offset: i64,
    pub exponent: i32,
}

impl LinearFactor {
    pub const fn new(slope: i64, offset: i64, exponent: i32) -> Self {
        Self {
            slope,
            offset,
            exponent,
        }
    }

    pub fn eval(&self, m: i64) -> BigRational {
        let base = BigRational::from_integer(BigInt::from(self.slope * m + self.offset));
        pow_signed(&base, self.exponent)
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = match (self.slope, self.offset) {
            (1, 0) => "m".to_string(),
            (s, 0) => format!("{s}m"),
            (1, o) if o < 0 => format!("(m - {})", -o),
            (1, o) => format!("(m + {o})"),
            (s, o) if o < 0 => format!("({s}m - {})", -o),
            (s, o) => format!("({s}m + {o})"),
        };
        match self.exponent {
            1 => f.write_str(&inner),
            e => write!(f, "{inner}^{e}"),
        }
    }
}

pub(crate) fn pow_signed(base: &BigRational, exponent: i32) -> BigRational {
    let p = num_traits::pow(base.clone(), exponent.unsigned_abs() as usize);
    if exponent < 0 {
        p.recip()
    } else {
        p
    }
}

/// The one-step ratio `q_{m-1}/q_m = Π (slope·m + offset)^exponent` of the
/// lattice EGF coefficients `q_m = a_{pm}/(pm)!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRatio {
    pub factors: Vec<LinearFactor>,
}

impl StepRatio {
    pub fn new(factors: Vec<LinearFactor>) -> Self {
        Self { factors }
    }

    /// Net power of `1/m` contributed by one step.
    pub fn decay_order(&self) -> i64 {
        -self.factors.iter().map(|f| i64::from(f.exponent)).sum::<i64>()
    }

    pub fn eval(&self, m: i64) -> BigRational {
        self.factors
            .iter()
            .fold(BigRational::one(), |acc, f| acc * f.eval(m))
    }

    /// `q_{m-k}/q_m = Π_{j<k} step(m - j)`.
    pub fn lattice_ratio(&self, m: i64, k: usize) -> BigRational {
        (0..k as i64).fold(BigRational::one(), |acc, j| acc * self.eval(m - j))
    }
}

impl fmt::Display for StepRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num: Vec<String> = self
            .factors
            .iter()
            .filter(|x| x.exponent > 0)
            .map(|x| x.to_string())
            .collect();
        let den: Vec<String> = self
            .factors
            .iter()
            .filter(|x| x.exponent < 0)
            .map(|x| LinearFactor::new(x.slope, x.offset, -x.exponent).to_string())
            .collect();
        let num = if num.is_empty() { "1".to_string() } else { num.join("·") };
        if den.is_empty() {
            f.write_str(&num)
        } else {
            write!(f, "{num}/({})", den.join("·"))
        }
    }
}

/// Closed form of the `k`-th term factor of the expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermShape {
    /// `δ_k · Π_{j<k} step(m - j)` on the lattice index `m`.
    Rational(StepRatio),
    /// `d_k · C(n,k) · base^{k(k+1)/2 - kn}`.
    PowerOfBase { base: u32 },
    /// Only the numeric ratio `C(pn,pk)·a_{p(n-k)}/a_{pn}` is available.
    Tabulated,
}

/// Enumerator that counts the connected objects of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ConnectedOracle {
    Multigraphs { d: u32 },
    TransitiveTuples { arity: u32 },
    CombinatorialMaps,
}

/// Enumerator that counts the derivative (SEQ-irreducible) class of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DerivativeOracle {
    IrreducibleMultitournaments { d: u32 },
    IndecomposableMultipermutations { arity: u32 },
    IndecomposableMatchings,
}

/// Which derivative number counts the known class: the integer `d_{pk}`, or the
/// lattice coefficient `δ_{pk} = d_{pk}/(pk)!` after removing the relabeling lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeReading {
    Integer,
    Lattice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivativeClass {
    pub name: String,
    pub reading: DerivativeReading,
    pub oracle: Option<DerivativeOracle>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Family {
    Multigraph { d: u32 },
    Multilinear { d: u32 },
    CombMap,
    Ogem { dim: u32 },
    Constellation { d: u32 },
    Triangulation,
    Quadrangulation,
    QuadSts,
    Gem3,
    Custom { terms: Arc<Vec<BigInt>> },
}

/// A labeled class known through its counting sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    id: String,
    family: Family,
    period: usize,
    ratio_kind: RatioKind,
    seq_class_known: bool,
    shape: TermShape,
    connected_oracle: Option<ConnectedOracle>,
    derivative_class: Option<DerivativeClass>,
    description: String,
}

/// Names accepted by [`builtin`].
pub const BUILTIN_IDS: &[&str] = &[
    "multigraph",
    "graph",
    "oriented_graph",
    "digraph",
    "origami",
    "multilinear",
    "comb_map",
    "ogem",
    "constellation",
    "triangulation",
    "quadrangulation",
    "quad_sts",
    "gem3",
];

pub type Params = BTreeMap<String, i64>;

fn take_param(
    model: &str,
    params: &Params,
    key: &str,
    min: i64,
) -> Result<u32, ModelError> {
    let value = *params.get(key).ok_or_else(|| ModelError::InvalidParams {
        model: model.to_string(),
        reason: format!("missing parameter `{key}`"),
    })?;
    if value < min || value > 64 {
        return Err(ModelError::InvalidParams {
            model: model.to_string(),
            reason: format!("`{key}` must lie in {min}..=64, got {value}"),
        });
    }
    Ok(value as u32)
}

fn check_keys(model: &str, params: &Params, allowed: &[&str]) -> Result<(), ModelError> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(ModelError::InvalidParams {
            model: model.to_string(),
            reason: format!("unexpected parameter `{k}`"),
        }),
        None => Ok(()),
    }
}

fn m_power(exponent: i32) -> StepRatio {
    StepRatio::new(vec![LinearFactor::new(1, 0, exponent)])
}

/// Looks up a builtin model.
pub fn builtin(id: &str, params: &Params) -> Result<ModelSpec, ModelError> {
    let spec = match id {
        "graph" | "oriented_graph" | "digraph" => {
            check_keys(id, params, &[])?;
            let d = match id {
                "graph" => 1,
                "oriented_graph" => 2,
                _ => 3,
            };
            multigraph(id.to_string(), d)
        }
        "multigraph" => {
            check_keys(id, params, &["d"])?;
            let d = take_param(id, params, "d", 1)?;
            multigraph(format!("multigraph(d={d})"), d)
        }
        "origami" => {
            check_keys(id, params, &[])?;
            let mut spec = multilinear("origami".to_string(), 2);
            spec.description = "pairs of permutations (square-tiled translation surfaces)".into();
            spec
        }
        "multilinear" => {
            check_keys(id, params, &["d"])?;
            let d = take_param(id, params, "d", 2)?;
            multilinear(format!("multilinear(d={d})"), d)
        }
        "comb_map" => {
            check_keys(id, params, &[])?;
            ModelSpec {
                id: id.to_string(),
                family: Family::CombMap,
                period: 2,
                ratio_kind: RatioKind::RationalInN,
                seq_class_known: true,
                shape: TermShape::Rational(StepRatio::new(vec![LinearFactor::new(2, -1, -1)])),
                connected_oracle: Some(ConnectedOracle::CombinatorialMaps),
                derivative_class: Some(DerivativeClass {
                    name: "indecomposable perfect matchings".into(),
                    reading: DerivativeReading::Lattice,
                    oracle: Some(DerivativeOracle::IndecomposableMatchings),
                }),
                description: "combinatorial maps (σ, α) with α a fixed-point-free involution".into(),
            }
        }
        "ogem" => {
            check_keys(id, params, &["D"])?;
            let dim = take_param(id, params, "D", 2)?;
            ModelSpec {
                id: format!("ogem(D={dim})"),
                family: Family::Ogem { dim },
                period: 2,
                ratio_kind: RatioKind::RationalInN,
                seq_class_known: true,
                shape: TermShape::Rational(m_power(-(dim as i32 - 1))),
                connected_oracle: None,
                derivative_class: Some(DerivativeClass {
                    name: format!("indecomposable {}-multipermutations", dim - 1),
                    reading: DerivativeReading::Lattice,
                    oracle: Some(DerivativeOracle::IndecomposableMultipermutations { arity: dim - 1 }),
                }),
                description: format!("orientable graph-encoded manifolds of dimension {dim}"),
            }
        }
        "constellation" => {
            check_keys(id, params, &["d"])?;
            let d = take_param(id, params, "d", 3)?;
            ModelSpec {
                id: format!("constellation(d={d})"),
                family: Family::Constellation { d },
                period: 1,
                ratio_kind: RatioKind::RationalInN,
                seq_class_known: true,
                shape: TermShape::Rational(m_power(-(d as i32 - 2))),
                connected_oracle: Some(ConnectedOracle::TransitiveTuples { arity: d - 1 }),
                derivative_class: Some(DerivativeClass {
                    name: format!("indecomposable {}-multipermutations", d - 2),
                    reading: DerivativeReading::Lattice,
                    oracle: Some(DerivativeOracle::IndecomposableMultipermutations { arity: d - 2 }),
                }),
                description: format!(
                    "{}-tuples of permutations; connected objects are {d}-constellations",
                    d - 1
                ),
            }
        }
        "triangulation" => unexplained(
            id,
            Family::Triangulation,
            2,
            vec![
                LinearFactor::new(2, 0, 1),
                LinearFactor::new(2, -1, 1),
                LinearFactor::new(6, -1, -1),
                LinearFactor::new(6, -3, -1),
                LinearFactor::new(6, -5, -1),
            ],
            "gluings of 2m triangles: Σ (6m-1)!! z^{2m}/(2m)!",
            params,
        )?,
        "quadrangulation" => unexplained(
            id,
            Family::Quadrangulation,
            1,
            vec![
                LinearFactor::new(1, 0, 1),
                LinearFactor::new(4, -1, -1),
                LinearFactor::new(4, -3, -1),
            ],
            "gluings of n quadrangles: Σ (4n-1)!! z^n/n!",
            params,
        )?,
        "quad_sts" => unexplained(
            id,
            Family::QuadSts,
            1,
            vec![LinearFactor::new(1, 0, 1), LinearFactor::new(2, -1, -2)],
            "quadratic square-tiled surfaces: Σ ((2n-1)!!)^2 z^n/n!",
            params,
        )?,
        "gem3" => unexplained(
            id,
            Family::Gem3,
            2,
            vec![LinearFactor::new(2, 0, 1), LinearFactor::new(2, -1, -3)],
            "graph-encoded manifolds of dimension 3: Σ ((2m-1)!!)^4 z^{2m}/(2m)!",
            params,
        )?,
        other => return Err(ModelError::UnknownModel(other.to_string())),
    };
    debug_assert!(spec.shape_matches_kind());
    Ok(spec)
}

fn multigraph(id: String, d: u32) -> ModelSpec {
    ModelSpec {
        id,
        family: Family::Multigraph { d },
        period: 1,
        ratio_kind: RatioKind::ExponentialInN,
        seq_class_known: true,
        shape: TermShape::PowerOfBase { base: d + 1 },
        connected_oracle: Some(ConnectedOracle::Multigraphs { d }),
        derivative_class: Some(DerivativeClass {
            name: format!("irreducible {d}-multitournaments"),
            reading: DerivativeReading::Integer,
            oracle: Some(DerivativeOracle::IrreducibleMultitournaments { d }),
        }),
        description: format!("labeled {d}-multigraphs: (d+1)^C(n,2)"),
    }
}

fn multilinear(id: String, d: u32) -> ModelSpec {
    ModelSpec {
        id,
        family: Family::Multilinear { d },
        period: 1,
        ratio_kind: RatioKind::RationalInN,
        seq_class_known: true,
        shape: TermShape::Rational(m_power(-(d as i32 - 1))),
        connected_oracle: Some(ConnectedOracle::TransitiveTuples { arity: d }),
        derivative_class: Some(DerivativeClass {
            name: if d == 2 {
                "indecomposable permutations".into()
            } else {
                format!("indecomposable {}-multipermutations", d - 1)
            },
            reading: DerivativeReading::Lattice,
            oracle: Some(DerivativeOracle::IndecomposableMultipermutations { arity: d - 1 }),
        }),
        description: format!("{d}-tuples of permutations (d-multiple linear orders): (n!)^d"),
    }
}

fn unexplained(
    id: &str,
    family: Family,
    period: usize,
    factors: Vec<LinearFactor>,
    description: &str,
    params: &Params,
) -> Result<ModelSpec, ModelError> {
    check_keys(id, params, &[])?;
    Ok(ModelSpec {
        id: id.to_string(),
        family,
        period,
        ratio_kind: RatioKind::RationalInN,
        seq_class_known: false,
        shape: TermShape::Rational(StepRatio::new(factors)),
        connected_oracle: None,
        derivative_class: None,
        description: description.to_string(),
    })
}

/// Every builtin with default parameters, plus a few parameterized instances.
pub fn default_builtins() -> Vec<ModelSpec> {
    let with = |id: &str, key: &str, v: i64| {
        let mut p = Params::new();
        p.insert(key.to_string(), v);
        builtin(id, &p).expect("registry parameters are valid")
    };
    let plain = |id: &str| builtin(id, &Params::new()).expect("registry ids are valid");
    vec![
        plain("graph"),
        plain("oriented_graph"),
        plain("digraph"),
        with("multigraph", "d", 4),
        plain("origami"),
        with("multilinear", "d", 3),
        plain("comb_map"),
        with("ogem", "D", 2),
        with("ogem", "D", 3),
        with("ogem", "D", 4),
        with("constellation", "d", 3),
        with("constellation", "d", 4),
        plain("triangulation"),
        plain("quadrangulation"),
        plain("quad_sts"),
        plain("gem3"),
    ]
}

impl ModelSpec {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn ratio_kind(&self) -> RatioKind {
        self.ratio_kind
    }

    pub fn seq_class_known(&self) -> bool {
        self.seq_class_known
    }

    pub fn shape(&self) -> &TermShape {
        &self.shape
    }

    pub fn connected_oracle(&self) -> Option<ConnectedOracle> {
        self.connected_oracle
    }

    pub fn derivative_class(&self) -> Option<&DerivativeClass> {
        self.derivative_class.as_ref()
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.family, Family::Custom { .. })
    }

    /// Largest `n` for which [`ModelSpec::count`] is defined.
    pub fn max_n(&self) -> Option<usize> {
        match &self.family {
            Family::Custom { terms } => Some(terms.len() - 1),
            _ => None,
        }
    }

    /// `a_n`.
    pub fn count(&self, n: usize) -> Result<BigInt, ModelError> {
        if n % self.period != 0 {
            return Ok(BigInt::zero());
        }
        let m = n / self.period;
        let value = match &self.family {
            Family::Multigraph { d } => {
                num_traits::pow(BigInt::from(d + 1), n * n.saturating_sub(1) / 2)
            }
            Family::Multilinear { d } => num_traits::pow(factorial(n), *d as usize),
            Family::Constellation { d } => num_traits::pow(factorial(n), *d as usize - 1),
            Family::CombMap => factorial(n) * double_factorial(n as i64 - 1),
            Family::Ogem { dim } => factorial(n) * num_traits::pow(factorial(m), *dim as usize - 1),
            Family::Triangulation => double_factorial(6 * m as i64 - 1),
            Family::Quadrangulation => double_factorial(4 * m as i64 - 1),
            Family::QuadSts => num_traits::pow(double_factorial(2 * m as i64 - 1), 2),
            Family::Gem3 => num_traits::pow(double_factorial(2 * m as i64 - 1), 4),
            Family::Custom { terms } => terms.get(n).cloned().ok_or(ModelError::OutOfRange {
                model: self.id.clone(),
                requested: n,
                available: terms.len() - 1,
            })?,
        };
        Ok(value)
    }

    /// `a_0 ..= a_max` as a counting sequence.
    pub fn counts(&self, max: usize) -> Result<CountingSequence, ModelError> {
        let terms = (0..=max).map(|n| self.count(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(CountingSequence::new(self.id.clone(), self.period, terms)?)
    }

    /// Lattice coefficient `q_m = a_{pm} / (pm)!`.
    pub fn lattice_coeff(&self, m: usize) -> Result<BigRational, ModelError> {
        let n = self.period * m;
        Ok(BigRational::new(self.count(n)?, factorial(n)))
    }

    /// The compressed EGF `Σ_m q_m w^m` up to `w^{max_m}`.
    pub fn lattice_egf(&self, max_m: usize) -> Result<Series, ModelError> {
        let coeffs = (0..=max_m)
            .map(|m| self.lattice_coeff(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Series::new(coeffs))
    }

    fn shape_matches_kind(&self) -> bool {
        match (&self.shape, self.ratio_kind) {
            (TermShape::Rational(step), RatioKind::RationalInN) => step.decay_order() >= 1,
            (TermShape::PowerOfBase { .. } | TermShape::Tabulated, RatioKind::ExponentialInN) => true,
            _ => false,
        }
    }
}

/// Loads a custom sequence from `{"label": str, "period": int, "terms": [int | str, ...]}`.
pub fn custom_from_file(path: impl AsRef<Path>) -> Result<ModelSpec, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })?;
    custom_from_json(&text)
}

/// Parses the custom-sequence JSON document; see [`custom_from_file`].
pub fn custom_from_json(text: &str) -> Result<ModelSpec, ModelError> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ModelError::MalformedJson(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| ModelError::MalformedJson("top level must be an object".into()))?;
    let label = obj
        .get("label")
        .and_then(|v| v.as_str())
        .ok_or(ModelError::InvalidField {
            field: "label",
            reason: "must be a string".into(),
        })?
        .to_string();
    let period = obj
        .get("period")
        .and_then(|v| v.as_u64())
        .filter(|&p| p >= 1)
        .ok_or(ModelError::InvalidField {
            field: "period",
            reason: "must be a positive integer".into(),
        })? as usize;
    let raw_terms = obj
        .get("terms")
        .and_then(|v| v.as_array())
        .filter(|t| !t.is_empty())
        .ok_or(ModelError::InvalidField {
            field: "terms",
            reason: "must be a non-empty array".into(),
        })?;
    let mut terms = Vec::with_capacity(raw_terms.len());
    for (i, v) in raw_terms.iter().enumerate() {
        let digits = match v {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.trim().to_string(),
            _ => {
                return Err(ModelError::InvalidField {
                    field: "terms",
                    reason: format!("entry {i} is neither a number nor a string"),
                })
            }
        };
        let value: BigInt = digits.parse().map_err(|_| ModelError::InvalidField {
            field: "terms",
            reason: format!("entry {i} (`{digits}`) is not an integer"),
        })?;
        if value.is_negative() {
            return Err(ModelError::InvalidField {
                field: "terms",
                reason: format!("entry {i} is negative"),
            });
        }
        terms.push(value);
    }
    if !terms[0].is_one() {
        return Err(ModelError::FirstTermNotOne(terms[0].clone()));
    }
    if let Some(index) = (0..terms.len()).find(|&n| n % period != 0 && !terms[n].is_zero()) {
        return Err(ModelError::PeriodicityViolation { index, period });
    }
    if let Some(index) = (0..terms.len()).find(|&n| n % period == 0 && terms[n].is_zero()) {
        return Err(ModelError::InvalidField {
            field: "terms",
            reason: format!("terms[{index}] is zero on the lattice; counts must be positive there"),
        });
    }
    Ok(ModelSpec {
        id: format!("custom:{label}"),
        family: Family::Custom {
            terms: Arc::new(terms),
        },
        period,
        ratio_kind: RatioKind::ExponentialInN,
        seq_class_known: false,
        shape: TermShape::Tabulated,
        connected_oracle: None,
        derivative_class: None,
        description: format!("user-supplied sequence `{label}`"),
    })
}
