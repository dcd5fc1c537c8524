//! Cross-checks of the series computations against brute-force enumeration.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::decomp::{derivative_coeffs, derivative_from_partitions};
use crate::error::Result;
use crate::models::{ConnectedOracle, DerivativeOracle, ModelSpec};
use crate::oracle::{self, EnumResult, OracleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Total number of objects of size `n`.
    Total,
    /// Connected objects of size `n`.
    Connected,
    /// Derivative class at lattice index `k` (size `p·k`).
    Derivative,
    /// `d_n` by inclusion–exclusion against `d_n` from the reciprocal.
    PartitionFormula,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Total => "total",
            Quantity::Connected => "connected",
            Quantity::Derivative => "derivative",
            Quantity::PartitionFormula => "partition formula",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub quantity: Quantity,
    pub index: usize,
    pub size: usize,
    #[serde(serialize_with = "crate::rational_object")]
    pub computed: BigRational,
    #[serde(serialize_with = "crate::rational_object")]
    pub reference: BigRational,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub quantity: Quantity,
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub model: String,
    pub max_n: usize,
    pub rows: Vec<CheckRow>,
    pub skipped: Vec<Skipped>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn first_mismatch(&self) -> Option<&CheckRow> {
        self.rows.iter().find(|r| !r.matched)
    }
}

fn int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

fn connected_oracle(o: ConnectedOracle, n: usize) -> Result<EnumResult, OracleError> {
    match o {
        ConnectedOracle::Multigraphs { d } => oracle::count_connected_graphs(n, d),
        ConnectedOracle::TransitiveTuples { arity } => oracle::count_transitive_tuples(n, arity),
        ConnectedOracle::CombinatorialMaps => oracle::count_connected_maps(n),
    }
}

fn derivative_oracle(o: DerivativeOracle, k: usize) -> Result<EnumResult, OracleError> {
    match o {
        DerivativeOracle::IrreducibleMultitournaments { d } => oracle::count_irreducible_tournaments(k, d),
        DerivativeOracle::IndecomposableMultipermutations { arity: 1 } => {
            oracle::count_indecomposable_permutations(k)
        }
        DerivativeOracle::IndecomposableMultipermutations { arity } => {
            oracle::count_indecomposable_multipermutations(k, arity)
        }
        DerivativeOracle::IndecomposableMatchings => oracle::count_indecomposable_matchings(k),
    }
}

/// Whether the model has at least one enumerator.
pub fn has_oracle(model: &ModelSpec) -> bool {
    model.connected_oracle().is_some()
        || model
            .derivative_class()
            .is_some_and(|c| c.oracle.is_some())
}

/// Compares totals, connected counts and derivative counts with the
/// enumerators for every size up to `max_n`, and the partition formula with
/// the reciprocal series. Sizes beyond an enumeration budget are listed as skipped.
pub fn verify_model(model: &ModelSpec, max_n: usize) -> Result<VerifyReport> {
    let p = model.period();
    let derived = derivative_coeffs(model, max_n)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut push = |quantity, index, size, computed: BigRational, reference: BigRational| {
        let matched = computed == reference;
        rows.push(CheckRow {
            quantity,
            index,
            size,
            computed,
            reference,
            matched,
        });
    };

    if let Some(o) = model.connected_oracle() {
        for n in (p..=max_n).step_by(p) {
            match connected_oracle(o, n) {
                Ok(res) => {
                    push(Quantity::Total, n, n, int(&derived.base.terms()[n]), int(&res.total));
                    push(
                        Quantity::Connected,
                        n,
                        n,
                        int(&derived.connected.terms()[n]),
                        int(&res.connected_or_irreducible),
                    );
                }
                Err(e) => skipped.push(Skipped {
                    quantity: Quantity::Connected,
                    index: n,
                    reason: e.to_string(),
                }),
            }
        }
    }

    if let Some(o) = model.derivative_class().and_then(|c| c.oracle) {
        for k in 1..=max_n / p {
            let computed = derived
                .interpreted(p * k)
                .expect("derivative class present");
            match derivative_oracle(o, k) {
                Ok(res) => push(Quantity::Derivative, k, p * k, computed, int(&res.connected_or_irreducible)),
                Err(e) => skipped.push(Skipped {
                    quantity: Quantity::Derivative,
                    index: k,
                    reason: e.to_string(),
                }),
            }
        }
    }

    let fact = |n: usize| (1..=n).fold(BigInt::from(1), |a, x| a * x);
    for n in 1..=max_n {
        let reciprocal = &derived.delta[n] * int(&fact(n));
        push(
            Quantity::PartitionFormula,
            n,
            n,
            reciprocal,
            derivative_from_partitions(&derived.connected, n),
        );
    }

    let pass = rows.iter().all(|r| r.matched);
    Ok(VerifyReport {
        model: model.id().to_string(),
        max_n,
        rows,
        skipped,
        pass,
    })
}
