use connexp::bigseries::{factorial, Series};
use connexp::decomp::{derivative_coeffs, derivative_from_partitions};
use connexp::expansion::{exact_probability, inv_n_series, series_from_terms, term_list};
use connexp::models::{builtin, custom_from_json, default_builtins, Params};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn custom<T: ToString>(terms: &[T]) -> connexp::models::ModelSpec {
    let body: Vec<String> = terms.iter().map(|t| format!("\"{}\"", t.to_string())).collect();
    custom_from_json(&format!(r#"{{"label":"t","period":1,"terms":[{}]}}"#, body.join(","))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integer_sequences_decompose_integrally(tail in proptest::collection::vec(1u64..1_000_000, 3..10)) {
        let mut terms = vec![1u64];
        terms.extend(tail);
        let model = custom(&terms);
        let order = terms.len() - 1;
        let d = derivative_coeffs(&model, order).unwrap();
        prop_assert!(d.derivative.is_some());
        let a = Series::from_counts(&d.base, order).unwrap();
        let c = Series::from_counts(&d.connected, order).unwrap();
        prop_assert_eq!(c.exp().unwrap(), a.clone());
        let dser = Series::new(d.delta.clone());
        prop_assert_eq!(&Series::one(order) + &a.mul(&dser), a);
        for k in 1..=order {
            let lifted = &d.delta[k] * BigRational::from_integer(factorial(k));
            prop_assert_eq!(derivative_from_partitions(&d.connected, k), lifted);
        }
    }

    #[test]
    fn probabilities_lie_in_unit_interval(idx in 0usize..16, n in 1usize..14) {
        let model = &default_builtins()[idx];
        let size = n * model.period();
        let p = exact_probability(model, size).unwrap();
        prop_assert!(!p.is_negative() && p <= BigRational::one());
    }
}

#[test]
fn periodic_terms_match_compressed_lattice() {
    let cm = builtin("comb_map", &Params::new()).unwrap();
    // b_m = m!·a_{2m}/(2m)! on the compressed lattice
    let compressed: Vec<BigInt> = (0..=20usize)
        .map(|m| {
            let a = cm.count(2 * m).unwrap();
            let b = BigRational::new(a * factorial(m), factorial(2 * m));
            assert!(b.is_integer());
            b.to_integer()
        })
        .collect();
    let flat = custom(&compressed);
    let periodic = term_list(&cm, 8).unwrap();
    let lattice = term_list(&flat, 8).unwrap();
    for (a, b) in periodic.terms.iter().zip(&lattice.terms) {
        assert_eq!(a.k, b.k);
        assert_eq!(a.delta, b.delta);
    }
    for m in 9..20 {
        let lhs = periodic.evaluate_at(2 * m).unwrap();
        let rhs = lattice.evaluate_at(m).unwrap();
        assert_eq!(lhs, rhs, "m = {m}");
    }
}

#[test]
fn term_list_and_series_agree() {
    for id in ["triangulation", "quadrangulation", "quad_sts", "gem3", "comb_map"] {
        let model = builtin(id, &Params::new()).unwrap();
        for r in 1..=5 {
            let a = inv_n_series(&model, r).unwrap();
            let b = series_from_terms(&term_list(&model, r).unwrap(), r).unwrap();
            assert_eq!(a, b, "{id} r = {r}");
        }
    }
}

#[test]
fn truncation_error_shrinks() {
    for id in ["triangulation", "gem3", "comb_map"] {
        let model = builtin(id, &Params::new()).unwrap();
        let p = model.period();
        let s = inv_n_series(&model, 4).unwrap();
        for r in 1..=4usize {
            let t = s.truncated(r);
            let err = |m: usize| (exact_probability(&model, p * m).unwrap() - t.evaluate(m)).abs();
            // err(2n)/err(n) ≤ 2^{−(r+1)}·1.25
            let shrink = err(32) / err(16);
            let bound = BigRational::new(BigInt::from(5), BigInt::from(4u64 << (r + 1)));
            assert!(shrink <= bound, "{id} r = {r}");
        }
    }
}
