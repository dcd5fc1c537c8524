use super::*;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn counts(label: &str, period: usize, terms: impl IntoIterator<Item = BigInt>) -> CountingSequence {
    CountingSequence::new(label, period, terms.into_iter().collect()).unwrap()
}

fn graph_counts(max: usize) -> CountingSequence {
    counts("graph", 1, (0..=max).map(|n| BigInt::from(2).pow((n * n.saturating_sub(1) / 2) as u32)))
}

fn factorial_egf(order: usize) -> Series {
    Series::from_integers((0..=order).map(factorial))
}

#[test]
fn egf_of_graph_counts() {
    let egf = Series::from_counts(&graph_counts(3), 3).unwrap();
    assert_eq!(egf.coeffs(), &[q(1, 1), q(1, 1), q(1, 1), q(4, 3)]);
}

#[test]
fn egf_of_unit_sequence() {
    let seq = counts("unit", 1, [1, 0, 0, 0].map(BigInt::from));
    assert_eq!(Series::from_counts(&seq, 3).unwrap(), Series::one(3));
}

#[test]
fn egf_of_origami_counts() {
    let seq = counts("origami", 1, (0..=2).map(|n| factorial(n) * factorial(n)));
    assert_eq!(Series::from_counts(&seq, 2).unwrap(), Series::from_integers([1, 1, 2]));
}

#[test]
fn egf_order_beyond_data_names_required_length() {
    let err = Series::from_counts(&graph_counts(3), 5).unwrap_err();
    assert_eq!(
        err,
        SeriesError::InsufficientData {
            order: 5,
            required: 6,
            available: 4
        }
    );
}

#[test]
fn periodicity_is_enforced() {
    let err = CountingSequence::new("bad", 2, [1, 1, 2].map(BigInt::from).to_vec()).unwrap_err();
    assert!(matches!(err, SeriesError::Periodicity { index: 1, .. }));
}

#[test]
fn mul_small_cases() {
    let f = Series::from_integers([1, 1]);
    assert_eq!(f.mul(&f), Series::from_integers([1, 2]));
    let g = Series::from_integers([3, -1, 4, 1]);
    assert_eq!(g.mul(&Series::one(3)), g);
    // Mixed orders truncate to the shorter one.
    assert_eq!(g.mul(&Series::one(1)).order(), 1);
}

#[test]
fn exp_z_squared_is_exp_2z() {
    let order = 8;
    let exp_z = Series::new((0..=order).map(|n| BigRational::new(1.into(), factorial(n))).collect());
    let exp_2z = Series::new(
        (0..=order)
            .map(|n| BigRational::new(BigInt::from(2).pow(n as u32), factorial(n)))
            .collect(),
    );
    assert_eq!(exp_z.mul(&exp_z), exp_2z);
}

#[test]
fn log_of_zero_series_is_zero() {
    assert_eq!(Series::zero(6).log1p().unwrap(), Series::zero(6));
    assert_eq!(Series::zero(6).exp().unwrap(), Series::one(6));
}

#[test]
fn log_of_graph_egf_counts_connected_graphs() {
    // Connected labeled graphs on 1..4 vertices, by exhaustive enumeration: 1, 1, 4, 38.
    let a = Series::from_counts(&graph_counts(4), 4).unwrap();
    let c = (&a - &Series::one(4)).log1p().unwrap();
    let c = c.to_counts("connected graphs", 1).unwrap();
    assert_eq!(c.terms(), &[0, 1, 1, 4, 38].map(BigInt::from));
}

#[test]
fn log_of_origami_egf_counts_transitive_pairs() {
    // Transitive pairs of permutations of [n], n = 1..4, by union-find over all (n!)^2 pairs.
    let a = factorial_egf(4);
    let c = (&a - &Series::one(4)).log1p().unwrap().to_counts("co", 1).unwrap();
    assert_eq!(c.terms(), &[0, 1, 3, 26, 426].map(BigInt::from));
}

#[test]
fn log_rejects_nonzero_constant() {
    assert!(matches!(Series::one(3).log1p(), Err(SeriesError::Domain(_))));
    assert!(matches!(Series::one(3).exp(), Err(SeriesError::Domain(_))));
    assert!(matches!(Series::zero(3).reciprocal(), Err(SeriesError::Domain(_))));
}

#[test]
fn exp_of_log_recovers_graph_egf() {
    let a = Series::from_counts(&graph_counts(8), 8).unwrap();
    let back = (&a - &Series::one(8)).log1p().unwrap().exp().unwrap();
    assert_eq!(back, a);
}

/// Forests on `n` labeled vertices by brute force over all edge subsets.
fn count_forests(n: usize) -> u64 {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut total = 0;
    for mask in 0u32..(1 << pairs.len()) {
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut acyclic = true;
        for (e, &(a, b)) in pairs.iter().enumerate() {
            if mask >> e & 1 == 1 {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra == rb {
                    acyclic = false;
                    break;
                }
                parent[ra] = rb;
            }
        }
        total += acyclic as u64;
    }
    total
}

#[test]
fn exp_of_trees_counts_forests() {
    let order = 4;
    let trees = counts(
        "trees",
        1,
        (0..=order).map(|n| match n {
            0 => BigInt::zero(),
            1 => BigInt::one(),
            _ => BigInt::from(n).pow(n as u32 - 2),
        }),
    );
    let forests = Series::from_counts(&trees, order).unwrap().exp().unwrap().to_counts("forests", 1).unwrap();
    for n in 0..=order {
        assert_eq!(forests.terms()[n], BigInt::from(count_forests(n)), "n = {n}");
    }
}

#[test]
fn reciprocal_of_identity() {
    assert_eq!(Series::one(5).reciprocal().unwrap(), Series::one(5));
}

#[test]
fn reciprocal_of_factorial_series_gives_indecomposable_permutations() {
    let d = &Series::one(6) - &factorial_egf(6).reciprocal().unwrap();
    assert_eq!(d, Series::from_integers([0, 1, 1, 3, 13, 71, 461]));
}

#[test]
fn substitute_power_round_trip() {
    let f = Series::from_integers([1, 1, 3, 15]);
    assert_eq!(f.substitute_power(1), f);
    let g = f.substitute_power(2);
    assert_eq!(g.order(), 6);
    assert_eq!(g.coeffs()[4], q(3, 1));
    assert_eq!(g.coeffs()[3], q(0, 1));
    assert_eq!(g.stride(2), f);
}

#[test]
fn substitute_power_builds_map_egf() {
    // (2m-1)!! on the m lattice, spread to z^{2m}, equals n!(n-1)!!/n! on even sizes.
    let lattice = Series::from_integers((0..=4).map(|m| double_factorial(2 * m - 1)));
    let spread = lattice.substitute_power(2);
    for n in 0..=8usize {
        let direct = if n % 2 == 0 {
            BigRational::new(factorial(n) * double_factorial(n as i64 - 1), factorial(n))
        } else {
            BigRational::zero()
        };
        assert_eq!(spread.coeffs()[n], direct, "n = {n}");
    }
}

#[test]
fn newton_and_integration_routes_agree_with_recurrences() {
    let order = 14;
    let a = Series::from_counts(&graph_counts(order), order).unwrap();
    let u = &a - &Series::one(order);
    let log_rec = u.log1p().unwrap();
    assert_eq!(log1p_by_integration(&u).unwrap(), log_rec);
    assert_eq!(exp_by_newton(&log_rec).unwrap(), a);
    let o = factorial_egf(order);
    let uo = &o - &Series::one(order);
    assert_eq!(exp_by_newton(&uo).unwrap(), uo.exp().unwrap());
}

#[test]
fn graph_log_at_order_fifty_stays_integral() {
    let order = 50;
    let a = Series::from_counts(&graph_counts(order), order).unwrap();
    let c = (&a - &Series::one(order)).log1p().unwrap();
    assert!(has_integral_counts(&c));
}

#[test]
fn double_factorial_conventions() {
    assert_eq!(double_factorial(-1), BigInt::one());
    assert_eq!(double_factorial(1), BigInt::one());
    assert_eq!(double_factorial(7), BigInt::from(105));
    assert_eq!(binomial(10, 3), BigInt::from(120));
    assert_eq!(binomial(3, 5), BigInt::zero());
}

#[test]
fn display_is_readable() {
    let f = Series::new(vec![q(1, 1), q(-1, 2), q(0, 1), q(4, 3)]);
    assert_eq!(f.to_string(), "1 - 1/2*z + 4/3*z^3 + O(z^4)");
}

fn small_series(constant: std::ops::Range<i64>) -> impl Strategy<Value = Series> {
    (constant, prop::collection::vec((-9i64..10, 1i64..5), 1..=12)).prop_map(|(c0, rest)| {
        let mut coeffs = vec![BigRational::from_integer(c0.into())];
        coeffs.extend(rest.into_iter().map(|(n, d)| q(n, d)));
        Series::new(coeffs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn log_exp_round_trip(u in small_series(0..1)) {
        prop_assert_eq!(u.exp().unwrap().log1p_shifted(), u.clone());
        let l = u.log1p().unwrap();
        prop_assert_eq!(&l.exp().unwrap() - &Series::one(u.order()), u);
    }

    #[test]
    fn reciprocal_is_inverse(f in small_series(1..6)) {
        let r = f.reciprocal().unwrap();
        prop_assert_eq!(f.mul(&r), Series::one(f.order()));
    }

    #[test]
    fn truncation_commutes_with_log(u in small_series(0..1), cut in 0usize..12) {
        let cut = cut.min(u.order());
        prop_assert_eq!(u.log1p().unwrap().truncate(cut), u.truncate(cut).log1p().unwrap());
        prop_assert_eq!(u.exp().unwrap().truncate(cut), u.truncate(cut).exp().unwrap());
    }
}

impl Series {
    /// `log(self)` for a series with constant term 1 (test helper).
    fn log1p_shifted(&self) -> Series {
        (self - &Series::one(self.order())).log1p().unwrap()
    }
}
