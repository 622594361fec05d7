mod support;

use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;

use factorbound::exactnum::QuadraticIrrational;
use factorbound::sturmian::{self, characteristic_bit, SturmianSpec};
use support::{fibonacci_word, mechanical_by_intervals, qi};

const ALPHAS: [&str; 5] = ["(3-sqrt(5))/2", "sqrt(2)-1", "(sqrt(3)-1)/2", "(sqrt(5)-1)/2", "sqrt(7)-2"];

fn spec(alpha: &str) -> SturmianSpec {
    SturmianSpec::characteristic(qi(alpha)).unwrap()
}

#[test]
fn fibonacci_slope_gives_fibonacci_word() {
    let word = sturmian::prefix(&spec(ALPHAS[0]), 2_000);
    assert_eq!(&word[..8], b"01001010");
    assert_eq!(word, fibonacci_word(2_000).as_bytes());
}

#[test]
fn prefixes_match_interval_oracle() {
    for alpha in ALPHAS {
        for beta in ["0", "1/2", "(sqrt(5)-1)/4"] {
            let beta = qi(beta);
            let alpha = qi(alpha);
            let Ok(spec) = SturmianSpec::new(alpha.clone(), beta.clone()) else { continue };
            let oracle = mechanical_by_intervals(&alpha, &beta, 3_000);
            assert_eq!(sturmian::prefix(&spec, 3_000), oracle.as_bytes());
        }
    }
}

#[test]
fn characteristic_rule() {
    // zero-based word bit n is 1 iff {(n+2)α} < α; the rule written with
    // (n+1) describes the same word with one extra leading 0
    for alpha in ALPHAS {
        let a = qi(alpha);
        let s = spec(alpha);
        for n in 0..500u64 {
            let x = a.mul_int(&BigInt::from(n + 2)).frac();
            let expected = u8::from(x.compare(&a).unwrap() == Ordering::Less);
            assert_eq!(characteristic_bit(&a, n).unwrap(), expected);
            assert_eq!(sturmian::mechanical_bit(&s, n + 1), expected);
        }
    }
}

#[test]
fn complexity_is_n_plus_one() {
    for alpha in ALPHAS {
        let s = spec(alpha);
        for n in 1..=12 {
            let set = sturmian::factor_set(&s, n);
            assert!(set.certified);
            assert_eq!(set.len(), n + 1, "alpha {alpha} n {n}");
        }
    }
}

#[test]
fn balanced() {
    for alpha in ALPHAS {
        let s = spec(alpha);
        for n in 1..=12 {
            let ones: Vec<usize> = sturmian::factor_set(&s, n)
                .factors
                .iter()
                .map(|w| w.iter().filter(|&&c| c == b'1').count())
                .collect();
            let (lo, hi) = (ones.iter().min().unwrap(), ones.iter().max().unwrap());
            assert!(hi - lo <= 1, "alpha {alpha} n {n}");
        }
    }
}

#[test]
fn frequency_within_one_over_n() {
    for alpha in ALPHAS {
        let s = spec(alpha);
        let a = qi(alpha);
        for n in [100u64, 1_000, 10_000, 100_000] {
            // |ones − Nα| < 1, compared exactly
            let count = sturmian::ones_count(&s, n);
            let excess = QuadraticIrrational::from_integer(count).try_sub(&a.mul_int(&BigInt::from(n))).unwrap();
            let abs = if excess.signum() == Ordering::Less { -excess } else { excess };
            assert_eq!(abs.compare(&QuadraticIrrational::one()).unwrap(), Ordering::Less);
        }
    }
}

#[test]
fn ones_count_matches_prefix() {
    let s = spec(ALPHAS[2]);
    let word = sturmian::prefix(&s, 5_000);
    for n in [0usize, 1, 7, 100, 4_999, 5_000] {
        let direct = word[..n].iter().filter(|&&c| c == b'1').count();
        assert_eq!(sturmian::ones_count(&s, n as u64), BigInt::from(direct));
    }
}

#[test]
fn factors_do_not_depend_on_beta() {
    for alpha in ALPHAS {
        let zero = spec(alpha);
        let half = SturmianSpec::new(qi(alpha), qi("1/2")).unwrap();
        for n in 1..=10 {
            assert_eq!(sturmian::factor_set(&zero, n).factors, sturmian::factor_set(&half, n).factors);
        }
    }
}

#[test]
fn spec_validation() {
    assert!(SturmianSpec::characteristic(qi("1/2")).is_err());
    assert!(SturmianSpec::characteristic(qi("sqrt(2)")).is_err());
    assert!(SturmianSpec::new(qi("sqrt(2)-1"), qi("3/2")).is_err());
    let text = "alpha=(3-1*sqrt(5))/2 beta=(0+0*sqrt(5))/1";
    let parsed: SturmianSpec = text.parse().unwrap();
    assert_eq!(parsed, spec(ALPHAS[0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_slopes_have_minimal_complexity(seed in any::<u64>(), n in 1usize..10) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let alpha = support::random_unit_qi(&mut rng);
        let s = SturmianSpec::characteristic(alpha).unwrap();
        let set = sturmian::factor_set(&s, n);
        prop_assert!(set.certified);
        prop_assert_eq!(set.len(), n + 1);
    }

    #[test]
    fn spec_string_round_trips(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let alpha = support::random_unit_qi(&mut rng);
        let beta = alpha.mul_int(&BigInt::from(3)).frac();
        let s = SturmianSpec::new(alpha, beta).unwrap();
        let back: SturmianSpec = s.to_string().parse().unwrap();
        prop_assert_eq!(&back, &s);
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<SturmianSpec>(&json).unwrap(), s);
    }
}
