mod support;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use factorbound::common::{common_factors, longest_common_factor_prefix, CommonFactorReport};
use factorbound::sturmian;
use support::{lcf_brute, load_definition, load_sturmian, AUTOMATIC_FIXTURES, STURMIAN_FIXTURES};

const EXAMPLE: [&str; 25] = [
    "", "0", "1", "00", "01", "10", "001", "010", "100", "101", "0010", "0100", "0101", "1001",
    "1010", "00101", "01001", "10010", "10100", "010010", "100101", "101001", "0100101",
    "1010010", "10100101",
];

#[test]
fn thue_morse_and_fibonacci_common_factors() {
    let m = load_definition("thue-morse.mor").to_morphism();
    let report = common_factors(&m, &load_sturmian("fibonacci.sturmian"), 10);
    let all: BTreeSet<Vec<u8>> = report.lengths.values().flatten().cloned().collect();
    let expected: BTreeSet<Vec<u8>> = EXAMPLE.iter().map(|w| w.as_bytes().to_vec()).collect();
    assert_eq!(all, expected);
    assert_eq!(report.longest, 8);
    assert!(report.exhausted);
    assert!(report.lengths[&9].is_empty());
}

#[test]
fn rudin_shapiro_and_fibonacci_frozen() {
    let m = load_definition("rudin-shapiro.mor").to_morphism();
    let report = common_factors(&m, &load_sturmian("fibonacci.sturmian"), 20);
    let counts: Vec<usize> = report.lengths.values().map(BTreeSet::len).collect();
    assert_eq!(counts, [1, 2, 3, 4, 5, 5, 4, 3, 1, 0]);
    assert_eq!(report.lengths[&8], BTreeSet::from([b"00100101".to_vec()]));
    assert!(report.exhausted);
}

type Case = (String, Vec<u8>, Vec<u8>, CommonFactorReport);

fn all_reports() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(compute_reports)
}

fn compute_reports() -> Vec<Case> {
    let mut out = Vec::new();
    for (name, oracle) in AUTOMATIC_FIXTURES {
        let m = load_definition(name).to_morphism();
        for s in STURMIAN_FIXTURES {
            let spec = load_sturmian(s);
            let report = common_factors(&m, &spec, 40);
            let x = oracle(20_000).into_bytes();
            let a = sturmian::prefix(&spec, 20_000);
            out.push((format!("{name} × {s}"), x, a, report));
        }
    }
    out
}

#[test]
fn reports_are_closed_under_subfactors() {
    for (pair, _, _, report) in all_reports() {
        assert!(report.exhausted, "{pair}");
        for (&n, set) in report.lengths.iter().skip(1) {
            for w in set {
                assert!(report.lengths[&(n - 1)].contains(&w[1..]), "{pair}");
                assert!(report.lengths[&(n - 1)].contains(&w[..n - 1]), "{pair}");
            }
        }
    }
}

#[test]
fn certified_length_agrees_with_prefix_scan() {
    for (pair, x, a, report) in all_reports() {
        let found = longest_common_factor_prefix(x, a);
        assert_eq!(found.length, report.longest, "{pair}");
        assert!(report.lengths[&found.length].contains(&found.witness), "{pair}");
        assert_eq!(&x[found.i..found.i + found.length], &a[found.j..found.j + found.length]);
    }
}

#[test]
fn report_json_round_trip() {
    for (_, _, _, report) in all_reports() {
        let json = serde_json::to_string(report).unwrap();
        assert_eq!(&serde_json::from_str::<CommonFactorReport>(&json).unwrap(), report);
    }
}

fn arb_word(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop_oneof![
        prop::collection::vec(prop::sample::select(b"01".to_vec()), 0..max),
        prop::collection::vec(prop::sample::select(b"abc".to_vec()), 0..max),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn suffix_automaton_matches_brute_force(x in arb_word(1000), a in arb_word(1000)) {
        let fast = longest_common_factor_prefix(&x, &a);
        let (len, i, j) = lcf_brute(&x, &a);
        prop_assert_eq!((fast.length, fast.i, fast.j), (len, i, j));
        prop_assert_eq!(&fast.witness[..], &x[i..i + len]);
    }

    #[test]
    fn prefix_scan_is_monotone(x in arb_word(200), a in arb_word(200), cut_x in 0usize..200, cut_a in 0usize..200) {
        let (cx, ca) = (cut_x.min(x.len()), cut_a.min(a.len()));
        let full = longest_common_factor_prefix(&x, &a).length;
        prop_assert!(longest_common_factor_prefix(&x[..cx], &a).length <= full);
        prop_assert!(longest_common_factor_prefix(&x, &a[..ca]).length <= full);
    }
}
